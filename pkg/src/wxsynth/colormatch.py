"""Statistics-based color transfer in Lab space.

The core transform maps each channel as
    v' = (sigma_t / sigma_s)**gamma * (v - mu_s) + mu_t
so the region mean lands exactly on the target mean and the standard
deviation on sigma_s**(1-gamma) * sigma_t**gamma. Out-of-range values are
brought back by an affine rescale that keeps mu_t fixed and preserves
ordering. Transfer is applied globally first, then optionally per object
instance.
"""

from dataclasses import dataclass, field

import numpy as np

from .imgcore import lab_to_rgb, rgb_to_lab
from .seeds import derive_rng

# Valid channel ranges for L, a, b
LAB_RANGES = ((0.0, 100.0), (-128.0, 127.0), (-128.0, 127.0))


@dataclass
class ChannelStats:
    mu: np.ndarray        # per-channel mean
    sigma: np.ndarray     # per-channel population std
    pixel_count: int


@dataclass
class ColorMatchConfig:
    gamma: float = 0.5
    per_instance: bool = False
    instance_background: int = 0
    w_orig_range: tuple = (0.0, 0.5)

    def __post_init__(self):
        if self.gamma <= 0:
            raise ValueError(f"gamma must be > 0, got {self.gamma}")
        lo, hi = self.w_orig_range
        if not (0.0 <= lo <= hi <= 1.0):
            raise ValueError(f"w_orig_range must be within [0,1]: {self.w_orig_range}")


def compute_stats(lab, mask=None):
    """Population mean/std per Lab channel over the (masked) region."""
    lab = np.asarray(lab, dtype=np.float64)
    pixels = lab.reshape(-1, lab.shape[-1])
    if mask is not None:
        pixels = pixels[np.asarray(mask).reshape(-1)]
    if pixels.shape[0] == 0:
        raise ValueError("cannot compute channel stats over an empty region")
    return ChannelStats(
        mu=pixels.mean(axis=0),
        sigma=pixels.std(axis=0),
        pixel_count=pixels.shape[0],
    )


def reinhard_transfer(lab, src_stats, tgt_stats, gamma=0.5, mask=None):
    """Apply the attenuated statistics transfer per channel, pre-clamp.

    A channel with sigma_s == 0 degenerates to a pure mean shift (the
    matched-variance limit of the transform).
    """
    lab = np.asarray(lab, dtype=np.float64)
    out = lab.copy()
    region = out if mask is None else out[np.asarray(mask)]
    for c in range(lab.shape[-1]):
        mu_s = src_stats.mu[c]
        mu_t = tgt_stats.mu[c]
        sigma_s = src_stats.sigma[c]
        sigma_t = tgt_stats.sigma[c]
        if sigma_s == 0.0:
            region[..., c] = region[..., c] - mu_s + mu_t
        else:
            scale = (sigma_t / sigma_s) ** gamma
            region[..., c] = scale * (region[..., c] - mu_s) + mu_t
    if mask is not None:
        out[np.asarray(mask)] = region
    return out


def clamp_preserving_anchor(values, mu_t, lo, hi):
    """Bring values into [lo, hi] by affine rescales anchored at mu_t.

    If any value exceeds hi, all values above mu_t are mapped affinely so
    mu_t stays put and the maximum lands on hi; symmetrically below mu_t
    against lo. The non-overflowing side is untouched, so the result is
    monotone with mu_t a fixed point.
    """
    values = np.asarray(values, dtype=np.float64)
    out = values.copy()
    vmax = out.max()
    if vmax > hi and vmax > mu_t:
        above = out > mu_t
        out[above] = mu_t + (out[above] - mu_t) * (hi - mu_t) / (vmax - mu_t)
    vmin = out.min()
    if vmin < lo and vmin < mu_t:
        below = out < mu_t
        out[below] = mu_t + (out[below] - mu_t) * (mu_t - lo) / (mu_t - vmin)
    return out


def _transfer_and_clamp(lab, src_stats, tgt_stats, gamma, mask=None):
    out = reinhard_transfer(lab, src_stats, tgt_stats, gamma, mask=mask)
    region_mask = np.ones(out.shape[:-1], dtype=bool) if mask is None else np.asarray(mask)
    for c, (lo, hi) in enumerate(LAB_RANGES):
        channel = out[..., c]
        channel[region_mask] = clamp_preserving_anchor(
            channel[region_mask], tgt_stats.mu[c], lo, hi
        )
    return out


def match_colors(src, tgt, instance_map=None, cfg=None):
    """Transfer tgt's Lab statistics onto src, globally then per instance.

    Per-instance passes use the same instance's pixels in src and tgt to
    compute the statistics (the images are assumed spatially aligned).
    """
    cfg = cfg or ColorMatchConfig()
    src = np.asarray(src)
    tgt = np.asarray(tgt)
    if src.shape != tgt.shape:
        raise ValueError(f"image shape mismatch: {src.shape} vs {tgt.shape}")
    if instance_map is not None and np.asarray(instance_map).shape != src.shape[:2]:
        raise ValueError("instance map does not match image dimensions")

    src_lab = rgb_to_lab(src)
    tgt_lab = rgb_to_lab(tgt)
    out = _transfer_and_clamp(
        src_lab, compute_stats(src_lab), compute_stats(tgt_lab), cfg.gamma
    )
    if cfg.per_instance and instance_map is not None:
        instance_map = np.asarray(instance_map)
        for inst_id in np.unique(instance_map):
            if inst_id == cfg.instance_background:
                continue
            mask = instance_map == inst_id
            out = _transfer_and_clamp(
                out,
                compute_stats(out, mask),
                compute_stats(tgt_lab, mask),
                cfg.gamma,
                mask=mask,
            )
    return lab_to_rgb(out)


def calibration_match(img, calibration_set, seed=0, rng=None, cfg=None):
    """Match img toward one uniformly chosen calibration frame (global only)."""
    if len(calibration_set) == 0:
        raise ValueError("calibration set is empty")
    if rng is None:
        rng = derive_rng(seed, "calibrate")
    cfg = cfg or ColorMatchConfig()
    idx = int(rng.integers(0, len(calibration_set)))
    frame = calibration_set[idx]
    global_cfg = ColorMatchConfig(gamma=cfg.gamma, per_instance=False)
    return match_colors(img, frame, cfg=global_cfg)


def sample_orig_weight(rng, w_orig_range=(0.0, 0.5)):
    """Draw the retained-original weight for the secondary palette blend."""
    lo, hi = w_orig_range
    return float(rng.uniform(lo, hi))


def palette_blend(orig, matched, seed=0, rng=None, w_orig=None, cfg=None):
    """out = w_orig*orig + (1-w_orig)*matched with w_orig ~ U[0, 0.5].

    The weight is drawn once per image from the seeded stream unless
    given explicitly.
    """
    orig = np.asarray(orig, dtype=np.float32)
    matched = np.asarray(matched, dtype=np.float32)
    if orig.shape != matched.shape:
        raise ValueError(f"image shape mismatch: {orig.shape} vs {matched.shape}")
    if w_orig is None:
        if rng is None:
            rng = derive_rng(seed, "palette")
        cfg = cfg or ColorMatchConfig()
        w_orig = sample_orig_weight(rng, cfg.w_orig_range)
    w = np.float32(w_orig)
    return w * orig + (np.float32(1.0) - w) * matched
