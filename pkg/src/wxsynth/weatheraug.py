"""Procedural clear -> {fog, rain, snow, night} augmentation recipes.

Each recipe is a fixed sequence of seeded primitives. Every primitive is
the identity at its neutral parameters and keeps samples in [0,1];
(image, condition, seed) fully determines the output bytes.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .imgcore import gaussian_blur, luma
from .seeds import derive_rng

CONDITIONS = ("fog", "rain", "snow", "night")


@dataclass
class AugmentParams:
    condition: str
    seed: int = 0
    overrides: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.condition not in CONDITIONS:
            raise ValueError(
                f"unknown condition {self.condition!r}, expected one of {CONDITIONS}"
            )


# ---------------------------------------------------------------------------
# Primitives

def desaturate(img, fraction):
    """Move each channel toward the pixel's Rec. 709 luma by `fraction`."""
    if not 0.0 <= fraction <= 1.0:
        raise ValueError(f"desaturation fraction must be in [0,1], got {fraction}")
    img = np.asarray(img, dtype=np.float32)
    if fraction == 0.0:
        return img.copy()
    y = luma(img)[:, :, None]
    f = np.float32(fraction)
    return img + f * (y - img)


def channel_scale(img, factors):
    """Channel-wise multiplication, clamped to [0,1]."""
    factors = np.asarray(factors, dtype=np.float32)
    if np.any(factors < 0):
        raise ValueError(f"channel factors must be >= 0, got {factors}")
    img = np.asarray(img, dtype=np.float32)
    return np.clip(img * factors[None, None, :], 0.0, 1.0)


def tone_adjust(img, linear_gain=1.0, gamma=1.0):
    """v' = clamp01(gain*v)**gamma; gamma > 1 darkens."""
    if linear_gain < 0:
        raise ValueError(f"gain must be >= 0, got {linear_gain}")
    if gamma <= 0:
        raise ValueError(f"gamma must be > 0, got {gamma}")
    img = np.asarray(img, dtype=np.float32)
    out = np.clip(img * np.float32(linear_gain), 0.0, 1.0)
    if gamma != 1.0:
        out = out ** np.float32(gamma)
    return out


def gaussian_overlay(
    img,
    count,
    alpha,
    radius_range,
    sharpness=1.0,
    seed=0,
    rng=None,
    color=(1.0, 1.0, 1.0),
    top_fraction=None,
):
    """Composite `count` Gaussian blobs at seeded uniform positions.

    Peak opacity is exactly `alpha`; radii are drawn uniformly from
    radius_range (pixels). `top_fraction` restricts blob centers to the
    top part of the image (night sky darkening). color=white gives fog /
    windshield drops; dark colors darken.
    """
    if count < 0:
        raise ValueError(f"count must be >= 0, got {count}")
    img = np.ascontiguousarray(img, dtype=np.float32)
    if count == 0 or alpha == 0:
        return img.copy()
    if rng is None:
        rng = derive_rng(seed, "blobs")
    height, width = img.shape[:2]
    y_max = height if top_fraction is None else max(1.0, height * top_fraction)
    xs = rng.uniform(0, width, size=count).astype(np.float32)
    ys = rng.uniform(0, y_max, size=count).astype(np.float32)
    radii = rng.uniform(radius_range[0], radius_range[1], size=count).astype(np.float32)
    alphas = np.full(count, alpha, dtype=np.float32)
    out = img.copy()
    kernels.composite_blobs(
        out, xs, ys, radii, alphas,
        np.asarray(color, dtype=np.float32), float(sharpness),
    )
    return np.clip(out, 0.0, 1.0)


def line_streak_overlay(
    img,
    collections=3,
    elements_range=(100, 500),
    alpha_range=(0.2, 0.3),
    slant_deg_range=(-20.0, 20.0),
    length_frac_range=(0.01, 0.03),
    color_range=(0.6, 0.85),
    seed=0,
    rng=None,
):
    """Seeded rain streaks: up to `collections` groups of short lines.

    Each collection shares a slant angle, gray color, and length; element
    positions and opacities vary per line, opacity within alpha_range.
    """
    img = np.ascontiguousarray(img, dtype=np.float32)
    if collections == 0:
        return img.copy()
    if rng is None:
        rng = derive_rng(seed, "streaks")
    height, width = img.shape[:2]
    diag = math.hypot(height, width)
    n_collections = int(rng.integers(1, collections + 1))
    out = img.copy()
    for _ in range(n_collections):
        n = int(rng.integers(elements_range[0], elements_range[1] + 1))
        slant = math.radians(rng.uniform(*slant_deg_range))
        length = rng.uniform(*length_frac_range) * diag
        gray = rng.uniform(*color_range)
        x0 = rng.uniform(0, width, size=n).astype(np.float32)
        y0 = rng.uniform(0, height, size=n).astype(np.float32)
        jitter = rng.uniform(-0.03, 0.03, size=n)
        dx = (np.sin(slant + jitter) * length).astype(np.float32)
        dy = (np.cos(slant + jitter) * length).astype(np.float32)
        alphas = rng.uniform(alpha_range[0], alpha_range[1], size=n).astype(np.float32)
        color = np.full(3, gray, dtype=np.float32)
        kernels.draw_lines(out, x0, y0, x0 + dx, y0 + dy, alphas, color)
    return np.clip(out, 0.0, 1.0)


def glass_blur(img, radius, seed=0, rng=None):
    """Pixel shuffle: each output pixel copies a seeded uniform neighbor.

    Neighborhood is a Chebyshev ball of the given radius, clamped at the
    image border. radius=0 is the identity.
    """
    if radius < 0:
        raise ValueError(f"radius must be >= 0, got {radius}")
    img = np.ascontiguousarray(img, dtype=np.float32)
    if radius == 0:
        return img.copy()
    if rng is None:
        rng = derive_rng(seed, "glass")
    height, width = img.shape[:2]
    dy = rng.integers(-radius, radius + 1, size=(height, width)).astype(np.int64)
    dx = rng.integers(-radius, radius + 1, size=(height, width)).astype(np.int64)
    return kernels.glass_shuffle(img, dy, dx)


def snow_bleach(img, brightness_threshold=0.7, boost=0.5, seed=None):
    """Push pixels brighter than the luma threshold toward white by `boost`."""
    if not 0.0 <= brightness_threshold <= 1.0:
        raise ValueError(f"threshold must be in [0,1], got {brightness_threshold}")
    img = np.asarray(img, dtype=np.float32)
    if boost == 0:
        return img.copy()
    bright = luma(img) > brightness_threshold
    out = img.copy()
    out[bright] += np.float32(boost) * (np.float32(1.0) - out[bright])
    return out


def color_mix(img, matrix):
    """Per-pixel 3x3 linear channel mix, clamped to [0,1]."""
    matrix = np.asarray(matrix, dtype=np.float32)
    if matrix.shape != (3, 3):
        raise ValueError(f"mixing matrix must be 3x3, got {matrix.shape}")
    if not np.all(np.isfinite(matrix)):
        raise ValueError("mixing matrix entries must be finite")
    img = np.asarray(img, dtype=np.float32)
    return np.clip(img @ matrix.T, 0.0, 1.0)


# Night: drop 10% of blue, route half the removed energy to each of R and G
NIGHT_MIX_MATRIX = (
    (1.0, 0.0, 0.05),
    (0.0, 1.0, 0.05),
    (0.0, 0.0, 0.90),
)

IDENTITY_MATRIX = ((1.0, 0.0, 0.0), (0.0, 1.0, 0.0), (0.0, 0.0, 1.0))


# ---------------------------------------------------------------------------
# Recipes

# Linear darkening factors and blur sigmas have no published values and are
# deliberately plain config entries.
_DEFAULTS = {
    "fog": {
        "desaturate": 0.4,
        "channel_factors": (0.8, 0.8, 1.0),
        "blob_count": 2000,
        "blob_alpha": 0.3,
        # at 2000 blobs / alpha 0.3 the total opacity mass saturates the
        # frame unless radii stay around 1% of the diagonal
        "blob_radius_frac": (0.005, 0.015),
        "blob_sharpness": 1.0,
    },
    "rain": {
        "desaturate": 0.6,
        "channel_factors": (0.6, 0.8, 1.0),
        "linear_gain": 0.7,
        "gamma": 1.5,
        "streak_collections": 3,
        "streak_elements": (100, 500),
        "streak_alpha": (0.2, 0.3),
        "drop_count": 300,
        "drop_alpha": 0.25,
        "drop_radius_frac": (0.004, 0.015),
        "drop_sharpness": 3.0,
        "blur_sigma": 1.2,
        "glass_radius": 4,
    },
    "snow": {
        "bleach_threshold": 0.7,
        "bleach_boost": 0.5,
        "flake_count": 400,
        "flake_alpha": 0.6,
        "flake_radius_px": (1.0, 2.0),
        "flake_sharpness": 2.0,
        "desaturate": 0.7,
        "channel_factors": (0.6, 0.6, 1.0),
        "linear_gain": 0.7,
        "gamma": 2.0,
    },
    "night": {
        "sky_blob_count": 600,
        "sky_alpha": 0.3,
        "sky_radius_frac": (0.01, 0.04),
        "sky_top_fraction": 0.5,
        "desaturate": 0.4,
        "mix_matrix": NIGHT_MIX_MATRIX,
        "linear_gain": 0.5,
        "gamma": 2.3,
    },
}


def resolve_params(condition, overrides=None):
    """Default recipe parameters merged with user overrides."""
    if condition not in _DEFAULTS:
        raise ValueError(f"unknown condition {condition!r}")
    params = dict(_DEFAULTS[condition])
    for key, value in (overrides or {}).items():
        if key not in params:
            raise KeyError(f"unknown {condition} parameter {key!r}")
        params[key] = value
    return params


def _diag(img):
    return math.hypot(img.shape[0], img.shape[1])


def _augment_fog(img, p, rng):
    out = desaturate(img, p["desaturate"])
    out = channel_scale(out, p["channel_factors"])
    lo, hi = p["blob_radius_frac"]
    d = _diag(img)
    return gaussian_overlay(
        out, p["blob_count"], p["blob_alpha"], (lo * d, hi * d),
        sharpness=p["blob_sharpness"], rng=rng,
    )


def _augment_rain(img, p, rng):
    out = desaturate(img, p["desaturate"])
    out = channel_scale(out, p["channel_factors"])
    out = tone_adjust(out, linear_gain=p["linear_gain"])
    out = tone_adjust(out, gamma=p["gamma"])
    out = line_streak_overlay(
        out, collections=p["streak_collections"],
        elements_range=p["streak_elements"], alpha_range=p["streak_alpha"],
        rng=rng,
    )
    lo, hi = p["drop_radius_frac"]
    d = _diag(img)
    out = gaussian_overlay(
        out, p["drop_count"], p["drop_alpha"], (lo * d, hi * d),
        sharpness=p["drop_sharpness"], rng=rng,
    )
    out = gaussian_blur(out, p["blur_sigma"])
    return glass_blur(out, p["glass_radius"], rng=rng)


def _augment_snow(img, p, rng):
    out = snow_bleach(img, p["bleach_threshold"], p["bleach_boost"])
    out = gaussian_overlay(
        out, p["flake_count"], p["flake_alpha"], p["flake_radius_px"],
        sharpness=p["flake_sharpness"], rng=rng,
    )
    out = desaturate(out, p["desaturate"])
    out = channel_scale(out, p["channel_factors"])
    out = tone_adjust(out, linear_gain=p["linear_gain"])
    return tone_adjust(out, gamma=p["gamma"])


def _augment_night(img, p, rng):
    lo, hi = p["sky_radius_frac"]
    d = _diag(img)
    out = gaussian_overlay(
        img, p["sky_blob_count"], p["sky_alpha"], (lo * d, hi * d),
        rng=rng, color=(0.0, 0.0, 0.0), top_fraction=p["sky_top_fraction"],
    )
    out = desaturate(out, p["desaturate"])
    out = color_mix(out, p["mix_matrix"])
    out = tone_adjust(out, linear_gain=p["linear_gain"])
    return tone_adjust(out, gamma=p["gamma"])


_RECIPES = {
    "fog": _augment_fog,
    "rain": _augment_rain,
    "snow": _augment_snow,
    "night": _augment_night,
}


def augment(img, params):
    """Run one condition's full primitive sequence with resolved defaults."""
    resolved = resolve_params(params.condition, params.overrides)
    rng = derive_rng(params.seed, params.condition)
    img = np.asarray(img, dtype=np.float32)
    out = _RECIPES[params.condition](img, resolved, rng)
    return np.clip(out, 0.0, 1.0)
