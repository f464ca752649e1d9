"""Class-weighted pixel-wise blending of a simulator image with a diffusion image.

The blend is a per-pixel convex combination: out = w*diff + (1-w)*sim,
with the weight plane derived from the semantic segmentation, then
dithered and Gaussian-smoothed so region borders do not show seams.
"""

import json

import numpy as np

from .imgcore import gaussian_blur
from .seeds import derive_rng

# Simulator semantic taxonomy (CARLA >= 0.9.14 tag ids) with the default
# per-class diffusion blend weight. Classes the diffusion model renders
# poorly (riders, vehicles, traffic lights) keep most of the simulator
# pixels.
CLASS_NAMES = {
    0: "unlabeled",
    1: "road",
    2: "sidewalk",
    3: "building",
    4: "wall",
    5: "fence",
    6: "pole",
    7: "traffic_light",
    8: "traffic_sign",
    9: "vegetation",
    10: "terrain",
    11: "sky",
    12: "pedestrian",
    13: "rider",
    14: "car",
    15: "truck",
    16: "bus",
    17: "train",
    18: "motorcycle",
    19: "bicycle",
    20: "static",
    21: "dynamic",
    22: "other",
    23: "water",
    24: "road_line",
    25: "ground",
    26: "bridge",
    27: "rail_track",
    28: "guard_rail",
}

_WEIGHT_TIERS = {
    0.9: (
        "unlabeled", "sidewalk", "building", "wall", "fence", "vegetation",
        "terrain", "sky", "static", "other", "water", "ground", "bridge",
        "guard_rail",
    ),
    0.8: ("road",),
    0.7: ("pole", "dynamic", "road_line", "rail_track"),
    0.5: ("traffic_sign",),
    0.3: ("pedestrian", "rider", "motorcycle", "bicycle"),
    0.1: ("traffic_light", "car", "truck", "bus", "train"),
}

_NAME_TO_ID = {name: cid for cid, name in CLASS_NAMES.items()}

DEFAULT_CLASS_WEIGHTS = {
    _NAME_TO_ID[name]: weight
    for weight, names in _WEIGHT_TIERS.items()
    for name in names
}


def load_weight_table(path):
    """Read a {class_id: weight} JSON document."""
    with open(path) as fh:
        raw = json.load(fh)
    table = {int(k): float(v) for k, v in raw.items()}
    for cid, w in table.items():
        if not 0.0 <= w <= 1.0:
            raise ValueError(f"weight for class {cid} out of [0,1]: {w}")
    return table


def build_weight_map(semseg, table=None):
    """Per-pixel weight plane: w(x,y) = table[semseg(x,y)].

    Raises on any class id missing from the table, naming the id.
    """
    if table is None:
        table = DEFAULT_CLASS_WEIGHTS
    semseg = np.asarray(semseg)
    present = np.unique(semseg)
    missing = [int(c) for c in present if int(c) not in table]
    if missing:
        raise KeyError(f"semseg contains class ids missing from weight table: {missing}")
    lut = np.zeros(int(present.max()) + 1, dtype=np.float32)
    for cid in present:
        lut[int(cid)] = table[int(cid)]
    return lut[semseg]


def dither_and_smooth(weights, dither_amplitude=0.05, sigma=5.0, seed=0, rng=None):
    """Add seeded uniform noise in [-a, +a], blur, clamp to [0,1].

    amplitude=0 and sigma=0 return the input unchanged. Deterministic
    given (weights, amplitude, sigma, seed).
    """
    if dither_amplitude < 0:
        raise ValueError(f"dither amplitude must be >= 0, got {dither_amplitude}")
    if sigma < 0:
        raise ValueError(f"sigma must be >= 0, got {sigma}")
    out = np.asarray(weights, dtype=np.float32)
    if dither_amplitude > 0:
        if rng is None:
            rng = derive_rng(seed, "dither")
        noise = rng.uniform(-dither_amplitude, dither_amplitude, size=out.shape)
        out = out + noise.astype(np.float32)
    elif sigma == 0:
        return out.copy()
    out = gaussian_blur(out, sigma)
    return np.clip(out, 0.0, 1.0)


def blend_images(sim, diff, weights):
    """out = w*diff + (1-w)*sim, the weight plane shared across channels."""
    sim = np.asarray(sim, dtype=np.float32)
    diff = np.asarray(diff, dtype=np.float32)
    weights = np.asarray(weights, dtype=np.float32)
    if sim.shape != diff.shape:
        raise ValueError(f"image shape mismatch: {sim.shape} vs {diff.shape}")
    if weights.shape != sim.shape[:2]:
        raise ValueError(
            f"weight map shape {weights.shape} does not match image {sim.shape[:2]}"
        )
    if weights.min() < 0.0 or weights.max() > 1.0:
        raise ValueError("blend weights must lie in [0,1]")
    w = weights[:, :, None]
    return w * diff + (np.float32(1.0) - w) * sim
