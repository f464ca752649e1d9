import json

import numpy as np
import pytest

from wxsynth.imgcore import save_plane8, save_rgb


def make_pipeline_tree(root, n_items, size=(48, 64), n_calib=3, seed=42):
    """Matched sim/diff/semseg/calib directories for batch-driver tests."""
    rng = np.random.default_rng(seed)
    for name in ("sim", "diff", "semseg", "calib"):
        (root / name).mkdir(parents=True, exist_ok=True)
    h, w = size
    for i in range(n_items):
        stem = f"item{i:03d}"
        save_rgb(root / "sim" / f"{stem}.png", rng.random((h, w, 3)))
        save_rgb(root / "diff" / f"{stem}.png", rng.random((h, w, 3)))
        save_plane8(root / "semseg" / f"{stem}.png", rng.integers(0, 29, (h, w)))
    for i in range(n_calib):
        save_rgb(root / "calib" / f"calib{i}.png", rng.random((h, w, 3)))
    return root


def write_pipeline_config(root, **overrides):
    cfg = {
        "sim_dir": str(root / "sim"),
        "diff_dir": str(root / "diff"),
        "semseg_dir": str(root / "semseg"),
        "calib_dir": str(root / "calib"),
        "out_dir": str(root / "out"),
        "seed": 7,
        "workers": 1,
    }
    cfg.update(overrides)
    path = root / "config.json"
    path.write_text(json.dumps(cfg))
    return path


@pytest.fixture
def pipeline_tree(tmp_path):
    return make_pipeline_tree(tmp_path, n_items=4)
