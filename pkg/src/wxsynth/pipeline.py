"""Batch driver: weight map -> color match -> blend -> calibrate per item.

Items are paired by filename stem across the simulator, diffusion, and
semseg directories. Each item derives its own RNG stream from (global
seed, stem), so the output tree is byte-identical for any worker count.
A bad item is reported and skipped; a bad config aborts the run.
"""

import dataclasses
import hashlib
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from . import __version__
from .blend import blend_images, build_weight_map, dither_and_smooth, load_weight_table
from .colormatch import ColorMatchConfig, calibration_match, match_colors
from .imgcore import load_plane, load_rgb, save_rgb
from .seeds import derive_rng

EXIT_OK = 0
EXIT_ITEM_FAILURES = 1
EXIT_CONFIG_ERROR = 2


class ConfigError(Exception):
    pass


@dataclass
class PipelineConfig:
    sim_dir: str
    diff_dir: str
    semseg_dir: str
    out_dir: str
    instance_dir: str = None
    calib_dir: str = None
    weights_path: str = None
    seed: int = 0
    workers: int = 1
    dither_amplitude: float = 0.05
    smooth_sigma: float = 5.0
    gamma: float = 0.5
    color_match: bool = True
    per_instance: bool = True

    @classmethod
    def from_json(cls, path):
        with open(path) as fh:
            doc = json.load(fh)
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(doc) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        missing = {"sim_dir", "diff_dir", "semseg_dir", "out_dir"} - set(doc)
        if missing:
            raise ConfigError(f"missing config keys: {sorted(missing)}")
        return cls(**doc)

    def validate(self):
        if self.workers < 1:
            raise ConfigError(f"worker count must be >= 1, got {self.workers}")
        for name in ("sim_dir", "diff_dir", "semseg_dir"):
            d = getattr(self, name)
            if not Path(d).is_dir():
                raise ConfigError(f"{name} is not a directory: {d}")


def _sha256(path):
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _find_items(cfg):
    """Stems present in the sim dir; diffusion/semseg resolved per stem."""
    return sorted(p.stem for p in Path(cfg.sim_dir).glob("*.png"))


def _require(path, what, stem):
    if not path.exists():
        raise FileNotFoundError(f"missing {what} for item {stem!r}: {path}")
    return path


def _process_item(cfg, table, calib_frames, stem):
    sim_path = _require(Path(cfg.sim_dir) / f"{stem}.png", "sim image", stem)
    diff_path = _require(Path(cfg.diff_dir) / f"{stem}.png", "diffusion image", stem)
    semseg_path = _require(Path(cfg.semseg_dir) / f"{stem}.png", "semseg map", stem)

    sim = load_rgb(sim_path)
    diff = load_rgb(diff_path)
    semseg = load_plane(semseg_path)
    instances = None
    if cfg.instance_dir:
        inst_path = Path(cfg.instance_dir) / f"{stem}.png"
        if inst_path.exists():
            instances = load_plane(inst_path)

    inputs = {
        "sim": {"path": str(sim_path), "sha256": _sha256(sim_path)},
        "diff": {"path": str(diff_path), "sha256": _sha256(diff_path)},
        "semseg": {"path": str(semseg_path), "sha256": _sha256(semseg_path)},
    }

    if cfg.color_match:
        cm_cfg = ColorMatchConfig(
            gamma=cfg.gamma,
            per_instance=cfg.per_instance and instances is not None,
        )
        diff = match_colors(diff, sim, instance_map=instances, cfg=cm_cfg)

    weights = build_weight_map(semseg, table)
    weights = dither_and_smooth(
        weights, cfg.dither_amplitude, cfg.smooth_sigma,
        rng=derive_rng(cfg.seed, stem, "dither"),
    )
    blended = blend_images(sim, diff, weights)

    if calib_frames:
        blended = calibration_match(
            blended, calib_frames,
            rng=derive_rng(cfg.seed, stem, "calibrate"),
            cfg=ColorMatchConfig(gamma=cfg.gamma),
        )

    out_dir = Path(cfg.out_dir)
    out_path = out_dir / f"{stem}.png"
    save_rgb(out_path, blended)
    sidecar = {
        "tool": f"wxsynth {__version__}",
        "item": stem,
        "seed": cfg.seed,
        "params": {
            "dither_amplitude": cfg.dither_amplitude,
            "smooth_sigma": cfg.smooth_sigma,
            "gamma": cfg.gamma,
            "color_match": cfg.color_match,
            "per_instance": cfg.per_instance and instances is not None,
            "calibrated": bool(calib_frames),
        },
        "inputs": inputs,
        "output": {"path": str(out_path), "sha256": _sha256(out_path)},
    }
    (out_dir / f"{stem}.json").write_text(json.dumps(sidecar, indent=2) + "\n")
    return sidecar


def run_pipeline(cfg):
    """Process every paired item; returns (exit_code, report dict)."""
    cfg.validate()
    table = load_weight_table(cfg.weights_path) if cfg.weights_path else None
    calib_frames = []
    if cfg.calib_dir:
        calib_paths = sorted(Path(cfg.calib_dir).glob("*.png"))
        calib_frames = [load_rgb(p) for p in calib_paths]

    out_dir = Path(cfg.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    stems = _find_items(cfg)

    results = {}

    def work(stem):
        try:
            return stem, _process_item(cfg, table, calib_frames, stem), None
        except Exception as exc:  # noqa: BLE001 - fail-soft per item
            return stem, None, f"{type(exc).__name__}: {exc}"

    if cfg.workers == 1:
        outcomes = [work(s) for s in stems]
    else:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            outcomes = list(pool.map(work, stems))

    failures = {}
    for stem, sidecar, error in outcomes:
        if error is None:
            results[stem] = sidecar
        else:
            failures[stem] = error

    report = {
        "items": len(stems),
        "succeeded": sorted(results),
        "failed": {k: failures[k] for k in sorted(failures)},
        "seed": cfg.seed,
    }
    (out_dir / "report.json").write_text(json.dumps(report, indent=2) + "\n")
    return (EXIT_ITEM_FAILURES if failures else EXIT_OK), report
