"""Command-line entry point.

Subcommands: blend, colormatch, calibrate, augment, auxprep,
sample-weather, manifest, stats, run. Exit codes: 0 success, 1 item
failures, 2 configuration error.
"""

import argparse
import dataclasses
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__, auxprep, datastats, weathercfg
from .blend import blend_images, build_weight_map, dither_and_smooth, load_weight_table
from .colormatch import ColorMatchConfig, calibration_match, match_colors, palette_blend
from .imgcore import load_plane, load_rgb, save_plane8, save_plane16, save_rgb
from .manifest import CONDITION_TAGS, ManifestEntry, build_manifest
from .pipeline import (
    EXIT_CONFIG_ERROR,
    EXIT_OK,
    ConfigError,
    PipelineConfig,
    run_pipeline,
)
from .seeds import derive_rng
from .weatheraug import CONDITIONS, AugmentParams, augment, resolve_params


def _cmd_blend(args):
    table = load_weight_table(args.weights) if args.weights else None
    sim = load_rgb(args.sim)
    diff = load_rgb(args.diff)
    semseg = load_plane(args.semseg)
    weights = build_weight_map(semseg, table)
    weights = dither_and_smooth(weights, args.dither, args.sigma, seed=args.seed)
    save_rgb(args.out, blend_images(sim, diff, weights))
    return EXIT_OK


def _cmd_colormatch(args):
    src = load_rgb(args.src)
    tgt = load_rgb(args.tgt)
    instances = load_plane(args.instances) if args.instances else None
    cfg = ColorMatchConfig(gamma=args.gamma, per_instance=instances is not None)
    save_rgb(args.out, match_colors(src, tgt, instance_map=instances, cfg=cfg))
    return EXIT_OK


def _cmd_calibrate(args):
    frames = [load_rgb(p) for p in sorted(Path(args.calib_dir).glob("*.png"))]
    img = load_rgb(args.input)
    matched = calibration_match(img, frames, seed=args.seed, cfg=ColorMatchConfig(gamma=args.gamma))
    if args.palette_blend:
        matched = palette_blend(img, matched, seed=args.seed)
    save_rgb(args.out, matched)
    return EXIT_OK


def _cmd_augment(args):
    overrides = {}
    if args.params:
        with open(args.params) as fh:
            overrides = json.load(fh)
    img = load_rgb(args.input)
    params = AugmentParams(condition=args.condition, seed=args.seed, overrides=overrides)
    save_rgb(args.out, augment(img, params))
    sidecar = {
        "tool": f"wxsynth {__version__}",
        "condition": args.condition,
        "seed": args.seed,
        "params": resolve_params(args.condition, overrides),
    }
    Path(args.out).with_suffix(".json").write_text(json.dumps(sidecar, indent=2) + "\n")
    return EXIT_OK


def _cmd_auxprep(args):
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    if args.depth:
        depth = auxprep.normalize_depth(load_plane(args.depth).astype(np.float64))
        save_plane16(out_dir / "depth.png", np.rint(depth * 65535.0))
    if args.semseg:
        planes = auxprep.one_hot_semseg(load_plane(args.semseg), args.classes)
        if args.onehot_format == "npy":
            np.save(out_dir / "semseg_onehot.npy", planes)
        else:
            for c in range(planes.shape[0]):
                save_plane8(out_dir / f"semseg_class_{c:02d}.png", planes[c] * 255)
    if args.instances:
        colored = auxprep.colored_instance_map(
            load_plane(args.instances), background=args.background
        )
        save_plane8(out_dir / "instances_colored.png", colored)
    return EXIT_OK


def _cmd_sample_weather(args):
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for i in range(args.count):
        params = weathercfg.sample_weather(args.condition, seed=args.seed, record_index=i)
        path = out_dir / f"{args.condition}_{i:04d}.json"
        path.write_text(weathercfg.emit_config(params))
    return EXIT_OK


def _list_entries(root, origin):
    """Entries from <root>/<condition>/<stem>.png, optional *_labels.png sibling."""
    entries = []
    root = Path(root)
    for condition in CONDITION_TAGS:
        cdir = root / condition
        if not cdir.is_dir():
            continue
        for img in sorted(cdir.glob("*.png")):
            if img.stem.endswith("_labels"):
                continue
            label = img.with_name(f"{img.stem}_labels.png")
            entries.append(
                ManifestEntry(
                    image_path=str(img),
                    label_path=str(label) if label.exists() else "",
                    condition=condition,
                    origin=origin,
                )
            )
    return entries


def _cmd_manifest(args):
    synthetic = _list_entries(args.synthetic_dir, "synthetic")
    real = []
    if args.real_dir:
        real = [
            dataclasses.replace(e, condition="clear", origin="real")
            for e in _list_entries(args.real_dir, "real")
        ]
        if not real:  # flat directory of clear real images
            real = [
                ManifestEntry(str(p), "", "clear", "real")
                for p in sorted(Path(args.real_dir).glob("*.png"))
            ]
    doc = build_manifest(synthetic, real, args.ratio, seed=args.seed,
                         exact_count=args.exact_count)
    Path(args.out).write_text(doc.to_json())
    return EXIT_OK


def _cmd_stats(args):
    annotations = datastats.load_coco_annotations(args.annotations)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    histogram = datastats.size_histogram(annotations)
    datastats.write_size_csv(out_dir / "sizes.csv", histogram)
    datastats.write_category_csv(
        out_dir / "categories.csv", datastats.category_distribution(annotations)
    )
    if args.svg:
        datastats.write_size_svg(out_dir / "sizes.svg", histogram)
    return EXIT_OK


def _cmd_run(args):
    cfg = PipelineConfig.from_json(args.config)
    if args.seed is not None:
        cfg.seed = args.seed
    if args.workers is not None:
        cfg.workers = args.workers
    code, report = run_pipeline(cfg)
    print(f"processed {report['items']} items, {len(report['failed'])} failed")
    return code


def build_parser():
    parser = argparse.ArgumentParser(
        prog="wxsynth",
        description="Deterministic adverse-weather synthetic data toolkit",
    )
    parser.add_argument("--version", action="version", version=f"wxsynth {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("blend", help="class-weighted blend of sim and diffusion images")
    p.add_argument("--sim", required=True)
    p.add_argument("--diff", required=True)
    p.add_argument("--semseg", required=True)
    p.add_argument("--weights", help="JSON {class_id: weight} table")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--sigma", type=float, default=5.0)
    p.add_argument("--dither", type=float, default=0.05)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_blend)

    p = sub.add_parser("colormatch", help="transfer target color statistics onto source")
    p.add_argument("--src", required=True)
    p.add_argument("--tgt", required=True)
    p.add_argument("--instances")
    p.add_argument("--gamma", type=float, default=0.5)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_colormatch)

    p = sub.add_parser("calibrate", help="match toward a random calibration frame")
    p.add_argument("--input", required=True)
    p.add_argument("--calib-dir", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--gamma", type=float, default=0.5)
    p.add_argument("--palette-blend", action="store_true",
                   help="blend a random fraction of the original back in")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_calibrate)

    p = sub.add_parser("augment", help="procedural weather augmentation")
    p.add_argument("--input", required=True)
    p.add_argument("--condition", required=True, choices=CONDITIONS)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--params", help="JSON overrides for recipe parameters")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_augment)

    p = sub.add_parser("auxprep", help="prepare auxiliary network inputs")
    p.add_argument("--depth")
    p.add_argument("--semseg")
    p.add_argument("--instances")
    p.add_argument("--classes", type=int, default=29)
    p.add_argument("--background", type=int, default=0)
    p.add_argument("--onehot-format", choices=("png", "npy"), default="png")
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=_cmd_auxprep)

    p = sub.add_parser("sample-weather", help="sample simulator weather configs")
    p.add_argument("--condition", required=True, choices=weathercfg.WEATHER_CONDITIONS)
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=_cmd_sample_weather)

    p = sub.add_parser("manifest", help="build a mixed training manifest")
    p.add_argument("--synthetic-dir", required=True)
    p.add_argument("--real-dir")
    p.add_argument("--ratio", type=float, default=10.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--exact-count", action="store_true")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_manifest)

    p = sub.add_parser("stats", help="annotation size and category statistics")
    p.add_argument("--annotations", required=True)
    p.add_argument("--by", default="condition", choices=("condition",))
    p.add_argument("--svg", action="store_true")
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=_cmd_stats)

    p = sub.add_parser("run", help="batch pipeline over paired directories")
    p.add_argument("--config", required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("--workers", type=int)
    p.set_defaults(func=_cmd_run)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG_ERROR
    except (ValueError, KeyError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG_ERROR


if __name__ == "__main__":
    sys.exit(main())
