import json

import numpy as np
import pytest

from conftest import write_pipeline_config
from wxsynth.cli import main
from wxsynth.imgcore import load_plane, load_rgb, save_plane8, save_plane16, save_rgb
from wxsynth.manifest import DatasetManifest


def test_run_pipeline(pipeline_tree):
    cfg = write_pipeline_config(pipeline_tree, workers=2)
    assert main(["run", "--config", str(cfg)]) == 0
    out = pipeline_tree / "out"
    assert len(list(out.glob("item*.png"))) == 4
    sidecar = json.loads((out / "item000.json").read_text())
    assert "sha256" in sidecar["output"]
    assert sidecar["inputs"]["sim"]["sha256"]


def test_run_empty_input(tmp_path):
    for name in ("sim", "diff", "semseg"):
        (tmp_path / name).mkdir()
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({
        "sim_dir": str(tmp_path / "sim"), "diff_dir": str(tmp_path / "diff"),
        "semseg_dir": str(tmp_path / "semseg"), "out_dir": str(tmp_path / "out"),
    }))
    assert main(["run", "--config", str(cfg)]) == 0
    report = json.loads((tmp_path / "out" / "report.json").read_text())
    assert report["items"] == 0


def test_run_corrupt_item_fail_soft(pipeline_tree, capsys):
    (pipeline_tree / "sim" / "item001.png").write_bytes(b"not a png")
    cfg = write_pipeline_config(pipeline_tree)
    assert main(["run", "--config", str(cfg)]) == 1
    report = json.loads((pipeline_tree / "out" / "report.json").read_text())
    assert "item001" in report["failed"]
    assert len(report["succeeded"]) == 3


def test_run_bad_config(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"sim_dir": "x"}))
    assert main(["run", "--config", str(cfg)]) == 2
    cfg.write_text(json.dumps({
        "sim_dir": "missing", "diff_dir": "missing", "semseg_dir": "missing",
        "out_dir": str(tmp_path / "out"), "bogus": 1,
    }))
    assert main(["run", "--config", str(cfg)]) == 2


def test_run_determinism_same_config(pipeline_tree):
    cfg = write_pipeline_config(pipeline_tree)
    main(["run", "--config", str(cfg)])
    first = {p.name: p.read_bytes() for p in (pipeline_tree / "out").glob("*.png")}
    main(["run", "--config", str(cfg)])
    second = {p.name: p.read_bytes() for p in (pipeline_tree / "out").glob("*.png")}
    assert first == second


def test_blend_subcommand(pipeline_tree, tmp_path):
    out = tmp_path / "b.png"
    code = main([
        "blend",
        "--sim", str(pipeline_tree / "sim" / "item000.png"),
        "--diff", str(pipeline_tree / "diff" / "item000.png"),
        "--semseg", str(pipeline_tree / "semseg" / "item000.png"),
        "--seed", "3", "--out", str(out),
    ])
    assert code == 0 and out.exists()


def test_colormatch_and_calibrate(pipeline_tree, tmp_path):
    src = str(pipeline_tree / "sim" / "item000.png")
    tgt = str(pipeline_tree / "diff" / "item000.png")
    out = tmp_path / "cm.png"
    assert main(["colormatch", "--src", src, "--tgt", tgt, "--out", str(out)]) == 0
    assert main([
        "calibrate", "--input", str(out),
        "--calib-dir", str(pipeline_tree / "calib"),
        "--seed", "1", "--palette-blend", "--out", str(tmp_path / "cal.png"),
    ]) == 0


def test_augment_subcommand_with_sidecar(pipeline_tree, tmp_path):
    out = tmp_path / "fog.png"
    overrides = tmp_path / "p.json"
    overrides.write_text(json.dumps({"blob_count": 50}))
    code = main([
        "augment", "--input", str(pipeline_tree / "sim" / "item000.png"),
        "--condition", "fog", "--seed", "2",
        "--params", str(overrides), "--out", str(out),
    ])
    assert code == 0
    sidecar = json.loads(out.with_suffix(".json").read_text())
    assert sidecar["params"]["blob_count"] == 50
    assert sidecar["condition"] == "fog"


def test_auxprep_subcommand(tmp_path):
    rng = np.random.default_rng(1)
    save_plane16(tmp_path / "depth.png", rng.integers(100, 60000, (16, 16)))
    save_plane8(tmp_path / "semseg.png", rng.integers(0, 5, (16, 16)))
    inst = np.zeros((16, 16), np.uint8)
    inst[2:6, 2:6] = 1
    inst[2:6, 6:10] = 2
    save_plane8(tmp_path / "inst.png", inst)
    code = main([
        "auxprep", "--depth", str(tmp_path / "depth.png"),
        "--semseg", str(tmp_path / "semseg.png"),
        "--instances", str(tmp_path / "inst.png"),
        "--classes", "5", "--onehot-format", "npy",
        "--out-dir", str(tmp_path / "aux"),
    ])
    assert code == 0
    depth = load_plane(tmp_path / "aux" / "depth.png")
    assert depth.dtype == np.uint16 and depth.min() == 0 and depth.max() == 65535
    planes = np.load(tmp_path / "aux" / "semseg_onehot.npy")
    assert planes.shape == (5, 16, 16)
    colored = load_plane(tmp_path / "aux" / "instances_colored.png")
    assert set(np.unique(colored)) <= {0, 1, 255}


def test_sample_weather_subcommand(tmp_path):
    code = main(["sample-weather", "--condition", "fog", "--count", "3",
                 "--seed", "9", "--out-dir", str(tmp_path / "wx")])
    assert code == 0
    files = sorted((tmp_path / "wx").glob("*.json"))
    assert len(files) == 3
    doc = json.loads(files[0].read_text())
    assert doc["mie_scattering_scale"] == 0.03
    assert 20.0 <= doc["fog_density"] <= 40.0


def test_manifest_subcommand(tmp_path):
    rng = np.random.default_rng(2)
    for cond in ("clear", "fog"):
        (tmp_path / "syn" / cond).mkdir(parents=True)
        for i in range(6):
            save_rgb(tmp_path / "syn" / cond / f"{i}.png", rng.random((4, 4, 3)))
    (tmp_path / "real").mkdir()
    for i in range(3):
        save_rgb(tmp_path / "real" / f"r{i}.png", rng.random((4, 4, 3)))
    out = tmp_path / "manifest.json"
    code = main(["manifest", "--synthetic-dir", str(tmp_path / "syn"),
                 "--real-dir", str(tmp_path / "real"),
                 "--ratio", "100", "--seed", "4", "--out", str(out)])
    assert code == 0
    doc = DatasetManifest.from_json(out.read_text())
    assert len(doc.entries) == 12
    assert all(e.origin == "real" for e in doc.entries if e.condition == "clear")


def test_stats_subcommand(tmp_path):
    doc = {
        "images": [{"id": 1, "condition": "clear"}, {"id": 2, "condition": "fog"}],
        "annotations": [
            {"image_id": 1, "category_id": 1, "area": 100.0},
            {"image_id": 2, "category_id": 2, "area": 5000.0},
        ],
        "categories": [],
    }
    path = tmp_path / "coco.json"
    path.write_text(json.dumps(doc))
    code = main(["stats", "--annotations", str(path), "--out-dir", str(tmp_path / "st")])
    assert code == 0
    assert (tmp_path / "st" / "sizes.csv").exists()
    assert (tmp_path / "st" / "categories.csv").exists()


def test_error_exit_code(tmp_path):
    assert main(["stats", "--annotations", str(tmp_path / "nope.json"),
                 "--out-dir", str(tmp_path)]) == 2
