import json
import subprocess
import sys

import pytest

from rclustering import load_segmentation
from rclustering.cli import main


def run_cli(*args):
    return main([str(a) for a in args])


def synth_files(tmp_path, seed=7, fmt="csv"):
    feats = tmp_path / f"s{seed}.{fmt}"
    gt = tmp_path / f"s{seed}.gt.json"
    assert run_cli("synth", "--segments", 5, "--dim", 16, "--seed", seed,
                   "--out-format", fmt, feats, gt) == 0
    return feats, gt


def test_synth_writes_files(tmp_path, capsys):
    feats, gt = synth_files(tmp_path)
    assert feats.exists() and gt.exists()
    doc = json.loads(gt.read_text())
    assert doc["source"] == "ground-truth"
    assert doc["config"]["seed"] == 7
    assert "wrote" in capsys.readouterr().out


def test_synth_deterministic_bytes(tmp_path):
    (tmp_path / "a").mkdir()
    (tmp_path / "b").mkdir()
    f1, g1 = synth_files(tmp_path / "a", seed=3)
    f2, g2 = synth_files(tmp_path / "b", seed=3)
    assert f1.read_bytes() == f2.read_bytes()
    assert g1.read_bytes() == g2.read_bytes()


@pytest.mark.parametrize("method,extra", [
    ("adwin", []),
    ("ac", ["--linkage", "average", "--cut", "0.3"]),
    ("rcluster", ["--omega1", "1.0", "--omega2", "0.5"]),
    ("kmeans", ["--kmeans-k", "5"]),
    ("meanshift", ["--bandwidth", "0.6"]),
])
def test_segment_methods(tmp_path, capsys, method, extra):
    feats, _ = synth_files(tmp_path)
    out = tmp_path / f"{method}.seg.json"
    assert run_cli("segment", "--method", method, *extra, feats, out) == 0
    seg = load_segmentation(out)
    assert seg.source == method and seg.num_segments >= 1
    doc = json.loads(out.read_text())
    assert doc["config"]["method"] == method
    assert "segments over" in capsys.readouterr().out


def test_segment_missing_input(tmp_path, capsys):
    code = run_cli("segment", "--method", "adwin", tmp_path / "nope.csv", tmp_path / "out.json")
    assert code == 3
    err = capsys.readouterr().err
    assert err.startswith("error: data:") and "nope.csv" in err and "\n" not in err.strip()


def test_segment_usage_error():
    with pytest.raises(SystemExit) as exc:
        run_cli("segment", "--method", "sorcery", "in.csv", "out.json")
    assert exc.value.code == 2


def test_segment_deterministic_bytes(tmp_path):
    feats, _ = synth_files(tmp_path)
    o1, o2 = tmp_path / "r1.json", tmp_path / "r2.json"
    for out in (o1, o2):
        assert run_cli("segment", "--method", "rcluster", "--seed", 5, feats, out) == 0
    assert o1.read_bytes() == o2.read_bytes()


def test_eval_report(tmp_path, capsys):
    feats, gt = synth_files(tmp_path)
    pred = tmp_path / "pred.json"
    assert run_cli("segment", "--method", "rcluster", feats, pred) == 0
    report_path = tmp_path / "report.json"
    assert run_cli("eval", pred, gt, "--tolerance", 5, "--out", report_path) == 0
    doc = json.loads(report_path.read_text())
    assert set(doc) >= {"tp", "fp", "fn", "precision", "recall", "f_measure", "config"}
    assert 0.0 <= doc["f_measure"] <= 1.0
    capsys.readouterr()


def test_eval_rejects_bad_document(tmp_path, capsys):
    feats, gt = synth_files(tmp_path)
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run_cli("eval", bad, gt) == 3
    capsys.readouterr()


def test_sweep_cli(tmp_path, capsys):
    feats, gt = synth_files(tmp_path)
    out, table = tmp_path / "grid.json", tmp_path / "grid.tsv"
    code = run_cli("sweep", "--method", "ac", "--data", f"{feats},{gt}",
                   "--cut", "0.2:0.6:0.2", "--out", out, "--table", table)
    assert code == 0
    doc = json.loads(out.read_text())
    assert len(doc["cells"]) == 3
    assert doc["best"] is not None
    lines = table.read_text().strip().splitlines()
    assert lines[0].split("\t") == ["cut", "mean", "std", "error"]
    assert len(lines) == 4
    assert "best cell" in capsys.readouterr().out


def test_sweep_cli_deterministic(tmp_path):
    feats, gt = synth_files(tmp_path)
    outs = []
    for name in ("g1.json", "g2.json"):
        out = tmp_path / name
        assert run_cli("sweep", "--method", "rcluster", "--data", f"{feats},{gt}",
                       "--omega2", "0:1:0.5", "--out", out) == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]


def test_energy_trace_output(tmp_path):
    feats, _ = synth_files(tmp_path)
    out, trace = tmp_path / "seg.json", tmp_path / "trace.json"
    assert run_cli("segment", "--method", "rcluster", "--energy-trace", trace, feats, out) == 0
    doc = json.loads(trace.read_text())
    assert {"total_energy", "frames", "edges"} <= set(doc)


def test_binary_io_through_cli(tmp_path):
    feats, gt = synth_files(tmp_path, fmt="binary")
    out = tmp_path / "seg.json"
    assert run_cli("segment", "--method", "adwin", "--format", "binary", feats, out) == 0
    assert load_segmentation(out).source == "adwin"


def test_console_entry_point(tmp_path):
    # the installed script must behave identically to main()
    result = subprocess.run(
        [sys.executable, "-m", "rclustering.cli", "--version"],
        capture_output=True, text=True,
    )
    assert result.returncode == 0
    assert "rclustering" in result.stdout
