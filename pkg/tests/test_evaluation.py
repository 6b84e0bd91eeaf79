import numpy as np
import pytest

from rclustering import (
    DataError,
    Segmentation,
    SynthSpec,
    evaluate,
    f_measure,
    generate_synthetic,
    match_boundaries,
    sweep,
)


def seg(bounds, T, source="ac"):
    return Segmentation(tuple(bounds), T, source)


def test_match_identity():
    gt = seg([0, 10, 20, 30], 40, "ground-truth")
    assert match_boundaries(gt, gt, 5) == (3, 0, 0)


def test_match_hand_example():
    gt = seg([0, 10, 20], 40, "ground-truth")
    pred = seg([0, 11, 20, 35], 40)
    assert match_boundaries(pred, gt, 2) == (2, 1, 0)


def test_match_empty_prediction():
    gt = seg([0, 5, 10, 15], 20, "ground-truth")
    assert match_boundaries(seg([0], 20), gt, 5) == (0, 0, 3)


def test_match_one_to_one():
    # two predictions near one truth: only one may claim it
    gt = seg([0, 10], 30, "ground-truth")
    pred = seg([0, 9, 11], 30)
    assert match_boundaries(pred, gt, 2) == (1, 1, 0)


def test_match_length_mismatch():
    with pytest.raises(DataError):
        match_boundaries(seg([0], 5), seg([0], 6, "ground-truth"), 2)


def test_match_symmetry_property():
    rng = np.random.default_rng(0)
    for _ in range(200):
        T = int(rng.integers(10, 80))
        def random_seg(source):
            k = int(rng.integers(0, min(T - 1, 8)))
            inner = sorted(rng.choice(np.arange(1, T), size=k, replace=False).tolist())
            return seg([0, *inner], T, source)
        a = random_seg("ac")
        b = random_seg("ground-truth")
        tol = int(rng.integers(0, 6))
        tp1, fp1, fn1 = match_boundaries(a, b, tol)
        tp2, fp2, fn2 = match_boundaries(b, a, tol)
        assert (tp1, fp1, fn1) == (tp2, fn2, fp2)


def test_match_tolerance_monotonicity():
    rng = np.random.default_rng(1)
    for _ in range(100):
        T = int(rng.integers(10, 60))
        inner = sorted(rng.choice(np.arange(1, T), size=int(rng.integers(1, 6)), replace=False).tolist())
        pred_inner = sorted(rng.choice(np.arange(1, T), size=int(rng.integers(1, 6)), replace=False).tolist())
        gt = seg([0, *inner], T, "ground-truth")
        pred = seg([0, *pred_inner], T)
        tps = [match_boundaries(pred, gt, tol)[0] for tol in range(0, 10)]
        assert all(a <= b for a, b in zip(tps, tps[1:]))


def test_f_measure_examples():
    assert f_measure(2, 1, 0) == pytest.approx((2 / 3, 1.0, 0.8))
    assert f_measure(5, 0, 0) == (1.0, 1.0, 1.0)
    assert f_measure(0, 3, 2) == (0.0, 0.0, 0.0)
    assert f_measure(0, 0, 0) == (0.0, 0.0, 0.0)
    with pytest.raises(DataError):
        f_measure(-1, 0, 0)


def test_fm_one_iff_exact():
    gt = seg([0, 10, 20], 30, "ground-truth")
    assert evaluate(seg([0, 11, 19], 30), gt, 2).f_measure == 1.0
    assert evaluate(seg([0, 11, 19, 25], 30), gt, 2).f_measure < 1.0
    assert evaluate(seg([0, 11], 30), gt, 2).f_measure < 1.0


def test_generate_synthetic_single_segment():
    stream, gt = generate_synthetic(SynthSpec(num_segments=1, min_len=10, max_len=20, dim=4, seed=3))
    assert gt.boundaries == (0,)
    assert 10 <= len(stream) <= 20


def test_generate_synthetic_deterministic():
    spec = SynthSpec(seed=11)
    s1, g1 = generate_synthetic(spec)
    s2, g2 = generate_synthetic(spec)
    assert np.array_equal(s1.values, s2.values)
    assert g1 == g2


def test_generate_synthetic_structure():
    spec = SynthSpec(num_segments=4, min_len=50, max_len=60, dim=8, separation=3.0, sigma=0.05, seed=5)
    stream, gt = generate_synthetic(spec)
    assert gt.num_segments == 4
    assert spec.separation_sigma_ratio == pytest.approx(60.0)
    assert spec.step_norm == pytest.approx(3.0 * np.sqrt(8))
    # with tiny noise, consecutive segment-mean gaps recover the step norm
    spans = gt.segments()
    means = [stream.values[s : e + 1].mean(axis=0) for s, e in spans]
    for a, b in zip(means, means[1:]):
        assert np.linalg.norm(a - b) == pytest.approx(spec.step_norm, rel=0.02)


def test_generate_synthetic_one_dimensional():
    stream, gt = generate_synthetic(SynthSpec(num_segments=3, min_len=10, max_len=15, dim=1,
                                              separation=2.0, sigma=0.01, seed=2))
    spans = gt.segments()
    means = [float(stream.values[s : e + 1].mean()) for s, e in spans]
    for a, b in zip(means, means[1:]):
        assert abs(a - b) == pytest.approx(2.0, abs=0.05)


def test_synth_spec_validation():
    with pytest.raises(DataError):
        SynthSpec(num_segments=0)
    with pytest.raises(DataError):
        SynthSpec(min_len=20, max_len=10)
    with pytest.raises(DataError):
        SynthSpec(sigma=0.0)


def test_sweep_single_cell_equals_direct():
    stream, gt = generate_synthetic(SynthSpec(num_segments=3, min_len=20, max_len=30, dim=6, seed=7))
    grid = sweep([(stream, gt)], "ac", {"cut": [0.3]}, tolerance=5)
    from rclustering import run_method

    direct = evaluate(run_method(stream, "ac", {"cut": 0.3}), gt, 5).f_measure
    assert len(grid.cells) == 1
    assert grid.cells[0]["mean"] == pytest.approx(direct, abs=1e-12)


def test_sweep_mean_identity_and_best():
    datasets = [generate_synthetic(SynthSpec(seed=s)) for s in range(3)]
    grid = sweep(datasets, "ac", {"cut": [0.2, 0.4, 0.6]}, tolerance=5)
    for cell in grid.cells:
        assert cell["error"] is None
        assert cell["mean"] == pytest.approx(float(np.mean(cell["per_dataset"])), abs=1e-12)
    best = grid.best_cell()
    assert best["mean"] == max(c["mean"] for c in grid.cells)


def test_sweep_invalid_cell_does_not_abort():
    stream, gt = generate_synthetic(SynthSpec(num_segments=2, min_len=15, max_len=20, dim=4, seed=9))
    grid = sweep([(stream, gt)], "kmeans", {"kmeans_k": [2, 0]}, tolerance=5)
    assert grid.cells[0]["error"] is None
    assert grid.cells[1]["error"] is not None
    assert grid.best_cell()["params"]["kmeans_k"] == 2


def test_sweep_smoothing_helps(tmp_path):
    # over-segmenting fine cut: per-frame assignment fragments, smoothing
    # repairs it, so the omega2=0.5 cell must win the grid strictly
    datasets = [generate_synthetic(SynthSpec(seed=s)) for s in range(3)]
    grid = sweep(datasets, "rcluster", {"omega1": [0.0, 1.0], "omega2": [0.0, 0.5]},
                 base_params={"cut": 0.2}, tolerance=5)
    assert all(c["error"] is None for c in grid.cells)
    best = grid.best_cell()
    assert best["params"]["omega2"] == 0.5
    assert best["params"]["omega1"] == 1.0
    grid.write_json(tmp_path / "grid.json")
    grid.write_table(tmp_path / "grid.tsv")
    assert (tmp_path / "grid.json").exists() and (tmp_path / "grid.tsv").exists()


def test_sweep_validation():
    stream, gt = generate_synthetic(SynthSpec(seed=1))
    with pytest.raises(DataError):
        sweep([], "ac", {"cut": [0.1]})
    with pytest.raises(DataError):
        sweep([(stream, gt)], "ac", {})
