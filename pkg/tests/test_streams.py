import numpy as np
import pytest

from rclustering import (
    DataError,
    FeatureStream,
    Segmentation,
    boundaries_to_labels,
    labels_to_boundaries,
    load_features,
    load_segmentation,
    save_features,
    write_segmentation,
)


def test_csv_parse_basic(tmp_path):
    p = tmp_path / "f.csv"
    p.write_text("1,0\n0,1\n1,1\n")
    stream = load_features(p, "csv")
    assert len(stream) == 3 and stream.dim == 2
    assert np.array_equal(stream.values, [[1, 0], [0, 1], [1, 1]])


def test_binary_round_trip_bit_for_bit(tmp_path):
    p = tmp_path / "f.csv"
    p.write_text("1,0\n0,1\n1,1\n")
    stream = load_features(p, "csv")
    b = tmp_path / "f.bin"
    save_features(stream, b, format="binary")
    again = load_features(b, "auto")
    assert again.values.tobytes() == stream.values.tobytes()


def test_binary_round_trip_random(tmp_path):
    rng = np.random.default_rng(3)
    stream = FeatureStream(rng.normal(size=(17, 5)).astype(np.float32).astype(np.float64))
    b = tmp_path / "r.bin"
    save_features(stream, b, format="binary")
    again = load_features(b, "binary")
    assert again.values.tobytes() == stream.values.tobytes()


def test_binary_non_finite_error(tmp_path):
    import struct

    p = tmp_path / "bad.bin"
    payload = struct.pack("<4sIQQ", b"FSTR", 1, 2, 2)
    payload += np.array([[1.0, 2.0], [np.inf, 4.0]], dtype="<f4").tobytes()
    p.write_bytes(payload)
    with pytest.raises(DataError, match=r"row 2, col 1"):
        load_features(p, "binary")


def test_csv_ragged_row_error(tmp_path):
    p = tmp_path / "bad.csv"
    p.write_text("1,2\n1,2,3\n")
    with pytest.raises(DataError, match="row 2"):
        load_features(p, "csv")


def test_csv_non_finite_error(tmp_path):
    p = tmp_path / "bad.csv"
    p.write_text("1,2\n1,nan\n")
    with pytest.raises(DataError, match=r"row 2, col 2"):
        load_features(p, "csv")


def test_empty_file_error(tmp_path):
    p = tmp_path / "empty.csv"
    p.write_text("")
    with pytest.raises(DataError, match="empty"):
        load_features(p)


def test_missing_file_error(tmp_path):
    with pytest.raises(DataError, match="missing.csv"):
        load_features(tmp_path / "missing.csv")


def test_csv_header_and_ids(tmp_path):
    p = tmp_path / "f.csv"
    p.write_text("frame,a,b\nimg1,1,2\nimg2,3,4\n")
    stream = load_features(p, "csv", header=True, ids=True)
    assert stream.frame_ids == ("img1", "img2")
    assert np.array_equal(stream.values, [[1, 2], [3, 4]])


def test_csv_save_load_round_trip(tmp_path):
    rng = np.random.default_rng(7)
    stream = FeatureStream(rng.normal(size=(9, 3)))
    p = tmp_path / "f.csv"
    save_features(stream, p, format="csv", header=True, ids=True)
    again = load_features(p, "csv", header=True, ids=True)
    assert np.array_equal(again.values, stream.values)
    assert again.frame_ids == stream.frame_ids


def test_synthetic_frame_ids():
    stream = FeatureStream(np.zeros((3, 2)))
    assert stream.frame_ids == ("f000000", "f000001", "f000002")


def test_stream_validation():
    with pytest.raises(DataError):
        FeatureStream(np.empty((0, 3)))
    with pytest.raises(DataError, match="non-finite"):
        FeatureStream([[1.0, np.inf]])
    stream = FeatureStream([1.0, 2.0, 3.0])  # 1-d promotes to a column
    assert stream.dim == 1 and len(stream) == 3
    with pytest.raises(ValueError):
        stream.values[0, 0] = 5.0  # locked read-only


def test_segmentation_invariants():
    seg = Segmentation((0, 2, 4), 6, "ac")
    assert seg.num_segments == 3
    assert seg.segments() == [(0, 1), (2, 3), (4, 5)]
    assert np.array_equal(seg.labels(), [0, 0, 1, 1, 2, 2])
    with pytest.raises(DataError):
        Segmentation((1, 2), 5, "ac")  # missing 0
    with pytest.raises(DataError):
        Segmentation((0, 3, 3), 5, "ac")  # not strictly increasing
    with pytest.raises(DataError):
        Segmentation((0, 7), 5, "ac")  # out of range


def test_write_single_segment(tmp_path):
    import json

    p = tmp_path / "s.json"
    write_segmentation(Segmentation((0,), 5, "adwin"), p)
    doc = json.loads(p.read_text())
    assert doc["segments"] == [{"start": 0, "end": 4}]


def test_write_two_segments(tmp_path):
    import json

    p = tmp_path / "s.json"
    write_segmentation(Segmentation((0, 2), 4, "ac"), p)
    doc = json.loads(p.read_text())
    assert doc["segments"] == [{"start": 0, "end": 1}, {"start": 2, "end": 3}]


def test_segmentation_round_trip(tmp_path):
    rng = np.random.default_rng(11)
    for _ in range(20):
        T = int(rng.integers(1, 40))
        bounds = (0, *sorted(rng.choice(np.arange(1, T), size=rng.integers(0, T), replace=False).tolist()))
        seg = Segmentation(tuple(bounds), T, "rcluster")
        p = tmp_path / "round.json"
        write_segmentation(seg, p, config={"seed": 1})
        assert load_segmentation(p) == seg


def test_load_segmentation_errors(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{"version":1,"source":"ac","num_frames":6,"segments":[{"start":0,"end":3},{"start":2,"end":5}]}')
    with pytest.raises(DataError, match="overlap"):
        load_segmentation(p)
    p.write_text('{"version":1,"source":"ac","num_frames":6,"segments":[{"start":0,"end":1},{"start":4,"end":5}]}')
    with pytest.raises(DataError, match="gap"):
        load_segmentation(p)
    p.write_text('{"version":1,"source":"ac","num_frames":6,"segments":[{"start":1,"end":5}]}')
    with pytest.raises(DataError, match="start at 0"):
        load_segmentation(p)
    p.write_text('{"version":1,"source":"ac","num_frames":9,"segments":[{"start":0,"end":5}]}')
    with pytest.raises(DataError, match="num_frames"):
        load_segmentation(p)


def test_labels_boundaries_round_trip():
    rng = np.random.default_rng(5)
    for _ in range(50):
        T = int(rng.integers(1, 60))
        k = int(rng.integers(0, T))
        bounds = (0, *sorted(rng.choice(np.arange(1, T), size=k, replace=False).tolist()))
        assert labels_to_boundaries(boundaries_to_labels(bounds, T)) == tuple(bounds)
