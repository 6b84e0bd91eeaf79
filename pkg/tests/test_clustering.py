import numpy as np
import pytest

from rclustering import (
    AcConfig,
    BaselineConfig,
    DataError,
    cosine_distance_matrix,
    cut_dendrogram,
    kmeans,
    labels_to_segments,
    linkage,
    meanshift,
)
from rclustering.clustering import MONOTONE_METHODS, LINKAGES
from oracles import best_two_partition_sse, kmeans_sse, meanshift_reference, naive_linkage

ALL_LINKAGES = sorted(LINKAGES)


def test_cosine_distance_examples():
    d = cosine_distance_matrix(np.array([[1.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0]]))
    assert d[0, 1] == pytest.approx(0.0, abs=1e-12)
    assert d[0, 2] == pytest.approx(1.0, abs=1e-12)
    assert d[0, 3] == pytest.approx(1.0 - 0.70710678, abs=1e-8)
    assert np.allclose(d, d.T) and np.allclose(np.diag(d), 0.0)


def test_cosine_distance_zero_row():
    with pytest.raises(DataError, match="frame 1"):
        cosine_distance_matrix(np.array([[1.0, 0.0], [0.0, 0.0]]))


def test_linkage_three_points_single():
    X = np.array([[0.0], [1.0], [10.0]])
    dendro = linkage(X, AcConfig(linkage="single", metric="euclidean"))
    (a0, b0, h0, s0), (a1, b1, h1, s1) = dendro.merges
    assert (a0, b0, s0) == (0, 1, 2) and h0 == pytest.approx(1.0, abs=1e-12)
    assert (a1, b1, s1) == (2, 3, 3) and h1 == pytest.approx(9.0, abs=1e-12)


def test_linkage_two_frames_all_methods():
    X = np.array([[1.0, 0.0], [0.0, 1.0]])
    for method in ALL_LINKAGES:
        for metric in ("cosine", "euclidean"):
            dendro = linkage(X, AcConfig(linkage=method, metric=metric))
            assert len(dendro.merges) == 1
            a, b, h, size = dendro.merges[0]
            assert (a, b, size) == (0, 1, 2)
            if method in ("centroid", "median", "ward") or metric == "euclidean":
                expected = np.sqrt(2.0)  # unit-norm points either way
            else:
                expected = 1.0  # orthogonal cosine distance
            assert h == pytest.approx(expected, abs=1e-12)


def test_linkage_matches_naive_oracle():
    rng = np.random.default_rng(0)
    X = rng.normal(size=(30, 6))
    for method in ALL_LINKAGES:
        for metric in ("cosine", "euclidean"):
            dendro = linkage(X, AcConfig(linkage=method, metric=metric))
            expected = naive_linkage(X, method, metric)
            assert len(dendro.merges) == len(expected)
            for got, want in zip(dendro.merges, expected):
                assert got[0] == want[0] and got[1] == want[1], (method, metric)
                assert got[2] == pytest.approx(want[2], abs=1e-9), (method, metric)
                assert got[3] == want[3]


def test_linkage_monotone_heights():
    rng = np.random.default_rng(1)
    X = rng.normal(size=(25, 4))
    for method in MONOTONE_METHODS:
        heights = [m[2] for m in linkage(X, AcConfig(linkage=method)).merges]
        assert all(a <= b + 1e-12 for a, b in zip(heights, heights[1:]))


def test_cut_dendrogram_examples():
    X = np.array([[0.0], [1.0], [10.0]])
    dendro = linkage(X, AcConfig(linkage="single", metric="euclidean"))
    assert np.array_equal(cut_dendrogram(dendro, 0.0), [0, 1, 2])
    assert np.array_equal(cut_dendrogram(dendro, 9.0), [0, 0, 0])
    assert np.array_equal(cut_dendrogram(dendro, 5.0), [0, 0, 1])


def test_cut_monotonicity():
    rng = np.random.default_rng(2)
    X = rng.normal(size=(20, 3))
    for method in ALL_LINKAGES:
        dendro = linkage(X, AcConfig(linkage=method, metric="euclidean"))
        top = max(m[2] for m in dendro.merges)
        counts = [
            len(np.unique(cut_dendrogram(dendro, c)))
            for c in np.linspace(0.0, top * 1.05, 12)
        ]
        assert all(a >= b for a, b in zip(counts, counts[1:])), method


def test_labels_to_segments_examples():
    assert labels_to_segments([0, 0, 1, 1, 0]).boundaries == (0, 2, 4)
    assert labels_to_segments([0, 0, 0]).boundaries == (0,)
    assert labels_to_segments([0, 1, 0, 1]).boundaries == (0, 1, 2, 3)


def test_kmeans_single_cluster():
    rng = np.random.default_rng(3)
    labels = kmeans(rng.normal(size=(12, 2)), BaselineConfig(kmeans_k=1))
    assert np.all(labels == 0)


def test_kmeans_two_blobs_exact():
    rng = np.random.default_rng(4)
    X = np.vstack([
        np.zeros((6, 2)) + rng.normal(size=(6, 2)) * 0.1,
        np.full((6, 2), 10.0) + rng.normal(size=(6, 2)) * 0.1,
    ])
    labels = kmeans(X, BaselineConfig(kmeans_k=2, kmeans_seed=0))
    assert len(set(labels[:6])) == 1 and len(set(labels[6:])) == 1
    assert labels[0] != labels[6]
    assert kmeans_sse(X, labels) == pytest.approx(best_two_partition_sse(X), abs=1e-9)


def test_kmeans_deterministic():
    rng = np.random.default_rng(5)
    X = rng.normal(size=(40, 3))
    cfg = BaselineConfig(kmeans_k=4, kmeans_seed=9)
    assert np.array_equal(kmeans(X, cfg), kmeans(X, cfg))


def test_kmeans_k_validation():
    X = np.zeros((3, 2))
    with pytest.raises(DataError):
        kmeans(X, BaselineConfig(kmeans_k=4))
    with pytest.raises(DataError):
        kmeans(X, BaselineConfig(kmeans_k=None))


def test_meanshift_single_blob():
    rng = np.random.default_rng(6)
    X = rng.normal(size=(15, 2)) * 0.1
    labels = meanshift(X, BaselineConfig(meanshift_bandwidth=5.0))
    assert len(set(labels.tolist())) == 1


def test_meanshift_two_blobs_matches_reference():
    rng = np.random.default_rng(7)
    X = np.vstack([rng.normal(size=(5, 2)) * 0.2, rng.normal(size=(5, 2)) * 0.2 + 20.0])
    labels = meanshift(X, BaselineConfig(meanshift_bandwidth=1.0))
    expected = meanshift_reference(X, 1.0)
    assert np.array_equal(labels, expected)
    assert len(set(labels.tolist())) == 2


def test_meanshift_bandwidth_validation():
    with pytest.raises(DataError):
        meanshift(np.zeros((3, 2)), BaselineConfig(meanshift_bandwidth=0.0))


def test_ac_config_validation():
    with pytest.raises(DataError):
        AcConfig(linkage="magic")
    with pytest.raises(DataError):
        AcConfig(metric="manhattan")
    with pytest.raises(DataError):
        AcConfig(cut=-1.0)
