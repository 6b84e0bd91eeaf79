"""Agglomerative clustering with seven linkage variants, plus baselines.

The agglomeration itself runs as a Lance-Williams update loop in the kernel
backend. Cosine distance is the default metric; ward, centroid and median
linkages are only defined on squared euclidean geometry, so when cosine is
requested for those the vectors are l2-normalized and euclidean distances
are used instead (a monotone-equivalent substitute on the unit sphere).
Heights for those three methods are reported on the euclidean scale.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import DataError
from .preprocess import l2_normalize_rows
from .streams import FeatureStream, Segmentation, labels_to_boundaries

LINKAGES = {
    "single": _kernels.SINGLE,
    "complete": _kernels.COMPLETE,
    "average": _kernels.AVERAGE,
    "weighted": _kernels.WEIGHTED,
    "centroid": _kernels.CENTROID,
    "median": _kernels.MEDIAN,
    "ward": _kernels.WARD,
}
SQUARED_METHODS = ("centroid", "median", "ward")
MONOTONE_METHODS = ("single", "complete", "average", "weighted")
METRICS = ("cosine", "euclidean")


@dataclass(frozen=True)
class AcConfig:
    linkage: str = "average"
    metric: str = "cosine"
    cut: float = 0.5

    def __post_init__(self):
        if self.linkage not in LINKAGES:
            raise DataError(f"unknown linkage {self.linkage!r}, choose from {sorted(LINKAGES)}")
        if self.metric not in METRICS:
            raise DataError(f"unknown metric {self.metric!r}, choose from {METRICS}")
        if self.cut < 0:
            raise DataError(f"cut must be >= 0, got {self.cut}")


@dataclass(frozen=True)
class BaselineConfig:
    kmeans_k: int | None = None
    kmeans_seed: int = 0
    meanshift_bandwidth: float | None = None


@dataclass(frozen=True)
class Dendrogram:
    """Merge list of (cluster_a, cluster_b, height, new_size), length T-1.

    Leaves are numbered 0..T-1 by frame; merge s creates cluster T+s.
    Heights are non-decreasing for the monotone linkages (single, complete,
    average, weighted); centroid and median can show inversions.
    """

    merges: tuple[tuple[int, int, float, int], ...]
    num_leaves: int
    linkage: str


def _values(X) -> np.ndarray:
    return X.values if isinstance(X, FeatureStream) else np.atleast_2d(np.asarray(X, dtype=np.float64))


def cosine_distance_matrix(X) -> np.ndarray:
    """Pairwise d(i,j) = 1 - cos(x_i, x_j); symmetric with a zero diagonal."""
    V = _values(X)
    norms = np.linalg.norm(V, axis=1)
    zero = np.nonzero(norms == 0.0)[0]
    if zero.size:
        raise DataError(f"cosine distance undefined for zero-norm frame {int(zero[0])}")
    unit = V / norms[:, None]
    d = 1.0 - unit @ unit.T
    d = (d + d.T) / 2.0
    np.clip(d, 0.0, 2.0, out=d)
    np.fill_diagonal(d, 0.0)
    return d


def euclidean_distance_matrix(X, squared: bool = False) -> np.ndarray:
    V = _values(X)
    sq = np.sum(V * V, axis=1)
    d2 = sq[:, None] + sq[None, :] - 2.0 * (V @ V.T)
    np.maximum(d2, 0.0, out=d2)
    d2 = (d2 + d2.T) / 2.0
    np.fill_diagonal(d2, 0.0)
    return d2 if squared else np.sqrt(d2)


def linkage(X, config: AcConfig = AcConfig()) -> Dendrogram:
    """Bottom-up agglomeration of frames under the configured linkage.

    Among equal-distance cluster pairs the merge goes to the pair with the
    lexicographically smallest (min member frame, other min member frame).
    """
    V = _values(X)
    if V.shape[0] < 2:
        raise DataError(f"linkage needs at least 2 frames, got {V.shape[0]}")
    squared = config.linkage in SQUARED_METHODS
    if squared:
        if config.metric == "cosine":
            V = l2_normalize_rows(V)
        dist = euclidean_distance_matrix(V, squared=True)
    elif config.metric == "cosine":
        dist = cosine_distance_matrix(V)
    else:
        dist = euclidean_distance_matrix(V)
    raw = np.asarray(_kernels.lw_linkage(dist, LINKAGES[config.linkage]))
    heights = np.sqrt(np.maximum(raw[:, 2], 0.0)) if squared else raw[:, 2]
    merges = tuple(
        (int(a), int(b), float(h), int(size))
        for (a, b, _, size), h in zip(raw, heights)
    )
    return Dendrogram(merges, V.shape[0], config.linkage)


def cut_dendrogram(dendro: Dendrogram, cut: float) -> np.ndarray:
    """Flatten the merge tree at the given height threshold.

    A merge survives when its own height is <= cut and both constituent
    clusters survived (relevant only under centroid/median inversions).
    Labels are numbered by first frame appearance.
    """
    if cut < 0:
        raise DataError(f"cut must be >= 0, got {cut}")
    n = dendro.num_leaves
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    member = list(range(n))  # one frame per cluster id
    alive = [True] * n
    for s, (a, b, height, _) in enumerate(dendro.merges):
        ok = height <= cut and alive[a] and alive[b]
        if ok:
            ra, rb = find(member[a]), find(member[b])
            parent[rb] = ra
        member.append(member[a])
        alive.append(ok)
    labels = np.empty(n, dtype=np.int64)
    seen: dict[int, int] = {}
    for i in range(n):
        root = find(i)
        labels[i] = seen.setdefault(root, len(seen))
    return labels


def labels_to_segments(labels, num_frames: int | None = None, source: str = "ac") -> Segmentation:
    """Maximal runs of identical labels become temporal segments."""
    labels = np.asarray(labels)
    T = labels.shape[0] if num_frames is None else num_frames
    if labels.shape[0] != T:
        raise DataError(f"{labels.shape[0]} labels for {T} frames")
    return Segmentation(labels_to_boundaries(labels), T, source)


def kmeans(X, config: BaselineConfig) -> np.ndarray:
    """Lloyd iterations from a seeded k-means++ start; deterministic."""
    V = _values(X)
    T = V.shape[0]
    k = config.kmeans_k
    if k is None or k < 1:
        raise DataError(f"kmeans needs k >= 1, got {k}")
    if k > T:
        raise DataError(f"kmeans k={k} exceeds the number of frames T={T}")
    rng = np.random.default_rng(config.kmeans_seed)

    centers = np.empty((k, V.shape[1]))
    centers[0] = V[rng.integers(T)]
    closest = np.sum((V - centers[0]) ** 2, axis=1)
    for j in range(1, k):
        total = closest.sum()
        if total <= 0:
            centers[j] = V[rng.integers(T)]
            continue
        centers[j] = V[rng.choice(T, p=closest / total)]
        closest = np.minimum(closest, np.sum((V - centers[j]) ** 2, axis=1))

    labels = np.full(T, -1, dtype=np.int64)
    for _ in range(300):
        d2 = np.sum((V[:, None, :] - centers[None, :, :]) ** 2, axis=2)
        new_labels = np.argmin(d2, axis=1)
        if np.array_equal(new_labels, labels):
            break
        labels = new_labels
        for j in range(k):
            mask = labels == j
            if mask.any():
                centers[j] = V[mask].mean(axis=0)
            else:  # adopt the point farthest from its center
                far = int(np.argmax(d2[np.arange(T), labels]))
                centers[j] = V[far]
                labels[far] = j
    return labels


def meanshift(X, config: BaselineConfig) -> np.ndarray:
    """Flat-kernel mean shift; modes closer than bandwidth/2 are merged."""
    V = _values(X)
    bandwidth = config.meanshift_bandwidth
    if bandwidth is None or bandwidth <= 0:
        raise DataError(f"meanshift needs bandwidth > 0, got {bandwidth}")
    modes = V.copy()
    active = np.ones(V.shape[0], dtype=bool)
    for _ in range(200):
        if not active.any():
            break
        d2 = np.sum((modes[active, None, :] - V[None, :, :]) ** 2, axis=2)
        inside = d2 <= bandwidth * bandwidth
        counts = inside.sum(axis=1)
        shifted = (inside @ V) / counts[:, None]
        moved = np.linalg.norm(shifted - modes[active], axis=1) >= 1e-5
        modes[active] = shifted
        idx = np.nonzero(active)[0]
        active[idx[~moved]] = False

    reps: list[np.ndarray] = []
    labels = np.empty(V.shape[0], dtype=np.int64)
    for i, mode in enumerate(modes):
        for r, rep in enumerate(reps):
            if np.linalg.norm(mode - rep) <= bandwidth / 2.0:
                labels[i] = r
                break
        else:
            labels[i] = len(reps)
            reps.append(mode)
    return labels
