"""Fusion of clustering and change-detection splits by exact energy minimization.

The candidate label set is the union split of the two input segmentations.
Each frame carries two unary cost rows (one per method) built from a
containment-gated centroid distance; neighboring frames pay a Potts penalty
weighted by their feature similarity for taking different labels. The total
energy

    E(f) = sum_i ((1 - w1) * U_ac(f_i) + w1 * U_adw(f_i))
         + w2 * sum_i (1 / |N_i|) * sum_{n in N_i} s(i, n) * [f_i != f_n]

is minimized exactly: the temporal chain admits dynamic programming over
label states (per-frame labels at radius 1, tuples of the last r labels for
larger neighborhoods), which dominates approximate multilabel cut solvers
on this graph while optimizing the same objective.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import ComputeError, DataError
from .streams import FeatureStream, Segmentation
from .clustering import labels_to_segments

STATE_SPACE_LIMIT = 10**6


@dataclass(frozen=True)
class GcConfig:
    omega1: float = 1.0
    omega2: float = 0.5
    neighborhood_radius: int = 1

    def __post_init__(self):
        if not 0 <= self.omega1 <= 1:
            raise DataError(f"omega1 must be in [0, 1], got {self.omega1}")
        if not 0 <= self.omega2 <= 1:
            raise DataError(f"omega2 must be in [0, 1], got {self.omega2}")
        if self.neighborhood_radius < 1:
            raise DataError(f"neighborhood radius must be >= 1, got {self.neighborhood_radius}")


@dataclass(frozen=True)
class EnergyModel:
    """Unary tables, pairwise similarities and weights defining E(f).

    ``similarity[i, d-1]`` holds s(i, i+d) for 1 <= d <= radius (zero past
    the stream end). Unary entries and similarities live in [0, 1].
    """

    candidates: Segmentation
    u_ac: np.ndarray
    u_adw: np.ndarray
    similarity: np.ndarray
    omega1: float
    omega2: float
    radius: int

    @property
    def num_frames(self) -> int:
        return self.u_ac.shape[0]

    @property
    def num_labels(self) -> int:
        return self.u_ac.shape[1]


def candidate_labels(seg_a: Segmentation, seg_b: Segmentation) -> Segmentation:
    """Union split of two segmentations over the same stream."""
    if seg_a.num_frames != seg_b.num_frames:
        raise DataError(
            f"segmentations cover different lengths: {seg_a.num_frames} vs {seg_b.num_frames}"
        )
    merged = sorted(set(seg_a.boundaries) | set(seg_b.boundaries))
    return Segmentation(tuple(merged), seg_a.num_frames, "candidate")


def _cosine_rows_to_centroids(X: np.ndarray, centroids: np.ndarray) -> np.ndarray:
    xn = np.linalg.norm(X, axis=1, keepdims=True)
    cn = np.linalg.norm(centroids, axis=1, keepdims=True)
    sims = (X / np.where(xn == 0.0, 1.0, xn)) @ (centroids / np.where(cn == 0.0, 1.0, cn)).T
    sims[(xn == 0.0)[:, 0], :] = 0.0
    sims[:, (cn == 0.0)[:, 0]] = 0.0
    return sims


def unary_table(X, candidates: Segmentation, method_seg: Segmentation) -> np.ndarray:
    """Per-frame cost of each candidate label under one method's split.

    A candidate label is admissible for frame i when its segment lies inside
    the method segment containing i; the cost is then half the cosine
    distance between the frame and the candidate-segment centroid. Labels
    outside that method segment cost the maximal 1.
    """
    V = X.values if isinstance(X, FeatureStream) else np.atleast_2d(np.asarray(X, dtype=np.float64))
    T = V.shape[0]
    if candidates.num_frames != T or method_seg.num_frames != T:
        raise DataError("unary_table inputs must cover the same number of frames")
    spans = candidates.segments()
    centroids = np.stack([V[s : e + 1].mean(axis=0) for s, e in spans])
    cost = np.clip((1.0 - _cosine_rows_to_centroids(V, centroids)) / 2.0, 0.0, 1.0)
    method_of_frame = method_seg.labels()
    table = np.ones((T, len(spans)))
    for l, (s, e) in enumerate(spans):
        if method_of_frame[s] != method_of_frame[e]:
            continue  # candidate straddles a method boundary: nowhere admissible
        inside = method_of_frame == method_of_frame[s]
        table[inside, l] = cost[inside, l]
    return table


def pairwise_similarity(X_pair, radius: int = 1) -> np.ndarray:
    """s(i, i+d) = max(0, cos(x_i, x_{i+d})) for d up to the radius.

    Expects 0-1 normalized features; zero-norm rows yield similarity 0
    (a free boundary).
    """
    V = X_pair.values if isinstance(X_pair, FeatureStream) else np.atleast_2d(np.asarray(X_pair, dtype=np.float64))
    T = V.shape[0]
    norms = np.linalg.norm(V, axis=1)
    unit = V / np.where(norms == 0.0, 1.0, norms)[:, None]
    sim = np.zeros((T, radius))
    for d in range(1, radius + 1):
        if T - d <= 0:
            break
        s = np.einsum("ij,ij->i", unit[:-d], unit[d:])
        s[norms[:-d] == 0.0] = 0.0
        s[norms[d:] == 0.0] = 0.0
        sim[: T - d, d - 1] = np.clip(s, 0.0, 1.0)
    return sim


def build_energy_model(
    X_unary, X_pair, seg_ac: Segmentation, seg_adwin: Segmentation, config: GcConfig = GcConfig()
) -> EnergyModel:
    candidates = candidate_labels(seg_ac, seg_adwin)
    u_ac = unary_table(X_unary, candidates, seg_ac)
    u_adw = unary_table(X_unary, candidates, seg_adwin)
    sim = pairwise_similarity(X_pair, config.neighborhood_radius)
    return EnergyModel(
        candidates, u_ac, u_adw, sim,
        omega1=config.omega1, omega2=config.omega2, radius=config.neighborhood_radius,
    )


def neighbor_counts(num_frames: int, radius: int) -> np.ndarray:
    """|N_i|: frames within +-radius, clipped at the stream ends."""
    idx = np.arange(num_frames)
    return np.minimum(idx, radius) + np.minimum(num_frames - 1 - idx, radius)


def total_energy(labeling, model: EnergyModel, config: GcConfig) -> float:
    """Evaluate E(f) exactly for a full labeling."""
    labels = np.asarray(labeling, dtype=np.int64)
    T, L = model.u_ac.shape
    if labels.shape[0] != T:
        raise DataError(f"labeling covers {labels.shape[0]} frames, expected {T}")
    if labels.min() < 0 or labels.max() >= L:
        raise DataError(f"labeling uses labels outside 0..{L - 1}")
    w1, w2 = config.omega1, config.omega2
    rows = np.arange(T)
    energy = float(((1.0 - w1) * model.u_ac[rows, labels] + w1 * model.u_adw[rows, labels]).sum())
    r = min(config.neighborhood_radius, model.radius)
    inv_n = 1.0 / neighbor_counts(T, r)
    for d in range(1, r + 1):
        if T - d <= 0:
            break
        disagree = labels[:-d] != labels[d:]
        weights = model.similarity[: T - d, d - 1] * (inv_n[:-d] + inv_n[d:])
        energy += w2 * float((weights * disagree).sum())
    return energy


def _edge_weight_columns(model: EnergyModel, config: GcConfig, radius: int) -> np.ndarray:
    """w[i, d-1]: full Potts cost of frames i and i+d disagreeing."""
    T = model.num_frames
    inv_n = 1.0 / neighbor_counts(T, radius)
    w = np.zeros((T, radius))
    for d in range(1, radius + 1):
        if T - d <= 0:
            break
        w[: T - d, d - 1] = config.omega2 * model.similarity[: T - d, d - 1] * (inv_n[:-d] + inv_n[d:])
    return w


def solve_chain(model: EnergyModel, config: GcConfig) -> np.ndarray:
    """Globally optimal labeling of the chain energy.

    Exact dynamic programming over the last ``radius`` labels; ties resolve
    to the lexicographically smallest label sequence.
    """
    T, L = model.u_ac.shape
    radius = config.neighborhood_radius
    if radius > model.radius:
        raise DataError(
            f"model built for radius {model.radius} cannot solve radius {radius}"
        )
    if L**radius > STATE_SPACE_LIMIT:
        raise ComputeError(
            f"state space {L}^{radius} exceeds {STATE_SPACE_LIMIT}; "
            "reduce the neighborhood radius or the candidate label count"
        )
    unary = (1.0 - config.omega1) * model.u_ac + config.omega1 * model.u_adw
    if T == 1:
        return np.array([int(np.argmin(unary[0]))], dtype=np.int64)
    edge_w = _edge_weight_columns(model, config, radius)
    if radius == 1:
        return np.asarray(
            _kernels.chain_solve_r1(np.ascontiguousarray(unary), np.ascontiguousarray(edge_w[: T - 1, 0])),
            dtype=np.int64,
        )
    return _solve_chain_general(unary, edge_w, radius)


def _transition_costs(unary_row, edge_w, i: int, radius: int, L: int, states: np.ndarray) -> np.ndarray:
    """Cost of frame i taking each label given each predecessor state."""
    depth = min(i, radius)
    cost = np.broadcast_to(unary_row, (states.shape[0], L)).copy()
    for d in range(1, depth + 1):
        prev = (states // L ** (d - 1)) % L  # label of frame i-d
        cost += edge_w[i - d, d - 1] * (prev[:, None] != np.arange(L)[None, :])
    return cost


def _solve_chain_general(unary: np.ndarray, edge_w: np.ndarray, radius: int) -> np.ndarray:
    T, L = unary.shape
    suffix: list[np.ndarray] = [None] * (T + 1)
    suffix[T] = np.zeros(L ** min(T, radius))
    for i in range(T - 1, -1, -1):
        depth = min(i, radius)
        nxt_depth = min(i + 1, radius)
        states = np.arange(L**depth)
        cost = _transition_costs(unary[i], edge_w, i, radius, L, states)
        nxt_states = (states[:, None] * L + np.arange(L)[None, :]) % (L**nxt_depth)
        suffix[i] = (cost + suffix[i + 1][nxt_states]).min(axis=1)
    labels = np.empty(T, dtype=np.int64)
    state = 0
    for i in range(T):
        depth = min(i, radius)
        nxt_depth = min(i + 1, radius)
        cost = _transition_costs(unary[i], edge_w, i, radius, L, np.array([state]))[0]
        nxt_states = (state * L + np.arange(L)) % (L**nxt_depth)
        labels[i] = int(np.argmin(cost + suffix[i + 1][nxt_states]))
        state = int(nxt_states[labels[i]])
    return labels


def rcluster(
    X_unary, X_pair, seg_ac: Segmentation, seg_adwin: Segmentation, config: GcConfig = GcConfig()
) -> Segmentation:
    """Full fusion pipeline: union split, energies, exact solve, segments."""
    T = len(X_unary) if isinstance(X_unary, FeatureStream) else np.atleast_2d(X_unary).shape[0]
    Tp = len(X_pair) if isinstance(X_pair, FeatureStream) else np.atleast_2d(X_pair).shape[0]
    if T != Tp or seg_ac.num_frames != T or seg_adwin.num_frames != T:
        raise DataError("rcluster inputs must cover the same number of frames")
    model = build_energy_model(X_unary, X_pair, seg_ac, seg_adwin, config)
    labels = solve_chain(model, config)
    return labels_to_segments(labels, T, source="rcluster")


def energy_trace(model: EnergyModel, config: GcConfig, labeling) -> dict:
    """Per-frame chosen-label unary and per-edge pairwise costs, for plotting."""
    labels = np.asarray(labeling, dtype=np.int64)
    T = model.num_frames
    w1 = config.omega1
    unary = (1.0 - w1) * model.u_ac + w1 * model.u_adw
    frames = [
        {"index": i, "label": int(labels[i]), "unary": float(unary[i, labels[i]])}
        for i in range(T)
    ]
    r = min(config.neighborhood_radius, model.radius)
    inv_n = 1.0 / neighbor_counts(T, r)
    edges = []
    for d in range(1, r + 1):
        for i in range(T - d):
            cost = (
                config.omega2 * model.similarity[i, d - 1] * (inv_n[i] + inv_n[i + d])
                if labels[i] != labels[i + d]
                else 0.0
            )
            edges.append({"i": i, "n": i + d, "cost": float(cost)})
    return {
        "total_energy": total_energy(labels, model, config),
        "frames": frames,
        "edges": edges,
    }
