"""Boundary-matching F-measure, synthetic benchmarks, and parameter sweeps.

Evaluation is boundary based: interior segment starts are matched one to
one against ground truth within a frame tolerance, greedily by increasing
distance. The always-present boundary 0 never participates. FM is the
harmonic mean of boundary precision and recall.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import product
from pathlib import Path

import numpy as np

from .errors import DataError
from .streams import FeatureStream, GroundTruth, Segmentation


@dataclass(frozen=True)
class EvalReport:
    tp: int
    fp: int
    fn: int
    precision: float
    recall: float
    f_measure: float
    tolerance: int
    per_dataset: tuple = ()

    def to_dict(self) -> dict:
        doc = {
            "tp": self.tp, "fp": self.fp, "fn": self.fn,
            "precision": self.precision, "recall": self.recall,
            "f_measure": self.f_measure, "tolerance": self.tolerance,
        }
        if self.per_dataset:
            doc["per_dataset"] = list(self.per_dataset)
        return doc


@dataclass(frozen=True)
class SynthSpec:
    """Piecewise-stationary Gaussian stream recipe.

    ``separation`` and ``sigma`` are both per-dimension scales: noise is
    i.i.d. N(0, sigma^2) per dimension and consecutive segment means are
    ``separation * sqrt(dim)`` apart in euclidean norm, mirroring the
    ``sigma * sqrt(dim)`` norm of the per-frame noise. Segment means walk
    on a sphere whose radius is tied to the noise norm (embedding clouds
    occupy a narrow cone around a far-from-origin center, like real
    network activations), so cosine distances stay well defined.
    """

    num_segments: int = 5
    min_len: int = 30
    max_len: int = 80
    dim: int = 16
    separation: float = 4.0
    sigma: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if self.num_segments < 1 or self.min_len < 1 or self.max_len < self.min_len:
            raise DataError("invalid segment counts or length range")
        if self.dim < 1 or self.separation <= 0 or self.sigma <= 0:
            raise DataError("dim, separation and sigma must be positive")

    @property
    def separation_sigma_ratio(self) -> float:
        return self.separation / self.sigma

    @property
    def step_norm(self) -> float:
        """Euclidean distance between consecutive segment means."""
        return self.separation * float(np.sqrt(self.dim))


def match_boundaries(pred: Segmentation, gt: GroundTruth, tolerance: int = 5) -> tuple[int, int, int]:
    """Greedy one-to-one boundary matching within a frame tolerance.

    Pairs are claimed in order of increasing |pred - gt| with a symmetric
    tie break, so the counts are exactly symmetric under swapping the two
    segmentations (with fp and fn exchanged). Boundary 0 is excluded.
    """
    if pred.num_frames != gt.num_frames:
        raise DataError(
            f"segmentations cover different lengths: {pred.num_frames} vs {gt.num_frames}"
        )
    if tolerance < 0:
        raise DataError(f"tolerance must be >= 0, got {tolerance}")
    p = [b for b in pred.boundaries if b != 0]
    g = [b for b in gt.boundaries if b != 0]
    pairs = sorted(
        ((abs(pv - gv), min(pv, gv), max(pv, gv), pi, gi)
         for pi, pv in enumerate(p) for gi, gv in enumerate(g)
         if abs(pv - gv) <= tolerance),
    )
    p_used = [False] * len(p)
    g_used = [False] * len(g)
    tp = 0
    for _, _, _, pi, gi in pairs:
        if not p_used[pi] and not g_used[gi]:
            p_used[pi] = g_used[gi] = True
            tp += 1
    return tp, len(p) - tp, len(g) - tp


def f_measure(tp: int, fp: int, fn: int) -> tuple[float, float, float]:
    """(precision, recall, FM) with zero denominators mapping to 0."""
    if min(tp, fp, fn) < 0:
        raise DataError("counts must be non-negative")
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    fm = 2.0 * precision * recall / (precision + recall) if precision + recall else 0.0
    return precision, recall, fm


def evaluate(pred: Segmentation, gt: GroundTruth, tolerance: int = 5) -> EvalReport:
    tp, fp, fn = match_boundaries(pred, gt, tolerance)
    precision, recall, fm = f_measure(tp, fp, fn)
    return EvalReport(tp, fp, fn, precision, recall, fm, tolerance)


def _segment_means(spec: SynthSpec, rng: np.random.Generator) -> list[np.ndarray]:
    """Means with exact consecutive gaps of ``step_norm``.

    In one dimension the walk steps back and forth across the origin; in
    higher dimensions it moves on a sphere of radius max(15 * noise norm,
    half a step) along random tangent directions, each step subtending the
    exact chord length.
    """
    step = spec.step_norm
    if spec.dim == 1:
        m = np.array([step / 2.0])
        means = [m]
        for _ in range(spec.num_segments - 1):
            m = m - np.sign(m) * step
            means.append(m)
        return means

    radius = max(15.0 * spec.sigma * np.sqrt(spec.dim), step / 1.9)
    angle = 2.0 * np.arcsin(step / (2.0 * radius))

    def unit() -> np.ndarray:
        v = rng.standard_normal(spec.dim)
        return v / np.linalg.norm(v)

    m = radius * unit()
    means = [m]
    for _ in range(spec.num_segments - 1):
        t = unit()
        t -= (t @ m) / (m @ m) * m  # tangent component
        t /= np.linalg.norm(t)
        m = np.cos(angle) * m + np.sin(angle) * radius * t
        means.append(m)
    return means


def generate_synthetic(spec: SynthSpec) -> tuple[FeatureStream, GroundTruth]:
    """Deterministic piecewise-stationary stream with its ground truth."""
    rng = np.random.default_rng(spec.seed)
    lengths = rng.integers(spec.min_len, spec.max_len + 1, size=spec.num_segments)
    means = _segment_means(spec, rng)
    chunks = [
        mean + spec.sigma * rng.standard_normal((int(n), spec.dim))
        for mean, n in zip(means, lengths)
    ]
    boundaries = (0, *np.cumsum(lengths[:-1]).tolist())
    stream = FeatureStream(np.vstack(chunks))
    return stream, Segmentation(boundaries, len(stream), "ground-truth")


@dataclass
class SweepGrid:
    """Grid of parameter combinations with per-cell FM statistics."""

    axes: dict
    cells: list = field(default_factory=list)

    def best_cell(self) -> dict | None:
        valid = [c for c in self.cells if c.get("error") is None]
        if not valid:
            return None
        return max(valid, key=lambda c: c["mean"])

    def to_dict(self) -> dict:
        return {
            "axes": {k: list(v) for k, v in self.axes.items()},
            "cells": self.cells,
            "best": self.best_cell(),
        }

    def write_json(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=2) + "\n")

    def write_table(self, path) -> None:
        """Flat TSV (one row per cell) for external plotting."""
        names = list(self.axes)
        lines = ["\t".join([*names, "mean", "std", "error"])]
        for cell in self.cells:
            row = [repr(cell["params"][n]) for n in names]
            if cell.get("error") is None:
                row += [repr(cell["mean"]), repr(cell["std"]), ""]
            else:
                row += ["", "", cell["error"]]
            lines.append("\t".join(row))
        Path(path).write_text("\n".join(lines) + "\n")


def sweep(datasets, method: str, axes: dict, base_params: dict | None = None,
          tolerance: int = 5, runner=None) -> SweepGrid:
    """Evaluate FM over the cartesian grid of ``axes`` on every dataset.

    ``datasets`` is a list of (FeatureStream, GroundTruth) pairs; ``runner``
    defaults to the standard pipeline dispatcher. A failing run marks its
    cell invalid instead of aborting the sweep.
    """
    if not datasets:
        raise DataError("sweep needs at least one dataset")
    if not axes:
        raise DataError("sweep needs at least one axis")
    if runner is None:
        from .pipeline import run_method  # deferred: pipeline imports this module

        runner = run_method
    base = dict(base_params or {})
    grid = SweepGrid(axes={k: list(v) for k, v in axes.items()})
    names = list(axes)
    for combo in product(*(axes[n] for n in names)):
        params = base | dict(zip(names, combo))
        cell = {"params": params}
        try:
            scores = []
            for stream, gt in datasets:
                seg = runner(stream, method, params)
                scores.append(evaluate(seg, gt, tolerance).f_measure)
            cell["per_dataset"] = scores
            cell["mean"] = float(np.mean(scores))
            cell["std"] = float(np.std(scores))
            cell["error"] = None
        except Exception as exc:
            cell["error"] = f"{type(exc).__name__}: {exc}"
        grid.cells.append(cell)
    return grid
