"""Multivariate adaptive-window mean-change detection.

The detector keeps a window of the most recent samples. After every new
sample, every admissible split of the window into an older part W0 and a
newer part W1 is tested; when the p-norm of the difference between the two
subwindow mean vectors exceeds the confidence threshold ``epsilon_cut``,
the older part up to the firing split is dropped. Dropping repeats until no
split fires, so a single update can shed a long stale prefix.

The exact window (every sample retained, every split tested) is the
reference behavior; the split scan is delegated to the selected kernel
backend.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import ComputeError, DataError
from .streams import FeatureStream, Segmentation

STATISTICS = ("vector", "norm")


@dataclass(frozen=True)
class AdwinConfig:
    delta: float = 0.05
    p_norm: int = 2
    min_subwindow: int = 5
    max_window: int | None = None
    # "vector": test the p-norm of the subwindow mean-difference vector.
    # "norm":   reduce each sample to its p-norm first (scalar stream).
    statistic: str = "vector"

    def __post_init__(self):
        if not 0 < self.delta < 1:
            raise DataError(f"delta must be in (0, 1), got {self.delta}")
        if self.p_norm < 1:
            raise DataError(f"p_norm must be >= 1, got {self.p_norm}")
        if self.min_subwindow < 1:
            raise DataError(f"min_subwindow must be >= 1, got {self.min_subwindow}")
        if self.max_window is not None and self.max_window < 2 * self.min_subwindow:
            raise DataError("max_window smaller than two minimum subwindows")
        if self.statistic not in STATISTICS:
            raise DataError(f"statistic must be one of {STATISTICS}, got {self.statistic!r}")


def epsilon_cut(k: int, p: int, n0: int, n1: int, delta: float) -> float:
    """Detection threshold for the subwindow mean difference.

    epsilon = k**(1/p) * sqrt(ln(4 / (k * delta')) / (2 * m)) with
    delta' = delta / (n0 + n1) and m the harmonic mean of n0 and n1.
    """
    if k < 1 or p < 1 or n0 < 1 or n1 < 1:
        raise DataError(f"epsilon_cut needs k, p, n0, n1 >= 1, got k={k}, p={p}, n0={n0}, n1={n1}")
    if not 0 < delta < 1:
        raise DataError(f"delta must be in (0, 1), got {delta}")
    w = n0 + n1
    ratio = 4.0 * w / (k * delta)
    if ratio <= 1.0:
        raise ComputeError(
            f"confidence bound undefined: k*delta' = {k * delta / w:.3g} >= 4 "
            f"(k={k}, |W|={w}, delta={delta})"
        )
    m = 2.0 * n0 * n1 / w
    return k ** (1.0 / p) * math.sqrt(math.log(ratio) / (2.0 * m))


class AdwinDetector:
    """Single-stream detector; one instance per stream, mutable, single owner."""

    def __init__(self, dim: int, config: AdwinConfig = AdwinConfig()):
        if dim < 1:
            raise DataError(f"dimension must be >= 1, got {dim}")
        self.dim = dim
        self.config = config
        capacity = 1024
        self._raw = np.empty((capacity, dim))
        self._cum = np.zeros((capacity + 1, dim))
        self._count = 0  # samples fed so far
        self._start = 0  # absolute index of the first retained sample

    def __len__(self) -> int:
        return self._count - self._start

    @property
    def position(self) -> int:
        return self._count

    @property
    def window_start(self) -> int:
        return self._start

    @property
    def window(self) -> np.ndarray:
        """Raw retained samples, oldest first (read-only view)."""
        view = self._raw[self._start : self._count]
        view.flags.writeable = False
        return view

    def prefix_sum(self, n: int) -> np.ndarray:
        """Incrementally maintained sum of the oldest n retained samples."""
        if not 0 <= n <= len(self):
            raise DataError(f"prefix length {n} out of range for window of {len(self)}")
        return self._cum[self._start + n] - self._cum[self._start]

    def _grow(self):
        capacity = self._raw.shape[0] * 2
        raw = np.empty((capacity, self.dim))
        cum = np.zeros((capacity + 1, self.dim))
        raw[: self._count] = self._raw[: self._count]
        cum[: self._count + 1] = self._cum[: self._count + 1]
        self._raw, self._cum = raw, cum

    def update(self, x) -> tuple[bool, int]:
        """Append one sample; returns (change_detected, samples_dropped)."""
        x = np.asarray(x, dtype=np.float64).reshape(-1)
        if x.shape[0] != self.dim:
            raise DataError(f"sample dimension {x.shape[0]} != stream dimension {self.dim}")
        if not np.isfinite(x).all():
            raise DataError(f"non-finite sample at stream position {self._count}")
        if self._count == self._raw.shape[0]:
            self._grow()
        self._raw[self._count] = x
        self._cum[self._count + 1] = self._cum[self._count] + x
        self._count += 1

        cfg = self.config
        if cfg.max_window is not None and len(self) > cfg.max_window:
            self._start = self._count - cfg.max_window  # age out, not a change

        dropped = 0
        while True:
            cut = _kernels.adwin_scan(
                self._cum, self._start, self._count, cfg.p_norm, cfg.delta, cfg.min_subwindow
            )
            if cut == 0:
                break
            self._start += cut
            dropped += cut
        return dropped > 0, dropped


def detect_boundaries(stream: FeatureStream, config: AdwinConfig = AdwinConfig()) -> Segmentation:
    """Segment a stream by feeding it through the detector in frame order.

    Each detection event emits a boundary at the start of the retained
    subwindow. Boundary 0 is always present.
    """
    X = stream.values
    if config.statistic == "norm":
        X = np.linalg.norm(X, ord=config.p_norm, axis=1, keepdims=True)
    detector = AdwinDetector(X.shape[1], config)
    boundaries = [0]
    for i in range(X.shape[0]):
        changed, _ = detector.update(X[i])
        if changed:
            boundaries.append(detector.window_start)
    return Segmentation(tuple(boundaries), len(stream), "adwin")
