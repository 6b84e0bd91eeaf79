"""Feature conditioning: signed-root + l2 normalization, PCA, min-max scaling.

Two conditioning paths exist: the clustering/unary path (signed root, unit
l2 norm, PCA keeping a variance fraction) and the pairwise path (plain 0-1
min-max scaling of the raw features). ``condition_stream`` applies the
configured stage list in order.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DataError
from .streams import PCA_MAGIC, FeatureStream

STAGES = ("signed-root", "l2", "pca", "minmax")

_PCA_HEADER = struct.Struct("<4sIQQBd")
_PCA_VERSION = 1


@dataclass(frozen=True)
class PreprocessConfig:
    alpha: float = 0.5
    variance_fraction: float = 0.95
    pipeline: tuple[str, ...] = ("signed-root", "l2", "pca")

    def __post_init__(self):
        if not self.alpha > 0:
            raise DataError(f"alpha must be > 0, got {self.alpha}")
        if not 0 < self.variance_fraction <= 1:
            raise DataError(f"variance_fraction must be in (0, 1], got {self.variance_fraction}")
        unknown = [s for s in self.pipeline if s not in STAGES]
        if unknown:
            raise DataError(f"unknown pipeline stages {unknown}, known: {STAGES}")


def _as_matrix(x) -> np.ndarray:
    values = x.values if isinstance(x, FeatureStream) else np.asarray(x, dtype=np.float64)
    return np.atleast_2d(values)


def signed_root(X, alpha: float = 0.5) -> np.ndarray:
    """Elementwise sign(x) * |x|**alpha; flattens heavy-tailed activations."""
    X = np.asarray(X, dtype=np.float64)
    if not np.isfinite(X).all():
        raise DataError("signed_root requires finite input")
    if not alpha > 0:
        raise DataError(f"alpha must be > 0, got {alpha}")
    return np.sign(X) * np.abs(X) ** alpha


def l2_normalize_rows(X) -> np.ndarray:
    """Scale each row to unit l2 norm; all-zero rows stay zero."""
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    norms = np.linalg.norm(X, axis=1, keepdims=True)
    safe = np.where(norms == 0.0, 1.0, norms)
    return X / safe


def signed_root_l2(v, alpha: float = 0.5) -> np.ndarray:
    """Signed-root map followed by l2 normalization of a single vector."""
    v = np.asarray(v, dtype=np.float64)
    if v.ndim != 1 or v.size < 1:
        raise DataError(f"signed_root_l2 expects a non-empty vector, got shape {v.shape}")
    return l2_normalize_rows(signed_root(v, alpha))[0]


@dataclass(frozen=True)
class PcaModel:
    """Linear projection fitted on one stream.

    ``components`` has orthonormal columns (D x D'); rows project as
    ``(x - mean) @ components``. ``degenerate`` flags a zero-variance fit.
    """

    mean: np.ndarray
    components: np.ndarray
    retained_variance: float
    degenerate: bool = False

    @property
    def input_dim(self) -> int:
        return self.components.shape[0]

    @property
    def output_dim(self) -> int:
        return self.components.shape[1]


def fit_pca(X, variance_fraction: float = 0.95) -> PcaModel:
    """Fit the smallest projection retaining the requested variance fraction.

    Deterministic: components are ordered by decreasing variance and each is
    oriented so its largest-magnitude loading is positive. All-identical
    frames produce a degenerate single-component model.
    """
    if not 0 < variance_fraction <= 1:
        raise DataError(f"variance_fraction must be in (0, 1], got {variance_fraction}")
    X = _as_matrix(X)
    if X.shape[0] < 2:
        raise DataError(f"PCA fit needs at least 2 frames, got {X.shape[0]}")
    mean = X.mean(axis=0)
    centered = X - mean
    _, svals, vt = np.linalg.svd(centered, full_matrices=False)
    power = svals**2
    total = power.sum()
    if total <= 0.0:
        components = np.zeros((X.shape[1], 1))
        components[0, 0] = 1.0
        return PcaModel(mean, components, retained_variance=1.0, degenerate=True)
    ratios = power / total
    cumulative = np.cumsum(ratios)
    n_keep = int(np.searchsorted(cumulative, variance_fraction - 1e-12) + 1)
    components = vt[:n_keep].T.copy()
    for j in range(n_keep):
        col = components[:, j]
        if col[np.argmax(np.abs(col))] < 0:
            components[:, j] = -col
    return PcaModel(mean, components, retained_variance=float(cumulative[n_keep - 1]))


def apply_pca(model: PcaModel, X):
    """Project rows onto the fitted components."""
    stream = X if isinstance(X, FeatureStream) else None
    X = _as_matrix(X)
    if X.shape[1] != model.input_dim:
        raise DataError(f"PCA model expects dimension {model.input_dim}, got {X.shape[1]}")
    projected = (X - model.mean) @ model.components
    if stream is not None:
        return FeatureStream(projected, stream._frame_ids)
    return projected


def minmax_normalize(X):
    """Affine map of each dimension to [0, 1]; constant dimensions map to 0."""
    stream = X if isinstance(X, FeatureStream) else None
    X = _as_matrix(X)
    lo = X.min(axis=0)
    hi = X.max(axis=0)
    span = hi - lo
    safe = np.where(span == 0.0, 1.0, span)
    out = (X - lo) / safe
    out[:, span == 0.0] = 0.0
    if stream is not None:
        return FeatureStream(out, stream._frame_ids)
    return out


def condition_stream(stream: FeatureStream, config: PreprocessConfig = PreprocessConfig()):
    """Run the configured stage list; returns (stream, PcaModel or None)."""
    X = stream.values
    model = None
    for stage in config.pipeline:
        if stage == "signed-root":
            X = signed_root(X, config.alpha)
        elif stage == "l2":
            X = l2_normalize_rows(X)
        elif stage == "pca":
            model = fit_pca(X, config.variance_fraction)
            X = apply_pca(model, X)
        elif stage == "minmax":
            X = minmax_normalize(X)
    return FeatureStream(X, stream._frame_ids), model


def save_pca_model(model: PcaModel, path) -> None:
    """Serialize to the PCAM packed-binary layout (float64 payload)."""
    header = _PCA_HEADER.pack(
        PCA_MAGIC, _PCA_VERSION, model.input_dim, model.output_dim,
        1 if model.degenerate else 0, model.retained_variance,
    )
    payload = header + model.mean.astype("<f8").tobytes() + model.components.astype("<f8").tobytes()
    Path(path).write_bytes(payload)


def load_pca_model(path) -> PcaModel:
    raw = Path(path).read_bytes()
    if len(raw) < _PCA_HEADER.size:
        raise DataError(f"{path}: truncated PCA model")
    magic, version, d, dp, degenerate, retained = _PCA_HEADER.unpack_from(raw)
    if magic != PCA_MAGIC:
        raise DataError(f"{path}: bad magic {magic!r}, expected {PCA_MAGIC!r}")
    if version != _PCA_VERSION:
        raise DataError(f"{path}: unsupported PCA model version {version}")
    expected = _PCA_HEADER.size + 8 * (d + d * dp)
    if len(raw) != expected:
        raise DataError(f"{path}: expected {expected} bytes, found {len(raw)}")
    mean = np.frombuffer(raw, dtype="<f8", count=d, offset=_PCA_HEADER.size).copy()
    comps = np.frombuffer(raw, dtype="<f8", count=d * dp, offset=_PCA_HEADER.size + 8 * d)
    return PcaModel(mean, comps.reshape(d, dp).copy(), float(retained), bool(degenerate))
