"""Shared method dispatch: raw stream in, segmentation out.

Every method consumes the conditioned features (signed root, l2, PCA); the
fusion method additionally builds its pairwise term from 0-1 normalized raw
features. Used by both the CLI and the sweep harness.
"""

from __future__ import annotations

from .adwin import AdwinConfig, detect_boundaries
from .clustering import AcConfig, BaselineConfig, cut_dendrogram, kmeans, labels_to_segments, linkage, meanshift
from .errors import DataError
from .fusion import GcConfig, rcluster
from .preprocess import PreprocessConfig, condition_stream, minmax_normalize
from .streams import FeatureStream, Segmentation

METHODS = ("adwin", "ac", "rcluster", "kmeans", "meanshift")


def preprocess_config(params: dict) -> PreprocessConfig:
    return PreprocessConfig(
        alpha=params.get("alpha", 0.5),
        variance_fraction=params.get("variance", 0.95),
    )


def adwin_config(params: dict) -> AdwinConfig:
    return AdwinConfig(
        delta=params.get("delta", 0.05),
        p_norm=int(params.get("p_norm", 2)),
        min_subwindow=int(params.get("min_subwindow", 5)),
        statistic=params.get("statistic", "vector"),
    )


def ac_config(params: dict) -> AcConfig:
    return AcConfig(
        linkage=params.get("linkage", "average"),
        metric=params.get("metric", "cosine"),
        cut=params.get("cut", 0.5),
    )


def gc_config(params: dict) -> GcConfig:
    return GcConfig(
        omega1=params.get("omega1", 1.0),
        omega2=params.get("omega2", 0.5),
        neighborhood_radius=int(params.get("radius", 1)),
    )


def run_method(stream: FeatureStream, method: str, params: dict | None = None) -> Segmentation:
    """Condition the stream and run one segmentation method on it."""
    params = dict(params or {})
    if method not in METHODS:
        raise DataError(f"unknown method {method!r}, choose from {METHODS}")
    conditioned, _ = condition_stream(stream, preprocess_config(params))
    if method == "adwin":
        return detect_boundaries(conditioned, adwin_config(params))
    if method == "ac":
        cfg = ac_config(params)
        labels = cut_dendrogram(linkage(conditioned, cfg), cfg.cut)
        return labels_to_segments(labels, len(stream), source="ac")
    if method == "kmeans":
        if params.get("kmeans_k") is None:
            raise DataError("kmeans needs --kmeans-k")
        cfg = BaselineConfig(kmeans_k=int(params["kmeans_k"]), kmeans_seed=int(params.get("seed", 0)))
        return labels_to_segments(kmeans(conditioned, cfg), len(stream), source="kmeans")
    if method == "meanshift":
        if params.get("bandwidth") is None:
            raise DataError("meanshift needs --bandwidth")
        cfg = BaselineConfig(meanshift_bandwidth=float(params["bandwidth"]))
        return labels_to_segments(meanshift(conditioned, cfg), len(stream), source="meanshift")
    # rcluster: fuse the two method splits over the conditioned features
    seg_ac_cfg = ac_config(params)
    seg_ac = labels_to_segments(
        cut_dendrogram(linkage(conditioned, seg_ac_cfg), seg_ac_cfg.cut), len(stream), source="ac"
    )
    seg_adwin = detect_boundaries(conditioned, adwin_config(params))
    pairwise = minmax_normalize(stream)
    return rcluster(conditioned, pairwise, seg_ac, seg_adwin, gc_config(params))
