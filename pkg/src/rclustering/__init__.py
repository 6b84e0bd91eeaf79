"""Temporal segmentation of high-dimensional feature streams.

Fuses a statistically bounded mean-change detector (adaptive windowing)
with agglomerative clustering inside an exactly solved chain energy, plus
the evaluation and synthetic-benchmark machinery around it.
"""

from ._kernels import BACKEND as KERNEL_BACKEND
from .adwin import AdwinConfig, AdwinDetector, detect_boundaries, epsilon_cut
from .clustering import (
    AcConfig,
    BaselineConfig,
    Dendrogram,
    cosine_distance_matrix,
    cut_dendrogram,
    kmeans,
    labels_to_segments,
    linkage,
    meanshift,
)
from .errors import ComputeError, DataError
from .evaluation import (
    EvalReport,
    SweepGrid,
    SynthSpec,
    evaluate,
    f_measure,
    generate_synthetic,
    match_boundaries,
    sweep,
)
from .fusion import (
    EnergyModel,
    GcConfig,
    build_energy_model,
    candidate_labels,
    energy_trace,
    pairwise_similarity,
    rcluster,
    solve_chain,
    total_energy,
    unary_table,
)
from .pipeline import run_method
from .preprocess import (
    PcaModel,
    PreprocessConfig,
    apply_pca,
    condition_stream,
    fit_pca,
    load_pca_model,
    minmax_normalize,
    save_pca_model,
    signed_root_l2,
)
from .streams import (
    FeatureStream,
    GroundTruth,
    Segmentation,
    boundaries_to_labels,
    labels_to_boundaries,
    load_features,
    load_segmentation,
    save_features,
    write_segmentation,
)

__version__ = "0.1.0"

__all__ = [
    "KERNEL_BACKEND", "__version__",
    "AdwinConfig", "AdwinDetector", "detect_boundaries", "epsilon_cut",
    "AcConfig", "BaselineConfig", "Dendrogram", "cosine_distance_matrix",
    "cut_dendrogram", "kmeans", "labels_to_segments", "linkage", "meanshift",
    "ComputeError", "DataError",
    "EvalReport", "SweepGrid", "SynthSpec", "evaluate", "f_measure",
    "generate_synthetic", "match_boundaries", "sweep",
    "EnergyModel", "GcConfig", "build_energy_model", "candidate_labels",
    "energy_trace", "pairwise_similarity", "rcluster", "solve_chain",
    "total_energy", "unary_table",
    "run_method",
    "PcaModel", "PreprocessConfig", "apply_pca", "condition_stream", "fit_pca",
    "load_pca_model", "minmax_normalize", "save_pca_model", "signed_root_l2",
    "FeatureStream", "GroundTruth", "Segmentation", "boundaries_to_labels",
    "labels_to_boundaries", "load_features", "load_segmentation",
    "save_features", "write_segmentation",
]
