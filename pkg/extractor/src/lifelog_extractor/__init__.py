"""Image folder to feature-stream conversion for the segmentation toolkit."""

from .extractor import LAYERS, WEIGHT_MODES, ExtractSpec, extract, load_backbone
from .formats import write_features

__version__ = "0.1.0"

__all__ = ["ExtractSpec", "extract", "load_backbone", "write_features", "LAYERS", "WEIGHT_MODES", "__version__"]
