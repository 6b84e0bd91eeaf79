"""Writers for the segmentation toolkit's feature-file interfaces.

The toolkit ingests either CSV (one frame per row, decimal-point reals) or
its packed binary layout: magic ``FSTR``, version u32, T u64, D u64, then
T*D little-endian float32 values row major. These writers implement that
contract directly so the extractor stays decoupled from the toolkit's code.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

FEATURE_MAGIC = b"FSTR"
FEATURE_VERSION = 1
_HEADER = struct.Struct("<4sIQQ")


def write_csv(values: np.ndarray, path) -> None:
    rows = [",".join(repr(float(v)) for v in row) for row in values]
    Path(path).write_text("\n".join(rows) + "\n")


def write_binary(values: np.ndarray, path) -> None:
    t, d = values.shape
    payload = _HEADER.pack(FEATURE_MAGIC, FEATURE_VERSION, t, d)
    Path(path).write_bytes(payload + values.astype("<f4").tobytes())


def write_features(values: np.ndarray, path, format: str = "csv") -> None:
    values = np.asarray(values, dtype=np.float64)
    if values.ndim != 2 or values.size == 0:
        raise ValueError(f"expected a non-empty T x D matrix, got shape {values.shape}")
    if format == "csv":
        write_csv(values, path)
    elif format in ("bin", "binary"):
        write_binary(values, path)
    else:
        raise ValueError(f"unknown output format {format!r} (use csv or bin)")
