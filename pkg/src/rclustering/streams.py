"""Feature streams, segmentations, and their on-disk formats.

A feature stream is an ordered T x D matrix of per-frame feature vectors;
frame index is the sole temporal coordinate. Segmentations are stored as
segment start indices (0 always present), which removes any ambiguity about
which side of a "boundary" a frame belongs to.

File formats
------------
CSV            one frame per row, comma separated, decimal-point reals;
               optional header row and optional leading frame-id column.
Packed binary  magic ``FSTR``, version u32, T u64, D u64, then T*D
               little-endian float32 values, row major.
Segmentation   JSON document {version, source, num_frames,
               segments: [{start, end}]} with inclusive ends; an optional
               "config" field carries run provenance and is ignored on load.
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DataError

FEATURE_MAGIC = b"FSTR"
FEATURE_VERSION = 1
PCA_MAGIC = b"PCAM"
SEGMENTATION_VERSION = 1

_HEADER = struct.Struct("<4sIQQ")


class FeatureStream:
    """Ordered sequence of per-frame feature vectors.

    Values are validated to be finite on construction and the backing array
    is locked read-only, so instances are safe to share across workers.
    """

    def __init__(self, values, frame_ids=None):
        arr = np.array(values, dtype=np.float64, order="C")
        if arr.ndim == 1:
            arr = arr.reshape(-1, 1)
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise DataError(f"feature stream must be a T x D matrix with T,D >= 1, got shape {arr.shape}")
        if not np.isfinite(arr).all():
            r, c = np.argwhere(~np.isfinite(arr))[0]
            raise DataError(f"non-finite feature value at (row {r + 1}, col {c + 1})")
        arr.setflags(write=False)
        self._values = arr
        if frame_ids is not None:
            frame_ids = tuple(str(f) for f in frame_ids)
            if len(frame_ids) != arr.shape[0]:
                raise DataError(f"got {len(frame_ids)} frame ids for {arr.shape[0]} frames")
        self._frame_ids = frame_ids

    @property
    def values(self) -> np.ndarray:
        return self._values

    @property
    def dim(self) -> int:
        return self._values.shape[1]

    @property
    def frame_ids(self) -> tuple[str, ...]:
        if self._frame_ids is None:
            self._frame_ids = tuple(f"f{i:06d}" for i in range(len(self)))
        return self._frame_ids

    def __len__(self) -> int:
        return self._values.shape[0]

    def __repr__(self) -> str:
        return f"FeatureStream(T={len(self)}, D={self.dim})"


@dataclass(frozen=True)
class Segmentation:
    """Temporal segmentation as strictly increasing segment start indices.

    ``boundaries[0]`` is always 0; segment j covers frames
    [boundaries[j], boundaries[j+1]) and the last segment runs to the end.
    """

    boundaries: tuple[int, ...]
    num_frames: int
    source: str

    def __post_init__(self):
        if self.num_frames < 1:
            raise DataError(f"segmentation needs num_frames >= 1, got {self.num_frames}")
        b = tuple(int(x) for x in self.boundaries)
        object.__setattr__(self, "boundaries", b)
        if not b or b[0] != 0:
            raise DataError(f"boundaries must start at 0, got {b[:3]}...")
        if any(y <= x for x, y in zip(b, b[1:])):
            raise DataError(f"boundaries must be strictly increasing, got {b}")
        if b[-1] > self.num_frames - 1:
            raise DataError(f"boundary {b[-1]} out of range for {self.num_frames} frames")
        if not self.source:
            raise DataError("segmentation source tag must be non-empty")

    @property
    def num_segments(self) -> int:
        return len(self.boundaries)

    def segments(self) -> list[tuple[int, int]]:
        """Segments as (start, end) pairs with inclusive ends."""
        starts = list(self.boundaries)
        ends = [s - 1 for s in starts[1:]] + [self.num_frames - 1]
        return list(zip(starts, ends))

    def labels(self) -> np.ndarray:
        return boundaries_to_labels(self.boundaries, self.num_frames)


# A ground truth is an ordinary segmentation tagged with this source.
GROUND_TRUTH_SOURCE = "ground-truth"
GroundTruth = Segmentation


def boundaries_to_labels(boundaries, num_frames: int) -> np.ndarray:
    """Per-frame segment indices from segment start positions."""
    labels = np.zeros(num_frames, dtype=np.int64)
    for j, start in enumerate(boundaries):
        labels[start:] = j
    return labels


def labels_to_boundaries(labels) -> tuple[int, ...]:
    """Start indices of maximal runs of identical labels (0 always included)."""
    labels = np.asarray(labels)
    if labels.size == 0:
        raise DataError("cannot derive boundaries from an empty label sequence")
    changes = np.nonzero(labels[1:] != labels[:-1])[0] + 1
    return (0, *changes.tolist())


def load_features(path, format: str = "auto", header: bool = False, ids: bool = False) -> FeatureStream:
    """Read a feature stream from CSV or packed binary.

    ``format="auto"`` sniffs the binary magic. For CSV, ``header`` skips the
    first row and ``ids`` treats the first column as frame identifiers.
    """
    path = Path(path)
    if not path.exists():
        raise DataError(f"feature file not found: {path}")
    raw = path.read_bytes()
    if len(raw) == 0:
        raise DataError(f"empty feature file: {path}")
    if format == "auto":
        format = "binary" if raw[:4] == FEATURE_MAGIC else "csv"
    if format == "binary":
        return _features_from_binary(raw, path)
    if format == "csv":
        return _features_from_csv(raw, path, header=header, ids=ids)
    raise DataError(f"unknown feature format {format!r} (use csv or binary)")


def _features_from_csv(raw: bytes, path, header: bool, ids: bool) -> FeatureStream:
    lines = raw.decode("utf-8").splitlines()
    if header:
        lines = lines[1:]
    rows, frame_ids = [], [] if ids else None
    width = None
    for rownum, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        cells = line.split(",")
        if ids:
            frame_ids.append(cells[0].strip())
            cells = cells[1:]
        if width is None:
            width = len(cells)
        elif len(cells) != width:
            raise DataError(f"{path}: ragged row at row {rownum} ({len(cells)} columns, expected {width})")
        try:
            rows.append([float(c) for c in cells])
        except ValueError:
            for col, c in enumerate(cells, start=1):
                try:
                    float(c)
                except ValueError:
                    raise DataError(f"{path}: unparsable value {c.strip()!r} at (row {rownum}, col {col})") from None
            raise
    if not rows:
        raise DataError(f"{path}: no data rows")
    arr = np.array(rows, dtype=np.float64)
    if not np.isfinite(arr).all():
        r, c = np.argwhere(~np.isfinite(arr))[0]
        raise DataError(f"{path}: non-finite value at (row {r + 1}, col {c + 1})")
    return FeatureStream(arr, frame_ids)


def _features_from_binary(raw: bytes, path) -> FeatureStream:
    if len(raw) < _HEADER.size:
        raise DataError(f"{path}: truncated binary header")
    magic, version, t, d = _HEADER.unpack_from(raw)
    if magic != FEATURE_MAGIC:
        raise DataError(f"{path}: bad magic {magic!r}, expected {FEATURE_MAGIC!r}")
    if version != FEATURE_VERSION:
        raise DataError(f"{path}: unsupported version {version}")
    if t < 1 or d < 1:
        raise DataError(f"{path}: invalid dimensions T={t}, D={d}")
    expected = _HEADER.size + 4 * t * d
    if len(raw) != expected:
        raise DataError(f"{path}: expected {expected} bytes for T={t}, D={d}, found {len(raw)}")
    flat = np.frombuffer(raw, dtype="<f4", offset=_HEADER.size)
    arr = flat.reshape(t, d).astype(np.float64)
    if not np.isfinite(arr).all():
        r, c = np.argwhere(~np.isfinite(arr))[0]
        raise DataError(f"{path}: non-finite value at (row {r + 1}, col {c + 1})")
    return FeatureStream(arr)


def save_features(stream: FeatureStream, path, format: str = "csv", header: bool = False, ids: bool = False) -> None:
    """Write a feature stream; binary stores float32 per the FSTR layout."""
    path = Path(path)
    if format == "binary":
        payload = _HEADER.pack(FEATURE_MAGIC, FEATURE_VERSION, len(stream), stream.dim)
        payload += stream.values.astype("<f4").tobytes()
        path.write_bytes(payload)
        return
    if format != "csv":
        raise DataError(f"unknown feature format {format!r} (use csv or binary)")
    out = []
    if header:
        cols = [f"x{j}" for j in range(stream.dim)]
        if ids:
            cols = ["frame", *cols]
        out.append(",".join(cols))
    fids = stream.frame_ids if ids else None
    for i, row in enumerate(stream.values):
        cells = [repr(float(v)) for v in row]
        if ids:
            cells = [fids[i], *cells]
        out.append(",".join(cells))
    path.write_text("\n".join(out) + "\n")


def write_segmentation(seg: Segmentation, path, config: dict | None = None) -> None:
    """Write the segmentation document; read-back reproduces it exactly."""
    doc = {
        "version": SEGMENTATION_VERSION,
        "source": seg.source,
        "num_frames": seg.num_frames,
        "segments": [{"start": s, "end": e} for s, e in seg.segments()],
    }
    if config is not None:
        doc["config"] = config
    Path(path).write_text(json.dumps(doc, indent=2) + "\n")


def load_segmentation(path) -> Segmentation:
    path = Path(path)
    if not path.exists():
        raise DataError(f"segmentation file not found: {path}")
    try:
        doc = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise DataError(f"{path}: not a valid segmentation document: {exc}") from None
    for field in ("source", "num_frames", "segments"):
        if field not in doc:
            raise DataError(f"{path}: missing field {field!r}")
    segments = doc["segments"]
    if not segments:
        raise DataError(f"{path}: empty segment list")
    starts, prev_end = [], None
    for k, seg in enumerate(segments):
        start, end = int(seg["start"]), int(seg["end"])
        if end < start:
            raise DataError(f"{path}: segment {k} has end {end} < start {start}")
        if k == 0 and start != 0:
            raise DataError(f"{path}: first segment must start at 0, got {start}")
        if prev_end is not None:
            if start <= prev_end:
                raise DataError(f"{path}: segment {k} starting at {start} overlaps previous end {prev_end}")
            if start > prev_end + 1:
                raise DataError(f"{path}: gap between frame {prev_end} and segment {k} starting at {start}")
        starts.append(start)
        prev_end = end
    if prev_end != int(doc["num_frames"]) - 1:
        raise DataError(f"{path}: segments end at {prev_end} but num_frames is {doc['num_frames']}")
    return Segmentation(tuple(starts), int(doc["num_frames"]), str(doc["source"]))
