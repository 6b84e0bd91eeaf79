"""Image-folder to feature-stream conversion with a convolutional backbone.

Images are processed in lexicographic filename order, which defines the
temporal order of the output stream; each decodable image becomes one row.
The backbone is a classic 4096-wide two-stage fully connected head over
convolutional features; pretrained weights are used when they can be
loaded, otherwise the network falls back to fixed seeded weights, which
keeps the output deterministic and the file contract identical (the
toolkit treats the feature dimension and semantics as data-driven).
"""

from __future__ import annotations

import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import torch
from PIL import Image
from torchvision import models

from .formats import write_features

LAYERS = ("fc6", "fc7")
WEIGHT_MODES = ("auto", "pretrained", "random")
_RANDOM_SEED = 0x5EED

IMAGENET_MEAN = np.array([0.485, 0.456, 0.406], dtype=np.float32)
IMAGENET_STD = np.array([0.229, 0.224, 0.225], dtype=np.float32)


@dataclass(frozen=True)
class ExtractSpec:
    image_dir: str
    output_path: str
    layer: str = "fc6"
    batch_size: int = 16
    format: str = "csv"
    weights: str = "auto"
    manifest_path: str | None = None

    def __post_init__(self):
        if self.layer not in LAYERS:
            raise ValueError(f"unknown layer {self.layer!r}, choose from {LAYERS}")
        if self.batch_size < 1:
            raise ValueError(f"batch_size must be >= 1, got {self.batch_size}")
        if self.weights not in WEIGHT_MODES:
            raise ValueError(f"weights must be one of {WEIGHT_MODES}, got {self.weights!r}")

    def resolved_manifest(self) -> Path:
        if self.manifest_path is not None:
            return Path(self.manifest_path)
        return Path(str(self.output_path) + ".manifest")


def load_backbone(weights: str = "auto") -> tuple[torch.nn.Module, str]:
    """AlexNet backbone; returns (model, mode) where mode records the fallback."""
    if weights in ("auto", "pretrained"):
        try:
            net = models.alexnet(weights=models.AlexNet_Weights.IMAGENET1K_V1)
            net.eval()
            return net, "pretrained"
        except Exception as exc:
            if weights == "pretrained":
                raise RuntimeError(f"pretrained weights unavailable: {exc}") from exc
            print(f"warning: pretrained weights unavailable ({exc}); "
                  "using fixed seeded weights", file=sys.stderr)
    torch.manual_seed(_RANDOM_SEED)
    net = models.alexnet(weights=None)
    net.eval()
    return net, "random"


def prepare_image(img: Image.Image) -> np.ndarray:
    """Resize shorter side to 256, center-crop 224, normalize channels."""
    img = img.convert("RGB")
    w, h = img.size
    scale = 256.0 / min(w, h)
    img = img.resize((max(1, round(w * scale)), max(1, round(h * scale))), Image.BILINEAR)
    w, h = img.size
    left, top = (w - 224) // 2, (h - 224) // 2
    img = img.crop((left, top, left + 224, top + 224))
    arr = np.asarray(img, dtype=np.float32) / 255.0
    arr = (arr - IMAGENET_MEAN) / IMAGENET_STD
    return arr.transpose(2, 0, 1)


@torch.no_grad()
def activations(net: torch.nn.Module, batch: torch.Tensor, layer: str) -> torch.Tensor:
    x = net.features(batch)
    x = torch.flatten(net.avgpool(x), 1)
    x = net.classifier[1](net.classifier[0](x))  # fc6 after dropout(identity in eval)
    if layer == "fc6":
        return x
    return net.classifier[4](net.classifier[3](net.classifier[2](x)))  # fc7


def extract(spec: ExtractSpec) -> dict:
    """Run the extraction; writes the feature file and the manifest.

    Returns a summary dict with row and skip counts plus the weight mode.
    Undecodable files are skipped with a warning and recorded in the
    manifest; an input folder with no decodable image is an error.
    """
    image_dir = Path(spec.image_dir)
    if not image_dir.is_dir():
        raise FileNotFoundError(f"image directory not found: {image_dir}")
    entries = sorted(p for p in image_dir.iterdir() if p.is_file() and not p.name.startswith("."))
    if not entries:
        raise RuntimeError(f"no files in {image_dir}")

    net, mode = load_backbone(spec.weights)

    decoded: list[tuple[str, np.ndarray]] = []
    manifest_lines: list[str] = []
    for path in entries:
        try:
            with Image.open(path) as img:
                decoded.append((path.name, prepare_image(img)))
        except Exception as exc:
            print(f"warning: skipping undecodable image {path.name}: {exc}", file=sys.stderr)
            manifest_lines.append(f"skipped\t{path.name}\t{exc}")
    if not decoded:
        raise RuntimeError(f"no decodable images in {image_dir}")

    rows = []
    for start in range(0, len(decoded), spec.batch_size):
        chunk = decoded[start : start + spec.batch_size]
        batch = torch.from_numpy(np.stack([arr for _, arr in chunk]))
        rows.append(activations(net, batch, spec.layer).numpy().astype(np.float64))
    values = np.vstack(rows)

    write_features(values, spec.output_path, spec.format)
    for row, (name, _) in enumerate(decoded):
        manifest_lines.append(f"{row}\t{name}")
    spec.resolved_manifest().write_text("\n".join(manifest_lines) + "\n")
    return {
        "rows": len(decoded),
        "skipped": len(entries) - len(decoded),
        "dim": int(values.shape[1]),
        "weights": mode,
        "layer": spec.layer,
    }
