"""Command line for the image-folder feature extractor."""

from __future__ import annotations

import argparse
import sys

from .extractor import LAYERS, WEIGHT_MODES, ExtractSpec, extract


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lifelog-extract",
        description="Convert a folder of images into a feature-stream file (rows in "
                    "lexicographic filename order) plus a filename manifest.",
    )
    parser.add_argument("--images", required=True, help="input image directory")
    parser.add_argument("--out", required=True, help="output feature file")
    parser.add_argument("--format", choices=["csv", "bin"], default="csv")
    parser.add_argument("--layer", choices=list(LAYERS), default="fc6")
    parser.add_argument("--batch-size", type=int, default=16)
    parser.add_argument("--weights", choices=list(WEIGHT_MODES), default="auto",
                        help="pretrained falls back to fixed seeded weights under 'auto'")
    parser.add_argument("--manifest", default=None, help="manifest path (default: OUT.manifest)")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    spec = ExtractSpec(
        image_dir=args.images, output_path=args.out, layer=args.layer,
        batch_size=args.batch_size, format=args.format, weights=args.weights,
        manifest_path=args.manifest,
    )
    try:
        summary = extract(spec)
    except (FileNotFoundError, RuntimeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {summary['rows']} rows ({summary['dim']}-d, layer {summary['layer']}, "
          f"{summary['weights']} weights), skipped {summary['skipped']}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
