"""Command-line interface: segment, eval, sweep, synth.

Exit codes: 0 ok, 2 usage error, 3 data error, 4 compute error. Every
output document embeds the resolved run configuration, and runs with a
fixed seed are byte-identical.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .errors import ComputeError, DataError
from .evaluation import SynthSpec, evaluate, generate_synthetic, sweep
from .fusion import build_energy_model, energy_trace
from .pipeline import METHODS, run_method
from .streams import load_features, load_segmentation, save_features, write_segmentation


def _range_list(text: str) -> list[float]:
    """Parse a start:stop:step range (inclusive stop) or a single value."""
    parts = text.split(":")
    if len(parts) == 1:
        return [float(parts[0])]
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected VALUE or START:STOP:STEP, got {text!r}")
    start, stop, step = (float(p) for p in parts)
    if step <= 0:
        raise argparse.ArgumentTypeError(f"step must be positive in {text!r}")
    values = []
    v = start
    while v <= stop + 1e-12:
        values.append(round(v, 12))
        v += step
    return values


def _add_io_flags(parser):
    parser.add_argument("--format", choices=["auto", "csv", "binary"], default="auto",
                        help="feature file format (default: sniffed)")
    parser.add_argument("--csv-header", action="store_true", help="skip a CSV header row")
    parser.add_argument("--csv-ids", action="store_true", help="first CSV column holds frame ids")


def _add_method_flags(parser):
    parser.add_argument("--alpha", type=float, default=0.5, help="signed-root exponent")
    parser.add_argument("--variance", type=float, default=0.95, help="PCA variance fraction")
    parser.add_argument("--delta", type=float, default=0.05, help="detector confidence")
    parser.add_argument("--p-norm", type=int, default=2, dest="p_norm")
    parser.add_argument("--min-subwindow", type=int, default=5, dest="min_subwindow")
    parser.add_argument("--statistic", choices=["vector", "norm"], default="vector",
                        help="detector statistic: mean-difference vector or scalar norms")
    parser.add_argument("--linkage", default="average",
                        choices=["single", "centroid", "average", "weighted", "complete", "ward", "median"])
    parser.add_argument("--metric", choices=["cosine", "euclidean"], default="cosine")
    parser.add_argument("--cut", type=float, default=0.5, help="dendrogram cut height")
    parser.add_argument("--kmeans-k", type=int, default=None, dest="kmeans_k")
    parser.add_argument("--bandwidth", type=float, default=None)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--omega1", type=float, default=1.0, help="ADWIN vs AC unary blend")
    parser.add_argument("--omega2", type=float, default=0.5, help="pairwise smoothing weight")
    parser.add_argument("--radius", type=int, default=1, help="temporal neighborhood radius")


def _method_params(args) -> dict:
    keys = ("alpha", "variance", "delta", "p_norm", "min_subwindow", "statistic",
            "linkage", "metric", "cut", "kmeans_k", "bandwidth", "seed",
            "omega1", "omega2", "radius")
    return {k: getattr(args, k) for k in keys if getattr(args, k, None) is not None}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rclustering",
        description="Temporal segmentation of feature streams by fused change detection and clustering.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    seg = sub.add_parser("segment", help="segment a feature file")
    seg.add_argument("--method", choices=METHODS, required=True)
    _add_io_flags(seg)
    _add_method_flags(seg)
    seg.add_argument("--energy-trace", default=None, help="write the fusion energy trace here")
    seg.add_argument("input")
    seg.add_argument("output")

    ev = sub.add_parser("eval", help="score a segmentation against ground truth")
    ev.add_argument("prediction")
    ev.add_argument("ground_truth")
    ev.add_argument("--tolerance", type=int, default=5)
    ev.add_argument("--out", default=None, help="write the report here instead of stdout")

    sw = sub.add_parser("sweep", help="grid-evaluate a method over its parameters")
    sw.add_argument("--method", choices=METHODS, required=True)
    sw.add_argument("--data", action="append", required=True, metavar="FEATURES,GT",
                    help="feature file and ground-truth pair; repeatable")
    _add_io_flags(sw)
    # numeric method flags take a VALUE or a START:STOP:STEP range (inclusive
    # stop); multi-valued flags become sweep axes, single values fix the base
    sw.add_argument("--alpha", type=float, default=0.5)
    sw.add_argument("--variance", type=float, default=0.95)
    sw.add_argument("--omega1", type=_range_list, default=[1.0], metavar="V|A:B:STEP")
    sw.add_argument("--omega2", type=_range_list, default=[0.5], metavar="V|A:B:STEP")
    sw.add_argument("--cut", type=_range_list, default=[0.5], metavar="V|A:B:STEP")
    sw.add_argument("--delta", type=_range_list, default=[0.05], metavar="V|A:B:STEP")
    sw.add_argument("--bandwidth", type=_range_list, default=None, metavar="V|A:B:STEP")
    sw.add_argument("--kmeans-k", type=_range_list, default=None, dest="kmeans_k", metavar="V|A:B:STEP")
    sw.add_argument("--p-norm", type=int, default=2, dest="p_norm")
    sw.add_argument("--min-subwindow", type=int, default=5, dest="min_subwindow")
    sw.add_argument("--statistic", choices=["vector", "norm"], default="vector")
    sw.add_argument("--linkage", default="average",
                    choices=["single", "centroid", "average", "weighted", "complete", "ward", "median"])
    sw.add_argument("--metric", choices=["cosine", "euclidean"], default="cosine")
    sw.add_argument("--seed", type=int, default=0)
    sw.add_argument("--radius", type=int, default=1)
    sw.add_argument("--tolerance", type=int, default=5)
    sw.add_argument("--out", required=True, help="grid JSON output path")
    sw.add_argument("--table", default=None, help="optional flat TSV for plotting")

    sy = sub.add_parser("synth", help="generate a synthetic benchmark stream")
    sy.add_argument("--segments", type=int, default=5)
    sy.add_argument("--min-len", type=int, default=30)
    sy.add_argument("--max-len", type=int, default=80)
    sy.add_argument("--dim", type=int, default=16)
    sy.add_argument("--separation", type=float, default=4.0)
    sy.add_argument("--sigma", type=float, default=1.0)
    sy.add_argument("--seed", type=int, default=0)
    sy.add_argument("--out-format", choices=["csv", "binary"], default="csv")
    sy.add_argument("features")
    sy.add_argument("ground_truth")
    return parser


def _cmd_segment(args) -> int:
    stream = load_features(args.input, args.format, header=args.csv_header, ids=args.csv_ids)
    params = _method_params(args)
    seg = run_method(stream, args.method, params)
    config = {"command": "segment", "method": args.method, "input": str(args.input), **params}
    write_segmentation(seg, args.output, config=config)
    if args.energy_trace and args.method == "rcluster":
        _write_trace(stream, params, args.energy_trace)
    bounds = list(seg.boundaries)
    shown = ", ".join(map(str, bounds[:12])) + (", ..." if len(bounds) > 12 else "")
    print(f"{seg.num_segments} segments over {seg.num_frames} frames at [{shown}]")
    return 0


def _write_trace(stream, params: dict, path) -> None:
    from .adwin import detect_boundaries
    from .clustering import cut_dendrogram, labels_to_segments, linkage
    from .fusion import solve_chain
    from .pipeline import ac_config, adwin_config, gc_config, preprocess_config
    from .preprocess import condition_stream, minmax_normalize

    conditioned, _ = condition_stream(stream, preprocess_config(params))
    cfg = ac_config(params)
    seg_ac = labels_to_segments(cut_dendrogram(linkage(conditioned, cfg), cfg.cut), len(stream), "ac")
    seg_adwin = detect_boundaries(conditioned, adwin_config(params))
    gcc = gc_config(params)
    model = build_energy_model(conditioned, minmax_normalize(stream), seg_ac, seg_adwin, gcc)
    labels = solve_chain(model, gcc)
    Path(path).write_text(json.dumps(energy_trace(model, gcc, labels), indent=2) + "\n")


def _cmd_eval(args) -> int:
    pred = load_segmentation(args.prediction)
    gt = load_segmentation(args.ground_truth)
    report = evaluate(pred, gt, args.tolerance)
    doc = report.to_dict()
    doc["config"] = {
        "command": "eval", "prediction": str(args.prediction),
        "ground_truth": str(args.ground_truth), "tolerance": args.tolerance,
    }
    text = json.dumps(doc, indent=2)
    if args.out:
        Path(args.out).write_text(text + "\n")
    print(text)
    return 0


def _cmd_sweep(args) -> int:
    datasets = []
    for pair in args.data:
        if "," not in pair:
            raise DataError(f"--data expects FEATURES,GT, got {pair!r}")
        fpath, gpath = pair.split(",", 1)
        datasets.append((
            load_features(fpath, args.format, header=args.csv_header, ids=args.csv_ids),
            load_segmentation(gpath),
        ))
    base = {k: getattr(args, k) for k in
            ("alpha", "variance", "p_norm", "min_subwindow", "statistic",
             "linkage", "metric", "seed", "radius")}
    axes = {}
    for name in ("omega1", "omega2", "cut", "delta", "bandwidth", "kmeans_k"):
        values = getattr(args, name)
        if values is None:
            continue
        values = [int(v) if name == "kmeans_k" else v for v in values]
        if len(values) > 1:
            axes[name] = values
        else:
            base[name] = values[0]
    if not axes:
        raise DataError("sweep needs at least one ranged flag (START:STOP:STEP)")
    grid = sweep(datasets, args.method, axes, base_params=base, tolerance=args.tolerance)
    doc = grid.to_dict()
    doc["config"] = {"command": "sweep", "method": args.method, "data": list(args.data),
                     "tolerance": args.tolerance, "axes": {k: list(v) for k, v in axes.items()},
                     **base}
    Path(args.out).write_text(json.dumps(doc, indent=2) + "\n")
    if args.table:
        grid.write_table(args.table)
    best = grid.best_cell()
    if best is None:
        print("sweep finished: no valid cells")
        return 4
    print(f"best cell {best['params']} mean FM {best['mean']:.4f} (std {best['std']:.4f})")
    return 0


def _cmd_synth(args) -> int:
    spec = SynthSpec(
        num_segments=args.segments, min_len=args.min_len, max_len=args.max_len,
        dim=args.dim, separation=args.separation, sigma=args.sigma, seed=args.seed,
    )
    stream, gt = generate_synthetic(spec)
    save_features(stream, args.features, format=args.out_format)
    config = {
        "command": "synth", "segments": args.segments, "min_len": args.min_len,
        "max_len": args.max_len, "dim": args.dim, "separation": args.separation,
        "sigma": args.sigma, "seed": args.seed,
    }
    write_segmentation(gt, args.ground_truth, config=config)
    print(f"wrote {len(stream)} frames ({stream.dim}-d) and {gt.num_segments} ground-truth segments")
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {"segment": _cmd_segment, "eval": _cmd_eval, "sweep": _cmd_sweep, "synth": _cmd_synth}
    try:
        return handlers[args.command](args)
    except DataError as exc:
        print(f"error: data: {exc}", file=sys.stderr)
        return 3
    except ComputeError as exc:
        print(f"error: compute: {exc}", file=sys.stderr)
        return 4
    except OSError as exc:
        print(f"error: data: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
