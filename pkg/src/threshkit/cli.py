"""Batch front door: apply one method, dump histograms, compare all methods.

Standard output carries JSON only; anything human-readable goes to
standard error. Exit codes: 0 success, 2 unreadable or invalid input,
3 edge-guided selection found no edges.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

from .dispatch import DEFAULT_EDGE_PERCENTILE, DEFAULT_P, select_threshold
from .edges import NoEdgesError
from .formats import FormatError, ReportEntry, entry_to_dict, read_pgm, write_pgm, write_report
from .image import GrayImage, apply_threshold, compute_histogram, foreground_fraction, pixel_disagreement

EXIT_OK = 0
EXIT_BAD_INPUT = 2
EXIT_NO_EDGES = 3

COMPARE_ORDER = ("manual", "mean", "ptile", "hdt", "emt")


@dataclass
class CliConfig:
    command: str
    inputs: list[Path] = field(default_factory=list)
    output: Path | None = None
    method: str | None = None
    p: float = DEFAULT_P
    t: list[int] = field(default_factory=list)
    edge_percentile: float = DEFAULT_EDGE_PERCENTILE
    port: int = 8080


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="threshkit",
        description="Global threshold selection and binarization for 8-bit PGM images.",
        epilog="Exit codes: 0 success, 2 bad input, 3 no edges found (emt).",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    apply_p = sub.add_parser("apply", help="binarize one image with one method")
    apply_p.add_argument("--method", required=True, choices=["mean", "ptile", "hdt", "emt", "manual"])
    apply_p.add_argument("-i", "--input", action="append", required=True, type=Path)
    apply_p.add_argument("-o", "--output", required=True, type=Path)
    _add_method_params(apply_p)

    hist_p = sub.add_parser("histogram", help="print the 256-bin gray-level histogram")
    hist_p.add_argument("-i", "--input", action="append", required=True, type=Path)

    cmp_p = sub.add_parser("compare", help="run every method over a batch of images")
    cmp_p.add_argument("-i", "--input", action="append", required=True, type=Path)
    cmp_p.add_argument("-o", "--output", type=Path, default=Path("."),
                       help="directory for masks and reports (default: current dir)")
    _add_method_params(cmp_p)

    serve_p = sub.add_parser("serve", help="start the HTTP service")
    serve_p.add_argument("--port", type=int, default=8080)
    return parser


def _add_method_params(sub: argparse.ArgumentParser):
    sub.add_argument("--p", type=float, default=DEFAULT_P,
                     help=f"object area fraction for ptile (default {DEFAULT_P})")
    sub.add_argument("--t", action="append", type=int, default=None,
                     help="manual threshold; repeatable in compare, one per input image")
    sub.add_argument("--edge-percentile", type=float, default=DEFAULT_EDGE_PERCENTILE,
                     help=f"edge-magnitude quantile kept by emt (default {DEFAULT_EDGE_PERCENTILE})")


def parse_config(argv) -> CliConfig:
    ns = build_parser().parse_args(argv)
    return CliConfig(
        command=ns.command,
        inputs=list(getattr(ns, "input", []) or []),
        output=getattr(ns, "output", None),
        method=getattr(ns, "method", None),
        p=getattr(ns, "p", DEFAULT_P),
        t=list(getattr(ns, "t", None) or []),
        edge_percentile=getattr(ns, "edge_percentile", DEFAULT_EDGE_PERCENTILE),
        port=getattr(ns, "port", 8080),
    )


def _read_input(path: Path) -> GrayImage:
    return read_pgm(path.read_bytes())


def _run_one(img: GrayImage, image_id: str, method: str, config: CliConfig, t: int | None):
    """Time one selector + binarization; returns (entry, mask)."""
    start = time.perf_counter_ns()
    result = select_threshold(
        img, method, p=config.p, t=t, edge_percentile=config.edge_percentile
    )
    mask = apply_threshold(img, result.t)
    elapsed = (time.perf_counter_ns() - start) // 1000
    entry = ReportEntry(
        image_id=image_id,
        method=method,
        t=result.t,
        criterion=result.criterion,
        foreground_fraction=foreground_fraction(mask),
        elapsed_micros=elapsed,
    )
    return entry, mask


def cmd_apply(config: CliConfig) -> int:
    img = _read_input(config.inputs[0])
    t = config.t[0] if config.t else None
    if config.method == "manual" and t is None:
        raise ValueError("--method manual requires --t")
    entry, mask = _run_one(img, config.inputs[0].stem, config.method, config, t)
    config.output.write_bytes(write_pgm(mask))
    print(json.dumps(entry_to_dict(entry)))
    return EXIT_OK


def cmd_histogram(config: CliConfig) -> int:
    hist = compute_histogram(_read_input(config.inputs[0]))
    print(json.dumps({"counts": hist.counts.tolist(), "total": hist.total}))
    return EXIT_OK


def cmd_compare(config: CliConfig) -> int:
    out_dir = config.output
    out_dir.mkdir(parents=True, exist_ok=True)
    ids = _unique_stems(config.inputs)

    entries = []
    failures = []
    masks = {}
    for index, path in enumerate(config.inputs):
        img = _read_input(path)
        image_id = ids[index]
        manual_t = config.t[index] if index < len(config.t) else None
        for method in COMPARE_ORDER:
            if method == "manual" and manual_t is None:
                continue
            try:
                entry, mask = _run_one(img, image_id, method, config, manual_t)
            except NoEdgesError as exc:
                failures.append({"image_id": image_id, "method": method, "error": str(exc)})
                continue
            entries.append(entry)
            masks[(image_id, method)] = mask
            (out_dir / f"{image_id}.{method}.pgm").write_bytes(write_pgm(mask))

    report = json.loads(write_report(entries))
    report.extend(failures)
    (out_dir / "report.json").write_bytes(json.dumps(report, indent=2).encode("utf-8"))

    disagreement = {}
    for image_id in ids:
        ran = [m for m in COMPARE_ORDER if (image_id, m) in masks]
        disagreement[image_id] = {
            a: {b: round(pixel_disagreement(masks[(image_id, a)], masks[(image_id, b)]), 6) for b in ran}
            for a in ran
        }
    (out_dir / "disagreement.json").write_bytes(
        json.dumps(disagreement, indent=2).encode("utf-8")
    )

    print(json.dumps({"report": str(out_dir / "report.json"), "entries": len(entries), "failures": len(failures)}))
    return EXIT_OK if entries else EXIT_NO_EDGES


def _unique_stems(paths: list[Path]) -> list[str]:
    seen = {}
    ids = []
    for path in paths:
        stem = path.stem
        if stem in seen:
            seen[stem] += 1
            ids.append(f"{stem}_{seen[stem]}")
        else:
            seen[stem] = 0
            ids.append(stem)
    return ids


def cmd_serve(config: CliConfig) -> int:
    import uvicorn

    from .service import create_app

    static_dir = Path("frontend/dist")
    if not static_dir.is_dir():
        static_dir = None
    else:
        print(f"serving UI from {static_dir}", file=sys.stderr)
    uvicorn.run(create_app(static_dir=static_dir), host="127.0.0.1", port=config.port)
    return EXIT_OK


def main(argv=None) -> int:
    config = parse_config(argv)
    handler = {
        "apply": cmd_apply,
        "histogram": cmd_histogram,
        "compare": cmd_compare,
        "serve": cmd_serve,
    }[config.command]
    try:
        return handler(config)
    except NoEdgesError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NO_EDGES
    except (FormatError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT


def entrypoint():
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
