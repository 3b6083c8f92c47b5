"""Command-line client over the analysis pipeline.

Exit codes: 0 success (cycles are findings, not failures), 1 analysis
errors, 2 usage or ingest errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Optional

from sheetlens.errors import CycleError, IngestError, IoError, SheetLensError, UnknownCellError
from sheetlens.export import (
    cell_id,
    export_analysis,
    export_dot,
    render_report,
    write_text_atomic,
)
from sheetlens.graph import SliceDirection
from sheetlens.ingest import load_thresholds
from sheetlens.metrics import Thresholds
from sheetlens.model import parse_a1_address
from sheetlens.pipeline import AnalysisError, AnalysisResult, analyze_path

EXIT_OK = 0
EXIT_ANALYSIS = 1
EXIT_USAGE = 2


def _thresholds(path: Optional[str]) -> Optional[Thresholds]:
    return load_thresholds(path) if path else None


def _analyze(path: str, thresholds_path: Optional[str]) -> AnalysisResult:
    return analyze_path(path, _thresholds(thresholds_path))


def cmd_analyze(args: argparse.Namespace) -> int:
    result = _analyze(args.file, args.thresholds)
    out_dir = Path(args.out) if args.out else Path(f"{Path(args.file).stem}-analysis")
    write_text_atomic(out_dir / "report.txt", render_report(result.report))
    write_text_atomic(
        out_dir / "graph.dot",
        export_dot(result.graph, result.classes, result.workbook.sheet_names()),
    )
    export_analysis(result.bundle(), out_dir / "bundle.json")
    for name in ("report.txt", "graph.dot", "bundle.json"):
        print(out_dir / name)
    if result.report.has_cycles:
        print(f"note: {len(result.report.cycles)} cycle(s) detected; "
              "chain metrics unavailable", file=sys.stderr)
    return EXIT_OK


def cmd_metrics(args: argparse.Namespace) -> int:
    result = _analyze(args.file, args.thresholds)
    sys.stdout.write(render_report(result.report))
    return EXIT_OK


def cmd_slice(args: argparse.Namespace) -> int:
    result = _analyze(args.file, None)
    names = result.workbook.sheet_names()
    direction = SliceDirection.VISIBILITY if args.dir == "vis" else SliceDirection.SCOPE
    addr = parse_a1_address(args.cell, 0, names)
    members = result.graph.slice(addr, direction)
    for member in sorted(members):
        print(cell_id(member, names))
    return EXIT_OK


def cmd_recommend(args: argparse.Namespace) -> int:
    result = _analyze(args.file, None)
    for rank, rec in enumerate(result.recommendations, start=1):
        print(f"{rank}. {rec.view.value} - {rec.rationale}")
    return EXIT_OK


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    uvicorn.run("sheetlens.service.app:app", host=args.host, port=args.port)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sheetlens",
        description="Spreadsheet static analysis: metrics, dependency graph, "
                    "hotspots, and view recommendations.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    analyze = sub.add_parser("analyze", help="write report, DOT, and analysis bundle")
    analyze.add_argument("file", help="workbook document (JSON)")
    analyze.add_argument("--thresholds", help="threshold config file")
    analyze.add_argument("--out", help="output directory (default: <stem>-analysis)")
    analyze.set_defaults(func=cmd_analyze)

    metrics = sub.add_parser("metrics", help="print the metrics report")
    metrics.add_argument("file")
    metrics.add_argument("--thresholds")
    metrics.set_defaults(func=cmd_metrics)

    slc = sub.add_parser("slice", help="print a cell's visibility or scope slice")
    slc.add_argument("file")
    slc.add_argument("cell", help="A1 address, optionally sheet-qualified")
    slc.add_argument("--dir", choices=["vis", "scope"], required=True)
    slc.set_defaults(func=cmd_slice)

    recommend = sub.add_parser("recommend", help="print ranked view recommendations")
    recommend.add_argument("file")
    recommend.set_defaults(func=cmd_recommend)

    serve = sub.add_parser("serve", help="run the HTTP service")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)
    serve.set_defaults(func=cmd_serve)

    return parser


def run_cli(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (IngestError, IoError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (AnalysisError, UnknownCellError, CycleError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ANALYSIS
    except SheetLensError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ANALYSIS


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
