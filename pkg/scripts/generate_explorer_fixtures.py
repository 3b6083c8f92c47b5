#!/usr/bin/env python3
"""Regenerate the explorer's test fixtures from the shipped workbooks.

Writes, under frontend/test/fixtures/:
  <name>.bundle.json   analysis bundles in canonical serialization
  slices.golden.json   exact `sheetlens slice` stdout for every cell and
                       direction of every acyclic fixture

Run from the repository root after any analyzer change:
  python3 scripts/generate_explorer_fixtures.py
"""

from __future__ import annotations

import contextlib
import io
import json
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from sheetlens.cli import run_cli  # noqa: E402
from sheetlens.export import cell_id, dumps_bundle  # noqa: E402
from sheetlens.pipeline import analyze_path  # noqa: E402

FIXTURES = ROOT / "fixtures"
OUT = ROOT / "frontend" / "test" / "fixtures"

BUNDLED = [
    "golden.json",
    "cross_sheet.json",
    "data_centered.json",
    "hotspots.json",
    "copy_block.json",
    "months.json",
    "cycle_three.json",
]
ACYCLIC = [name for name in BUNDLED if not name.startswith("cycle")]


def slice_stdout(fixture: Path, cell: str, direction: str) -> str:
    captured = io.StringIO()
    with contextlib.redirect_stdout(captured):
        code = run_cli(["slice", str(fixture), cell, "--dir", direction])
    assert code == 0, f"slice failed for {fixture} {cell} {direction}"
    return captured.getvalue()


def main() -> None:
    OUT.mkdir(parents=True, exist_ok=True)

    empty_doc = {"workbook": "empty", "sheets": [{"name": "Sheet1", "cells": []}]}
    empty_path = OUT / "empty.input.json"
    empty_path.write_text(json.dumps(empty_doc, indent=2) + "\n")
    result = analyze_path(empty_path)
    (OUT / "empty.bundle.json").write_text(dumps_bundle(result.bundle()))
    empty_path.unlink()

    goldens: dict[str, dict[str, dict[str, str]]] = {}
    for name in BUNDLED:
        fixture = FIXTURES / name
        result = analyze_path(fixture)
        stem = name.removesuffix(".json")
        (OUT / f"{stem}.bundle.json").write_text(dumps_bundle(result.bundle()))
        if name not in ACYCLIC:
            continue
        names = result.workbook.sheet_names()
        per_cell: dict[str, dict[str, str]] = {}
        for addr in sorted(result.graph.vertices):
            ident = cell_id(addr, names)
            per_cell[ident] = {
                "visibility": slice_stdout(fixture, ident, "vis"),
                "scope": slice_stdout(fixture, ident, "scope"),
            }
        goldens[stem] = per_cell

    (OUT / "slices.golden.json").write_text(
        json.dumps(goldens, indent=2, sort_keys=True) + "\n"
    )
    print(f"wrote {len(BUNDLED) + 2} fixture files to {OUT}")


if __name__ == "__main__":
    main()
