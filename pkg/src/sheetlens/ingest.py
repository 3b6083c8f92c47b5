"""Loading the canonical workbook document and threshold config files.

The input is a single JSON document::

    {
      "workbook": "name",
      "metadata": {"has_pivot_tables": false, "has_procedural_extension": false},
      "sheets": [
        {"name": "Sheet1",
         "cells": [{"addr": "A1", "value": 12},
                   {"addr": "B3", "formula": "=SUM(B4:B6)+B6"}]}
      ]
    }

Formulas are stored as text here and parsed later by the pipeline.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Union

from sheetlens.errors import AddressSyntaxError, IngestError, UnknownSheetError
from sheetlens.metrics import Thresholds
from sheetlens.model import (
    Cell,
    ContentKind,
    Value,
    Workbook,
    WorkbookMetadata,
    Worksheet,
    parse_a1_address,
)

_METADATA_KEYS = {"has_pivot_tables", "has_procedural_extension"}


def parse_document(data: object, source: str = "<document>") -> Workbook:
    if not isinstance(data, dict):
        raise IngestError("document must be an object", location=source)
    unknown = set(data) - {"workbook", "metadata", "sheets"}
    if unknown:
        raise IngestError(f"unknown document keys: {sorted(unknown)}", location=source)
    name = data.get("workbook")
    if not isinstance(name, str):
        raise IngestError('"workbook" must be a string', location="workbook")
    sheets = data.get("sheets")
    if not isinstance(sheets, list):
        raise IngestError('"sheets" must be a list', location="sheets")

    metadata = WorkbookMetadata()
    raw_meta = data.get("metadata", {})
    if not isinstance(raw_meta, dict):
        raise IngestError('"metadata" must be an object', location="metadata")
    bad = set(raw_meta) - _METADATA_KEYS
    if bad:
        raise IngestError(f"unknown metadata keys: {sorted(bad)}", location="metadata")
    for key in _METADATA_KEYS:
        flag = raw_meta.get(key, False)
        if not isinstance(flag, bool):
            raise IngestError(f"metadata.{key} must be a boolean", location=f"metadata.{key}")
        setattr(metadata, key, flag)

    workbook = Workbook(name=name, metadata=metadata)
    seen_names: set[str] = set()
    for si, sheet_data in enumerate(sheets):
        loc = f"sheets[{si}]"
        if not isinstance(sheet_data, dict):
            raise IngestError("sheet entry must be an object", location=loc)
        sheet_name = sheet_data.get("name")
        if not isinstance(sheet_name, str) or not sheet_name:
            raise IngestError("sheet name must be a non-empty string", location=loc)
        if sheet_name in seen_names:
            raise IngestError(f"duplicate sheet name {sheet_name!r}", location=loc)
        seen_names.add(sheet_name)
        unknown = set(sheet_data) - {"name", "cells"}
        if unknown:
            raise IngestError(f"unknown sheet keys: {sorted(unknown)}", location=loc)
        workbook.sheets.append(Worksheet(name=sheet_name))

    for si, sheet_data in enumerate(sheets):
        ws = workbook.sheets[si]
        cells = sheet_data.get("cells", [])
        if not isinstance(cells, list):
            raise IngestError('"cells" must be a list', location=f"sheets[{si}].cells")
        for ci, entry in enumerate(cells):
            loc = f"sheets[{si}].cells[{ci}]"
            cell = _parse_cell(entry, si, loc)
            if (cell.addr.row, cell.addr.col) in ws.cells:
                raise IngestError(
                    f"duplicate cell address {entry.get('addr')!r}", location=loc
                )
            ws.put(cell)
    return workbook


def _parse_cell(entry: object, sheet: int, loc: str) -> Cell:
    if not isinstance(entry, dict):
        raise IngestError("cell entry must be an object", location=loc)
    unknown = set(entry) - {"addr", "value", "formula"}
    if unknown:
        raise IngestError(f"unknown cell keys: {sorted(unknown)}", location=loc)
    a1 = entry.get("addr")
    if not isinstance(a1, str):
        raise IngestError('cell "addr" must be a string', location=loc)
    try:
        addr = parse_a1_address(a1, sheet)
    except (AddressSyntaxError, UnknownSheetError) as exc:
        raise IngestError(f"bad cell address {a1!r}: {exc}", location=loc) from None

    has_value = "value" in entry
    has_formula = "formula" in entry
    if has_value == has_formula:
        raise IngestError('cell needs exactly one of "value" or "formula"', location=loc)
    if has_formula:
        formula = entry["formula"]
        if not isinstance(formula, str) or not formula.startswith("="):
            raise IngestError('cell "formula" must be a string starting with "="', location=loc)
        return Cell(addr, ContentKind.FORMULA, formula_text=formula)
    raw = entry["value"]
    if isinstance(raw, bool):
        literal = Value.boolean(raw)
    elif isinstance(raw, (int, float)):
        literal = Value.number(float(raw))
    elif isinstance(raw, str):
        literal = Value.text(raw)
    else:
        raise IngestError('cell "value" must be a number, string, or boolean', location=loc)
    return Cell(addr, ContentKind.LITERAL, literal=literal)


def load_workbook(path: Union[str, Path]) -> Workbook:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise IngestError(f"cannot read {path}: {exc.strerror}", location=str(path)) from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise IngestError(f"invalid JSON: {exc}", location=f"{path}:{exc.lineno}") from None
    return parse_document(data, source=str(path))


def load_thresholds(path: Union[str, Path]) -> Thresholds:
    """Flat JSON object with only the seven t_* integer keys."""
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise IngestError(f"cannot read {path}: {exc.strerror}", location=str(path)) from None
    except json.JSONDecodeError as exc:
        raise IngestError(f"invalid JSON: {exc}", location=f"{path}:{exc.lineno}") from None
    if not isinstance(data, dict):
        raise IngestError("threshold config must be a flat object", location=str(path))
    return Thresholds.from_config(data)
