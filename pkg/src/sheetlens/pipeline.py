"""End-to-end analysis: the one orchestration path shared by the CLI and
the HTTP service."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union

from sheetlens.errors import SheetLensError
from sheetlens.evaluate import evaluate_workbook
from sheetlens.export import build_bundle, cell_id
from sheetlens.formula.catalog import DEFAULT_CATALOG, BuiltinCatalog
from sheetlens.formula.nodes import FormulaAst
from sheetlens.formula.parser import parse_formula
from sheetlens.graph import CellClass, DependencyHypergraph, build_graph, classify_cells
from sheetlens.ingest import load_workbook, parse_document
from sheetlens.metrics import MetricsReport, Thresholds, full_report
from sheetlens.model import CellAddress, Value, Workbook
from sheetlens.recommend import Recommendation, recommend_views


class AnalysisError(SheetLensError):
    """A formula failed to parse during analysis; carries the cell id."""

    def __init__(self, message: str, cell: str):
        super().__init__(f"{cell}: {message}")
        self.cell = cell


@dataclass
class AnalysisResult:
    workbook: Workbook
    parsed: dict[CellAddress, FormulaAst]
    graph: DependencyHypergraph
    classes: dict[CellAddress, CellClass]
    report: MetricsReport
    values: dict[CellAddress, Value]
    recommendations: list[Recommendation]

    def bundle(self) -> dict:
        return build_bundle(
            self.workbook, self.graph, self.classes, self.report,
            self.values, self.recommendations,
        )


def analyze_workbook(
    workbook: Workbook,
    thresholds: Optional[Thresholds] = None,
    catalog: BuiltinCatalog = DEFAULT_CATALOG,
) -> AnalysisResult:
    names = workbook.sheet_names()
    parsed: dict[CellAddress, FormulaAst] = {}
    for cell in workbook.iter_cells():
        if not cell.is_formula:
            continue
        if cell.ast is None:
            try:
                cell.ast = parse_formula(cell.formula_text, cell.addr, names, catalog)
            except SheetLensError as exc:
                raise AnalysisError(str(exc), cell_id(cell.addr, names)) from exc
        parsed[cell.addr] = cell.ast

    graph = build_graph(workbook, parsed)
    classes = classify_cells(graph)
    report = full_report(workbook, thresholds, catalog, graph=graph, parsed=parsed)
    values = evaluate_workbook(workbook, graph)
    for cell in workbook.iter_cells():
        cell.computed = values[cell.addr]
    recommendations = recommend_views(report)
    return AnalysisResult(workbook, parsed, graph, classes, report, values, recommendations)


def analyze_document(data: object, thresholds: Optional[Thresholds] = None) -> AnalysisResult:
    return analyze_workbook(parse_document(data), thresholds)


def analyze_path(
    path: Union[str, Path], thresholds: Optional[Thresholds] = None
) -> AnalysisResult:
    return analyze_workbook(load_workbook(path), thresholds)
