"""sheetlens: spreadsheet static analysis toolkit.

Parses cell formulas, builds the directed dependency hypergraph, computes a
complexity-metric suite, flags complex formula cells, recommends
visualization strategies, and exports a self-contained analysis bundle for
the interactive explorer.
"""

__version__ = "0.1.0"

from sheetlens.errors import (
    AddressSyntaxError,
    CycleError,
    FormulaSyntaxError,
    IngestError,
    IoError,
    RefBoundsError,
    SheetLensError,
    UnknownCellError,
    UnknownSheetError,
)
from sheetlens.graph import (
    CellClass,
    DependencyHypergraph,
    EdgeOrigin,
    Hyperedge,
    SliceDirection,
    build_graph,
    classify_cells,
    data_modules,
    induced_subgraph,
    sources_sinks,
)
from sheetlens.ingest import load_thresholds, load_workbook, parse_document
from sheetlens.metrics import MetricsReport, Thresholds, full_report
from sheetlens.model import (
    Cell,
    CellAddress,
    ContentKind,
    ErrorKind,
    Value,
    ValueKind,
    Workbook,
    Worksheet,
    format_address,
    get_cell,
    parse_a1_address,
)
from sheetlens.pipeline import AnalysisResult, analyze_document, analyze_path, analyze_workbook
from sheetlens.recommend import Recommendation, ViewId, recommend_views

__all__ = [
    "__version__",
    "AddressSyntaxError",
    "CycleError",
    "FormulaSyntaxError",
    "IngestError",
    "IoError",
    "RefBoundsError",
    "SheetLensError",
    "UnknownCellError",
    "UnknownSheetError",
    "CellClass",
    "DependencyHypergraph",
    "EdgeOrigin",
    "Hyperedge",
    "SliceDirection",
    "build_graph",
    "classify_cells",
    "data_modules",
    "induced_subgraph",
    "sources_sinks",
    "load_thresholds",
    "load_workbook",
    "parse_document",
    "MetricsReport",
    "Thresholds",
    "full_report",
    "Cell",
    "CellAddress",
    "ContentKind",
    "ErrorKind",
    "Value",
    "ValueKind",
    "Workbook",
    "Worksheet",
    "format_address",
    "get_cell",
    "parse_a1_address",
    "AnalysisResult",
    "analyze_document",
    "analyze_path",
    "analyze_workbook",
    "Recommendation",
    "ViewId",
    "recommend_views",
]
