"""The complexity-metric suite: sizes, ratios, equivalence partitions,
per-cell complexity, complex-cell flagging, and the binary design criteria."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from sheetlens.errors import CycleError, IngestError, UnknownCellError
from sheetlens.formula.analyze import extract_references
from sheetlens.formula.catalog import DEFAULT_CATALOG, DYNAMIC_REFERENCE_FUNCTIONS, BuiltinCatalog
from sheetlens.formula.nodes import FormulaAst, FunctionCall
from sheetlens.formula.render import normalize_relative, skeleton
from sheetlens.formula.analyze import conditional_complexity, detect_udf, nesting_level
from sheetlens.graph import (
    CellClass,
    DependencyHypergraph,
    build_graph,
    classify_cells,
    induced_subgraph,
    sources_sinks,
)
from sheetlens.model import CellAddress, Workbook
from sheetlens.formula.parser import parse_formula


@dataclass(frozen=True)
class SizeMetrics:
    sz_v: int
    sz_l: int
    sz_d: int
    sz_f: int
    ed_e: int
    ed_s: int
    ed_h: int


@dataclass(frozen=True)
class RatioMetrics:
    r_l: float
    r_d: float
    r_f: float
    centeredness: Optional[float]  # r_d / r_f; None when r_f = 0


class PartitionKind(Enum):
    COPY = "copy"
    LOGICAL = "logical"
    STRUCTURAL = "structural"


@dataclass
class EquivalenceClass:
    key: str
    members: list[CellAddress]


@dataclass
class EquivalencePartition:
    kind: PartitionKind
    classes: list[EquivalenceClass]

    @property
    def count(self) -> int:
        return len(self.classes)


@dataclass(frozen=True)
class SpreadingBox:
    min_sheet: int
    min_row: int
    min_col: int
    max_sheet: int
    max_row: int
    max_col: int

    @property
    def volume(self) -> int:
        """Cell count of the box; the scalarization of the spreading tuple."""
        return (
            (self.max_sheet - self.min_sheet + 1)
            * (self.max_row - self.min_row + 1)
            * (self.max_col - self.min_col + 1)
        )

    @property
    def sheet_span(self) -> int:
        return self.max_sheet - self.min_sheet


@dataclass(frozen=True)
class CellMetrics:
    spreading_box: SpreadingBox
    spreading_scalar: int
    fan_in: int
    fan_out: int
    path_ref: Optional[int]  # None when cycles make chains unavailable
    path_dep: Optional[int]
    conditional: int
    nesting: int


_THRESHOLD_KEYS = {
    "t_pathRef": "path_ref",
    "t_pathDep": "path_dep",
    "t_spreading": "spreading",
    "t_fanin": "fan_in",
    "t_fanout": "fan_out",
    "t_conditional": "conditional",
    "t_nesting": "nesting",
}


@dataclass(frozen=True)
class Thresholds:
    """Complex-cell cutoffs; a metric at or above its threshold violates it.

    Defaults are configurable working values, not calibrated constants.
    """

    path_ref: int = 5
    path_dep: int = 5
    fan_in: int = 10
    fan_out: int = 10
    conditional: int = 3
    nesting: int = 3
    spreading: int = 200

    def __post_init__(self) -> None:
        for name in ("path_ref", "path_dep", "fan_in", "fan_out",
                     "conditional", "nesting", "spreading"):
            if getattr(self, name) < 1:
                raise ValueError(f"threshold {name} must be a positive integer")

    @staticmethod
    def from_config(data: dict) -> "Thresholds":
        """Build from the flat config document (exactly the seven t_* keys
        allowed, integers only; absent keys keep defaults)."""
        kwargs = {}
        for key, value in data.items():
            if key not in _THRESHOLD_KEYS:
                raise IngestError(f"unknown threshold key: {key!r}", location=key)
            if isinstance(value, bool) or not isinstance(value, int):
                raise IngestError(f"threshold {key} must be an integer", location=key)
            kwargs[_THRESHOLD_KEYS[key]] = value
        try:
            return Thresholds(**kwargs)
        except ValueError as exc:
            raise IngestError(str(exc)) from None

    def to_config(self) -> dict:
        return {key: getattr(self, attr) for key, attr in _THRESHOLD_KEYS.items()}


@dataclass
class ComplexCell:
    addr: CellAddress
    violations: list[str]


@dataclass
class ComplexCellReport:
    cells: list[ComplexCell]

    def addresses(self) -> set[CellAddress]:
        return {c.addr for c in self.cells}


@dataclass(frozen=True)
class WorkbookCriteria:
    has_pivot_tables: bool
    has_procedural_extension: bool
    has_external_sources: bool
    has_udf: bool


@dataclass
class SheetReport:
    name: str
    sizes: SizeMetrics
    ratios: RatioMetrics


@dataclass
class MetricsReport:
    workbook_name: str
    sheet_names: list[str]
    sizes: SizeMetrics
    ratios: RatioMetrics
    partitions: dict[str, EquivalencePartition]
    cell_metrics: dict[CellAddress, CellMetrics]
    complex_cells: ComplexCellReport
    criteria: WorkbookCriteria
    sources: list[CellAddress]
    sinks: list[CellAddress]
    cycles: list[list[CellAddress]]
    thresholds: Thresholds
    per_sheet: list[SheetReport]
    cross_sheet_edge_fraction: float
    max_sheet_span: int
    dynamic_reference_cells: list[CellAddress] = field(default_factory=list)
    udf_names: list[str] = field(default_factory=list)

    @property
    def has_cycles(self) -> bool:
        return bool(self.cycles)

    @property
    def distinct_formulae(self) -> int:
        """g: the copy-partition class count."""
        return self.partitions["copy"].count


def size_metrics(graph: DependencyHypergraph, classes: dict[CellAddress, CellClass]) -> SizeMetrics:
    counts = {CellClass.LABEL: 0, CellClass.DATA: 0, CellClass.FORMULA: 0}
    for cls in classes.values():
        counts[cls] += 1
    simple = sum(1 for e in graph.edges if len(e.targets) == 1)
    hyper = sum(1 for e in graph.edges if len(e.targets) >= 2)
    return SizeMetrics(
        sz_v=len(graph.vertices),
        sz_l=counts[CellClass.LABEL],
        sz_d=counts[CellClass.DATA],
        sz_f=counts[CellClass.FORMULA],
        ed_e=len(graph.edges),
        ed_s=simple,
        ed_h=hyper,
    )


def ratio_metrics(sizes: SizeMetrics) -> RatioMetrics:
    if sizes.sz_v == 0:
        return RatioMetrics(0.0, 0.0, 0.0, None)
    r_l = sizes.sz_l / sizes.sz_v
    r_d = sizes.sz_d / sizes.sz_v
    r_f = sizes.sz_f / sizes.sz_v
    centeredness = r_d / r_f if r_f > 0 else None
    return RatioMetrics(r_l, r_d, r_f, centeredness)


def partition_equivalence(
    formulas: dict[CellAddress, FormulaAst],
    kind: PartitionKind,
    raw_texts: Optional[dict[CellAddress, str]] = None,
) -> EquivalencePartition:
    """Group formula cells by equivalence key.

    Copy equivalence compares anchor-relative normal forms so block-copied
    formulas land in one class; pass ``raw_texts`` to compare literal source
    text instead.
    """
    keyed: dict[str, list[CellAddress]] = {}
    for addr in sorted(formulas):
        ast = formulas[addr]
        if kind == PartitionKind.COPY:
            if raw_texts is not None:
                key = raw_texts[addr]
            else:
                key = normalize_relative(ast, addr)
        elif kind == PartitionKind.LOGICAL:
            key = skeleton(ast, "logical", addr)
        else:
            key = skeleton(ast, "structural")
        keyed.setdefault(key, []).append(addr)
    classes = [EquivalenceClass(key, members) for key, members in keyed.items()]
    classes.sort(key=lambda c: c.members[0])
    return EquivalencePartition(kind=kind, classes=classes)


def per_cell_metrics(
    graph: DependencyHypergraph, addr: CellAddress, ast: FormulaAst
) -> CellMetrics:
    """Metrics for one formula cell; chain fields are None on cyclic graphs."""
    if addr not in graph.vertices:
        raise UnknownCellError(f"not a graph vertex: {addr}")
    referenced = extract_references(ast).internal_addresses()
    box_members = [addr] + referenced
    box = SpreadingBox(
        min_sheet=min(a.sheet for a in box_members),
        min_row=min(a.row for a in box_members),
        min_col=min(a.col for a in box_members),
        max_sheet=max(a.sheet for a in box_members),
        max_row=max(a.row for a in box_members),
        max_col=max(a.col for a in box_members),
    )
    fan_in, fan_out = graph.degrees(addr)
    try:
        path_ref, path_dep = graph.longest_chains(addr)
    except CycleError:
        path_ref = path_dep = None
    return CellMetrics(
        spreading_box=box,
        spreading_scalar=box.volume,
        fan_in=fan_in,
        fan_out=fan_out,
        path_ref=path_ref,
        path_dep=path_dep,
        conditional=conditional_complexity(ast),
        nesting=nesting_level(ast),
    )


def complex_cells(
    metrics: dict[CellAddress, CellMetrics], thresholds: Thresholds
) -> ComplexCellReport:
    """Cells violating any threshold, each with its violated conditions."""
    out: list[ComplexCell] = []
    for addr in sorted(metrics):
        m = metrics[addr]
        violations = []
        if m.path_dep is not None and m.path_dep >= thresholds.path_dep:
            violations.append("path_dep")
        if m.path_ref is not None and m.path_ref >= thresholds.path_ref:
            violations.append("path_ref")
        if m.spreading_scalar >= thresholds.spreading:
            violations.append("spreading")
        if m.fan_in >= thresholds.fan_in:
            violations.append("fan_in")
        if m.fan_out >= thresholds.fan_out:
            violations.append("fan_out")
        if m.conditional >= thresholds.conditional:
            violations.append("conditional")
        if m.nesting >= thresholds.nesting:
            violations.append("nesting")
        if violations:
            out.append(ComplexCell(addr, violations))
    return ComplexCellReport(out)


def workbook_criteria(
    workbook: Workbook,
    parsed: dict[CellAddress, FormulaAst],
    catalog: BuiltinCatalog = DEFAULT_CATALOG,
) -> WorkbookCriteria:
    has_external = any(extract_references(ast).external for ast in parsed.values())
    has_udf = any(detect_udf(ast, catalog) for ast in parsed.values())
    return WorkbookCriteria(
        has_pivot_tables=workbook.metadata.has_pivot_tables,
        has_procedural_extension=workbook.metadata.has_procedural_extension,
        has_external_sources=has_external,
        has_udf=has_udf,
    )


def _uses_dynamic_reference(ast: FormulaAst) -> bool:
    if isinstance(ast, FunctionCall):
        if ast.name in DYNAMIC_REFERENCE_FUNCTIONS:
            return True
        return any(_uses_dynamic_reference(a) for a in ast.args)
    for attr in ("lhs", "rhs", "operand"):
        child = getattr(ast, attr, None)
        if child is not None and _uses_dynamic_reference(child):
            return True
    return False


def full_report(
    workbook: Workbook,
    thresholds: Optional[Thresholds] = None,
    catalog: BuiltinCatalog = DEFAULT_CATALOG,
    graph: Optional[DependencyHypergraph] = None,
    parsed: Optional[dict[CellAddress, FormulaAst]] = None,
) -> MetricsReport:
    """Aggregate report for a workbook, plus per-sheet sub-reports.

    Cycles never abort the report: they are listed and chain metrics are
    marked unavailable instead.
    """
    thresholds = thresholds or Thresholds()
    if parsed is None:
        names = workbook.sheet_names()
        parsed = {
            c.addr: parse_formula(c.formula_text, c.addr, names, catalog)
            for c in workbook.iter_cells()
            if c.is_formula
        }
    if graph is None:
        graph = build_graph(workbook, parsed)

    classes = classify_cells(graph)
    sizes = size_metrics(graph, classes)
    srcs, snks = sources_sinks(graph, classes)
    metrics = {addr: per_cell_metrics(graph, addr, ast) for addr, ast in parsed.items()}
    cross_sheet = sum(
        1 for e in graph.edges if any(t.sheet != e.source.sheet for t in e.targets)
    )
    udf_names = sorted({name for ast in parsed.values() for name in detect_udf(ast, catalog)})

    per_sheet = []
    for ordinal, name in enumerate(workbook.sheet_names()):
        members = [v for v in graph.vertices if v.sheet == ordinal]
        sub = induced_subgraph(graph, members)
        sub_classes = classify_cells(sub)
        sub_sizes = size_metrics(sub, sub_classes)
        per_sheet.append(SheetReport(name, sub_sizes, ratio_metrics(sub_sizes)))

    return MetricsReport(
        workbook_name=workbook.name,
        sheet_names=workbook.sheet_names(),
        sizes=sizes,
        ratios=ratio_metrics(sizes),
        partitions={
            kind.value: partition_equivalence(parsed, kind)
            for kind in PartitionKind
        },
        cell_metrics=metrics,
        complex_cells=complex_cells(metrics, thresholds),
        criteria=workbook_criteria(workbook, parsed, catalog),
        sources=sorted(srcs),
        sinks=sorted(snks),
        cycles=graph.detect_cycles(),
        thresholds=thresholds,
        per_sheet=per_sheet,
        cross_sheet_edge_fraction=cross_sheet / len(graph.edges) if graph.edges else 0.0,
        max_sheet_span=max(
            (m.spreading_box.sheet_span for m in metrics.values()), default=0
        ),
        dynamic_reference_cells=sorted(
            addr for addr, ast in parsed.items() if _uses_dynamic_reference(ast)
        ),
        udf_names=udf_names,
    )
