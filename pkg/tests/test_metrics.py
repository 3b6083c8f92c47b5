from __future__ import annotations

import random

import pytest
from helpers import addr, build_workbook, golden_workbook, graph_of, parsed_formulas, random_workbook
from hypothesis import given
from hypothesis import strategies as st

from sheetlens.errors import IngestError
from sheetlens.graph import classify_cells
from sheetlens.metrics import (
    PartitionKind,
    SizeMetrics,
    Thresholds,
    complex_cells,
    full_report,
    partition_equivalence,
    per_cell_metrics,
    ratio_metrics,
    size_metrics,
    workbook_criteria,
)
from sheetlens.formula.catalog import DEFAULT_CATALOG


def report_of(sheets, **kwargs):
    return full_report(build_workbook(sheets), **kwargs)


def test_size_metrics_golden():
    g = graph_of(golden_workbook())
    sizes = size_metrics(g, classify_cells(g))
    assert sizes.sz_v == 6
    assert (sizes.sz_l, sizes.sz_d, sizes.sz_f) == (2, 3, 1)
    # one hyperedge for the range, one simple edge for the extra scalar ref
    assert sizes.ed_h == 1 and sizes.ed_s == 1 and sizes.ed_e == 2


def test_size_metrics_empty_workbook():
    g = graph_of(build_workbook({"Sheet1": {}}))
    sizes = size_metrics(g, classify_cells(g))
    assert sizes == SizeMetrics(0, 0, 0, 0, 0, 0, 0)


def test_layout_only_sheet():
    report = report_of({"Sheet1": {"A1": "title", "B1": "notes"}})
    assert report.sizes.sz_l == 2 and report.sizes.sz_f == 0


def test_size_partition_identities_random():
    rng = random.Random(42)
    for _ in range(30):
        g = graph_of(random_workbook(rng, max_cells=120))
        sizes = size_metrics(g, classify_cells(g))
        assert sizes.sz_v == sizes.sz_l + sizes.sz_d + sizes.sz_f
        assert sizes.ed_e == sizes.ed_s + sizes.ed_h


def test_ratio_metrics_direct_division():
    sizes = SizeMetrics(sz_v=10, sz_l=2, sz_d=3, sz_f=5, ed_e=0, ed_s=0, ed_h=0)
    ratios = ratio_metrics(sizes)
    assert ratios.r_l == pytest.approx(0.2)
    assert ratios.r_d == pytest.approx(0.3)
    assert ratios.r_f == pytest.approx(0.5)
    assert ratios.centeredness == pytest.approx(0.6)


def test_ratio_metrics_guards():
    no_formulas = ratio_metrics(SizeMetrics(5, 2, 3, 0, 0, 0, 0))
    assert no_formulas.centeredness is None
    empty = ratio_metrics(SizeMetrics(0, 0, 0, 0, 0, 0, 0))
    assert (empty.r_l, empty.r_d, empty.r_f) == (0.0, 0.0, 0.0)
    assert empty.centeredness is None


@given(st.integers(0, 500), st.integers(0, 500), st.integers(0, 500))
def test_ratio_sum_identity(labels, data, formulas):
    total = labels + data + formulas
    ratios = ratio_metrics(SizeMetrics(total, labels, data, formulas, 0, 0, 0))
    if total > 0:
        assert abs(ratios.r_l + ratios.r_d + ratios.r_f - 1.0) <= 1e-12


def test_copy_partition_block():
    cells = {"A1": 1}
    for row in range(1, 11):
        cells[f"A{row}"] = row
        cells[f"B{row}"] = f"=A{row}*2"
    wb = build_workbook({"Sheet1": cells})
    partition = partition_equivalence(parsed_formulas(wb), PartitionKind.COPY)
    assert partition.count == 1
    assert len(partition.classes[0].members) == 10


def test_partition_counts_constants_vs_structure():
    wb = build_workbook({"Sheet1": {"B1": "=A1+1", "B2": "=A2+2"}})
    formulas = parsed_formulas(wb)
    # hand check: same shape, different trailing constant
    assert partition_equivalence(formulas, PartitionKind.COPY).count == 2
    assert partition_equivalence(formulas, PartitionKind.LOGICAL).count == 1
    assert partition_equivalence(formulas, PartitionKind.STRUCTURAL).count == 1


def test_partition_structural_spines_differ():
    wb = build_workbook({"Sheet1": {"C1": "=A1+1", "C2": "=B9*2"}})
    assert partition_equivalence(parsed_formulas(wb), PartitionKind.STRUCTURAL).count == 2


def test_partition_raw_text_switch():
    wb = build_workbook({"Sheet1": {"B1": "=A1*2", "B2": "=A2*2"}})
    formulas = parsed_formulas(wb)
    raw = {c.addr: c.formula_text for c in wb.iter_cells() if c.is_formula}
    assert partition_equivalence(formulas, PartitionKind.COPY).count == 1
    assert partition_equivalence(formulas, PartitionKind.COPY, raw_texts=raw).count == 2


def test_partition_refinement_random():
    rng = random.Random(11)
    for _ in range(25):
        wb = random_workbook(rng, max_cells=150)
        formulas = parsed_formulas(wb)
        if not formulas:
            continue
        g = partition_equivalence(formulas, PartitionKind.COPY).count
        h = partition_equivalence(formulas, PartitionKind.LOGICAL).count
        k = partition_equivalence(formulas, PartitionKind.STRUCTURAL).count
        assert g >= h >= k >= 1


def test_per_cell_metrics_golden():
    wb = golden_workbook()
    g = graph_of(wb)
    b3 = addr("B3")
    metrics = per_cell_metrics(g, b3, parsed_formulas(wb)[b3])
    box = metrics.spreading_box
    # hand min/max over {B3, B4, B5, B6}
    assert (box.min_row, box.max_row) == (3, 6)
    assert (box.min_col, box.max_col) == (2, 2)
    assert (box.min_sheet, box.max_sheet) == (0, 0)
    assert metrics.spreading_scalar == 4
    assert metrics.fan_in == 4 and metrics.fan_out == 0
    assert metrics.path_ref == 1 and metrics.path_dep == 0
    assert metrics.conditional == 0 and metrics.nesting == 1


def test_per_cell_metrics_adjacent():
    wb = build_workbook({"Sheet1": {"A1": 1, "A2": "=A1"}})
    g = graph_of(wb)
    metrics = per_cell_metrics(g, addr("A2"), parsed_formulas(wb)[addr("A2")])
    assert metrics.spreading_scalar == 2


def test_per_cell_metrics_cross_sheet_inflates_spread():
    wb = build_workbook({
        "Jan": {"A1": 1},
        "Feb": {"A1": 1, "A2": "=Jan!A1+A1"},
    })
    g = graph_of(wb)
    metrics = per_cell_metrics(g, addr("A2", sheet=1), parsed_formulas(wb)[addr("A2", sheet=1)])
    assert metrics.spreading_box.sheet_span == 1
    assert metrics.spreading_scalar == 2 * 2 * 1  # two sheets, rows 1..2, one column


def test_per_cell_metrics_spread_includes_empty_refs():
    wb = build_workbook({"Sheet1": {"B1": "=C9+5"}})
    g = graph_of(wb)
    metrics = per_cell_metrics(g, addr("B1"), parsed_formulas(wb)[addr("B1")])
    assert metrics.spreading_box.max_row == 9
    assert metrics.spreading_scalar == 9 * 2


def test_thresholds_validation():
    with pytest.raises(ValueError):
        Thresholds(nesting=0)
    with pytest.raises(IngestError):
        Thresholds.from_config({"t_bogus": 3})
    with pytest.raises(IngestError):
        Thresholds.from_config({"t_nesting": "3"})
    loaded = Thresholds.from_config({"t_nesting": 7})
    assert loaded.nesting == 7 and loaded.fan_in == 10


def test_complex_cells_degenerate_thresholds():
    report = report_of(
        {"Sheet1": {"A1": 1, "A2": "=A1+1", "A3": "=1"}},
        thresholds=Thresholds(path_ref=1, path_dep=1, fan_in=1, fan_out=1,
                              conditional=1, nesting=1, spreading=1),
    )
    # spreading of any formula cell is >= 1, so every formula cell is flagged
    assert report.complex_cells.addresses() == {addr("A2"), addr("A3")}


def test_complex_cells_defaults_golden():
    report = full_report(golden_workbook())
    assert report.complex_cells.cells == []


def test_complex_cells_violation_listed():
    deep = "=SUM(SUM(SUM(SUM(SUM(A1)))))"
    report = report_of({"Sheet1": {"A1": 1, "B1": deep}})
    (cell,) = report.complex_cells.cells
    assert cell.addr == addr("B1")
    assert "nesting" in cell.violations


def test_complex_cells_monotone():
    rng = random.Random(5)
    for _ in range(10):
        wb = random_workbook(rng, max_cells=80)
        report = full_report(wb)
        base = Thresholds(path_ref=1, path_dep=1, fan_in=1, fan_out=1,
                          conditional=1, nesting=1, spreading=1)
        flagged = complex_cells(report.cell_metrics, base).addresses()
        for bump in ("path_ref", "path_dep", "fan_in", "fan_out",
                     "conditional", "nesting", "spreading"):
            raised = Thresholds(**{**{k: 1 for k in (
                "path_ref", "path_dep", "fan_in", "fan_out",
                "conditional", "nesting", "spreading")}, bump: 3})
            assert complex_cells(report.cell_metrics, raised).addresses() <= flagged


def test_workbook_criteria():
    wb = build_workbook({"Sheet1": {"A1": "=[Ext.xlsx]S1!A1", "A2": "=MYFUNC(A1)"}})
    criteria = workbook_criteria(wb, parsed_formulas(wb), DEFAULT_CATALOG)
    assert criteria.has_external_sources
    assert criteria.has_udf
    plain = build_workbook({"Sheet1": {"A1": 3}})
    criteria = workbook_criteria(plain, {}, DEFAULT_CATALOG)
    assert not any([criteria.has_pivot_tables, criteria.has_procedural_extension,
                    criteria.has_external_sources, criteria.has_udf])
    flagged = build_workbook({"Sheet1": {}}, has_pivot_tables=True,
                             has_procedural_extension=True)
    criteria = workbook_criteria(flagged, {}, DEFAULT_CATALOG)
    assert criteria.has_pivot_tables and criteria.has_procedural_extension


def test_full_report_golden():
    report = full_report(golden_workbook())
    assert report.sizes.sz_v == 6
    assert report.distinct_formulae == 1
    assert report.sinks == [addr("B3")]
    assert report.sources == [addr("B4"), addr("B5"), addr("B6")]
    assert not report.has_cycles


def test_full_report_cyclic():
    report = report_of({"Sheet1": {"A1": "=B1", "B1": "=A1"}})
    assert report.has_cycles
    assert report.cycles == [[addr("A1"), addr("B1")]]
    for metrics in report.cell_metrics.values():
        assert metrics.path_ref is None and metrics.path_dep is None
        assert metrics.nesting == 0  # other fields still computed


def test_full_report_per_sheet_sums():
    report = report_of({
        "Jan": {"A1": 1, "A2": "=A1"},
        "Feb": {"A1": 2, "A2": "=Jan!A2+A1", "A3": "note"},
    })
    assert len(report.per_sheet) == 2
    assert sum(s.sizes.sz_v for s in report.per_sheet) == report.sizes.sz_v
    assert report.cross_sheet_edge_fraction > 0
    assert report.max_sheet_span == 1


def test_full_report_flags_dynamic_references():
    report = report_of({"Sheet1": {"A1": 1, "B1": "=OFFSET(A1;1;0)"}})
    assert report.dynamic_reference_cells == [addr("B1")]


def test_copy_equivalent_cells_share_shape_metrics():
    from sheetlens.formula import skeleton

    rng = random.Random(17)
    for _ in range(10):
        wb = random_workbook(rng, max_cells=100)
        formulas = parsed_formulas(wb)
        report = full_report(wb)
        for cls in report.partitions["copy"].classes:
            shapes = {
                (report.cell_metrics[m].conditional, report.cell_metrics[m].nesting)
                for m in cls.members
            }
            assert len(shapes) == 1
            spines = {skeleton(formulas[m], "structural") for m in cls.members}
            assert len(spines) == 1
