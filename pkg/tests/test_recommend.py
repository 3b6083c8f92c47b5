from __future__ import annotations

from pathlib import Path

from sheetlens.pipeline import analyze_path, analyze_workbook
from sheetlens.recommend import ViewId, recommend_views

from helpers import build_workbook

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def views_for(fixture: str) -> list[ViewId]:
    result = analyze_path(FIXTURES / fixture)
    return [r.view for r in result.recommendations]


def test_cross_sheet_ranks_layered_first():
    assert views_for("cross_sheet.json")[0] == ViewId.LAYERED_WORKBOOK


def test_data_centered_ranks_heatmap_first():
    views = views_for("data_centered.json")
    assert views[0] == ViewId.DATA_HEATMAP


def test_hotspots_rank_hotspot_list_first():
    assert views_for("hotspots.json")[0] == ViewId.HOTSPOT_LIST


def test_dependency_graph_always_last():
    for fixture in ("golden.json", "cross_sheet.json", "data_centered.json",
                    "hotspots.json", "copy_block.json", "months.json"):
        assert views_for(fixture)[-1] == ViewId.DEPENDENCY_GRAPH


def test_empty_workbook_only_fallback():
    result = analyze_workbook(build_workbook({"Sheet1": {}}))
    assert [r.view for r in result.recommendations] == [ViewId.DEPENDENCY_GRAPH]


def test_heatmap_ranks_above_copy_class_map():
    # 11 data cells feeding 5 copy-equivalent formulas: r_f = 5/16 > 0.3,
    # g = 1 <= 5/5, and r_d/r_f = 11/5 > 2, so both rules trigger
    cells: dict[str, object] = {f"A{r}": r for r in range(1, 12)}
    for r in range(1, 6):
        cells[f"B{r}"] = f"=A{r}+A{r + 1}+A{r + 6}"
    result = analyze_workbook(build_workbook({"Sheet1": cells}))
    views = [r.view for r in result.recommendations]
    assert ViewId.DATA_HEATMAP in views and ViewId.COPY_CLASS_MAP in views
    assert views.index(ViewId.DATA_HEATMAP) < views.index(ViewId.COPY_CLASS_MAP)


def test_copy_class_trigger():
    # one relative formula filled down 25 rows: r_f = 0.5 > 0.3, g = 1 <= 25/5
    cells: dict[str, object] = {f"B{r}": r for r in range(1, 26)}
    for r in range(1, 26):
        cells[f"C{r}"] = f"=B{r}*2"
    result = analyze_workbook(build_workbook({"Sheet1": cells}))
    assert result.report.distinct_formulae == 1
    assert [r.view for r in result.recommendations][0] == ViewId.COPY_CLASS_MAP


def test_rationales_name_metric_values():
    result = analyze_path(FIXTURES / "cross_sheet.json")
    for rec in result.recommendations:
        assert any(ch.isdigit() for ch in rec.rationale)


def test_recommendations_pure_function_of_report():
    result = analyze_path(FIXTURES / "months.json")
    first = recommend_views(result.report)
    second = recommend_views(result.report)
    assert first == second


def test_recommendations_invariant_under_map_order():
    import dataclasses
    import random

    report = analyze_path(FIXTURES / "months.json").report
    baseline = recommend_views(report)
    rng = random.Random(5)
    for _ in range(5):
        metric_items = list(report.cell_metrics.items())
        partition_items = list(report.partitions.items())
        rng.shuffle(metric_items)
        rng.shuffle(partition_items)
        shuffled = dataclasses.replace(
            report,
            cell_metrics=dict(metric_items),
            partitions=dict(partition_items),
        )
        assert recommend_views(shuffled) == baseline
