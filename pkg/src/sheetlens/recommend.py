"""Metric-driven visualization recommendation.

A deterministic rule cascade maps the report onto a ranked list of views:
cross-sheet spread favors the layered workbook scene, data-centeredness a
value heatmap, a copy-heavy formula landscape the copy-class map, flagged
hotspots the hotspot list; the plain dependency graph is always last.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from sheetlens.metrics import MetricsReport


class ViewId(Enum):
    LAYERED_WORKBOOK = "LayeredWorkbook"
    DEPENDENCY_GRAPH = "DependencyGraph"
    COPY_CLASS_MAP = "CopyClassMap"
    DATA_HEATMAP = "DataHeatmap"
    HOTSPOT_LIST = "HotspotList"


@dataclass(frozen=True)
class RecommendationConfig:
    """Trigger constants; documented defaults, all configurable."""

    cross_sheet_edge_share: float = 0.10
    centeredness_ratio: float = 2.0
    formula_share: float = 0.30
    copy_class_divisor: int = 5


DEFAULT_RECOMMENDATION_CONFIG = RecommendationConfig()


@dataclass(frozen=True)
class Recommendation:
    view: ViewId
    rationale: str


def recommend_views(
    report: MetricsReport,
    config: RecommendationConfig = DEFAULT_RECOMMENDATION_CONFIG,
) -> list[Recommendation]:
    """Ranked views; every rationale names the triggering metric value."""
    out: list[Recommendation] = []

    if report.max_sheet_span >= 1:
        out.append(Recommendation(
            ViewId.LAYERED_WORKBOOK,
            f"spreading boxes span up to {report.max_sheet_span + 1} sheets "
            f"(max sheet span {report.max_sheet_span})",
        ))
    elif report.cross_sheet_edge_fraction >= config.cross_sheet_edge_share:
        out.append(Recommendation(
            ViewId.LAYERED_WORKBOOK,
            f"{report.cross_sheet_edge_fraction:.0%} of edges cross sheets "
            f"(threshold {config.cross_sheet_edge_share:.0%})",
        ))

    centeredness = report.ratios.centeredness
    if centeredness is not None and centeredness > config.centeredness_ratio:
        out.append(Recommendation(
            ViewId.DATA_HEATMAP,
            f"data centered: r_d/r_f = {centeredness:.2f} > {config.centeredness_ratio:.1f}",
        ))

    sz_f = report.sizes.sz_f
    g = report.distinct_formulae
    if (report.ratios.r_f > config.formula_share
            and sz_f > 0 and g <= sz_f / config.copy_class_divisor):
        out.append(Recommendation(
            ViewId.COPY_CLASS_MAP,
            f"formula share r_f = {report.ratios.r_f:.2f} with only g = {g} "
            f"copy classes over {sz_f} formula cells",
        ))

    hotspots = len(report.complex_cells.cells)
    if hotspots:
        out.append(Recommendation(
            ViewId.HOTSPOT_LIST,
            f"{hotspots} complex formula cell(s) under the current thresholds",
        ))

    out.append(Recommendation(
        ViewId.DEPENDENCY_GRAPH,
        f"baseline view: {report.sizes.sz_v} cells, {report.sizes.ed_e} edges",
    ))
    return out
