"""Deterministic outputs: text report, DOT graph, and the analysis bundle.

Identical analysis inputs must produce byte-identical artifacts, so every
walk here is over sorted or insertion-stable structures and the bundle is
serialized with one canonical JSON form.
"""

from __future__ import annotations

import json
import os
import tempfile
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union

from sheetlens.errors import IoError
from sheetlens.graph import CellClass, DependencyHypergraph, EdgeOrigin
from sheetlens.metrics import (
    CellMetrics,
    MetricsReport,
    RatioMetrics,
    SizeMetrics,
)
from sheetlens.model import CellAddress, Value, ValueKind, Workbook, format_address
from sheetlens.recommend import Recommendation

FORMAT_VERSION = 1


def cell_id(addr: CellAddress, sheet_names: list[str]) -> str:
    """Stable sheet-qualified id, e.g. ``Sheet1!B3``; used across report,
    DOT, bundle, and the CLI so their outputs agree literally."""
    return format_address(addr, "A1", sheet_names=sheet_names)


# --- text report ------------------------------------------------------------

def _ratio(x: Optional[float]) -> str:
    return "n/a" if x is None else f"{x:.6f}"


def _size_row(name: str, sizes: SizeMetrics) -> str:
    return (f"  {name:<16} {sizes.sz_v:>6} {sizes.sz_l:>6} {sizes.sz_d:>6} "
            f"{sizes.sz_f:>6} {sizes.ed_e:>6} {sizes.ed_s:>6} {sizes.ed_h:>6}")


def render_report(report: MetricsReport) -> str:
    lines: list[str] = []
    names = report.sheet_names
    lines.append(f"Workbook: {report.workbook_name}")
    lines.append(f"Sheets ({len(names)}): {', '.join(names)}")
    lines.append("")
    lines.append("Size")
    for label, value in [
        ("vertices (sz_v)", report.sizes.sz_v),
        ("label cells (sz_l)", report.sizes.sz_l),
        ("data cells (sz_d)", report.sizes.sz_d),
        ("formula cells (sz_f)", report.sizes.sz_f),
        ("edges (ed_e)", report.sizes.ed_e),
        ("simple edges (ed_s)", report.sizes.ed_s),
        ("hyperedges (ed_h)", report.sizes.ed_h),
    ]:
        lines.append(f"  {label:<24} {value}")
    if report.sizes.sz_l > 0 and report.sizes.sz_f == 0:
        lines.append("  note: labels only, no formulas (layout-only sheet?)")
    lines.append("")
    lines.append("Shares")
    lines.append(f"  {'label share (r_l)':<24} {_ratio(report.ratios.r_l)}")
    lines.append(f"  {'data share (r_d)':<24} {_ratio(report.ratios.r_d)}")
    lines.append(f"  {'formula share (r_f)':<24} {_ratio(report.ratios.r_f)}")
    lines.append(f"  {'data/formula (r_d/r_f)':<24} {_ratio(report.ratios.centeredness)}")
    lines.append("")
    lines.append("Formula diversity")
    lines.append(f"  {'copy classes (g)':<24} {report.partitions['copy'].count}")
    lines.append(f"  {'logical classes (h)':<24} {report.partitions['logical'].count}")
    lines.append(f"  {'structural classes (k)':<24} {report.partitions['structural'].count}")
    lines.append("")
    lines.append("Sources and sinks")
    lines.append(f"  {'source count':<24} {len(report.sources)}")
    lines.append(f"  {'sink count':<24} {len(report.sinks)}")
    if report.sinks:
        lines.append("  sinks: " + ", ".join(cell_id(a, names) for a in report.sinks))
    lines.append("")
    lines.append("Binary criteria")
    for label, flag in [
        ("pivot tables", report.criteria.has_pivot_tables),
        ("procedural extension", report.criteria.has_procedural_extension),
        ("external sources", report.criteria.has_external_sources),
        ("user-defined functions", report.criteria.has_udf),
    ]:
        lines.append(f"  {label:<24} {'yes' if flag else 'no'}")
    if report.udf_names:
        lines.append("  udf names: " + ", ".join(report.udf_names))
    if report.dynamic_reference_cells:
        lines.append("  dynamic references in: " + ", ".join(
            cell_id(a, names) for a in report.dynamic_reference_cells))
    lines.append("")
    lines.append("Cycles")
    if not report.cycles:
        lines.append("  none")
    else:
        lines.append("  chain metrics unavailable: circular references present")
        for cycle in report.cycles:
            lines.append("  cycle: " + " -> ".join(cell_id(a, names) for a in cycle))
    lines.append("")
    t = report.thresholds
    lines.append(
        "Complex cells "
        f"(t_pathRef={t.path_ref}, t_pathDep={t.path_dep}, t_spreading={t.spreading}, "
        f"t_fanin={t.fan_in}, t_fanout={t.fan_out}, t_conditional={t.conditional}, "
        f"t_nesting={t.nesting})"
    )
    if not report.complex_cells.cells:
        lines.append("  none")
    else:
        for cell in report.complex_cells.cells:
            lines.append(f"  {cell_id(cell.addr, names):<16} violates {', '.join(cell.violations)}")
    lines.append("")
    lines.append("Per-sheet")
    lines.append(f"  {'sheet':<16} {'sz_v':>6} {'sz_l':>6} {'sz_d':>6} {'sz_f':>6} "
                 f"{'ed_e':>6} {'ed_s':>6} {'ed_h':>6}")
    for sheet in report.per_sheet:
        lines.append(_size_row(sheet.name, sheet.sizes))
    lines.append("")
    lines.append("Formula cell metrics")
    lines.append(f"  {'cell':<16} {'fan_in':>7} {'fan_out':>8} {'path_ref':>9} "
                 f"{'path_dep':>9} {'spread':>7} {'cond':>5} {'nest':>5}")
    for addr in sorted(report.cell_metrics):
        m = report.cell_metrics[addr]
        path_ref = "n/a" if m.path_ref is None else m.path_ref
        path_dep = "n/a" if m.path_dep is None else m.path_dep
        lines.append(
            f"  {cell_id(addr, names):<16} {m.fan_in:>7} {m.fan_out:>8} {path_ref:>9} "
            f"{path_dep:>9} {m.spreading_scalar:>7} {m.conditional:>5} {m.nesting:>5}"
        )
    return "\n".join(lines) + "\n"


# --- DOT export -------------------------------------------------------------

@dataclass(frozen=True)
class DotOptions:
    rankdir: str = "TB"
    duplicate_hyperedges: bool = False  # draw member arcs instead of junctions


_CLASS_STYLE = {
    CellClass.LABEL: ("box", "#d9d9d9"),
    CellClass.DATA: ("box", "#cfe2f3"),
    CellClass.FORMULA: ("ellipse", "#fff2cc"),
}


def _dot_quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(
    graph: DependencyHypergraph,
    classes: dict[CellAddress, CellClass],
    sheet_names: list[str],
    options: DotOptions = DotOptions(),
) -> str:
    """DOT digraph; range hyperedges pass through a small junction node so
    the one-source/many-targets structure stays visible."""
    lines = ["digraph dependencies {", f"  rankdir={options.rankdir};",
             "  node [style=filled];"]
    for addr in sorted(graph.vertices):
        shape, color = _CLASS_STYLE[classes[addr]]
        name = cell_id(addr, sheet_names)
        lines.append(
            f"  {_dot_quote(name)} [label={_dot_quote(name)}, shape={shape}, "
            f'fillcolor="{color}"];'
        )
    junction = 0
    for edge in graph.edges:
        src = _dot_quote(cell_id(edge.source, sheet_names))
        if edge.origin == EdgeOrigin.RANGE and not options.duplicate_hyperedges:
            hub = f"hyper{junction}"
            junction += 1
            lines.append(f'  "{hub}" [shape=point, width=0.08, label=""];')
            lines.append(f'  {src} -> "{hub}" [arrowhead=none];')
            for target in edge.targets:
                lines.append(f'  "{hub}" -> {_dot_quote(cell_id(target, sheet_names))};')
        else:
            for target in edge.targets:
                lines.append(f"  {src} -> {_dot_quote(cell_id(target, sheet_names))};")
    for loop in sorted(set(graph.self_refs)):
        node = _dot_quote(cell_id(loop, sheet_names))
        lines.append(f"  {node} -> {node} [style=dashed];")
    lines.append("}")
    return "\n".join(lines) + "\n"


# --- analysis bundle --------------------------------------------------------

def _value_json(value: Value) -> dict:
    if value.kind == ValueKind.NUMBER:
        return {"t": "number", "v": value.payload}
    if value.kind == ValueKind.TEXT:
        return {"t": "text", "v": value.payload}
    if value.kind == ValueKind.BOOLEAN:
        return {"t": "boolean", "v": value.payload}
    if value.kind == ValueKind.ERROR:
        return {"t": "error", "v": value.payload.value, "display": value.render()}
    return {"t": "undefined"}


def _metrics_json(m: CellMetrics) -> dict:
    box = m.spreading_box
    return {
        "fan_in": m.fan_in,
        "fan_out": m.fan_out,
        "path_ref": m.path_ref,
        "path_dep": m.path_dep,
        "conditional": m.conditional,
        "nesting": m.nesting,
        "spreading": m.spreading_scalar,
        "box": [box.min_sheet, box.min_row, box.min_col,
                box.max_sheet, box.max_row, box.max_col],
    }


def _sizes_json(sizes: SizeMetrics) -> dict:
    return {
        "sz_v": sizes.sz_v, "sz_l": sizes.sz_l, "sz_d": sizes.sz_d, "sz_f": sizes.sz_f,
        "ed_e": sizes.ed_e, "ed_s": sizes.ed_s, "ed_h": sizes.ed_h,
    }


def _ratios_json(ratios: RatioMetrics) -> dict:
    return {
        "r_l": ratios.r_l, "r_d": ratios.r_d, "r_f": ratios.r_f,
        "centeredness": ratios.centeredness,
    }


def build_bundle(
    workbook: Workbook,
    graph: DependencyHypergraph,
    classes: dict[CellAddress, CellClass],
    report: MetricsReport,
    values: dict[CellAddress, Value],
    recommendations: list[Recommendation],
) -> dict:
    """The self-contained analysis export consumed by the explorer."""
    names = workbook.sheet_names()
    ids = {addr: cell_id(addr, names) for addr in graph.vertices}
    violations = {c.addr: c.violations for c in report.complex_cells.cells}

    vertices = []
    for cell in workbook.iter_cells():
        addr = cell.addr
        record: dict = {
            "id": ids[addr],
            "sheet": addr.sheet,
            "row": addr.row,
            "col": addr.col,
            "class": classes[addr].value,
            "content": cell.content_kind.value,
            "value": _value_json(values.get(addr, cell.computed)),
        }
        if cell.is_formula:
            record["formula"] = cell.formula_text
            record["metrics"] = _metrics_json(report.cell_metrics[addr])
            record["violations"] = violations.get(addr, [])
        vertices.append(record)

    edges = []
    for edge in graph.edges:
        record = {
            "source": ids[edge.source],
            "targets": [ids[t] for t in edge.targets],
            "origin": edge.origin.value,
        }
        if edge.range_bounds is not None:
            start, end = edge.range_bounds
            record["range"] = (
                f"{format_address(start, 'A1')}:{format_address(end, 'A1')}"
            )
        edges.append(record)

    external = []
    for addr in sorted(graph.external_refs):
        for ref in graph.external_refs[addr]:
            external.append({"cell": ids[addr], "workbook": ref.workbook, "raw": ref.raw})

    return {
        "format_version": FORMAT_VERSION,
        "workbook": workbook.name,
        "sheets": names,
        "metadata": {
            "has_pivot_tables": workbook.metadata.has_pivot_tables,
            "has_procedural_extension": workbook.metadata.has_procedural_extension,
        },
        "thresholds": report.thresholds.to_config(),
        "vertices": vertices,
        "edges": edges,
        "self_refs": [ids[a] for a in sorted(set(graph.self_refs))],
        "external_refs": external,
        "cycles": [[ids[a] for a in cycle] for cycle in report.cycles],
        "report": {
            "sizes": _sizes_json(report.sizes),
            "ratios": _ratios_json(report.ratios),
            "partitions": {
                kind: {
                    "count": partition.count,
                    "classes": [
                        {"key": cls.key, "members": [ids[m] for m in cls.members]}
                        for cls in partition.classes
                    ],
                }
                for kind, partition in sorted(report.partitions.items())
            },
            "sources": [ids[a] for a in report.sources],
            "sinks": [ids[a] for a in report.sinks],
            "criteria": {
                "has_pivot_tables": report.criteria.has_pivot_tables,
                "has_procedural_extension": report.criteria.has_procedural_extension,
                "has_external_sources": report.criteria.has_external_sources,
                "has_udf": report.criteria.has_udf,
            },
            "complex_cells": [
                {"cell": ids[c.addr], "violations": c.violations}
                for c in report.complex_cells.cells
            ],
            "per_sheet": [
                {"name": s.name, "sizes": _sizes_json(s.sizes), "ratios": _ratios_json(s.ratios)}
                for s in report.per_sheet
            ],
            "cross_sheet_edge_fraction": report.cross_sheet_edge_fraction,
            "max_sheet_span": report.max_sheet_span,
            "dynamic_reference_cells": [ids[a] for a in report.dynamic_reference_cells],
            "udf_names": report.udf_names,
        },
        "recommendations": [
            {"view": r.view.value, "rationale": r.rationale} for r in recommendations
        ],
    }


def dumps_bundle(bundle: dict) -> str:
    """Canonical serialization: sorted keys, two-space indent, newline end.

    Re-serializing a loaded bundle reproduces the bytes exactly.
    """
    return json.dumps(bundle, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def write_text_atomic(path: Union[str, Path], text: str) -> None:
    """Write via temp-file-then-rename so readers never see partial output."""
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as handle:
                handle.write(text)
            os.replace(tmp, path)
        except BaseException:
            os.unlink(tmp)
            raise
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc.strerror}") from None


def export_analysis(bundle: dict, path: Union[str, Path]) -> None:
    write_text_atomic(path, dumps_bundle(bundle))
