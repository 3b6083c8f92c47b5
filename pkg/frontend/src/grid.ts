// Grid scene construction: the sparse sheet grid with the value/formula
// layer toggle, metric or class overlay colors, hotspot markers, slice
// highlights, and the current selection.

import { renderValue } from "./bundle.js";
import { highlightSet, type ViewState } from "./state.js";
import type { MetricOverlay, VertexRecord } from "./types.js";

export type GridLayer = "value" | "formula";

export interface GridCellView {
  id: string;
  row: number;
  col: number;
  text: string;
  color: string | null;
  marker: boolean; // complex under live thresholds
  selected: boolean;
  highlighted: boolean;
}

export interface GridScene {
  sheet: number;
  sheetName: string;
  rows: number;
  cols: number;
  cells: GridCellView[];
}

const CLASS_COLORS: Record<string, string> = {
  label: "#d9d9d9",
  data: "#cfe2f3",
  formula: "#fff2cc",
};

function metricValue(vertex: VertexRecord, overlay: MetricOverlay): number {
  if (!vertex.metrics) return 0;
  switch (overlay) {
    case "fan_in": return vertex.metrics.fan_in;
    case "fan_out": return vertex.metrics.fan_out;
    case "path_ref": return vertex.metrics.path_ref ?? 0;
    case "path_dep": return vertex.metrics.path_dep ?? 0;
    case "conditional": return vertex.metrics.conditional;
    case "nesting": return vertex.metrics.nesting;
    case "spreading": return vertex.metrics.spreading;
    default: return 0;
  }
}

// Linear white-to-red ramp; the scale spans the whole workbook so colors
// are comparable across sheets.
export function heatColor(value: number, max: number): string {
  if (max <= 0) return "#ffffff";
  const ratio = Math.max(0, Math.min(1, value / max));
  const other = Math.round(255 - 180 * ratio);
  const hex = other.toString(16).padStart(2, "0");
  return `#ff${hex}${hex}`;
}

export function buildGridScene(
  state: ViewState,
  layer: GridLayer,
  sheet: number = state.activeSheet,
): GridScene {
  const highlighted = highlightSet(state);
  const overlay = state.metricOverlay;
  let max = 0;
  if (overlay !== "none" && overlay !== "class") {
    for (const vertex of state.bundle.vertices) {
      max = Math.max(max, metricValue(vertex, overlay));
    }
  }

  const cells: GridCellView[] = [];
  let rows = 1;
  let cols = 1;
  for (const vertex of state.bundle.vertices) {
    if (vertex.sheet !== sheet) continue;
    rows = Math.max(rows, vertex.row);
    cols = Math.max(cols, vertex.col);
    let text: string;
    if (layer === "formula" && vertex.formula) {
      text = vertex.formula;
    } else if (layer === "formula" && vertex.content === "literal") {
      text = renderValue(vertex.value);
    } else {
      text = renderValue(vertex.value);
    }
    let color: string | null = null;
    if (overlay === "class") {
      color = CLASS_COLORS[vertex.class] ?? null;
    } else if (overlay !== "none") {
      color = heatColor(metricValue(vertex, overlay), max);
    }
    cells.push({
      id: vertex.id,
      row: vertex.row,
      col: vertex.col,
      text,
      color,
      marker: state.hotspots.has(vertex.id),
      selected: state.selected === vertex.id,
      highlighted: highlighted.has(vertex.id),
    });
  }
  return {
    sheet,
    sheetName: state.bundle.sheets[sheet] ?? `#${sheet}`,
    rows,
    cols,
    cells,
  };
}
