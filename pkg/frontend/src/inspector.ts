// Inspector panel model for the selected cell: content, computed value,
// metrics, threshold violations, and clickable precedent/dependent lists.

import { renderValue } from "./bundle.js";
import { computeHotspots } from "./hotspots.js";
import type { ViewState } from "./state.js";
import type { PrecedentEntry } from "./graphindex.js";

export interface InspectorLink {
  id: string;
  origin?: "single" | "range" | "merged";
  crossSheet: boolean;
}

export interface InspectorPanel {
  id: string;
  sheetName: string;
  cellClass: string;
  formula: string | null;
  value: string;
  metrics: { name: string; value: number | string }[];
  violations: string[];
  precedents: InspectorLink[];
  dependents: InspectorLink[];
}

export function buildInspector(state: ViewState, id: string): InspectorPanel {
  const vertex = state.index.vertices.get(id);
  if (!vertex) {
    throw new Error(`unknown cell ${id}`);
  }
  const metrics: { name: string; value: number | string }[] = [];
  if (vertex.metrics) {
    metrics.push(
      { name: "fan_in", value: vertex.metrics.fan_in },
      { name: "fan_out", value: vertex.metrics.fan_out },
      { name: "path_ref", value: vertex.metrics.path_ref ?? "n/a" },
      { name: "path_dep", value: vertex.metrics.path_dep ?? "n/a" },
      { name: "conditional", value: vertex.metrics.conditional },
      { name: "nesting", value: vertex.metrics.nesting },
      { name: "spreading", value: vertex.metrics.spreading },
    );
  }
  const violations =
    computeHotspots(state.bundle, state.thresholds).find((h) => h.cell === id)
      ?.violations ?? [];

  const link = (target: string, origin?: PrecedentEntry["origin"]): InspectorLink => ({
    id: target,
    origin,
    crossSheet: state.index.vertices.get(target)!.sheet !== vertex.sheet,
  });

  return {
    id,
    sheetName: state.bundle.sheets[vertex.sheet] ?? `#${vertex.sheet}`,
    cellClass: vertex.class,
    formula: vertex.formula ?? null,
    value: renderValue(vertex.value),
    metrics,
    violations,
    precedents: state.index.precedents(id).map((p) => link(p.id, p.origin)),
    dependents: state.index.dependents(id).map((d) => link(d)),
  };
}
