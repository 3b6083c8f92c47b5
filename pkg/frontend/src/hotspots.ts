// Client-side complex-cell recomputation. This re-applies thresholds to the
// analyzer's per-cell metrics; it never measures formulas itself, so at the
// bundle's own thresholds it reproduces the analyzer's set exactly.

import type { Bundle, MetricsJson, ThresholdsJson } from "./types.js";

const THRESHOLD_KEYS: (keyof ThresholdsJson)[] = [
  "t_pathRef", "t_pathDep", "t_spreading", "t_fanin", "t_fanout",
  "t_conditional", "t_nesting",
];

export function validateThresholds(values: Partial<ThresholdsJson>): string | null {
  for (const key of THRESHOLD_KEYS) {
    const value = values[key];
    if (value === undefined) continue;
    if (!Number.isInteger(value) || value < 1) {
      return `${key} must be a positive integer`;
    }
  }
  return null;
}

function violationsOf(metrics: MetricsJson, t: ThresholdsJson): string[] {
  const out: string[] = [];
  if (metrics.path_dep !== null && metrics.path_dep >= t.t_pathDep) out.push("path_dep");
  if (metrics.path_ref !== null && metrics.path_ref >= t.t_pathRef) out.push("path_ref");
  if (metrics.spreading >= t.t_spreading) out.push("spreading");
  if (metrics.fan_in >= t.t_fanin) out.push("fan_in");
  if (metrics.fan_out >= t.t_fanout) out.push("fan_out");
  if (metrics.conditional >= t.t_conditional) out.push("conditional");
  if (metrics.nesting >= t.t_nesting) out.push("nesting");
  return out;
}

export interface Hotspot {
  cell: string;
  violations: string[];
}

export function computeHotspots(bundle: Bundle, thresholds: ThresholdsJson): Hotspot[] {
  const out: Hotspot[] = [];
  for (const vertex of bundle.vertices) {
    if (!vertex.metrics) continue;
    const violations = violationsOf(vertex.metrics, thresholds);
    if (violations.length > 0) {
      out.push({ cell: vertex.id, violations });
    }
  }
  return out;
}

export function hotspotIds(bundle: Bundle, thresholds: ThresholdsJson): Set<string> {
  return new Set(computeHotspots(bundle, thresholds).map((h) => h.cell));
}
