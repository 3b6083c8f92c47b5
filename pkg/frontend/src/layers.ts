// Layered workbook scene: sheets as stacked translucent layers, data
// modules (a sink plus its backward slice) aggregated into per-layer
// nodes, and cross-sheet reference traffic drawn between layers.

import { GraphIndex } from "./graphindex.js";
import type { Bundle } from "./types.js";

export interface ModuleNode {
  sink: string;
  sheet: number;
  cellCount: number; // module members on this layer
}

export interface Layer {
  sheet: number;
  name: string;
  color: string;
  modules: ModuleNode[];
  unassigned: number; // cells on the layer outside every data module
}

export interface InterLayerEdge {
  fromSheet: number;
  toSheet: number;
  count: number; // reference occurrences crossing the pair
}

export interface LayerScene {
  layers: Layer[];
  edges: InterLayerEdge[];
}

// One distinguishable color per sheet, cycled.
const SHEET_COLORS = [
  "#4c78a8", "#f58518", "#54a24b", "#e45756", "#72b7b2",
  "#b279a2", "#eeca3b", "#9d755d",
];

export function sheetColor(sheet: number): string {
  return SHEET_COLORS[sheet % SHEET_COLORS.length]!;
}

export function dataModules(bundle: Bundle, index: GraphIndex): Map<string, Set<string>> {
  const modules = new Map<string, Set<string>>();
  for (const sink of bundle.report.sinks) {
    const members = index.visibility(sink);
    members.add(sink);
    modules.set(sink, members);
  }
  return modules;
}

export function buildLayerScene(bundle: Bundle, index: GraphIndex): LayerScene {
  const modules = dataModules(bundle, index);
  const assigned = new Set<string>();
  for (const members of modules.values()) {
    for (const member of members) assigned.add(member);
  }

  const layers: Layer[] = bundle.sheets.map((name, sheet) => ({
    sheet,
    name,
    color: sheetColor(sheet),
    modules: [],
    unassigned: 0,
  }));
  for (const [sink, members] of modules) {
    const perSheet = new Map<number, number>();
    for (const member of members) {
      const sheet = index.vertices.get(member)!.sheet;
      perSheet.set(sheet, (perSheet.get(sheet) ?? 0) + 1);
    }
    for (const [sheet, cellCount] of perSheet) {
      layers[sheet]!.modules.push({ sink, sheet, cellCount });
    }
  }
  for (const vertex of bundle.vertices) {
    if (!assigned.has(vertex.id)) {
      layers[vertex.sheet]!.unassigned += 1;
    }
  }
  for (const layer of layers) {
    layer.modules.sort((a, b) => (a.sink < b.sink ? -1 : a.sink > b.sink ? 1 : 0));
  }

  const counts = new Map<string, InterLayerEdge>();
  for (const edge of bundle.edges) {
    const fromSheet = index.vertices.get(edge.source)!.sheet;
    for (const target of edge.targets) {
      const toSheet = index.vertices.get(target)!.sheet;
      if (toSheet === fromSheet) continue;
      const key = `${fromSheet}->${toSheet}`;
      const existing = counts.get(key);
      if (existing) {
        existing.count += 1;
      } else {
        counts.set(key, { fromSheet, toSheet, count: 1 });
      }
    }
  }
  const edges = [...counts.values()].sort(
    (a, b) => a.fromSheet - b.fromSheet || a.toSheet - b.toSheet,
  );
  return { layers, edges };
}
