// Analysis bundle schema, format_version 1.

export interface ValueJson {
  t: "number" | "text" | "boolean" | "error" | "undefined";
  v?: number | string | boolean;
  display?: string;
}

export interface MetricsJson {
  fan_in: number;
  fan_out: number;
  path_ref: number | null;
  path_dep: number | null;
  conditional: number;
  nesting: number;
  spreading: number;
  box: [number, number, number, number, number, number];
}

export interface VertexRecord {
  id: string;
  sheet: number;
  row: number;
  col: number;
  class: "label" | "data" | "formula";
  content: "literal" | "formula";
  value: ValueJson;
  formula?: string;
  metrics?: MetricsJson;
  violations?: string[];
}

export interface EdgeRecord {
  source: string;
  targets: string[];
  origin: "single" | "range" | "merged";
  range?: string;
}

export interface SizesJson {
  sz_v: number;
  sz_l: number;
  sz_d: number;
  sz_f: number;
  ed_e: number;
  ed_s: number;
  ed_h: number;
}

export interface RatiosJson {
  r_l: number;
  r_d: number;
  r_f: number;
  centeredness: number | null;
}

export interface PartitionJson {
  count: number;
  classes: { key: string; members: string[] }[];
}

export interface ComplexCellJson {
  cell: string;
  violations: string[];
}

export interface ReportJson {
  sizes: SizesJson;
  ratios: RatiosJson;
  partitions: Record<string, PartitionJson>;
  sources: string[];
  sinks: string[];
  criteria: Record<string, boolean>;
  complex_cells: ComplexCellJson[];
  per_sheet: { name: string; sizes: SizesJson; ratios: RatiosJson }[];
  cross_sheet_edge_fraction: number;
  max_sheet_span: number;
  dynamic_reference_cells: string[];
  udf_names: string[];
}

export interface RecommendationJson {
  view: string;
  rationale: string;
}

// The seven t_* threshold keys as carried by the bundle / config files.
export interface ThresholdsJson {
  t_pathRef: number;
  t_pathDep: number;
  t_spreading: number;
  t_fanin: number;
  t_fanout: number;
  t_conditional: number;
  t_nesting: number;
}

export interface Bundle {
  format_version: number;
  workbook: string;
  sheets: string[];
  metadata: { has_pivot_tables: boolean; has_procedural_extension: boolean };
  thresholds: ThresholdsJson;
  vertices: VertexRecord[];
  edges: EdgeRecord[];
  self_refs: string[];
  external_refs: { cell: string; workbook: string; raw: string }[];
  cycles: string[][];
  report: ReportJson;
  recommendations: RecommendationJson[];
}

export const VIEW_IDS = [
  "LayeredWorkbook",
  "DependencyGraph",
  "CopyClassMap",
  "DataHeatmap",
  "HotspotList",
] as const;

export type ViewId = (typeof VIEW_IDS)[number];

export type SliceOverlay = "none" | "visibility" | "scope";

export type MetricOverlay =
  | "none"
  | "class"
  | "fan_in"
  | "fan_out"
  | "path_ref"
  | "path_dep"
  | "conditional"
  | "nesting"
  | "spreading";
