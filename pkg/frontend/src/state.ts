// Explorer view state and its transitions. State objects are snapshots:
// every transition returns a new state so the DOM layer can re-render from
// scratch or diff, and tests stay order-independent.

import { LoadError, parseBundle } from "./bundle.js";
import { GraphIndex } from "./graphindex.js";
import { hotspotIds, validateThresholds } from "./hotspots.js";
import type {
  Bundle,
  MetricOverlay,
  SliceOverlay,
  ThresholdsJson,
  ViewId,
  VertexRecord,
} from "./types.js";
import { VIEW_IDS } from "./types.js";

export interface ViewState {
  bundle: Bundle;
  index: GraphIndex;
  activeView: ViewId;
  activeSheet: number;
  selected: string | null;
  sliceOverlay: SliceOverlay;
  metricOverlay: MetricOverlay;
  thresholds: ThresholdsJson;
  hotspots: Set<string>;
}

function asViewId(name: string): ViewId {
  return (VIEW_IDS as readonly string[]).includes(name)
    ? (name as ViewId)
    : "DependencyGraph";
}

export function loadBundle(data: unknown): ViewState {
  const bundle = parseBundle(data);
  const first = bundle.recommendations[0];
  return {
    bundle,
    index: new GraphIndex(bundle),
    activeView: first ? asViewId(first.view) : "DependencyGraph",
    activeSheet: 0,
    selected: null,
    sliceOverlay: "none",
    metricOverlay: "none",
    thresholds: { ...bundle.thresholds },
    hotspots: hotspotIds(bundle, bundle.thresholds),
  };
}

export function selectCell(state: ViewState, id: string): ViewState {
  const vertex = state.index.vertices.get(id);
  if (!vertex) {
    throw new LoadError(`cannot select unknown cell ${id}`);
  }
  // navigation crosses sheet boundaries transparently
  return { ...state, selected: id, activeSheet: vertex.sheet };
}

export function clearSelection(state: ViewState): ViewState {
  return { ...state, selected: null, sliceOverlay: "none" };
}

export function setView(state: ViewState, view: ViewId): ViewState {
  return { ...state, activeView: view };
}

export function setSheet(state: ViewState, sheet: number): ViewState {
  if (sheet < 0 || sheet >= state.bundle.sheets.length) {
    return state;
  }
  return { ...state, activeSheet: sheet };
}

export function setSliceOverlay(state: ViewState, overlay: SliceOverlay): ViewState {
  return { ...state, sliceOverlay: overlay };
}

export function setMetricOverlay(state: ViewState, overlay: MetricOverlay): ViewState {
  return { ...state, metricOverlay: overlay };
}

export type ThresholdUpdate =
  | { ok: true; state: ViewState }
  | { ok: false; error: string };

export function tuneThresholds(
  state: ViewState,
  changes: Partial<ThresholdsJson>,
): ThresholdUpdate {
  const error = validateThresholds(changes);
  if (error !== null) {
    return { ok: false, error };
  }
  const thresholds = { ...state.thresholds, ...changes };
  return {
    ok: true,
    state: { ...state, thresholds, hotspots: hotspotIds(state.bundle, thresholds) },
  };
}

// The cells the active slice overlay highlights, across all sheets.
export function highlightSet(state: ViewState): Set<string> {
  if (state.sliceOverlay === "none" || state.selected === null) {
    return new Set();
  }
  return state.index.slice(state.selected, state.sliceOverlay);
}

export function selectedVertex(state: ViewState): VertexRecord | null {
  return state.selected === null
    ? null
    : state.index.vertices.get(state.selected) ?? null;
}
