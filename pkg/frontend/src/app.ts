// DOM wiring for the explorer: dual view (grid pane plus visualization
// pane), file-open input, inspector, slice overlays, threshold tuning,
// and the five switchable views.

import { LoadError } from "./bundle.js";
import { buildGridScene, type GridLayer } from "./grid.js";
import { buildInspector } from "./inspector.js";
import { computeHotspots } from "./hotspots.js";
import { buildLayerScene, sheetColor } from "./layers.js";
import {
  clearSelection,
  highlightSet,
  loadBundle,
  selectCell,
  setMetricOverlay,
  setSheet,
  setSliceOverlay,
  setView,
  tuneThresholds,
  type ViewState,
} from "./state.js";
import type { MetricOverlay, SliceOverlay, ThresholdsJson, ViewId } from "./types.js";
import { VIEW_IDS } from "./types.js";

let state: ViewState | null = null;
let gridLayer: GridLayer = "value";
let rotation = 18; // degrees of layer skew in the stacked scene
let zoom = 1;
let isolatedSheet: number | null = null;

const $ = (id: string) => document.getElementById(id)!;

function columnLetters(col: number): string {
  let out = "";
  let n = col;
  while (n > 0) {
    const rem = (n - 1) % 26;
    out = String.fromCharCode(65 + rem) + out;
    n = Math.floor((n - 1) / 26);
  }
  return out;
}

// --- rendering --------------------------------------------------------------

function render(): void {
  if (state === null) return;
  renderToolbar();
  renderGrid();
  renderViz();
  renderInspector();
}

function renderToolbar(): void {
  const s = state!;
  const tabs = $("sheet-tabs");
  tabs.replaceChildren();
  s.bundle.sheets.forEach((name, sheet) => {
    const tab = document.createElement("button");
    tab.textContent = name;
    tab.className = sheet === s.activeSheet ? "tab active" : "tab";
    tab.addEventListener("click", () => {
      state = setSheet(s, sheet);
      render();
    });
    tabs.appendChild(tab);
  });

  const views = $("view-switch");
  views.replaceChildren();
  for (const view of VIEW_IDS) {
    const button = document.createElement("button");
    button.textContent = view;
    button.className = view === s.activeView ? "tab active" : "tab";
    button.addEventListener("click", () => {
      state = setView(s, view);
      render();
    });
    views.appendChild(button);
  }
  ($("layer-toggle") as HTMLButtonElement).textContent =
    gridLayer === "value" ? "show formulas" : "show values";
}

function renderGrid(): void {
  const s = state!;
  const scene = buildGridScene(s, gridLayer);
  const table = document.createElement("table");
  table.className = "grid";
  const head = document.createElement("tr");
  head.appendChild(document.createElement("th"));
  for (let col = 1; col <= scene.cols; col += 1) {
    const th = document.createElement("th");
    th.textContent = columnLetters(col);
    head.appendChild(th);
  }
  table.appendChild(head);

  const byPosition = new Map(scene.cells.map((c) => [`${c.row}:${c.col}`, c]));
  for (let row = 1; row <= scene.rows; row += 1) {
    const tr = document.createElement("tr");
    const th = document.createElement("th");
    th.textContent = String(row);
    tr.appendChild(th);
    for (let col = 1; col <= scene.cols; col += 1) {
      const td = document.createElement("td");
      const cell = byPosition.get(`${row}:${col}`);
      if (cell) {
        td.textContent = cell.text;
        if (cell.color) td.style.backgroundColor = cell.color;
        if (cell.highlighted) td.classList.add("highlighted");
        if (cell.selected) td.classList.add("selected");
        if (cell.marker) {
          const marker = document.createElement("span");
          marker.className = "hotspot-marker";
          marker.textContent = "●";
          td.appendChild(marker);
        }
        td.addEventListener("click", () => {
          state = selectCell(s, cell.id);
          render();
        });
      }
      tr.appendChild(td);
    }
    table.appendChild(tr);
  }
  $("grid-pane").replaceChildren(table);
}

function renderInspector(): void {
  const s = state!;
  const pane = $("inspector");
  pane.replaceChildren();
  if (s.selected === null) {
    pane.textContent = "Click a cell to inspect it.";
    return;
  }
  const panel = buildInspector(s, s.selected);
  const title = document.createElement("h3");
  title.textContent = `${panel.id} (${panel.cellClass})`;
  pane.appendChild(title);
  if (panel.formula) {
    const formula = document.createElement("code");
    formula.textContent = panel.formula;
    pane.appendChild(formula);
  }
  const value = document.createElement("p");
  value.textContent = `value: ${panel.value}`;
  pane.appendChild(value);
  if (panel.metrics.length > 0) {
    const metrics = document.createElement("p");
    metrics.textContent = panel.metrics.map((m) => `${m.name}=${m.value}`).join("  ");
    pane.appendChild(metrics);
  }
  if (panel.violations.length > 0) {
    const violations = document.createElement("p");
    violations.className = "violations";
    violations.textContent = `violates: ${panel.violations.join(", ")}`;
    pane.appendChild(violations);
  }
  pane.appendChild(linkList("precedents", panel.precedents));
  pane.appendChild(linkList("dependents", panel.dependents));
}

function linkList(
  label: string,
  links: { id: string; origin?: string; crossSheet: boolean }[],
): HTMLElement {
  const wrapper = document.createElement("div");
  const caption = document.createElement("span");
  caption.textContent = `${label} (${links.length}): `;
  wrapper.appendChild(caption);
  links.forEach((link) => {
    const a = document.createElement("a");
    a.href = "#";
    a.textContent = link.origin === "range" ? `${link.id} (range)` : link.id;
    if (link.crossSheet) a.classList.add("cross-sheet");
    a.addEventListener("click", (event) => {
      event.preventDefault();
      state = selectCell(state!, link.id);
      render();
    });
    wrapper.appendChild(a);
    wrapper.appendChild(document.createTextNode(" "));
  });
  return wrapper;
}

// --- visualization pane -----------------------------------------------------

function renderViz(): void {
  const s = state!;
  const pane = $("viz-pane");
  pane.replaceChildren();
  switch (s.activeView) {
    case "LayeredWorkbook": return renderLayered(pane);
    case "DependencyGraph": return renderDependencyGraph(pane);
    case "CopyClassMap": return renderCopyClassMap(pane);
    case "DataHeatmap": return renderDataHeatmap(pane);
    case "HotspotList": return renderHotspotList(pane);
  }
}

const SVG_NS = "http://www.w3.org/2000/svg";

function svgElement<K extends keyof SVGElementTagNameMap>(
  tag: K, attrs: Record<string, string | number>,
): SVGElementTagNameMap[K] {
  const element = document.createElementNS(SVG_NS, tag);
  for (const [key, value] of Object.entries(attrs)) {
    element.setAttribute(key, String(value));
  }
  return element;
}

function renderLayered(pane: HTMLElement): void {
  const s = state!;
  const scene = buildLayerScene(s.bundle, s.index);
  const controls = document.createElement("div");
  controls.className = "controls";
  controls.appendChild(slider("rotate", 0, 45, rotation, (v) => { rotation = v; render(); }));
  controls.appendChild(slider("zoom", 5, 30, zoom * 10, (v) => { zoom = v / 10; render(); }));
  const isolate = document.createElement("select");
  const all = document.createElement("option");
  all.value = "";
  all.textContent = "all layers";
  isolate.appendChild(all);
  scene.layers.forEach((layer) => {
    const option = document.createElement("option");
    option.value = String(layer.sheet);
    option.textContent = `only ${layer.name}`;
    isolate.appendChild(option);
  });
  isolate.value = isolatedSheet === null ? "" : String(isolatedSheet);
  isolate.addEventListener("change", () => {
    isolatedSheet = isolate.value === "" ? null : Number(isolate.value);
    render();
  });
  controls.appendChild(isolate);
  pane.appendChild(controls);

  const width = 560;
  const layerHeight = 96;
  const svg = svgElement("svg", {
    width,
    height: (scene.layers.length + 1) * layerHeight * zoom + 40,
    class: "layered",
  });
  const skew = Math.tan((rotation * Math.PI) / 180) * 40;
  const centers = new Map<number, { x: number; y: number }>();
  scene.layers.forEach((layer, position) => {
    if (isolatedSheet !== null && layer.sheet !== isolatedSheet) return;
    const y = 20 + position * layerHeight * zoom;
    const group = svgElement("g", { class: "layer" });
    const plate = svgElement("polygon", {
      points: [
        `${40 + skew},${y}`,
        `${width - 40 + skew},${y}`,
        `${width - 40 - skew},${y + 64 * zoom}`,
        `${40 - skew},${y + 64 * zoom}`,
      ].join(" "),
      fill: layer.color,
      "fill-opacity": 0.22,
      stroke: layer.color,
    });
    group.appendChild(plate);
    const label = svgElement("text", { x: 48 + skew, y: y + 16, class: "layer-label" });
    label.textContent = `${layer.name} (${layer.unassigned} unassigned)`;
    group.appendChild(label);
    layer.modules.forEach((module, slot) => {
      const cx = 90 + slot * 72;
      const cy = y + 40 * zoom;
      const radius = 8 + Math.min(14, module.cellCount * 2);
      const node = svgElement("circle", {
        cx, cy, r: radius,
        fill: sheetColor(layer.sheet),
        "fill-opacity": 0.85,
      });
      node.addEventListener("click", () => {
        state = selectCell(s, module.sink);
        render();
      });
      const title = svgElement("title", {});
      title.textContent = `module ${module.sink}: ${module.cellCount} cell(s) here`;
      node.appendChild(title);
      group.appendChild(node);
    });
    centers.set(layer.sheet, { x: width / 2, y: y + 32 * zoom });
    svg.appendChild(group);
  });
  scene.edges.forEach((edge) => {
    const from = centers.get(edge.fromSheet);
    const to = centers.get(edge.toSheet);
    if (!from || !to) return;
    const line = svgElement("line", {
      x1: from.x, y1: from.y, x2: to.x, y2: to.y,
      stroke: "#444", "stroke-width": Math.min(6, edge.count),
      "marker-end": "url(#arrow)",
      class: "inter-layer",
    });
    svg.appendChild(line);
  });
  const defs = svgElement("defs", {});
  const marker = svgElement("marker", {
    id: "arrow", viewBox: "0 0 10 10", refX: 9, refY: 5,
    markerWidth: 7, markerHeight: 7, orient: "auto-start-reverse",
  });
  marker.appendChild(svgElement("path", { d: "M 0 0 L 10 5 L 0 10 z", fill: "#444" }));
  defs.appendChild(marker);
  svg.appendChild(defs);
  pane.appendChild(svg);
}

function slider(
  label: string, min: number, max: number, value: number,
  onInput: (value: number) => void,
): HTMLElement {
  const wrapper = document.createElement("label");
  wrapper.textContent = label;
  const input = document.createElement("input");
  input.type = "range";
  input.min = String(min);
  input.max = String(max);
  input.value = String(value);
  input.addEventListener("input", () => onInput(Number(input.value)));
  wrapper.appendChild(input);
  return wrapper;
}

function renderDependencyGraph(pane: HTMLElement): void {
  const s = state!;
  const cellWidth = 64;
  const cellHeight = 28;
  const sheetGap = 60;
  const offsets: number[] = [];
  let offset = 20;
  s.bundle.sheets.forEach((_, sheet) => {
    offsets.push(offset);
    const cols = Math.max(
      1, ...s.bundle.vertices.filter((v) => v.sheet === sheet).map((v) => v.col),
    );
    offset += cols * cellWidth + sheetGap;
  });
  const maxRow = Math.max(1, ...s.bundle.vertices.map((v) => v.row));
  const svg = svgElement("svg", {
    width: offset, height: maxRow * cellHeight + 60, class: "depgraph",
  });
  const position = (id: string) => {
    const vertex = s.index.vertices.get(id)!;
    return {
      x: offsets[vertex.sheet]! + (vertex.col - 0.5) * cellWidth,
      y: 30 + (vertex.row - 0.5) * cellHeight,
    };
  };
  for (const edge of s.bundle.edges) {
    const from = position(edge.source);
    if (edge.targets.length >= 2) {
      // junction point keeps the one-source/many-target structure visible
      const points = edge.targets.map(position);
      const hub = {
        x: (from.x + points.reduce((total, p) => total + p.x, 0) / points.length) / 2,
        y: (from.y + points.reduce((total, p) => total + p.y, 0) / points.length) / 2,
      };
      svg.appendChild(svgElement("line", {
        x1: from.x, y1: from.y, x2: hub.x, y2: hub.y, class: "edge",
      }));
      svg.appendChild(svgElement("circle", { cx: hub.x, cy: hub.y, r: 2.5, class: "junction" }));
      for (const point of points) {
        svg.appendChild(svgElement("line", {
          x1: hub.x, y1: hub.y, x2: point.x, y2: point.y, class: "edge arrow",
        }));
      }
    } else {
      const to = position(edge.targets[0]!);
      svg.appendChild(svgElement("line", {
        x1: from.x, y1: from.y, x2: to.x, y2: to.y, class: "edge arrow",
      }));
    }
  }
  const highlighted = highlightSet(s);
  for (const vertex of s.bundle.vertices) {
    const point = position(vertex.id);
    const node = svgElement("circle", {
      cx: point.x, cy: point.y, r: 9,
      class: `node node-${vertex.class}` +
        (highlighted.has(vertex.id) ? " node-highlighted" : "") +
        (vertex.id === s.selected ? " node-selected" : ""),
    });
    node.addEventListener("click", () => {
      state = selectCell(s, vertex.id);
      render();
    });
    const title = svgElement("title", {});
    title.textContent = vertex.id;
    node.appendChild(title);
    svg.appendChild(node);
  }
  pane.appendChild(svg);
}

function renderCopyClassMap(pane: HTMLElement): void {
  const s = state!;
  const partition = s.bundle.report.partitions["copy"];
  if (!partition) return;
  const list = document.createElement("ol");
  partition.classes.forEach((cls) => {
    const item = document.createElement("li");
    const key = document.createElement("code");
    key.textContent = cls.key;
    item.appendChild(key);
    item.appendChild(document.createTextNode(` × ${cls.members.length}: `));
    cls.members.forEach((member) => {
      const a = document.createElement("a");
      a.href = "#";
      a.textContent = member;
      a.addEventListener("click", (event) => {
        event.preventDefault();
        state = selectCell(s, member);
        render();
      });
      item.appendChild(a);
      item.appendChild(document.createTextNode(" "));
    });
    list.appendChild(item);
  });
  const heading = document.createElement("h3");
  heading.textContent = `${partition.count} copy class(es)`;
  pane.appendChild(heading);
  pane.appendChild(list);
}

function renderDataHeatmap(pane: HTMLElement): void {
  const s = state!;
  const numbers = s.bundle.vertices.filter(
    (v) => v.sheet === s.activeSheet && v.value.t === "number",
  );
  const max = Math.max(1, ...numbers.map((v) => Math.abs(v.value.v as number)));
  const table = document.createElement("table");
  table.className = "grid heatmap";
  const maxRow = Math.max(1, ...numbers.map((v) => v.row));
  const maxCol = Math.max(1, ...numbers.map((v) => v.col));
  const byPosition = new Map(numbers.map((v) => [`${v.row}:${v.col}`, v]));
  for (let row = 1; row <= maxRow; row += 1) {
    const tr = document.createElement("tr");
    for (let col = 1; col <= maxCol; col += 1) {
      const td = document.createElement("td");
      const vertex = byPosition.get(`${row}:${col}`);
      if (vertex) {
        const magnitude = Math.abs(vertex.value.v as number) / max;
        const channel = Math.round(255 - magnitude * 200).toString(16).padStart(2, "0");
        td.style.backgroundColor = `#${channel}${channel}ff`;
        td.title = `${vertex.id} = ${vertex.value.v}`;
        td.addEventListener("click", () => {
          state = selectCell(s, vertex.id);
          render();
        });
      }
      tr.appendChild(td);
    }
    table.appendChild(tr);
  }
  const heading = document.createElement("h3");
  heading.textContent = `numeric magnitude, sheet ${s.bundle.sheets[s.activeSheet]}`;
  pane.appendChild(heading);
  pane.appendChild(table);
}

function renderHotspotList(pane: HTMLElement): void {
  const s = state!;
  const hotspots = computeHotspots(s.bundle, s.thresholds);
  const heading = document.createElement("h3");
  heading.textContent = `${hotspots.length} complex cell(s)`;
  pane.appendChild(heading);
  const table = document.createElement("table");
  table.className = "hotspots";
  const head = document.createElement("tr");
  for (const column of ["cell", "violations"]) {
    const th = document.createElement("th");
    th.textContent = column;
    head.appendChild(th);
  }
  table.appendChild(head);
  hotspots.forEach((hotspot) => {
    const tr = document.createElement("tr");
    const cell = document.createElement("td");
    const a = document.createElement("a");
    a.href = "#";
    a.textContent = hotspot.cell;
    a.addEventListener("click", (event) => {
      event.preventDefault();
      state = selectCell(s, hotspot.cell);
      render();
    });
    cell.appendChild(a);
    const violations = document.createElement("td");
    violations.textContent = hotspot.violations.join(", ");
    tr.appendChild(cell);
    tr.appendChild(violations);
    table.appendChild(tr);
  });
  pane.appendChild(table);
}

// --- controls ---------------------------------------------------------------

function wireControls(): void {
  ($("file-input") as HTMLInputElement).addEventListener("change", async (event) => {
    const input = event.target as HTMLInputElement;
    const file = input.files?.[0];
    if (!file) return;
    try {
      const parsed: unknown = JSON.parse(await file.text());
      state = loadBundle(parsed);
      gridLayer = "value";
      isolatedSheet = null;
      $("load-error").textContent = "";
      render();
    } catch (error) {
      state = null;
      $("grid-pane").replaceChildren();
      $("viz-pane").replaceChildren();
      $("inspector").replaceChildren();
      $("load-error").textContent =
        error instanceof LoadError || error instanceof SyntaxError
          ? `cannot load bundle: ${error.message}`
          : `unexpected error: ${String(error)}`;
    }
  });

  $("layer-toggle").addEventListener("click", () => {
    gridLayer = gridLayer === "value" ? "formula" : "value";
    render();
  });

  for (const direction of ["none", "visibility", "scope"] as SliceOverlay[]) {
    $(`slice-${direction}`).addEventListener("click", () => {
      if (state) {
        state = setSliceOverlay(state, direction);
        render();
      }
    });
  }

  ($("overlay-select") as HTMLSelectElement).addEventListener("change", (event) => {
    if (state) {
      const value = (event.target as HTMLSelectElement).value as MetricOverlay;
      state = setMetricOverlay(state, value);
      render();
    }
  });

  $("clear-selection").addEventListener("click", () => {
    if (state) {
      state = clearSelection(state);
      render();
    }
  });

  $("thresholds-form").addEventListener("submit", (event) => {
    event.preventDefault();
    if (!state) return;
    const changes: Partial<ThresholdsJson> = {};
    const form = event.target as HTMLFormElement;
    for (const element of Array.from(form.elements)) {
      const input = element as HTMLInputElement;
      if (input.name && input.value !== "") {
        changes[input.name as keyof ThresholdsJson] = Number(input.value);
      }
    }
    const update = tuneThresholds(state, changes);
    if (update.ok) {
      state = update.state;
      $("threshold-error").textContent = "";
      render();
    } else {
      $("threshold-error").textContent = update.error;
    }
  });
}

if (typeof document !== "undefined" && document.getElementById("file-input")) {
  wireControls();
}

export { render as _render, wireControls as _wireControls };
