// Bundle loading: format check plus referential-integrity scan.
// A bundle that fails here must not render at all.

import type { Bundle, VertexRecord } from "./types.js";

export class LoadError extends Error {}

function fail(message: string): never {
  throw new LoadError(message);
}

export function parseBundle(data: unknown): Bundle {
  if (typeof data !== "object" || data === null) {
    fail("bundle must be a JSON object");
  }
  const bundle = data as Bundle;
  if (bundle.format_version !== 1) {
    fail(`unsupported bundle format_version: ${String(bundle.format_version)}`);
  }
  if (!Array.isArray(bundle.vertices) || !Array.isArray(bundle.edges)) {
    fail("bundle is missing vertices or edges");
  }
  if (!Array.isArray(bundle.sheets) || !bundle.report || !bundle.thresholds) {
    fail("bundle is missing sheets, report, or thresholds");
  }

  const ids = new Set<string>();
  for (const vertex of bundle.vertices) {
    if (typeof vertex.id !== "string" || vertex.id.length === 0) {
      fail("vertex without id");
    }
    if (ids.has(vertex.id)) {
      fail(`duplicate vertex id: ${vertex.id}`);
    }
    if (vertex.sheet < 0 || vertex.sheet >= bundle.sheets.length) {
      fail(`vertex ${vertex.id} names sheet ${vertex.sheet}, out of range`);
    }
    ids.add(vertex.id);
  }
  const resolve = (id: string, where: string) => {
    if (!ids.has(id)) {
      fail(`${where} references unknown cell ${id}`);
    }
  };
  for (const edge of bundle.edges) {
    resolve(edge.source, "edge source");
    if (!Array.isArray(edge.targets) || edge.targets.length === 0) {
      fail(`edge from ${edge.source} has no targets`);
    }
    for (const target of edge.targets) {
      resolve(target, `edge from ${edge.source}`);
    }
  }
  for (const cycle of bundle.cycles ?? []) {
    for (const member of cycle) {
      resolve(member, "cycle list");
    }
  }
  for (const id of bundle.report.sources) resolve(id, "sources");
  for (const id of bundle.report.sinks) resolve(id, "sinks");
  for (const complex of bundle.report.complex_cells) resolve(complex.cell, "complex cells");
  for (const partition of Object.values(bundle.report.partitions)) {
    for (const cls of partition.classes) {
      for (const member of cls.members) resolve(member, "partition");
    }
  }
  return bundle;
}

export function vertexMap(bundle: Bundle): Map<string, VertexRecord> {
  const map = new Map<string, VertexRecord>();
  for (const vertex of bundle.vertices) {
    map.set(vertex.id, vertex);
  }
  return map;
}

// Address order (sheet, row, col): the exact order the analyzer sorts by.
export function compareAddresses(a: VertexRecord, b: VertexRecord): number {
  return a.sheet - b.sheet || a.row - b.row || a.col - b.col;
}

export function renderValue(value: ValueJsonLike): string {
  switch (value.t) {
    case "number": {
      const n = value.v as number;
      return Number.isInteger(n) ? String(n) : String(n);
    }
    case "text":
      return String(value.v ?? "");
    case "boolean":
      return value.v ? "TRUE" : "FALSE";
    case "error":
      return value.display ?? "#ERROR";
    default:
      return "";
  }
}

interface ValueJsonLike {
  t: string;
  v?: number | string | boolean;
  display?: string;
}
