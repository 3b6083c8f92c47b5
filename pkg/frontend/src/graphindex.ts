// Dependency traversal over bundle edges. The explorer never re-derives
// dependencies from formulas; everything walks the exported edge list.

import { compareAddresses, vertexMap } from "./bundle.js";
import type { Bundle, VertexRecord } from "./types.js";

export interface PrecedentEntry {
  id: string;
  origin: "single" | "range" | "merged";
}

export class GraphIndex {
  readonly vertices: Map<string, VertexRecord>;
  private readonly forward = new Map<string, string[]>(); // source -> targets
  private readonly backward = new Map<string, string[]>(); // target -> sources
  private readonly precedentEntries = new Map<string, PrecedentEntry[]>();

  constructor(bundle: Bundle) {
    this.vertices = vertexMap(bundle);
    for (const id of this.vertices.keys()) {
      this.forward.set(id, []);
      this.backward.set(id, []);
      this.precedentEntries.set(id, []);
    }
    for (const edge of bundle.edges) {
      const out = this.forward.get(edge.source)!;
      const entries = this.precedentEntries.get(edge.source)!;
      for (const target of edge.targets) {
        out.push(target);
        entries.push({ id: target, origin: edge.origin });
        this.backward.get(target)!.push(edge.source);
      }
    }
  }

  // References the cell makes, in edge order, multiplicity preserved.
  precedents(id: string): PrecedentEntry[] {
    return this.precedentEntries.get(id) ?? [];
  }

  // Reference occurrences pointing at the cell, multiplicity preserved.
  dependents(id: string): string[] {
    return this.backward.get(id) ?? [];
  }

  private reach(start: string, index: Map<string, string[]>): Set<string> {
    const seen = new Set<string>();
    const stack = [...(index.get(start) ?? [])];
    while (stack.length > 0) {
      const next = stack.pop()!;
      if (seen.has(next)) continue;
      seen.add(next);
      stack.push(...(index.get(next) ?? []));
    }
    seen.delete(start);
    return seen;
  }

  // Everything the cell transitively references (backward data slice).
  visibility(id: string): Set<string> {
    return this.reach(id, this.forward);
  }

  // Everything transitively affected by the cell (forward slice).
  scope(id: string): Set<string> {
    return this.reach(id, this.backward);
  }

  slice(id: string, direction: "visibility" | "scope"): Set<string> {
    return direction === "visibility" ? this.visibility(id) : this.scope(id);
  }

  sortByAddress(ids: Iterable<string>): string[] {
    return [...ids].sort((a, b) =>
      compareAddresses(this.vertices.get(a)!, this.vertices.get(b)!),
    );
  }

  // The exact text the CLI's slice command prints: sorted ids, one per
  // line, trailing newline when non-empty.
  sliceText(id: string, direction: "visibility" | "scope"): string {
    const members = this.sortByAddress(this.slice(id, direction));
    return members.length === 0 ? "" : members.join("\n") + "\n";
  }
}
