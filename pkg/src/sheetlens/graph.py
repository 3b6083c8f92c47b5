"""The directed dependency hypergraph over a workbook's non-empty cells.

Vertices are the non-empty cells. Each formula cell contributes one simple
edge per scalar reference occurrence and one hyperedge per range reference,
directed formula -> referenced (visibility order). Self-references cannot
live on an edge (head and tail are disjoint) and are kept in a side list so
cycle detection still sees them; references to empty cells create no vertex
and are likewise kept aside for the evaluator's value-0 rule.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Optional

from sheetlens.errors import CycleError, UnknownCellError
from sheetlens.formula.analyze import expand_range, reference_groups
from sheetlens.formula.nodes import CellRef, ExternalRef, FormulaAst, RangeRef
from sheetlens.model import CellAddress, ContentKind, Workbook


class EdgeOrigin(Enum):
    SINGLE_REF = "single"
    RANGE = "range"
    MERGED_FORMULA = "merged"


class CellClass(Enum):
    LABEL = "label"
    DATA = "data"
    FORMULA = "formula"


class SliceDirection(Enum):
    VISIBILITY = "visibility"  # backward: everything contributing to the cell
    SCOPE = "scope"            # forward: everything affected by the cell


@dataclass(frozen=True)
class Hyperedge:
    source: CellAddress
    targets: tuple[CellAddress, ...]
    origin: EdgeOrigin
    range_bounds: Optional[tuple[CellAddress, CellAddress]] = None

    def __post_init__(self) -> None:
        if not self.targets:
            raise ValueError("hyperedge must have at least one target")
        if self.source in self.targets:
            raise ValueError("hyperedge source may not appear among its targets")


@dataclass
class CouplingMatrix:
    """Sparse reference-occurrence counts m(source, target)."""

    entries: dict[tuple[CellAddress, CellAddress], int] = field(default_factory=dict)

    def entry(self, src: CellAddress, dst: CellAddress) -> int:
        return self.entries.get((src, dst), 0)

    def row_sum(self, src: CellAddress) -> int:
        return sum(v for (s, _), v in self.entries.items() if s == src)

    def total(self) -> int:
        return sum(self.entries.values())


class DependencyHypergraph:
    def __init__(self) -> None:
        self.vertices: dict[CellAddress, ContentKind] = {}
        self.edges: list[Hyperedge] = []
        self.self_refs: list[CellAddress] = []
        self.empty_refs: dict[CellAddress, list[CellAddress]] = {}
        self.external_refs: dict[CellAddress, list[ExternalRef]] = {}
        self._precedents: dict[CellAddress, list[CellAddress]] = {}
        self._dependents: dict[CellAddress, list[CellAddress]] = {}
        self._cycles: Optional[list[list[CellAddress]]] = None
        self._chains: Optional[tuple[dict, dict]] = None

    # -- construction ------------------------------------------------------

    def add_vertex(self, addr: CellAddress, kind: ContentKind) -> None:
        self.vertices[addr] = kind
        self._precedents.setdefault(addr, [])
        self._dependents.setdefault(addr, [])

    def add_edge(self, edge: Hyperedge) -> None:
        self.edges.append(edge)
        self._precedents[edge.source].extend(edge.targets)
        for t in edge.targets:
            self._dependents[t].append(edge.source)

    # -- queries -----------------------------------------------------------

    def _check(self, v: CellAddress) -> None:
        if v not in self.vertices:
            raise UnknownCellError(f"not a graph vertex: {v}")

    def precedents(self, v: CellAddress) -> list[CellAddress]:
        """Cells v's formula references, with multiplicity."""
        self._check(v)
        return list(self._precedents[v])

    def dependents(self, v: CellAddress) -> list[CellAddress]:
        """Reference occurrences pointing at v, with multiplicity."""
        self._check(v)
        return list(self._dependents[v])

    def degrees(self, v: CellAddress) -> tuple[int, int]:
        """(fan_in, fan_out) = (references made by v, references made to v)."""
        self._check(v)
        return len(self._precedents[v]), len(self._dependents[v])

    def coupling_matrix(self) -> CouplingMatrix:
        mat = CouplingMatrix()
        for edge in self.edges:
            for t in edge.targets:
                key = (edge.source, t)
                mat.entries[key] = mat.entries.get(key, 0) + 1
        return mat

    def detect_cycles(self) -> list[list[CellAddress]]:
        """Strongly connected components of size > 1 plus self-loops,
        each reported once with vertices in address order."""
        if self._cycles is not None:
            return [list(c) for c in self._cycles]
        adj = {v: sorted(set(self._precedents[v])) for v in self.vertices}
        sccs = _tarjan(sorted(self.vertices), adj)
        cycles = [sorted(scc) for scc in sccs if len(scc) > 1]
        cycles.extend([loop] for loop in sorted(set(self.self_refs)))
        cycles.sort(key=lambda c: (c[0], len(c), c))
        self._cycles = cycles
        return [list(c) for c in cycles]

    @property
    def is_acyclic(self) -> bool:
        return not self.detect_cycles()

    def topological_order(self) -> list[CellAddress]:
        """Vertices with every edge's targets before its source; ties are
        broken by address."""
        cycles = self.detect_cycles()
        if cycles:
            raise CycleError(cycles)
        arcs = {(e.source, t) for e in self.edges for t in e.targets}
        followers: dict[CellAddress, list[CellAddress]] = {v: [] for v in self.vertices}
        indegree = {v: 0 for v in self.vertices}
        for src, tgt in arcs:
            followers[tgt].append(src)
            indegree[src] += 1
        ready = [v for v in self.vertices if indegree[v] == 0]
        heapq.heapify(ready)
        order: list[CellAddress] = []
        while ready:
            v = heapq.heappop(ready)
            order.append(v)
            for nxt in followers[v]:
                indegree[nxt] -= 1
                if indegree[nxt] == 0:
                    heapq.heappush(ready, nxt)
        return order

    def _reach(self, v: CellAddress, forward: bool) -> set[CellAddress]:
        index = self._dependents if forward else self._precedents
        seen: set[CellAddress] = set()
        stack = list(index[v])
        while stack:
            u = stack.pop()
            if u in seen:
                continue
            seen.add(u)
            stack.extend(index[u])
        seen.discard(v)
        return seen

    def slice(self, v: CellAddress, direction: SliceDirection) -> set[CellAddress]:
        """Transitive closure from v, excluding v itself.

        VISIBILITY walks references (the backward data slice), SCOPE walks
        dependents (forward change-impact slice).
        """
        self._check(v)
        cycles = self.detect_cycles()
        if cycles:
            raise CycleError(cycles)
        return self._reach(v, forward=direction == SliceDirection.SCOPE)

    def _chain_maps(self) -> tuple[dict[CellAddress, int], dict[CellAddress, int]]:
        if self._chains is None:
            order = self.topological_order()
            dist_ref: dict[CellAddress, int] = {}
            for v in order:
                dist_ref[v] = max((dist_ref[p] + 1 for p in set(self._precedents[v])), default=0)
            dist_dep: dict[CellAddress, int] = {}
            for v in reversed(order):
                dist_dep[v] = max((dist_dep[d] + 1 for d in set(self._dependents[v])), default=0)
            self._chains = (dist_ref, dist_dep)
        return self._chains

    def longest_chains(self, v: CellAddress) -> tuple[int, int]:
        """(cc_pathRef, cc_pathDep): longest reference / dependent chains."""
        self._check(v)
        dist_ref, dist_dep = self._chain_maps()
        return dist_ref[v], dist_dep[v]


def _tarjan(vertices: list[CellAddress], adj: dict[CellAddress, list[CellAddress]]):
    """Iterative Tarjan SCC; deterministic given sorted inputs."""
    index_of: dict[CellAddress, int] = {}
    lowlink: dict[CellAddress, int] = {}
    on_stack: set[CellAddress] = set()
    stack: list[CellAddress] = []
    sccs: list[list[CellAddress]] = []
    counter = 0

    for root in vertices:
        if root in index_of:
            continue
        work = [(root, iter(adj[root]))]
        index_of[root] = lowlink[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index_of:
                    index_of[w] = lowlink[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(adj[w])))
                    advanced = True
                    break
                if w in on_stack:
                    lowlink[v] = min(lowlink[v], index_of[w])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                lowlink[parent] = min(lowlink[parent], lowlink[v])
            if lowlink[v] == index_of[v]:
                scc = []
                while True:
                    w = stack.pop()
                    on_stack.remove(w)
                    scc.append(w)
                    if w == v:
                        break
                sccs.append(scc)
    return sccs


def build_graph(workbook: Workbook, parsed: dict[CellAddress, FormulaAst]) -> DependencyHypergraph:
    """Assemble the hypergraph from a workbook and its parsed formulas.

    Cycles are permitted here; detection is a separate query.
    """
    graph = DependencyHypergraph()
    for cell in workbook.iter_cells():
        graph.add_vertex(cell.addr, cell.content_kind)

    def is_vertex(addr: CellAddress) -> bool:
        return addr in graph.vertices

    for cell in workbook.iter_cells():
        if not cell.is_formula:
            continue
        src = cell.addr
        ast = parsed[src]
        for group in reference_groups(ast):
            if isinstance(group, ExternalRef):
                graph.external_refs.setdefault(src, []).append(group)
            elif isinstance(group, CellRef):
                target = group.target
                if target == src:
                    graph.self_refs.append(src)
                elif not is_vertex(target):
                    graph.empty_refs.setdefault(src, []).append(target)
                else:
                    graph.add_edge(Hyperedge(src, (target,), EdgeOrigin.SINGLE_REF))
            elif isinstance(group, RangeRef):
                targets = []
                for member in expand_range(group):
                    if member == src:
                        graph.self_refs.append(src)
                    elif not is_vertex(member):
                        graph.empty_refs.setdefault(src, []).append(member)
                    else:
                        targets.append(member)
                if targets:
                    bounds = (group.start.target, group.end.target)
                    graph.add_edge(
                        Hyperedge(src, tuple(targets), EdgeOrigin.RANGE, range_bounds=bounds)
                    )
    return graph


def classify_cells(graph: DependencyHypergraph) -> dict[CellAddress, CellClass]:
    """Formula cells by content; value cells split into data (referenced)
    and label (isolated)."""
    classes: dict[CellAddress, CellClass] = {}
    for v, kind in graph.vertices.items():
        if kind == ContentKind.FORMULA:
            classes[v] = CellClass.FORMULA
        elif graph._dependents[v]:
            classes[v] = CellClass.DATA
        else:
            classes[v] = CellClass.LABEL
    return classes


def sources_sinks(
    graph: DependencyHypergraph, classes: dict[CellAddress, CellClass]
) -> tuple[set[CellAddress], set[CellAddress]]:
    """(data sources, data sinks): referenced value cells and unreferenced
    formula cells."""
    srcs = {v for v, c in classes.items() if c == CellClass.DATA}
    snks = {
        v for v, c in classes.items()
        if c == CellClass.FORMULA and not graph._dependents[v]
    }
    return srcs, snks


def data_modules(
    graph: DependencyHypergraph, classes: dict[CellAddress, CellClass]
) -> dict[CellAddress, set[CellAddress]]:
    """Per sink, the cells contributing to it (its backward slice plus itself)."""
    cycles = graph.detect_cycles()
    if cycles:
        raise CycleError(cycles)
    _, snks = sources_sinks(graph, classes)
    return {
        s: graph.slice(s, SliceDirection.VISIBILITY) | {s}
        for s in sorted(snks)
    }


def induced_subgraph(
    graph: DependencyHypergraph, subset: Iterable[CellAddress]
) -> DependencyHypergraph:
    """Restriction to a vertex subset: edges keep the targets that survive,
    and vanish when their source or all targets fall outside."""
    chosen = set(subset)
    for v in chosen:
        if v not in graph.vertices:
            raise UnknownCellError(f"not a graph vertex: {v}")
    sub = DependencyHypergraph()
    for v, kind in graph.vertices.items():
        if v in chosen:
            sub.add_vertex(v, kind)
    for edge in graph.edges:
        if edge.source not in chosen:
            continue
        kept = tuple(t for t in edge.targets if t in chosen)
        if kept:
            sub.add_edge(Hyperedge(edge.source, kept, edge.origin, edge.range_bounds))
    sub.self_refs = [v for v in graph.self_refs if v in chosen]
    sub.empty_refs = {v: list(refs) for v, refs in graph.empty_refs.items() if v in chosen}
    sub.external_refs = {v: list(refs) for v, refs in graph.external_refs.items() if v in chosen}
    return sub
