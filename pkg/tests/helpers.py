"""Shared test fixtures: workbook builders, oracles, and a random corpus."""

from __future__ import annotations

import random

from sheetlens.formula import parse_formula
from sheetlens.formula.nodes import FormulaAst
from sheetlens.graph import DependencyHypergraph, build_graph
from sheetlens.model import (
    Cell,
    CellAddress,
    ContentKind,
    Value,
    Workbook,
    WorkbookMetadata,
    Worksheet,
    column_letters,
    parse_a1_address,
)


def build_workbook(
    sheets: dict[str, dict[str, object]],
    name: str = "wb",
    has_pivot_tables: bool = False,
    has_procedural_extension: bool = False,
) -> Workbook:
    """Build a workbook from {sheet: {"A1": content}} where content is a
    number/str/bool; strings starting with "=" become formulas."""
    wb = Workbook(
        name=name,
        metadata=WorkbookMetadata(has_pivot_tables, has_procedural_extension),
    )
    for sheet_name in sheets:
        wb.sheets.append(Worksheet(name=sheet_name))
    names = wb.sheet_names()
    for si, cells in enumerate(sheets.values()):
        for a1, raw in cells.items():
            addr = parse_a1_address(a1, si, names)
            if isinstance(raw, str) and raw.startswith("="):
                cell = Cell(addr, ContentKind.FORMULA, formula_text=raw,
                            ast=parse_formula(raw, addr, names))
            elif isinstance(raw, bool):
                cell = Cell(addr, ContentKind.LITERAL, literal=Value.boolean(raw))
            elif isinstance(raw, (int, float)):
                cell = Cell(addr, ContentKind.LITERAL, literal=Value.number(raw))
            else:
                cell = Cell(addr, ContentKind.LITERAL, literal=Value.text(str(raw)))
            wb.sheets[si].put(cell)
    return wb


def parsed_formulas(wb: Workbook) -> dict[CellAddress, FormulaAst]:
    return {c.addr: c.ast for c in wb.iter_cells() if c.is_formula}


def graph_of(wb: Workbook) -> DependencyHypergraph:
    return build_graph(wb, parsed_formulas(wb))


def golden_workbook() -> Workbook:
    """The six-cell golden workbook: two label literals, one formula with a
    range plus a repeated scalar reference, three data literals."""
    return build_workbook({
        "Sheet1": {
            "A1": "Revenue",
            "A2": 100,
            "B3": "=SUM(B4:B6)+B6",
            "B4": 1,
            "B5": 2,
            "B6": 3,
        }
    }, name="golden")


def addr(a1: str, sheet: int = 0) -> CellAddress:
    return parse_a1_address(a1, sheet)


# --- brute-force oracles ----------------------------------------------------

def brute_force_longest_path(adj: dict, start) -> int:
    """Longest path (edge count) from start by exhaustive DFS; DAG only."""
    best = 0
    for nxt in set(adj.get(start, ())):
        best = max(best, 1 + brute_force_longest_path(adj, nxt))
    return best


def brute_force_reachable(adj: dict, start) -> set:
    """All vertices reachable from start (start excluded), by enumeration."""
    seen = set()
    frontier = [start]
    while frontier:
        u = frontier.pop()
        for w in adj.get(u, ()):
            if w not in seen:
                seen.add(w)
                frontier.append(w)
    seen.discard(start)
    return seen


def enumerate_column_letters(count: int) -> list[str]:
    """First ``count`` column labels in order: A..Z, AA..AZ, BA.. etc."""
    import itertools
    import string

    out: list[str] = []
    length = 1
    while len(out) < count:
        for combo in itertools.product(string.ascii_uppercase, repeat=length):
            out.append("".join(combo))
            if len(out) == count:
                break
        length += 1
    return out


# --- random workbook corpus -------------------------------------------------

def random_workbook(rng: random.Random, max_cells: int = 500) -> Workbook:
    """Random acyclic workbook: a literal region in rows 1..data_rows, then
    formulas that reference only already-placed cells (scalars) or the
    literal region (ranges). Includes copied formula blocks."""
    n_sheets = rng.randint(1, 3)
    sheet_names = [f"S{i + 1}" for i in range(n_sheets)]
    sheets: dict[str, dict[str, object]] = {name: {} for name in sheet_names}
    data_rows = rng.randint(3, 8)
    cols = rng.randint(2, 8)
    placed: list[tuple[int, str]] = []  # (sheet index, A1) in placement order
    budget = rng.randint(10, max_cells)

    def a1(row: int, col: int) -> str:
        return f"{column_letters(col)}{row}"

    count = 0
    for si, name in enumerate(sheet_names):
        for row in range(1, data_rows + 1):
            for col in range(1, cols + 1):
                if count >= budget:
                    break
                kind = rng.random()
                if kind < 0.15:
                    sheets[name][a1(row, col)] = f"label{row}.{col}"
                else:
                    sheets[name][a1(row, col)] = rng.randint(-50, 100)
                placed.append((si, a1(row, col)))
                count += 1

    row_cursor = {si: data_rows + 2 for si in range(n_sheets)}

    def ref_text(si: int, target_si: int, target_a1: str) -> str:
        if target_si == si:
            return target_a1
        return f"{sheet_names[target_si]}!{target_a1}"

    while count < budget:
        si = rng.randrange(n_sheets)
        name = sheet_names[si]
        row = row_cursor[si]
        col = rng.randint(1, cols)
        cell_a1 = a1(row, col)
        if cell_a1 in sheets[name]:
            row_cursor[si] += 1
            continue
        choice = rng.random()
        if choice < 0.25 and count + 4 <= budget:
            # copied block: the same relative formula filled down a column
            height = min(rng.randint(2, 6), budget - count)
            src_col = rng.randint(1, cols)
            for i in range(height):
                r = row_cursor[si] + i
                sheets[name][a1(r, col)] = f"={a1(r - data_rows - 1, src_col)}*2"
                placed.append((si, a1(r, col)))
            row_cursor[si] += height
            count += height
            continue
        if choice < 0.5:
            r1 = rng.randint(1, data_rows)
            r2 = rng.randint(r1, data_rows)
            c = rng.randint(1, cols)
            formula = f"=SUM({a1(r1, c)}:{a1(r2, c)})"
        elif choice < 0.75 and placed:
            t_si, t_a1 = placed[rng.randrange(len(placed))]
            u_si, u_a1 = placed[rng.randrange(len(placed))]
            formula = f"={ref_text(si, t_si, t_a1)}+{ref_text(si, u_si, u_a1)}"
        elif choice < 0.9 and placed:
            t_si, t_a1 = placed[rng.randrange(len(placed))]
            formula = f"=IF({ref_text(si, t_si, t_a1)}>0;{ref_text(si, t_si, t_a1)};{rng.randint(0, 9)})"
        else:
            formula = f"={rng.randint(1, 99)}"
        sheets[name][cell_a1] = formula
        placed.append((si, cell_a1))
        row_cursor[si] += 1
        count += 1

    return build_workbook(sheets, name="random")


def random_dag_workbook(rng: random.Random, max_vertices: int = 12) -> Workbook:
    """Small random DAG realized as one column of cells, vertex i at row i+1;
    formulas reference strictly earlier rows (possibly repeating one)."""
    n = rng.randint(2, max_vertices)
    cells: dict[str, object] = {}
    for i in range(n):
        row = i + 1
        if i == 0 or rng.random() < 0.3:
            cells[f"A{row}"] = rng.randint(1, 9)
            continue
        k = rng.randint(1, min(3, i))
        targets = [rng.randint(1, i) for _ in range(k)]
        if rng.random() < 0.2:
            targets.append(targets[0])  # duplicated reference: multiplicity
        cells[f"A{row}"] = "=" + "+".join(f"A{t}" for t in targets)
    return build_workbook({"Sheet1": cells}, name="dag")
