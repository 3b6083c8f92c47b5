"""AST-local analysis: reference extraction and formula complexity counts."""

from __future__ import annotations

from dataclasses import dataclass, field

from sheetlens.errors import RefBoundsError
from sheetlens.formula.catalog import BuiltinCatalog
from sheetlens.formula.nodes import (
    ArrayConst,
    Binary,
    CellRef,
    ExternalRef,
    FormulaAst,
    FunctionCall,
    RangeRef,
    Unary,
)
from sheetlens.model import MAX_COLS, MAX_ROWS, CellAddress


@dataclass(frozen=True)
class GridBounds:
    max_row: int = MAX_ROWS
    max_col: int = MAX_COLS


GRID_BOUNDS = GridBounds()


@dataclass
class ReferenceSet:
    """Every reference a formula makes, in left-to-right source order.

    ``internal`` lists (target, occurrence index) pairs with multiplicity:
    a cell referenced twice appears twice, and ranges appear expanded
    (row-major). ``ranges`` keeps the un-expanded ranges for hyperedge
    grouping; ``external`` collects cross-workbook references.
    """

    internal: list[tuple[CellAddress, int]] = field(default_factory=list)
    ranges: list[RangeRef] = field(default_factory=list)
    external: list[ExternalRef] = field(default_factory=list)

    def internal_addresses(self) -> list[CellAddress]:
        return [addr for addr, _ in self.internal]


def expand_range(rng: RangeRef) -> list[CellAddress]:
    """Member addresses of a range, row-major."""
    start, end = rng.start.target, rng.end.target
    return [
        CellAddress(start.sheet, row, col)
        for row in range(start.row, end.row + 1)
        for col in range(start.col, end.col + 1)
    ]


def extract_references(ast: FormulaAst, bounds: GridBounds = GRID_BOUNDS) -> ReferenceSet:
    refs = ReferenceSet()

    def add(addr: CellAddress) -> None:
        refs.internal.append((addr, len(refs.internal)))

    def walk(node: FormulaAst) -> None:
        if isinstance(node, CellRef):
            add(node.target)
        elif isinstance(node, RangeRef):
            end = node.end.target
            if end.row > bounds.max_row or end.col > bounds.max_col:
                raise RefBoundsError(
                    f"range extends to row {end.row}, col {end.col}, beyond "
                    f"grid bounds {bounds.max_row}x{bounds.max_col}"
                )
            refs.ranges.append(node)
            for addr in expand_range(node):
                add(addr)
        elif isinstance(node, ExternalRef):
            refs.external.append(node)
        elif isinstance(node, FunctionCall):
            for arg in node.args:
                walk(arg)
        elif isinstance(node, Binary):
            walk(node.lhs)
            walk(node.rhs)
        elif isinstance(node, Unary):
            walk(node.operand)
        elif isinstance(node, ArrayConst):
            pass  # literal elements only
        # literals: nothing to do

    walk(ast)
    return refs


def reference_groups(ast: FormulaAst):
    """Yield CellRef / RangeRef / ExternalRef nodes in source order.

    Unlike extract_references this keeps ranges unexpanded, which is what
    hyperedge construction needs.
    """
    if isinstance(ast, (CellRef, RangeRef, ExternalRef)):
        yield ast
    elif isinstance(ast, FunctionCall):
        for arg in ast.args:
            yield from reference_groups(arg)
    elif isinstance(ast, Binary):
        yield from reference_groups(ast.lhs)
        yield from reference_groups(ast.rhs)
    elif isinstance(ast, Unary):
        yield from reference_groups(ast.operand)


def nesting_level(ast: FormulaAst) -> int:
    """Maximum depth of function calls along any root-to-leaf path."""
    if isinstance(ast, FunctionCall):
        return 1 + max((nesting_level(a) for a in ast.args), default=0)
    if isinstance(ast, Binary):
        return max(nesting_level(ast.lhs), nesting_level(ast.rhs))
    if isinstance(ast, Unary):
        return nesting_level(ast.operand)
    return 0


def conditional_complexity(ast: FormulaAst) -> int:
    """Number of conditional decisions: one per IF, arity-1 per AND/OR.

    Bare comparisons yield a value rather than a branch and add nothing;
    NOT only forwards the decisions of its argument.
    """
    if isinstance(ast, FunctionCall):
        own = 0
        if ast.name == "IF":
            own = 1
        elif ast.name in ("AND", "OR"):
            own = max(len(ast.args) - 1, 0)
        return own + sum(conditional_complexity(a) for a in ast.args)
    if isinstance(ast, Binary):
        return conditional_complexity(ast.lhs) + conditional_complexity(ast.rhs)
    if isinstance(ast, Unary):
        return conditional_complexity(ast.operand)
    return 0


def detect_udf(ast: FormulaAst, catalog: BuiltinCatalog) -> list[str]:
    """Function names absent from the catalog, deduplicated and sorted."""
    found: set[str] = set()

    def walk(node: FormulaAst) -> None:
        if isinstance(node, FunctionCall):
            if node.name not in catalog:
                found.add(node.name)
            for arg in node.args:
                walk(arg)
        elif isinstance(node, Binary):
            walk(node.lhs)
            walk(node.rhs)
        elif isinstance(node, Unary):
            walk(node.operand)

    walk(ast)
    return sorted(found)
