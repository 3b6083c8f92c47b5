"""Canonical renderings of formula ASTs.

Three related forms come out of the same walk:

* pretty_print -- canonical source text (uppercase functions, ";" separators,
  minimal parentheses); parse(pretty_print(parse(t))) == parse(t).
* normalize_relative -- R1C1-style form in which relative references become
  offsets from an anchor, so block-copied formulas share one normal form.
* skeleton -- the normal form abstracted further, for logical / structural
  equivalence keys.
"""

from __future__ import annotations

from typing import Callable, Optional

from sheetlens.formula.nodes import (
    ArrayConst,
    Binary,
    BinOp,
    BoolLit,
    CellRef,
    ExternalRef,
    FormulaAst,
    FunctionCall,
    NumberLit,
    RangeRef,
    TextLit,
    Unary,
)
from sheetlens.model import CellAddress, column_letters, format_sheet_prefix

_LEVEL_CMP = 1
_LEVEL_CONCAT = 2
_LEVEL_ADD = 3
_LEVEL_MUL = 4
_LEVEL_POW = 5
_LEVEL_UNARY = 6
_LEVEL_ATOM = 7

_BIN_LEVEL = {
    BinOp.EQ: _LEVEL_CMP, BinOp.NEQ: _LEVEL_CMP, BinOp.LT: _LEVEL_CMP,
    BinOp.GT: _LEVEL_CMP, BinOp.LTEQ: _LEVEL_CMP, BinOp.GTEQ: _LEVEL_CMP,
    BinOp.CONCAT: _LEVEL_CONCAT,
    BinOp.ADD: _LEVEL_ADD, BinOp.SUB: _LEVEL_ADD,
    BinOp.MUL: _LEVEL_MUL, BinOp.DIV: _LEVEL_MUL,
    BinOp.POW: _LEVEL_POW,
}


def _level(node: FormulaAst) -> int:
    if isinstance(node, Binary):
        return _BIN_LEVEL[node.op]
    if isinstance(node, Unary):
        return _LEVEL_UNARY
    return _LEVEL_ATOM


def render_number(value: float) -> str:
    if value.is_integer() and abs(value) < 1e16:
        return str(int(value))
    return repr(value)


def _render(
    node: FormulaAst,
    ref_fn: Callable[[CellRef], str],
    lit_fn: Callable[[FormulaAst], str],
) -> str:
    def walk(node: FormulaAst) -> str:
        if isinstance(node, (NumberLit, TextLit, BoolLit)):
            return lit_fn(node)
        if isinstance(node, CellRef):
            return ref_fn(node)
        if isinstance(node, RangeRef):
            start = ref_fn(node.start)
            end_ref = node.end
            if end_ref.abs_sheet and node.start.abs_sheet:
                # one prefix is enough; the second endpoint inherits it
                end_ref = CellRef(end_ref.target, end_ref.abs_row, end_ref.abs_col, False)
            return f"{start}:{ref_fn(end_ref)}"
        if isinstance(node, ExternalRef):
            return node.raw
        if isinstance(node, FunctionCall):
            return f"{node.name}({';'.join(walk(a) for a in node.args)})"
        if isinstance(node, ArrayConst):
            rows = "|".join(";".join(walk(v) for v in row) for row in node.rows)
            return "{" + rows + "}"
        if isinstance(node, Unary):
            inner = walk(node.operand)
            if _level(node.operand) < _LEVEL_UNARY:
                inner = f"({inner})"
            return f"{node.op.value}{inner}"
        if isinstance(node, Binary):
            lvl = _BIN_LEVEL[node.op]
            lhs = walk(node.lhs)
            if _level(node.lhs) < lvl:
                lhs = f"({lhs})"
            rhs = walk(node.rhs)
            if _level(node.rhs) <= lvl:
                rhs = f"({rhs})"
            return f"{lhs}{node.op.value}{rhs}"
        raise TypeError(f"unknown AST node: {node!r}")

    return walk(node)


def _literal_text(node: FormulaAst) -> str:
    if isinstance(node, NumberLit):
        return render_number(node.value)
    if isinstance(node, TextLit):
        return '"' + node.value.replace('"', '""') + '"'
    return "TRUE" if node.value else "FALSE"


def pretty_print(ast: FormulaAst, sheet_names: Optional[list[str]] = None) -> str:
    """Canonical formula text, leading '=' included."""

    def ref_text(ref: CellRef) -> str:
        prefix = ""
        if ref.abs_sheet:
            if sheet_names is not None:
                prefix = format_sheet_prefix(sheet_names[ref.target.sheet])
            else:
                prefix = f"S{ref.target.sheet}!"
        col = ("$" if ref.abs_col else "") + column_letters(ref.target.col)
        row = ("$" if ref.abs_row else "") + str(ref.target.row)
        return f"{prefix}{col}{row}"

    return "=" + _render(ast, ref_text, _literal_text)


def _r1c1_component(letter: str, absolute: bool, coord: int, origin: int) -> str:
    if absolute:
        return f"{letter}{coord}"
    return f"{letter}[{coord - origin}]"


def normalize_relative(ast: FormulaAst, anchor: CellAddress) -> str:
    """Anchor-relative normal form; copy-equivalent formulas share it."""

    def ref_text(ref: CellRef) -> str:
        prefix = f"S{ref.target.sheet}!" if ref.abs_sheet else ""
        row = _r1c1_component("R", ref.abs_row, ref.target.row, anchor.row)
        col = _r1c1_component("C", ref.abs_col, ref.target.col, anchor.col)
        return f"{prefix}{row}{col}"

    return "=" + _render(ast, ref_text, _literal_text)


def skeleton(ast: FormulaAst, kind: str, anchor: Optional[CellAddress] = None) -> str:
    """Equivalence key; ``kind`` is "logical" or "structural".

    Logical keeps the relative reference pattern but folds constants to
    CONST and absolute coordinates to ABS; structural keeps only the
    operator/function spine with every operand folded to ARG.
    """
    if kind == "logical":
        if anchor is None:
            raise ValueError("logical skeleton needs the cell's anchor")

        def ref_text(ref: CellRef) -> str:
            prefix = f"S{ref.target.sheet}!" if ref.abs_sheet else ""
            row = "RABS" if ref.abs_row else f"R[{ref.target.row - anchor.row}]"
            col = "CABS" if ref.abs_col else f"C[{ref.target.col - anchor.col}]"
            return f"{prefix}{row}{col}"

        return "=" + _render(ast, ref_text, lambda _node: "CONST")

    if kind == "structural":
        def walk(node: FormulaAst) -> str:
            if isinstance(node, FunctionCall):
                return f"{node.name}({','.join(walk(a) for a in node.args)})"
            if isinstance(node, Binary):
                return f"{node.op.name}({walk(node.lhs)},{walk(node.rhs)})"
            if isinstance(node, Unary):
                return f"{node.op.name}({walk(node.operand)})"
            return "ARG"

        return walk(ast)

    raise ValueError(f"unknown skeleton kind: {kind!r}")
