"""Formula AST node types.

All nodes are frozen dataclasses so parsed trees compare structurally,
which the print/parse fixpoint and equivalence machinery rely on.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Union

from sheetlens.model import CellAddress


class BinOp(Enum):
    ADD = "+"
    SUB = "-"
    MUL = "*"
    DIV = "/"
    POW = "^"
    CONCAT = "&"
    GT = ">"
    LT = "<"
    EQ = "="
    NEQ = "<>"
    GTEQ = ">="
    LTEQ = "<="


class UnOp(Enum):
    NEG = "-"
    PLUS = "+"


@dataclass(frozen=True)
class NumberLit:
    value: float


@dataclass(frozen=True)
class TextLit:
    value: str


@dataclass(frozen=True)
class BoolLit:
    value: bool


@dataclass(frozen=True)
class CellRef:
    """A single-cell reference with per-component absolute markers.

    ``abs_sheet`` is set when the source carried an explicit sheet prefix;
    sheet references have no relative form.
    """

    target: CellAddress
    abs_row: bool = False
    abs_col: bool = False
    abs_sheet: bool = False


@dataclass(frozen=True)
class RangeRef:
    """A rectangular range; endpoints share a sheet and are normalized so
    start.row <= end.row and start.col <= end.col."""

    start: CellRef
    end: CellRef


@dataclass(frozen=True)
class ExternalRef:
    """Reference into another workbook, kept as an opaque leaf."""

    workbook: str
    raw: str


@dataclass(frozen=True)
class FunctionCall:
    name: str  # stored uppercased
    args: tuple["FormulaAst", ...]


@dataclass(frozen=True)
class Binary:
    op: BinOp
    lhs: "FormulaAst"
    rhs: "FormulaAst"


@dataclass(frozen=True)
class Unary:
    op: UnOp
    operand: "FormulaAst"


@dataclass(frozen=True)
class ArrayConst:
    """Array literal; rows of literal elements only."""

    rows: tuple[tuple["FormulaAst", ...], ...]


FormulaAst = Union[
    NumberLit,
    TextLit,
    BoolLit,
    CellRef,
    RangeRef,
    ExternalRef,
    FunctionCall,
    Binary,
    Unary,
    ArrayConst,
]
