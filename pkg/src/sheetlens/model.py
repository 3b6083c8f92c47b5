"""Workbook data model: addresses, values, cells, sheets, and address codecs.

Addresses are triples (sheet ordinal, 1-based row, 1-based column). The grid
is capped at 1,048,576 rows by 16,384 columns (column XFD) so the address
codecs have a total, testable domain.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from typing import TYPE_CHECKING, Optional, Union

from sheetlens.errors import AddressSyntaxError, UnknownSheetError

if TYPE_CHECKING:
    from sheetlens.formula.nodes import FormulaAst

MAX_ROWS = 1_048_576
MAX_COLS = 16_384


class ErrorKind(Enum):
    CYCLE = "Cycle"
    NAME = "Name"
    TYPE_MISMATCH = "TypeMismatch"
    DIV0 = "Div0"
    REF = "Ref"


_ERROR_DISPLAY = {
    ErrorKind.CYCLE: "#CYCLE!",
    ErrorKind.NAME: "#NAME?",
    ErrorKind.TYPE_MISMATCH: "#VALUE!",
    ErrorKind.DIV0: "#DIV/0!",
    ErrorKind.REF: "#REF!",
}


class ValueKind(Enum):
    NUMBER = "number"
    TEXT = "text"
    BOOLEAN = "boolean"
    ERROR = "error"
    UNDEFINED = "undefined"


@dataclass(frozen=True)
class Value:
    """A cell value: number, text, boolean, error, or undefined.

    Undefined is the value of every empty cell; numeric contexts treat it
    as 0. Errors compare unequal to every number/text/boolean.
    """

    kind: ValueKind
    payload: Union[float, str, bool, ErrorKind, None] = None

    @staticmethod
    def number(x: float) -> "Value":
        return Value(ValueKind.NUMBER, float(x))

    @staticmethod
    def text(s: str) -> "Value":
        return Value(ValueKind.TEXT, s)

    @staticmethod
    def boolean(b: bool) -> "Value":
        return Value(ValueKind.BOOLEAN, bool(b))

    @staticmethod
    def error(kind: ErrorKind) -> "Value":
        return Value(ValueKind.ERROR, kind)

    @property
    def is_error(self) -> bool:
        return self.kind == ValueKind.ERROR

    @property
    def is_undefined(self) -> bool:
        return self.kind == ValueKind.UNDEFINED

    def render(self) -> str:
        """Display string, matching what a grid's value layer would show."""
        if self.kind == ValueKind.NUMBER:
            n = self.payload
            if isinstance(n, float) and n.is_integer():
                return str(int(n))
            return repr(n)
        if self.kind == ValueKind.TEXT:
            return str(self.payload)
        if self.kind == ValueKind.BOOLEAN:
            return "TRUE" if self.payload else "FALSE"
        if self.kind == ValueKind.ERROR:
            return _ERROR_DISPLAY[self.payload]
        return ""


UNDEFINED = Value(ValueKind.UNDEFINED)


@dataclass(frozen=True, order=True)
class CellAddress:
    """(sheet ordinal, 1-based row, 1-based column); ordering is positional."""

    sheet: int
    row: int
    col: int

    def __post_init__(self) -> None:
        if self.row < 1 or self.col < 1 or self.sheet < 0:
            raise AddressSyntaxError(
                f"invalid address components (sheet={self.sheet}, row={self.row}, col={self.col})"
            )


class ContentKind(Enum):
    EMPTY = "empty"
    LITERAL = "literal"
    FORMULA = "formula"


@dataclass
class Cell:
    """The (address, content, computed value) triple.

    A literal cell never carries an AST; a formula cell's source text starts
    with "=". ``computed`` stays UNDEFINED until the evaluator fills it.
    """

    addr: CellAddress
    content_kind: ContentKind
    literal: Optional[Value] = None
    formula_text: Optional[str] = None
    ast: Optional["FormulaAst"] = None
    computed: Value = UNDEFINED

    @property
    def is_empty(self) -> bool:
        return self.content_kind == ContentKind.EMPTY

    @property
    def is_formula(self) -> bool:
        return self.content_kind == ContentKind.FORMULA


def empty_cell(addr: CellAddress) -> Cell:
    return Cell(addr=addr, content_kind=ContentKind.EMPTY)


@dataclass
class Worksheet:
    """A named sparse grid; emptiness is absence from ``cells``."""

    name: str
    cells: dict[tuple[int, int], Cell] = field(default_factory=dict)

    def put(self, cell: Cell) -> None:
        self.cells[(cell.addr.row, cell.addr.col)] = cell


@dataclass
class WorkbookMetadata:
    """Design-complexity flags that cannot be inferred from formula text."""

    has_pivot_tables: bool = False
    has_procedural_extension: bool = False


@dataclass
class Workbook:
    name: str
    sheets: list[Worksheet] = field(default_factory=list)
    metadata: WorkbookMetadata = field(default_factory=WorkbookMetadata)

    def sheet_names(self) -> list[str]:
        return [ws.name for ws in self.sheets]

    def iter_cells(self):
        """Yield every stored (non-empty) cell, in (sheet, row, col) order."""
        for ws in self.sheets:
            for key in sorted(ws.cells):
                yield ws.cells[key]


# --- column-letter codec -------------------------------------------------

def column_letters(col: int) -> str:
    """Encode a 1-based column index as letters (1 -> A, 27 -> AA, ...)."""
    if col < 1:
        raise AddressSyntaxError(f"column index must be positive, got {col}")
    out = []
    n = col
    while n > 0:
        n, rem = divmod(n - 1, 26)
        out.append(chr(ord("A") + rem))
    return "".join(reversed(out))


def column_index(letters: str) -> int:
    """Decode column letters to a 1-based index; inverse of column_letters."""
    if not letters or not letters.isalpha():
        raise AddressSyntaxError(f"bad column letters: {letters!r}")
    n = 0
    for ch in letters.upper():
        n = n * 26 + (ord(ch) - ord("A") + 1)
    return n


# --- A1 address parsing / formatting ---------------------------------------

_A1_BODY = re.compile(r"^(\$?)([A-Za-z]{1,3})(\$?)([0-9]+)$")
_UNQUOTED_SHEET = re.compile(r"^([^'!]+)!(.+)$", re.S)
_QUOTED_SHEET = re.compile(r"^'((?:[^']|'')+)'!(.+)$", re.S)


def _split_sheet_prefix(text: str) -> tuple[Optional[str], str]:
    m = _QUOTED_SHEET.match(text)
    if m:
        return m.group(1).replace("''", "'"), m.group(2)
    m = _UNQUOTED_SHEET.match(text)
    if m:
        return m.group(1), m.group(2)
    return None, text


def resolve_sheet(name: str, sheet_names: list[str]) -> int:
    """Sheet names are case-sensitive."""
    try:
        return sheet_names.index(name)
    except ValueError:
        raise UnknownSheetError(f"unknown sheet: {name!r}") from None


def parse_a1_address(
    text: str,
    default_sheet: int = 0,
    sheet_names: Optional[list[str]] = None,
) -> CellAddress:
    """Parse A1 text with optional sheet prefix into an address triple.

    Absolute markers ``$`` are accepted and discarded; recording them is the
    formula parser's job. A missing prefix resolves to ``default_sheet``.
    """
    sheet_name, body = _split_sheet_prefix(text.strip())
    if sheet_name is not None:
        if sheet_names is None:
            raise UnknownSheetError(f"unknown sheet: {sheet_name!r}")
        sheet = resolve_sheet(sheet_name, sheet_names)
    else:
        sheet = default_sheet
    m = _A1_BODY.match(body.strip())
    if not m:
        raise AddressSyntaxError(f"not an A1 address: {text!r}")
    col = column_index(m.group(2))
    row = int(m.group(4))
    if row < 1 or row > MAX_ROWS:
        raise AddressSyntaxError(f"row {row} outside grid (1..{MAX_ROWS})")
    if col > MAX_COLS:
        raise AddressSyntaxError(f"column {m.group(2)!r} outside grid (max {column_letters(MAX_COLS)})")
    return CellAddress(sheet=sheet, row=row, col=col)


def _needs_quoting(sheet_name: str) -> bool:
    return not re.match(r"^[A-Za-z_][A-Za-z0-9_.]*$", sheet_name)


def format_sheet_prefix(sheet_name: str) -> str:
    if _needs_quoting(sheet_name):
        return "'" + sheet_name.replace("'", "''") + "'!"
    return sheet_name + "!"


def format_address(
    addr: CellAddress,
    style: str = "A1",
    anchor: Optional[CellAddress] = None,
    sheet_names: Optional[list[str]] = None,
) -> str:
    """Format an address in A1 or R1C1 notation.

    R1C1 with an anchor yields bracketed signed offsets (``R[1]C[0]``);
    without one it yields fixed coordinates (``R3C2``). Passing
    ``sheet_names`` prepends the owning sheet's (quoted if needed) name.
    """
    prefix = ""
    if sheet_names is not None:
        prefix = format_sheet_prefix(sheet_names[addr.sheet])
    if style == "A1":
        return f"{prefix}{column_letters(addr.col)}{addr.row}"
    if style == "R1C1":
        if anchor is None:
            return f"{prefix}R{addr.row}C{addr.col}"
        return f"{prefix}R[{addr.row - anchor.row}]C[{addr.col - anchor.col}]"
    raise ValueError(f"unknown address style: {style!r}")


def get_cell(workbook: Workbook, addr: CellAddress) -> Cell:
    """Return the stored cell, or a synthesized empty cell when absent.

    Never fails for in-range addresses; the empty cell's computed value is
    UNDEFINED, which numeric contexts later treat as 0.
    """
    if addr.sheet >= len(workbook.sheets):
        raise UnknownSheetError(f"sheet ordinal {addr.sheet} out of range")
    cell = workbook.sheets[addr.sheet].cells.get((addr.row, addr.col))
    if cell is None:
        return empty_cell(addr)
    return cell
