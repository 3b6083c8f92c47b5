"""Exception hierarchy shared across the toolkit."""

from __future__ import annotations

from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from sheetlens.model import CellAddress


class SheetLensError(Exception):
    """Base class for all toolkit errors."""


class AddressSyntaxError(SheetLensError):
    """Cell address text does not match A1 notation."""


class UnknownSheetError(SheetLensError):
    """A sheet prefix names no sheet in the workbook."""


class FormulaSyntaxError(SheetLensError):
    """Formula text is not valid under the formula grammar.

    Carries the 0-based character offset of the failure and the set of
    token descriptions that would have been accepted there.
    """

    def __init__(self, message: str, offset: int, expected: tuple[str, ...] = ()):
        super().__init__(message)
        self.offset = offset
        self.expected = expected

    def __str__(self) -> str:
        base = super().__str__()
        if self.expected:
            return f"{base} at offset {self.offset} (expected {', '.join(self.expected)})"
        return f"{base} at offset {self.offset}"


class RefBoundsError(SheetLensError):
    """A range reference exceeds the grid bounds."""


class UnknownCellError(SheetLensError):
    """A queried cell is not a vertex of the graph."""


class CycleError(SheetLensError):
    """An operation requiring an acyclic graph met circular references."""

    def __init__(self, cycles: list[list["CellAddress"]]):
        super().__init__(f"graph contains {len(cycles)} cycle(s)")
        self.cycles = cycles


class IngestError(SheetLensError):
    """A workbook document or config file is malformed.

    ``location`` points at the offending element, e.g. ``sheets[0].cells[3]``.
    """

    def __init__(self, message: str, location: str = ""):
        super().__init__(message)
        self.location = location

    def __str__(self) -> str:
        if self.location:
            return f"{super().__str__()} (at {self.location})"
        return super().__str__()


class IoError(SheetLensError):
    """An output path could not be written."""
