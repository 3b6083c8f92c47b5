"""Pydantic request/response models for the HTTP service."""

from __future__ import annotations

from typing import Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field


class MetadataDocument(BaseModel):
    model_config = ConfigDict(extra="forbid")

    has_pivot_tables: bool = False
    has_procedural_extension: bool = False


class CellEntry(BaseModel):
    model_config = ConfigDict(extra="forbid")

    addr: str = Field(description="A1-style address within the sheet")
    value: Optional[Union[float, str, bool]] = None
    formula: Optional[str] = Field(default=None, description='source text starting with "="')


class SheetDocument(BaseModel):
    model_config = ConfigDict(extra="forbid")

    name: str
    cells: list[CellEntry] = Field(default_factory=list)


class WorkbookDocument(BaseModel):
    model_config = ConfigDict(extra="forbid")

    workbook: str
    metadata: MetadataDocument = Field(default_factory=MetadataDocument)
    sheets: list[SheetDocument]

    def to_plain(self) -> dict:
        """The canonical ingest document (the same shape files carry)."""
        doc: dict = {"workbook": self.workbook, "sheets": []}
        doc["metadata"] = self.metadata.model_dump()
        for sheet in self.sheets:
            cells = []
            for cell in sheet.cells:
                entry: dict = {"addr": cell.addr}
                if cell.formula is not None:
                    entry["formula"] = cell.formula
                if cell.value is not None:
                    entry["value"] = cell.value
                cells.append(entry)
            doc["sheets"].append({"name": sheet.name, "cells": cells})
        return doc


class ThresholdsDocument(BaseModel):
    """The seven t_* keys of the threshold config; absent keys keep defaults."""

    model_config = ConfigDict(extra="forbid")

    t_pathRef: Optional[int] = None
    t_pathDep: Optional[int] = None
    t_spreading: Optional[int] = None
    t_fanin: Optional[int] = None
    t_fanout: Optional[int] = None
    t_conditional: Optional[int] = None
    t_nesting: Optional[int] = None

    def to_config(self) -> dict:
        return {k: v for k, v in self.model_dump().items() if v is not None}


class AnalyzeRequest(BaseModel):
    document: WorkbookDocument
    thresholds: Optional[ThresholdsDocument] = None


class SliceRequest(BaseModel):
    document: WorkbookDocument
    cell: str = Field(description="A1 address, optionally sheet-qualified")
    direction: Literal["visibility", "scope"]


class SliceResponse(BaseModel):
    cell: str
    direction: str
    cells: list[str]


class RecommendationItem(BaseModel):
    view: str
    rationale: str


class RecommendResponse(BaseModel):
    recommendations: list[RecommendationItem]


class ReportResponse(BaseModel):
    text: str


class HealthResponse(BaseModel):
    status: str
    version: str
