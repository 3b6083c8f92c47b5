"""FastAPI service wrapping the analysis pipeline.

Every endpoint is stateless: the workbook document travels in the request
and the response is derived from one pipeline run. /analyze returns the
canonical bundle bytes, so service output and CLI output are identical.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException, Response

import sheetlens
from sheetlens.errors import CycleError, IngestError, SheetLensError, UnknownCellError
from sheetlens.export import cell_id, dumps_bundle, export_dot, render_report
from sheetlens.metrics import Thresholds
from sheetlens.model import parse_a1_address
from sheetlens.pipeline import AnalysisResult, analyze_document
from sheetlens.graph import SliceDirection
from sheetlens.service.schemas import (
    AnalyzeRequest,
    HealthResponse,
    RecommendationItem,
    RecommendResponse,
    ReportResponse,
    SliceRequest,
    SliceResponse,
    WorkbookDocument,
)

app = FastAPI(
    title="sheetlens",
    version=sheetlens.__version__,
    description="Spreadsheet static analysis as a service",
)


def _run_analysis(document: WorkbookDocument, thresholds=None) -> AnalysisResult:
    try:
        config = Thresholds.from_config(thresholds.to_config()) if thresholds else None
        return analyze_document(document.to_plain(), config)
    except IngestError as exc:
        raise HTTPException(status_code=422, detail=str(exc)) from None
    except SheetLensError as exc:
        raise HTTPException(status_code=422, detail=str(exc)) from None


@app.get("/health", response_model=HealthResponse)
def health() -> HealthResponse:
    return HealthResponse(status="ok", version=sheetlens.__version__)


@app.post("/analyze")
def analyze(request: AnalyzeRequest) -> Response:
    result = _run_analysis(request.document, request.thresholds)
    return Response(content=dumps_bundle(result.bundle()), media_type="application/json")


@app.post("/report", response_model=ReportResponse)
def report(request: AnalyzeRequest) -> ReportResponse:
    result = _run_analysis(request.document, request.thresholds)
    return ReportResponse(text=render_report(result.report))


@app.post("/dot")
def dot(request: AnalyzeRequest) -> Response:
    result = _run_analysis(request.document, request.thresholds)
    text = export_dot(result.graph, result.classes, result.workbook.sheet_names())
    return Response(content=text, media_type="text/vnd.graphviz")


@app.post("/slice", response_model=SliceResponse)
def slice_cells(request: SliceRequest) -> SliceResponse:
    result = _run_analysis(request.document)
    names = result.workbook.sheet_names()
    try:
        addr = parse_a1_address(request.cell, 0, names)
        members = result.graph.slice(addr, SliceDirection(request.direction))
    except UnknownCellError as exc:
        raise HTTPException(status_code=404, detail=str(exc)) from None
    except CycleError as exc:
        raise HTTPException(status_code=409, detail=str(exc)) from None
    except SheetLensError as exc:
        raise HTTPException(status_code=422, detail=str(exc)) from None
    return SliceResponse(
        cell=cell_id(addr, names),
        direction=request.direction,
        cells=[cell_id(a, names) for a in sorted(members)],
    )


@app.post("/recommend", response_model=RecommendResponse)
def recommend(request: AnalyzeRequest) -> RecommendResponse:
    result = _run_analysis(request.document, request.thresholds)
    return RecommendResponse(recommendations=[
        RecommendationItem(view=r.view.value, rationale=r.rationale)
        for r in result.recommendations
    ])
