"""FastAPI service exposing the classification engine.

Run with:  uvicorn modeq.service.app:app
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException

from . import handlers, models

app = FastAPI(
    title="modeq",
    description=(
        "Exact equivalence classification of pseudodifferential "
        "symbol-quotient modules on the line"
    ),
)


@app.get("/health")
def health() -> dict:
    return {"status": "ok"}


@app.post("/classify", response_model=models.ClassifyResponse)
def classify(req: models.ClassifyRequest) -> models.ClassifyResponse:
    try:
        return handlers.handle_classify(req)
    except (ValueError, ZeroDivisionError) as exc:
        raise HTTPException(status_code=422, detail=str(exc))


@app.post("/invariants", response_model=models.InvariantsResponse)
def invariants(req: models.InvariantsRequest) -> models.InvariantsResponse:
    try:
        return handlers.handle_invariants(req)
    except (ValueError, ZeroDivisionError) as exc:
        raise HTTPException(status_code=422, detail=str(exc))


@app.post("/pencil", response_model=models.PencilResponse)
def pencil(req: models.PencilRequest) -> models.PencilResponse:
    try:
        return handlers.handle_pencil(req)
    except (ValueError, ZeroDivisionError) as exc:
        raise HTTPException(status_code=422, detail=str(exc))


@app.post("/oracle", response_model=models.OracleResponse)
def oracle(req: models.OracleRequest) -> models.OracleResponse:
    try:
        return handlers.handle_oracle(req)
    except ValueError as exc:
        raise HTTPException(status_code=422, detail=str(exc))


@app.post("/tables", response_model=models.TablesResponse)
def tables(req: models.TablesRequest) -> models.TablesResponse:
    try:
        return handlers.handle_tables(req)
    except ValueError as exc:
        raise HTTPException(status_code=422, detail=str(exc))
