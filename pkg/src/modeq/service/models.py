"""Pydantic request/response schemas shared by the HTTP service and the CLI.

Rationals travel as strings "p/q" (or "p") to keep everything exact; values
in Q(sqrt3) travel as ["a", "b"] pairs meaning a + b*sqrt(3).
"""

from __future__ import annotations

from pydantic import BaseModel, Field


class ClassifyRequest(BaseModel):
    lambda1: str
    mu1: str
    lambda2: str
    mu2: str
    n: str
    l: int
    pattern: list[int] | None = None
    experimental: bool = False


class FailingCondition(BaseModel):
    i: int
    j: int
    value_a: list[str] | None
    value_b: list[str] | None
    kind: str


class ClassifyResponse(BaseModel):
    outcome: str
    witness: dict[str, list[str]] | None
    zeta_used: bool
    failing_condition: FailingCondition | None
    reason: str | None
    params_a: dict[str, str]
    params_b: dict[str, str]
    gamma: dict[str, str]
    delta: dict[str, str]
    n: str
    l: int
    pattern: list[int]


class InvariantsRequest(BaseModel):
    lam: str = Field(alias="lambda")
    mu: str
    n: str
    kinds: list[str] | None = None

    model_config = {"populate_by_name": True}


class InvariantsResponse(BaseModel):
    params: dict[str, str]
    n: str
    invariants: dict[str, object]


class PencilRequest(BaseModel):
    family: str
    n5: str | None = None
    n6: str | None = None
    levels: list[str]
    window: list[str]
    out: str = "csv"
    resolution: int = 64


class PencilResponse(BaseModel):
    family: str
    out: str
    content: str


class OracleRequest(BaseModel):
    check: str
    grid: str = "small"
    degree: int = 8
    gen_cap: int = 6


class OracleResponse(BaseModel):
    check: str
    grid: str
    passed: bool
    cells: list[dict]


class TablesRequest(BaseModel):
    which: str


class TablesResponse(BaseModel):
    which: str
    n: str
    l: int
    modules: list[list[str]]
    classes: list[list[list[str]]]
