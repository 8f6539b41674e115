"""Request handlers: all service/CLI logic above the core library.

Each handler maps a request model to a response model; the FastAPI app and
the command-line client both call these, so their behaviour is identical.
"""

from __future__ import annotations

from fractions import Fraction

from ..coefficients import DensityPair, SeriesSpec
from ..equivalence import (
    ExcludedN,
    UnsupportedPattern,
    Verdict,
    decide,
    decide_lacunary,
    known_tables,
)
from ..invariants import KINDS, InvariantDomainError, invariant
from ..pencils import PencilFamily, render_csv, render_svg
from ..scalars import rat
from ..verification import run_check
from . import models


def _qs(value) -> list[str]:
    return value.as_strings()


def _verdict_response(
    verdict: Verdict, spec: SeriesSpec, pa: DensityPair, pb: DensityPair
) -> models.ClassifyResponse:
    witness = None
    if verdict.witness is not None:
        witness = {str(k): _qs(v) for k, v in sorted(verdict.witness.items())}
    failing = None
    if verdict.failing is not None:
        f = verdict.failing
        failing = models.FailingCondition(
            i=f.i,
            j=f.j,
            value_a=_qs(f.value_a) if f.value_a is not None else None,
            value_b=_qs(f.value_b) if f.value_b is not None else None,
            kind=f.kind,
        )
    return models.ClassifyResponse(
        outcome=verdict.outcome,
        witness=witness,
        zeta_used=verdict.zeta_used,
        failing_condition=failing,
        reason=verdict.reason,
        params_a={"lambda": str(pa.lam), "mu": str(pa.mu)},
        params_b={"lambda": str(pb.lam), "mu": str(pb.mu)},
        gamma={"a": str(pa.gamma), "b": str(pb.gamma)},
        delta={"a": str(pa.delta), "b": str(pb.delta)},
        n=str(spec.n),
        l=spec.l,
        pattern=list(spec.pattern),
    )


def handle_classify(req: models.ClassifyRequest) -> models.ClassifyResponse:
    pa = DensityPair(rat(req.lambda1), rat(req.mu1))
    pb = DensityPair(rat(req.lambda2), rat(req.mu2))
    pattern = tuple(req.pattern) if req.pattern else ()
    spec = SeriesSpec(rat(req.n), req.l, pattern)
    try:
        if spec.is_full():
            verdict = decide(spec, pa, pb)
        else:
            verdict = decide_lacunary(
                spec.pattern, spec.n, pa, pb, experimental=req.experimental
            )
    except (UnsupportedPattern, ExcludedN) as exc:
        verdict = Verdict.unsupported(str(exc))
    return _verdict_response(verdict, spec, pa, pb)


def handle_invariants(req: models.InvariantsRequest) -> models.InvariantsResponse:
    pair = DensityPair(rat(req.lam), rat(req.mu))
    n = rat(req.n)
    kinds = req.kinds or list(KINDS)
    values: dict[str, object] = {}
    for kind in kinds:
        if kind not in KINDS:
            values[kind] = {"error": f"unknown invariant kind {kind!r}"}
            continue
        try:
            result = invariant(kind, n, pair)
        except InvariantDomainError as exc:
            values[kind] = {"error": str(exc)}
            continue
        values[kind] = _qs(result.value) if result.is_defined else "undefined"
    return models.InvariantsResponse(
        params={"lambda": str(pair.lam), "mu": str(pair.mu)},
        n=str(n),
        invariants=values,
    )


def _parse_level(text: str) -> Fraction | None:
    return None if text.strip().lower() in ("inf", "infinity") else rat(text)


def handle_pencil(req: models.PencilRequest) -> models.PencilResponse:
    if req.family == "Rtilde":
        family = PencilFamily("Rtilde")
    elif req.family == "I":
        family = PencilFamily("I", n5=rat(req.n5))
    elif req.family == "M":
        family = PencilFamily("M", n6=rat(req.n6))
    else:
        raise ValueError(f"unknown pencil family {req.family!r}")
    levels = [_parse_level(t) for t in req.levels]
    if len(req.window) != 4:
        raise ValueError("window must be x0,x1,y0,y1")
    window = tuple(rat(v) for v in req.window)
    if req.out == "csv":
        content = render_csv(family, levels, window, req.resolution)
    elif req.out == "svg":
        content = render_svg(family, levels, window, req.resolution)
    else:
        raise ValueError(f"unknown output format {req.out!r}")
    return models.PencilResponse(family=req.family, out=req.out, content=content)


def handle_oracle(req: models.OracleRequest) -> models.OracleResponse:
    report = run_check(req.check, req.grid, req.degree, req.gen_cap)
    return models.OracleResponse(
        check=report["check"],
        grid=report["grid"],
        passed=report["passed"],
        cells=report["cells"],
    )


def handle_tables(req: models.TablesRequest) -> models.TablesResponse:
    table = known_tables(req.which)
    return models.TablesResponse(**table)
