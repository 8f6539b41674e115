"""Grid verification harnesses: oracle vs closed forms, decider vs oracle.

These back the ``oracle`` CLI/service check and the acceptance suite.  Grid
sweeps are embarrassingly parallel; the MODEQ_THREADS environment variable
caps the worker count (default 1, sequential).
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

from .coefficients import CoeffKey, DensityPair, SeriesSpec, b_cmz
from .equivalence import decide, resonance_class, ResonanceClass
from .oracle import (
    ProportionalityViolated,
    ResonantInput,
    brute_force_intertwiner,
    build_pq,
    build_pq_by_raising,
    recover_b,
)


def _thread_cap() -> int:
    try:
        return max(1, int(os.environ.get("MODEQ_THREADS", "1")))
    except ValueError:
        return 1


def _map_cells(fn, cells):
    cap = _thread_cap()
    if cap == 1:
        return [fn(cell) for cell in cells]
    with ThreadPoolExecutor(max_workers=cap) as pool:
        return list(pool.map(fn, cells))


_SMALL_PAIRS = [
    (Fraction(0), Fraction(4)),
    (Fraction(1, 2), Fraction(3)),
    (Fraction(1, 3), Fraction(7, 3)),
    (Fraction(-1, 2), Fraction(5, 2)),
]

_FULL_PAIRS = _SMALL_PAIRS + [
    (Fraction(1), Fraction(9, 2)),
    (Fraction(-1, 3), Fraction(10, 3)),
    (Fraction(2, 5), Fraction(17, 5)),
    (Fraction(-2), Fraction(3)),
    (Fraction(3, 4), Fraction(15, 4)),
    (Fraction(1, 5), Fraction(14, 5)),
]

_OFFSETS = {
    3: [Fraction(1, 4), Fraction(7, 5)],
    4: [Fraction(1, 3), Fraction(-7, 2)],
    5: [Fraction(1, 4), Fraction(-9, 2)],
}


def cmz_grid(size: str) -> list[tuple[SeriesSpec, DensityPair]]:
    """Non-resonant grid cells spanning lengths 3..5 with small denominators."""
    pairs = _SMALL_PAIRS if size == "small" else _FULL_PAIRS
    cells = []
    for l, offsets in _OFFSETS.items():
        for n in offsets if size != "small" else offsets[:1]:
            for lam, mu in pairs:
                spec = SeriesSpec(n, l)
                if resonance_class(spec) is not ResonanceClass.NON_RESONANT:
                    continue
                cells.append((spec, DensityPair(lam, mu)))
    return cells


def run_cmz_check(size: str = "small", degree: int = 8) -> dict:
    """recover_b == b_cmz on every gap-2..4 slot of every cell; the
    first-subdiagonal and proportionality assertions run inside recover_b."""
    cells = cmz_grid(size)

    def one(cell):
        spec, pair = cell
        detail = {
            "n": str(spec.n), "l": spec.l,
            "lambda": str(pair.lam), "mu": str(pair.mu),
        }
        try:
            pq = build_pq(spec, pair, degree)
            for j in range(spec.l):
                for i in range(j + 2, min(j + 4, spec.l - 1) + 1):
                    got = recover_b(spec, pair, i, j, degree, pq=pq)
                    want = b_cmz(CoeffKey(spec.n + j, i - j), pair)
                    if got != want:
                        detail.update(
                            status="fail", slot=[i, j],
                            oracle=got.as_strings(), formula=want.as_strings(),
                        )
                        return detail
        except (ProportionalityViolated, ResonantInput) as exc:
            detail.update(status="fail", error=str(exc))
            return detail
        detail["status"] = "pass"
        return detail

    results = _map_cells(one, cells)
    return {
        "check": "cmz",
        "grid": size,
        "degree": degree,
        "cells": results,
        "passed": all(r["status"] == "pass" for r in results),
    }


def run_pq_check(size: str = "small", degree: int = 8) -> dict:
    """The Casimir-eigenspace and raising constructions of the quantization
    agree exactly; resonant specs are reported as skipped."""
    cells = cmz_grid(size)
    cells.append((SeriesSpec(Fraction(0), 3), DensityPair(Fraction(0), Fraction(4))))

    def one(cell):
        spec, pair = cell
        detail = {
            "n": str(spec.n), "l": spec.l,
            "lambda": str(pair.lam), "mu": str(pair.mu),
        }
        try:
            pq = build_pq(spec, pair, degree)
        except ResonantInput as exc:
            detail.update(status="skipped_resonant", error=str(exc))
            return detail
        try:
            other = build_pq_by_raising(spec, pair, degree)
        except ValueError as exc:
            detail.update(status="skipped_stalled", error=str(exc))
            return detail
        same = all(
            pq.column(i, a).coeffs == other[(i, a)].coeffs
            for i in range(spec.l)
            for a in range(degree + 1)
        )
        detail["status"] = "pass" if same else "fail"
        return detail

    results = _map_cells(one, cells)
    return {
        "check": "pq",
        "grid": size,
        "degree": degree,
        "cells": results,
        "passed": all(r["status"] != "fail" for r in results),
    }


def intertwiner_grid(size: str) -> list[tuple[SeriesSpec, DensityPair, DensityPair]]:
    cells = []
    base = cmz_grid(size)
    for idx, (spec, pair) in enumerate(base):
        if idx % 3 == 0:
            cells.append((spec, pair, pair.conjugate()))
        elif idx % 3 == 1:
            other = DensityPair(pair.lam + Fraction(1, 7), pair.mu - Fraction(1, 5))
            cells.append((spec, pair, other))
        else:
            cells.append((spec, pair, DensityPair(pair.mu, pair.lam)))
    # a Bol pair per length
    for l, offsets in _OFFSETS.items():
        nu = Fraction(3)
        cells.append((
            SeriesSpec(offsets[0], l),
            DensityPair.from_gamma_delta(3 * (nu + 1) ** 2, nu),
            DensityPair.from_gamma_delta(3 * nu**2, nu + 1),
        ))
    return cells


def run_intertwiner_check(size: str = "small", degree: int = 8, gen_cap: int = 6) -> dict:
    """Verdicts of the closed-form decider and the brute-force search agree."""
    cells = intertwiner_grid(size)

    def one(cell):
        spec, pa, pb = cell
        detail = {
            "n": str(spec.n), "l": spec.l,
            "pair_a": [str(pa.lam), str(pa.mu)],
            "pair_b": [str(pb.lam), str(pb.mu)],
        }
        verdict = decide(spec, pa, pb)
        witness = brute_force_intertwiner(spec, pa, pb, degree, gen_cap)
        agree = verdict.is_equivalent == (witness is not None)
        detail["decider"] = verdict.outcome
        detail["oracle"] = "equivalent" if witness is not None else "inequivalent"
        detail["status"] = "pass" if agree else "fail"
        return detail

    results = _map_cells(one, cells)
    return {
        "check": "intertwiner",
        "grid": size,
        "degree": degree,
        "gen_cap": gen_cap,
        "cells": results,
        "passed": all(r["status"] == "pass" for r in results),
    }


def run_check(check: str, grid: str = "small", degree: int = 8, gen_cap: int = 6) -> dict:
    if check == "cmz":
        return run_cmz_check(grid, degree)
    if check == "pq":
        return run_pq_check(grid, degree)
    if check == "intertwiner":
        return run_intertwiner_check(grid, degree, gen_cap)
    raise ValueError(f"unknown oracle check {check!r}")
