"""Simultaneous-vanishing profiles and the rational invariants.

The profile lists the quantities (delta - n - j)_{i-j} B_{n+i,n+j} whose
simultaneous vanishing is necessary for equivalence; the invariants I, J, K,
M, R and their tilde variants classify modules where the profile is generic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .coefficients import B_eval, B_symbolic, CoeffKey, DensityPair, SeriesSpec
from .scalars import GDPoly, QSqrt3, pochhammer, rat

KINDS = ("I", "J", "K", "M", "R", "Itilde", "Jtilde", "Mtilde", "Rtilde")

AUX_KINDS = ("B420", "B4310", "Bminus43210", "Bplus43210", "B5320")


class InvariantDomainError(ValueError):
    """The offset n is outside the invariant's domain of definition."""


@dataclass(frozen=True)
class SvcEntry:
    """One simultaneous-vanishing quantity (delta-n-j)_{i-j} B_{n+i,n+j}.

    The integral-resonant extra quantity delta * gamma^(1/2) is carried as an
    entry with ``resonant`` set; its (i, j) are the offsets of F_1 and F_0.
    """

    i: int
    j: int
    value: QSqrt3
    resonant: bool = False

    @property
    def is_zero(self) -> bool:
        return not self.value


@dataclass(frozen=True)
class InvariantValue:
    """An exact invariant value; ``value`` is None when the denominator vanishes."""

    kind: str
    value: QSqrt3 | None

    @property
    def is_defined(self) -> bool:
        return self.value is not None

    def __eq__(self, other: object) -> bool:
        if isinstance(other, InvariantValue):
            return self.kind == other.kind and self.value == other.value
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.kind, self.value))


def svc_pairs(pattern: tuple[int, ...]) -> list[tuple[int, int]]:
    """In-pattern index pairs with gap 2, 3 or 4, ordered by (gap, i)."""
    pairs = [
        (i, j)
        for j in pattern
        for i in pattern
        if i - j in (2, 3, 4)
    ]
    pairs.sort(key=lambda ij: (ij[0] - ij[1], ij[0]))
    return pairs


def svc_entry(n: Fraction, i: int, j: int, p: DensityPair) -> SvcEntry:
    value = pochhammer(QSqrt3.of(p.delta - n - j), i - j) * B_eval(
        CoeffKey(n + j, i - j), p
    )
    return SvcEntry(i, j, value)


def svc_profile(spec: SeriesSpec, p: DensityPair) -> list[SvcEntry]:
    """The vanishing profile of one module, resonant extra entry included.

    The extra entry delta * gamma^(1/2) appears when n is integral resonant
    and both F_0 and F_1 occur in the composition series.
    """
    entries = [svc_entry(spec.n, i, j, p) for i, j in svc_pairs(spec.pattern)]
    n = spec.n
    if n == int(n) and 2 - spec.l <= n <= 0:
        o0, o1 = int(-n), int(-n) + 1
        if o0 in spec.pattern and o1 in spec.pattern:
            entries.append(
                SvcEntry(o1, o0, QSqrt3.of(p.delta) * p.gamma_half, resonant=True)
            )
    return entries


def _ratio(num: QSqrt3, den: QSqrt3, kind: str) -> InvariantValue:
    if not den:
        return InvariantValue(kind, None)
    return InvariantValue(kind, num / den)


def _b(n: Fraction, i: int, j: int, p: DensityPair) -> QSqrt3:
    return B_eval(CoeffKey(n + j, i - j), p)


def invariant(kind: str, n, p: DensityPair) -> InvariantValue:
    """Evaluate one classifying invariant at a density pair.

    R ignores n (it is specific to the self-dual length-4 series); the tilde
    variants reject offsets where their defining reduction divides by zero.
    """
    n = rat(n)
    if kind == "I":
        return _ratio(_b(n, 4, 0, p), _b(n, 4, 2, p) * _b(n, 2, 0, p), kind)
    if kind == "J":
        return _ratio(
            _b(n, 4, 0, p) * _b(n, 3, 1, p), _b(n, 4, 1, p) * _b(n, 3, 0, p), kind
        )
    if kind == "K":
        return _ratio(
            _b(n, 4, 2, p) * _b(n, 3, 1, p) * _b(n, 2, 0, p),
            _b(n, 4, 1, p) * _b(n, 3, 0, p),
            kind,
        )
    if kind == "M":
        return _ratio(
            _b(n, 5, 2, p) * _b(n, 2, 0, p), _b(n, 5, 3, p) * _b(n, 3, 0, p), kind
        )
    if kind == "R":
        num = p.gamma_half * B_eval(CoeffKey(Fraction(-1), 3), p)
        den = B_eval(CoeffKey(Fraction(0), 2), p) * B_eval(CoeffKey(Fraction(-1), 2), p)
        return _ratio(num, den, kind)
    if kind == "Rtilde":
        r = invariant("R", n, p)
        if not r.is_defined:
            return InvariantValue(kind, None)
        return _ratio(r.value, QSqrt3.of(1) - r.value, kind)
    if kind == "Itilde":
        n5 = n + Fraction(3, 2)
        if n5 * n5 == 1:
            raise InvariantDomainError("Itilde requires N5 != +-1")
        num = _b(n, 4, 2, p) * _b(n, 2, 0, p)
        den = aux_combination("B420", n).evaluate(p.gamma_half, p.delta)
        return _ratio(num, den, kind)
    if kind == "Jtilde":
        num = aux_combination("Bplus43210", n).evaluate(p.gamma_half, p.delta)
        den = aux_combination("Bminus43210", n).evaluate(p.gamma_half, p.delta)
        return _ratio(num, den, kind)
    if kind == "Mtilde":
        n6 = n + 2
        if n6 == 0:
            raise InvariantDomainError("Mtilde requires N6 != 0")
        num = _b(n, 5, 2, p) * _b(n, 2, 0, p)
        den = aux_combination("B5320", n).evaluate(p.gamma_half, p.delta)
        return _ratio(num, den, kind)
    raise ValueError(f"unknown invariant kind {kind!r}")


def _b_sym(n: Fraction, i: int, j: int) -> GDPoly:
    return B_symbolic(CoeffKey(n + j, i - j))


def aux_combination(kind: str, n) -> GDPoly:
    """The reduced polynomial combinations of B products used by the tilde forms.

    Each is an exact quotient of a difference of B products by a scalar that
    divides it identically in (g, d).
    """
    n = rat(n)
    n5 = n + Fraction(3, 2)
    n6 = n + 2
    if kind == "B420":
        div = 4 * (n5 * n5 - 1)
        if div == 0:
            raise InvariantDomainError("B420 requires N5 != +-1")
        return (_b_sym(n, 4, 0) - _b_sym(n, 4, 2) * _b_sym(n, 2, 0)) / div
    if kind == "B4310":
        div = n5 * n5 - Fraction(9, 4)
        if div == 0:
            raise InvariantDomainError("B4310 requires N5 != +-3/2")
        return (_b_sym(n, 4, 0) * _b_sym(n, 3, 1) - _b_sym(n, 4, 1) * _b_sym(n, 3, 0)) / div
    if kind == "Bminus43210":
        return 5 * (aux_combination("B4310", n) - _b_sym(n, 3, 1) * aux_combination("B420", n))
    if kind == "Bplus43210":
        return (aux_combination("B4310", n) + _b_sym(n, 3, 1) * aux_combination("B420", n)) / 2
    if kind == "B5320":
        if n6 == 0:
            raise InvariantDomainError("B5320 requires N6 != 0")
        return (_b_sym(n, 5, 2) * _b_sym(n, 2, 0) - _b_sym(n, 5, 3) * _b_sym(n, 3, 0)) / (6 * n6)
    raise ValueError(f"unknown auxiliary combination {kind!r}")


def general_ratio(
    x: tuple[QSqrt3, QSqrt3, QSqrt3],
    y: tuple[QSqrt3, QSqrt3, QSqrt3],
    n,
    p: DensityPair,
) -> InvariantValue:
    """The invariant ratio built from two independent combinations of the three
    length-5 B products (B_{n+4,n+1} B_{n+3,n}, B_{n+4,n} B_{n+3,n+1},
    B_{n+4,n+2} B_{n+3,n+1} B_{n+2,n})."""
    n = rat(n)
    x = tuple(QSqrt3.of(v) for v in x)
    y = tuple(QSqrt3.of(v) for v in y)
    cross = (
        x[0] * y[1] - x[1] * y[0],
        x[0] * y[2] - x[2] * y[0],
        x[1] * y[2] - x[2] * y[1],
    )
    if not any(cross):
        raise ValueError("general_ratio requires linearly independent x and y")
    products = (
        _b(n, 4, 1, p) * _b(n, 3, 0, p),
        _b(n, 4, 0, p) * _b(n, 3, 1, p),
        _b(n, 4, 2, p) * _b(n, 3, 1, p) * _b(n, 2, 0, p),
    )
    num = sum((xi * pi for xi, pi in zip(x, products)), QSqrt3())
    den = sum((yi * pi for yi, pi in zip(y, products)), QSqrt3())
    return _ratio(num, den, "GeneralRatio")
