"""Closed-form coefficient engine.

The central object is the two-parameter family of scalars B_{m+r,m}(gamma, delta),
monic in gamma, defined for any rational lower degree m and integer gap r >= 2.
From it we derive:

* ``b_cmz`` -- the subdiagonal coefficients of the projectively quantized
  action in the non-resonant case,
* ``a_res`` / ``bbar_res`` -- the antidiagonal and subdiagonal coefficients in
  the resonant case,
* ``H_k`` -- a literature cross-check quantity.

One generic implementation of the B formula is shared by the exact evaluator
(QSqrt3), the symbolic form (GDPoly in g = gamma^(1/2) and d = delta), and the
one-variable family u -> B_{u+s+r, u+s} (UPoly).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .scalars import (
    Fraction as Rational,
    GDPoly,
    QSqrt3,
    UPoly,
    gen_binomial,
    pochhammer,
    rat,
    rational_sqrt,
    three_pow_half,
)


class DenominatorVanishes(ArithmeticError):
    """A coefficient denominator hit a resonance boundary."""


@dataclass(frozen=True)
class DensityPair:
    """Module parameters (lambda, mu) with the derived quantities.

    delta = mu - lambda, c = lambda + mu - 1, gamma = 3 c^2, and the chosen
    branch of the square root is gamma_half = sqrt(3) * c, so conjugating the
    pair flips the sign of gamma_half.
    """

    lam: Fraction
    mu: Fraction

    @staticmethod
    def make(lam, mu) -> DensityPair:
        return DensityPair(rat(lam), rat(mu))

    @property
    def delta(self) -> Fraction:
        return self.mu - self.lam

    @property
    def c(self) -> Fraction:
        return self.lam + self.mu - 1

    @property
    def gamma(self) -> Fraction:
        return 3 * self.c * self.c

    @property
    def gamma_half(self) -> QSqrt3:
        return QSqrt3(Fraction(0), self.c)

    def conjugate(self) -> DensityPair:
        return DensityPair(1 - self.mu, 1 - self.lam)

    def swap(self) -> DensityPair:
        """The pair (mu, lambda): same gamma_half, negated delta."""
        return DensityPair(self.mu, self.lam)

    def gd(self) -> tuple[Fraction, Fraction]:
        return self.gamma, self.delta

    @staticmethod
    def from_gamma_delta(gamma, delta) -> DensityPair:
        """A representative pair with the given (gamma, delta), c >= 0 branch.

        Requires gamma/3 to be the square of a rational.
        """
        gamma, delta = rat(gamma), rat(delta)
        c = rational_sqrt(gamma / 3)
        if c is None:
            raise ValueError(f"gamma = {gamma} is not 3*(rational)^2")
        return DensityPair((c + 1 - delta) / 2, (c + 1 + delta) / 2)


@dataclass(frozen=True)
class SeriesSpec:
    """A composition series: offset n, length l, and the occupied rungs.

    ``pattern`` lists the offsets of the density modules present, always
    starting at 0 and ending at l - 1; the default is the full series.
    """

    n: Fraction
    l: int
    pattern: tuple[int, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "n", rat(self.n))
        pattern = self.pattern or tuple(range(self.l))
        pattern = tuple(sorted(pattern))
        if pattern[0] != 0 or pattern[-1] != self.l - 1:
            raise ValueError("pattern must start at 0 and end at l-1")
        if len(set(pattern)) != len(pattern) or any(p < 0 for p in pattern):
            raise ValueError("pattern offsets must be distinct and non-negative")
        object.__setattr__(self, "pattern", pattern)

    @staticmethod
    def make(n, l: int, pattern=()) -> SeriesSpec:
        return SeriesSpec(rat(n), l, tuple(pattern))

    def is_full(self) -> bool:
        return self.pattern == tuple(range(self.l))

    def degrees(self) -> list[Fraction]:
        return [self.n + p for p in self.pattern]

    def N(self) -> Fraction:
        """The symmetric coordinate N_l = n + l/2 - 1."""
        return self.n + Fraction(self.l, 2) - 1


@dataclass(frozen=True)
class CoeffKey:
    """Lower degree m and gap r of a coefficient B_{m+r,m} or b_{m+r,m}."""

    m: Fraction
    r: int

    def __post_init__(self):
        object.__setattr__(self, "m", rat(self.m))
        if self.r < 2:
            raise ValueError("coefficient gap r must be at least 2")


def _b_general(m, c, d, r: int, lift):
    """B_{m+r,m} over an arbitrary commutative ring.

    ``m``, ``c`` (= lambda + mu - 1) and ``d`` (= delta) are ring elements and
    ``lift`` embeds QSqrt3 scalars into the ring.  The result is monic in
    gamma = (sqrt(3) c)^2.
    """
    if r < 2:
        raise ValueError("gap r must be at least 2")
    sqrt3 = lift(QSqrt3.sqrt3())
    sc = sqrt3 * c
    # partial products P_s = 3^(s/2) (c - m)_s = prod_{t<s} (sqrt3 c - sqrt3 (m+t))
    partials = [sc**0]
    for t in range(r):
        partials.append(partials[-1] * (sc - sqrt3 * (m + t)))
    total = partials[r]
    correction = sc * 0
    for s in range(r - 1):
        bracket = (r - s + 1) * sc - sqrt3 * ((r - s - 1) * d + (2 * m + (r + s - 1)))
        term = (
            gen_binomial(r + 1, s)
            * pochhammer(2 * m + (r - 3), r - s - 2)
            * lift(three_pow_half(r - s - 1))
            * partials[s]
            * bracket
        )
        correction = correction + term
    total = total + (2 * m + (r - 1)) * Fraction(1, r * r - 1) * correction
    return total


def B_symbolic(key: CoeffKey) -> GDPoly:
    """B_{m+r,m} as an exact polynomial in (g, d) with g = gamma^(1/2)."""
    c = GDPoly.g() / QSqrt3.sqrt3()
    return _b_general(GDPoly.const(key.m), c, GDPoly.d(), key.r, GDPoly.of)


def B_eval(key: CoeffKey, p: DensityPair) -> QSqrt3:
    """B_{m+r,m} evaluated at the (gamma, delta) of a density pair."""
    return _b_general(
        QSqrt3.of(key.m), QSqrt3.of(p.c), QSqrt3.of(p.delta), key.r, QSqrt3.of
    )


def B_upoly(r: int, p: DensityPair, shift: Fraction | int = 0) -> UPoly:
    """The family u -> B_{u+shift+r, u+shift}(gamma, delta) at fixed (lambda, mu)."""
    m = UPoly.u(rat(shift))
    return _b_general(m, UPoly.const(p.c), UPoly.const(p.delta), r, UPoly.of)


def b_cmz(key: CoeffKey, p: DensityPair) -> QSqrt3:
    """Non-resonant subdiagonal coefficient b_{m+r,m}(lambda, mu).

    Raises DenominatorVanishes on a resonance boundary, where the caller must
    route to the resonant formulas instead.
    """
    m, r = key.m, key.r
    den = (
        pochhammer(2 * m - 2 + 2 * r, r - 2)
        * (2 * m - 1 + r)
        * pochhammer(2 * m - 3 + r, r - 2)
    )
    if den == 0:
        raise DenominatorVanishes(f"b_{{{m}+{r},{m}}} sits on a resonance boundary")
    num = (
        (-1) ** (r - 1)
        * (r * r - 1)
        * pochhammer(p.delta - m, r)
        * B_eval(key, p)
    )
    return num / (three_pow_half(r) * 12 * den)


def a_res(m: Fraction | int, p: DensityPair) -> QSqrt3:
    """Resonant antidiagonal scalar a_{1-m,m} for m = 0 or m in -1/2 * Z+."""
    m = rat(m)
    if m == 0:
        return QSqrt3.of(-p.delta * p.c / 2)
    if 2 * m != int(2 * m) or m > 0:
        raise ValueError("a_res requires m = 0 or m in -(1/2)Z+")
    two_m = int(2 * m)
    fact = math.factorial(-two_m)
    value = -pochhammer(p.delta - m, 1 - two_m) * pochhammer(p.c - m, 1 - two_m)
    return QSqrt3.of(value / (2 * fact * fact))


# bbar is consumed only through simultaneous vanishing and ratios, so its
# overall normalization is a convention; this one makes bbar((0,3), .) come out
# as -(1/(2 sqrt3)) (delta)_3 gamma^(1/2) ((5/6) B_{3,1} + delta - 3).
_BBAR_NORM = 36


def _bbar_direct_factor_pair(m: Fraction, r: int, p: DensityPair) -> UPoly:
    """The family u -> B_{u+r,u} - B_{u+r,u+1-2m} B_{u+1-2m,u}; zero at u = m."""
    r2 = int(2 * m + r - 1)
    r1 = int(1 - 2 * m)
    first = B_upoly(r, p, 0)
    second = B_upoly(r2, p, 1 - 2 * m) * B_upoly(r1, p, 0)
    return first - second


def _bbar_res_direct(m: Fraction, r: int, p: DensityPair) -> QSqrt3:
    if m == 0:
        if r < 3:
            raise ValueError("bbar at m = 0 requires r >= 3")
        fam = B_upoly(r, p, 0) - p.gamma_half * B_upoly(r - 1, p, 1)
        deriv = fam.derivative().evaluate(0)
        bracket = (
            Fraction(1)
            + Fraction(2 * r, r * r - 1)
            - Fraction(2 * (r - 1), r * r - 2 * r)
        )
        inner = deriv / 2 - bracket * p.gamma_half * B_eval(CoeffKey(Fraction(1), r - 1), p)
        pref = (
            (-1) ** (r - 1)
            * pochhammer(p.delta, r)
            / (12 * pochhammer(Fraction(2 * r - 2), r - 3) * math.factorial(r - 3))
        )
        return _BBAR_NORM * pref * inner / three_pow_half(r)
    # m in -(1/2)Z+, 2m + r >= 3
    two_m = int(2 * m)
    fam = _bbar_direct_factor_pair(m, r, p)
    deriv = fam.derivative().evaluate(m)
    q = 2 * m - 1 + r
    bracket = (
        Fraction(1, 1 - two_m)
        + Fraction(2 * r, r * r - 1)
        - 2 * q / (q * q - 1)
    )
    prod = B_eval(CoeffKey(1 - m, int(2 * m + r - 1)), p) * B_eval(
        CoeffKey(m, int(1 - 2 * m)), p
    )
    inner = deriv / 2 - bracket * prod
    den = (
        12
        * pochhammer(2 * m - 2 + 2 * r, r - 2)
        * q
        * math.factorial(int(2 * m - 3 + r))
        * math.factorial(-two_m)
    )
    pref = (-1) ** int(two_m - 1 + r) * (r * r - 1) * pochhammer(p.delta - m, r) / den
    return _BBAR_NORM * pref * inner / three_pow_half(r)


def bbar_res(key: CoeffKey, p: DensityPair) -> QSqrt3:
    """Resonant subdiagonal scalar bbar_{m+r,m}.

    Defined for m in {0} u -(1/2)Z+ with 2m + r >= 3 (directly) and for the
    dual range m + r >= 1, 2m + r <= -1 (by the parity reflection
    bbar_{m+r,m}(g, delta) = (-1)^(r-1) bbar_{1-m,1-m-r}(g, -delta)).
    """
    m, r = key.m, key.r
    if 2 * m != int(2 * m):
        raise ValueError("bbar_res requires half-integral m")
    if m <= 0 and 2 * m + r >= 3:
        if m == 0 and r < 3:
            raise ValueError("bbar at m = 0 requires r >= 3")
        return _bbar_res_direct(m, r, p)
    if m + r >= 1 and 2 * m + r <= -1:
        reflected = _bbar_res_direct(1 - m - r, r, p.swap())
        return (-1) ** (r - 1) * reflected
    raise ValueError(f"bbar_{{{m}+{r},{m}}} is outside the supported ranges")


def H_k(k: Fraction | int, p: DensityPair) -> Fraction:
    """H_k(lambda, mu) = 4 (3 lambda + k - 2)(3 mu - k - 1) + (k-2)(k+1)."""
    k = rat(k)
    return 4 * (3 * p.lam + k - 2) * (3 * p.mu - k - 1) + (k - 2) * (k + 1)
