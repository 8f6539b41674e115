"""Exact scalar arithmetic: rationals, the field Q(sqrt 3), and small polynomial rings.

Everything downstream is built on three rings:

* ``Fraction`` (stdlib) for plain rationals,
* ``QSqrt3`` for numbers a + b*sqrt(3), the smallest field containing every
  evaluated coefficient at rational module parameters,
* ``GDPoly`` / ``UPoly`` for the sparse bivariate ring Q(sqrt3)[g, d] and the
  univariate ring Q(sqrt3)[u] that carry symbolic identities.

No floating point is used anywhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Union

Rational = Fraction

ScalarLike = Union[int, Fraction, "QSqrt3"]


def rat(value: int | str | Fraction) -> Fraction:
    """Parse a rational from an int, a Fraction, or a string like ``-3/4``."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    return Fraction(str(value).strip())


def rational_sqrt(x: Fraction) -> Fraction | None:
    """Exact square root of a non-negative rational, or None if irrational."""
    if x < 0:
        return None
    num, den = x.numerator, x.denominator
    rn, rd = math.isqrt(num), math.isqrt(den)
    if rn * rn == num and rd * rd == den:
        return Fraction(rn, rd)
    return None


@dataclass(frozen=True)
class QSqrt3:
    """An element a + b*sqrt(3) of the real quadratic field Q(sqrt 3).

    Equality and sign tests are exact; division by a nonzero element is exact
    because a^2 - 3 b^2 = 0 forces a = b = 0.
    """

    a: Fraction = Fraction(0)
    b: Fraction = Fraction(0)

    @staticmethod
    def of(value: ScalarLike) -> QSqrt3:
        if isinstance(value, QSqrt3):
            return value
        if isinstance(value, (int, Fraction)):
            return QSqrt3(Fraction(value), Fraction(0))
        raise TypeError(f"cannot coerce {value!r} to QSqrt3")

    @staticmethod
    def sqrt3() -> QSqrt3:
        return QSqrt3(Fraction(0), Fraction(1))

    def __bool__(self) -> bool:
        return bool(self.a) or bool(self.b)

    def is_rational(self) -> bool:
        return self.b == 0

    def __add__(self, other: ScalarLike) -> QSqrt3:
        if isinstance(other, (int, Fraction)):
            return QSqrt3(self.a + other, self.b)
        if isinstance(other, QSqrt3):
            return QSqrt3(self.a + other.a, self.b + other.b)
        return NotImplemented

    __radd__ = __add__

    def __neg__(self) -> QSqrt3:
        return QSqrt3(-self.a, -self.b)

    def __sub__(self, other: ScalarLike) -> QSqrt3:
        if isinstance(other, (int, Fraction, QSqrt3)):
            return self + (-QSqrt3.of(other))
        return NotImplemented

    def __rsub__(self, other: ScalarLike) -> QSqrt3:
        if isinstance(other, (int, Fraction)):
            return QSqrt3.of(other) + (-self)
        return NotImplemented

    def __mul__(self, other: ScalarLike) -> QSqrt3:
        if isinstance(other, (int, Fraction)):
            return QSqrt3(self.a * other, self.b * other)
        if isinstance(other, QSqrt3):
            return QSqrt3(
                self.a * other.a + 3 * self.b * other.b,
                self.a * other.b + self.b * other.a,
            )
        return NotImplemented

    __rmul__ = __mul__

    def inverse(self) -> QSqrt3:
        norm = self.a * self.a - 3 * self.b * self.b
        if norm == 0:
            raise ZeroDivisionError("division by zero in Q(sqrt3)")
        return QSqrt3(self.a / norm, -self.b / norm)

    def __truediv__(self, other: ScalarLike) -> QSqrt3:
        if isinstance(other, (int, Fraction, QSqrt3)):
            return self * QSqrt3.of(other).inverse()
        return NotImplemented

    def __rtruediv__(self, other: ScalarLike) -> QSqrt3:
        if isinstance(other, (int, Fraction)):
            return QSqrt3.of(other) * self.inverse()
        return NotImplemented

    def __pow__(self, n: int) -> QSqrt3:
        if n < 0:
            return self.inverse() ** (-n)
        out = QSqrt3(Fraction(1))
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            return self.a == other and self.b == 0
        if isinstance(other, QSqrt3):
            return self.a == other.a and self.b == other.b
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.a, self.b))

    def sign(self) -> int:
        """Exact sign of the real number a + b*sqrt(3)."""
        if self.a == 0 and self.b == 0:
            return 0
        if self.a >= 0 and self.b >= 0:
            return 1
        if self.a <= 0 and self.b <= 0:
            return -1
        # opposite signs: compare a^2 with 3 b^2
        if self.a * self.a > 3 * self.b * self.b:
            return 1 if self.a > 0 else -1
        return 1 if self.b > 0 else -1

    def galois_conjugate(self) -> QSqrt3:
        return QSqrt3(self.a, -self.b)

    def as_strings(self) -> list[str]:
        return [str(self.a), str(self.b)]

    def __repr__(self) -> str:
        return f"QSqrt3({self.a}, {self.b})"

    def __str__(self) -> str:
        if self.b == 0:
            return str(self.a)
        if self.a == 0:
            return f"{self.b}*sqrt3"
        return f"{self.a} + {self.b}*sqrt3"


def _as_coeff(value: ScalarLike) -> QSqrt3:
    return QSqrt3.of(value)


class GDPoly:
    """Sparse polynomial over Q(sqrt3) in two variables g and d.

    g stands for gamma^(1/2) and d for delta; monomials are keyed by
    (g-power, d-power) and zero coefficients are never stored.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: dict[tuple[int, int], QSqrt3] | None = None):
        clean: dict[tuple[int, int], QSqrt3] = {}
        if terms:
            for key, coeff in terms.items():
                if coeff:
                    clean[key] = coeff
        self.terms = clean

    # constructors -----------------------------------------------------
    @staticmethod
    def const(value: ScalarLike) -> GDPoly:
        return GDPoly({(0, 0): QSqrt3.of(value)})

    @staticmethod
    def zero() -> GDPoly:
        return GDPoly()

    @staticmethod
    def g(power: int = 1) -> GDPoly:
        return GDPoly({(power, 0): QSqrt3.of(1)})

    @staticmethod
    def d(power: int = 1) -> GDPoly:
        return GDPoly({(0, power): QSqrt3.of(1)})

    @staticmethod
    def of(value: ScalarLike | GDPoly) -> GDPoly:
        if isinstance(value, GDPoly):
            return value
        return GDPoly.const(value)

    # ring operations ---------------------------------------------------
    def __bool__(self) -> bool:
        return bool(self.terms)

    def __add__(self, other: ScalarLike | GDPoly) -> GDPoly:
        if isinstance(other, (int, Fraction, QSqrt3)):
            other = GDPoly.const(other)
        if not isinstance(other, GDPoly):
            return NotImplemented
        out = dict(self.terms)
        for key, coeff in other.terms.items():
            out[key] = out.get(key, QSqrt3()) + coeff
        return GDPoly(out)

    __radd__ = __add__

    def __neg__(self) -> GDPoly:
        return GDPoly({k: -c for k, c in self.terms.items()})

    def __sub__(self, other: ScalarLike | GDPoly) -> GDPoly:
        return self + (-GDPoly.of(other))

    def __rsub__(self, other: ScalarLike | GDPoly) -> GDPoly:
        return GDPoly.of(other) + (-self)

    def __mul__(self, other: ScalarLike | GDPoly) -> GDPoly:
        if isinstance(other, (int, Fraction, QSqrt3)):
            c = QSqrt3.of(other)
            return GDPoly({k: v * c for k, v in self.terms.items()})
        if not isinstance(other, GDPoly):
            return NotImplemented
        out: dict[tuple[int, int], QSqrt3] = {}
        for (i1, j1), c1 in self.terms.items():
            for (i2, j2), c2 in other.terms.items():
                key = (i1 + i2, j1 + j2)
                out[key] = out.get(key, QSqrt3()) + c1 * c2
        return GDPoly(out)

    __rmul__ = __mul__

    def __truediv__(self, other: ScalarLike) -> GDPoly:
        inv = QSqrt3.of(other).inverse()
        return self * inv

    def __pow__(self, n: int) -> GDPoly:
        if n < 0:
            raise ValueError("negative powers are not defined for GDPoly")
        out = GDPoly.const(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction, QSqrt3)):
            other = GDPoly.const(other)
        if not isinstance(other, GDPoly):
            return NotImplemented
        return self.terms == other.terms

    # queries -----------------------------------------------------------
    def evaluate(self, g_value: ScalarLike, d_value: ScalarLike) -> QSqrt3:
        gv, dv = QSqrt3.of(g_value), QSqrt3.of(d_value)
        total = QSqrt3()
        for (i, j), coeff in self.terms.items():
            total = total + coeff * gv**i * dv**j
        return total

    def substitute_d(self, d_value: ScalarLike) -> GDPoly:
        dv = QSqrt3.of(d_value)
        out: dict[tuple[int, int], QSqrt3] = {}
        for (i, j), coeff in self.terms.items():
            key = (i, 0)
            out[key] = out.get(key, QSqrt3()) + coeff * dv**j
        return GDPoly(out)

    def negate_g(self) -> GDPoly:
        """The polynomial p(-g, d)."""
        return GDPoly(
            {k: (c if k[0] % 2 == 0 else -c) for k, c in self.terms.items()}
        )

    def negate_d(self) -> GDPoly:
        return GDPoly(
            {k: (c if k[1] % 2 == 0 else -c) for k, c in self.terms.items()}
        )

    def degree_g(self) -> int:
        return max((k[0] for k in self.terms), default=-1)

    def degree_d(self) -> int:
        return max((k[1] for k in self.terms), default=-1)

    def coefficient(self, g_power: int, d_power: int) -> QSqrt3:
        return self.terms.get((g_power, d_power), QSqrt3())

    def __repr__(self) -> str:
        if not self.terms:
            return "GDPoly(0)"
        parts = []
        for (i, j), coeff in sorted(self.terms.items()):
            mono = "".join(
                s for s in (f"g^{i}" if i else "", f"d^{j}" if j else "") if s
            )
            parts.append(f"({coeff}){mono}" if mono else f"({coeff})")
        return "GDPoly(" + " + ".join(parts) + ")"


class UPoly:
    """Dense polynomial over Q(sqrt3) in one formal variable u."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[ScalarLike] = ()):
        cs = [QSqrt3.of(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.coeffs = cs

    @staticmethod
    def const(value: ScalarLike) -> UPoly:
        return UPoly([value])

    @staticmethod
    def u(shift: ScalarLike = 0) -> UPoly:
        """The polynomial u + shift."""
        return UPoly([shift, 1])

    @staticmethod
    def of(value: ScalarLike | UPoly) -> UPoly:
        if isinstance(value, UPoly):
            return value
        return UPoly.const(value)

    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __add__(self, other: ScalarLike | UPoly) -> UPoly:
        other = UPoly.of(other) if not isinstance(other, UPoly) else other
        n = max(len(self.coeffs), len(other.coeffs))
        out = []
        for k in range(n):
            a = self.coeffs[k] if k < len(self.coeffs) else QSqrt3()
            b = other.coeffs[k] if k < len(other.coeffs) else QSqrt3()
            out.append(a + b)
        return UPoly(out)

    __radd__ = __add__

    def __neg__(self) -> UPoly:
        return UPoly([-c for c in self.coeffs])

    def __sub__(self, other: ScalarLike | UPoly) -> UPoly:
        return self + (-UPoly.of(other))

    def __rsub__(self, other: ScalarLike | UPoly) -> UPoly:
        return UPoly.of(other) + (-self)

    def __mul__(self, other: ScalarLike | UPoly) -> UPoly:
        if isinstance(other, (int, Fraction, QSqrt3)):
            c = QSqrt3.of(other)
            return UPoly([a * c for a in self.coeffs])
        if not isinstance(other, UPoly):
            return NotImplemented
        if not self.coeffs or not other.coeffs:
            return UPoly()
        out = [QSqrt3() for _ in range(len(self.coeffs) + len(other.coeffs) - 1)]
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return UPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> UPoly:
        out = UPoly.const(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction, QSqrt3)):
            other = UPoly.const(other)
        if not isinstance(other, UPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def derivative(self) -> UPoly:
        return UPoly([k * c for k, c in enumerate(self.coeffs)][1:])

    def evaluate(self, value: ScalarLike) -> QSqrt3:
        v = QSqrt3.of(value)
        total = QSqrt3()
        for c in reversed(self.coeffs):
            total = total * v + c
        return total

    def __repr__(self) -> str:
        return f"UPoly({[str(c) for c in self.coeffs]})"


def pochhammer(x, r: int):
    """Falling factorial (x)_r = x (x-1) ... (x-r+1); (x)_0 = 1.

    Works over any of the rings here (int, Fraction, QSqrt3, GDPoly, UPoly).
    """
    if r < 0:
        raise ValueError("pochhammer requires r >= 0")
    out = x**0
    for t in range(r):
        out = out * (x - t)
    return out


def gen_binomial(r: int | Fraction, s: int) -> Fraction:
    """Generalized binomial coefficient (r choose s) = (r)_s / s! for rational r."""
    if s < 0:
        raise ValueError("gen_binomial requires s >= 0")
    return Fraction(pochhammer(Fraction(r), s), math.factorial(s))


def three_pow_half(r: int) -> QSqrt3:
    """3^(r/2) exactly: rational for even r, a multiple of sqrt(3) for odd r."""
    if r < 0:
        raise ValueError("three_pow_half requires r >= 0")
    if r % 2 == 0:
        return QSqrt3(Fraction(3**(r // 2)))
    return QSqrt3(Fraction(0), Fraction(3**((r - 1) // 2)))


def parity_split(p: GDPoly) -> tuple[GDPoly, GDPoly]:
    """Split into the parts with even and odd g-power; even + odd == p."""
    even = {k: c for k, c in p.terms.items() if k[0] % 2 == 0}
    odd = {k: c for k, c in p.terms.items() if k[0] % 2 == 1}
    return GDPoly(even), GDPoly(odd)
