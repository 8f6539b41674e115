"""Equivalence-pencil geometry: level conics, base points, zone classification.

Each classifying invariant (Rtilde, I, Mtilde) has level curves forming a
pencil of conics through four rational base points.  All geometry is exact;
decimal strings appear only at the CSV/SVG serialization boundary.

Levels are rationals; ``None`` stands for the level at infinity (the conic of
the invariant's denominator).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .scalars import GDPoly, QSqrt3, rat

Point = tuple[Fraction, Fraction]


class ConicClass:
    ELLIPSE = "ellipse"
    HYPERBOLA = "hyperbola"
    PARABOLA = "parabola"
    PARALLEL_LINES = "parallel_lines"
    CROSSING_LINES = "crossing_lines"
    DOUBLE_LINE = "double_line"
    POINT = "point"
    EMPTY = "empty"


@dataclass(frozen=True)
class Conic:
    """A x^2 + B xy + C y^2 + D x + E y + F in the tagged coordinates."""

    A: QSqrt3
    B: QSqrt3
    C: QSqrt3
    D: QSqrt3
    E: QSqrt3
    F: QSqrt3
    coords: str = "gamma_delta"

    def __post_init__(self):
        if not any((self.A, self.B, self.C, self.D, self.E)):
            raise ValueError("degenerate conic: all non-constant coefficients vanish")

    @staticmethod
    def from_poly(poly: GDPoly, coords: str) -> Conic:
        if poly.degree_g() > 2 or poly.degree_d() > 2:
            raise ValueError("polynomial has degree above 2")
        c = poly.coefficient
        return Conic(c(2, 0), c(1, 1), c(0, 2), c(1, 0), c(0, 1), c(0, 0), coords)

    def evaluate(self, x, y) -> QSqrt3:
        x, y = QSqrt3.of(rat(x) if not isinstance(x, QSqrt3) else x), QSqrt3.of(
            rat(y) if not isinstance(y, QSqrt3) else y
        )
        return (
            self.A * x * x + self.B * x * y + self.C * y * y
            + self.D * x + self.E * y + self.F
        )

    def scaled(self, factor) -> Conic:
        f = QSqrt3.of(factor)
        if not f:
            raise ValueError("cannot scale a conic by zero")
        return Conic(self.A * f, self.B * f, self.C * f, self.D * f,
                     self.E * f, self.F * f, self.coords)

    def is_rational(self) -> bool:
        return all(c.is_rational() for c in (self.A, self.B, self.C, self.D, self.E, self.F))


@dataclass(frozen=True)
class PencilFamily:
    """One of the three classifying pencils.

    kind "Rtilde" needs no parameter; "I" carries N5 (not a resonant value
    +-1, +-3/2); "M" carries N6 != 0.
    """

    kind: str
    n5: Fraction | None = None
    n6: Fraction | None = None

    def __post_init__(self):
        if self.kind == "Rtilde":
            return
        if self.kind == "I":
            if self.n5 is None:
                raise ValueError("I pencil requires n5")
            object.__setattr__(self, "n5", rat(self.n5))
            if self.n5 in (1, -1, Fraction(3, 2), Fraction(-3, 2)):
                raise ValueError("I pencil requires N5 not in {+-1, +-3/2}")
            return
        if self.kind == "M":
            if self.n6 is None:
                raise ValueError("M pencil requires n6")
            object.__setattr__(self, "n6", rat(self.n6))
            if self.n6 == 0:
                raise ValueError("M pencil requires N6 != 0")
            return
        raise ValueError(f"unknown pencil kind {self.kind!r}")

    @property
    def coords(self) -> str:
        return {"Rtilde": "gamma_delta", "I": "gamma5_delta", "M": "gamma6_delta"}[self.kind]


def _x() -> GDPoly:
    return GDPoly.g()


def _y() -> GDPoly:
    return GDPoly.d()


def _numerator_denominator(family: PencilFamily) -> tuple[GDPoly, GDPoly]:
    """The pencil as level curves of numerator / denominator = level."""
    x, y = _x(), _y()
    if family.kind == "Rtilde":
        return x * x - 3 * x, x + 1 - y * y
    if family.kind == "I":
        n = family.n5
        q = Fraction(6, 5) - Fraction(1, 5) * n * n
        num = (
            (x + (n * n - Fraction(15, 4))) ** 2
            - 4 * (n * y + q) ** 2
            - Fraction(9, 25) * (n * n - 1) * (4 * n * n - 9)
        )
        den = (x - (n * n + Fraction(7, 4))) ** 2 - 4 * (y + n) ** 2
        return num, den
    n = family.n6
    line1 = x - (n / 2 + 3) * y - 3
    line2 = x + (n / 2 + 3) * y - (n * n - 3 * n + 3)
    den = x - y * y + (n / 2) * y - 3
    return line1 * line2, den


def conic_at_level(family: PencilFamily, level: Fraction | None) -> Conic:
    """The level curve as an exact conic; level None is the curve at infinity."""
    num, den = _numerator_denominator(family)
    poly = den if level is None else num - rat(level) * den
    return Conic.from_poly(poly, family.coords)


def base_points(family: PencilFamily) -> list[Point]:
    """The four simultaneous zeroes of numerator and denominator, in the
    family's coordinates."""
    if family.kind == "Rtilde":
        return [
            (Fraction(0), Fraction(1)),
            (Fraction(0), Fraction(-1)),
            (Fraction(3), Fraction(2)),
            (Fraction(3), Fraction(-2)),
        ]
    if family.kind == "I":
        n = family.n5
        return [
            (n * n + 4 * n + Fraction(27, 4), n + Fraction(5, 2)),
            (n * n - 4 * n + Fraction(27, 4), n - Fraction(5, 2)),
            (n * n + Fraction(4, 5) * n + Fraction(3, 4), -Fraction(3, 5) * n - Fraction(1, 2)),
            (n * n - Fraction(4, 5) * n + Fraction(3, 4), -Fraction(3, 5) * n + Fraction(1, 2)),
        ]
    n = family.n6
    return [
        (Fraction(3), Fraction(0)),
        (Fraction(3, 2) * n * n + 3, -n),
        (n * n / 2 + Fraction(9, 2) * n + 12, n + 3),
        (n * n / 2 - Fraction(9, 2) * n + 12, n - 3),
    ]


def _det3(rows: list[list[QSqrt3]]) -> QSqrt3:
    (a, b, c), (d, e, f), (g, h, i) = rows
    return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)


def classify_conic(conic: Conic) -> str:
    """Exact real affine classification via sign tests in Q(sqrt 3).

    Uses the quadratic-part discriminant B^2 - 4AC and the determinant of the
    full symmetric matrix; every test is invariant under rescaling the six
    coefficients.
    """
    A, B, C, D, E, F = conic.A, conic.B, conic.C, conic.D, conic.E, conic.F
    if not any((A, B, C)):
        raise ValueError("quadratic part vanishes: not a conic")
    half = Fraction(1, 2)
    disc = B * B - 4 * A * C
    det = _det3([
        [A, B * half, D * half],
        [B * half, C, E * half],
        [D * half, E * half, F],
    ])
    s = disc.sign()
    if s < 0:
        if not det:
            return ConicClass.POINT
        return ConicClass.ELLIPSE if (A * det).sign() < 0 else ConicClass.EMPTY
    if s > 0:
        return ConicClass.HYPERBOLA if det else ConicClass.CROSSING_LINES
    if det:
        return ConicClass.PARABOLA
    if A:
        key = D * D - 4 * A * F
    else:
        key = E * E - 4 * C * F
    k = key.sign()
    if k > 0:
        return ConicClass.PARALLEL_LINES
    if k == 0:
        return ConicClass.DOUBLE_LINE
    return ConicClass.EMPTY


@dataclass(frozen=True)
class QuadrilateralData:
    """Slopes dy/dx of the six vertex lines (None = vertical), plus shape flags."""

    slopes: tuple[Fraction | None, ...]
    cyclic: bool
    trapezoid: bool
    double_vertex: Point | None


def _slope(p: Point, q: Point) -> Fraction | None:
    dx, dy = q[0] - p[0], q[1] - p[1]
    if dx == 0:
        return None
    return dy / dx


def _concyclic(points: list[Point]) -> bool:
    # |x^2+y^2  x  y  1| = 0 on all four points
    rows = [[x * x + y * y, x, y, Fraction(1)] for x, y in points]
    # 4x4 determinant by expansion along the last column
    def det3(r):
        (a, b, c), (d, e, f), (g, h, i) = r
        return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)

    total = Fraction(0)
    for idx in range(4):
        minor = [row[:3] for pos, row in enumerate(rows) if pos != idx]
        total += (-1) ** (idx + 3) * rows[idx][3] * det3(minor)
    return total == 0


def slopes_and_cyclicity(family: PencilFamily) -> QuadrilateralData:
    """Geometry of the base quadrilateral: vertex-line slopes, cyclicity,
    trapezoid and double-vertex detection.

    For the I pencil the slopes are +-1/2, +-1/3 and +-5/(8 N5); for the M
    pencil +-2/(N6 + 6), +-2/(N6 - 6) and +-2/(3 N6) (vertical lines reported
    as None).
    """
    if family.kind == "Rtilde":
        raise ValueError("slopes_and_cyclicity applies to the I and M pencils")
    points = base_points(family)
    double = None
    for a in range(4):
        for b in range(a + 1, 4):
            if points[a] == points[b]:
                double = points[a]
    pairs = [(a, b) for a in range(4) for b in range(a + 1, 4)]
    slopes = tuple(_slope(points[a], points[b]) for a, b in pairs)
    opposite = [((0, 1), (2, 3)), ((0, 2), (1, 3)), ((0, 3), (1, 2))]
    trapezoid = False
    for (a, b), (c, d) in opposite:
        if {points[a], points[b]} & {points[c], points[d]}:
            continue
        if _slope(points[a], points[b]) == _slope(points[c], points[d]):
            trapezoid = True
    cyclic = double is not None or _concyclic(points)
    return QuadrilateralData(slopes, cyclic, trapezoid, double)


def ipencil_residual(n5, level, gamma, delta) -> Fraction:
    """The completed-square identity of the I pencil, evaluated as lhs - rhs;
    exactly zero when level = I_n(gamma, delta)."""
    n = rat(n5)
    t = rat(level)
    x = rat(gamma) - 2 * n * rat(delta)
    y = rat(delta)
    lhs = (t - n * n) * ((t - 1) * (x - n * n - Fraction(15, 4)) + 2 * (t - n * n)) ** 2
    lhs -= 4 * (t - 1) * ((t - n * n) * (y - n / 5) + Fraction(6, 5) * (t - 1) * n) ** 2
    rhs = (
        -Fraction(1, 25)
        * (n * n - 1)
        * (9 * (t - 1) - 4 * (t - n * n))
        * (16 * n * n * (t - 1) - 25 * (t - n * n))
    )
    return lhs - rhs


# ---------------------------------------------------------------------------
# exact curve sampling and figure serialization
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CurvePoint:
    """A point (x, p + q*sqrt(disc)) lying exactly on a rational conic."""

    x: Fraction
    p: Fraction
    q: Fraction
    disc: Fraction

    def y_strings(self) -> str:
        return _decimal(self.p + self.q * _sqrt_approx(self.disc))

    def x_string(self) -> str:
        return _decimal(self.x)


def _sign_in_sqrt_field(u: Fraction, v: Fraction, d: Fraction) -> int:
    """Sign of u + v*sqrt(d) for rational u, v and d >= 0."""
    if v == 0 or d == 0:
        return (u > 0) - (u < 0)
    if u >= 0 and v >= 0:
        return 1 if (u or v) else 0
    if u <= 0 and v <= 0:
        return -1 if (u or v) else 0
    if u * u > v * v * d:
        return 1 if u > 0 else -1
    return 1 if v > 0 else -1


def _sqrt_approx(d: Fraction, digits: int = 12) -> Fraction:
    scale = 10**digits
    return Fraction(math.isqrt(d.numerator * d.denominator * scale * scale),
                    d.denominator * scale)


def _decimal(x: Fraction, places: int = 6) -> str:
    scaled = x * 10**places
    n, r = divmod(abs(scaled.numerator), scaled.denominator)
    if 2 * r >= scaled.denominator:
        n += 1
    sign = "-" if x < 0 and n else ""
    digits = str(n).rjust(places + 1, "0")
    return f"{sign}{digits[:-places]}.{digits[-places:]}"


def sample_level_curve(
    family: PencilFamily,
    level: Fraction | None,
    window: tuple[Fraction, Fraction, Fraction, Fraction],
    resolution: int = 64,
    include_base_points: bool = True,
) -> list[CurvePoint]:
    """Exact points of one level curve inside the window, solved per column.

    Every returned point satisfies the conic with residue exactly zero (the
    quadratic in y is solved in Q(sqrt(disc)) and verified symbolically);
    base points inside the window are always included.
    """
    if resolution < 2:
        raise ValueError("resolution must be at least 2")
    x0, x1, y0, y1 = (rat(v) for v in window)
    if x1 <= x0 or y1 <= y0:
        raise ValueError("window must have positive extent")
    conic = conic_at_level(family, level)
    if not conic.is_rational():
        raise ValueError("sampling requires a rational conic")
    A, B, C, D, E, F = (c.a for c in (conic.A, conic.B, conic.C, conic.D, conic.E, conic.F))

    points: list[CurvePoint] = []

    def in_y_window(p: Fraction, q: Fraction, d: Fraction) -> bool:
        return (
            _sign_in_sqrt_field(p - y0, q, d) >= 0
            and _sign_in_sqrt_field(y1 - p, -q, d) >= 0
        )

    def check_and_add(x: Fraction, p: Fraction, q: Fraction, d: Fraction) -> None:
        rational_part = C * (p * p + q * q * d) + (B * x + E) * p + A * x * x + D * x + F
        irrational_part = q * (2 * C * p + B * x + E)
        if rational_part or irrational_part:
            raise AssertionError("sampled point does not satisfy the conic")
        if in_y_window(p, q, d):
            points.append(CurvePoint(x, p, q, d))

    for step in range(resolution):
        x = x0 + (x1 - x0) * Fraction(step, resolution - 1)
        cy2 = C
        cy1 = B * x + E
        cy0 = A * x * x + D * x + F
        if cy2:
            disc = cy1 * cy1 - 4 * cy2 * cy0
            if disc < 0:
                continue
            base = -cy1 / (2 * cy2)
            spread = Fraction(1) / (2 * cy2)
            check_and_add(x, base, spread, disc)
            if disc:
                check_and_add(x, base, -spread, disc)
        elif cy1:
            check_and_add(x, -cy0 / cy1, Fraction(0), Fraction(0))
    if include_base_points:
        for bx, by in base_points(family):
            if x0 <= bx <= x1 and y0 <= by <= y1:
                points.append(CurvePoint(bx, by, Fraction(0), Fraction(0)))
    return points


def _family_label(family: PencilFamily) -> str:
    return family.kind


def _level_label(level: Fraction | None) -> str:
    return "inf" if level is None else str(level)


def render_csv(
    family: PencilFamily,
    levels: list[Fraction | None],
    window: tuple[Fraction, Fraction, Fraction, Fraction],
    resolution: int = 64,
) -> str:
    """CSV with columns family,level,x,y; deterministic for identical inputs."""
    lines = ["family,level,x,y"]
    for level in levels:
        for pt in sample_level_curve(family, level, window, resolution):
            lines.append(
                f"{_family_label(family)},{_level_label(level)},"
                f"{pt.x_string()},{pt.y_strings()}"
            )
    return "\n".join(lines) + "\n"


def render_svg(
    family: PencilFamily,
    levels: list[Fraction | None],
    window: tuple[Fraction, Fraction, Fraction, Fraction],
    resolution: int = 64,
) -> str:
    """Static SVG: one path per level curve branch, one circle per base point.

    The viewBox equals the requested window; a y-flip group maps math
    coordinates onto SVG's downward axis.
    """
    x0, x1, y0, y1 = (rat(v) for v in window)
    width, height = x1 - x0, y1 - y0
    stroke = _decimal(max(width, height) / 200, 6)
    radius = _decimal(max(width, height) / 80, 6)
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="{_decimal(x0)} {_decimal(y0)}'
        f' {_decimal(width)} {_decimal(height)}">',
        f'<g transform="matrix(1 0 0 -1 0 {_decimal(y0 + y1)})" fill="none"'
        f' stroke="black" stroke-width="{stroke}">',
    ]
    step = (x1 - x0) / (resolution - 1)
    for level in levels:
        pts = sample_level_curve(
            family, level, window, resolution, include_base_points=False
        )
        for branch_sign in (1, -1):
            branch = [
                p for p in pts
                if (p.q > 0) - (p.q < 0) == branch_sign or p.q == 0
            ]
            branch.sort(key=lambda p: (p.x, p.p))
            runs: list[list[CurvePoint]] = []
            for p in branch:
                if runs and p.x - runs[-1][-1].x <= step:
                    runs[-1].append(p)
                else:
                    runs.append([p])
            for run in runs:
                if len(run) >= 2:
                    coords = " L ".join(
                        f"{p.x_string()},{p.y_strings()}" for p in run
                    )
                    parts.append(f'<path d="M {coords}"/>')
    for bx, by in base_points(family):
        if x0 <= bx <= x1 and y0 <= by <= y1:
            parts.append(
                f'<circle cx="{_decimal(bx)}" cy="{_decimal(by)}" r="{radius}"'
                f' fill="black" stroke="none"/>'
            )
    parts.append("</g>")
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


# ---------------------------------------------------------------------------
# the delta = 0 double equivalence class
# ---------------------------------------------------------------------------

_DELTA0_EXCLUDED = {
    Fraction(0), Fraction(1, 2), Fraction(-1, 2), Fraction(1), Fraction(-1),
    Fraction(3, 2), Fraction(-3, 2), Fraction(5, 2), Fraction(-5, 2),
    Fraction(5, 6), Fraction(-5, 6),
}


def delta0_coefficients(n5: Fraction) -> tuple[Fraction, ...]:
    """(a_I, b_I, c_I, d_I, a_J, b_J, c_J, d_J): the delta = 0 reductions of
    Itilde and Jtilde as (gamma^2 + a*gamma + b) / (c*gamma + d)."""
    n2 = n5 * n5
    a_i = -2 * (n2 + Fraction(7, 4))
    b_i = (n2 + 2 * n5 + Fraction(7, 4)) * (n2 - 2 * n5 + Fraction(7, 4))
    c_i = Fraction(1)
    d_i = -Fraction(2, 5) * (n2 + Fraction(5, 4))
    a_j = -2 * (n2 + Fraction(1, 2))
    b_j = (n2 + Fraction(3, 4)) * (n2 + Fraction(11, 4)) / 2
    c_j = -6 * (n2 - Fraction(5, 12))
    d_j = (n2 + Fraction(3, 4)) * (n2 + Fraction(35, 4))
    return a_i, b_i, c_i, d_i, a_j, b_j, c_j, d_j


def double_class_from_reductions(
    coeffs: tuple[Fraction, ...]
) -> tuple[Fraction, Fraction] | None:
    """Solve for the gamma pair sharing two reduced invariants.

    ``coeffs`` is (a_I, b_I, c_I, d_I, a_J, b_J, c_J, d_J) for two rational
    functions (g^2 + a g + b)/(c g + d); equal values at gamma != gamma' force
    c*gamma*gamma' + d*(gamma+gamma') + (ad - bc) = 0 for each, a linear
    system in the pair's sum and product.  Returns (sum, (difference)^2), or
    None when the two roots coincide.
    """
    a_i, b_i, c_i, d_i, a_j, b_j, c_j, d_j = coeffs
    e_i = a_i * d_i - b_i * c_i
    e_j = a_j * d_j - b_j * c_j
    det = c_i * d_j - c_j * d_i
    if det == 0:
        raise ValueError("the double-class system is degenerate")
    total = (c_j * e_i - c_i * e_j) / det
    product = (d_i * e_j - d_j * e_i) / det
    diff_sq = total * total - 4 * product
    if diff_sq == 0:
        return None
    return total, diff_sq


def delta0_double_class(n5) -> tuple[Fraction, Fraction] | None:
    """Data of the unique delta = 0 equivalence class containing two points.

    Returns (gamma + gamma', (gamma - gamma')^2), or None when the two roots
    coincide so that every class has a single delta = 0 representative.
    Rejects resonant N5 and the values +-5/2, +-5/6 where a reduction
    degenerates.
    """
    n5 = rat(n5)
    if n5 in _DELTA0_EXCLUDED:
        raise ValueError(f"N5 = {n5} is outside the double-class computation's domain")
    return double_class_from_reductions(delta0_coefficients(n5))
