"""Brute-force verifier built directly on the defining action formula.

Nothing here uses the closed-form coefficients: truncated symbols are acted on
by polynomial vector fields via the defining formula, the projective
quantization is constructed by Casimir generalized-eigenspace correction, and
the subdiagonal coefficients are recovered as proportionality ratios against
independently computed relative cochain values.  Agreement with the formula
engine is the central cross-check of the package.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .coefficients import DensityPair, SeriesSpec
from .scalars import QSqrt3, gen_binomial, pochhammer, rat


class ResonantInput(ValueError):
    """Casimir eigenvalues collide; no projective quantization exists."""


class TruncationTooSmall(ValueError):
    """The degree window cannot hold the requested computation."""


class ProportionalityViolated(RuntimeError):
    """A pi block failed to be a scalar multiple of the expected cochain."""


@dataclass(frozen=True)
class VecFieldGen:
    """The vector field x^power * d/dx."""

    power: int

    def __post_init__(self):
        if self.power < 0:
            raise ValueError("generator power must be non-negative")


@dataclass(frozen=True)
class TruncatedSymbol:
    """dx^delta sum_i f_i(x) d^(k-i), truncated to ``depth`` levels and
    polynomial degree <= ``max_degree``; coefficient table keyed (level, degree)."""

    params: DensityPair
    k: Fraction
    depth: int
    max_degree: int
    coeffs: dict[tuple[int, int], Fraction] = field(default_factory=dict)

    @property
    def delta(self) -> Fraction:
        return self.params.delta

    def with_coeffs(self, coeffs: dict) -> TruncatedSymbol:
        clean = {key: v for key, v in coeffs.items() if v}
        return TruncatedSymbol(self.params, self.k, self.depth, self.max_degree, clean)

    def add(self, other: TruncatedSymbol) -> TruncatedSymbol:
        out = dict(self.coeffs)
        for key, v in other.coeffs.items():
            out[key] = out.get(key, Fraction(0)) + v
        return self.with_coeffs(out)

    def scale(self, factor) -> TruncatedSymbol:
        factor = Fraction(factor)
        return self.with_coeffs({k: v * factor for k, v in self.coeffs.items()})

    def sub(self, other: TruncatedSymbol) -> TruncatedSymbol:
        return self.add(other.scale(-1))

    def is_zero(self) -> bool:
        return not self.coeffs

    def level_part(self, level: int) -> dict[int, Fraction]:
        return {a: v for (i, a), v in self.coeffs.items() if i == level}


def basis_symbol(
    params: DensityPair, k: Fraction, depth: int, max_degree: int, level: int, degree: int
) -> TruncatedSymbol:
    return TruncatedSymbol(params, k, depth, max_degree, {(level, degree): Fraction(1)})


def lie_action(gen: VecFieldGen, T: TruncatedSymbol) -> TruncatedSymbol:
    """Action of x^p d/dx on a truncated symbol via the defining formula.

    The order-r segment dx^delta f d^r picks up (g f' + (delta - r) g' f) d^r
    minus, for each s >= 1, (r choose s)(lambda + (r-s)/(s+1)) g^(s+1) f d^(r-s);
    with g = x^p the s-sum stops at p - 1.  Levels beyond the quotient depth
    and degrees beyond the window are dropped.
    """
    p = gen.power
    lam = T.params.lam
    delta = T.delta
    out: dict[tuple[int, int], Fraction] = {}

    def put(level: int, degree: int, value: Fraction) -> None:
        if value and 0 <= degree <= T.max_degree and level < T.depth:
            key = (level, degree)
            out[key] = out.get(key, Fraction(0)) + value

    for (i, a), f in T.coeffs.items():
        r = T.k - i
        if a + p - 1 >= 0:
            put(i, a + p - 1, f * (a + (delta - r) * p))
        for s in range(1, p):
            coeff = -f * gen_binomial(r, s) * (lam + Fraction(r - s, s + 1)) * pochhammer(p, s + 1)
            put(i + s, a + p - s - 1, coeff)
    return T.with_coeffs(out)


def density_action(nu, gen: VecFieldGen, a: int, max_degree: int) -> list[Fraction]:
    """L_nu(x^p d/dx)(dx^nu x^a) as a coefficient vector over degrees 0..max_degree."""
    nu = rat(nu)
    out = [Fraction(0)] * (max_degree + 1)
    target = a + gen.power - 1
    if 0 <= target <= max_degree:
        out[target] = a + nu * gen.power
    return out


_EULER = VecFieldGen(1)
_TRANSLATE = VecFieldGen(0)
_RAISE = VecFieldGen(2)


def casimir(T: TruncatedSymbol) -> TruncatedSymbol:
    """(x d)^2 - (x d) - (x^2 d)(d) applied through the symbol action."""
    euler = lie_action(_EULER, T)
    return lie_action(_EULER, euler).sub(euler).sub(
        lie_action(_RAISE, lie_action(_TRANSLATE, T))
    )


@dataclass
class BlockMatrix:
    """Map between direct sums of densities in the monomial basis.

    Entries are keyed ((target_level, target_degree), (source_level,
    source_degree)); ``block(i, j)`` extracts one Hom component.
    """

    src_levels: tuple[int, ...]
    tgt_levels: tuple[int, ...]
    max_degree: int
    entries: dict[tuple[tuple[int, int], tuple[int, int]], Fraction]

    def block(self, i: int, j: int) -> dict[tuple[int, int], Fraction]:
        return {
            (tb, sa): v
            for ((ti, tb), (sj, sa)), v in self.entries.items()
            if ti == i and sj == j
        }


class ProjectiveQuantization:
    """Symbol-preserving sl2-equivalence onto a non-resonant symbol quotient.

    Column (i, a) is the Casimir-corrected lift of dx^(n+i) x^a: the unique
    element of the quotient with that symbol lying in the (n+i)(n+i-1)
    generalized eigenspace.  Corrections strictly raise the level and lower
    the degree, so the construction is exact inside any window.
    """

    def __init__(self, spec: SeriesSpec, params: DensityPair, max_degree: int):
        if not spec.is_full():
            raise ValueError("the oracle quantizes full composition series only")
        if max_degree < 0:
            raise TruncationTooSmall("degree window must be non-negative")
        degrees = spec.degrees()
        for x in range(len(degrees)):
            for y in range(x + 1, len(degrees)):
                if degrees[x] + degrees[y] == 1:
                    raise ResonantInput(
                        f"Casimir eigenvalues collide at degrees {degrees[x]}, {degrees[y]}"
                    )
        self.spec = spec
        self.params = params
        self.max_degree = max_degree
        self.k = params.delta - spec.n
        self.scalars = [nu * nu - nu for nu in degrees]
        self.columns: dict[tuple[int, int], TruncatedSymbol] = {}
        l = spec.l
        for i in range(l):
            for a in range(max_degree + 1):
                T = basis_symbol(params, self.k, l, max_degree, i, a)
                for j in range(i + 1, l):
                    gap = self.scalars[i] - self.scalars[j]
                    residue = casimir(T).level_part(j)
                    if residue:
                        extra = {
                            (j, deg): v / gap for deg, v in residue.items()
                        }
                        T = T.add(T.with_coeffs(extra))
                self.columns[(i, a)] = T
        self._assert_projective_equivariance()

    def column(self, i: int, a: int) -> TruncatedSymbol:
        return self.columns[(i, a)]

    def expand(self, T: TruncatedSymbol) -> dict[tuple[int, int], Fraction]:
        """Coordinates of T in the quantized basis (forward substitution)."""
        residue = T
        coords: dict[tuple[int, int], Fraction] = {}
        for i in range(self.spec.l):
            for a, v in sorted(residue.level_part(i).items()):
                if v:
                    coords[(i, a)] = v
                    residue = residue.sub(self.columns[(i, a)].scale(v))
        if not residue.is_zero():
            raise ProportionalityViolated("expansion left a nonzero residue")
        return coords

    def matrix(self) -> BlockMatrix:
        entries = {}
        for (j, a), T in self.columns.items():
            for (i, b), v in T.coeffs.items():
                entries[((i, b), (j, a))] = v
        levels = tuple(range(self.spec.l))
        return BlockMatrix(levels, levels, self.max_degree, entries)

    def _assert_projective_equivariance(self) -> None:
        degrees = self.spec.degrees()
        for gen in (_TRANSLATE, _EULER, _RAISE):
            for (i, a), T in self.columns.items():
                if a + gen.power - 1 > self.max_degree:
                    continue
                lhs = lie_action(gen, T)
                vec = density_action(degrees[i], gen, a, self.max_degree)
                rhs = T.with_coeffs({})
                for b, v in enumerate(vec):
                    if v:
                        rhs = rhs.add(self.columns[(i, b)].scale(v))
                if lhs.coeffs != rhs.coeffs:
                    raise ProportionalityViolated(
                        f"projective equivariance failed at generator x^{gen.power}, "
                        f"column {(i, a)}"
                    )


def build_pq(spec: SeriesSpec, params: DensityPair, max_degree: int) -> ProjectiveQuantization:
    """Construct the projective quantization; raises ResonantInput when the
    composition series has colliding Casimir eigenvalues."""
    return ProjectiveQuantization(spec, params, max_degree)


def build_pq_by_raising(
    spec: SeriesSpec, params: DensityPair, max_degree: int
) -> dict[tuple[int, int], TruncatedSymbol]:
    """Independent reconstruction of the quantization columns.

    Starts from the correction-free degree-0 columns and propagates upward by
    requiring equivariance under x^2 d/dx alone; agreement with the Casimir
    construction witnesses uniqueness.  Fails when some a + 2(n+i) vanishes,
    so callers choose parameters off that locus.
    """
    pq_seed = ProjectiveQuantization(spec, params, max_degree)
    degrees = spec.degrees()
    columns: dict[tuple[int, int], TruncatedSymbol] = {}
    for i in range(spec.l):
        columns[(i, 0)] = basis_symbol(params, pq_seed.k, spec.l, max_degree, i, 0)
        for a in range(max_degree):
            factor = a + 2 * degrees[i]
            if factor == 0:
                raise ValueError(
                    f"raising construction stalls at level {i}, degree {a}"
                )
            columns[(i, a + 1)] = lie_action(_RAISE, columns[(i, a)]).scale(
                Fraction(1) / factor
            )
    return columns


def pi_blocks(
    pq: ProjectiveQuantization, gen: VecFieldGen
) -> dict[tuple[int, int], dict[tuple[int, int], Fraction]]:
    """All blocks of PQ^-1 . L(gen) . PQ, from faithful source columns only."""
    l = pq.spec.l
    blocks: dict[tuple[int, int], dict[tuple[int, int], Fraction]] = {
        (i, j): {} for i in range(l) for j in range(l)
    }
    max_a = pq.max_degree - max(gen.power - 1, 0)
    for j in range(l):
        for a in range(max_a + 1):
            image = lie_action(gen, pq.column(j, a))
            for (i, b), v in pq.expand(image).items():
                blocks[(i, j)][(b, a)] = v
    return blocks


def beta_eval(nu_src, nu_tgt, gen: VecFieldGen, max_degree: int) -> BlockMatrix:
    """The relative-cochain value beta(x^(r+1) d/dx): F_src -> F_tgt as a matrix.

    Computed as 6/(r-2)! times the (r-2)-fold raising action applied to
    dx^gap d^(gap-2), where gap = nu_tgt - nu_src; zero on the projective
    subalgebra (power <= 2).
    """
    nu_src, nu_tgt = rat(nu_src), rat(nu_tgt)
    gap = nu_tgt - nu_src
    if gap != int(gap) or int(gap) < 2:
        raise ValueError("beta requires an integer degree gap >= 2")
    gap = int(gap)
    entries: dict = {}
    matrix = BlockMatrix((0,), (0,), max_degree, entries)
    if gen.power <= 2:
        return matrix
    r = gen.power - 1
    pair = DensityPair(nu_src, nu_tgt)
    T = basis_symbol(pair, Fraction(gap - 2), gap - 1, max_degree, 0, 0)
    for _ in range(r - 2):
        T = lie_action(_RAISE, T)
    scale = Fraction(6, math.factorial(r - 2))
    for a in range(max_degree + 1):
        total = Fraction(0)
        for (i, d), f in T.coeffs.items():
            order = gap - 2 - i
            total += f * pochhammer(a, order)
        # weight homogeneity: each term lands back on degree a
        if total:
            entries[((0, a), (0, a))] = total * scale
    return matrix


def recover_b(
    spec: SeriesSpec,
    params: DensityPair,
    i: int,
    j: int,
    max_degree: int = 8,
    pq: ProjectiveQuantization | None = None,
) -> QSqrt3:
    """Recover b_{n+i,n+j} as the proportionality ratio pi block / beta.

    Also asserts that the first-subdiagonal block (j+1, j) vanishes and that
    the (i, j) block is an exact scalar multiple of beta on every faithful
    column; any violation raises ProportionalityViolated.
    """
    r = i - j
    if r < 2:
        raise ValueError("recover_b requires gap >= 2")
    if r > max_degree:
        raise TruncationTooSmall(f"gap {r} needs a degree window of at least {r}")
    if pq is None:
        pq = build_pq(spec, params, max_degree)
    gen = VecFieldGen(r + 1)
    blocks = pi_blocks(pq, gen)
    if j + 1 < spec.l and any(blocks[(j + 1, j)].values()):
        raise ProportionalityViolated("first-subdiagonal pi block is nonzero")
    target = blocks[(i, j)]
    beta = beta_eval(spec.n + j, spec.n + i, gen, max_degree)
    max_a = max_degree - r
    ratio: Fraction | None = None
    for a in range(max_a + 1):
        beta_v = beta.entries.get(((0, a), (0, a)), Fraction(0))
        pi_v = target.get((a, a), Fraction(0))
        if beta_v:
            candidate = pi_v / beta_v
            if ratio is None:
                ratio = candidate
            elif candidate != ratio:
                raise ProportionalityViolated(
                    f"pi/beta ratio varies across degrees at block ({i},{j})"
                )
        elif pi_v:
            raise ProportionalityViolated(
                f"pi block ({i},{j}) is nonzero where beta vanishes"
            )
    off_diagonal = {key: v for key, v in target.items() if key[0] != key[1] and v}
    if off_diagonal:
        raise ProportionalityViolated(f"pi block ({i},{j}) is not degree-diagonal")
    if ratio is None:
        raise TruncationTooSmall("no faithful column with nonzero beta value")
    return QSqrt3.of(ratio)


def brute_force_intertwiner(
    spec: SeriesSpec,
    pa: DensityPair,
    pb: DensityPair,
    max_degree: int = 8,
    gen_cap: int = 6,
) -> dict[int, QSqrt3] | None:
    """Search for a block-diagonal scalar intertwiner between the two
    quantized actions over all generators x^p d/dx with p <= gen_cap.

    Returns the rung scalars (normalized to 1 at offset 0) or None.  This is
    the oracle counterpart of the closed-form decision engine and shares no
    code with it beyond the action formula.
    """
    from .equivalence import ConstraintGraph, Edge, epsilon_solve

    pqa = build_pq(spec, pa, max_degree)
    pqb = build_pq(spec, pb, max_degree)
    l = spec.l
    edges: list[Edge] = []
    for power in range(gen_cap + 1):
        gen = VecFieldGen(power)
        blocks_a = pi_blocks(pqa, gen)
        blocks_b = pi_blocks(pqb, gen)
        for i in range(l):
            for j in range(l):
                if i < j and (any(blocks_a[(i, j)].values()) or any(blocks_b[(i, j)].values())):
                    raise ProportionalityViolated("quantized action is not lower triangular")
                if i <= j:
                    continue
                keys = set(blocks_a[(i, j)]) | set(blocks_b[(i, j)])
                for key in sorted(keys):
                    ca = blocks_a[(i, j)].get(key, Fraction(0))
                    cb = blocks_b[(i, j)].get(key, Fraction(0))
                    edges.append(
                        Edge(i, j, QSqrt3.of(ca), QSqrt3.of(cb), label="oracle")
                    )
    graph = ConstraintGraph(tuple(range(l)), tuple(edges))
    return epsilon_solve(graph)


def conjugate_symbol(T: TruncatedSymbol) -> TruncatedSymbol:
    """Adjoint symbol in the conjugate module, with the global phase dropped
    and the relative sign (-1)^level kept."""
    out: dict[tuple[int, int], Fraction] = {}
    for (i, a), f in T.coeffs.items():
        r = T.k - i
        sign = -1 if i % 2 else 1
        for s in range(0, a + 1):
            level, degree = i + s, a - s
            if level >= T.depth:
                break
            value = sign * f * gen_binomial(r, s) * pochhammer(a, s)
            if value:
                key = (level, degree)
                out[key] = out.get(key, Fraction(0)) + value
    return TruncatedSymbol(
        T.params.conjugate(), T.k, T.depth, T.max_degree, out
    )


def de_rham_compose(side: str, T: TruncatedSymbol) -> TruncatedSymbol:
    """Compose with the de Rham differential on the stated side.

    "left" maps weight-(lambda, 0) symbols to (lambda, 1); "right" maps
    (1, mu) to (0, mu).  Both raise the order by one.
    """
    if side == "left":
        if T.params.mu != 0:
            raise ValueError("left de Rham composition needs target weight 0")
        new_params = DensityPair(T.params.lam, Fraction(1))
        out: dict[tuple[int, int], Fraction] = {}
        for (i, a), f in T.coeffs.items():
            out[(i, a)] = out.get((i, a), Fraction(0)) + f
            if a >= 1 and i + 1 < T.depth:
                key = (i + 1, a - 1)
                out[key] = out.get(key, Fraction(0)) + f * a
        return TruncatedSymbol(new_params, T.k + 1, T.depth, T.max_degree,
                               {k: v for k, v in out.items() if v})
    if side == "right":
        if T.params.lam != 1:
            raise ValueError("right de Rham composition needs source weight 1")
        new_params = DensityPair(Fraction(0), T.params.mu)
        return TruncatedSymbol(new_params, T.k + 1, T.depth, T.max_degree,
                               dict(T.coeffs))
    raise ValueError("side must be 'left' or 'right'")
