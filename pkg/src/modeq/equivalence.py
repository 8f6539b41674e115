"""Equivalence decision engine.

Two symbol quotients with the same composition series are equivalent exactly
when a family of nonzero scalars (one per occupied rung) satisfies one linear
relation per coefficient slot.  The engine materializes those relations as a
graph with multiplicative edge weights and solves it by weighted union-find:

* a slot vanishing on one side only is an immediate obstruction,
* a slot vanishing on both sides imposes nothing,
* cycles of nonvanishing slots must have ratio product one -- this is where
  the rational invariants (I, J, K, M, R) enter.

Non-resonant series of any length, the classified resonant series of length
<= 5, and the supported lacunary patterns all route through the same solver;
the resonant corner cases at (l, n) = (4, 0) and (4, -2) carry one extra
conditional slot.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction

from .coefficients import CoeffKey, DensityPair, SeriesSpec, bbar_res
from .invariants import SvcEntry, invariant, svc_entry, svc_profile
from .scalars import QSqrt3, pochhammer, rat


class SpecMismatch(ValueError):
    """The two modules do not share (n, l, pattern)."""


class UnsupportedPattern(ValueError):
    """The lacunary pattern is not one of the classified ones."""


class ExcludedN(ValueError):
    """The offset n is outside the proven range for this pattern."""


class ResonanceClass(enum.Enum):
    NON_RESONANT = "non_resonant"
    INTEGRAL_RESONANT = "integral_resonant"
    HALF_INTEGRAL_RESONANT = "half_integral_resonant"


def resonance_class(spec: SeriesSpec) -> ResonanceClass:
    """Resonance of the spanning series: n in {0, -1/2, -1, ..., 2 - l}."""
    n = spec.n
    if 2 * n == int(2 * n) and 2 - spec.l <= n <= 0:
        if n == int(n):
            return ResonanceClass.INTEGRAL_RESONANT
        return ResonanceClass.HALF_INTEGRAL_RESONANT
    return ResonanceClass.NON_RESONANT


@dataclass(frozen=True)
class Edge:
    """One relation ca * eps_i = cb * eps_j between rung scalars."""

    i: int
    j: int
    ca: QSqrt3
    cb: QSqrt3
    label: str = "svc"


@dataclass(frozen=True)
class ConstraintGraph:
    nodes: tuple[int, ...]
    edges: tuple[Edge, ...]


@dataclass(frozen=True)
class FailingRecord:
    """A concrete violated condition: one-sided vanishing or a bad cycle."""

    i: int
    j: int
    value_a: QSqrt3
    value_b: QSqrt3
    kind: str = "svc"


@dataclass(frozen=True)
class Verdict:
    outcome: str  # "equivalent" | "inequivalent" | "unsupported"
    witness: dict[int, QSqrt3] | None = None
    zeta_used: bool = False
    failing: FailingRecord | None = None
    reason: str | None = None

    @property
    def is_equivalent(self) -> bool:
        return self.outcome == "equivalent"

    @staticmethod
    def equivalent(witness: dict[int, QSqrt3], zeta_used: bool = False) -> Verdict:
        return Verdict("equivalent", witness=witness, zeta_used=zeta_used)

    @staticmethod
    def inequivalent(failing: FailingRecord) -> Verdict:
        return Verdict("inequivalent", failing=failing)

    @staticmethod
    def unsupported(reason: str) -> Verdict:
        return Verdict("unsupported", reason=reason)


class _RatioUnionFind:
    """Union-find whose nodes carry eps_node = weight * eps_root."""

    def __init__(self, nodes):
        self.parent = {x: x for x in nodes}
        self.weight = {x: QSqrt3.of(1) for x in nodes}

    def find(self, x) -> tuple[int, QSqrt3]:
        if self.parent[x] == x:
            return x, self.weight[x]
        root, w = self.find(self.parent[x])
        self.parent[x] = root
        self.weight[x] = self.weight[x] * w
        return root, self.weight[x]

    def relate(self, i, j, ratio: QSqrt3) -> bool:
        """Impose eps_i = ratio * eps_j; False on an inconsistent cycle."""
        ri, wi = self.find(i)
        rj, wj = self.find(j)
        if ri == rj:
            return wi == ratio * wj
        self.parent[rj] = ri
        self.weight[rj] = wi / (ratio * wj)
        return True


def _solve_detail(
    graph: ConstraintGraph,
) -> tuple[dict[int, QSqrt3] | None, Edge | None, str]:
    uf = _RatioUnionFind(graph.nodes)
    for edge in graph.edges:
        za, zb = not edge.ca, not edge.cb
        if za and zb:
            continue
        if za or zb:
            return None, edge, "svc"
        if not uf.relate(edge.i, edge.j, edge.cb / edge.ca):
            return None, edge, "cycle"
    witness = {}
    for node in graph.nodes:
        _, w = uf.find(node)
        witness[node] = w
    base_root, base_w = uf.find(graph.nodes[0])
    for node in graph.nodes:
        root, _ = uf.find(node)
        if root == base_root:
            witness[node] = witness[node] / base_w
    return witness, None, ""


def epsilon_solve(graph: ConstraintGraph) -> dict[int, QSqrt3] | None:
    """Nonzero rung scalars satisfying every edge, normalized to eps = 1 at the
    lowest offset, or None when the system is infeasible."""
    witness, _, _ = _solve_detail(graph)
    return witness


def _verdict_from_graph(graph: ConstraintGraph, zeta_used: bool = False) -> Verdict:
    witness, bad, kind = _solve_detail(graph)
    if witness is not None:
        return Verdict.equivalent(witness, zeta_used=zeta_used)
    return Verdict.inequivalent(
        FailingRecord(bad.i, bad.j, bad.ca, bad.cb, kind=kind)
    )


def _part_i_covers(n: Fraction, i: int, j: int) -> bool:
    """Slots whose relation keeps the plain Pochhammer*B coefficients under
    resonance: source degree >= 1/2, target degree <= 1/2, or degree sum in
    {0, 1, 2} (the sum-1 antidiagonal scalars are proportional to the same
    Pochhammer*B)."""
    return n + j >= Fraction(1, 2) or n + i <= Fraction(1, 2) or 2 * n + i + j in (0, 1, 2)


_EXCEPTIONAL_VALUE_PAIRS = ((Fraction(-4), Fraction(1)), (Fraction(0), Fraction(5)))


def _cocycle_guard(spec: SeriesSpec) -> None:
    """Gap-2..4 relations determine all others unless an omitted in-pattern pair
    realizes one of the finitely many exceptional density pairs; those force
    resonance or irrational n, so they are unreachable here."""
    for j in spec.pattern:
        for i in spec.pattern:
            if i - j >= 5 and (spec.n + j, spec.n + i) in _EXCEPTIONAL_VALUE_PAIRS:
                raise RuntimeError(
                    f"exceptional cocycle pair ({spec.n + j}, {spec.n + i}) reached; "
                    "the gap-2..4 relation set would be incomplete"
                )


def build_constraints(
    spec: SeriesSpec, pa: DensityPair, pb: DensityPair
) -> ConstraintGraph:
    """The relation graph for one pair of modules sharing ``spec``.

    Non-resonant: one edge per in-pattern slot of gap 2..4.  Resonant: the
    same edges where the plain coefficients remain valid, bbar-weighted edges
    on the remaining half-integral singular slots, and the
    delta * gamma^(1/2) edge between the F_0 and F_1 rungs for integral n.
    Slots needing the shared free scalar of the integral corner cases raise
    ExcludedN; ``decide`` handles those corners separately.
    """
    rc = resonance_class(spec)
    if rc is ResonanceClass.NON_RESONANT:
        _cocycle_guard(spec)
    n = spec.n
    edges: list[Edge] = []
    for ea, eb in zip(svc_profile(spec, pa), svc_profile(spec, pb)):
        if ea.resonant:
            edges.append(Edge(ea.i, ea.j, ea.value, eb.value, label="resonant"))
            continue
        if rc is ResonanceClass.NON_RESONANT or _part_i_covers(n, ea.i, ea.j):
            edges.append(Edge(ea.i, ea.j, ea.value, eb.value, label="svc"))
            continue
        m, r = n + ea.j, ea.i - ea.j
        if (m == 0 and (1 - n) in spec.pattern) or (
            m + r == 1 and (-n) in spec.pattern
        ):
            raise ExcludedN(
                f"slot ({ea.i},{ea.j}) at n = {n} shares a free scalar with the "
                "de Rham rung; not covered by the generic solver"
            )
        key = CoeffKey(m, r)
        edges.append(
            Edge(ea.i, ea.j, bbar_res(key, pa), bbar_res(key, pb), label="bbar")
        )
    return ConstraintGraph(spec.pattern, tuple(edges))


# resonant (l, n) handled by the generic solver; every slot keeps plain
# coefficients there
_RESONANT_GENERIC = {
    (2, Fraction(0)),
    (3, Fraction(0)),
    (3, Fraction(-1, 2)),
    (3, Fraction(-1)),
    (4, Fraction(-1, 2)),
    (4, Fraction(-1)),
    (4, Fraction(-3, 2)),
    (5, Fraction(-3, 2)),
}


def _decide_res_l4_corner(spec: SeriesSpec, pa: DensityPair, pb: DensityPair) -> Verdict:
    """Length 4 at n = 0 and its dual n = -2: the slot joining the outer rungs
    is absorbed by a free scalar unless its companion coefficient vanishes, in
    which case an extra order-splitting quantity must vanish simultaneously."""
    n = spec.n
    if n == 0:
        plain = [svc_entry(n, 2, 0, pa), svc_entry(n, 3, 1, pa)]
        plain_b = [svc_entry(n, 2, 0, pb), svc_entry(n, 3, 1, pb)]
        trigger_a, trigger_b = plain[1], plain_b[1]
        extra_a = pochhammer(QSqrt3.of(pa.delta), 4) * pa.gamma_half
        extra_b = pochhammer(QSqrt3.of(pb.delta), 4) * pb.gamma_half
        res = Edge(1, 0, QSqrt3.of(pa.delta) * pa.gamma_half,
                   QSqrt3.of(pb.delta) * pb.gamma_half, label="resonant")
    else:  # n == -2
        plain = [svc_entry(n, 2, 0, pa), svc_entry(n, 3, 1, pa)]
        plain_b = [svc_entry(n, 2, 0, pb), svc_entry(n, 3, 1, pb)]
        trigger_a, trigger_b = plain[0], plain_b[0]
        extra_a = pochhammer(QSqrt3.of(pa.delta + 3), 4) * pa.gamma_half
        extra_b = pochhammer(QSqrt3.of(pb.delta + 3), 4) * pb.gamma_half
        res = Edge(3, 2, QSqrt3.of(pa.delta) * pa.gamma_half,
                   QSqrt3.of(pb.delta) * pb.gamma_half, label="resonant")
    edges = [
        Edge(ea.i, ea.j, ea.value, eb.value, label="svc")
        for ea, eb in zip(plain, plain_b)
    ]
    edges.append(res)
    zeta_used = False
    if trigger_a.is_zero and trigger_b.is_zero:
        edges.append(Edge(3, 0, extra_a, extra_b, label="splitting"))
    elif not trigger_a.is_zero and not trigger_b.is_zero:
        zeta_used = True
    # one-sided trigger vanishing fails on the trigger edge itself
    return _verdict_from_graph(ConstraintGraph(spec.pattern, tuple(edges)), zeta_used)


def decide(spec: SeriesSpec, pa: DensityPair, pb: DensityPair) -> Verdict:
    """Decide equivalence of the two modules with composition series ``spec``.

    Complete for every non-resonant series (any length, supported lacunary
    patterns), for resonant series of length <= 4, and for the self-dual
    resonant series of length 5; other resonant series return Unsupported.
    """
    if not spec.is_full():
        return decide_lacunary(spec.pattern, spec.n, pa, pb)
    rc = resonance_class(spec)
    if rc is ResonanceClass.NON_RESONANT:
        return _verdict_from_graph(build_constraints(spec, pa, pb))
    key = (spec.l, spec.n)
    if key in _RESONANT_GENERIC:
        verdict = _verdict_from_graph(build_constraints(spec, pa, pb))
        if (
            key == (4, Fraction(-1))
            and verdict.outcome == "inequivalent"
            and verdict.failing.kind == "cycle"
        ):
            ra, rb = invariant("R", spec.n, pa), invariant("R", spec.n, pb)
            verdict = Verdict.inequivalent(
                FailingRecord(3, 0, ra.value, rb.value, kind="invariant_R")
            )
        return verdict
    if spec.l == 4 and spec.n in (Fraction(0), Fraction(-2)):
        return _decide_res_l4_corner(spec, pa, pb)
    return Verdict.unsupported(
        "resonant series of length >= 5 are classified only in the self-dual "
        "case n = -3/2"
    )


def decide_modules(
    spec_a: SeriesSpec, pa: DensityPair, spec_b: SeriesSpec, pb: DensityPair
) -> Verdict:
    """Guarded entry point: the two modules must share (n, l, pattern)."""
    if (spec_a.n, spec_a.l, spec_a.pattern) != (spec_b.n, spec_b.l, spec_b.pattern):
        raise SpecMismatch(
            f"composition series differ: (n={spec_a.n}, l={spec_a.l}, "
            f"pattern={spec_a.pattern}) vs (n={spec_b.n}, l={spec_b.l}, "
            f"pattern={spec_b.pattern})"
        )
    return decide(spec_a, pa, pb)


# supported lacunary patterns: primal forms, their excluded offsets, and the
# dual forms reduced by swapping (lambda, mu) and reflecting n
_PRIMAL_EXCLUSIONS: dict[tuple[int, ...], frozenset[Fraction]] = {
    (0, 2): frozenset({Fraction(0), Fraction(-1)}),
    (0, 2, 3): frozenset({Fraction(-2), Fraction(0)}),
    (0, 2, 4): frozenset(
        {Fraction(-3), Fraction(-5, 2), Fraction(-1, 2), Fraction(0)}
    ),
    (0, 2, 3, 4): frozenset(
        {Fraction(-3), Fraction(-5, 2), Fraction(-2), Fraction(-1, 2), Fraction(0)}
    ),
    (0, 2, 3, 5): frozenset(
        {
            Fraction(-4), Fraction(-7, 2), Fraction(-3), Fraction(-2),
            Fraction(-1), Fraction(-1, 2), Fraction(0),
        }
    ),
    (0, 2, 3, 4, 5): frozenset(
        {
            Fraction(-4), Fraction(-7, 2), Fraction(-3), Fraction(-2),
            Fraction(-1), Fraction(-1, 2), Fraction(0),
        }
    ),
}

_DUAL_OF = {
    (0, 1, 3): (0, 2, 3),
    (0, 1, 2, 4): (0, 2, 3, 4),
    (0, 1, 2, 3, 5): (0, 2, 3, 4, 5),
}

_EXPERIMENTAL = (0, 2, 3, 4, 6)

SUPPORTED_PATTERNS = (
    tuple(_PRIMAL_EXCLUSIONS) + tuple(_DUAL_OF) + (_EXPERIMENTAL,)
)


def decide_lacunary(
    pattern, n, pa: DensityPair, pb: DensityPair, experimental: bool = False
) -> Verdict:
    """Decide equivalence for a lacunary composition series.

    Dual patterns (those containing the offset-1 rung but skipping a higher
    one) are reduced to their primal form by swapping (lambda, mu) and
    reflecting n; the reported witness refers to the reduced series.
    """
    pattern = tuple(sorted(int(p) for p in pattern))
    n = rat(n)
    if pattern in _DUAL_OF:
        primal = _DUAL_OF[pattern]
        l = pattern[-1] + 1
        return decide_lacunary(primal, 2 - l - n, pa.swap(), pb.swap(), experimental)
    if pattern == _EXPERIMENTAL:
        if not experimental:
            raise UnsupportedPattern(
                "pattern (0,2,3,4,6) is experimental; pass experimental=True"
            )
        spec = SeriesSpec(n, pattern[-1] + 1, pattern)
        if resonance_class(spec) is not ResonanceClass.NON_RESONANT:
            raise ExcludedN(
                f"n = {n} is resonant for the spanning length-7 window"
            )
        return _verdict_from_graph(build_constraints(spec, pa, pb))
    if pattern not in _PRIMAL_EXCLUSIONS:
        raise UnsupportedPattern(f"lacunary pattern {pattern} is not classified")
    if n in _PRIMAL_EXCLUSIONS[pattern]:
        raise ExcludedN(f"n = {n} is excluded for pattern {pattern}")
    spec = SeriesSpec(n, pattern[-1] + 1, pattern)
    return _verdict_from_graph(build_constraints(spec, pa, pb))


def _partition(items, are_equivalent) -> list[list]:
    classes: list[list] = []
    for item in items:
        for cls in classes:
            if are_equivalent(cls[0], item):
                cls.append(item)
                break
        else:
            classes.append([item])
    return classes


def known_tables(which: str) -> dict:
    """Regenerate a published classification on a rational sample grid."""
    if which == "DO97":
        spec = SeriesSpec(Fraction(-2), 3)
        grid = [Fraction(v) for v in (-2, -1, 0, 1, 2, 3)] + [Fraction(1, 2)]
        mods = [DensityPair(x, x) for x in grid]
    elif which == "GO96":
        spec = SeriesSpec(Fraction(-3), 4)
        grid = [Fraction(v) for v in (-1, 0, 1, 2, 3)] + [
            Fraction(1, 2), Fraction(1, 3), Fraction(2, 3),
        ]
        mods = [DensityPair(x, x) for x in grid]
    elif which == "LO99_l3":
        k = Fraction(13, 11)
        spec = SeriesSpec(-k, 3)
        grid = [Fraction(2, 11), Fraction(9, 11), Fraction(0), Fraction(1),
                Fraction(1, 2), Fraction(2)]
        mods = [DensityPair(x, x) for x in grid]
    elif which == "Ga00_D2":
        delta = Fraction(4)
        spec = SeriesSpec(delta - 2, 3)
        grid = [Fraction(0), 1 - delta, Fraction(1, 2), Fraction(1), Fraction(2),
                Fraction(-1)]
        mods = [DensityPair(x, x + delta) for x in grid]
    elif which == "Ga00_D3":
        delta = Fraction(5)
        spec = SeriesSpec(delta - 3, 4)
        grid = [Fraction(0), 1 - delta, Fraction(-2), Fraction(1),
                Fraction(1, 2), Fraction(-1)]
        mods = [DensityPair(x, x + delta) for x in grid]
    else:
        raise ValueError(f"unknown table {which!r}")

    classes = _partition(mods, lambda a, b: decide(spec, a, b).is_equivalent)
    return {
        "which": which,
        "n": str(spec.n),
        "l": spec.l,
        "modules": [[str(m.lam), str(m.mu)] for m in mods],
        "classes": [[[str(m.lam), str(m.mu)] for m in cls] for cls in classes],
    }
