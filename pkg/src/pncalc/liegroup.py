"""Polynomial Lie groups and right-invariant tensor fields.

A :class:`PolyGroup` is given by a polynomial multiplication ``mu`` on the
doubled chart ``(x1..xd, y1..yd)`` and a polynomial inverse on the group
chart, with identity at the origin.  Right translation has Jacobian

    J^k_i(g) = d mu^k(x, g) / d x_i  at x = 0,

and a constant algebra element ``v`` extends to ``v->(g) = J(g) v``.

Structure constants are read off ``mu`` so that right-invariant extension
is a bracket morphism, ``[v->, w->] = ([v, w])->``::

    c[k, i, j] = d2 mu^k / dx_j dy_i - d2 mu^k / dx_i dy_j   at (0, 0)

For ``mu^3 = x3 + y3 + x1*y2`` this gives ``[e1, e2] = -e3``.
"""

from __future__ import annotations

from fractions import Fraction
from functools import cached_property
from itertools import combinations, permutations, product
from typing import Sequence

import numpy as np

from pncalc.calculus import (
    Bivector,
    ConcomitantTensor,
    EndoField,
    OneForm,
    TorsionTensor,
    Trivector,
    VectorField,
    lie_bracket,
    magri_morosi,
    nijenhuis_torsion,
    pn_verify,
    schouten_bivector,
)
from pncalc.errors import (
    AlgebraMismatch,
    DimensionMismatch,
    GroupAxiomError,
    NonConstantDeterminant,
    NotCompatible,
)
from pncalc.expr import Chart, Poly
from pncalc.liealg import (
    AlgBivector,
    AlgEndo,
    LieAlgebra,
    RationalTensor,
    alg_concomitant,
    alg_schouten,
    alg_torsion,
    lambda_n_verify,
    rational_array,
)
from pncalc.report import Check, StructureReport

S_CONNECTED_NOTE = (
    "assumed: the group is s-connected and s-simply connected "
    "(declared, not checkable on a chart)"
)


def _pair_chart(d: int) -> Chart:
    return Chart([f"x{i}" for i in range(1, d + 1)] + [f"y{i}" for i in range(1, d + 1)])


class PolyGroup:
    """Lie group on ``chart`` with polynomial multiplication and inverse.

    ``mu`` lives on the doubled chart ``pair_chart`` (first factor x, second
    factor y); ``inv`` lives on ``chart``.  With ``verify=True`` the group
    identities are checked exactly and :class:`GroupAxiomError` is raised on
    the first failure.
    """

    def __init__(self, mu: Sequence, inv: Sequence, chart: Chart | None = None,
                 verify: bool = True):
        d = len(mu)
        if d == 0:
            raise DimensionMismatch("a group needs at least one coordinate")
        self.chart = chart if chart is not None else Chart.numbered("x", d)
        if self.chart.dimension != d:
            raise DimensionMismatch(f"chart has dimension {self.chart.dimension}, mu has {d}")
        self.pair_chart = _pair_chart(d)
        self.mu = tuple(self.pair_chart.poly(m) if isinstance(m, str) else m for m in mu)
        self.inv = tuple(self.chart.poly(v) if isinstance(v, str) else v for v in inv)
        if len(self.inv) != d:
            raise DimensionMismatch(f"inverse has {len(self.inv)} components, expected {d}")
        for m in self.mu:
            if m.chart != self.pair_chart:
                raise DimensionMismatch(f"mu components must live on {self.pair_chart}")
        for v in self.inv:
            if v.chart != self.chart:
                raise DimensionMismatch(f"inverse components must live on {self.chart}")
        if verify:
            hit = group_violation(self)
            if hit is not None:
                raise GroupAxiomError(*hit)

    @property
    def dimension(self) -> int:
        return self.chart.dimension

    @classmethod
    def abelian(cls, d: int, chart: Chart | None = None) -> "PolyGroup":
        mu = [f"x{i} + y{i}" for i in range(1, d + 1)]
        chart = chart or Chart.numbered("x", d)
        inv = [-v for v in chart.vars()]
        return cls(mu, inv, chart)

    @classmethod
    def heisenberg(cls, chart: Chart | None = None) -> "PolyGroup":
        chart = chart or Chart.numbered("x", 3)
        g1, g2, g3 = chart.vars()
        return cls(["x1 + y1", "x2 + y2", "x3 + y3 + x1*y2"], [-g1, -g2, -g3 + g1 * g2], chart)

    def on_chart(self, chart: Chart) -> "PolyGroup":
        """Same group law, coordinates renamed to ``chart``."""
        return PolyGroup(self.mu, [v.rename(chart) for v in self.inv], chart, verify=False)

    # cached derived data; the group is treated as immutable

    @cached_property
    def algebra(self) -> LieAlgebra:
        return structure_constants(self)

    @cached_property
    def jacobian(self) -> "RightJacobian":
        return right_jacobian(self)

    def __repr__(self) -> str:
        return f"PolyGroup(mu={[str(m) for m in self.mu]}, inv={[str(v) for v in self.inv]})"


# --- group axioms ---------------------------------------------------------------


def _first_term(p: Poly) -> str:
    e, c = p.sorted_terms()[0]
    return str(Poly(p.chart, {e: c}))


def group_violation(G: PolyGroup) -> tuple[str, str] | None:
    """First violated group identity as ``(identity, witness term)``, else None."""
    d = G.dimension
    pc = G.pair_chart
    xs, ys = pc.vars()[:d], pc.vars()[d:]
    zero = [pc.zero()] * d

    def mu_at(a, b):
        return [m.substitute(list(a) + list(b), a[0].chart) for m in G.mu]

    for k, m in enumerate(G.mu):
        diff = m.substitute(list(xs) + zero, pc) - xs[k]
        if diff:
            return f"mu(x, 0) = x (component {k + 1})", _first_term(diff)
    for k, m in enumerate(G.mu):
        diff = m.substitute(zero + list(ys), pc) - ys[k]
        if diff:
            return f"mu(0, y) = y (component {k + 1})", _first_term(diff)

    tc = Chart([f"x{i}" for i in range(1, d + 1)] + [f"y{i}" for i in range(1, d + 1)]
               + [f"z{i}" for i in range(1, d + 1)])
    tv = tc.vars()
    X, Y, Z = tv[:d], tv[d:2 * d], tv[2 * d:]
    left = mu_at(mu_at(X, Y), Z)
    right = mu_at(X, mu_at(Y, Z))
    for k in range(d):
        diff = left[k] - right[k]
        if diff:
            return f"associativity (component {k + 1})", _first_term(diff)

    gv = G.chart.vars()
    inv = list(G.inv)
    for label, a, b in (("mu(g, inv(g)) = 0", gv, inv), ("mu(inv(g), g) = 0", inv, gv)):
        for k, v in enumerate(mu_at(a, b)):
            if v:
                return f"{label} (component {k + 1})", _first_term(v)

    J = _translation_jacobian(G, right=True)
    det = determinant(J)
    if not det.is_constant() or not det:
        return "constant nonzero det J", str(det)
    return None


def group_verify(G: PolyGroup) -> bool:
    """True iff every group identity holds exactly (identity at the origin)."""
    return group_violation(G) is None


# --- Lie functor --------------------------------------------------------------------


def structure_constants(G: PolyGroup) -> LieAlgebra:
    d = G.dimension
    origin = [0] * (2 * d)
    c = np.empty((d, d, d), dtype=object)
    for k, i, j in product(range(d), repeat=3):
        m = G.mu[k]
        a = m.differentiate(j).differentiate(d + i).evaluate(origin)
        b = m.differentiate(i).differentiate(d + j).evaluate(origin)
        c[k, i, j] = Fraction(a - b)
    return LieAlgebra(c)


def _translation_jacobian(G: PolyGroup, right: bool) -> tuple[tuple[Poly, ...], ...]:
    # right: d mu(x, g)/dx at x = 0; left: d mu(g, y)/dy at y = 0
    d = G.dimension
    gv = list(G.chart.vars())
    zero = [G.chart.zero()] * d
    images = zero + gv if right else gv + zero
    offset = 0 if right else d
    return tuple(
        tuple(G.mu[k].differentiate(offset + i).substitute(images, G.chart) for i in range(d))
        for k in range(d)
    )


def determinant(m: Sequence[Sequence[Poly]]) -> Poly:
    """Cofactor expansion along the first row."""
    n = len(m)
    if n == 1:
        return m[0][0]
    chart = m[0][0].chart
    total = chart.zero()
    for j in range(n):
        if not m[0][j]:
            continue
        minor = [row[:j] + row[j + 1:] for row in m[1:]]
        term = m[0][j] * determinant(minor)
        total = total + term if j % 2 == 0 else total - term
    return total


def adjugate(m: Sequence[Sequence[Poly]]) -> list[list[Poly]]:
    n = len(m)
    chart = m[0][0].chart
    if n == 1:
        return [[chart.const(1)]]
    out = [[chart.zero()] * n for _ in range(n)]
    for i, j in product(range(n), repeat=2):
        minor = [row[:j] + row[j + 1:] for r, row in enumerate(m) if r != i]
        cof = determinant(minor)
        out[j][i] = cof if (i + j) % 2 == 0 else -cof
    return out


class RightJacobian:
    """``matrix[k][i] = J^k_i(g)`` with its polynomial inverse."""

    def __init__(self, group: PolyGroup, matrix):
        self.group = group
        self.matrix = tuple(tuple(r) for r in matrix)
        det = determinant(self.matrix)
        if not det.is_constant() or not det:
            raise NonConstantDeterminant(f"det J(g) = {det} is not a nonzero constant")
        self.det = det.constant_value()
        self.inverse = tuple(
            tuple(v.scale(1 / self.det) for v in row) for row in adjugate(self.matrix)
        )

    def __getitem__(self, ki: tuple[int, int]) -> Poly:
        return self.matrix[ki[0]][ki[1]]


def right_jacobian(G: PolyGroup) -> RightJacobian:
    return RightJacobian(G, _translation_jacobian(G, right=True))


def left_jacobian(G: PolyGroup) -> RightJacobian:
    """Same container, built from left translation ``y -> mu(g, y)``."""
    return RightJacobian(G, _translation_jacobian(G, right=False))


# --- right-invariant extension ------------------------------------------------------


def _check_algebra(G: PolyGroup, algebra: LieAlgebra) -> None:
    if algebra != G.algebra:
        raise AlgebraMismatch("tensor is not defined over the group's Lie algebra")


def _combine(chart: Chart, pairs) -> Poly:
    total = chart.zero()
    for p, c in pairs:
        if c and p:
            total = total + p.scale(c)
    return total


def extend_vector(G: PolyGroup, v) -> VectorField:
    v = rational_array(v)
    d = G.dimension
    if v.shape != (d,):
        raise DimensionMismatch(f"expected {d} components, got {v.shape}")
    J = G.jacobian.matrix
    return VectorField(G.chart, [_combine(G.chart, zip(J[k], v)) for k in range(d)])


def extend_oneform(G: PolyGroup, alpha) -> OneForm:
    """``alpha->(g) = alpha . J(g)^-1``, so ``alpha->(v->) = alpha(v)``."""
    a = rational_array(alpha)
    d = G.dimension
    if a.shape != (d,):
        raise DimensionMismatch(f"expected {d} components, got {a.shape}")
    Ji = G.jacobian.inverse
    return OneForm(G.chart, [
        _combine(G.chart, ((Ji[k][j], a[k]) for k in range(d))) for j in range(d)
    ])


def _sandwich(G: PolyGroup, A, B, lam) -> list[list[Poly]]:
    # A . lam . B^T with polynomial A, B and rational lam
    d = G.dimension
    chart = G.chart
    mid = [[_combine(chart, ((A[a][i], lam[i, j]) for i in range(d))) for j in range(d)]
           for a in range(d)]
    out = [[chart.zero()] * d for _ in range(d)]
    for a, b in product(range(d), repeat=2):
        total = chart.zero()
        for j in range(d):
            if mid[a][j] and B[b][j]:
                total = total + mid[a][j] * B[b][j]
        out[a][b] = total
    return out


def extend_bivector(G: PolyGroup, Lam: AlgBivector) -> Bivector:
    """``Lambda->(g) = J(g) Lambda J(g)^T``."""
    _check_algebra(G, Lam.algebra)
    J = G.jacobian.matrix
    return Bivector.from_matrix(G.chart, _sandwich(G, J, J, Lam.matrix))


def left_extend_bivector(G: PolyGroup, Lam: AlgBivector) -> Bivector:
    _check_algebra(G, Lam.algebra)
    L = left_jacobian(G).matrix
    return Bivector.from_matrix(G.chart, _sandwich(G, L, L, Lam.matrix))


def coboundary_bivector(G: PolyGroup, Lam: AlgBivector) -> Bivector:
    """``Lambda-> - Lambda<-``; vanishes at the identity."""
    return extend_bivector(G, Lam) - left_extend_bivector(G, Lam)


def extend_endo(G: PolyGroup, n: AlgEndo) -> EndoField:
    """``n->(g) = J(g) n J(g)^-1``."""
    _check_algebra(G, n.algebra)
    J, Ji = G.jacobian.matrix, G.jacobian.inverse
    # J n Ji = J . n . (Ji^T)^T
    JiT = [[Ji[i][j] for i in range(G.dimension)] for j in range(G.dimension)]
    return EndoField(G.chart, _sandwich(G, J, JiT, n.matrix))


def extend_trivector(G: PolyGroup, T: RationalTensor) -> Trivector:
    """Push an antisymmetric algebra trivector through three Jacobian factors."""
    d = G.dimension
    J = G.jacobian.matrix
    chart = G.chart
    T = T.array if isinstance(T, RationalTensor) else rational_array(T)
    support = [(idx, T[idx]) for idx in permutations(range(d), 3) if T[idx]]
    entries = {}
    for a, b, c in combinations(range(d), 3):
        total = chart.zero()
        for (i, j, k), t in support:
            f = J[a][i] * J[b][j] * J[c][k]
            if f:
                total = total + f.scale(t)
        entries[(a, b, c)] = total
    return Trivector(chart, entries)


def extend_torsion(G: PolyGroup, T: RationalTensor) -> TorsionTensor:
    """Right-invariant (1,2)-tensor with ``tau->(v->, w->) = (T(v, w))->``."""
    d = G.dimension
    J, Ji = G.jacobian.matrix, G.jacobian.inverse
    chart = G.chart
    T = T.array if isinstance(T, RationalTensor) else rational_array(T)
    # tau^c_ab = sum J^c_k T^k_ij Ji^i_a Ji^j_b
    inner = {}
    for k, a, b in product(range(d), repeat=3):
        total = chart.zero()
        for i, j in product(range(d), repeat=2):
            t = T[k, i, j]
            if t and Ji[i][a] and Ji[j][b]:
                total = total + (Ji[i][a] * Ji[j][b]).scale(t)
        inner[(k, a, b)] = total
    entries = []
    for c in range(d):
        for a, b in combinations(range(d), 2):
            total = chart.zero()
            for k in range(d):
                if J[c][k] and inner[(k, a, b)]:
                    total = total + J[c][k] * inner[(k, a, b)]
            entries.append(((c, a, b), total))
    return TorsionTensor(chart, tuple(entries))


def extend_concomitant(G: PolyGroup, C: RationalTensor) -> ConcomitantTensor:
    """Coordinate coframe components of the right-invariant extension.

    ``dx^a = sum_i J^a_i eps^i->`` and ``(eps^k->)_c = Ji^k_c``.
    """
    d = G.dimension
    J, Ji = G.jacobian.matrix, G.jacobian.inverse
    chart = G.chart
    C = C.array if isinstance(C, RationalTensor) else rational_array(C)
    # algebra-frame value along eps^k->, then expand in dx^c
    alg = [[[_combine(chart, ((Ji[k][c], C[i, j, k]) for k in range(d))) for c in range(d)]
             for j in range(d)] for i in range(d)]
    comps = []
    for a in range(d):
        plane = []
        for b in range(d):
            row = []
            for c in range(d):
                total = chart.zero()
                for i, j in product(range(d), repeat=2):
                    f = alg[i][j][c]
                    if f and J[a][i] and J[b][j]:
                        total = total + J[a][i] * J[b][j] * f
                row.append(total)
            plane.append(tuple(row))
        comps.append(tuple(plane))
    return ConcomitantTensor(chart, tuple(comps))


# --- verification -------------------------------------------------------------------


def equality_check(name: str, lhs, rhs, label: str = "", mandatory: bool = True) -> Check:
    """PASS iff two tensors of the same kind agree componentwise, exactly."""
    for (idx, a), (_, b) in zip(lhs._items(), rhs._items()):
        if a != b:
            where = "(" + ",".join(str(i + 1) for i in idx) + ")"
            return Check(name, False, f"{label}{where}: {a} != {b}", mandatory)
    return Check(name, True, mandatory=mandatory)


def _restriction_check(name: str, field_matrix, expected) -> Check:
    d = len(field_matrix)
    origin = [0] * d
    for i, j in product(range(d), repeat=2):
        got = Fraction(field_matrix[i][j].evaluate(origin))
        if got != expected[i, j]:
            return Check(name, False, f"({i + 1},{j + 1}): {got} != {expected[i, j]}")
    return Check(name, True)


def _morphism_check(G: PolyGroup) -> Check:
    d = G.dimension
    frame = [extend_vector(G, np.eye(d, dtype=int)[i]) for i in range(d)]
    basis = np.eye(d, dtype=int)
    for i, j in combinations(range(d), 2):
        lhs = lie_bracket(frame[i], frame[j])
        rhs = extend_vector(G, G.algebra.bracket(basis[i], basis[j]))
        c = equality_check("bridge.morphism", lhs, rhs, f"[e{i + 1}->,e{j + 1}->]^")
        if not c.passed:
            return c
    return Check("bridge.morphism", True)


_PAIRED = (("schouten", "poisson"), ("nijenhuis", "nijenhuis"),
           ("compatible", "compatible"), ("concomitant_zero", "concomitant_zero"))


def right_invariant_pn_verify(G: PolyGroup, Lam: AlgBivector, n: AlgEndo,
                              plan=None) -> StructureReport:
    """Algebraic (Lambda, n) verdicts next to chart verdicts on the extensions.

    Besides the two verdict sets, the report carries the bridge identities
    relating them (exact polynomial identities) and the restriction of the
    extensions to the identity element.
    """
    _check_algebra(G, Lam.algebra)
    _check_algebra(G, n.algebra)
    g = G.algebra
    alg = lambda_n_verify(g, Lam, n)
    P = extend_bivector(G, Lam)
    N = extend_endo(G, n)
    chart = pn_verify(P, N, plan)

    report = StructureReport("Right-invariant Poisson-Nijenhuis verdicts")
    report = report.nested("algebra", alg).nested("chart", chart)

    bridges = [
        equality_check("bridge.schouten", schouten_bivector(P, P),
                       extend_trivector(G, alg_schouten(Lam)), "[P,P]^"),
        equality_check("bridge.torsion", nijenhuis_torsion(N),
                       extend_torsion(G, alg_torsion(g, n)), "tauN^"),
        _morphism_check(G),
    ]
    try:
        C_alg = alg_concomitant(g, Lam, n)
    except NotCompatible:
        bridges.append(Check("bridge.concomitant", True, mandatory=False))
    else:
        bridges.append(equality_check("bridge.concomitant", magri_morosi(P, N),
                                      extend_concomitant(G, C_alg), "C^"))
    agree = []
    for a, c in _PAIRED:
        va, vc = alg[a].passed, chart[c].passed
        agree.append((a, va == vc, f"algebra {a}={alg[a].verdict}, chart {c}={chart[c].verdict}"))
    bad = [w for _, ok, w in agree if not ok]
    bridges.append(Check("bridge.verdicts_agree", not bad, bad[0] if bad else None))
    bridges.append(_restriction_check("restriction.bivector", P.matrix(), Lam.matrix))
    bridges.append(_restriction_check("restriction.endo", N.matrix, n.matrix))
    return report.extend(bridges, (S_CONNECTED_NOTE,))
