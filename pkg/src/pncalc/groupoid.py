"""The trivial Lie groupoid ``M x G x M`` over a polynomial group.

Coordinates on the arrow space are ordered ``(x; a; y)``: source point,
group element, target point.  An arrow ``(x, a, y)`` composes with
``(y, b, z)`` to ``(x, mu(a, b), z)``.

Its Lie algebroid is ``TM + (M x g)`` with anchor the projection to TM and
bracket

    [X1 + V1, X2 + V2] = [X1, X2] + (X1(V2) - X2(V1) + [V1, V2]_g),

and a section ``X + V`` extends to the arrow space as ``X(x) + J(a) V(x) + 0``.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from itertools import combinations, product
from typing import Sequence

from pncalc.calculus import (
    Bivector,
    EndoField,
    VectorField,
    lie_bracket,
    nijenhuis_torsion,
    pn_verify,
    schouten_bivector,
)
from pncalc.errors import DimensionMismatch, GroupAxiomError, ModelMismatch
from pncalc.expr import Chart, Poly, PolyMap
from pncalc.liealg import AlgBivector, AlgEndo
from pncalc.liegroup import (
    PolyGroup,
    _first_term,
    extend_bivector,
    extend_endo,
    group_violation,
    right_invariant_pn_verify,
)
from pncalc.report import Check, StructureReport

MIXED_TERM_NOTE = (
    "warning: only block-diagonal algebroid bivectors are extended; "
    "sections of the mixed TM ^ g part are not supported"
)
VARIANTS = ("right_invariant", "symmetric")


def _target_name(name: str, taken: set[str]) -> str:
    cand = "y" + name[1:] if name.startswith("x") else name + "_t"
    if cand in taken:
        cand = name + "_t"
    while cand in taken:
        cand += "_"
    return cand


def _copy_names(names: Sequence[str], tag: str) -> list[str]:
    return [f"{n}_{tag}" for n in names]


@dataclass(frozen=True, eq=False)
class TrivialGroupoidModel:
    base_chart: Chart
    group: PolyGroup  # on the a-coordinates
    total_chart: Chart
    pair_chart: Chart  # composable pairs (x; a; y; b; z)
    alpha: PolyMap
    beta: PolyMap
    unit: PolyMap
    inverse: PolyMap
    mult: PolyMap

    @property
    def m(self) -> int:
        return self.base_chart.dimension

    @property
    def d(self) -> int:
        return self.group.dimension

    @property
    def blocks(self) -> tuple[range, range, range]:
        m, d = self.m, self.d
        return range(0, m), range(m, m + d), range(m + d, 2 * m + d)

    def embed_base(self, p: Poly, block: str = "x") -> Poly:
        """Read a base-chart polynomial on the source (``x``) or target (``y``) block."""
        xs = self.total_chart.vars()
        X, _, Y = self.blocks
        images = [xs[i] for i in (X if block == "x" else Y)]
        return p.substitute(images, self.total_chart)

    def embed_group(self, p: Poly) -> Poly:
        xs = self.total_chart.vars()
        return p.substitute([xs[i] for i in self.blocks[1]], self.total_chart)


def build_trivial_groupoid(base: Chart, G: PolyGroup, verify: bool = True) -> TrivialGroupoidModel:
    """Structural maps of ``base x G x base``.

    With ``verify`` the group law is checked first and
    :class:`GroupAxiomError` propagates.
    """
    if verify:
        hit = group_violation(G)
        if hit is not None:
            raise GroupAxiomError(*hit)
    m, d = base.dimension, G.dimension
    taken = set(base.names)
    a_names = []
    for i in range(1, d + 1):
        n = f"a{i}"
        while n in taken:
            n += "_g"
        a_names.append(n)
        taken.add(n)
    y_names = []
    for n in base.names:
        t = _target_name(n, taken)
        y_names.append(t)
        taken.add(t)
    total = Chart(list(base.names) + a_names + y_names)
    Gc = G.on_chart(Chart(a_names))

    b_names = _copy_names(a_names, "2")
    z_names = _copy_names(base.names, "3")
    pair = Chart(list(total.names) + b_names + z_names)

    tv = total.vars()
    xs, as_, ys = tv[:m], tv[m:m + d], tv[m + d:]
    pv = pair.vars()
    px, pa = pv[:m], pv[m:m + d]
    pb, pz = pv[2 * m + d:2 * m + 2 * d], pv[2 * m + 2 * d:]

    alpha = PolyMap(total, base, tuple(xs))
    beta = PolyMap(total, base, tuple(ys))
    bv = base.vars()
    unit = PolyMap(base, total, tuple(bv) + tuple(base.zero() for _ in range(d)) + tuple(bv))
    inv_a = tuple(v.substitute(list(as_), total) for v in Gc.inv)
    inverse = PolyMap(total, total, tuple(ys) + inv_a + tuple(xs))
    mu_ab = tuple(mk.substitute(list(pa) + list(pb), pair) for mk in G.mu)
    mult = PolyMap(pair, total, tuple(px) + mu_ab + tuple(pz))
    return TrivialGroupoidModel(base, Gc, total, pair, alpha, beta, unit, inverse, mult)


# --- axioms ---------------------------------------------------------------------------


def _compose(model: TrivialGroupoidModel, g: Sequence[Poly], h: Sequence[Poly]) -> tuple[Poly, ...]:
    """``m(g, h)`` for arrows given as coordinate tuples (composability assumed)."""
    m, d = model.m, model.d
    images = list(g) + list(h[m:m + d]) + list(h[m + d:])
    return model.mult(*images)


def _diff(identity: str, lhs: Sequence[Poly], rhs: Sequence[Poly]) -> tuple[str, str] | None:
    for k, (a, b) in enumerate(zip(lhs, rhs)):
        if a != b:
            return f"{identity} (component {k + 1})", _first_term(a - b)
    return None


def groupoid_violation(model: TrivialGroupoidModel) -> tuple[str, str] | None:
    """First failing structural identity as ``(identity, witness term)``."""
    m, d = model.m, model.d
    base, total, pair = model.base_chart, model.total_chart, model.pair_chart
    g = total.vars()
    pv = pair.vars()
    g1 = pv[:2 * m + d]
    g2 = pv[m + d:]
    prod = model.mult.components

    checks = [
        ("source of m(g, h) = source of g", model.alpha(*prod), model.alpha(*g1)),
        ("target of m(g, h) = target of h", model.beta(*prod), model.beta(*g2)),
        ("source of 1(x) = x", model.alpha(*model.unit.components), base.vars()),
        ("target of 1(x) = x", model.beta(*model.unit.components), base.vars()),
        ("source of inv(g) = target of g", model.alpha(*model.inverse.components), model.beta(*g)),
        ("target of inv(g) = source of g", model.beta(*model.inverse.components), model.alpha(*g)),
    ]
    for label, lhs, rhs in checks:
        hit = _diff(label, lhs, rhs)
        if hit:
            return hit

    triple = Chart(list(pair.names) + _copy_names(model.group.chart.names, "4")
                   + _copy_names(base.names, "5"))
    tv = triple.vars()
    a1 = tv[:2 * m + d]
    a2 = tv[m + d:3 * m + 2 * d]
    a3 = tv[2 * m + 2 * d:]
    hit = _diff("associativity m(m(g,h),k) = m(g,m(h,k))",
                _compose(model, _compose(model, a1, a2), a3),
                _compose(model, a1, _compose(model, a2, a3)))
    if hit:
        return hit

    unit_src = model.unit(*model.alpha(*g))
    unit_tgt = model.unit(*model.beta(*g))
    for label, lhs in (("m(1(source g), g) = g", _compose(model, unit_src, g)),
                       ("m(g, 1(target g)) = g", _compose(model, g, unit_tgt))):
        hit = _diff(label, lhs, g)
        if hit:
            return hit

    ig = model.inverse.components
    for label, lhs, rhs in (
        ("m(g, inv g) = 1(source g)", _compose(model, g, ig), unit_src),
        ("m(inv g, g) = 1(target g)", _compose(model, ig, g), unit_tgt),
        ("inv(inv g) = g", model.inverse(*ig), g),
    ):
        hit = _diff(label, lhs, rhs)
        if hit:
            return hit
    return None


def groupoid_axioms_verify(model: TrivialGroupoidModel) -> bool:
    return groupoid_violation(model) is None


# --- algebroid ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AlgebroidSection:
    """``X + V``: a vector field on M and a polynomial map ``M -> g``."""

    X: VectorField
    V: tuple[Poly, ...]

    def __init__(self, X: VectorField, V: Sequence[Poly]):
        V = tuple(V)
        for v in V:
            if v.chart != X.chart:
                raise ModelMismatch("V must live on the base chart of X")
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "V", V)

    @property
    def chart(self) -> Chart:
        return self.X.chart

    def __mul__(self, f: Poly) -> "AlgebroidSection":
        return AlgebroidSection(self.X * f, [v * f for v in self.V])

    def __add__(self, other: "AlgebroidSection") -> "AlgebroidSection":
        return AlgebroidSection(self.X + other.X, [a + b for a, b in zip(self.V, other.V)])

    def __eq__(self, other) -> bool:
        return isinstance(other, AlgebroidSection) and self.X == other.X and self.V == other.V

    __hash__ = None


def _check_section(model: TrivialGroupoidModel, s: AlgebroidSection) -> None:
    if s.chart != model.base_chart or len(s.V) != model.d:
        raise ModelMismatch("section does not belong to this groupoid's algebroid")


def algebroid_bracket(model: TrivialGroupoidModel, s1: AlgebroidSection,
                      s2: AlgebroidSection) -> AlgebroidSection:
    _check_section(model, s1)
    _check_section(model, s2)
    c = model.group.algebra.structure_constants
    d = model.d
    V = []
    for k in range(d):
        v = s1.X.apply(s2.V[k]) - s2.X.apply(s1.V[k])
        for i, j in product(range(d), repeat=2):
            if c[k, i, j] and s1.V[i] and s2.V[j]:
                v = v + (s1.V[i] * s2.V[j]).scale(c[k, i, j])
        V.append(v)
    return AlgebroidSection(lie_bracket(s1.X, s2.X), V)


def section_extend(model: TrivialGroupoidModel, s: AlgebroidSection) -> VectorField:
    """``X(x) + J(a) V(x) + 0`` on the arrow chart."""
    _check_section(model, s)
    total = model.total_chart
    J = model.group.jacobian.matrix
    Vx = [model.embed_base(v) for v in s.V]
    comps = [model.embed_base(v) for v in s.X.components]
    for k in range(model.d):
        acc = total.zero()
        for i in range(model.d):
            if J[k][i] and Vx[i]:
                acc = acc + model.embed_group(J[k][i]) * Vx[i]
        comps.append(acc)
    comps += [total.zero()] * model.m
    return VectorField(total, comps)


# --- direct-sum Poisson-Nijenhuis data ----------------------------------------------------


@dataclass(frozen=True)
class DirectSumPN:
    Pi_M: Bivector
    N_M: EndoField
    Lambda_G: AlgBivector
    n_G: AlgEndo

    def __post_init__(self):
        if self.Pi_M.chart != self.N_M.chart:
            raise ModelMismatch("Pi_M and N_M must share the base chart")
        if self.Lambda_G.algebra.dimension != self.n_G.algebra.dimension:
            raise DimensionMismatch("Lambda_G and n_G have different dimensions")


def _check_data(model: TrivialGroupoidModel, data: DirectSumPN) -> None:
    if data.Pi_M.chart != model.base_chart:
        raise ModelMismatch("base tensors are not on the groupoid's base chart")
    if data.Lambda_G.algebra.dimension != model.d:
        raise ModelMismatch("group tensors do not match the fiber dimension")


def direct_sum_pn(model: TrivialGroupoidModel, data: DirectSumPN,
                  variant: str = "right_invariant") -> tuple[Bivector, EndoField]:
    """``Pi_M + Lambda_G-> + 0`` and ``N_M + n_G-> + 0`` (or ``+ Pi_M``, ``+ N_M``
    on the target block for ``variant="symmetric"``)."""
    if variant not in VARIANTS:
        raise ValueError(f"variant must be one of {VARIANTS}, got {variant!r}")
    _check_data(model, data)
    G = model.group
    PG = extend_bivector(G, data.Lambda_G)
    NG = extend_endo(G, data.n_G)
    total = model.total_chart
    X, A, Y = model.blocks
    n = total.dimension
    entries = {}
    Nmat = [[total.zero()] * n for _ in range(n)]
    for i, j in product(range(model.m), repeat=2):
        if i < j:
            entries[(X[i], X[j])] = model.embed_base(data.Pi_M[i, j])
        Nmat[X[i]][X[j]] = model.embed_base(data.N_M[i, j])
        if variant == "symmetric":
            if i < j:
                entries[(Y[i], Y[j])] = model.embed_base(data.Pi_M[i, j], "y")
            Nmat[Y[i]][Y[j]] = model.embed_base(data.N_M[i, j], "y")
    for i, j in product(range(model.d), repeat=2):
        if i < j:
            entries[(A[i], A[j])] = model.embed_group(PG[i, j])
        Nmat[A[i]][A[j]] = model.embed_group(NG[i, j])
    return Bivector(total, entries), EndoField(total, Nmat)


# --- verification -------------------------------------------------------------------------


def _block_of(model: TrivialGroupoidModel, i: int) -> str:
    X, A, _ = model.blocks
    return "base" if i in X else "group" if i in A else "target"


def _schouten_block_checks(model, PiY, pieces) -> list[Check]:
    """Localize [Pi, Pi] to blocks and compare blocks with the component brackets."""
    T = schouten_bivector(PiY, PiY)
    found = {"base": None, "group": None, "target": None, "cross": None}
    for idx, v in T._items():
        if not v:
            continue
        kinds = {_block_of(model, i) for i in idx}
        key = kinds.pop() if len(kinds) == 1 else "cross"
        if found[key] is None:
            found[key] = "[Pi,Pi]^(" + ",".join(str(i + 1) for i in idx) + f") = {v}"
    checks = [Check(f"blocks.schouten_{k}", w is None, w) for k, w in found.items()]

    # decomposition: each diagonal block equals the bracket computed on its own chart
    witness = None
    for block, (rng, tri, embed) in pieces.items():
        if witness:
            break
        for a, b, c in combinations(range(len(rng)), 3):
            want = embed(tri[a, b, c]) if tri is not None else model.total_chart.zero()
            got = T[rng[a], rng[b], rng[c]]
            if got != want:
                witness = f"{block} block ({a + 1},{b + 1},{c + 1}): {got} != {want}"
                break
    if witness is None and found["cross"] is not None:
        witness = f"cross block nonzero: {found['cross']}"
    checks.append(Check("decomposition.schouten", witness is None, witness))
    return checks


def _torsion_decomposition(model, NY, pieces) -> Check:
    tau = nijenhuis_torsion(NY)
    for (k, i, j), v in tau._items():
        kinds = {_block_of(model, t) for t in (k, i, j)}
        if len(kinds) > 1:
            if v:
                return Check("decomposition.torsion", False,
                             f"cross block tauN^({k + 1},{i + 1},{j + 1}) = {v}")
            continue
        block = kinds.pop()
        rng, tor, embed = pieces[block]
        loc = rng.index
        want = embed(tor[loc(k), loc(i), loc(j)]) if tor is not None else model.total_chart.zero()
        if v != want:
            return Check("decomposition.torsion", False,
                         f"{block} block ({k + 1},{i + 1},{j + 1}): {v} != {want}")
    return Check("decomposition.torsion", True)


def _unit_restriction(model, name: str, matrix, expected) -> Check:
    """Substitute units ``(x, 0, x)`` and compare with the expected base-chart matrix."""
    units = model.unit.components
    for i, j in product(range(len(matrix)), repeat=2):
        got = matrix[i][j].substitute(units, model.base_chart)
        if got != expected[i][j]:
            return Check(name, False, f"({i + 1},{j + 1}): {got} != {expected[i][j]}")
    return Check(name, True)


def _expected_at_units(model, data: DirectSumPN, variant: str):
    base = model.base_chart
    n = model.total_chart.dimension
    X, A, Y = model.blocks
    P = [[base.zero()] * n for _ in range(n)]
    N = [[base.zero()] * n for _ in range(n)]
    for i, j in product(range(model.m), repeat=2):
        P[X[i]][X[j]] = data.Pi_M[i, j]
        N[X[i]][X[j]] = data.N_M[i, j]
        if variant == "symmetric":
            P[Y[i]][Y[j]] = data.Pi_M[i, j]
            N[Y[i]][Y[j]] = data.N_M[i, j]
    for i, j in product(range(model.d), repeat=2):
        P[A[i]][A[j]] = base.const(data.Lambda_G.matrix[i, j])
        N[A[i]][A[j]] = base.const(data.n_G.matrix[i, j])
    return P, N


def _assembly_checks(model, data, variant, plan, prefix) -> tuple[StructureReport, list[Check]]:
    PiY, NY = direct_sum_pn(model, data, variant)
    G = model.group
    total = pn_verify(PiY, NY, plan)
    X, A, Y = model.blocks
    base_sch = schouten_bivector(data.Pi_M, data.Pi_M)
    grp_sch = schouten_bivector(extend_bivector(G, data.Lambda_G), extend_bivector(G, data.Lambda_G))
    sym = variant == "symmetric"
    pieces = {
        "base": (X, base_sch, model.embed_base),
        "group": (A, grp_sch, model.embed_group),
        "target": (Y, base_sch if sym else None, lambda p: model.embed_base(p, "y")),
    }
    checks = _schouten_block_checks(model, PiY, pieces)
    base_tau = nijenhuis_torsion(data.N_M)
    grp_tau = nijenhuis_torsion(extend_endo(G, data.n_G))
    tpieces = {
        "base": (X, base_tau, model.embed_base),
        "group": (A, grp_tau, model.embed_group),
        "target": (Y, base_tau if sym else None, lambda p: model.embed_base(p, "y")),
    }
    checks.append(_torsion_decomposition(model, NY, tpieces))
    P_exp, N_exp = _expected_at_units(model, data, variant)
    checks.append(_unit_restriction(model, "restriction.bivector", PiY.matrix(), P_exp))
    checks.append(_unit_restriction(model, "restriction.endo", NY.matrix, N_exp))
    if prefix:
        checks = [replace(c, name=f"{prefix}.{c.name}") for c in checks]
    return total, checks


def trivial_pn_verify(model: TrivialGroupoidModel, data: DirectSumPN, plan=None,
                      symmetric: bool = False) -> StructureReport:
    """Component, assembled and structural verdicts for the direct-sum PN pair.

    The right-invariant assembly (``+ 0`` on the target block) carries the
    overall verdict; with ``symmetric=True`` the ``+ Pi_M`` assembly is also
    checked and reported as informational.
    """
    _check_data(model, data)
    report = StructureReport("Trivial groupoid Poisson-Nijenhuis verdicts")
    report = report.nested("base", pn_verify(data.Pi_M, data.N_M, plan))
    report = report.nested("group", right_invariant_pn_verify(model.group, data.Lambda_G, data.n_G))
    total, checks = _assembly_checks(model, data, "right_invariant", plan, "")
    report = report.nested("total", total).extend(checks)
    if symmetric:
        sym_total, sym_checks = _assembly_checks(model, data, "symmetric", None, "symmetric")
        report = report.nested("symmetric.total", sym_total, mandatory=False)
        report = report.extend(replace(c, mandatory=False) for c in sym_checks)
    return report.extend((), (MIXED_TERM_NOTE,))
