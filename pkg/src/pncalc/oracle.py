"""Finite-difference cross-checks for the symbolic operators.

Every recipe here recomputes an operator from its defining formula using only
point evaluation of the input components; derivatives come from a five-point
central stencil.  Nothing in this module calls the symbolic operators in
:mod:`pncalc.calculus`, so a bug there cannot confirm itself.

Sample points and stencil offsets are rational and the stencil is evaluated in
exact arithmetic (gmpy2 rationals): the only error left is truncation, which
is O(h^4) and for polynomial inputs far below the default tolerance.
"""

from __future__ import annotations

import random
from functools import lru_cache
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Callable, Sequence

from gmpy2 import mpq

Point = tuple  # of mpq


@dataclass(frozen=True)
class SamplePlan:
    seed: int = 42
    count: int = 20
    low: Fraction = Fraction(-5)
    high: Fraction = Fraction(5)
    fd_step: Fraction = Fraction(1, 10**4)
    tolerance: Fraction = Fraction(1, 10**6)

    def __post_init__(self):
        for name in ("low", "high", "fd_step", "tolerance"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))
        if self.count < 1:
            raise ValueError("count must be at least 1")
        if not 0 < self.fd_step < 1:
            raise ValueError("fd_step must lie in (0, 1)")
        if self.tolerance <= 0:
            raise ValueError("tolerance must be positive")
        if self.low >= self.high:
            raise ValueError("empty coordinate range")


@dataclass(frozen=True)
class CheckOutcome:
    passed: bool
    max_deviation: float
    worst_point: tuple[str, ...] | None
    count: int
    tolerance: float

    @property
    def verdict(self) -> str:
        return "PASS" if self.passed else "FAIL"


_GRID = 10**4
_ZERO = mpq(0)


def sample_points(dimension: int, plan: SamplePlan) -> list[Point]:
    """Seeded rational points in ``[low, high]^dimension``."""
    rng = random.Random(plan.seed)
    span = plan.high - plan.low
    return [
        tuple(mpq(plan.low + span * Fraction(rng.randrange(_GRID + 1), _GRID))
              for _ in range(dimension))
        for _ in range(plan.count)
    ]


def randomized_identity_check(symbolic, recipe: Callable[[Point], Sequence], plan: SamplePlan) -> CheckOutcome:
    """Compare ``symbolic.evaluate(p)`` with ``recipe(p)`` on the plan's points.

    ``symbolic`` is any tensor exposing ``chart`` and ``evaluate``; both sides
    must list components in the same order.
    """
    worst, worst_pt = _ZERO, None
    for pt in sample_points(symbolic.chart.dimension, plan):
        lhs = symbolic.evaluate(pt)
        rhs = recipe(pt)
        if len(lhs) != len(rhs):
            raise ValueError(f"component count mismatch: {len(lhs)} vs {len(rhs)}")
        dev = max((abs(mpq(a) - mpq(b)) for a, b in zip(lhs, rhs)), default=_ZERO)
        if worst_pt is None or dev > worst:
            worst, worst_pt = dev, pt
    return CheckOutcome(
        passed=worst <= mpq(plan.tolerance),
        max_deviation=float(worst),
        worst_point=tuple(str(x) for x in worst_pt),
        count=plan.count,
        tolerance=float(plan.tolerance),
    )


# --- evaluation primitives -----------------------------------------------------


@lru_cache(maxsize=4096)
def _terms(poly) -> tuple:
    return tuple((e, mpq(c.numerator, c.denominator)) for e, c in poly.items())


def _value(poly, q: Point):
    total = _ZERO
    for e, c in _terms(poly):
        t = c
        for x, k in zip(q, e):
            if k:
                t *= x**k
        total += t
    return total


def _memo(fn: Callable[[Point], object]) -> Callable[[Point], object]:
    cache: dict = {}

    def wrapped(q):
        if q not in cache:
            cache[q] = fn(q)
        return cache[q]

    return wrapped


def _partial(fn: Callable[[Point], Sequence], q: Point, i: int, h) -> list:
    """Five-point central difference of a vector-valued function along axis i."""

    def at(s: int):
        shifted = list(q)
        shifted[i] += s * h
        return fn(tuple(shifted))

    h = mpq(h)
    f2, f1, m1, m2 = at(2), at(1), at(-1), at(-2)
    return [(-a + 8 * b - 8 * c + d) / (12 * h) for a, b, c, d in zip(f2, f1, m1, m2)]


def _jacobian(fn, q: Point, n: int, h) -> list[list]:
    """``jac[i][k] = d_i fn^k`` at q."""
    return [_partial(fn, q, i, h) for i in range(n)]


def _vector_fn(components) -> Callable[[Point], tuple]:
    return _memo(lambda q: tuple(_value(c, q) for c in components))


def _bivector_fn(P) -> Callable[[Point], tuple]:
    n = P.chart.dimension
    return _memo(lambda q: tuple(
        tuple(_value(P[i, j], q) if i != j else _ZERO for j in range(n)) for i in range(n)
    ))


def _endo_fn(N) -> Callable[[Point], tuple]:
    return _memo(lambda q: tuple(tuple(_value(v, q) for v in row) for row in N.matrix))


def _matvec(m, v) -> tuple:
    return tuple(sum((a * b for a, b in zip(row, v)), _ZERO) for row in m)


def _matmul(a, b) -> tuple:
    cols = list(zip(*b))
    return tuple(tuple(sum((x * y for x, y in zip(row, col)), _ZERO) for col in cols) for row in a)


def _transpose(m) -> tuple:
    return tuple(zip(*m))


def _sharp_values(Pm, a) -> tuple:
    # (P# a)^i = sum_j P^{ji} a_j
    return _matvec(_transpose(Pm), a)


def _num_bracket(A, B, p: Point, h) -> list:
    n = len(p)
    a, b = A(p), B(p)
    dA, dB = _jacobian(A, p, n, h), _jacobian(B, p, n, h)
    return [
        sum((a[i] * dB[i][k] - b[i] * dA[i][k] for i in range(n)), _ZERO)
        for k in range(n)
    ]


def _num_lie_derivative(X, alpha, p: Point, h) -> list:
    n = len(p)
    x, a = X(p), alpha(p)
    dX, da = _jacobian(X, p, n, h), _jacobian(alpha, p, n, h)
    return [
        sum((x[j] * da[j][i] + a[j] * dX[i][j] for j in range(n)), _ZERO)
        for i in range(n)
    ]


def _flat(fn) -> Callable[[Point], tuple]:
    return _memo(lambda q: tuple(v for row in fn(q) for v in row))


def _num_oneform_brackets(Pf, F, G, p: Point, h) -> list[list[list]]:
    """``[F_i, G_j]_P`` at p for families of 1-forms given as matrix rows.

    Returns ``out[i][j][m]``.  Batching whole families lets every stencil
    point be evaluated once instead of once per pair.
    """
    n = len(p)
    XF = _memo(lambda q: _matmul(F(q), Pf(q)))  # row i is P# F_i
    XG = _memo(lambda q: _matmul(G(q), Pf(q)))
    pairing = _memo(lambda q: _matmul(XF(q), _transpose(G(q))))  # P(F_i, G_j)
    f, g, xf, xg = F(p), G(p), XF(p), XG(p)
    dF, dG = _jacobian(_flat(F), p, n, h), _jacobian(_flat(G), p, n, h)
    dXF, dXG = _jacobian(_flat(XF), p, n, h), _jacobian(_flat(XG), p, n, h)
    dpair = _jacobian(_flat(pairing), p, n, h)
    rows_f, rows_g = len(f), len(g)
    out = []
    for i in range(rows_f):
        plane = []
        for j in range(rows_g):
            comp = []
            for m in range(n):
                lie_fg = sum((xf[i][l] * dG[l][j * n + m] + g[j][l] * dXF[m][i * n + l]
                              for l in range(n)), _ZERO)
                lie_gf = sum((xg[j][l] * dF[l][i * n + m] + f[i][l] * dXG[m][j * n + l]
                              for l in range(n)), _ZERO)
                comp.append(lie_fg - lie_gf - dpair[m][i * rows_g + j])
            plane.append(comp)
        out.append(plane)
    return out


def _const(values) -> Callable[[Point], tuple]:
    values = tuple(mpq(v) for v in values)
    return lambda q: values


def _unit(n: int, i: int) -> tuple:
    return tuple(mpq(1 if k == i else 0) for k in range(n))


# --- recipes ------------------------------------------------------------------------


def fd_lie_bracket(X, Y, point: Point, plan: SamplePlan) -> tuple:
    return tuple(_num_bracket(_vector_fn(X.components), _vector_fn(Y.components), point, plan.fd_step))


def fd_torsion(N, point: Point, plan: SamplePlan) -> tuple:
    """Torsion components in (k, i<j) order from the four-term definition."""
    n, h = len(point), plan.fd_step
    Nf = _endo_fn(N)
    Np = Nf(point)
    values = {}
    for i, j in combinations(range(n), 2):
        ei, ej = _const(_unit(n, i)), _const(_unit(n, j))
        Ni = _memo(lambda q, i=i: tuple(Nf(q)[a][i] for a in range(n)))
        Nj = _memo(lambda q, j=j: tuple(Nf(q)[a][j] for a in range(n)))
        t1 = _num_bracket(Ni, Nj, point, h)
        t2 = _matvec(Np, _num_bracket(Ni, ej, point, h))
        t3 = _matvec(Np, _num_bracket(ei, Nj, point, h))
        t4 = _matvec(Np, _matvec(Np, _num_bracket(ei, ej, point, h)))
        values[(i, j)] = [a - b - c + d for a, b, c, d in zip(t1, t2, t3, t4)]
    return tuple(values[(i, j)][k] for k in range(n) for i, j in combinations(range(n), 2))


def fd_deformed_bracket(N, X, Y, point: Point, plan: SamplePlan) -> tuple:
    h = plan.fd_step
    Nf, Xf, Yf = _endo_fn(N), _vector_fn(X.components), _vector_fn(Y.components)
    NX = _memo(lambda q: _matvec(Nf(q), Xf(q)))
    NY = _memo(lambda q: _matvec(Nf(q), Yf(q)))
    a = _num_bracket(NX, Yf, point, h)
    b = _num_bracket(Xf, NY, point, h)
    c = _matvec(Nf(point), _num_bracket(Xf, Yf, point, h))
    return tuple(x + y - z for x, y, z in zip(a, b, c))


def fd_schouten(P, Q, point: Point, plan: SamplePlan) -> tuple:
    n, h = len(point), plan.fd_step
    Pf, Qf = _bivector_fn(P), _bivector_fn(Q)
    Pp, Qp = Pf(point), Qf(point)
    flatP = _memo(lambda q: tuple(v for row in Pf(q) for v in row))
    flatQ = _memo(lambda q: tuple(v for row in Qf(q) for v in row))
    dP, dQ = _jacobian(flatP, point, n, h), _jacobian(flatQ, point, n, h)
    out = []
    for i, j, k in combinations(range(n), 3):
        total = _ZERO
        for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
            for l in range(n):
                total += Pp[a][l] * dQ[l][b * n + c] + Qp[a][l] * dP[l][b * n + c]
        out.append(total)
    return tuple(out)


def num_sharp(P, alpha, point: Point, plan: SamplePlan | None = None) -> tuple:
    return _sharp_values(_bivector_fn(P)(point), _vector_fn(alpha.components)(point))


def fd_d_function(f, point: Point, plan: SamplePlan) -> tuple:
    fn = _memo(lambda q: (_value(f, q),))
    return tuple(_partial(fn, point, i, plan.fd_step)[0] for i in range(len(point)))


def fd_lie_derivative_oneform(X, alpha, point: Point, plan: SamplePlan) -> tuple:
    return tuple(_num_lie_derivative(
        _vector_fn(X.components), _vector_fn(alpha.components), point, plan.fd_step))


def fd_oneform_bracket(P, alpha, beta, point: Point, plan: SamplePlan) -> tuple:
    A, B = _vector_fn(alpha.components), _vector_fn(beta.components)
    out = _num_oneform_brackets(
        _bivector_fn(P), _memo(lambda q: (A(q),)), _memo(lambda q: (B(q),)), point, plan.fd_step)
    return tuple(out[0][0])


def num_np_bivector(N, P, point: Point, plan: SamplePlan | None = None) -> tuple:
    """Upper-triangular entries of N.P at the point (no antisymmetry assumed)."""
    m = _matmul(_endo_fn(N)(point), _bivector_fn(P)(point))
    return tuple(m[i][j] for i, j in combinations(range(len(point)), 2))


def fd_concomitant(P, N, point: Point, plan: SamplePlan) -> tuple:
    """C(dx^i, dx^j)_k in (i, j, k) order from the defining combination."""
    n, h = len(point), plan.fd_step
    Pf, Nf = _bivector_fn(P), _endo_fn(N)
    NPf = _memo(lambda q: _matmul(Nf(q), Pf(q)))
    coframe = _const_matrix(n)
    # row i of N(q) is N* dx^i
    t1 = _num_oneform_brackets(NPf, coframe, coframe, point, h)
    t2 = _num_oneform_brackets(Pf, Nf, coframe, point, h)
    t3 = _num_oneform_brackets(Pf, coframe, Nf, point, h)
    t0 = _num_oneform_brackets(Pf, coframe, coframe, point, h)
    Nt = _transpose(Nf(point))
    out = []
    for i in range(n):
        for j in range(n):
            t4 = _matvec(Nt, t0[i][j])
            out.extend(w - (x + y - z) for w, x, y, z in zip(t1[i][j], t2[i][j], t3[i][j], t4))
    return tuple(out)


def _const_matrix(n: int) -> Callable[[Point], tuple]:
    eye = tuple(_unit(n, i) for i in range(n))
    return lambda q: eye
