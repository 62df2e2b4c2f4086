"""Seeded generators shared by the test modules."""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations

import numpy as np

from pncalc.calculus import (
    Bivector,
    EndoField,
    OneForm,
    VectorField,
    d_function,
    deformed_bracket,
    lie_bracket,
    lie_derivative_oneform,
    magri_morosi,
    nijenhuis_torsion,
    np_bivector,
    oneform_bracket,
    schouten_bivector,
    sharp,
)
from pncalc.expr import Chart, Poly
from pncalc.liealg import AlgBivector, AlgEndo, LieAlgebra, jacobi_check, zeros
from pncalc.oracle import (
    fd_concomitant,
    fd_d_function,
    fd_deformed_bracket,
    fd_lie_bracket,
    fd_lie_derivative_oneform,
    fd_oneform_bracket,
    fd_schouten,
    fd_torsion,
    num_np_bivector,
    num_sharp,
    randomized_identity_check,
)


def rand_coeff(rng: random.Random, lo=-5, hi=5) -> Fraction:
    # mostly integers, sometimes halves
    c = Fraction(rng.randint(lo, hi))
    if rng.random() < 0.2:
        c /= 2
    return c


def rand_poly(chart: Chart, rng: random.Random, degree: int = 2, terms: int = 3) -> Poly:
    n = chart.dimension
    out = {}
    for _ in range(terms):
        e = [0] * n
        for _ in range(rng.randint(0, degree)):
            e[rng.randrange(n)] += 1
        out[tuple(e)] = rand_coeff(rng)
    return Poly(chart, out)


def rand_vector(chart, rng, degree=2) -> VectorField:
    return VectorField(chart, [rand_poly(chart, rng, degree) for _ in range(chart.dimension)])


def rand_oneform(chart, rng, degree=2) -> OneForm:
    return OneForm(chart, [rand_poly(chart, rng, degree) for _ in range(chart.dimension)])


def rand_bivector(chart, rng, degree=2) -> Bivector:
    n = chart.dimension
    return Bivector(chart, {(i, j): rand_poly(chart, rng, degree) for i, j in combinations(range(n), 2)})


def rand_endo(chart, rng, degree=2) -> EndoField:
    n = chart.dimension
    return EndoField(chart, [[rand_poly(chart, rng, degree, 2) for _ in range(n)] for _ in range(n)])


def compatible_manifold_pair(chart, rng, degree=1):
    """``(P, N)`` with ``N = f I + P A``, A constant antisymmetric, so N.P = P.N^T."""
    n = chart.dimension
    P = rand_bivector(chart, rng, degree)
    A = [[chart.zero()] * n for _ in range(n)]
    for i, j in combinations(range(n), 2):
        a = rand_coeff(rng, -2, 2)
        A[i][j], A[j][i] = chart.const(a), chart.const(-a)
    f = rand_poly(chart, rng, degree)
    Pm = P.matrix()
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            v = f if i == j else chart.zero()
            for k in range(n):
                v = v + Pm[i][k] * A[k][j]
            row.append(v)
        rows.append(row)
    return P, EndoField(chart, rows)


def rand_antisym(rng, d, lo=-2, hi=2) -> np.ndarray:
    m = zeros(d, d)
    for i, j in combinations(range(d), 2):
        v = Fraction(rng.randint(lo, hi))
        m[i, j], m[j, i] = v, -v
    return m


def compatible_algebraic_pair(g: LieAlgebra, rng):
    """``n = c I + lambda A`` with A antisymmetric is compatible with lambda."""
    d = g.dimension
    lam = rand_antisym(rng, d)
    if rng.random() < 0.4:
        # kill the e1^e2 entry so some pairs pass on Heisenberg
        lam[0, 1] = lam[1, 0] = Fraction(0)
    n = lam @ rand_antisym(rng, d) + np.eye(d, dtype=int) * Fraction(rng.randint(-2, 2))
    n = np.vectorize(Fraction, otypes=[object])(n)
    return AlgBivector(g, lam), AlgEndo(g, n)


def random_table(rng, d, density=0.3) -> np.ndarray:
    c = zeros(d, d, d)
    for i, j in combinations(range(d), 2):
        for k in range(d):
            if rng.random() < density:
                v = Fraction(rng.choice([-2, -1, 1, 2]))
                c[k, i, j], c[k, j, i] = v, -v
    return c


def search_tables(rng, want_jacobi: bool, count: int, dims=(2, 3, 4)):
    """Brute-force search for nonzero tables that pass (or fail) Jacobi."""
    found, seen = [], set()
    while len(found) < count:
        c = random_table(rng, rng.choice(dims))
        key = tuple(c.flat)
        if not any(c.flat) or key in seen:
            continue
        seen.add(key)
        if jacobi_check(c) == want_jacobi:
            found.append(c)
    return found


def perturb(tensor, index: int, delta=1):
    """Copy of ``tensor`` with ``delta`` added to its ``index``-th stored component."""
    count = [0]

    def bump(p):
        k = count[0]
        count[0] += 1
        return p + delta if k == index else p

    return tensor.map(bump)

# --- operator table shared by the oracle tests ---------------------------------
# each builder returns (symbolic result, pointwise recipe) for one random input


def _op_lie_bracket(chart, rng):
    X, Y = rand_vector(chart, rng), rand_vector(chart, rng)
    return lie_bracket(X, Y), lambda p, plan: fd_lie_bracket(X, Y, p, plan)


def _op_torsion(chart, rng):
    N = rand_endo(chart, rng)
    return nijenhuis_torsion(N), lambda p, plan: fd_torsion(N, p, plan)


def _op_deformed(chart, rng):
    N, X, Y = rand_endo(chart, rng, 1), rand_vector(chart, rng), rand_vector(chart, rng)
    return deformed_bracket(N, X, Y), lambda p, plan: fd_deformed_bracket(N, X, Y, p, plan)


def _op_schouten(chart, rng):
    P, Q = rand_bivector(chart, rng), rand_bivector(chart, rng)
    return schouten_bivector(P, Q), lambda p, plan: fd_schouten(P, Q, p, plan)


def _op_sharp(chart, rng):
    P, a = rand_bivector(chart, rng), rand_oneform(chart, rng)
    return sharp(P, a), lambda p, plan: num_sharp(P, a, p, plan)


def _op_d(chart, rng):
    f = rand_poly(chart, rng, 3, 4)
    return d_function(f), lambda p, plan: fd_d_function(f, p, plan)


def _op_lie_derivative(chart, rng):
    X, a = rand_vector(chart, rng), rand_oneform(chart, rng)
    return lie_derivative_oneform(X, a), lambda p, plan: fd_lie_derivative_oneform(X, a, p, plan)


def _op_oneform_bracket(chart, rng):
    P, a, b = rand_bivector(chart, rng), rand_oneform(chart, rng, 1), rand_oneform(chart, rng, 1)
    return oneform_bracket(P, a, b), lambda p, plan: fd_oneform_bracket(P, a, b, p, plan)


def _op_np(chart, rng):
    P, N = compatible_manifold_pair(chart, rng, 2)
    return np_bivector(N, P), lambda p, plan: num_np_bivector(N, P, p, plan)


def _op_concomitant(chart, rng):
    P, N = compatible_manifold_pair(chart, rng)
    return magri_morosi(P, N), lambda p, plan: fd_concomitant(P, N, p, plan)


OPERATORS = {
    "lie_bracket": _op_lie_bracket,
    "nijenhuis_torsion": _op_torsion,
    "deformed_bracket": _op_deformed,
    "schouten_bivector": _op_schouten,
    "sharp": _op_sharp,
    "d_function": _op_d,
    "lie_derivative_oneform": _op_lie_derivative,
    "oneform_bracket": _op_oneform_bracket,
    "np_bivector": _op_np,
    "magri_morosi": _op_concomitant,
}


def oracle_outcome(symbolic, recipe, plan):
    return randomized_identity_check(symbolic, lambda p: recipe(p, plan), plan)
