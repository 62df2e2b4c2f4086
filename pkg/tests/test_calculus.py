import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pncalc.calculus import (
    Bivector,
    EndoField,
    OneForm,
    Trivector,
    VectorField,
    concomitant,
    d_function,
    deformed_bracket,
    lie_bracket,
    lie_derivative_oneform,
    magri_morosi,
    nijenhuis_torsion,
    np_bivector,
    oneform_bracket,
    pn_verify,
    schouten_bivector,
    sharp,
    torsion_apply,
)
from pncalc.errors import ChartMismatch, NotCompatible
from pncalc.expr import Chart
from pncalc.liealg import LieAlgebra, lie_poisson_bivector
from pncalc.oracle import SamplePlan

from helpers import compatible_manifold_pair, rand_bivector, rand_endo, rand_oneform, rand_poly, rand_vector

R2 = Chart.numbered("x", 2)
R3 = Chart.numbered("x", 3)
x1, x2 = R2.vars()


def d(chart, i):
    return VectorField.coordinate(chart, i)


def dx(chart, i):
    return OneForm.coordinate(chart, i)


# --- examples ----------------------------------------------------------------


def test_lie_bracket_examples():
    assert lie_bracket(d(R2, 0), d(R2, 1)).is_zero()
    assert lie_bracket(d(R2, 0) * x1, d(R2, 1)).is_zero()
    assert lie_bracket(d(R2, 0) * x1, d(R2, 1) * x1) == d(R2, 1) * x1


def test_lie_bracket_chart_mismatch():
    with pytest.raises(ChartMismatch):
        lie_bracket(d(R2, 0), d(R3, 0))


@pytest.mark.parametrize("N", [
    EndoField.identity(R3),
    EndoField(R3, [[1, 2, 0], [3, -1, 5], [0, 0, 7]]),
    EndoField.scalar(R2, x1),
])
def test_torsion_vanishes(N):
    assert nijenhuis_torsion(N).is_zero()


def test_torsion_nonzero_witness():
    N = EndoField(R2, [[x2, 0], [0, x1]])
    tau = nijenhuis_torsion(N)
    assert not tau.is_zero()
    assert tau[0, 1, 0] == -tau[0, 0, 1]


def test_deformed_bracket_examples():
    X, Y = d(R2, 0), d(R2, 1) * x1
    assert deformed_bracket(EndoField.identity(R2), X, Y) == lie_bracket(X, Y)
    assert deformed_bracket(EndoField(R2, [[0, 0], [0, 0]]), X, Y).is_zero()
    assert deformed_bracket(EndoField.scalar(R2, x1), d(R2, 0), d(R2, 1)) == d(R2, 1)


def test_schouten_examples():
    assert schouten_bivector(Bivector(R2, {(0, 1): 1}), Bivector(R2, {(0, 1): 1})).is_zero()
    P = lie_poisson_bivector(LieAlgebra.heisenberg())
    assert schouten_bivector(P, P).is_zero()
    x = R3.vars()
    Q = Bivector(R3, {(0, 1): x[1], (1, 2): 1})
    T = schouten_bivector(Q, Q)
    assert T[0, 1, 2] == -T[1, 0, 2] == T[1, 2, 0]
    assert not T.is_zero()


def test_sharp_sign_convention():
    assert sharp(Bivector(R2, {(0, 1): 1}), dx(R2, 0)) == d(R2, 1)
    assert sharp(Bivector(R2), dx(R2, 0)).is_zero()
    assert sharp(Bivector(R2, {(0, 1): x1}), dx(R2, 1)) == d(R2, 0) * (-x1)


def test_d_function():
    assert d_function(x1 * x2) == OneForm(R2, [x2, x1])
    assert d_function(R2.const(3)).is_zero()
    f = (x1 + x2) ** 2
    assert d_function(f) == OneForm(R2, [2 * (x1 + x2), 2 * (x1 + x2)])


def test_lie_derivative_examples():
    assert lie_derivative_oneform(d(R2, 0), dx(R2, 1)).is_zero()
    assert lie_derivative_oneform(d(R2, 0) * x1, dx(R2, 0)) == dx(R2, 0)
    f = x1**2
    assert lie_derivative_oneform(d(R2, 0), d_function(f)) == d_function(d(R2, 0).apply(f))


def test_oneform_bracket_examples():
    P = Bivector(R2, {(0, 1): 1})
    assert oneform_bracket(P, dx(R2, 0), dx(R2, 0)).is_zero()
    assert oneform_bracket(P, dx(R2, 0), dx(R2, 1)).is_zero()
    # x1 d1^d2: L_{x1 d2} dx2 - L_{-x1 d1} dx1 - d(x1) = dx1 + dx1 - dx1
    Q = Bivector(R2, {(0, 1): x1})
    assert oneform_bracket(Q, dx(R2, 0), dx(R2, 1)) == OneForm(R2, [1, 0])


def test_np_bivector():
    P = Bivector(R2, {(0, 1): 1})
    assert np_bivector(EndoField.identity(R2), P) == P
    assert np_bivector(EndoField.scalar(R2, 3), P) == P * 3
    assert np_bivector(EndoField.scalar(R2, x1), P) == Bivector(R2, {(0, 1): x1})
    with pytest.raises(NotCompatible):
        np_bivector(EndoField(R2, [[x1, 0], [0, x2]]), P)


def test_concomitant_trivial_cases():
    P = Bivector(R3, {(0, 1): R3.var(2), (1, 2): 1})
    assert magri_morosi(P, EndoField.identity(R3)).is_zero()
    Pc = Bivector(R2, {(0, 1): 2})
    assert magri_morosi(Pc, EndoField.scalar(R2, 5)).is_zero()


def test_concomitant_scalar_multiples():
    # in dimension 2 the concomitant of (symplectic, f I) vanishes
    assert magri_morosi(Bivector(R2, {(0, 1): 1}), EndoField.scalar(R2, x1)).is_zero()
    # on R^3, P = d1^d2 and N = x3 I: hand expansion gives C(dx1, dx2) = dx3
    P = Bivector(R3, {(0, 1): 1})
    N = EndoField.scalar(R3, R3.var(2))
    C = magri_morosi(P, N)
    assert C.contract(dx(R3, 0), dx(R3, 1)) == dx(R3, 2)
    assert C.first_nonzero()[0] == "(1,2,3)"


def test_pn_verify_examples():
    P = Bivector(R2, {(0, 1): 1})
    r = pn_verify(P, EndoField.identity(R2))
    assert r.passed and r.names()[:4] == ["poisson", "nijenhuis", "compatible", "concomitant_zero"]
    r = pn_verify(P, EndoField(R2, [[x1, 0], [0, x2]]))
    assert not r.passed
    assert r["compatible"].witness == "(N.P - P.N^T)(1,2) = x1 - x2"
    assert r["concomitant_zero"].witness.startswith("undefined")
    bad = LieAlgebra.from_brackets(3, {(0, 1): {0: 1}, (1, 2): {1: 1}, (2, 0): {2: 1}}, check=False)
    Pb = lie_poisson_bivector(bad)
    assert not pn_verify(Pb, EndoField.identity(R3))["poisson"].passed
    assert "OVERALL: FAIL" in pn_verify(Pb, EndoField.identity(R3)).summary()


def test_dimension_one_is_vacuous():
    R1 = Chart(["t"])
    r = pn_verify(Bivector(R1), EndoField(R1, [[R1.var("t") ** 2]]))
    assert r.passed


def test_pn_verify_with_oracle():
    rng = random.Random(7)
    P, N = compatible_manifold_pair(R3, rng)
    r = pn_verify(P, N, SamplePlan(count=5))
    for name in ("poisson", "nijenhuis", "concomitant_zero"):
        assert r[name].oracle is not None and r[name].oracle.passed


# --- properties ---------------------------------------------------------------


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32))
def test_bracket_antisymmetry_and_jacobi(seed):
    rng = random.Random(seed)
    X, Y, Z = (rand_vector(R3, rng) for _ in range(3))
    assert lie_bracket(X, Y) == -lie_bracket(Y, X)
    jac = (lie_bracket(X, lie_bracket(Y, Z)) + lie_bracket(Y, lie_bracket(Z, X))
           + lie_bracket(Z, lie_bracket(X, Y)))
    assert jac.is_zero()


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**32))
def test_torsion_tensoriality(seed):
    rng = random.Random(seed)
    N = rand_endo(R2, rng, 2)
    X, Y = rand_vector(R2, rng), rand_vector(R2, rng)
    f = rand_poly(R2, rng)
    tau = nijenhuis_torsion(N)
    assert tau.contract(X, Y) == torsion_apply(N, X, Y)
    assert torsion_apply(N, X * f, Y) == torsion_apply(N, X, Y) * f


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**32))
def test_oneform_bracket_leibniz_and_antisymmetry(seed):
    rng = random.Random(seed)
    P = rand_bivector(R3, rng, 1)
    a, b = rand_oneform(R3, rng, 1), rand_oneform(R3, rng, 1)
    f = rand_poly(R3, rng, 1)
    assert oneform_bracket(P, a, b) == -oneform_bracket(P, b, a)
    lhs = oneform_bracket(P, a, b * f)
    rhs = oneform_bracket(P, a, b) * f + b * sharp(P, a).apply(f)
    assert lhs == rhs


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 2**32))
def test_concomitant_bilinearity(seed):
    rng = random.Random(seed)
    P, N = compatible_manifold_pair(R2, rng)
    C = magri_morosi(P, N)
    a, b = rand_oneform(R2, rng, 1), rand_oneform(R2, rng, 1)
    f = rand_poly(R2, rng, 1)
    assert C.contract(a, b) == concomitant(P, N, a, b)
    assert C.contract(a * f, b) == C.contract(a, b) * f


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 2**32))
def test_schouten_symmetric_in_arguments(seed):
    rng = random.Random(seed)
    P, Q = rand_bivector(R3, rng), rand_bivector(R3, rng)
    assert schouten_bivector(P, Q) == schouten_bivector(Q, P)
    # [P+Q, P+Q] = [P,P] + 2[P,Q] + [Q,Q]
    lhs = schouten_bivector(P + Q, P + Q)
    rhs = {k: v for k, v in schouten_bivector(P, P)._items()}
    for (k, v), (_, w) in zip(schouten_bivector(P, Q)._items(), schouten_bivector(Q, Q)._items()):
        rhs[k] = rhs[k] + 2 * v + w
    assert lhs == Trivector(R3, rhs)


def test_str_lists_nonzero_components():
    assert str(Bivector(R3, {(0, 1): 1, (1, 2): R3.var(0)})) == "Bivector[(1,2): 1, (2,3): x1]"
    assert str(VectorField(R2, [0, 0])) == "VectorField[0]"
