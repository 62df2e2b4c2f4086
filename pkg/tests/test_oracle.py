import random
from fractions import Fraction

import pytest

from pncalc.calculus import OneForm
from pncalc.expr import Chart
from pncalc.oracle import SamplePlan, fd_d_function, randomized_identity_check, sample_points

from helpers import OPERATORS, oracle_outcome, perturb

R3 = Chart.numbered("x", 3)


def test_points_are_seeded_and_in_range():
    plan = SamplePlan()
    a, b = sample_points(3, plan), sample_points(3, plan)
    assert a == b and len(a) == 20
    assert all(-5 <= c <= 5 for p in a for c in p)
    assert sample_points(3, SamplePlan(seed=1)) != a


@pytest.mark.parametrize("kwargs", [
    {"count": 0}, {"fd_step": 0}, {"fd_step": 2}, {"tolerance": 0}, {"low": 1, "high": 1},
])
def test_plan_validation(kwargs):
    with pytest.raises(ValueError):
        SamplePlan(**kwargs)


def test_zero_against_zero():
    zero = OneForm(R3, [0, 0, 0])
    out = randomized_identity_check(zero, lambda p: (0, 0, 0), SamplePlan(count=3))
    assert out.passed and out.max_deviation == 0 and out.verdict == "PASS"


def test_component_count_mismatch():
    with pytest.raises(ValueError):
        randomized_identity_check(OneForm(R3, [0, 0, 0]), lambda p: (0, 0), SamplePlan(count=1))


def test_truncation_error_is_tiny_but_visible():
    # the five-point stencil is exact up to degree 4; x1^6 leaves an O(h^4) residue
    x1 = R3.var(0)
    plan = SamplePlan(count=3)
    pt = sample_points(3, plan)[0]
    num = fd_d_function(x1**6, pt, plan)[0]
    exact = 6 * Fraction(pt[0]) ** 5
    assert 0 < abs(Fraction(num) - exact) < Fraction(1, 10**6)


@pytest.mark.parametrize("name", sorted(OPERATORS))
def test_operator_agrees_and_fault_is_caught(name):
    rng = random.Random(sorted(OPERATORS).index(name))
    plan = SamplePlan(count=5)
    symbolic, recipe = OPERATORS[name](R3, rng)
    assert oracle_outcome(symbolic, recipe, plan).passed
    bad = oracle_outcome(perturb(symbolic, rng.randrange(len(symbolic.flat()))), recipe, plan)
    assert not bad.passed
    assert bad.max_deviation == pytest.approx(1.0)
