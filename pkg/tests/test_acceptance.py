"""End-to-end acceptance criteria A1-A8, one test each.

Each test records a single PASS/FAIL line (see conftest.py), printed in the
terminal summary, and then asserts on it.
"""

import random
import subprocess
import sys

from pncalc.calculus import EndoField, lie_bracket, nijenhuis_torsion, schouten_bivector
from pncalc.expr import Chart
from pncalc.groupoid import (
    AlgebroidSection,
    algebroid_bracket,
    build_trivial_groupoid,
    groupoid_axioms_verify,
    groupoid_violation,
    section_extend,
    trivial_pn_verify,
)
from pncalc.liealg import LieAlgebra, alg_schouten, lie_poisson_bivector
from pncalc.liegroup import (
    PolyGroup,
    extend_bivector,
    extend_trivector,
    extend_vector,
    right_invariant_pn_verify,
)
from pncalc.models import load_model, plan_for
from pncalc.oracle import SamplePlan, fd_torsion, randomized_identity_check

from helpers import (
    OPERATORS,
    compatible_algebraic_pair,
    oracle_outcome,
    perturb,
    rand_endo,
    rand_poly,
    rand_vector,
    search_tables,
)

PLAN = SamplePlan()  # 20 points, seed 42, tolerance 1e-6
H = PolyGroup.heisenberg()


def test_a1_torsion(criterion):
    rng = random.Random(101)
    exact = True
    for n in (2, 3, 4):
        chart = Chart.numbered("x", n)
        const = EndoField(chart, [[rng.randint(-3, 3) for _ in range(n)] for _ in range(n)])
        exact &= nijenhuis_torsion(EndoField.identity(chart)).is_zero()
        exact &= nijenhuis_torsion(const).is_zero()
    agree, worst = 0, 0.0
    for t in range(10):
        N = rand_endo(Chart.numbered("x", 2 + t % 3), rng, 2)
        out = randomized_identity_check(nijenhuis_torsion(N), lambda p, N=N: fd_torsion(N, p, PLAN), PLAN)
        agree += out.passed
        worst = max(worst, out.max_deviation)
    ok = exact and agree == 10
    criterion(ok, f"identity/constant exact: {exact}; oracle {agree}/10 inputs x 20 pts, max dev {worst:.1e}")
    assert ok


def test_a2_schouten_normalization(criterion):
    rng = random.Random(202)
    good = [LieAlgebra.heisenberg().structure_constants] + search_tables(rng, True, 5, dims=(3, 4))
    bad = search_tables(rng, False, 5, dims=(3, 4))
    zero = sum(schouten_bivector(P, P).is_zero() for P in map(lie_poisson_bivector, map(LieAlgebra, good)))
    nonzero = sum(
        not schouten_bivector(P, P).is_zero()
        for P in (lie_poisson_bivector(LieAlgebra(c, check=False)) for c in bad)
    )
    ok = zero == 6 and nonzero == 5
    criterion(ok, f"Jacobi tables with [P,P]=0: {zero}/6; failing tables with [P,P]!=0: {nonzero}/5")
    assert ok


def test_a3_trivial_groupoid(criterion):
    model = load_model("fixture:trivial_groupoid_pass")
    o = model.objects
    good = trivial_pn_verify(o["model"], o["data"], plan_for(model), symmetric=True)
    parts = ("decomposition.schouten", "decomposition.torsion", "restriction.bivector", "restriction.endo")
    pass_ok = good.passed and all(good[p].passed for p in parts)

    failing = load_model("fixture:trivial_groupoid_fail").objects
    bad = trivial_pn_verify(failing["model"], failing["data"])
    failed_blocks = sorted(c.name for c in bad.checks if c.name.startswith("blocks.") and not c.passed)
    fail_ok = not bad.passed and failed_blocks == ["blocks.schouten_group"]
    ok = pass_ok and fail_ok
    criterion(ok, f"e1^e3 overall {'PASS' if good.passed else 'FAIL'}; "
                  f"e1^e2 overall {'PASS' if bad.passed else 'FAIL'}, failing blocks {failed_blocks}")
    assert ok


def test_a4_oracle_cross_validation(criterion):
    rng = random.Random(404)
    chart = Chart.numbered("x", 3)
    agree, caught = {}, {}
    for name, build in OPERATORS.items():
        agree[name] = caught[name] = 0
        for _ in range(10):
            symbolic, recipe = build(chart, rng)
            agree[name] += oracle_outcome(symbolic, recipe, PLAN).passed
            faulty = perturb(symbolic, rng.randrange(len(symbolic.flat())))
            caught[name] += not oracle_outcome(faulty, recipe, PLAN).passed
    bad = [n for n in OPERATORS if agree[n] < 10 or caught[n] < 10]
    ok = not bad
    criterion(ok, f"{len(OPERATORS)} operators x 10 inputs x 20 pts; faults caught "
                  f"{sum(caught.values())}/{10 * len(OPERATORS)}" + (f"; problems: {bad}" if bad else ""))
    assert ok


def test_a5_algebra_group_correspondence(criterion):
    rng = random.Random(505)
    agree = restrict = bridge = structures = 0
    for _ in range(10):
        L, n = compatible_algebraic_pair(H.algebra, rng)
        r = right_invariant_pn_verify(H, L, n)
        structures += r["algebra.schouten"].passed and r["algebra.concomitant_zero"].passed
        agree += r["bridge.verdicts_agree"].passed
        restrict += r["restriction.bivector"].passed and r["restriction.endo"].passed
        P = extend_bivector(H, L)
        bridge += schouten_bivector(P, P) == extend_trivector(H, alg_schouten(L))
    ok = agree == restrict == bridge == 10
    criterion(ok, f"verdicts agree {agree}/10; restriction exact {restrict}/10; "
                  f"[L->,L->] = [L,L]-> exact {bridge}/10; ({structures} of the pairs are structures)")
    assert ok


def _random_section(model, rng):
    chart = model.base_chart
    return AlgebroidSection(rand_vector(chart, rng), [rand_poly(chart, rng) for _ in range(model.d)])


def test_a6_bracket_morphism(criterion):
    rng = random.Random(606)
    models = [build_trivial_groupoid(Chart.numbered("x", m), H) for m in (1, 2)]
    sections = 0
    for t in range(10):
        model = models[t % 2]
        s1, s2 = _random_section(model, rng), _random_section(model, rng)
        lhs = section_extend(model, algebroid_bracket(model, s1, s2))
        sections += 2 * (lhs == lie_bracket(section_extend(model, s1), section_extend(model, s2)))
    vectors = 0
    for _ in range(20):
        v, w = ([rng.randint(-5, 5) for _ in range(3)] for _ in range(2))
        vectors += lie_bracket(extend_vector(H, v), extend_vector(H, w)) == extend_vector(H, H.algebra.bracket(v, w))
    ok = sections == 20 and vectors == 20
    criterion(ok, f"section_extend exact on {sections}/20 sections (10 pairs); extend_vector exact on {vectors}/20 pairs")
    assert ok


def test_a7_groupoid_axioms(criterion):
    fibers = {"abelian R^1": PolyGroup.abelian(1), "abelian R^3": PolyGroup.abelian(3), "Heisenberg": H}
    passed = [name for name, G in fibers.items()
              for base in (Chart.numbered("x", 1), Chart.numbered("x", 2))
              if groupoid_axioms_verify(build_trivial_groupoid(base, G))]
    c = Chart(["x1"])
    mutant = PolyGroup(["x1 + y1 + x1^2*y1 - x1*y1^2"], [-c.var(0)], verify=False)
    hit = groupoid_violation(build_trivial_groupoid(Chart.numbered("x", 1), mutant, verify=False))
    ok = len(passed) == 6 and hit is not None and hit[0].startswith("associativity")
    criterion(ok, f"built models passing: {len(passed)}/6; mutated mu fails at: {hit[0] if hit else None}")
    assert ok


def _cli(*args):
    return subprocess.run([sys.executable, "-m", "pncalc", *args], capture_output=True)


def test_a8_cli(criterion):
    args = ("check", "--model", "fixture:trivial_groupoid_pass", "--format", "json", "--seed", "42")
    first, second = _cli(*args), _cli(*args)
    identical = first.returncode == 0 and first.stdout == second.stdout and len(first.stdout) > 0
    codes = {name: _cli("check", "--model", f"fixture:{name}", "--oracle-samples", "5").returncode
             for name in ("manifold_symplectic_pass", "group_pn_heisenberg12_fail", "invalid_unknown_variable")}
    ok = identical and list(codes.values()) == [0, 1, 2]
    criterion(ok, f"byte-identical JSON: {identical}; exit codes pass/fail/input = "
                  f"{'/'.join(str(c) for c in codes.values())}")
    assert ok
