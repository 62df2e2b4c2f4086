"""
Catching a planted bug with the numeric oracle
==============================================

The oracle recomputes an operator from point values and a five-point stencil
in exact rationals.  A correct symbolic result agrees to the last digit; a
result with one coefficient nudged by 1 does not.
"""

from pncalc.calculus import EndoField, nijenhuis_torsion
from pncalc.expr import Chart
from pncalc.oracle import SamplePlan, fd_torsion, randomized_identity_check

R2 = Chart.numbered("x", 2)
x1, x2 = R2.vars()
N = EndoField(R2, [[x2, x1 * x1], [1, x1]])
tau = nijenhuis_torsion(N)
plan = SamplePlan()

ok = randomized_identity_check(tau, lambda p: fd_torsion(N, p, plan), plan)
print("symbolic torsion:", ok.verdict, "max deviation", ok.max_deviation)

# plant a fault in the first stored component
count = iter(range(10**6))
broken = tau.map(lambda p: p + 1 if next(count) == 0 else p)
bad = randomized_identity_check(broken, lambda p: fd_torsion(N, p, plan), plan)
print("planted fault:   ", bad.verdict, "max deviation", bad.max_deviation, "at", bad.worst_point)
