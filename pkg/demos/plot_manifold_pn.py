"""
Poisson-Nijenhuis pairs on a chart
==================================

Build a bivector and a (1,1)-tensor on R^3, then ask which of the four
conditions hold.  Every verdict comes with a witness when it fails.
"""

from pncalc.calculus import Bivector, EndoField, OneForm, magri_morosi, pn_verify
from pncalc.expr import Chart
from pncalc.oracle import SamplePlan

R3 = Chart.numbered("x", 3)
x1, x2, x3 = R3.vars()

# a constant symplectic-like bivector with a scalar recursion operator
P = Bivector(R3, {(0, 1): 1})
N = EndoField.scalar(R3, x3)
print(pn_verify(P, N, SamplePlan(count=5)).summary())

# the concomitant is what fails; read off one component by hand
C = magri_morosi(P, N)
dx = [OneForm.coordinate(R3, i) for i in range(3)]
print("C(dx1, dx2) =", C.contract(dx[0], dx[1]))

###############################################################################
# A non-Poisson bivector: the Jacobiator does not vanish and the
# compatibility check already fails, so the concomitant is undefined.

Q = Bivector(R3, {(0, 1): x1 * x3, (1, 2): x2})
M = EndoField(R3, [[x2, 0, 0], [0, x1, 0], [0, 0, 1]])
report = pn_verify(Q, M)
for check in report.checks:
    print(f"{check.name:18s} {check.verdict}  {check.witness or ''}")
