"""
The trivial groupoid R^2 x Heisenberg x R^2
===========================================

Arrows are (x; a; y).  The direct-sum pair is Pi_M + Lambda_G-> + 0 and
N_M + n_G-> + 0; the report localizes any failure to a block.
"""

from pncalc.calculus import Bivector, EndoField, VectorField
from pncalc.expr import Chart
from pncalc.groupoid import (
    AlgebroidSection,
    DirectSumPN,
    build_trivial_groupoid,
    direct_sum_pn,
    groupoid_axioms_verify,
    section_extend,
    trivial_pn_verify,
)
from pncalc.liealg import AlgBivector, AlgEndo
from pncalc.liegroup import PolyGroup

base = Chart.numbered("x", 2)
model = build_trivial_groupoid(base, PolyGroup.heisenberg())
print("arrow chart:", model.total_chart)
print("axioms hold:", groupoid_axioms_verify(model))

# a section 0 + e1 of the algebroid extends to a right-invariant field
s = AlgebroidSection(VectorField(base, [0, 0]), [base.const(1), base.zero(), base.zero()])
print("extension of 0 + e1:", section_extend(model, s))

g = model.group.algebra


def data(i, j):
    return DirectSumPN(Bivector(base, {(0, 1): 1}), EndoField.identity(base),
                       AlgBivector.wedge(g, i, j), AlgEndo.identity(g))


Pi, N = direct_sum_pn(model, data(0, 2))
print("Pi_Y =", Pi)
print(trivial_pn_verify(model, data(0, 2)).summary())

###############################################################################
# Swap in e1^e2 on the group factor.  Only the group block of [Pi, Pi] is hit.

report = trivial_pn_verify(model, data(0, 1))
for c in report.checks:
    if c.name.startswith("blocks."):
        print(f"{c.name:24s} {c.verdict}  {c.witness or ''}")
