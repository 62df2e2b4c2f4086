"""
From a Lie algebra to its group
===============================

The Heisenberg group on R^3 with mu = (x1+y1, x2+y2, x3+y3+x1*y2).  Algebraic
(Lambda, n) data on the Lie algebra is pushed to right-invariant tensors on
the group, and the two sets of verdicts are compared.
"""

from pncalc.liealg import AlgBivector, AlgEndo, alg_schouten, lambda_n_verify
from pncalc.liegroup import PolyGroup, extend_bivector, extend_vector, right_invariant_pn_verify

G = PolyGroup.heisenberg()
g = G.algebra

# the structure constants are read off mu; note the sign of [e1, e2]
print("[e1, e2] =", [str(c) for c in g.bracket([1, 0, 0], [0, 1, 0])])
print("J(g) rows:", [[str(p) for p in row] for row in G.jacobian.matrix])
print("e1-> =", extend_vector(G, [1, 0, 0]))

###############################################################################
# e1^e3 involves the central direction, so [Lambda, Lambda] = 0.

good = AlgBivector.wedge(g, 0, 2)
print(lambda_n_verify(g, good, AlgEndo.identity(g)).summary())

###############################################################################
# e1^e2 does not.  The chart Schouten bracket of the extension equals the
# extension of the algebraic one, so both sides fail together.

bad = AlgBivector.wedge(g, 0, 1)
idx, value = alg_schouten(bad).first_nonzero()
print(f"[L,L]^{idx} = {value}")
print("L-> =", extend_bivector(G, bad))
report = right_invariant_pn_verify(G, bad, AlgEndo.identity(g))
for name in ("algebra.schouten", "chart.poisson", "bridge.schouten", "bridge.verdicts_agree"):
    c = report[name]
    print(f"{name:24s} {c.verdict}  {c.witness or ''}")
