"""Structure-constant Lie algebras and algebraic (Lambda, n) data.

Tables are numpy object arrays of :class:`fractions.Fraction` indexed
``c[k, i, j]`` with ``[e_i, e_j] = sum_k c[k, i, j] e_k``.  Indices are
0-based in the Python API; printed witnesses are 1-based.

The algebra is treated as a Lie algebroid over a point (zero anchor), which
fixes the algebraic 1-form bracket::

    [a, b]_L = L_{L# a} b - L_{L# b} a,     (L_X b)(Y) = -b([X, Y])
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from typing import Mapping

import numpy as np

from pncalc.calculus import Bivector
from pncalc.errors import AlgebraMismatch, DimensionMismatch, JacobiFailure, NotAntisymmetric, NotCompatible
from pncalc.expr import Chart
from pncalc.report import Check, StructureReport, zero_check


def rational_array(values, shape: tuple[int, ...] | None = None) -> np.ndarray:
    """Object array of Fractions; strings like ``"3/2"`` are accepted."""
    arr = np.array(values, dtype=object)
    if shape is not None and arr.shape != shape:
        raise DimensionMismatch(f"expected shape {shape}, got {arr.shape}")
    flat = [Fraction(v) for v in arr.flat]
    out = np.empty(arr.shape, dtype=object)
    out.flat[:] = flat
    return out


def zeros(*shape: int) -> np.ndarray:
    out = np.empty(shape, dtype=object)
    out.fill(Fraction(0))
    return out


def identity(n: int) -> np.ndarray:
    out = zeros(n, n)
    for i in range(n):
        out[i, i] = Fraction(1)
    return out


class RationalTensor:
    """Read-only wrapper giving rational arrays the zero-test/witness API."""

    def __init__(self, array: np.ndarray, label: str = ""):
        self.array = array
        self.label = label
        self.array.flags.writeable = False

    def first_nonzero(self):
        for idx in np.ndindex(*self.array.shape):
            v = self.array[idx]
            if v:
                return "(" + ",".join(str(i + 1) for i in idx) + ")", v
        return None

    def is_zero(self) -> bool:
        return self.first_nonzero() is None

    def __getitem__(self, idx):
        return self.array[idx]

    def __eq__(self, other) -> bool:
        other = other.array if isinstance(other, RationalTensor) else other
        return self.array.shape == np.shape(other) and bool(np.all(self.array == other))

    def __repr__(self) -> str:
        return f"RationalTensor(shape={self.array.shape}, nonzero={self.first_nonzero()})"


# --- structure constants --------------------------------------------------------


def structure_table(dimension: int, brackets: Mapping[tuple[int, int], Mapping[int, object]]) -> np.ndarray:
    """Table from sparse brackets ``{(i, j): {k: c}}``, completed antisymmetrically."""
    c = zeros(dimension, dimension, dimension)
    for (i, j), image in brackets.items():
        if i == j:
            if any(Fraction(v) for v in image.values()):
                raise NotAntisymmetric(f"[e{i + 1}, e{i + 1}] must vanish")
            continue
        for k, v in image.items():
            v = Fraction(v)
            if c[k, j, i] and c[k, j, i] != -v:
                raise NotAntisymmetric(f"inconsistent entries for [e{i + 1}, e{j + 1}]")
            c[k, i, j] = v
            c[k, j, i] = -v
    return c


def _check_antisymmetric(c: np.ndarray) -> None:
    d = c.shape[0]
    if c.shape != (d, d, d):
        raise DimensionMismatch(f"structure table must be d x d x d, got {c.shape}")
    for k, i, j in product(range(d), repeat=3):
        if c[k, i, j] != -c[k, j, i]:
            raise NotAntisymmetric(f"c[{k + 1}]({i + 1},{j + 1}) != -c[{k + 1}]({j + 1},{i + 1})")


def jacobi_sums(c: np.ndarray) -> np.ndarray:
    """``J[i, j, k, m]``: e_m-component of the cyclic sum of [[e_i, e_j], e_k]."""
    d = c.shape[0]
    out = zeros(d, d, d, d)
    for i, j, k, m in product(range(d), repeat=4):
        s = Fraction(0)
        for l in range(d):
            s += c[l, i, j] * c[m, l, k] + c[l, j, k] * c[m, l, i] + c[l, k, i] * c[m, l, j]
        out[i, j, k, m] = s
    return out


def jacobi_check(c) -> bool:
    """True iff the antisymmetric table satisfies the Jacobi identity exactly."""
    c = rational_array(c)
    _check_antisymmetric(c)
    return RationalTensor(jacobi_sums(c)).is_zero()


@dataclass(frozen=True, eq=False)
class LieAlgebra:
    structure_constants: np.ndarray

    def __init__(self, structure_constants, check: bool = True):
        c = rational_array(structure_constants)
        _check_antisymmetric(c)
        if check:
            hit = RationalTensor(jacobi_sums(c)).first_nonzero()
            if hit is not None:
                raise JacobiFailure(f"Jacobi sum {hit[0]} = {hit[1]}")
        c.flags.writeable = False
        object.__setattr__(self, "structure_constants", c)

    @property
    def dimension(self) -> int:
        return self.structure_constants.shape[0]

    @classmethod
    def from_brackets(cls, dimension: int, brackets, check: bool = True) -> "LieAlgebra":
        return cls(structure_table(dimension, brackets), check=check)

    @classmethod
    def abelian(cls, dimension: int) -> "LieAlgebra":
        return cls(zeros(dimension, dimension, dimension))

    @classmethod
    def heisenberg(cls) -> "LieAlgebra":
        """[e1, e2] = e3, e3 central."""
        return cls.from_brackets(3, {(0, 1): {2: 1}})

    def bracket(self, v, w) -> np.ndarray:
        v, w = rational_array(v), rational_array(w)
        c = self.structure_constants
        d = self.dimension
        return np.array([
            sum((c[k, i, j] * v[i] * w[j] for i in range(d) for j in range(d)), Fraction(0))
            for k in range(d)
        ], dtype=object)

    def __eq__(self, other) -> bool:
        return isinstance(other, LieAlgebra) and self.dimension == other.dimension and bool(
            np.all(self.structure_constants == other.structure_constants)
        )

    def __hash__(self) -> int:
        return hash(tuple(self.structure_constants.flat))


@dataclass(frozen=True, eq=False)
class AlgBivector:
    """``Lambda = 1/2 sum lambda^{ij} e_i ^ e_j`` with antisymmetric ``matrix``."""

    algebra: LieAlgebra
    matrix: np.ndarray

    def __init__(self, algebra: LieAlgebra, matrix):
        d = algebra.dimension
        m = rational_array(matrix, (d, d))
        for i, j in product(range(d), repeat=2):
            if m[i, j] != -m[j, i]:
                raise NotAntisymmetric(f"lambda({i + 1},{j + 1}) != -lambda({j + 1},{i + 1})")
        m.flags.writeable = False
        object.__setattr__(self, "algebra", algebra)
        object.__setattr__(self, "matrix", m)

    @classmethod
    def wedge(cls, algebra: LieAlgebra, i: int, j: int, scale=1) -> "AlgBivector":
        """``scale * e_i ^ e_j`` (0-based)."""
        m = zeros(algebra.dimension, algebra.dimension)
        m[i, j] = Fraction(scale)
        m[j, i] = -Fraction(scale)
        return cls(algebra, m)

    def __add__(self, other: "AlgBivector") -> "AlgBivector":
        _same_algebra(self.algebra, other.algebra)
        return AlgBivector(self.algebra, self.matrix + other.matrix)

    def scale(self, s) -> "AlgBivector":
        return AlgBivector(self.algebra, self.matrix * Fraction(s))


@dataclass(frozen=True, eq=False)
class AlgEndo:
    algebra: LieAlgebra
    matrix: np.ndarray

    def __init__(self, algebra: LieAlgebra, matrix):
        d = algebra.dimension
        m = rational_array(matrix, (d, d))
        m.flags.writeable = False
        object.__setattr__(self, "algebra", algebra)
        object.__setattr__(self, "matrix", m)

    @classmethod
    def identity(cls, algebra: LieAlgebra) -> "AlgEndo":
        return cls(algebra, identity(algebra.dimension))


def _same_algebra(a: LieAlgebra, b: LieAlgebra) -> None:
    if a != b:
        raise AlgebraMismatch("operands belong to different Lie algebras")


# --- algebraic operators ---------------------------------------------------------


def lie_poisson_bivector(g: LieAlgebra, prefix: str = "x") -> Bivector:
    """Linear Poisson bivector ``P^{ij}(x) = sum_k c[k, i, j] x_k`` on a fresh chart."""
    d = g.dimension
    chart = Chart.numbered(prefix, d)
    xs = chart.vars()
    c = g.structure_constants
    entries = {}
    for i, j in combinations(range(d), 2):
        v = chart.zero()
        for k in range(d):
            if c[k, i, j]:
                v = v + xs[k] * c[k, i, j]
        entries[(i, j)] = v
    return Bivector(chart, entries)


def alg_schouten(Lam: AlgBivector) -> RationalTensor:
    """``[Lambda, Lambda]`` as a totally antisymmetric array ``T[i, j, k]``.

    ``T^{ijk} = 2 cyc(i,j,k) sum_{l,m} lambda^{il} lambda^{jm} c[k, l, m]``;
    the factor 2 makes the right-invariant extension of ``T`` coincide with
    the chart Schouten bracket of the extended bivector.
    """
    lam = Lam.matrix
    c = Lam.algebra.structure_constants
    d = Lam.algebra.dimension
    A = zeros(d, d, d)
    for i, j, k in product(range(d), repeat=3):
        A[i, j, k] = sum(
            (lam[i, l] * lam[j, m] * c[k, l, m] for l in range(d) for m in range(d)), Fraction(0)
        )
    T = zeros(d, d, d)
    for i, j, k in product(range(d), repeat=3):
        T[i, j, k] = 2 * (A[i, j, k] + A[j, k, i] + A[k, i, j])
    return RationalTensor(T, "[L,L]^")


def alg_torsion(g: LieAlgebra, n: AlgEndo) -> RationalTensor:
    """``T[k, i, j]``: component k of tau_n(e_i, e_j)."""
    if n.algebra.dimension != g.dimension:
        raise DimensionMismatch("endomorphism and algebra dimensions differ")
    d = g.dimension
    N = n.matrix
    basis = identity(d)
    T = zeros(d, d, d)
    for i, j in product(range(d), repeat=2):
        ni, nj = N @ basis[:, i], N @ basis[:, j]
        v = (
            g.bracket(ni, nj)
            - N @ g.bracket(ni, basis[:, j])
            - N @ g.bracket(basis[:, i], nj)
            + N @ (N @ g.bracket(basis[:, i], basis[:, j]))
        )
        T[:, i, j] = v
    return RationalTensor(T, "tau_n^")


def alg_sharp(Lam: AlgBivector, alpha) -> np.ndarray:
    """``(Lambda# alpha)^i = sum_j lambda^{ji} alpha_j``."""
    return Lam.matrix.T @ rational_array(alpha)


def alg_lie_derivative(g: LieAlgebra, X, beta) -> np.ndarray:
    """``(L_X beta)_m = -beta([X, e_m])`` (zero anchor)."""
    X, beta = rational_array(X), rational_array(beta)
    c = g.structure_constants
    d = g.dimension
    return np.array([
        -sum((X[l] * c[k, l, m] * beta[k] for l in range(d) for k in range(d)), Fraction(0))
        for m in range(d)
    ], dtype=object)


def alg_oneform_bracket(g: LieAlgebra, lam: np.ndarray, alpha, beta) -> np.ndarray:
    """``[alpha, beta]`` for the bivector matrix ``lam`` (need not be validated)."""
    alpha, beta = rational_array(alpha), rational_array(beta)
    return (
        alg_lie_derivative(g, lam.T @ alpha, beta)
        - alg_lie_derivative(g, lam.T @ beta, alpha)
    )


def alg_compatibility_defect(Lam: AlgBivector, n: AlgEndo) -> np.ndarray:
    """``n.lambda - lambda.n^T``; zero iff n o Lambda# = Lambda# o n*."""
    return n.matrix @ Lam.matrix - Lam.matrix @ n.matrix.T


def alg_concomitant(g: LieAlgebra, Lam: AlgBivector, n: AlgEndo) -> RationalTensor:
    """``C[i, j, k]`` with ``C(eps^i, eps^j) = sum_k C[i, j, k] eps^k``."""
    _same_algebra(g, Lam.algebra)
    defect = alg_compatibility_defect(Lam, n)
    if not RationalTensor(defect.copy()).is_zero():
        raise NotCompatible("n.lambda - lambda.n^T is nonzero")
    d = g.dimension
    N = n.matrix
    nlam = N @ Lam.matrix
    lam = Lam.matrix
    eps = identity(d)
    C = zeros(d, d, d)
    for i, j in product(range(d), repeat=2):
        a, b = eps[i], eps[j]
        v = alg_oneform_bracket(g, nlam, a, b) - (
            alg_oneform_bracket(g, lam, N.T @ a, b)
            + alg_oneform_bracket(g, lam, a, N.T @ b)
            - N.T @ alg_oneform_bracket(g, lam, a, b)
        )
        C[i, j, :] = v
    return RationalTensor(C, "C^")


LAMBDA_N_NOTE = (
    "(Lambda, n) conditions checked: [Lambda,Lambda]=0, tau_n=0, "
    "n o Lambda# = Lambda# o n*, C(Lambda,n)=0; four conditions in total, "
    "no fifth condition is defined"
)


def lambda_n_verify(g: LieAlgebra, Lam: AlgBivector, n: AlgEndo) -> StructureReport:
    """Algebraic verdicts for a candidate (Lambda, n)-structure on ``g``."""
    _same_algebra(g, Lam.algebra)
    _same_algebra(g, n.algebra)
    checks = [
        zero_check("schouten", alg_schouten(Lam), "[L,L]^"),
        zero_check("nijenhuis", alg_torsion(g, n), "tau_n^k_ij"),
    ]
    defect = RationalTensor(alg_compatibility_defect(Lam, n), "")
    compat = zero_check("compatible", defect, "(n.L - L.n^T)")
    checks.append(compat)
    if compat.passed:
        C = alg_concomitant(g, Lam, n)
        checks.append(zero_check("concomitant_zero", C, "C^"))
        skew = RationalTensor(C.array + C.array.transpose(1, 0, 2))
        checks.append(zero_check("concomitant_skew", skew, "C(a,b)+C(b,a) ", mandatory=False))
    else:
        checks.append(Check("concomitant_zero", False,
                            "undefined: n.L is not antisymmetric"))
    return StructureReport("(Lambda, n) verdicts", tuple(checks), (LAMBDA_N_NOTE,))
