"""Tensor fields with polynomial components and the operators of
Poisson-Nijenhuis geometry on a single chart.

Conventions (fixed once, used everywhere):

* ``X = sum X^i d_i``; ``alpha = sum alpha_i dx^i``.
* A bivector ``P`` has antisymmetric components ``P^{ij}`` with
  ``P(alpha, beta) = sum P^{ij} alpha_i beta_j``.
* Sharp map: ``(P# alpha)^i = sum_j P^{ji} alpha_j``, i.e. ``P(alpha, -)``.
* An endomorphism field acts by ``(N X)^i = sum_j N^i_j X^j``; its dual acts
  on 1-forms through the transpose.
* Schouten bracket of bivectors::

      [P, Q]^{ijk} = sum_l cyc(i,j,k) (P^{il} d_l Q^{jk} + Q^{il} d_l P^{jk})

  so that ``[P, P]^{ijk}`` is twice the Jacobiator of
  ``{f, g} = P(df, dg)`` on the coordinate functions.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from itertools import combinations
from typing import Callable, Iterator, Sequence

from pncalc.errors import ChartMismatch, DimensionMismatch, NotCompatible
from pncalc.expr import Chart, Poly
from pncalc.report import Check, StructureReport, zero_check

# --- tensor types -----------------------------------------------------------


def _same_chart(*objs) -> Chart:
    chart = objs[0].chart
    for o in objs[1:]:
        if o.chart != chart:
            raise ChartMismatch(f"{chart} vs {o.chart}")
    return chart


def _as_poly(chart: Chart, value) -> Poly:
    if isinstance(value, Poly):
        if value.chart != chart:
            raise ChartMismatch(f"{value.chart} vs {chart}")
        return value
    if isinstance(value, str):
        return chart.poly(value)
    return chart.const(value)


def _fmt_index(index: tuple[int, ...]) -> str:
    return "(" + ",".join(str(i + 1) for i in index) + ")"


class _Tensor:
    """Shared component plumbing: flat ordering, evaluation, zero tests."""

    chart: Chart

    def _items(self) -> Iterator[tuple[tuple[int, ...], Poly]]:
        raise NotImplementedError

    def flat(self) -> tuple[Poly, ...]:
        return tuple(p for _, p in self._items())

    def evaluate(self, point: Sequence) -> tuple:
        return tuple(p.evaluate(point) for p in self.flat())

    def is_zero(self) -> bool:
        return all(p.is_zero() for p in self.flat())

    def first_nonzero(self) -> tuple[str, Poly] | None:
        for idx, p in self._items():
            if not p.is_zero():
                return _fmt_index(idx), p
        return None

    def map(self, fn: Callable[[Poly], Poly]):
        raise NotImplementedError

    def __str__(self) -> str:
        # nonzero components only, 1-based indices
        body = ", ".join(f"{_fmt_index(idx)}: {p}" for idx, p in self._items() if p)
        return f"{type(self).__name__}[{body or '0'}]"


@dataclass(frozen=True)
class VectorField(_Tensor):
    chart: Chart
    components: tuple[Poly, ...]

    def __init__(self, chart: Chart, components: Sequence):
        comps = tuple(_as_poly(chart, c) for c in components)
        if len(comps) != chart.dimension:
            raise DimensionMismatch(f"{len(comps)} components on a {chart.dimension}-chart")
        object.__setattr__(self, "chart", chart)
        object.__setattr__(self, "components", comps)

    @classmethod
    def zero(cls, chart: Chart) -> "VectorField":
        return cls(chart, [0] * chart.dimension)

    @classmethod
    def coordinate(cls, chart: Chart, i: int) -> "VectorField":
        """The coordinate field d_i (0-based index)."""
        return cls(chart, [1 if k == i else 0 for k in range(chart.dimension)])

    def _items(self):
        return (((i,), c) for i, c in enumerate(self.components))

    def __getitem__(self, i: int) -> Poly:
        return self.components[i]

    def __add__(self, other: "VectorField") -> "VectorField":
        _same_chart(self, other)
        return VectorField(self.chart, [a + b for a, b in zip(self.components, other.components)])

    def __sub__(self, other: "VectorField") -> "VectorField":
        _same_chart(self, other)
        return VectorField(self.chart, [a - b for a, b in zip(self.components, other.components)])

    def __neg__(self) -> "VectorField":
        return VectorField(self.chart, [-a for a in self.components])

    def __mul__(self, f) -> "VectorField":
        f = _as_poly(self.chart, f)
        return VectorField(self.chart, [f * a for a in self.components])

    __rmul__ = __mul__

    def apply(self, f: Poly) -> Poly:
        """Directional derivative X(f)."""
        _same_chart(self, f)
        total = self.chart.zero()
        for i, c in enumerate(self.components):
            if c:
                total = total + c * f.differentiate(i)
        return total

    def map(self, fn):
        return VectorField(self.chart, [fn(c) for c in self.components])


@dataclass(frozen=True)
class OneForm(_Tensor):
    chart: Chart
    components: tuple[Poly, ...]

    def __init__(self, chart: Chart, components: Sequence):
        comps = tuple(_as_poly(chart, c) for c in components)
        if len(comps) != chart.dimension:
            raise DimensionMismatch(f"{len(comps)} components on a {chart.dimension}-chart")
        object.__setattr__(self, "chart", chart)
        object.__setattr__(self, "components", comps)

    @classmethod
    def zero(cls, chart: Chart) -> "OneForm":
        return cls(chart, [0] * chart.dimension)

    @classmethod
    def coordinate(cls, chart: Chart, i: int) -> "OneForm":
        """The coframe element dx^i (0-based index)."""
        return cls(chart, [1 if k == i else 0 for k in range(chart.dimension)])

    def _items(self):
        return (((i,), c) for i, c in enumerate(self.components))

    def __getitem__(self, i: int) -> Poly:
        return self.components[i]

    def __add__(self, other: "OneForm") -> "OneForm":
        _same_chart(self, other)
        return OneForm(self.chart, [a + b for a, b in zip(self.components, other.components)])

    def __sub__(self, other: "OneForm") -> "OneForm":
        _same_chart(self, other)
        return OneForm(self.chart, [a - b for a, b in zip(self.components, other.components)])

    def __neg__(self) -> "OneForm":
        return OneForm(self.chart, [-a for a in self.components])

    def __mul__(self, f) -> "OneForm":
        f = _as_poly(self.chart, f)
        return OneForm(self.chart, [f * a for a in self.components])

    __rmul__ = __mul__

    def pair(self, X: VectorField) -> Poly:
        _same_chart(self, X)
        total = self.chart.zero()
        for a, x in zip(self.components, X.components):
            total = total + a * x
        return total

    def map(self, fn):
        return OneForm(self.chart, [fn(c) for c in self.components])


@dataclass(frozen=True)
class Bivector(_Tensor):
    """Antisymmetric 2-vector; only the ``i < j`` components are stored."""

    chart: Chart
    upper: tuple[tuple[tuple[int, int], Poly], ...]

    def __init__(self, chart: Chart, entries: dict | None = None):
        n = chart.dimension
        store: dict[tuple[int, int], Poly] = {}
        for (i, j), v in (entries or {}).items():
            if not (0 <= i < n and 0 <= j < n):
                raise DimensionMismatch(f"index ({i},{j}) outside a {n}-chart")
            v = _as_poly(chart, v)
            if i == j:
                if v:
                    raise ValueError("diagonal bivector entries must vanish")
                continue
            key, v = ((i, j), v) if i < j else ((j, i), -v)
            store[key] = store.get(key, chart.zero()) + v
        full = tuple((k, store.get(k, chart.zero())) for k in combinations(range(n), 2))
        object.__setattr__(self, "chart", chart)
        object.__setattr__(self, "upper", full)

    @classmethod
    def from_matrix(cls, chart: Chart, matrix: Sequence[Sequence]) -> "Bivector":
        n = chart.dimension
        if len(matrix) != n or any(len(r) != n for r in matrix):
            raise DimensionMismatch(f"expected a {n}x{n} matrix")
        m = [[_as_poly(chart, v) for v in row] for row in matrix]
        for i in range(n):
            for j in range(i, n):
                if m[i][j] + m[j][i]:
                    raise ValueError(f"matrix is not antisymmetric at ({i + 1},{j + 1})")
        return cls(chart, {(i, j): m[i][j] for i in range(n) for j in range(i + 1, n)})

    @classmethod
    def wedge(cls, X: VectorField, Y: VectorField) -> "Bivector":
        chart = _same_chart(X, Y)
        n = chart.dimension
        return cls(chart, {
            (i, j): X[i] * Y[j] - X[j] * Y[i] for i in range(n) for j in range(i + 1, n)
        })

    @classmethod
    def zero(cls, chart: Chart) -> "Bivector":
        return cls(chart)

    def __getitem__(self, ij: tuple[int, int]) -> Poly:
        i, j = ij
        if i == j:
            return self.chart.zero()
        n = self.chart.dimension
        if i < j:
            return self.upper[_pair_index(i, j, n)][1]
        return -self.upper[_pair_index(j, i, n)][1]

    def matrix(self) -> list[list[Poly]]:
        n = self.chart.dimension
        return [[self[i, j] for j in range(n)] for i in range(n)]

    def _items(self):
        return iter(self.upper)

    def __add__(self, other: "Bivector") -> "Bivector":
        _same_chart(self, other)
        return Bivector(self.chart, {k: v + other[k] for k, v in self.upper})

    def __sub__(self, other: "Bivector") -> "Bivector":
        _same_chart(self, other)
        return Bivector(self.chart, {k: v - other[k] for k, v in self.upper})

    def __mul__(self, f) -> "Bivector":
        f = _as_poly(self.chart, f)
        return Bivector(self.chart, {k: f * v for k, v in self.upper})

    __rmul__ = __mul__

    def __call__(self, alpha: OneForm, beta: OneForm) -> Poly:
        """P(alpha, beta)."""
        _same_chart(self, alpha, beta)
        total = self.chart.zero()
        for (i, j), v in self.upper:
            if v:
                total = total + v * (alpha[i] * beta[j] - alpha[j] * beta[i])
        return total

    def map(self, fn):
        return Bivector(self.chart, {k: fn(v) for k, v in self.upper})


def _pair_index(i: int, j: int, n: int) -> int:
    # position of (i, j), i < j, in combinations(range(n), 2)
    return i * n - i * (i + 1) // 2 + (j - i - 1)


def _perm_sign(idx: Sequence[int]) -> int:
    idx = list(idx)
    sign = 1
    for a in range(len(idx)):
        for b in range(a + 1, len(idx)):
            if idx[a] > idx[b]:
                sign = -sign
    return sign


def _lookup(obj, field: str) -> dict:
    # index -> component dict, built once per (immutable) tensor
    cache = obj.__dict__.get("_index")
    if cache is None:
        cache = dict(getattr(obj, field))
        object.__setattr__(obj, "_index", cache)
    return cache


@dataclass(frozen=True)
class Trivector(_Tensor):
    """Totally antisymmetric 3-vector stored on sorted index triples."""

    chart: Chart
    sorted_components: tuple[tuple[tuple[int, int, int], Poly], ...]

    def __init__(self, chart: Chart, entries: dict | None = None):
        n = chart.dimension
        entries = entries or {}
        store = {}
        for idx, v in entries.items():
            if len(set(idx)) < 3:
                if _as_poly(chart, v):
                    raise ValueError("repeated-index trivector entries must vanish")
                continue
            key = tuple(sorted(idx))
            store[key] = store.get(key, chart.zero()) + _perm_sign(idx) * _as_poly(chart, v)
        full = tuple((k, store.get(k, chart.zero())) for k in combinations(range(n), 3))
        object.__setattr__(self, "chart", chart)
        object.__setattr__(self, "sorted_components", full)

    def __getitem__(self, ijk: tuple[int, int, int]) -> Poly:
        if len(set(ijk)) < 3:
            return self.chart.zero()
        key = tuple(sorted(ijk))
        value = _lookup(self, "sorted_components")[key]
        return value if _perm_sign(ijk) > 0 else -value

    def _items(self):
        return iter(self.sorted_components)

    def map(self, fn):
        return Trivector(self.chart, {k: fn(v) for k, v in self.sorted_components})


@dataclass(frozen=True)
class EndoField(_Tensor):
    """(1,1)-tensor field; ``matrix[i][j] = N^i_j``."""

    chart: Chart
    matrix: tuple[tuple[Poly, ...], ...]

    def __init__(self, chart: Chart, matrix: Sequence[Sequence]):
        n = chart.dimension
        if len(matrix) != n or any(len(r) != n for r in matrix):
            raise DimensionMismatch(f"expected a {n}x{n} matrix")
        m = tuple(tuple(_as_poly(chart, v) for v in row) for row in matrix)
        object.__setattr__(self, "chart", chart)
        object.__setattr__(self, "matrix", m)

    @classmethod
    def identity(cls, chart: Chart) -> "EndoField":
        n = chart.dimension
        return cls(chart, [[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def scalar(cls, chart: Chart, f) -> "EndoField":
        f = _as_poly(chart, f)
        n = chart.dimension
        return cls(chart, [[f if i == j else 0 for j in range(n)] for i in range(n)])

    def __getitem__(self, ij: tuple[int, int]) -> Poly:
        return self.matrix[ij[0]][ij[1]]

    def _items(self):
        n = self.chart.dimension
        return (((i, j), self.matrix[i][j]) for i in range(n) for j in range(n))

    def __call__(self, X: VectorField) -> VectorField:
        _same_chart(self, X)
        return VectorField(self.chart, [_dot(row, X.components, self.chart) for row in self.matrix])

    def dual(self, alpha: OneForm) -> OneForm:
        """N* alpha, i.e. ``(N* alpha)_j = sum_i N^i_j alpha_i``."""
        _same_chart(self, alpha)
        n = self.chart.dimension
        return OneForm(self.chart, [
            _dot([self.matrix[i][j] for i in range(n)], alpha.components, self.chart)
            for j in range(n)
        ])

    def __matmul__(self, other: "EndoField") -> "EndoField":
        _same_chart(self, other)
        return EndoField(self.chart, mat_mul(self.matrix, other.matrix, self.chart))

    def transpose(self) -> "EndoField":
        n = self.chart.dimension
        return EndoField(self.chart, [[self.matrix[j][i] for j in range(n)] for i in range(n)])

    def map(self, fn):
        return EndoField(self.chart, [[fn(v) for v in row] for row in self.matrix])


@dataclass(frozen=True)
class TorsionTensor(_Tensor):
    """Vector-valued 2-form; ``components[(k, i, j)]`` for ``i < j``."""

    chart: Chart
    entries: tuple[tuple[tuple[int, int, int], Poly], ...]

    def __getitem__(self, kij: tuple[int, int, int]) -> Poly:
        k, i, j = kij
        if i == j:
            return self.chart.zero()
        table = _lookup(self, "entries")
        if i < j:
            return table[(k, i, j)]
        return -table[(k, j, i)]

    def _items(self):
        return iter(self.entries)

    def contract(self, X: VectorField, Y: VectorField) -> VectorField:
        """tau(X, Y) from the stored components."""
        _same_chart(self, X, Y)
        n = self.chart.dimension
        out = [self.chart.zero() for _ in range(n)]
        for (k, i, j), v in self.entries:
            if v:
                out[k] = out[k] + v * (X[i] * Y[j] - X[j] * Y[i])
        return VectorField(self.chart, out)

    def map(self, fn):
        return TorsionTensor(self.chart, tuple((k, fn(v)) for k, v in self.entries))


@dataclass(frozen=True)
class ConcomitantTensor(_Tensor):
    """``C(dx^i, dx^j) = sum_k C[i][j][k] dx^k``."""

    chart: Chart
    components: tuple[tuple[tuple[Poly, ...], ...], ...]

    def __getitem__(self, ijk: tuple[int, int, int]) -> Poly:
        i, j, k = ijk
        return self.components[i][j][k]

    def _items(self):
        n = self.chart.dimension
        return (
            ((i, j, k), self.components[i][j][k])
            for i in range(n) for j in range(n) for k in range(n)
        )

    def contract(self, alpha: OneForm, beta: OneForm) -> OneForm:
        _same_chart(self, alpha, beta)
        n = self.chart.dimension
        out = [self.chart.zero() for _ in range(n)]
        for i in range(n):
            for j in range(n):
                ab = alpha[i] * beta[j]
                if not ab:
                    continue
                for k in range(n):
                    c = self.components[i][j][k]
                    if c:
                        out[k] = out[k] + ab * c
        return OneForm(self.chart, out)

    def skew_defect(self) -> "ConcomitantTensor":
        """C(a, b) + C(b, a) componentwise."""
        n = self.chart.dimension
        c = self.components
        return ConcomitantTensor(self.chart, tuple(
            tuple(tuple(c[i][j][k] + c[j][i][k] for k in range(n)) for j in range(n))
            for i in range(n)
        ))

    def map(self, fn):
        return ConcomitantTensor(self.chart, tuple(
            tuple(tuple(fn(v) for v in row) for row in plane) for plane in self.components
        ))


# --- matrix helpers -----------------------------------------------------------


def _dot(a: Sequence[Poly], b: Sequence[Poly], chart: Chart) -> Poly:
    total = chart.zero()
    for x, y in zip(a, b):
        if x and y:
            total = total + x * y
    return total


def mat_mul(a, b, chart: Chart) -> list[list[Poly]]:
    n, m, p = len(a), len(b), len(b[0])
    return [[_dot(a[i], [b[k][j] for k in range(m)], chart) for j in range(p)] for i in range(n)]


def transpose(a) -> list[list]:
    return [list(r) for r in zip(*a)]


# --- operators ----------------------------------------------------------------


def lie_bracket(X: VectorField, Y: VectorField) -> VectorField:
    """[X, Y]^k = sum_i (X^i d_i Y^k - Y^i d_i X^k)."""
    chart = _same_chart(X, Y)
    return VectorField(chart, [X.apply(Y[k]) - Y.apply(X[k]) for k in range(chart.dimension)])


def torsion_apply(N: EndoField, X: VectorField, Y: VectorField) -> VectorField:
    """[NX, NY] - N[NX, Y] - N[X, NY] + N^2[X, Y] for arbitrary fields."""
    _same_chart(N, X, Y)
    NX, NY = N(X), N(Y)
    return (
        lie_bracket(NX, NY)
        - N(lie_bracket(NX, Y))
        - N(lie_bracket(X, NY))
        + N(N(lie_bracket(X, Y)))
    )


def nijenhuis_torsion(N: EndoField) -> TorsionTensor:
    """Nijenhuis torsion, assembled from its values on coordinate fields."""
    chart = N.chart
    n = chart.dimension
    frame = [VectorField.coordinate(chart, i) for i in range(n)]
    images = [N(d) for d in frame]
    entries = []
    values = {}
    for i, j in combinations(range(n), 2):
        # [d_i, d_j] = 0, so the N^2 term drops out on coordinate fields
        v = (
            lie_bracket(images[i], images[j])
            - N(lie_bracket(images[i], frame[j]))
            - N(lie_bracket(frame[i], images[j]))
        )
        values[(i, j)] = v
    for k in range(n):
        for i, j in combinations(range(n), 2):
            entries.append(((k, i, j), values[(i, j)][k]))
    return TorsionTensor(chart, tuple(entries))


def deformed_bracket(N: EndoField, X: VectorField, Y: VectorField) -> VectorField:
    """[X, Y]_N = [NX, Y] + [X, NY] - N[X, Y]."""
    _same_chart(N, X, Y)
    return lie_bracket(N(X), Y) + lie_bracket(X, N(Y)) - N(lie_bracket(X, Y))


def _schouten_component(P: Bivector, Q: Bivector, i: int, j: int, k: int) -> Poly:
    chart = P.chart
    total = chart.zero()
    for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
        for l in range(chart.dimension):
            pal, qal = P[a, l], Q[a, l]
            if pal:
                total = total + pal * Q[b, c].differentiate(l)
            if qal:
                total = total + qal * P[b, c].differentiate(l)
    return total


def schouten_bivector(P: Bivector, Q: Bivector) -> Trivector:
    """Schouten-Nijenhuis bracket of two bivectors (symmetric in P, Q)."""
    chart = _same_chart(P, Q)
    n = chart.dimension
    return Trivector(chart, {
        (i, j, k): _schouten_component(P, Q, i, j, k) for i, j, k in combinations(range(n), 3)
    })


def sharp(P: Bivector, alpha: OneForm) -> VectorField:
    """P# alpha = P(alpha, -)."""
    chart = _same_chart(P, alpha)
    n = chart.dimension
    return VectorField(chart, [
        _dot([P[j, i] for j in range(n)], alpha.components, chart) for i in range(n)
    ])


def d_function(f: Poly) -> OneForm:
    return OneForm(f.chart, [f.differentiate(i) for i in range(f.chart.dimension)])


def lie_derivative_oneform(X: VectorField, alpha: OneForm) -> OneForm:
    """(L_X alpha)_i = sum_j (X^j d_j alpha_i + alpha_j d_i X^j)."""
    chart = _same_chart(X, alpha)
    n = chart.dimension
    out = []
    for i in range(n):
        v = X.apply(alpha[i])
        for j in range(n):
            if alpha[j]:
                v = v + alpha[j] * X[j].differentiate(i)
        out.append(v)
    return OneForm(chart, out)


def oneform_bracket(P: Bivector, alpha: OneForm, beta: OneForm) -> OneForm:
    """[alpha, beta]_P = L_{P# alpha} beta - L_{P# beta} alpha - d(P(alpha, beta))."""
    _same_chart(P, alpha, beta)
    return (
        lie_derivative_oneform(sharp(P, alpha), beta)
        - lie_derivative_oneform(sharp(P, beta), alpha)
        - d_function(P(alpha, beta))
    )


def compatibility_defect(N: EndoField, P: Bivector) -> list[list[Poly]]:
    """N.P - P.N^T; zero exactly when N o P# = P# o N*."""
    chart = _same_chart(N, P)
    NP = mat_mul(N.matrix, P.matrix(), chart)
    PNt = mat_mul(P.matrix(), transpose(N.matrix), chart)
    return [[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(NP, PNt)]


def np_bivector(N: EndoField, P: Bivector) -> Bivector:
    """The bivector NP whose sharp map is N o P#."""
    chart = _same_chart(N, P)
    NP = mat_mul(N.matrix, P.matrix(), chart)
    n = chart.dimension
    for i in range(n):
        for j in range(i, n):
            if NP[i][j] + NP[j][i]:
                raise NotCompatible(
                    f"(N.P - P.N^T)_({i + 1},{j + 1}) = {NP[i][j] + NP[j][i]}"
                )
    return Bivector.from_matrix(chart, NP)


def concomitant(P: Bivector, N: EndoField, alpha: OneForm, beta: OneForm,
                NP: Bivector | None = None) -> OneForm:
    """Magri-Morosi combination evaluated on arbitrary 1-forms."""
    if NP is None:
        NP = np_bivector(N, P)
    return oneform_bracket(NP, alpha, beta) - (
        oneform_bracket(P, N.dual(alpha), beta)
        + oneform_bracket(P, alpha, N.dual(beta))
        - N.dual(oneform_bracket(P, alpha, beta))
    )


def magri_morosi(P: Bivector, N: EndoField) -> ConcomitantTensor:
    """Concomitant C(P, N) on coordinate coframe pairs."""
    chart = _same_chart(P, N)
    NP = np_bivector(N, P)
    n = chart.dimension
    coframe = [OneForm.coordinate(chart, i) for i in range(n)]
    comps = tuple(
        tuple(concomitant(P, N, coframe[i], coframe[j], NP).components for j in range(n))
        for i in range(n)
    )
    return ConcomitantTensor(chart, comps)


def _matrix_witness(m: list[list[Poly]], label: str) -> str | None:
    for i, row in enumerate(m):
        for j, v in enumerate(row):
            if v:
                return f"{label}({i + 1},{j + 1}) = {v}"
    return None


def pn_verify(P: Bivector, N: EndoField, plan=None) -> StructureReport:
    """Four Poisson-Nijenhuis verdicts for ``(P, N)`` on one chart.

    With a :class:`~pncalc.oracle.SamplePlan`, each differential verdict is
    paired with a finite-difference cross-check of the symbolic tensor.
    """
    from pncalc import oracle

    _same_chart(P, N)
    checks = []

    sch = schouten_bivector(P, P)
    c = zero_check("poisson", sch, "[P,P]^")
    if plan is not None:
        c = _with_oracle(c, oracle.randomized_identity_check(
            sch, lambda pt: oracle.fd_schouten(P, P, pt, plan), plan))
    checks.append(c)

    tau = nijenhuis_torsion(N)
    c = zero_check("nijenhuis", tau, "tauN^k_ij")
    if plan is not None:
        c = _with_oracle(c, oracle.randomized_identity_check(
            tau, lambda pt: oracle.fd_torsion(N, pt, plan), plan))
    checks.append(c)

    defect = compatibility_defect(N, P)
    witness = _matrix_witness(defect, "(N.P - P.N^T)")
    checks.append(Check("compatible", witness is None, witness))

    if witness is None:
        C = magri_morosi(P, N)
        c = zero_check("concomitant_zero", C, "C^")
        if plan is not None:
            c = _with_oracle(c, oracle.randomized_identity_check(
                C, lambda pt: oracle.fd_concomitant(P, N, pt, plan), plan))
        checks.append(c)
        checks.append(zero_check("concomitant_skew", C.skew_defect(), "C(a,b)+C(b,a) ",
                                 mandatory=False))
    else:
        checks.append(Check("concomitant_zero", False,
                            "undefined: N.P is not antisymmetric, so NP is not a bivector"))
    return StructureReport("Poisson-Nijenhuis verdicts", tuple(checks))


def _with_oracle(check: Check, outcome) -> Check:
    return replace(check, oracle=outcome)
