"""Exact sparse polynomials over the rationals, attached to a named chart.

A polynomial is a map from exponent tuples (one entry per chart coordinate)
to nonzero :class:`fractions.Fraction` coefficients.  Because the map never
stores zeros, two polynomials are equal exactly when their maps are equal,
and ``is_zero`` is a decision procedure.

Text grammar (whitespace insignificant)::

    expr     := term (("+" | "-") term)*
    term     := factor ("*" factor)*
    factor   := base ("^" uint)?
    base     := rational | ident | "(" expr ")" | "-" base
    rational := uint ("/" uint)?
    ident    := letter (letter | digit | "_")*

Unary minus binds looser than ``^``, so ``-x^2`` is ``-(x^2)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Iterator, Mapping, Sequence

from pncalc.errors import (
    ChartMismatch,
    DimensionMismatch,
    PolySyntaxError,
    UnknownVariable,
)

Exponent = tuple[int, ...]
Scalar = int | Fraction

_IDENT = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")


@dataclass(frozen=True)
class Chart:
    """Ordered coordinate names of a local chart."""

    names: tuple[str, ...]

    def __init__(self, names: Iterable[str]):
        names = tuple(names)
        if not names:
            raise ValueError("a chart needs at least one coordinate")
        for n in names:
            if not isinstance(n, str) or not _IDENT.match(n):
                raise ValueError(f"invalid coordinate name {n!r}")
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate coordinate names in {names}")
        object.__setattr__(self, "names", names)

    @classmethod
    def numbered(cls, prefix: str, dimension: int) -> "Chart":
        return cls(f"{prefix}{i + 1}" for i in range(dimension))

    @property
    def dimension(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise UnknownVariable(name) from None

    def zero(self) -> "Poly":
        return Poly(self, {})

    def const(self, value: Scalar) -> "Poly":
        return Poly(self, {(0,) * self.dimension: Fraction(value)})

    def var(self, name: str | int) -> "Poly":
        i = name if isinstance(name, int) else self.index(name)
        e = [0] * self.dimension
        e[i] = 1
        return Poly(self, {tuple(e): Fraction(1)})

    def vars(self) -> tuple["Poly", ...]:
        return tuple(self.var(i) for i in range(self.dimension))

    def poly(self, text: str) -> "Poly":
        return parse_poly(text, self)

    def __str__(self) -> str:
        return "(" + ", ".join(self.names) + ")"


class Poly:
    """Immutable polynomial with rational coefficients on a chart."""

    __slots__ = ("chart", "_terms", "_hash")

    def __init__(self, chart: Chart, terms: Mapping[Exponent, Scalar] | None = None):
        clean: dict[Exponent, Fraction] = {}
        n = chart.dimension
        for e, c in (terms or {}).items():
            if len(e) != n:
                raise DimensionMismatch(f"exponent {e} has length {len(e)}, chart has {n}")
            c = Fraction(c)
            if c:
                clean[tuple(e)] = c
        self.chart = chart
        self._terms = clean
        self._hash: int | None = None

    @classmethod
    def _raw(cls, chart: Chart, terms: dict[Exponent, Fraction]) -> "Poly":
        # trusted constructor: terms already canonical
        p = cls.__new__(cls)
        p.chart = chart
        p._terms = terms
        p._hash = None
        return p

    # --- inspection -------------------------------------------------------

    @property
    def terms(self) -> Mapping[Exponent, Fraction]:
        return dict(self._terms)

    def items(self) -> Iterator[tuple[Exponent, Fraction]]:
        return iter(self._terms.items())

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self._terms), default=-1)

    def is_constant(self) -> bool:
        return all(not any(e) for e in self._terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self._terms.get((0,) * self.chart.dimension, Fraction(0))

    def coefficient(self, exponent: Exponent) -> Fraction:
        return self._terms.get(tuple(exponent), Fraction(0))

    # --- ring operations --------------------------------------------------

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.chart != self.chart:
                raise ChartMismatch(f"{self.chart} vs {other.chart}")
            return other
        if isinstance(other, (int, Rational)):
            return self.chart.const(Fraction(other))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not other._terms:
            return self
        out = dict(self._terms)
        for e, c in other._terms.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return Poly._raw(self.chart, out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly._raw(self.chart, {e: -c for e, c in self._terms.items()})

    def __pos__(self) -> "Poly":
        return self

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Rational)) and not isinstance(other, Poly):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not self._terms or not other._terms:
            return Poly._raw(self.chart, {})
        out: dict[Exponent, Fraction] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(e, 0) + c1 * c2
                if s:
                    out[e] = s
                else:
                    del out[e]
        return Poly._raw(self.chart, out)

    __rmul__ = __mul__

    def scale(self, c: Scalar) -> "Poly":
        c = Fraction(c)
        if not c:
            return Poly._raw(self.chart, {})
        return Poly._raw(self.chart, {e: c * v for e, v in self._terms.items()})

    def __pow__(self, n: int) -> "Poly":
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = self.chart.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.chart == other.chart and self._terms == other._terms
        if isinstance(other, (int, Rational)):
            return self._terms == self.chart.const(Fraction(other))._terms
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.chart, frozenset(self._terms.items())))
        return self._hash

    # --- calculus and evaluation -------------------------------------------

    def differentiate(self, coordinate: str | int) -> "Poly":
        i = coordinate if isinstance(coordinate, int) else self.chart.index(coordinate)
        if not 0 <= i < self.chart.dimension:
            raise UnknownVariable(str(coordinate))
        out: dict[Exponent, Fraction] = {}
        for e, c in self._terms.items():
            k = e[i]
            if k:
                d = list(e)
                d[i] = k - 1
                out[tuple(d)] = c * k
        return Poly._raw(self.chart, out)

    def evaluate(self, point: Sequence):
        """Value at ``point``; exact when the point has rational entries."""
        if len(point) != self.chart.dimension:
            raise DimensionMismatch(
                f"point has {len(point)} entries, chart has {self.chart.dimension}"
            )
        total = 0
        for e, c in self._terms.items():
            t = c
            for x, k in zip(point, e):
                if k:
                    t = t * x**k
            total = total + t
        return total

    def substitute(self, images: Sequence["Poly"], chart: Chart | None = None) -> "Poly":
        """Compose with a polynomial map: coordinate ``i`` becomes ``images[i]``."""
        if len(images) != self.chart.dimension:
            raise DimensionMismatch("one image per coordinate required")
        if chart is None:
            if not images:
                raise ValueError("target chart required")
            chart = images[0].chart
        for im in images:
            if im.chart != chart:
                raise ChartMismatch(f"image on {im.chart}, expected {chart}")
        powers: dict[tuple[int, int], Poly] = {}

        def power(i: int, k: int) -> Poly:
            if (i, k) not in powers:
                powers[(i, k)] = images[i] ** k
            return powers[(i, k)]

        total = chart.zero()
        for e, c in self._terms.items():
            t = chart.const(c)
            for i, k in enumerate(e):
                if k:
                    t = t * power(i, k)
            total = total + t
        return total

    def rename(self, chart: Chart) -> "Poly":
        """Same terms read on another chart of equal dimension."""
        if chart.dimension != self.chart.dimension:
            raise DimensionMismatch("charts differ in dimension")
        return Poly._raw(chart, dict(self._terms))

    # --- printing -------------------------------------------------------------

    def sorted_terms(self) -> list[tuple[Exponent, Fraction]]:
        """Terms in descending graded-lexicographic order."""
        return sorted(self._terms.items(), key=lambda t: (sum(t[0]), t[0]), reverse=True)

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for idx, (e, c) in enumerate(self.sorted_terms()):
            mono = "*".join(
                name if k == 1 else f"{name}^{k}"
                for name, k in zip(self.chart.names, e)
                if k
            )
            mag = abs(c)
            if not mono:
                body = _fmt_rational(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{_fmt_rational(mag)}*{mono}"
            if idx == 0:
                parts.append(f"-{body}" if c < 0 else body)
            else:
                parts.append(f" - {body}" if c < 0 else f" + {body}")
        return "".join(parts)

    def __repr__(self) -> str:
        return f"Poly({str(self)!r}, chart={self.chart})"


def _fmt_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


# --- parsing ------------------------------------------------------------------

_UINT = re.compile(r"\d+")
_NAME = re.compile(r"[A-Za-z][A-Za-z0-9_]*")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos, n = 0, len(text)
    while True:
        while pos < n and text[pos].isspace():
            pos += 1
        if pos >= n:
            break
        if m := _UINT.match(text, pos):
            tokens.append(("uint", m.group(), pos))
        elif m := _NAME.match(text, pos):
            tokens.append(("ident", m.group(), pos))
        elif text[pos] in "+-*^/()":
            tokens.append((text[pos], text[pos], pos))
        else:
            raise PolySyntaxError(f"unexpected character {text[pos]!r}", pos, text)
        pos += len(tokens[-1][1])
    tokens.append(("end", "", n))
    return tokens


class _Parser:
    def __init__(self, text: str, chart: Chart):
        self.text = text
        self.chart = chart
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.i]

    def take(self, kind: str) -> tuple[str, str, int]:
        tok = self.peek()
        if tok[0] != kind:
            want = "end of input" if kind == "end" else repr(kind)
            got = "end of input" if tok[0] == "end" else repr(tok[1])
            raise PolySyntaxError(f"expected {want}, found {got}", tok[2], self.text)
        self.i += 1
        return tok

    def expr(self) -> Poly:
        value = self.term()
        while self.peek()[0] in ("+", "-"):
            op = self.take(self.peek()[0])[0]
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self) -> Poly:
        value = self.factor()
        while self.peek()[0] == "*":
            self.take("*")
            value = value * self.factor()
        return value

    def factor(self) -> Poly:
        if self.peek()[0] == "-":
            self.take("-")
            return -self.factor()
        value = self.base()
        if self.peek()[0] == "^":
            self.take("^")
            value = value ** int(self.take("uint")[1])
        return value

    def base(self) -> Poly:
        kind, val, pos = self.peek()
        if kind == "uint":
            self.take("uint")
            num = int(val)
            if self.peek()[0] == "/":
                self.take("/")
                _, d, dpos = self.take("uint")
                if int(d) == 0:
                    raise PolySyntaxError("zero denominator", dpos, self.text)
                return self.chart.const(Fraction(num, int(d)))
            return self.chart.const(num)
        if kind == "ident":
            self.take("ident")
            if val not in self.chart.names:
                raise UnknownVariable(val, pos)
            return self.chart.var(val)
        if kind == "(":
            self.take("(")
            value = self.expr()
            self.take(")")
            return value
        if kind == "-":
            self.take("-")
            return -self.base()
        found = "end of input" if kind == "end" else repr(val)
        raise PolySyntaxError(f"expected a number, variable or '(', found {found}", pos, self.text)


def parse_poly(text: str, chart: Chart) -> Poly:
    """Parse ``text`` into the canonical polynomial it denotes on ``chart``."""
    if not isinstance(text, str):
        raise TypeError("polynomial text must be a string")
    p = _Parser(text, chart)
    value = p.expr()
    p.take("end")
    return value


# --- polynomial maps ---------------------------------------------------------


@dataclass(frozen=True)
class PolyMap:
    """Polynomial map ``domain -> codomain`` given by one Poly per target coordinate."""

    domain: Chart
    codomain: Chart
    components: tuple[Poly, ...]

    def __post_init__(self):
        if len(self.components) != self.codomain.dimension:
            raise DimensionMismatch("one component per codomain coordinate required")
        for c in self.components:
            if c.chart != self.domain:
                raise ChartMismatch(f"component on {c.chart}, expected {self.domain}")

    def after(self, inner: "PolyMap") -> "PolyMap":
        """``self`` composed with ``inner`` (inner applied first)."""
        if inner.codomain.dimension != self.domain.dimension:
            raise DimensionMismatch("maps are not composable")
        comps = tuple(c.substitute(inner.components, inner.domain) for c in self.components)
        return PolyMap(inner.domain, self.codomain, comps)

    def __call__(self, *images: Poly) -> tuple[Poly, ...]:
        return tuple(c.substitute(images) for c in self.components)
