"""JSON model files: schema, loading, dispatch and reports.

A model file is one JSON object with a ``kind`` and kind-specific payload.
Polynomials are strings in the expression grammar; rationals are strings
``"p/q"`` (plain integers are accepted too).  Algebra indices in bracket keys
are 1-based, matching printed witnesses.
"""

from __future__ import annotations

import hashlib
import json
import time
from dataclasses import dataclass, field, replace
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Any

import jsonschema

from pncalc import __version__
from pncalc.calculus import Bivector, EndoField, pn_verify, schouten_bivector
from pncalc.errors import (
    InputError,
    InvariantError,
    ParseError,
    PncalcError,
    PolySyntaxError,
    SchemaError,
    UnknownVariable,
)
from pncalc.expr import Chart, Poly
from pncalc.groupoid import DirectSumPN, build_trivial_groupoid, groupoid_violation, trivial_pn_verify
from pncalc.liealg import (
    AlgBivector,
    AlgEndo,
    LieAlgebra,
    RationalTensor,
    jacobi_sums,
    lambda_n_verify,
    lie_poisson_bivector,
    structure_table,
)
from pncalc.liegroup import PolyGroup, group_violation, right_invariant_pn_verify
from pncalc.oracle import SamplePlan, fd_schouten, randomized_identity_check
from pncalc.report import Check, StructureReport, zero_check

KINDS = ("manifold_pn", "lie_algebra", "lambda_n", "poly_group", "group_pn", "trivial_groupoid_pn")
FIXTURE_PREFIX = "fixture:"

# --- schema ---------------------------------------------------------------------------

_RATIONAL = {
    "oneOf": [
        {"type": "integer"},
        {"type": "string", "pattern": r"^\s*-?\d+(\s*/\s*[1-9]\d*)?\s*$"},
    ]
}
_NAMES = {"type": "array", "minItems": 1, "items": {"type": "string", "pattern": r"^[A-Za-z_][A-Za-z0-9_]*$"}}
_POLY = {"type": "string"}
_MATRIX = {"type": "array", "items": {"type": "array", "items": _RATIONAL}}
_POLY_MATRIX = {"type": "array", "items": {"type": "array", "items": _POLY}}
_BIVECTOR = {
    "type": "object",
    "description": "upper entries keyed 'a,b' by coordinate names",
    "additionalProperties": _POLY,
}
_ENDO = {"oneOf": [{"const": "identity"}, _POLY_MATRIX]}
_BRACKETS = {
    "type": "object",
    "description": "'i,j' (1-based) -> coefficients of [e_i, e_j] in e_1..e_d",
    "additionalProperties": {"type": "array", "items": _RATIONAL},
}
_ALGEBRA = {
    "type": "object",
    "required": ["dimension"],
    "properties": {"dimension": {"type": "integer", "minimum": 1}, "brackets": _BRACKETS},
    "additionalProperties": False,
}
_GROUP = {
    "type": "object",
    "required": ["mu", "inverse"],
    "properties": {
        "mu": {"type": "array", "minItems": 1, "items": _POLY},
        "inverse": {"type": "array", "minItems": 1, "items": _POLY},
    },
    "additionalProperties": False,
}
_ORACLE = {
    "type": "object",
    "properties": {
        "seed": {"type": "integer", "minimum": 0},
        "count": {"type": "integer", "minimum": 1},
        "low": _RATIONAL,
        "high": _RATIONAL,
        "fd_step": _RATIONAL,
        "tolerance": _RATIONAL,
    },
    "additionalProperties": False,
}


def _kind_schema(required: list[str], props: dict) -> dict:
    return {
        "type": "object",
        "required": ["kind", *required],
        "properties": {"kind": {"enum": list(KINDS)}, "description": {"type": "string"},
                       "oracle": _ORACLE, **props},
        "additionalProperties": False,
    }


SCHEMAS: dict[str, dict] = {
    "manifold_pn": _kind_schema(["chart", "bivector", "endomorphism"], {
        "chart": _NAMES, "bivector": _BIVECTOR, "endomorphism": _ENDO}),
    "lie_algebra": _kind_schema(["algebra"], {"algebra": _ALGEBRA}),
    "lambda_n": _kind_schema(["algebra", "lambda", "n"], {
        "algebra": _ALGEBRA, "lambda": _MATRIX, "n": {"oneOf": [{"const": "identity"}, _MATRIX]}}),
    "poly_group": _kind_schema(["group"], {"group": _GROUP}),
    "group_pn": _kind_schema(["group", "lambda", "n"], {
        "group": _GROUP, "lambda": _MATRIX, "n": {"oneOf": [{"const": "identity"}, _MATRIX]}}),
    "trivial_groupoid_pn": _kind_schema(["base_chart", "group", "Pi_M", "N_M", "Lambda_G", "n_G"], {
        "base_chart": _NAMES, "group": _GROUP, "Pi_M": _BIVECTOR, "N_M": _ENDO,
        "Lambda_G": _MATRIX, "n_G": {"oneOf": [{"const": "identity"}, _MATRIX]},
        "symmetric": {"type": "boolean"}}),
}
_ENVELOPE = {"type": "object", "required": ["kind"], "properties": {"kind": {"enum": list(KINDS)}}}


def _validate(doc: Any) -> None:
    for schema in (_ENVELOPE, SCHEMAS.get(doc.get("kind")) if isinstance(doc, dict) else None):
        if schema is None:
            continue
        errors = sorted(jsonschema.Draft202012Validator(schema).iter_errors(doc),
                        key=lambda e: (list(e.absolute_path), e.message))
        if errors:
            e = errors[0]
            pointer = "".join(f"/{p}" for p in e.absolute_path)
            raise SchemaError(pointer, e.message)


# --- loading ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Model:
    """A validated model: parsed objects plus the raw document and its digest."""

    kind: str
    name: str
    digest: str
    document: dict
    objects: dict = field(default_factory=dict)


def fixture_path(name: str) -> Path:
    base = resources.files("pncalc") / "fixtures"
    path = Path(str(base / (name if name.endswith(".json") else name + ".json")))
    if not path.is_file():
        raise FileNotFoundError(f"no bundled fixture named {name!r}")
    return path


def fixture_names() -> list[str]:
    base = Path(str(resources.files("pncalc") / "fixtures"))
    return sorted(p.stem for p in base.glob("*.json"))


def _rational(value, where: str) -> Fraction:
    try:
        return Fraction(str(value).replace(" ", ""))
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(where, f"not a rational: {value!r}") from exc


def _poly(text: str, chart: Chart, where: str):
    try:
        return chart.poly(text)
    except PolySyntaxError as exc:
        raise ParseError(where, str(exc), exc.position) from exc
    except UnknownVariable as exc:
        raise ParseError(where, f"{exc} (chart is {chart})", exc.position) from exc


def _matrix(rows, d: int, where: str) -> list[list[Fraction]]:
    if len(rows) != d or any(len(r) != d for r in rows):
        raise InvariantError(f"{where}: expected a {d}x{d} matrix")
    return [[_rational(v, f"{where}/{i}/{j}") for j, v in enumerate(r)] for i, r in enumerate(rows)]


def _identity_or(value, d: int, where: str):
    if value == "identity":
        return [[Fraction(int(i == j)) for j in range(d)] for i in range(d)]
    return _matrix(value, d, where)


def _table(alg: dict, where: str):
    d = alg["dimension"]
    brackets = {}
    for key, coeffs in alg.get("brackets", {}).items():
        try:
            i, j = (int(t) - 1 for t in key.split(","))
        except ValueError as exc:
            raise ParseError(f"{where}/brackets/{key}", "keys must look like 'i,j'") from exc
        if not (0 <= i < d and 0 <= j < d):
            raise InvariantError(f"{where}/brackets/{key}: index outside 1..{d}")
        if len(coeffs) != d:
            raise InvariantError(f"{where}/brackets/{key}: expected {d} coefficients")
        brackets[(i, j)] = {k: _rational(v, f"{where}/brackets/{key}/{k}") for k, v in enumerate(coeffs)}
    try:
        return structure_table(d, brackets)
    except PncalcError as exc:
        raise InvariantError(f"{where}: {exc}") from exc


def _bivector(entries: dict, chart: Chart, where: str) -> Bivector:
    out = {}
    for key, text in entries.items():
        parts = [p.strip() for p in key.split(",")]
        if len(parts) != 2 or any(p not in chart.names for p in parts):
            raise ParseError(f"{where}/{key}", f"key must be two coordinates of {chart}")
        i, j = chart.index(parts[0]), chart.index(parts[1])
        if i == j:
            raise InvariantError(f"{where}/{key}: diagonal entry")
        if (min(i, j), max(i, j)) in {(min(a, b), max(a, b)) for a, b in out}:
            raise InvariantError(f"{where}/{key}: entry given twice")
        out[(i, j)] = _poly(text, chart, f"{where}/{key}")
    return Bivector(chart, out)


def _endo(value, chart: Chart, where: str) -> EndoField:
    if value == "identity":
        return EndoField.identity(chart)
    d = chart.dimension
    if len(value) != d or any(len(r) != d for r in value):
        raise InvariantError(f"{where}: expected a {d}x{d} matrix")
    return EndoField(chart, [[_poly(t, chart, f"{where}/{i}/{j}") for j, t in enumerate(r)]
                             for i, r in enumerate(value)])


def _chart(names, where: str) -> Chart:
    try:
        return Chart(names)
    except (ValueError, PncalcError) as exc:
        raise InvariantError(f"{where}: {exc}") from exc


def _group(doc: dict, where: str, verify: bool) -> PolyGroup:
    d = len(doc["mu"])
    chart = Chart.numbered("x", d)
    pair = Chart([f"x{i}" for i in range(1, d + 1)] + [f"y{i}" for i in range(1, d + 1)])
    if len(doc["inverse"]) != d:
        raise InvariantError(f"{where}/inverse: expected {d} components")
    mu = [_poly(t, pair, f"{where}/mu/{k}") for k, t in enumerate(doc["mu"])]
    inv = [_poly(t, chart, f"{where}/inverse/{k}") for k, t in enumerate(doc["inverse"])]
    G = PolyGroup(mu, inv, chart, verify=False)
    if verify:
        hit = group_violation(G)
        if hit is not None:
            raise InvariantError(f"{where}: {hit[0]} fails; witness term {hit[1]}")
    return G


def _algebra_objects(G_or_table, doc: dict, lam_key: str, n_key: str):
    g = G_or_table.algebra if isinstance(G_or_table, PolyGroup) else G_or_table
    d = g.dimension
    try:
        lam = AlgBivector(g, _matrix(doc[lam_key], d, f"/{lam_key}"))
    except PncalcError as exc:
        if isinstance(exc, InputError):
            raise
        raise InvariantError(f"/{lam_key}: {exc}") from exc
    n = AlgEndo(g, _identity_or(doc[n_key], d, f"/{n_key}"))
    return g, lam, n


def _parse(doc: dict) -> dict:
    kind = doc["kind"]
    if kind == "manifold_pn":
        chart = _chart(doc["chart"], "/chart")
        return {"P": _bivector(doc["bivector"], chart, "/bivector"),
                "N": _endo(doc["endomorphism"], chart, "/endomorphism")}
    if kind == "lie_algebra":
        return {"table": _table(doc["algebra"], "/algebra")}
    if kind == "lambda_n":
        table = _table(doc["algebra"], "/algebra")
        hit = RationalTensor(jacobi_sums(table)).first_nonzero()
        if hit is not None:
            raise InvariantError(f"/algebra: Jacobi sum {hit[0]} = {hit[1]}")
        g, lam, n = _algebra_objects(LieAlgebra(table), doc, "lambda", "n")
        return {"g": g, "Lambda": lam, "n": n}
    if kind == "poly_group":
        return {"G": _group(doc["group"], "/group", verify=False)}
    if kind == "group_pn":
        G = _group(doc["group"], "/group", verify=True)
        _, lam, n = _algebra_objects(G, doc, "lambda", "n")
        return {"G": G, "Lambda": lam, "n": n}
    if kind == "trivial_groupoid_pn":
        base = _chart(doc["base_chart"], "/base_chart")
        G = _group(doc["group"], "/group", verify=True)
        model = build_trivial_groupoid(base, G, verify=False)
        _, lam, n = _algebra_objects(model.group, doc, "Lambda_G", "n_G")
        data = DirectSumPN(_bivector(doc["Pi_M"], base, "/Pi_M"), _endo(doc["N_M"], base, "/N_M"), lam, n)
        return {"model": model, "data": data, "symmetric": bool(doc.get("symmetric", False))}
    raise AssertionError(kind)  # unreachable after schema validation


def load_model(path: str | Path) -> Model:
    """Read, validate and parse a model file (``fixture:NAME`` for bundled ones).

    Raises :class:`OSError`, :class:`SchemaError`, :class:`ParseError` or
    :class:`InvariantError`.
    """
    path = str(path)
    if path.startswith(FIXTURE_PREFIX):
        path = str(fixture_path(path[len(FIXTURE_PREFIX):]))
    raw = Path(path).read_bytes()
    try:
        doc = json.loads(raw.decode("utf-8")) if raw.strip() else None
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise SchemaError("", f"not a JSON document ({exc})") from exc
    if not isinstance(doc, dict):
        raise SchemaError("", "model must be a JSON object")
    _validate(doc)
    objects = _parse(doc)
    return Model(doc["kind"], Path(path).name, hashlib.sha256(raw).hexdigest(), doc, objects)


# --- running ---------------------------------------------------------------------------


def plan_for(model: Model, seed: int | None = None, count: int | None = None) -> SamplePlan:
    """Model-level oracle overrides, then explicit ``seed``/``count``."""
    opts = dict(model.document.get("oracle", {}))
    for key in ("low", "high", "fd_step", "tolerance"):
        if key in opts:
            opts[key] = _rational(opts[key], f"/oracle/{key}")
    if seed is not None:
        opts["seed"] = seed
    if count is not None:
        opts["count"] = count
    try:
        return SamplePlan(**opts)
    except ValueError as exc:
        raise InvariantError(f"/oracle: {exc}") from exc


def _lie_algebra_report(table, plan) -> StructureReport:
    jac = zero_check("jacobi", RationalTensor(jacobi_sums(table)), "Jacobi sum ")
    g = LieAlgebra(table, check=False)
    P = lie_poisson_bivector(g)
    sch = schouten_bivector(P, P)
    lp = zero_check("lie_poisson", sch, "[P,P]^")
    if plan is not None:
        lp = replace(lp, oracle=randomized_identity_check(
            sch, lambda pt: fd_schouten(P, P, pt, plan), plan))
    return StructureReport("Lie algebra verdicts", (jac, lp))


def _group_report(G: PolyGroup) -> StructureReport:
    hit = group_violation(G)
    checks = [Check("group_axioms", hit is None, None if hit is None else f"{hit[0]}: {hit[1]}")]
    notes = []
    if hit is None:
        table = G.algebra.structure_constants
        basis = Chart.numbered("e", G.dimension).vars()
        checks.append(zero_check("jacobi", RationalTensor(jacobi_sums(table)), "Jacobi sum "))
        d = G.dimension
        for i in range(d):
            for j in range(i + 1, d):
                coeffs = [table[k, i, j] for k in range(d)]
                if any(coeffs):
                    rhs = str(sum((c * v for c, v in zip(coeffs, basis)), Poly(basis[0].chart)))
                    notes.append(f"[e{i + 1}, e{j + 1}] = {rhs}")
    return StructureReport("Polynomial group verdicts", tuple(checks), tuple(notes))


def _groupoid_report(objs, plan) -> StructureReport:
    model = objs["model"]
    hit = groupoid_violation(model)
    axioms = Check("groupoid_axioms", hit is None, None if hit is None else f"{hit[0]}: {hit[1]}")
    rep = trivial_pn_verify(model, objs["data"], plan, symmetric=objs["symmetric"])
    return StructureReport(rep.title, (axioms,) + rep.checks, rep.notes)


def verify_model(model: Model, plan: SamplePlan | None) -> StructureReport:
    """Dispatch to the verifier for ``model.kind``; ``plan=None`` skips the oracle."""
    o = model.objects
    if model.kind == "manifold_pn":
        return pn_verify(o["P"], o["N"], plan)
    if model.kind == "lie_algebra":
        return _lie_algebra_report(o["table"], plan)
    if model.kind == "lambda_n":
        return lambda_n_verify(o["g"], o["Lambda"], o["n"])
    if model.kind == "poly_group":
        return _group_report(o["G"])
    if model.kind == "group_pn":
        return right_invariant_pn_verify(o["G"], o["Lambda"], o["n"], plan)
    if model.kind == "trivial_groupoid_pn":
        return _groupoid_report(o, plan)
    raise AssertionError(model.kind)


# --- reports --------------------------------------------------------------------------------


def _num(x) -> str:
    return repr(float(x))


def _check_dict(c: Check) -> dict:
    out = {"name": c.name, "verdict": c.verdict, "mandatory": c.mandatory, "witness": c.witness}
    if c.oracle is None:
        out["oracle"] = None
    else:
        o = c.oracle
        out["oracle"] = {"verdict": o.verdict, "max_deviation": _num(o.max_deviation),
                         "worst_point": list(o.worst_point) if o.worst_point else None,
                         "samples": o.count, "tolerance": _num(o.tolerance)}
    return out


@dataclass(frozen=True)
class Report:
    """Serializable verdict record (the JSON document, as a dict)."""

    data: dict

    @property
    def overall(self) -> str:
        return self.data["overall"]

    @property
    def passed(self) -> bool:
        return self.overall == "PASS"

    def to_json(self) -> bytes:
        return (json.dumps(self.data, sort_keys=True, indent=2, ensure_ascii=False) + "\n").encode()

    @classmethod
    def from_json(cls, blob: bytes | str) -> "Report":
        return cls(json.loads(blob))

    def to_text(self) -> bytes:
        d = self.data
        lines = [f"{d['title']}  [{d['model']['kind']}: {d['model']['name']}]"]
        for c in d["checks"]:
            tag = c["verdict"] if c["mandatory"] else f"{c['verdict']} (info)"
            line = f"  {c['name']}: {tag}"
            if c["verdict"] == "FAIL" and c["witness"]:
                line += f"  witness: {c['witness']}"
            if c["oracle"] is not None:
                agrees = "agrees" if c["oracle"]["verdict"] == "PASS" else "DISAGREES"
                line += f"  oracle {agrees} (max dev {float(c['oracle']['max_deviation']):.3g})"
            lines.append(line)
        for n in d["notes"]:
            lines.append(f"  note: {n}")
        if "timings" in d:
            lines.append(f"  time: {d['timings']['total_seconds']:.3f}s")
        lines.append(f"  OVERALL: {d['overall']}")
        return ("\n".join(lines) + "\n").encode()


def run_checks(model: Model, plan: SamplePlan | None, timings: bool = False) -> Report:
    """Verify ``model`` and package the verdicts.

    Wall-clock data is only included with ``timings=True`` so that the
    default JSON is byte-identical across runs.
    """
    t0 = time.perf_counter()
    rep = verify_model(model, plan)
    elapsed = time.perf_counter() - t0
    data = {
        "engine": {"name": "pncalc", "version": __version__},
        "model": {"name": model.name, "kind": model.kind, "sha256": model.digest},
        "plan": None if plan is None else {
            "seed": plan.seed, "count": plan.count, "low": str(plan.low), "high": str(plan.high),
            "fd_step": str(plan.fd_step), "tolerance": str(plan.tolerance)},
        "title": rep.title,
        "checks": [_check_dict(c) for c in rep.checks],
        "notes": list(rep.notes),
        "overall": "PASS" if rep.passed else "FAIL",
    }
    if timings:
        data["timings"] = {"total_seconds": elapsed}
    return Report(data)


def emit_report(report: Report, fmt: str = "json") -> bytes:
    if fmt == "json":
        return report.to_json()
    if fmt == "text":
        return report.to_text()
    raise ValueError(f"unknown format {fmt!r}")
