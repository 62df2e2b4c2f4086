"""Verdict containers returned by every ``*_verify`` function."""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterable

from pncalc.oracle import CheckOutcome


@dataclass(frozen=True)
class Check:
    """One named verdict.

    ``witness`` carries the first nonzero component (printed) when the check
    fails.  Non-mandatory checks are reported but do not affect the overall
    verdict.
    """

    name: str
    passed: bool
    witness: str | None = None
    mandatory: bool = True
    oracle: CheckOutcome | None = None
    seconds: float = 0.0

    @property
    def verdict(self) -> str:
        return "PASS" if self.passed else "FAIL"

    @property
    def ok(self) -> bool:
        """Symbolic verdict holds and the paired oracle (if any) agrees."""
        return self.passed and (self.oracle is None or self.oracle.passed)


@dataclass(frozen=True)
class StructureReport:
    title: str
    checks: tuple[Check, ...] = ()
    notes: tuple[str, ...] = ()

    @property
    def passed(self) -> bool:
        return all(c.ok for c in self.checks if c.mandatory)

    @property
    def oracle_ok(self) -> bool:
        return all(c.oracle is None or c.oracle.passed for c in self.checks)

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def get(self, name: str) -> Check | None:
        try:
            return self[name]
        except KeyError:
            return None

    def names(self) -> list[str]:
        return [c.name for c in self.checks]

    def failures(self) -> list[Check]:
        return [c for c in self.checks if c.mandatory and not c.ok]

    def extend(self, checks: Iterable[Check] = (), notes: Iterable[str] = ()) -> "StructureReport":
        return replace(self, checks=self.checks + tuple(checks), notes=self.notes + tuple(notes))

    def nested(self, prefix: str, other: "StructureReport", mandatory: bool = True) -> "StructureReport":
        """Append ``other``'s checks under ``prefix.``."""
        moved = [
            replace(c, name=f"{prefix}.{c.name}", mandatory=c.mandatory and mandatory)
            for c in other.checks
        ]
        return self.extend(moved, other.notes)

    def summary(self) -> str:
        lines = [f"{self.title}"]
        for c in self.checks:
            tag = c.verdict if c.mandatory else f"{c.verdict} (info)"
            line = f"  {c.name}: {tag}"
            if not c.passed and c.witness:
                line += f"  witness: {c.witness}"
            if c.oracle is not None:
                agrees = "agrees" if c.oracle.passed else "DISAGREES"
                line += f"  oracle {agrees} (max dev {c.oracle.max_deviation:.3g})"
            lines.append(line)
        lines.append(f"  OVERALL: {'PASS' if self.passed else 'FAIL'}")
        return "\n".join(lines)

    def __str__(self) -> str:
        return self.summary()


def zero_check(name: str, tensor, label: str = "", mandatory: bool = True) -> Check:
    """PASS iff every component of ``tensor`` is the zero polynomial/rational."""
    hit = tensor.first_nonzero()
    if hit is None:
        return Check(name, True, mandatory=mandatory)
    index, value = hit
    return Check(name, False, witness=f"{label}{index} = {value}", mandatory=mandatory)


__all__ = ["Check", "StructureReport", "zero_check"]
