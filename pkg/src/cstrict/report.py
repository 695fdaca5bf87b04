"""Check results shared by every validator in the package.

A Report is a named bundle of Checks.  Verdicts are data, never exceptions:
validators return failing reports, they do not raise.  Malformed *input*
(unparseable files, dangling identifiers) is the one exception to that rule
and is signalled with MalformedInputError so the CLI can map it to exit 2.
"""

from __future__ import annotations

from dataclasses import dataclass, field


class MalformedInputError(Exception):
    """Input that cannot be interpreted at all (as opposed to a failed check)."""


class CertificationError(Exception):
    """A certificate a construction relies on failed to verify.

    Raised when a comparison that is supposed to be bijective is not, e.g.
    a representability witness with a non-unique preimage.  Gate runners
    convert these into failing verdicts with the message as witness.
    """


@dataclass
class Check:
    name: str
    passed: bool
    witness: str | None = None

    def to_dict(self) -> dict:
        out: dict = {"name": self.name, "verdict": "pass" if self.passed else "fail"}
        if self.witness is not None:
            out["witness"] = self.witness
        return out


@dataclass
class Report:
    name: str
    checks: list[Check] = field(default_factory=list)
    notes: dict = field(default_factory=dict)

    def add(self, name: str, passed: bool, witness: str | None = None) -> None:
        self.checks.append(Check(name, passed, witness if not passed else None))

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def first_witness(self) -> str | None:
        for c in self.checks:
            if not c.passed:
                return c.witness if c.witness is not None else c.name
        return None

    def to_dict(self) -> dict:
        out = {
            "name": self.name,
            "verdict": self.verdict,
            "checks": [c.to_dict() for c in self.checks],
        }
        if self.notes:
            out["notes"] = self.notes
        return out


def merge_reports(name: str, parts: list[Report]) -> Report:
    merged = Report(name)
    for part in parts:
        for check in part.checks:
            merged.checks.append(
                Check(f"{part.name}:{check.name}", check.passed, check.witness)
            )
        for key, value in part.notes.items():
            merged.notes[f"{part.name}:{key}"] = value
    return merged


def canon_key(value) -> str:
    """Deterministic total order key for nested ints, strings and tuples.

    Every enumeration in the package sorts by this key so that two runs of
    the same job produce byte-identical reports.
    """
    if isinstance(value, bool):
        return f"b{int(value)}"
    if isinstance(value, int):
        return f"i{value:+020d}"
    if isinstance(value, str):
        return "s" + value
    if isinstance(value, tuple):
        return "(" + ",".join(canon_key(v) for v in value) + ")"
    if value is None:
        return "n"
    return "r" + repr(value)
