"""Verdict objects returned by the verification operations.

A Verdict is an ordered tuple of named checks; it is truthy iff every check
passed. Failing checks carry a human-readable witness (index tuple, entry
value, ...) naming the violation.
"""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    witness: str = ""

    def as_dict(self) -> dict:
        out: dict = {"name": self.name, "passed": self.passed}
        if self.witness:
            out["witness"] = self.witness
        return out


@dataclass(frozen=True)
class Verdict:
    checks: tuple[Check, ...] = field(default_factory=tuple)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def __bool__(self) -> bool:
        return self.ok

    @property
    def first_failure(self) -> Check | None:
        for c in self.checks:
            if not c.passed:
                return c
        return None

    def as_dict(self) -> dict:
        return {"ok": self.ok, "checks": [c.as_dict() for c in self.checks]}

    def describe(self) -> str:
        if self.ok:
            return "pass (" + ", ".join(c.name for c in self.checks) + ")"
        f = self.first_failure
        assert f is not None
        msg = f"fail: {f.name}"
        if f.witness:
            msg += f" at {f.witness}"
        return msg


def passed(name: str) -> Check:
    return Check(name, True)


def failed(name: str, witness: str) -> Check:
    return Check(name, False, witness)
