"""Small shared vocabulary: the third verdict value and certificate records."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Dict


class _Undecided:
    """Third truth value.  Deliberately not usable in boolean context."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "UNDECIDED"

    def __bool__(self):
        raise TypeError("UNDECIDED has no truth value; compare with `is UNDECIDED`")

    def __reduce__(self):
        return (_Undecided, ())


UNDECIDED = _Undecided()


def tri_and(values):
    """Three-valued conjunction."""
    values = list(values)
    if any(v is False for v in values):
        return False
    if any(v is UNDECIDED for v in values):
        return UNDECIDED
    return True


def tri_text(v) -> str:
    return "undecided" if v is UNDECIDED else ("true" if v else "false")


@dataclass
class CheckRecord:
    """One line of a certificate: what was checked, the outcome, the evidence."""

    name: str
    passed: Any
    detail: Dict[str, Any] = field(default_factory=dict)

    def as_dict(self):
        passed = self.passed
        if passed is UNDECIDED:
            passed = "undecided"
        return {"name": self.name, "passed": passed, "detail": self.detail}
