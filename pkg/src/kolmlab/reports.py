"""Structured records for inequality checks.

A BoundReport states one relation ``lhs <= sum(rhs_terms)`` (or ``==`` for
identities).  Reports are either AssertedExact — the relation is a
machine-exact fact and a negative slack beyond the stated tolerance is a
failure — or MeasuredOnly, where the quantities are recorded for
inspection and nothing is asserted.

Values are exact rationals wherever the mathematics is rational; floats
appear only for logarithms and square roots.  The infinite sentinel from
the complexity estimators propagates through sums.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

Value = Union[int, float, Fraction]

ASSERTED_EXACT = "AssertedExact"
MEASURED_ONLY = "MeasuredOnly"


@dataclass(frozen=True)
class BoundReport:
    name: str
    lhs: Value
    rhs_terms: dict[str, Value]
    verdict: str
    budgets: dict[str, Value] = field(default_factory=dict)
    relation: str = "<="
    tolerance: Value = 0
    notes: str = ""

    @property
    def rhs(self) -> Value:
        total: Value = 0
        for v in self.rhs_terms.values():
            total = total + v
        return total

    @property
    def slack(self) -> Value:
        return self.rhs - self.lhs

    @property
    def passed(self) -> bool:
        if self.verdict != ASSERTED_EXACT:
            return True
        s = self.slack
        if isinstance(s, float) and math.isnan(s):
            return False
        if self.relation == "==":
            return abs(s) <= self.tolerance
        return s >= -self.tolerance


def encode_value(v: Value) -> str:
    """Reversible text form: rationals as fractions, floats via repr."""
    if isinstance(v, bool):
        raise TypeError("booleans are not report values")
    if isinstance(v, int):
        return str(v)
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    if v == math.inf:
        return "inf"
    if v == -math.inf:
        return "-inf"
    return f"~{v!r}"


def decode_value(text: str) -> Value:
    if text == "inf":
        return math.inf
    if text == "-inf":
        return -math.inf
    if text.startswith("~"):
        return float(text[1:])
    if "/" in text:
        num, den = text.split("/")
        return Fraction(int(num), int(den))
    return int(text)


def render_decimal(v: Value, digits: int = 12) -> str:
    """Tabular rendering: exact fractions stay exact, other numbers are
    shown with the given number of significant digits."""
    if isinstance(v, int):
        return str(v)
    if isinstance(v, Fraction):
        if v.denominator == 1:
            return str(v.numerator)
        return f"{v.numerator}/{v.denominator}"
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return f"{v:.{digits}g}"


def to_record(r: BoundReport) -> dict:
    return {
        "name": r.name,
        "lhs": encode_value(r.lhs),
        "rhs_terms": {k: encode_value(v) for k, v in r.rhs_terms.items()},
        "slack": encode_value(r.slack),
        "verdict": r.verdict,
        "relation": r.relation,
        "tolerance": encode_value(r.tolerance),
        "budgets": {k: encode_value(v) for k, v in r.budgets.items()},
        "passed": r.passed,
        "notes": r.notes,
    }


def from_record(rec: dict) -> BoundReport:
    return BoundReport(
        name=rec["name"],
        lhs=decode_value(rec["lhs"]),
        rhs_terms={k: decode_value(v) for k, v in rec["rhs_terms"].items()},
        verdict=rec["verdict"],
        budgets={k: decode_value(v) for k, v in rec["budgets"].items()},
        relation=rec["relation"],
        tolerance=decode_value(rec["tolerance"]),
        notes=rec["notes"],
    )
