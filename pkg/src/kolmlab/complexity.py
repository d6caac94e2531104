"""Budgeted description-length and program-mass estimators.

All values are machine relative and budget bounded:

* ``k_upper(y)`` — length of the shortest prefix-machine program halting
  with output y (conditional variant runs the length-aware kind).
* ``km_upper(x)`` — shortest monotone-machine consumed prefix whose output
  starts with x.
* ``big_m(x)`` — exact rational program mass: the probability that the
  monotone machine fed fair coin flips emits output starting with x,
  restricted to consumed prefixes of length <= L within S steps.

When no witness exists inside the budgets the estimate carries an infinite
sentinel rather than any fallback value, so inequality reports can flag the
entry instead of silently overestimating.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import _backend
from .enumeration import (
    HARD_LENGTH_CAP,
    _check_budgets,
    enumerate_witnesses,
    sweep_output_cap,
)
from .machine import MachineKind

DEFAULT_L = 18
DEFAULT_S = 10_000

#: Sentinel for "no witness within budgets"; compares above every length.
UNREACHED = float("inf")


def zigzag(n: int) -> int:
    """Signed-to-natural bijection 0,-1,1,-2,2,... -> 0,1,2,3,4,..."""
    return 2 * n if n >= 0 else -2 * n - 1


def minimal_binary(m: int) -> str:
    """Bijective binary code of a natural: 0,1,2,3,... -> '', '0', '1', '00', ..."""
    if m < 0:
        raise ValueError("natural number expected")
    return bin(m + 1)[3:]


def int_code(n: int) -> str:
    """Canonical bit-string code of a signed integer (zig-zag, then bijective
    binary); used for length and deficiency arguments and registry codes."""
    return minimal_binary(zigzag(n))


@dataclass(frozen=True)
class ComplexityEstimate:
    value: int | float
    L: int
    S: int
    witness: str | None

    @property
    def is_finite(self) -> bool:
        return self.value != UNREACHED


@dataclass(frozen=True)
class MassEstimate:
    value: Fraction
    L: int
    S: int


def k_upper(
    y: str,
    condition: str | None = None,
    L: int = DEFAULT_L,
    S: int = DEFAULT_S,
) -> ComplexityEstimate:
    """Shortest halting program with output y.

    Unconditional estimates run the prefix kind; conditional estimates run
    the length-aware kind, whose condition tape carries an end sentinel the
    program can test.
    """
    kind = MachineKind.PREFIX if condition is None else MachineKind.COND_LENGTH_AWARE
    ws = enumerate_witnesses(kind, condition, L, S)
    w = ws.by_output.get(y)
    if w is None:
        return ComplexityEstimate(UNREACHED, L, S, None)
    return ComplexityEstimate(len(w.program), L, S, w.program)


def k_upper_int(n: int, L: int = DEFAULT_L, S: int = DEFAULT_S) -> ComplexityEstimate:
    """Description length of a signed integer via its canonical code."""
    return k_upper(int_code(n), None, L, S)


# ---------------------------------------------------------------------------
# Monotone program mass.
#
# A contribution (q, steps, program) at key x records that `program`
# (q bits, fully consumed within `steps`) is the minimal consumed prefix
# whose output first covers x at its final opcode.  For any sub-budget
# (L' <= L, S' <= S) the valid contributions are exactly those with
# q <= L' and steps <= S', so one table serves all smaller budgets.
# ---------------------------------------------------------------------------

_mass_tables: dict[tuple[int, int], dict[str, list[tuple[int, int, int]]]] = {}


def _build_mass_table(L: int, S: int) -> dict[str, list[tuple[int, int, int]]]:
    table: dict[str, list[tuple[int, int, int]]] = {}
    cap = sweep_output_cap(L)
    for nbits in range(3, L + 1, 3):
        for prog_int, prev, out, steps in _backend.sweep_monotone_mass(nbits, S, cap):
            text = out.decode("ascii")
            for m in range(prev + 1, len(text) + 1):
                table.setdefault(text[:m], []).append((nbits, steps, prog_int))
    return table


def _mass_table(L: int, S: int) -> dict[str, list[tuple[int, int, int]]]:
    _check_budgets(L, S)
    hit = _mass_tables.get((L, S))
    if hit is not None:
        return hit
    for (L2, S2), table in _mass_tables.items():
        if L2 >= L and S2 >= S:
            return table
    table = _build_mass_table(L, S)
    _mass_tables[(L, S)] = table
    return table


def clear_mass_cache() -> None:
    _mass_tables.clear()


def big_m(x: str, L: int = DEFAULT_L, S: int = DEFAULT_S) -> MassEstimate:
    """Exact rational mass of monotone programs whose output covers x."""
    if x == "":
        return MassEstimate(Fraction(1), L, S)
    total = Fraction(0)
    for q, steps, _prog in _mass_table(L, S).get(x, ()):
        if q <= L and steps <= S:
            total += Fraction(1, 2**q)
    return MassEstimate(total, L, S)


def km_upper(x: str, L: int = DEFAULT_L, S: int = DEFAULT_S) -> ComplexityEstimate:
    """Shortest monotone consumed prefix whose output starts with x."""
    if x == "":
        return ComplexityEstimate(0, L, S, "")
    for q, steps, prog in _mass_table(L, S).get(x, ()):
        if q <= L and steps <= S:
            # Contributions are recorded in (length, program) order, so the
            # first admissible one is the minimum.
            return ComplexityEstimate(q, L, S, format(prog, f"0{q}b"))
    return ComplexityEstimate(UNREACHED, L, S, None)


__all__ = [
    "DEFAULT_L",
    "DEFAULT_S",
    "HARD_LENGTH_CAP",
    "UNREACHED",
    "ComplexityEstimate",
    "MassEstimate",
    "big_m",
    "clear_mass_cache",
    "int_code",
    "k_upper",
    "k_upper_int",
    "km_upper",
    "minimal_binary",
    "zigzag",
]
