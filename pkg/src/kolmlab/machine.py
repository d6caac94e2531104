"""Reference machine family: execution of binary programs under budgets.

Four machine kinds share one 3-bit opcode table (see ``_isa``):

* ``PREFIX`` — no condition tape; halting requires the HALT opcode, so the
  set of exactly-consumed halting programs is prefix free.
* ``MONOTONE`` — no condition tape, output only grows, and running out of
  program bits is a normal terminal outcome.
* ``TWICE_PREFIX`` — reads a condition tape symbol by symbol with no way to
  detect its end; reading past the supplied condition is CondExhausted.
* ``COND_LENGTH_AWARE`` — like TWICE_PREFIX plus the BRE opcode, which
  tests whether the condition cursor sits at the end sentinel.  This kind
  is strictly more powerful because programs can react to the condition
  length.

Runs are deterministic and depend only on the consumed prefixes of the
program and the condition.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from . import _backend
from ._isa import ISA_VERSION as ISA_VERSION  # re-export
from ._isa import (
    KIND_COND_LENGTH_AWARE,
    KIND_MONOTONE,
    KIND_PREFIX,
    KIND_TWICE_PREFIX,
    ST_ABORTED,
    ST_COND_EXHAUSTED,
    ST_HALTED,
    ST_OUTPUT_LIMIT,
    ST_PROGRAM_EXHAUSTED,
    ST_STEP_LIMIT,
)

KERNEL_BACKEND = _backend.BACKEND


class MachineKind(Enum):
    PREFIX = KIND_PREFIX
    MONOTONE = KIND_MONOTONE
    TWICE_PREFIX = KIND_TWICE_PREFIX
    COND_LENGTH_AWARE = KIND_COND_LENGTH_AWARE

    @property
    def has_condition(self) -> bool:
        return self in (MachineKind.TWICE_PREFIX, MachineKind.COND_LENGTH_AWARE)


class RunStatus(Enum):
    HALTED = ST_HALTED
    ABORTED = ST_ABORTED
    STEP_LIMIT = ST_STEP_LIMIT
    COND_EXHAUSTED = ST_COND_EXHAUSTED
    OUTPUT_LIMIT = ST_OUTPUT_LIMIT
    PROGRAM_EXHAUSTED = ST_PROGRAM_EXHAUSTED


@dataclass(frozen=True)
class Budget:
    """Execution budget; both limits are strictly positive."""

    max_steps: int
    max_output: int

    def __post_init__(self) -> None:
        if self.max_steps < 1 or self.max_output < 1:
            raise ValueError("budget limits must be strictly positive")


@dataclass(frozen=True)
class RunOutcome:
    status: RunStatus
    output: str
    consumed_program: int
    consumed_condition: int
    steps: int

    @property
    def halted(self) -> bool:
        return self.status is RunStatus.HALTED


def _check_bits(s: str, what: str) -> None:
    if s.strip("01") != "":
        raise ValueError(f"{what} must be a string over 0/1, got {s!r}")


def run(
    kind: MachineKind,
    program: str,
    condition: str | None,
    budget: Budget,
) -> RunOutcome:
    """Execute `program` on the given machine kind.

    `condition` must be supplied exactly for the two condition-reading
    kinds (the empty string is a valid condition).
    """
    _check_bits(program, "program")
    if kind.has_condition:
        if condition is None:
            raise ValueError(f"{kind.name} requires a condition (may be empty)")
        _check_bits(condition, "condition")
        cond_b = condition.encode("ascii")
    else:
        if condition is not None:
            raise ValueError(f"{kind.name} does not take a condition")
        cond_b = None
    status, out, consumed, k, steps = _backend.run_bits(
        kind.value, program.encode("ascii"), cond_b, budget.max_steps, budget.max_output
    )
    return RunOutcome(RunStatus(status), out.decode("ascii"), consumed, k, steps)


def minimal_consumed_prefix(tape: str, target: str, budget: Budget) -> int | None:
    """Least number of tape bits the monotone machine has consumed at the
    first moment its output starts with `target`; None if the run never
    reaches that within the budget.

    Distinct tapes sharing the returned prefix behave identically up to
    that point, so the value is a property of the prefix alone.
    """
    _check_bits(tape, "tape")
    _check_bits(target, "target")
    if target == "":
        raise ValueError("target must be nonempty")
    return _backend.first_cover_consumed(
        tape.encode("ascii"), target.encode("ascii"), budget.max_steps, budget.max_output
    )
