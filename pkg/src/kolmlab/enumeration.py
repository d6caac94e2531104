"""Exhaustive enumeration of halting witnesses with caching and snapshots.

A witness is a program that halts consuming exactly its own bits (so the
recorded programs form a prefix-free set).  Enumeration order is frozen:
program length 3, 6, 9, ... up to the length budget L, lexicographic within
a length, each candidate run once with the full step budget S.  Witness
sets are monotone in (L, S), which the in-memory cache exploits by
filtering supersets instead of re-running sweeps.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from . import _backend
from ._isa import ISA_VERSION
from .errors import (
    ConfigError,
    DigestMismatchError,
    IsaVersionError,
    MalformedRecordError,
)
from .machine import MachineKind

HARD_LENGTH_CAP = 24

_SNAPSHOT_MAGIC = "kolmlab-witness-set v1"


def sweep_output_cap(L: int) -> int:
    """Output budget that no length-<=L program can reach (buffer doubling
    from e emissions over d doublings tops out below 2^(e+d))."""
    return 1 << max(1, L // 3)


@dataclass(frozen=True)
class Witness:
    program: str
    output: str
    k: int
    steps: int


@dataclass(frozen=True)
class WitnessSet:
    kind: MachineKind
    condition: str | None
    L: int
    S: int
    witnesses: tuple[Witness, ...]

    @cached_property
    def kraft_sum(self) -> Fraction:
        return sum(
            (Fraction(1, 2 ** len(w.program)) for w in self.witnesses),
            Fraction(0),
        )

    @cached_property
    def by_output(self) -> dict[str, Witness]:
        """First (= shortest, then lexicographically first) witness per output."""
        table: dict[str, Witness] = {}
        for w in self.witnesses:
            table.setdefault(w.output, w)
        return table

    def is_prefix_free(self) -> bool:
        programs = sorted(w.program for w in self.witnesses)
        for a, b in zip(programs, programs[1:]):
            if b.startswith(a):
                return False
        return True

    def restricted(self, L: int, S: int) -> "WitnessSet":
        if L > self.L or S > self.S:
            raise ValueError("can only restrict to smaller budgets")
        kept = tuple(
            w for w in self.witnesses if len(w.program) <= L and w.steps <= S
        )
        return WitnessSet(self.kind, self.condition, L, S, kept)


_memo: dict[tuple[MachineKind, str | None, int, int], WitnessSet] = {}


def clear_cache() -> None:
    _memo.clear()


def _check_budgets(L: int, S: int) -> None:
    if L > HARD_LENGTH_CAP:
        raise ConfigError(f"length budget {L} exceeds hard cap {HARD_LENGTH_CAP}")
    if S < 1:
        raise ConfigError("step budget must be >= 1")


def enumerate_witnesses(
    kind: MachineKind,
    condition: str | None,
    L: int,
    S: int,
    use_cache: bool = True,
) -> WitnessSet:
    """All halting witnesses with program length <= L and steps <= S."""
    _check_budgets(L, S)
    key = (kind, condition, L, S)
    if use_cache:
        hit = _memo.get(key)
        if hit is not None:
            return hit
        for (k2, c2, L2, S2), ws in _memo.items():
            if k2 is kind and c2 == condition and L2 >= L and S2 >= S:
                sub = ws.restricted(L, S)
                _memo[key] = sub
                return sub
    cond_b = condition.encode("ascii") if condition is not None else None
    cap = sweep_output_cap(L)
    found: list[Witness] = []
    for nbits in range(3, L + 1, 3):
        for prog_int, out, k, steps in _backend.sweep_halting(
            kind.value, nbits, cond_b, S, cap
        ):
            found.append(
                Witness(format(prog_int, f"0{nbits}b"), out.decode("ascii"), k, steps)
            )
    ws = WitnessSet(kind, condition, L, S, tuple(found))
    if use_cache:
        _memo[key] = ws
    return ws


# ---------------------------------------------------------------------------
# Snapshots: line-delimited text with an embedded digest and ISA version.
# ---------------------------------------------------------------------------


def _encode_bits(bits: str) -> str:
    """Length-prefixed hex of a bit string ('' -> '0:')."""
    if bits == "":
        return "0:"
    return f"{len(bits)}:{int(bits, 2):0{(len(bits) + 3) // 4}x}"


def _decode_bits(text: str) -> str:
    n_str, _, hexpart = text.partition(":")
    n = int(n_str)
    if n == 0:
        return ""
    return format(int(hexpart, 16), f"0{n}b")[-n:]


def _cond_field(condition: str | None) -> str:
    return "-" if condition is None else _encode_bits(condition)


def _witness_line(kind: MachineKind, condition: str | None, w: Witness) -> str:
    out = w.output if w.output else "-"
    return f"{kind.name} {_cond_field(condition)} {w.program} {out} {w.k} {w.steps}"


def save_witness_set(ws: WitnessSet, path) -> None:
    lines = [
        _SNAPSHOT_MAGIC,
        f"isa={ISA_VERSION} kind={ws.kind.name} condition={_cond_field(ws.condition)} "
        f"L={ws.L} S={ws.S} count={len(ws.witnesses)}",
    ]
    lines.extend(_witness_line(ws.kind, ws.condition, w) for w in ws.witnesses)
    digest = hashlib.sha256("\n".join(lines).encode("utf-8")).hexdigest()
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines))
        fh.write(f"\ndigest={digest}\n")


def load_witness_set(path) -> WitnessSet:
    with open(path, "r", encoding="utf-8") as fh:
        raw = fh.read().splitlines()
    if len(raw) < 3 or raw[0] != _SNAPSHOT_MAGIC:
        raise MalformedRecordError("not a witness-set snapshot")
    footer = raw[-1]
    if not footer.startswith("digest="):
        raise MalformedRecordError("missing digest footer")
    body = raw[:-1]
    digest = hashlib.sha256("\n".join(body).encode("utf-8")).hexdigest()
    if footer[len("digest=") :] != digest:
        raise DigestMismatchError("snapshot digest mismatch")
    meta = dict(item.split("=", 1) for item in raw[1].split())
    if meta.get("isa") != ISA_VERSION:
        raise IsaVersionError(
            f"snapshot was built with ISA {meta.get('isa')}, current is {ISA_VERSION}"
        )
    kind = MachineKind[meta["kind"]]
    condition = None if meta["condition"] == "-" else _decode_bits(meta["condition"])
    witnesses = []
    for line in raw[2:-1]:
        parts = line.split()
        if len(parts) != 6:
            raise MalformedRecordError(f"bad witness record: {line!r}")
        _, _, program, out, k, steps = parts
        witnesses.append(
            Witness(program, "" if out == "-" else out, int(k), int(steps))
        )
    if len(witnesses) != int(meta["count"]):
        raise MalformedRecordError("witness count does not match header")
    return WitnessSet(kind, condition, int(meta["L"]), int(meta["S"]), tuple(witnesses))
