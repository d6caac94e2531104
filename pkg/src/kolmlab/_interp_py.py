"""Pure-Python interpreter kernel.

This is the reference implementation of the machine semantics; the compiled
twin in ``_interp_cy`` must agree with it bit for bit (there is an
equivalence test).  Keep the two in lockstep, including the *order* of
budget checks inside each opcode, which is part of the frozen semantics:

* HALT/EMIT: step limit, then output limit.
* RDC: kind, step limit, condition exhaustion, output limit.
* SKC: kind, step limit, condition exhaustion.
* DUP: step limit (cost = buffer length, 1 if empty), then output limit.
* BRE: kind, step limit, then the sentinel test; a skipped opcode is
  consumed (its bits count) but not executed.
* ABT and kind-illegal opcodes abort immediately without step accounting.

Programs and conditions are ASCII bytes of ``0``/``1``; sweep entry points
take the program as an integer (MSB-first) plus a bit count.
"""

from __future__ import annotations

from ._isa import (
    KIND_COND_LENGTH_AWARE,
    KIND_MONOTONE,
    KIND_PREFIX,
    KIND_TWICE_PREFIX,
    OP_ABT,
    OP_BRE,
    OP_DUP,
    OP_EMIT0,
    OP_EMIT1,
    OP_HALT,
    OP_RDC,
    OP_SKC,
    ST_ABORTED,
    ST_COND_EXHAUSTED,
    ST_HALTED,
    ST_OUTPUT_LIMIT,
    ST_PROGRAM_EXHAUSTED,
    ST_STEP_LIMIT,
)

BACKEND_NAME = "python"

_ZERO = ord("0")


def _exec_ops(kind, ops, cond, max_steps, max_output):
    """Run a sequence of opcodes.

    Returns (status, buf, ops_consumed, cond_consumed, steps, prev_outlen)
    where prev_outlen is the buffer length just before the last fetched
    opcode was executed (used by the mass sweep to detect emissions at the
    final opcode).
    """
    n = len(ops)
    cond_len = len(cond) if cond is not None else 0
    buf = bytearray()
    i = 0
    j = 0
    steps = 0
    prev_outlen = 0
    cond_ok = kind >= KIND_TWICE_PREFIX
    while True:
        if i >= n:
            return (ST_PROGRAM_EXHAUSTED, buf, i, j, steps, prev_outlen)
        op = ops[i]
        i += 1
        prev_outlen = len(buf)
        if op == OP_HALT:
            if steps + 1 > max_steps:
                return (ST_STEP_LIMIT, buf, i, j, steps, prev_outlen)
            steps += 1
            return (ST_HALTED, buf, i, j, steps, prev_outlen)
        elif op == OP_EMIT0 or op == OP_EMIT1:
            if steps + 1 > max_steps:
                return (ST_STEP_LIMIT, buf, i, j, steps, prev_outlen)
            if len(buf) + 1 > max_output:
                return (ST_OUTPUT_LIMIT, buf, i, j, steps, prev_outlen)
            steps += 1
            buf.append(_ZERO + (op == OP_EMIT1))
        elif op == OP_RDC:
            if not cond_ok:
                return (ST_ABORTED, buf, i, j, steps, prev_outlen)
            if steps + 1 > max_steps:
                return (ST_STEP_LIMIT, buf, i, j, steps, prev_outlen)
            if j >= cond_len:
                return (ST_COND_EXHAUSTED, buf, i, j, steps, prev_outlen)
            if len(buf) + 1 > max_output:
                return (ST_OUTPUT_LIMIT, buf, i, j, steps, prev_outlen)
            steps += 1
            buf.append(cond[j])
            j += 1
        elif op == OP_DUP:
            cost = len(buf) or 1
            if steps + cost > max_steps:
                return (ST_STEP_LIMIT, buf, i, j, steps, prev_outlen)
            if buf and 2 * len(buf) > max_output:
                return (ST_OUTPUT_LIMIT, buf, i, j, steps, prev_outlen)
            steps += cost
            buf.extend(buf)
        elif op == OP_SKC:
            if not cond_ok:
                return (ST_ABORTED, buf, i, j, steps, prev_outlen)
            if steps + 1 > max_steps:
                return (ST_STEP_LIMIT, buf, i, j, steps, prev_outlen)
            if j >= cond_len:
                return (ST_COND_EXHAUSTED, buf, i, j, steps, prev_outlen)
            steps += 1
            j += 1
        elif op == OP_BRE:
            if kind != KIND_COND_LENGTH_AWARE:
                return (ST_ABORTED, buf, i, j, steps, prev_outlen)
            if steps + 1 > max_steps:
                return (ST_STEP_LIMIT, buf, i, j, steps, prev_outlen)
            steps += 1
            if j == cond_len:
                if i >= n:
                    return (ST_PROGRAM_EXHAUSTED, buf, i, j, steps, prev_outlen)
                i += 1
        else:  # OP_ABT
            return (ST_ABORTED, buf, i, j, steps, prev_outlen)


def _bits_to_ops(prog):
    """Full 3-bit opcode groups of an ASCII bit string; trailing bits drop."""
    nops = len(prog) // 3
    return [
        4 * (prog[3 * t] - _ZERO)
        + 2 * (prog[3 * t + 1] - _ZERO)
        + (prog[3 * t + 2] - _ZERO)
        for t in range(nops)
    ]


def run_bits(kind, prog, cond, max_steps, max_output):
    """Execute a program given as ASCII bits.

    Returns (status, output bytes, consumed_program_bits, consumed_condition,
    steps).
    """
    status, buf, nops, j, steps, _ = _exec_ops(
        kind, _bits_to_ops(prog), cond, max_steps, max_output
    )
    return (status, bytes(buf), 3 * nops, j, steps)


def _int_ops(prog_int, nops):
    shift = 3 * (nops - 1)
    ops = []
    for _ in range(nops):
        ops.append((prog_int >> shift) & 7)
        shift -= 3
    return ops


def sweep_halting(kind, nbits, cond, max_steps, max_output):
    """All fully-consuming halting runs among programs of exactly nbits bits.

    Returns [(program_int, output bytes, consumed_condition, steps)] in
    ascending (= lexicographic) program order.
    """
    nops = nbits // 3
    if nops == 0 or nbits % 3 != 0:
        return []
    out = []
    for prog_int in range(1 << nbits):
        status, buf, consumed, j, steps, _ = _exec_ops(
            kind, _int_ops(prog_int, nops), cond, max_steps, max_output
        )
        if status == ST_HALTED and consumed == nops:
            out.append((prog_int, bytes(buf), j, steps))
    return out


def sweep_monotone_mass(nbits, max_steps, max_output):
    """Fully-consuming monotone runs whose final opcode emitted output.

    Returns [(program_int, outlen_before_final_opcode, output bytes, steps)]
    in ascending program order.  These are exactly the runs whose program is
    the minimal consumed prefix for every output prefix first reached at
    the final opcode.
    """
    nops = nbits // 3
    if nops == 0 or nbits % 3 != 0:
        return []
    out = []
    for prog_int in range(1 << nbits):
        status, buf, consumed, _j, steps, prev = _exec_ops(
            KIND_MONOTONE, _int_ops(prog_int, nops), None, max_steps, max_output
        )
        if status == ST_PROGRAM_EXHAUSTED and consumed == nops and len(buf) > prev:
            out.append((prog_int, prev, bytes(buf), steps))
    return out


def first_cover_consumed(tape, target, max_steps, max_output):
    """Bits consumed by the monotone machine on `tape` when its output first
    starts with `target`, or None if that never happens within budgets.

    Independent per-tape route: steps the interpreter and checks coverage
    after every opcode instead of aggregating sweep emissions.
    """
    m = len(target)
    if m == 0:
        return 0
    ops = _bits_to_ops(tape)
    n = len(ops)
    buf = bytearray()
    i = 0
    steps = 0
    while i < n:
        op = ops[i]
        i += 1
        if op == OP_HALT:
            return None
        elif op == OP_EMIT0 or op == OP_EMIT1:
            if steps + 1 > max_steps or len(buf) + 1 > max_output:
                return None
            steps += 1
            buf.append(_ZERO + (op == OP_EMIT1))
        elif op == OP_DUP:
            cost = len(buf) or 1
            if steps + cost > max_steps:
                return None
            if buf and 2 * len(buf) > max_output:
                return None
            steps += cost
            buf.extend(buf)
        elif op in (OP_RDC, OP_SKC, OP_BRE, OP_ABT):
            return None
        if len(buf) >= m:
            return 3 * i if buf[:m] == target else None
    return None
