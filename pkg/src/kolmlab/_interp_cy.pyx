# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled interpreter kernel.

Behavioural twin of ``_interp_py``; see that module for the frozen opcode
semantics and budget-check order.  Any change here must be mirrored there
(the test suite cross-checks the two backends on random inputs).
"""

from libc.stdlib cimport free, malloc
from libc.string cimport memcpy

BACKEND_NAME = "compiled"

cdef enum:
    KIND_PREFIX = 0
    KIND_MONOTONE = 1
    KIND_TWICE_PREFIX = 2
    KIND_COND_LENGTH_AWARE = 3

cdef enum:
    OP_HALT = 0
    OP_EMIT0 = 1
    OP_EMIT1 = 2
    OP_RDC = 3
    OP_DUP = 4
    OP_SKC = 5
    OP_BRE = 6
    OP_ABT = 7

cdef enum:
    ST_HALTED = 0
    ST_ABORTED = 1
    ST_STEP_LIMIT = 2
    ST_COND_EXHAUSTED = 3
    ST_OUTPUT_LIMIT = 4
    ST_PROGRAM_EXHAUSTED = 5


cdef struct ExecResult:
    int status
    Py_ssize_t ops_consumed
    Py_ssize_t cond_consumed
    long long steps
    Py_ssize_t outlen
    Py_ssize_t prev_outlen


cdef void _exec_core(int kind, const unsigned char* ops, Py_ssize_t n,
                     const unsigned char* cond, Py_ssize_t cond_len,
                     long long max_steps, Py_ssize_t max_output,
                     unsigned char* buf, ExecResult* r) nogil:
    cdef Py_ssize_t i = 0
    cdef Py_ssize_t j = 0
    cdef Py_ssize_t outlen = 0
    cdef Py_ssize_t prev_outlen = 0
    cdef long long steps = 0
    cdef long long cost
    cdef unsigned char op
    cdef bint cond_ok = kind >= KIND_TWICE_PREFIX
    while True:
        if i >= n:
            r.status = ST_PROGRAM_EXHAUSTED
            break
        op = ops[i]
        i += 1
        prev_outlen = outlen
        if op == OP_HALT:
            if steps + 1 > max_steps:
                r.status = ST_STEP_LIMIT
                break
            steps += 1
            r.status = ST_HALTED
            break
        elif op == OP_EMIT0 or op == OP_EMIT1:
            if steps + 1 > max_steps:
                r.status = ST_STEP_LIMIT
                break
            if outlen + 1 > max_output:
                r.status = ST_OUTPUT_LIMIT
                break
            steps += 1
            buf[outlen] = 48 + (op == OP_EMIT1)
            outlen += 1
        elif op == OP_RDC:
            if not cond_ok:
                r.status = ST_ABORTED
                break
            if steps + 1 > max_steps:
                r.status = ST_STEP_LIMIT
                break
            if j >= cond_len:
                r.status = ST_COND_EXHAUSTED
                break
            if outlen + 1 > max_output:
                r.status = ST_OUTPUT_LIMIT
                break
            steps += 1
            buf[outlen] = cond[j]
            outlen += 1
            j += 1
        elif op == OP_DUP:
            cost = outlen if outlen > 0 else 1
            if steps + cost > max_steps:
                r.status = ST_STEP_LIMIT
                break
            if outlen > 0 and 2 * outlen > max_output:
                r.status = ST_OUTPUT_LIMIT
                break
            steps += cost
            if outlen > 0:
                memcpy(buf + outlen, buf, outlen)
                outlen += outlen
        elif op == OP_SKC:
            if not cond_ok:
                r.status = ST_ABORTED
                break
            if steps + 1 > max_steps:
                r.status = ST_STEP_LIMIT
                break
            if j >= cond_len:
                r.status = ST_COND_EXHAUSTED
                break
            steps += 1
            j += 1
        elif op == OP_BRE:
            if kind != KIND_COND_LENGTH_AWARE:
                r.status = ST_ABORTED
                break
            if steps + 1 > max_steps:
                r.status = ST_STEP_LIMIT
                break
            steps += 1
            if j == cond_len:
                if i >= n:
                    r.status = ST_PROGRAM_EXHAUSTED
                    break
                i += 1
        else:
            r.status = ST_ABORTED
            break
    r.ops_consumed = i
    r.cond_consumed = j
    r.steps = steps
    r.outlen = outlen
    r.prev_outlen = prev_outlen


def run_bits(int kind, bytes prog, cond, long long max_steps, Py_ssize_t max_output):
    """Execute an ASCII-bits program; same contract as the Python backend."""
    cdef bytes cond_b = cond if cond is not None else b""
    cdef const unsigned char* prog_p = prog
    cdef Py_ssize_t nops = len(prog) // 3
    cdef Py_ssize_t t
    cdef unsigned char* ops = <unsigned char*> malloc(nops if nops > 0 else 1)
    cdef unsigned char* buf = <unsigned char*> malloc(max_output if max_output > 0 else 1)
    cdef ExecResult r
    if ops == NULL or buf == NULL:
        free(ops)
        free(buf)
        raise MemoryError()
    try:
        for t in range(nops):
            ops[t] = (4 * (prog_p[3 * t] - 48)
                      + 2 * (prog_p[3 * t + 1] - 48)
                      + (prog_p[3 * t + 2] - 48))
        _exec_core(kind, ops, nops, <const unsigned char*> cond_b, len(cond_b),
                   max_steps, max_output, buf, &r)
        return (r.status, buf[:r.outlen], 3 * r.ops_consumed, r.cond_consumed, r.steps)
    finally:
        free(ops)
        free(buf)


def sweep_halting(int kind, int nbits, cond, long long max_steps, Py_ssize_t max_output):
    """Fully-consuming halting runs among all programs of exactly nbits bits."""
    cdef bytes cond_b = cond if cond is not None else b""
    cdef const unsigned char* cond_p = cond_b
    cdef Py_ssize_t cond_len = len(cond_b)
    cdef Py_ssize_t nops = nbits // 3
    cdef list found = []
    if nops == 0 or nbits % 3 != 0:
        return found
    if nops > 32:
        raise ValueError("sweep width exceeds kernel limit")
    cdef unsigned long long prog, total = (<unsigned long long> 1) << nbits
    cdef unsigned char ops[32]
    cdef Py_ssize_t t
    cdef ExecResult r
    cdef unsigned char* buf = <unsigned char*> malloc(max_output if max_output > 0 else 1)
    if buf == NULL:
        raise MemoryError()
    try:
        for prog in range(total):
            for t in range(nops):
                ops[t] = (prog >> (3 * (nops - 1 - t))) & 7
            _exec_core(kind, ops, nops, cond_p, cond_len, max_steps, max_output, buf, &r)
            if r.status == ST_HALTED and r.ops_consumed == nops:
                found.append((prog, buf[:r.outlen], r.cond_consumed, r.steps))
        return found
    finally:
        free(buf)


def sweep_monotone_mass(int nbits, long long max_steps, Py_ssize_t max_output):
    """Fully-consuming monotone runs that emitted output at the final opcode."""
    cdef Py_ssize_t nops = nbits // 3
    cdef list found = []
    if nops == 0 or nbits % 3 != 0:
        return found
    if nops > 32:
        raise ValueError("sweep width exceeds kernel limit")
    cdef unsigned long long prog, total = (<unsigned long long> 1) << nbits
    cdef unsigned char ops[32]
    cdef Py_ssize_t t
    cdef ExecResult r
    cdef unsigned char* buf = <unsigned char*> malloc(max_output if max_output > 0 else 1)
    if buf == NULL:
        raise MemoryError()
    try:
        for prog in range(total):
            for t in range(nops):
                ops[t] = (prog >> (3 * (nops - 1 - t))) & 7
            _exec_core(KIND_MONOTONE, ops, nops, NULL, 0, max_steps, max_output, buf, &r)
            if (r.status == ST_PROGRAM_EXHAUSTED and r.ops_consumed == nops
                    and r.outlen > r.prev_outlen):
                found.append((prog, r.prev_outlen, buf[:r.outlen], r.steps))
        return found
    finally:
        free(buf)
