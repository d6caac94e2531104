"""Instruction set of the reference machine family.

Programs are finite bit strings consumed strictly left to right in 3-bit
opcode groups, most significant bit first, with no lookahead.  Four machine
kinds share the table and differ only in which opcodes are legal:

======  ====  ==========================================================
bits    name  effect
======  ====  ==========================================================
000     HALT  stop, run is accepted
001     EMIT0 append 0 to the output buffer
010     EMIT1 append 1 to the output buffer
011     RDC   consume the next condition symbol and append it
100     DUP   double the output buffer (b <- bb); no-op on empty buffer
101     SKC   consume the next condition symbol and discard it
110     BRE   length-aware kinds only: if the condition cursor sits at
              the end sentinel, consume and skip the next opcode
111     ABT   abort
======  ====  ==========================================================

Every opcode costs one step except DUP, which costs the current buffer
length (one when the buffer is empty).  Condition opcodes abort on the
kinds that have no condition tape; BRE aborts everywhere except the
length-aware kind.  Reading a condition symbol past the supplied condition
is the CondExhausted outcome.

The table above is normative: complexity values produced by this package
are relative to it, and snapshot files embed ISA_VERSION so that caches
from a different table are rejected.
"""

# Machine kinds.
KIND_PREFIX = 0
KIND_MONOTONE = 1
KIND_TWICE_PREFIX = 2
KIND_COND_LENGTH_AWARE = 3

# Opcodes (value = the 3 bits, MSB first).
OP_HALT = 0
OP_EMIT0 = 1
OP_EMIT1 = 2
OP_RDC = 3
OP_DUP = 4
OP_SKC = 5
OP_BRE = 6
OP_ABT = 7

# Run statuses.
ST_HALTED = 0
ST_ABORTED = 1
ST_STEP_LIMIT = 2
ST_COND_EXHAUSTED = 3
ST_OUTPUT_LIMIT = 4
ST_PROGRAM_EXHAUSTED = 5

OPCODE_BITS = 3

# Bumped whenever opcode semantics, costs, or check order change.
ISA_VERSION = "rm3b.1"
