"""Computable measure zoo, registry with binary index codes, and the
dominant mixture predictor.

Every measure evaluates exactly (Fraction arithmetic throughout) over a
finite alphabet of size m <= 16.  Complexity-facing paths see measures
through their block-encoded binary view: symbols are written as
ceil(log2 m)-bit blocks, which turns a proper measure over the alphabet
into a proper measure over bits.

The predictor mixes the monotone-machine program mass with the registry:

    xi(x) = 1/2 * big_m(x) + 1/2 * sum_nu 2^(-k_upper(code(nu))) * nu(x)

where code(nu) is the registry index code.  This keeps an exact, checkable
dominance constant: xi(x) >= 1/2 * 2^(-k_upper(code(mu))) * mu(x) for every
registered mu.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .complexity import DEFAULT_L, DEFAULT_S, big_m, int_code, k_upper
from .errors import ConfigError, NullEventError
from .machine import Budget, MachineKind, RunStatus, run

Symbols = tuple[int, ...]

_GENERATOR_BUDGET = Budget(max_steps=1 << 18, max_output=1 << 16)


def block_width(alphabet_size: int) -> int:
    if not 2 <= alphabet_size <= 16:
        raise ConfigError("alphabet size must be between 2 and 16")
    return (alphabet_size - 1).bit_length()


def encode_symbols(symbols: Sequence[int], alphabet_size: int) -> str:
    """Fixed-width block encoding of a symbol string into bits."""
    width = block_width(alphabet_size)
    return "".join(format(s, f"0{width}b") for s in symbols)


def as_symbols(x: Sequence[int] | str) -> Symbols:
    if isinstance(x, str):
        return tuple(int(c) for c in x)
    return tuple(x)


class Measure:
    """A computable measure over strings from a finite alphabet."""

    alphabet_size: int

    def prob(self, x: Sequence[int] | str) -> Fraction:
        raise NotImplementedError

    def spec_key(self) -> tuple:
        raise NotImplementedError

    def to_config(self) -> dict:
        raise NotImplementedError

    # Shared machinery -----------------------------------------------------

    def conditional(self, x: Sequence[int] | str, given: Sequence[int] | str) -> Fraction:
        g = as_symbols(given)
        pg = self.prob(g)
        if pg == 0:
            raise NullEventError(f"conditioning on null event {given!r}")
        return self.prob(g + as_symbols(x)) / pg

    def next_symbol_dist(self, given: Sequence[int] | str) -> tuple[Fraction, ...]:
        g = as_symbols(given)
        pg = self.prob(g)
        if pg == 0:
            raise NullEventError(f"conditioning on null event {given!r}")
        return tuple(self.prob(g + (a,)) / pg for a in range(self.alphabet_size))

    def bit_prob(self, bits: str) -> Fraction:
        """Probability of the bit string under the block-encoded view."""
        width = block_width(self.alphabet_size)
        if width == 1:
            return self.prob(bits)
        full, rem = divmod(len(bits), width)
        symbols = []
        for i in range(full):
            v = int(bits[i * width : (i + 1) * width], 2)
            if v >= self.alphabet_size:
                return Fraction(0)
            symbols.append(v)
        head = tuple(symbols)
        if rem == 0:
            return self.prob(head)
        partial = bits[full * width :]
        total = Fraction(0)
        for a in range(self.alphabet_size):
            if format(a, f"0{width}b").startswith(partial):
                total += self.prob(head + (a,))
        return total

    def __eq__(self, other) -> bool:
        return isinstance(other, Measure) and self.spec_key() == other.spec_key()

    def __hash__(self) -> int:
        return hash(self.spec_key())


class IIDMeasure(Measure):
    def __init__(self, probs: Sequence[Fraction | int | str]):
        self.probs = tuple(Fraction(p) for p in probs)
        self.alphabet_size = len(self.probs)
        block_width(self.alphabet_size)
        if any(p < 0 for p in self.probs) or sum(self.probs) != 1:
            raise ConfigError("symbol probabilities must be nonnegative and sum to 1")
        self._zero_symbols = frozenset(s for s, p in enumerate(self.probs) if p == 0)

    def prob(self, x):
        result = Fraction(1)
        for s in as_symbols(x):
            result *= self.probs[s]
            if result == 0:
                return result
        return result

    def next_symbol_dist(self, given):
        if self._zero_symbols:
            for s in as_symbols(given):
                if s in self._zero_symbols:
                    raise NullEventError("conditioning on null event")
        return self.probs

    def spec_key(self):
        return ("iid", self.probs)

    def to_config(self):
        return {"variant": "iid", "probs": [str(p) for p in self.probs]}


class UniformMeasure(Measure):
    def __init__(self, alphabet_size: int = 2):
        block_width(alphabet_size)
        self.alphabet_size = alphabet_size

    def prob(self, x):
        return Fraction(1, self.alphabet_size ** len(as_symbols(x)))

    def next_symbol_dist(self, given):
        p = Fraction(1, self.alphabet_size)
        return tuple(p for _ in range(self.alphabet_size))

    def spec_key(self):
        return ("uniform", self.alphabet_size)

    def to_config(self):
        return {"variant": "uniform", "alphabet_size": self.alphabet_size}


class MarkovMeasure(Measure):
    """Finite-order chain; the table maps every context of length < order
    (warm-up) and every context of exactly `order` symbols to a probability
    vector over the alphabet."""

    def __init__(self, order: int, table: dict, alphabet_size: int = 2):
        if order < 0:
            raise ConfigError("order must be >= 0")
        block_width(alphabet_size)
        self.order = order
        self.alphabet_size = alphabet_size
        self.table = {
            tuple(ctx): tuple(Fraction(p) for p in row) for ctx, row in table.items()
        }
        contexts = [()]
        for length in range(1, order + 1):
            contexts.extend(self._all_contexts(length))
        for ctx in contexts:
            row = self.table.get(ctx)
            if row is None:
                raise ConfigError(f"missing transition row for context {ctx}")
            if len(row) != alphabet_size or any(p < 0 for p in row) or sum(row) != 1:
                raise ConfigError(f"bad transition row for context {ctx}")
        self._has_zero_rows = any(
            p == 0 for row in self.table.values() for p in row
        )

    def _all_contexts(self, length):
        out = [()]
        for _ in range(length):
            out = [c + (a,) for c in out for a in range(self.alphabet_size)]
        return out

    def prob(self, x):
        symbols = as_symbols(x)
        result = Fraction(1)
        for t, s in enumerate(symbols):
            ctx = symbols[max(0, t - self.order) : t]
            result *= self.table[ctx][s]
            if result == 0:
                return result
        return result

    def next_symbol_dist(self, given):
        symbols = as_symbols(given)
        if self._has_zero_rows and self.prob(symbols) == 0:
            raise NullEventError("conditioning on null event")
        t = len(symbols)
        return self.table[symbols[max(0, t - self.order) :]]

    def spec_key(self):
        return (
            "markov",
            self.order,
            self.alphabet_size,
            tuple(sorted(self.table.items())),
        )

    def to_config(self):
        return {
            "variant": "markov",
            "order": self.order,
            "alphabet_size": self.alphabet_size,
            "table": {
                ",".join(map(str, ctx)): [str(p) for p in row]
                for ctx, row in sorted(self.table.items())
            },
        }


class Lemma5Measure(Measure):
    """Deterministic binary measure concentrated on 0^l 1^infinity."""

    def __init__(self, l: int):
        if l < 0:
            raise ConfigError("l must be >= 0")
        self.l = l
        self.alphabet_size = 2

    def prob(self, x):
        symbols = as_symbols(x)
        for t, s in enumerate(symbols):
            if s != (0 if t < self.l else 1):
                return Fraction(0)
        return Fraction(1)

    def next_symbol_dist(self, given):
        symbols = as_symbols(given)
        if self.prob(symbols) == 0:
            raise NullEventError("conditioning on null event")
        forced = 0 if len(symbols) < self.l else 1
        return (Fraction(1 - forced), Fraction(forced))

    def spec_key(self):
        return ("lemma5", self.l)

    def to_config(self):
        return {"variant": "lemma5", "l": self.l}


class DeterministicMeasure(Measure):
    """Measure concentrated on the sequence emitted by a monotone-machine
    generator program.

    The generator is run once at construction with a large private budget.
    Its emitted bits are chunked into blocks of ceil(log2 m) bits; beyond
    the emitted prefix the defining sequence continues with symbol 0, so
    the measure is proper at every depth.  Choose generators that emit
    enough symbols for the depths you evaluate (the DUP opcode doubles the
    buffer, so long periodic sequences need only a few extra opcodes).
    """

    def __init__(self, program: str, alphabet_size: int = 2):
        width = block_width(alphabet_size)
        self.program = program
        self.alphabet_size = alphabet_size
        outcome = run(MachineKind.MONOTONE, program, None, _GENERATOR_BUDGET)
        if outcome.status in (RunStatus.STEP_LIMIT, RunStatus.OUTPUT_LIMIT):
            raise ConfigError("generator program exceeds the construction budget")
        bits = outcome.output
        self._symbols = []
        for i in range(len(bits) // width):
            v = int(bits[i * width : (i + 1) * width], 2)
            if v >= alphabet_size:
                raise ConfigError("generator emits a block outside the alphabet")
            self._symbols.append(v)

    def symbol_at(self, t: int) -> int:
        return self._symbols[t] if t < len(self._symbols) else 0

    def prob(self, x):
        symbols = as_symbols(x)
        for t, s in enumerate(symbols):
            if s != self.symbol_at(t):
                return Fraction(0)
        return Fraction(1)

    def next_symbol_dist(self, given):
        symbols = as_symbols(given)
        if self.prob(symbols) == 0:
            raise NullEventError("conditioning on null event")
        dist = [Fraction(0)] * self.alphabet_size
        dist[self.symbol_at(len(symbols))] = Fraction(1)
        return tuple(dist)

    def spec_key(self):
        return ("deterministic", self.program, self.alphabet_size)

    def to_config(self):
        return {
            "variant": "deterministic",
            "program": self.program,
            "alphabet_size": self.alphabet_size,
        }


class MixtureMeasure(Measure):
    def __init__(self, components: Sequence[Measure], weights: Sequence[Fraction | int | str]):
        self.components = tuple(components)
        self.weights = tuple(Fraction(w) for w in weights)
        if len(self.components) != len(self.weights) or not self.components:
            raise ConfigError("components and weights must align and be nonempty")
        if any(w <= 0 for w in self.weights) or sum(self.weights) != 1:
            raise ConfigError("weights must be positive and sum to 1")
        sizes = {c.alphabet_size for c in self.components}
        if len(sizes) != 1:
            raise ConfigError("mixture components must share one alphabet")
        self.alphabet_size = sizes.pop()

    def prob(self, x):
        symbols = as_symbols(x)
        return sum(
            (w * c.prob(symbols) for c, w in zip(self.components, self.weights)),
            Fraction(0),
        )

    def spec_key(self):
        return ("mixture", tuple(c.spec_key() for c in self.components), self.weights)

    def to_config(self):
        return {
            "variant": "mixture",
            "weights": [str(w) for w in self.weights],
            "components": [c.to_config() for c in self.components],
        }


def measure_from_config(cfg: dict) -> Measure:
    variant = cfg.get("variant")
    if variant == "iid":
        return IIDMeasure([Fraction(p) for p in cfg["probs"]])
    if variant == "uniform":
        return UniformMeasure(cfg.get("alphabet_size", 2))
    if variant == "markov":
        table = {
            tuple(int(s) for s in ctx.split(",") if s != ""): [Fraction(p) for p in row]
            for ctx, row in cfg["table"].items()
        }
        return MarkovMeasure(cfg["order"], table, cfg.get("alphabet_size", 2))
    if variant == "lemma5":
        return Lemma5Measure(cfg["l"])
    if variant == "deterministic":
        return DeterministicMeasure(cfg["program"], cfg.get("alphabet_size", 2))
    if variant == "mixture":
        return MixtureMeasure(
            [measure_from_config(c) for c in cfg["components"]],
            [Fraction(w) for w in cfg["weights"]],
        )
    raise ConfigError(f"unknown measure variant {variant!r}")


def repeat_generator(bits: str, doublings: int) -> str:
    """Generator program that emits `bits` and doubles the buffer
    `doublings` times, producing bits repeated 2^doublings times."""
    body = "".join("010" if b == "1" else "001" for b in bits)
    return body + "100" * doublings


def measure_eval(
    spec: Measure,
    x: Sequence[int] | str,
    given: Optional[Sequence[int] | str] = None,
) -> Fraction:
    """mu(x), or mu(x | given) when `given` is present; exact."""
    if given is None:
        return spec.prob(x)
    return spec.conditional(x, given)


def sample_sequence(spec: Measure, n: int, seed: int) -> Symbols:
    """Draw n symbols by inverse transform on exact conditionals.

    Each step consumes one 64-bit draw u from random.Random(seed) and picks
    the first symbol whose cumulative conditional probability exceeds
    u / 2^64, so the output is a pure function of (spec, n, seed).
    """
    rng = random.Random(seed)
    out: list[int] = []
    for _ in range(n):
        u = Fraction(rng.getrandbits(64), 1 << 64)
        dist = spec.next_symbol_dist(tuple(out))
        acc = Fraction(0)
        pick = spec.alphabet_size - 1
        for a, p in enumerate(dist):
            acc += p
            if u < acc:
                pick = a
                break
        out.append(pick)
    return tuple(out)


class MeasureRegistry:
    """Ordered collection of measures with binary index codes."""

    def __init__(self) -> None:
        self.entries: list[Measure] = []
        self._index: dict[tuple, int] = {}

    def register(self, spec: Measure) -> str:
        key = spec.spec_key()
        if key in self._index:
            return int_code(self._index[key])
        self.entries.append(spec)
        self._index[key] = len(self.entries) - 1
        return int_code(len(self.entries) - 1)

    def code_of(self, spec: Measure) -> str:
        return int_code(self._index[spec.spec_key()])

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    @property
    def codes(self) -> list[str]:
        return [int_code(i) for i in range(len(self.entries))]


def register_measure(spec: Measure, registry: MeasureRegistry) -> str:
    return registry.register(spec)


class MixturePredictor:
    """The package's stand-in for a universal predictor over bits.

    Half the mass comes from the monotone-machine program mass, half from
    the registered zoo weighted by 2^(-k_upper(code)).  Construction fails
    if some registry code has no program witness inside the budgets, since
    a zero weight would silently void the dominance guarantee.
    """

    def __init__(self, registry: MeasureRegistry, L: int = DEFAULT_L, S: int = DEFAULT_S):
        self.L = L
        self.S = S
        self.registry = registry
        self._members: list[tuple[Fraction, Measure]] = []
        for i, m in enumerate(registry):
            est = k_upper(int_code(i), None, L, S)
            if not est.is_finite:
                raise ConfigError(
                    f"registry code {int_code(i)!r} has no witness within budgets"
                )
            self._members.append((Fraction(1, 2**est.value), m))
        self._cache: dict[str, Fraction] = {}

    def code_weight(self, spec: Measure) -> Fraction:
        i = self.registry._index[spec.spec_key()]
        return self._members[i][0]

    def zoo_mass(self, bits: str) -> Fraction:
        return sum((w * m.bit_prob(bits) for w, m in self._members), Fraction(0))

    def mass(self, bits: str) -> Fraction:
        hit = self._cache.get(bits)
        if hit is None:
            hit = (big_m(bits, self.L, self.S).value + self.zoo_mass(bits)) / 2
            self._cache[bits] = hit
        return hit

    def conditional(self, bits: str, given: str) -> Fraction:
        pg = self.mass(given)
        if pg == 0:
            raise NullEventError(f"conditioning on null event {given!r}")
        return self.mass(given + bits) / pg


class PredictorBlockModel:
    """Presents the binary predictor as a model over a block-encoded
    alphabet, for divergence computations against non-binary measures."""

    def __init__(self, predictor: MixturePredictor, alphabet_size: int):
        block_width(alphabet_size)
        self.predictor = predictor
        self.alphabet_size = alphabet_size

    def prob(self, x: Sequence[int] | str) -> Fraction:
        return self.predictor.mass(encode_symbols(as_symbols(x), self.alphabet_size))

    def next_symbol_dist(self, given: Sequence[int] | str) -> tuple[Fraction, ...]:
        g = as_symbols(given)
        node = self.prob(g)
        if node == 0:
            raise NullEventError("conditioning on null predictor event")
        return tuple(self.prob(g + (a,)) / node for a in range(self.alphabet_size))


def predictor_eval(
    registry: MeasureRegistry, x: str, L: int = DEFAULT_L, S: int = DEFAULT_S
) -> Fraction:
    return MixturePredictor(registry, L, S).mass(x)
