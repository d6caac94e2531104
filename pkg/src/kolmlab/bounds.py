"""Prediction-distance verifiers, randomness deficiency, and the named
inequality constructions.

The cumulative-distance bound checked by ``verify_eq1`` says: for a true
measure mu and any estimator rho (a semimeasure is allowed), the expected
sum of per-step distances s_t over a window is bounded by the expected
log-ratio divergence over the same window.  Both sides are computed by
full outcome enumeration, so a failure would be a genuine counterexample
rather than sampling noise.

Machine-relative conventions: the mixture predictor stands in for the
universal prior in every formula, and description lengths come from the
budgeted estimators.  Reports therefore separate machine-exact assertions
from measured-only quantities whose classical counterparts hide
universal-machine constants.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Optional, Sequence

from .complexity import DEFAULT_L, DEFAULT_S, UNREACHED, k_upper, k_upper_int
from .errors import ConfigError, NullEventError
from .kstar import kstar_upper
from .measures import (
    Measure,
    MeasureRegistry,
    MixturePredictor,
    as_symbols,
    block_width,
    encode_symbols,
)
from .reports import ASSERTED_EXACT, MEASURED_ONLY, BoundReport

OUTCOME_CAP = 4096
LN2 = math.log(2)

# Rational bracket of 1/(3 ln 2); conditionals are compared against the
# bracket so the choice below never depends on float rounding.
_C_LO = Fraction(480898346962987802, 10**18)
_C_HI = Fraction(480898346962987803, 10**18)


def _ln(fr: Fraction) -> float:
    if fr <= 0:
        raise ValueError("log of nonpositive value")
    return math.log(fr.numerator) - math.log(fr.denominator)


def _log2(fr: Fraction) -> float:
    if fr <= 0:
        raise ValueError("log of nonpositive value")
    return math.log2(fr.numerator) - math.log2(fr.denominator)


def _le_pow2(n: int, d: int, c: int) -> bool:
    """n/d <= 2^c, exactly."""
    return n <= (d << c) if c >= 0 else (n << -c) <= d


def ceil_log2(fr: Fraction) -> int:
    """Exact ceil(log2(fr)) for a positive rational."""
    if fr <= 0:
        raise ValueError("positive rational expected")
    n, d = fr.numerator, fr.denominator
    c = n.bit_length() - d.bit_length()
    while not _le_pow2(n, d, c):
        c += 1
    while _le_pow2(n, d, c - 1):
        c -= 1
    return c


class DistanceKind(Enum):
    SQUARED_DIFF = "squared_diff"
    SQUARED_ABS = "squared_abs"
    HELLINGER = "hellinger"
    KL = "kl"
    BAYES_REGRET_SQ = "bayes_regret_sq"


def _bayes_loss(dist: Sequence[Fraction], loss: Sequence[Sequence[Fraction]]) -> Fraction:
    """Minimal expected loss over decisions (columns of the loss table)."""
    n_dec = len(loss[0])
    return min(
        sum((loss[a][y] * dist[a] for a in range(len(dist))), Fraction(0))
        for y in range(n_dec)
    )


def zero_one_loss(alphabet_size: int) -> list[list[Fraction]]:
    return [
        [Fraction(int(a != y)) for y in range(alphabet_size)]
        for a in range(alphabet_size)
    ]


def step_distance(
    kind: DistanceKind,
    p: Sequence[Fraction],
    q: Sequence[Fraction],
    loss: Optional[Sequence[Sequence[Fraction]]] = None,
) -> float:
    """Distance between the true one-step distribution p and the predicted
    one q; q may be subnormalized.  Returns inf for KL when q vanishes on a
    p-positive symbol."""
    if kind is DistanceKind.SQUARED_DIFF:
        return math.fsum(float(b - a) ** 2 for a, b in zip(p, q))
    if kind is DistanceKind.SQUARED_ABS:
        return 0.5 * math.fsum(abs(float(b - a)) for a, b in zip(p, q)) ** 2
    if kind is DistanceKind.HELLINGER:
        return math.fsum(
            (math.sqrt(float(b)) - math.sqrt(float(a))) ** 2 for a, b in zip(p, q)
        )
    if kind is DistanceKind.KL:
        total = 0.0
        for a, b in zip(p, q):
            if a > 0:
                if b == 0:
                    return math.inf
                total += float(a) * _ln(Fraction(a) / Fraction(b))
        return total
    if kind is DistanceKind.BAYES_REGRET_SQ:
        table = loss if loss is not None else zero_one_loss(len(p))
        return 0.5 * float(_bayes_loss(q, table) - _bayes_loss(p, table)) ** 2
    raise ValueError(f"unknown distance kind {kind}")


def _check_window(alphabet_size: int, l: int, n: int, past: Sequence[int]) -> int:
    if len(past) != l - 1:
        raise ConfigError("past must have length l - 1")
    horizon = n - l + 1
    if horizon < 1:
        raise ConfigError("empty window")
    if alphabet_size**horizon > OUTCOME_CAP:
        raise ConfigError(f"window of {alphabet_size}^{horizon} outcomes exceeds cap")
    return horizon


def _outcomes(alphabet_size: int, length: int):
    out = [()]
    for _ in range(length):
        out = [w + (a,) for w in out for a in range(alphabet_size)]
    return out


def divergence_D(mu, rho, past: Sequence[int] | str, l: int, n: int) -> float:
    """Expected log-ratio ln(mu(w|past) / rho(w|past)) over the window
    l..n, by full enumeration of outcomes; nondecreasing in n."""
    past = as_symbols(past)
    m = mu.alphabet_size
    horizon = _check_window(m, l, n, past)
    mu_past = mu.prob(past)
    if mu_past == 0:
        raise NullEventError("past has zero probability under mu")
    rho_past = rho.prob(past)
    if rho_past == 0:
        raise NullEventError("past has zero probability under rho")
    total = 0.0
    for w in _outcomes(m, horizon):
        mu_w = mu.prob(past + w) / mu_past
        if mu_w == 0:
            continue
        rho_w = rho.prob(past + w) / rho_past
        if rho_w == 0:
            return math.inf
        total += float(mu_w) * _ln(mu_w / rho_w)
    return total


def expected_distance_sum(
    mu,
    rho,
    past: Sequence[int] | str,
    l: int,
    n: int,
    kind: DistanceKind,
    loss: Optional[Sequence[Sequence[Fraction]]] = None,
) -> float:
    """Exact expectation of sum_{t=l}^{n} s_t given the past, by enumerating
    every reachable history prefix."""
    past = as_symbols(past)
    m = mu.alphabet_size
    _check_window(m, l, n, past)
    mu_past = mu.prob(past)
    if mu_past == 0:
        raise NullEventError("past has zero probability under mu")
    total = 0.0
    for t in range(l, n + 1):
        for w in _outcomes(m, t - l):
            weight = mu.prob(past + w) / mu_past
            if weight == 0:
                continue
            p_vec = mu.next_symbol_dist(past + w)
            rho_node = rho.prob(past + w)
            if rho_node == 0:
                q_vec = tuple(Fraction(0) for _ in range(m))
            else:
                q_vec = tuple(rho.prob(past + w + (a,)) / rho_node for a in range(m))
            total += float(weight) * step_distance(kind, p_vec, q_vec, loss)
    return total


def verify_eq1(
    mu,
    rho,
    past: Sequence[int] | str,
    l: int,
    n: int,
    kind: DistanceKind,
    loss: Optional[Sequence[Sequence[Fraction]]] = None,
    tolerance: float = 1e-9,
) -> BoundReport:
    """Assert the cumulative-distance bound for one (mu, rho, window)."""
    lhs = expected_distance_sum(mu, rho, past, l, n, kind, loss)
    rhs = divergence_D(mu, rho, past, l, n)
    return BoundReport(
        name=f"eq1[{kind.value},l={l},n={n}]",
        lhs=lhs,
        rhs_terms={"divergence": rhs},
        verdict=ASSERTED_EXACT,
        tolerance=tolerance,
        budgets={"outcome_cap": OUTCOME_CAP},
    )


def eq4_step_slacks(alpha: str, predictor: MixturePredictor) -> list[float]:
    """Per-step slacks (-ln a_t) - (1 - a_t) along alpha; all nonnegative."""
    slacks = []
    for t in range(1, len(alpha) + 1):
        prev = predictor.mass(alpha[: t - 1])
        if prev == 0:
            break
        a = predictor.mass(alpha[:t]) / prev
        if a == 0:
            slacks.append(math.inf)
        else:
            slacks.append(-_ln(a) - float(1 - a))
    return slacks


def verify_eq4_chain(
    alpha: str, predictor: MixturePredictor, n: int, tolerance: float = 1e-9
) -> BoundReport:
    """Assert sum_t (1 - a_t) <= -ln predictor-mass(alpha_{1:n}), where a_t
    is the predictor's conditional for alpha_t.

    The intermediate quantity -sum ln a_t differs from -ln mass(alpha_{1:n})
    by ln mass(empty), which is <= 0 for a semimeasure, so the asserted
    form is the weaker, always-valid end of the chain; both intermediate
    values are recorded.
    """
    alpha = alpha[:n]
    sum_one_minus = Fraction(0)
    sum_neg_ln = 0.0
    for t in range(1, len(alpha) + 1):
        prev = predictor.mass(alpha[: t - 1])
        if prev == 0:
            sum_neg_ln = math.inf
            break
        a = predictor.mass(alpha[:t]) / prev
        sum_one_minus += 1 - a
        sum_neg_ln = math.inf if a == 0 else sum_neg_ln + (-_ln(a))
    mass = predictor.mass(alpha)
    neg_ln_mass = math.inf if mass == 0 else -_ln(mass)
    return BoundReport(
        name=f"eq4[n={len(alpha)}]",
        lhs=float(sum_one_minus),
        rhs_terms={"neg_ln_mass": neg_ln_mass},
        verdict=ASSERTED_EXACT,
        tolerance=tolerance,
        budgets={"L": predictor.L, "S": predictor.S},
        notes=f"sum_neg_ln_conditionals={sum_neg_ln!r}",
    )


@dataclass(frozen=True)
class DeficiencyRecord:
    x: str
    value: float
    ceil_value: int
    ratio: Fraction  # exact predictor-mass(x) / mu(x)


def deficiency(mu: Measure, predictor: MixturePredictor, x: str) -> DeficiencyRecord:
    """Randomness deficiency log2(predictor(x) / mu(x)) of the bit string x,
    with an exactly computed integer ceiling."""
    mu_x = mu.bit_prob(x)
    if mu_x == 0:
        raise NullEventError("x has zero probability under mu")
    ratio = predictor.mass(x) / mu_x
    return DeficiencyRecord(x, _log2(ratio), ceil_log2(ratio), ratio)


def lemma3_sequence(mu: Measure, n: int) -> str:
    """Adversarial computable sequence against any predictor dominating the
    machine mass: at each step the continuation avoids the first symbol
    whose conditional exceeds 1/(3 ln 2).

    Because the threshold is below 1/2 and mu is a proper binary measure,
    such a symbol always exists.  The diagnostic strings prefix + avoided
    symbol (over all steps) form a prefix-free set.
    """
    if mu.alphabet_size != 2:
        raise ConfigError("binary measures only")
    alpha: list[str] = []
    for _ in range(n):
        dist = mu.next_symbol_dist("".join(alpha))
        pick = None
        for b in (0, 1):
            p = dist[b]
            if _C_LO < p < _C_HI:
                raise ConfigError("conditional indistinguishable from threshold")
            if p > _C_HI:
                pick = b
                break
        if pick is None:
            raise ConfigError("measure is not proper: no symbol above threshold")
        alpha.append(str(1 - pick))
    return "".join(alpha)


def lemma3_diagnostic_set(mu: Measure, n: int) -> list[str]:
    alpha = lemma3_sequence(mu, n)
    flipped = []
    for l in range(1, n + 1):
        flipped.append(alpha[: l - 1] + ("1" if alpha[l - 1] == "0" else "0"))
    return flipped


def lemma5_instance(
    l: int, predictor: MixturePredictor
) -> tuple[Measure, str, BoundReport]:
    """Measured quantities for the delayed-flip measure concentrated on
    0^l 1^infinity at the observation x = 0^l: the conditional code length
    given x, the deficiency of x, the predictor's conditional for the
    forced next symbol, and the resulting one-step divergence."""
    from .measures import Lemma5Measure

    mu = Lemma5Measure(l)
    try:
        code = predictor.registry.code_of(mu)
    except KeyError:
        raise ConfigError("register the instance measure before reporting") from None
    x = "0" * l
    k_cond = k_upper(code, x, predictor.L, predictor.S).value
    rec = deficiency(mu, predictor, x)
    cond_one = predictor.conditional("1", x)
    one_step = math.inf if cond_one == 0 else -_ln(cond_one)
    report = BoundReport(
        name=f"lemma5[l={l}]",
        lhs=one_step,
        rhs_terms={
            "k_code_given_x": k_cond,
            "deficiency_x": rec.value,
            "predictor_next_conditional": float(cond_one),
        },
        verdict=MEASURED_ONLY,
        budgets={"L": predictor.L, "S": predictor.S},
        notes="one-step divergence equals -ln predictor(1|x) because mu forces 1",
    )
    return mu, x, report


def psi_semimeasure(
    l: int,
    z: str,
    registry: MeasureRegistry,
    L: int = DEFAULT_L,
    S: int = DEFAULT_S,
    predictor: Optional[MixturePredictor] = None,
) -> Fraction:
    """Posterior-style semimeasure pinned at depth l.

    For len(z) >= l it charges each registered nu the conditional code
    length of its registry code given z[:l], times the predictor mass of
    z[:l], times nu's probability of the remainder; shorter z sum over all
    extensions to depth l.  Exact by construction; codes without a witness
    inside the budgets contribute nothing.
    """
    if predictor is None:
        predictor = MixturePredictor(registry, L, S)
    if len(z) < l:
        return sum(
            (
                psi_semimeasure(l, z + format(u, f"0{l - len(z)}b"), registry, L, S, predictor)
                for u in range(1 << (l - len(z)))
            ),
            Fraction(0),
        )
    head = z[:l]
    mass_head = predictor.mass(head)
    total = Fraction(0)
    for i, nu in enumerate(registry):
        est = k_upper(registry.codes[i], head, L, S)
        if not est.is_finite:
            continue
        total += Fraction(1, 2**est.value) * mass_head * nu.bit_prob(z[l:])
    return total


def t4_identity_report(
    mu: Measure, predictor: MixturePredictor, x: str, y: str
) -> BoundReport:
    """Exact identity: the conditional log-ratio equals the deficiency drop
    d(x) - d(xy); asserted on the underlying rationals."""
    mu_xy = mu.bit_prob(x + y)
    if mu_xy == 0:
        raise NullEventError("xy has zero probability under mu")
    lhs_ratio = mu.bit_prob(x + y) * predictor.mass(x)
    rhs_ratio = mu.bit_prob(x) * predictor.mass(x + y)
    # log2(mu(y|x)/xi(y|x)) == d(x) - d(xy)  <=>  lhs_ratio/rhs_ratio equals
    # the deficiency-drop ratio; both reduce to the same rational.
    drop_num = deficiency(mu, predictor, x).ratio
    drop_den = deficiency(mu, predictor, x + y).ratio
    return BoundReport(
        name=f"t4-identity[x={x or 'e'},y={y or 'e'}]",
        lhs=lhs_ratio * drop_den,
        rhs_terms={"cross": rhs_ratio * drop_num},
        relation="==",
        verdict=ASSERTED_EXACT,
        budgets={"L": predictor.L, "S": predictor.S},
        notes="conditional log-ratio equals deficiency drop, exact rational form",
    )


def _log_ratio_bits(mu: Measure, predictor: MixturePredictor, x: str, y: str) -> float:
    mu_xy = mu.bit_prob(x + y)
    if mu_xy == 0:
        raise NullEventError("xy has zero probability under mu")
    num = mu_xy * predictor.mass(x)
    den = mu.bit_prob(x) * predictor.mass(x + y)
    if den == 0:
        return math.inf
    return _log2(num / den)


def theorem_report(
    which: str,
    mu: Measure,
    x: str,
    y: str,
    predictor: MixturePredictor,
    horizon: Optional[int] = None,
    s_kind: DistanceKind = DistanceKind.SQUARED_DIFF,
) -> BoundReport:
    """Measured-only comparison of a posterior log-ratio (or future distance
    sum) against its machine-relative bound terms.

    which:
      't1'  log-ratio vs conditional code length + length code length
      't4'  log-ratio vs code length + ceil-deficiency code length
      't7'  log-ratio vs condition-monotone code length + ceil-deficiency
      'c2'  future distance sum vs divergence and the t1 terms (nats)
      'c9'  future distance sum vs best prefix-route terms (nats)

    x and y are bit strings (block-encoded if mu is not binary).  The
    inequalities these mirror carry hidden universal-machine constants, so
    the verdict is MeasuredOnly; infinite sentinels are flagged in notes.
    """
    L, S = predictor.L, predictor.S
    code = predictor.registry.code_of(mu)
    notes = []
    if which in ("t1", "t4", "t7"):
        lhs = _log_ratio_bits(mu, predictor, x, y)
        if which == "t1":
            terms = {
                "k_code_given_x": k_upper(code, x, L, S).value,
                "k_length_of_x": k_upper_int(len(x), L, S).value,
            }
        elif which == "t4":
            rec = deficiency(mu, predictor, x)
            terms = {
                "k_code": k_upper(code, None, L, S).value,
                "k_ceil_deficiency": k_upper_int(rec.ceil_value, L, S).value,
            }
            notes.append(f"ceil_deficiency={rec.ceil_value}")
        else:
            rec = deficiency(mu, predictor, x)
            terms = {
                "kstar_code_given_x": kstar_upper(code, x, L, S).value,
                "k_ceil_deficiency": k_upper_int(rec.ceil_value, L, S).value,
            }
            notes.append(f"ceil_deficiency={rec.ceil_value}")
    elif which in ("c2", "c9"):
        if horizon is None:
            raise ConfigError("future reports need a horizon")
        past = x
        l = len(past) + 1
        n = len(past) + horizon

        class _BitModel:
            alphabet_size = 2

            def prob(self, symbols):
                return predictor.mass("".join(str(s) for s in symbols))

            def next_symbol_dist(self, given):
                bits = "".join(str(s) for s in as_symbols(given))
                node = predictor.mass(bits)
                if node == 0:
                    raise NullEventError("null predictor node")
                return tuple(predictor.mass(bits + b) / node for b in "01")

        class _BitMeasure:
            alphabet_size = 2

            def prob(self, symbols):
                return mu.bit_prob("".join(str(s) for s in symbols))

            def next_symbol_dist(self, given):
                bits = "".join(str(s) for s in as_symbols(given))
                node = mu.bit_prob(bits)
                if node == 0:
                    raise NullEventError("null mu node")
                return tuple(mu.bit_prob(bits + b) / node for b in "01")

        lhs = expected_distance_sum(_BitMeasure(), _BitModel(), past, l, n, s_kind)
        div = divergence_D(_BitMeasure(), _BitModel(), past, l, n)
        if which == "c2":
            terms = {
                "divergence_nats": div,
                "complexity_route_nats": _nats(
                    k_upper(code, past, L, S).value + k_upper_int(len(past), L, S).value
                ),
            }
        else:
            best = UNREACHED
            for i in range(len(past) + 1):
                cand = (
                    k_upper(code, past[:i], L, S).value + k_upper_int(i, L, S).value
                )
                best = min(best, cand)
            rec = deficiency(mu, predictor, past)
            terms = {
                "divergence_nats": div,
                "prefix_route_nats": _nats(best),
                "k_ceil_deficiency_nats": _nats(
                    k_upper_int(rec.ceil_value, L, S).value
                ),
            }
        notes.append(f"distance_kind={s_kind.value}")
    else:
        raise ConfigError(f"unknown report selector {which!r}")
    if any(v == UNREACHED or v == math.inf for v in terms.values()):
        notes.append("contains unwitnessed complexity terms")
    return BoundReport(
        name=f"{which}[x={x or 'e'},y={y or 'e'}]",
        lhs=lhs,
        rhs_terms=terms,
        verdict=MEASURED_ONLY,
        budgets={"L": L, "S": S},
        notes="; ".join(notes),
    )


def _nats(bits_value) -> float:
    return math.inf if bits_value == UNREACHED else bits_value * LN2


# ---------------------------------------------------------------------------
# Random models for the verification suites.
# ---------------------------------------------------------------------------


class ExplicitTreeModel(Measure):
    """Measure (or semimeasure) given by explicit conditional tables on the
    outcome tree down to a fixed depth."""

    def __init__(self, alphabet_size: int, depth: int, table: dict):
        block_width(alphabet_size)
        self.alphabet_size = alphabet_size
        self.depth = depth
        self.table = table

    def prob(self, x):
        symbols = as_symbols(x)
        if len(symbols) > self.depth:
            raise ConfigError("evaluation beyond tabulated depth")
        result = Fraction(1)
        for t, s in enumerate(symbols):
            result *= self.table[symbols[:t]][s]
            if result == 0:
                return result
        return result

    def spec_key(self):
        return ("tree", self.alphabet_size, self.depth, tuple(sorted(self.table.items())))


def random_tree_measure(rng, alphabet_size: int, depth: int, denominator: int = 60):
    """Proper measure with random rational conditionals."""
    table = {}
    for t in range(depth):
        for node in _outcomes(alphabet_size, t):
            cuts = sorted(rng.randrange(denominator + 1) for _ in range(alphabet_size - 1))
            parts = []
            prev = 0
            for c in cuts:
                parts.append(c - prev)
                prev = c
            parts.append(denominator - prev)
            table[node] = tuple(Fraction(p, denominator) for p in parts)
    return ExplicitTreeModel(alphabet_size, depth, table)


def random_tree_semimeasure(rng, alphabet_size: int, depth: int, denominator: int = 60):
    """Strictly positive semimeasure with random rational conditionals
    summing to at most 1 at every node."""
    table = {}
    for t in range(depth):
        for node in _outcomes(alphabet_size, t):
            parts = [1 + rng.randrange(denominator) for _ in range(alphabet_size)]
            scale = max(sum(parts), denominator)
            table[node] = tuple(Fraction(p, scale) for p in parts)
    return ExplicitTreeModel(alphabet_size, depth, table)
