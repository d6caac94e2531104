"""Description-length and program-mass estimators against brute oracles."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kolmlab.complexity import (
    UNREACHED,
    big_m,
    int_code,
    k_upper,
    k_upper_int,
    km_upper,
    minimal_binary,
    zigzag,
)
from kolmlab.enumeration import enumerate_witnesses
from kolmlab.machine import Budget, MachineKind, minimal_consumed_prefix


def test_k_upper_examples():
    assert k_upper("", None, 6, 100).value == 3
    assert k_upper("0", None, 6, 100).value == 6
    assert k_upper("0", None, 6, 100).witness == "001000"
    assert k_upper("0", None, 3, 100).value == UNREACHED
    assert not k_upper("0", None, 3, 100).is_finite


def test_km_upper_examples():
    assert km_upper("", 6, 100).value == 0
    assert km_upper("0", 6, 100).value == 3
    assert km_upper("0", 6, 100).witness == "001"
    assert km_upper("0000", 9, 100).value == 9
    # doubling the buffer reaches period-two strings early
    assert km_upper("0101", 9, 100).value == 9
    assert km_upper("0110", 9, 100).value == UNREACHED


def test_big_m_examples():
    assert big_m("", 6, 100).value == 1
    assert big_m("0", 6, 100).value == Fraction(9, 64)
    assert big_m("01", 6, 100).value == Fraction(1, 64)
    assert big_m("00", 6, 100).value + big_m("01", 6, 100).value <= big_m("0", 6, 100).value


def _all_bits(n):
    for length in range(n + 1):
        for v in range(1 << length):
            yield format(v, f"0{length}b") if length else ""


@pytest.mark.parametrize("budgets", [(12, 1000), (18, 10_000)])
def test_semimeasure_inequalities_exact(budgets):
    L, S = budgets
    for x in _all_bits(7):
        assert big_m(x + "0", L, S).value + big_m(x + "1", L, S).value <= big_m(x, L, S).value
    assert big_m("", L, S).value <= 1


def test_budget_monotonicity():
    for x in ["0", "1", "00", "0000", "01"]:
        assert big_m(x, 6, 100).value <= big_m(x, 12, 1000).value
        assert km_upper(x, 12, 1000).value <= km_upper(x, 6, 100).value
        assert k_upper(x, None, 12, 1000).value <= k_upper(x, None, 6, 100).value


def test_machine_relative_ordering():
    for x in _all_bits(5):
        k = k_upper(x, None, 12, 1000).value
        km = km_upper(x, 12, 1000).value
        if k != UNREACHED:
            assert km <= k
        if km != UNREACHED:
            assert big_m(x, 12, 1000).value >= Fraction(1, 2**km)


def test_kraft_over_outputs():
    ws = enumerate_witnesses(MachineKind.PREFIX, None, 12, 1000)
    total = sum(
        (Fraction(1, 2 ** len(w.program)) for w in ws.by_output.values()),
        Fraction(0),
    )
    assert total <= 1


def test_big_m_against_per_tape_oracle():
    """Independent route: classify every tape by the first-coverage probe
    and rebuild the mass; must equal the sweep-accumulated table."""
    L, S = 9, 100
    budget = Budget(S, 64)
    targets = list(_all_bits(4))[1:]
    for target in targets:
        oracle = Fraction(0)
        for nbits in (3, 6, 9):
            for v in range(1 << nbits):
                tape = format(v, f"0{nbits}b")
                if minimal_consumed_prefix(tape, target, budget) == nbits:
                    oracle += Fraction(1, 2**nbits)
        assert oracle == big_m(target, L, S).value, target


def test_km_agrees_with_per_tape_oracle():
    budget = Budget(100, 64)
    for target in ["0", "1", "00", "11", "0000"]:
        best = UNREACHED
        for nbits in (3, 6, 9):
            for v in range(1 << nbits):
                tape = format(v, f"0{nbits}b")
                if minimal_consumed_prefix(tape, target, budget) == nbits:
                    best = min(best, nbits)
        assert km_upper(target, 9, 100).value == best


def test_zigzag_order():
    assert [zigzag(n) for n in (0, -1, 1, -2, 2)] == [0, 1, 2, 3, 4]


def test_minimal_binary_is_bijective_prefix_code_free():
    seen = {}
    for m in range(64):
        code = minimal_binary(m)
        assert code not in seen
        seen[code] = m
    # code lengths grow like log2
    assert len(minimal_binary(0)) == 0
    assert len(minimal_binary(1)) == 1
    assert len(minimal_binary(6)) == 2


@given(st.integers(min_value=-500, max_value=500))
def test_int_code_distinct(n):
    assert int_code(n) == minimal_binary(zigzag(n))
    if n != 0:
        assert int_code(n) != int_code(-n) or zigzag(n) == zigzag(-n)


def test_k_upper_int_uses_the_code():
    assert k_upper_int(0, 6, 100).value == k_upper("", None, 6, 100).value
    assert k_upper_int(1, 12, 1000).value == k_upper("1", None, 12, 1000).value
    assert k_upper_int(-1, 12, 1000).value == k_upper("0", None, 12, 1000).value
