"""Condition-monotone complexity and the machine-induced triple set."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kolmlab.complexity import UNREACHED, k_upper
from kolmlab.kstar import (
    enumerate_correct_triples,
    kcorrect_check,
    kstar_profile,
    kstar_upper,
    lemma8_report,
)
from kolmlab.machine import Budget, MachineKind, RunStatus, run

bits = st.text(alphabet="01", max_size=6)


def test_kstar_copy_witness():
    est = kstar_upper("10", "10", 9, 100)
    assert est.value == 9
    assert est.witness is not None and est.witness[1] <= 2


def test_kstar_of_empty_output_ignores_condition():
    for x in ["", "0", "10", "1101"]:
        est = kstar_upper("", x, 3, 100)
        assert est.value == 3
        assert est.witness == ("000", 0)


def test_kstar_under_empty_condition_equals_plain_k():
    for y in ["", "0", "1", "00", "01", "11", "0000"]:
        assert kstar_upper(y, "", 12, 1000).value == k_upper(y, None, 12, 1000).value


def test_profile_examples():
    profile = kstar_profile("10", "10", 9, 100)
    assert profile[2] <= profile[1] <= profile[0]
    assert kstar_profile("", "0110", 6, 100) == [3, 3, 3, 3, 3]
    assert kstar_profile("0", "01", 9, 100) == [6, 6, 6]


@given(
    st.text(alphabet="01", min_size=1, max_size=3),
    bits,
    st.text(alphabet="01", min_size=1, max_size=3),
)
@settings(max_examples=40, deadline=None)
def test_condition_monotonicity(y, x, z):
    assert kstar_upper(y, x + z, 9, 200).value <= kstar_upper(y, x, 9, 200).value


@given(st.text(alphabet="01", min_size=1, max_size=3), bits)
@settings(max_examples=40, deadline=None)
def test_sandwich_with_zero_constants(y, x):
    lo = k_upper(y, x, 12, 1000).value
    mid = kstar_upper(y, x, 12, 1000).value
    hi = k_upper(y, None, 12, 1000).value
    assert lo <= mid <= hi


def test_lemma8_empty_output_chain():
    rep = lemma8_report("", "1101", 12, 1000)
    assert rep.passed
    assert "conditional=3 monotone_conditional=3" in rep.notes
    assert "unconditional=3" in rep.notes


def test_lemma8_example_values():
    rep = lemma8_report("0", "0", 18, 10_000)
    assert rep.passed
    assert "monotone_conditional=6" in rep.notes
    rep = lemma8_report("0", "", 18, 10_000)
    assert "unconditional=6" in rep.notes
    assert rep.passed


def test_kcorrect_small_budget():
    rep = kcorrect_check(9, 100)
    assert rep.passed
    assert rep.lhs == 0
    assert "base_triples=" in rep.notes


def test_kcorrect_standard_budget():
    rep = kcorrect_check(12, 1000, sample_conditions=["", "0", "10", "110"])
    assert rep.passed and rep.lhs == 0


def test_correct_triples_closed_under_prolongation():
    budget = Budget(1000, 64)
    triples = enumerate_correct_triples(9, 100, max_prolong=2)
    assert triples
    for t in triples[:200]:
        out = run(MachineKind.TWICE_PREFIX, t.p + "11", t.x + "00", budget)
        assert out.status is RunStatus.HALTED
        assert out.output == t.y


def test_set_minimum_matches_machine_minimum():
    # C_E(y|x) over the enumerated triples equals the direct estimator.
    triples = enumerate_correct_triples(9, 100)
    for cond in ["", "0", "10", "111"]:
        outputs = {t.y for t in triples if cond.startswith(t.x)}
        for y in sorted(outputs):
            c_e = min(len(t.p) for t in triples if t.y == y and cond.startswith(t.x))
            assert c_e == kstar_upper(y, cond, 9, 100).value
