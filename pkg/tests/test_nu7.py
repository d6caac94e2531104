"""Level-set construction: membership, coefficients, fix-up, antichains."""

from fractions import Fraction

import pytest

from kolmlab.errors import ConfigError
from kolmlab.kstar import kstar_upper
from kolmlab.measures import (
    IIDMeasure,
    Lemma5Measure,
    MeasureRegistry,
    UniformMeasure,
)
from kolmlab.nu7 import NuConstruction, maximal_cut_count

F = Fraction


@pytest.fixture(scope="module")
def nc():
    reg = MeasureRegistry()
    reg.register(UniformMeasure(2))
    reg.register(IIDMeasure([F(1, 16), F(15, 16)]))
    reg.register(Lemma5Measure(3))
    return NuConstruction(reg, 12, 1000)


def test_cut_count_recurrence():
    assert [maximal_cut_count(i) for i in range(6)] == [1, 2, 5, 26, 677, 458330]


def test_membership_forms_agree_with_manual_deficiency(nc):
    # For proper measures membership is exactly "deficiency exceeds d".
    for d in (0, 1, 2):
        for v in range(16):
            z = format(v, "04b")
            for T, m in enumerate(nc.registry):
                manual = m.bit_prob(z) * 2**d < nc.predictor.mass(z)
                assert nc.s_dT_member(z, d, T) == manual


def test_very_negative_level_admits_everything(nc):
    for v in range(8):
        z = format(v, "03b")
        if nc.predictor.mass(z) > 0:
            assert nc.s_dT_member(z, -40, 0)


def test_lambda_zero_without_witness(nc):
    # Level so high that no string qualifies: coefficient collapses to 0.
    assert nc.lambda_coeff("0000", 0, 50) == 0


def test_lambda_dyadic_and_monotone_under_prolongation(nc):
    for T in range(len(nc.registry)):
        for d in (0, 1):
            prev = None
            for z in ["", "0", "00", "000", "0000"]:
                lam = nc.lambda_coeff(z, T, d)
                assert lam == 0 or lam.numerator == 1 and (
                    lam.denominator & (lam.denominator - 1) == 0
                )
                if prev is not None:
                    assert lam >= prev
                prev = lam


def test_lambda_matches_direct_minimum(nc):
    # Recompute from scratch: best program over member prefixes.
    z, d = "0000", 1
    for T in range(len(nc.registry)):
        code = nc.registry.codes[T]
        best = F(0)
        for k in range(len(z) + 1):
            if nc.s_dT_member(z[:k], d, T):
                est = kstar_upper(code, z[:k], nc.L, nc.S)
                if est.is_finite:
                    best = max(best, F(1, 2**est.value))
        assert nc.lambda_coeff(z, T, d) == best


def test_nu_tilde_single_measure_formula():
    reg = MeasureRegistry()
    reg.register(IIDMeasure([F(1, 16), F(15, 16)]))
    single = NuConstruction(reg, 12, 1000)
    for z in ["00", "000", "0000"]:
        lam = single.lambda_coeff(z, 0, 1)
        expected = lam * 2 * reg.entries[0].bit_prob(z)
        assert single.nu_tilde(z, 1) == expected


def test_nu_tilde_empty_registry_vanishes():
    empty = NuConstruction(MeasureRegistry(), 9, 100)
    assert empty.nu_tilde("0101", 0) == 0
    table = empty.nu_fixup(0, 3)
    assert all(v == 0 for v in table.values.values())


def test_fixup_invariants(nc):
    for d in (-2, 0, 2):
        table = nc.nu_fixup(d, 5)
        for length in range(5):
            for v in range(1 << length):
                z = format(v, f"0{length}b") if length else ""
                assert table.values[z] >= table.values[z + "0"] + table.values[z + "1"]
                assert table.values[z] >= nc.nu_tilde(z, d)
        assert table.values[""] <= 1


def test_claim10_exhaustive_small_depths(nc):
    for d in (0, 1, 2):
        for depth in (1, 2, 3):
            rep = nc.claim10_verify(d, depth)
            assert rep.passed
            assert f"{maximal_cut_count(depth)} maximal cuts" in rep.notes


def test_claim10_depth4_and_sampled_depth5(nc):
    rep = nc.claim10_verify(1, 4)
    assert rep.passed and "677 maximal cuts" in rep.notes
    sampled = nc.claim10_verify(1, 5, sample=2000, seed=7)
    assert sampled.passed


def test_claim10_depth_cap(nc):
    with pytest.raises(ConfigError):
        nc.claim10_verify(0, 6)


def test_nu_total_semimeasure_and_linearity(nc):
    window = (-4, 4)
    values = {}
    for length in range(5):
        for v in range(1 << length):
            z = format(v, f"0{length}b") if length else ""
            values[z] = nc.nu_total(z, window, depth=4)
    assert values[""] <= 1
    for z in list(values):
        if len(z) < 4:
            assert values[z + "0"] + values[z + "1"] <= values[z]
    weights, _ = nc.d_weights(window)
    manual = sum(
        (w * nc.nu_fixup(d, 4).values["00"] for d, w in weights.items()), F(0)
    )
    assert manual == values["00"]


def test_unwitnessed_levels_are_flagged(nc):
    # At L=12 some level codes in a wide window have no witness.
    weights, unwitnessed = nc.d_weights((-8, 8))
    assert 8 in unwitnessed
    assert all(d not in weights for d in unwitnessed)


def test_chain_instance_exact(nc):
    rep = nc.chain_instance_report(1, "000", "0", d_range=(-8, 8), depth=4)
    assert rep.passed
    assert rep.lhs <= rep.rhs_terms["nu_total"]


def test_chain_instance_window_guard(nc):
    with pytest.raises(ConfigError):
        nc.chain_instance_report(1, "0000", "", d_range=(0, 2), depth=4)
