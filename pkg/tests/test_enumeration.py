"""Witness enumeration: exact sets, ordering, caching, and snapshots."""

from fractions import Fraction

import pytest

from kolmlab import _backend
from kolmlab.enumeration import (
    HARD_LENGTH_CAP,
    Witness,
    clear_cache,
    enumerate_witnesses,
    load_witness_set,
    save_witness_set,
)
from kolmlab.errors import (
    ConfigError,
    DigestMismatchError,
    IsaVersionError,
    MalformedRecordError,
)
from kolmlab.machine import MachineKind


def test_prefix_witnesses_at_three_bits():
    ws = enumerate_witnesses(MachineKind.PREFIX, None, 3, 100)
    assert [(w.program, w.output) for w in ws.witnesses] == [("000", "")]


def test_prefix_witnesses_at_six_bits():
    ws = enumerate_witnesses(MachineKind.PREFIX, None, 6, 100)
    assert [(w.program, w.output) for w in ws.witnesses] == [
        ("000", ""),
        ("001000", "0"),
        ("010000", "1"),
        ("100000", ""),
    ]
    assert ws.kraft_sum == Fraction(11, 64)
    assert ws.is_prefix_free()


def test_empty_condition_forces_no_condition_reads():
    ws = enumerate_witnesses(MachineKind.TWICE_PREFIX, "", 6, 100)
    assert ws.witnesses and all(w.k == 0 for w in ws.witnesses)


@pytest.mark.parametrize("kind", [MachineKind.PREFIX, MachineKind.MONOTONE])
def test_unconditional_kinds_prefix_free_and_kraft(kind):
    ws = enumerate_witnesses(kind, None, 12, 1000)
    assert ws.is_prefix_free()
    assert ws.kraft_sum <= 1


@pytest.mark.parametrize("kind", [MachineKind.TWICE_PREFIX, MachineKind.COND_LENGTH_AWARE])
@pytest.mark.parametrize("condition", ["", "0", "10"])
def test_conditional_kinds_prefix_free_and_kraft(kind, condition):
    ws = enumerate_witnesses(kind, condition, 12, 1000)
    assert ws.is_prefix_free()
    assert ws.kraft_sum <= 1
    assert all(w.k <= len(condition) for w in ws.witnesses)


def test_witnesses_replay_exactly(budget):
    from kolmlab.machine import RunStatus, run

    ws = enumerate_witnesses(MachineKind.TWICE_PREFIX, "10", 9, 100)
    for w in ws.witnesses:
        out = run(MachineKind.TWICE_PREFIX, w.program, "10", budget)
        assert out.status is RunStatus.HALTED
        assert (out.output, out.consumed_condition, out.steps) == (w.output, w.k, w.steps)
        assert out.consumed_program == len(w.program)


def test_budget_monotone_growth():
    small = enumerate_witnesses(MachineKind.PREFIX, None, 9, 50)
    large = enumerate_witnesses(MachineKind.PREFIX, None, 12, 1000)
    assert set(small.witnesses) <= set(large.witnesses)
    assert large.restricted(9, 50).witnesses == small.witnesses


def test_cache_derivation_matches_direct_enumeration():
    clear_cache()
    direct = enumerate_witnesses(MachineKind.PREFIX, None, 9, 60, use_cache=False)
    clear_cache()
    enumerate_witnesses(MachineKind.PREFIX, None, 12, 1000)  # populate superset
    derived = enumerate_witnesses(MachineKind.PREFIX, None, 9, 60)
    assert derived.witnesses == direct.witnesses


def test_partition_merge_determinism():
    # Enumerating each leading-bit partition separately via single runs and
    # merging in program order reproduces the sweep exactly.
    nbits, S, cap = 9, 100, 8
    full = _backend.sweep_halting(MachineKind.PREFIX.value, nbits, None, S, cap)
    merged = []
    for lead in (0, 1):
        for tail in range(1 << (nbits - 1)):
            prog = (lead << (nbits - 1)) | tail
            prog_bits = format(prog, f"0{nbits}b").encode("ascii")
            status, out, consumed, k, steps = _backend.run_bits(
                MachineKind.PREFIX.value, prog_bits, None, S, cap
            )
            if status == 0 and consumed == nbits:
                merged.append((prog, out, k, steps))
    assert merged == full


def test_budget_caps():
    with pytest.raises(ConfigError):
        enumerate_witnesses(MachineKind.PREFIX, None, HARD_LENGTH_CAP + 3, 100)
    with pytest.raises(ConfigError):
        enumerate_witnesses(MachineKind.PREFIX, None, 6, 0)


def test_snapshot_round_trip(tmp_path):
    ws = enumerate_witnesses(MachineKind.TWICE_PREFIX, "", 9, 100)
    path = tmp_path / "snap.txt"
    save_witness_set(ws, path)
    assert load_witness_set(path) == ws


def test_snapshot_digest_mismatch(tmp_path):
    ws = enumerate_witnesses(MachineKind.PREFIX, None, 6, 100)
    path = tmp_path / "snap.txt"
    save_witness_set(ws, path)
    text = path.read_text()
    tampered = text.replace("001000 0 0", "001000 1 0")
    path.write_text(tampered)
    with pytest.raises(DigestMismatchError):
        load_witness_set(path)


def test_snapshot_version_mismatch(tmp_path):
    import hashlib

    ws = enumerate_witnesses(MachineKind.PREFIX, None, 6, 100)
    path = tmp_path / "snap.txt"
    save_witness_set(ws, path)
    lines = path.read_text().splitlines()
    lines[1] = lines[1].replace("isa=", "isa=other-", 1)
    body = lines[:-1]
    digest = hashlib.sha256("\n".join(body).encode()).hexdigest()
    path.write_text("\n".join(body) + f"\ndigest={digest}\n")
    with pytest.raises(IsaVersionError):
        load_witness_set(path)


def test_snapshot_malformed(tmp_path):
    path = tmp_path / "snap.txt"
    path.write_text("not a snapshot\n")
    with pytest.raises(MalformedRecordError):
        load_witness_set(path)


def test_snapshot_encodes_empty_fields(tmp_path):
    ws = enumerate_witnesses(MachineKind.COND_LENGTH_AWARE, "", 6, 100)
    assert any(w.output == "" for w in ws.witnesses)
    path = tmp_path / "snap.txt"
    save_witness_set(ws, path)
    loaded = load_witness_set(path)
    assert loaded.condition == ""
    assert loaded == ws
