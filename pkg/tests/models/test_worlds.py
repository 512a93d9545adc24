"""Tests for universes, bitmask propositions and genericity."""

import pytest
from hypothesis import given, strategies as st

from models.errors import UniverseError
from models.worlds import (
    MAX_WORLDS,
    WorldSet,
    bits,
    first_empty_region,
    generic_regions,
    mutually_generic,
    submasks,
    supermasks,
)


# ─── Bitmask helpers ─────────────────────────────────────────


def test_submasks_ascending():
    assert list(submasks(0b101)) == [0b000, 0b001, 0b100, 0b101]
    assert list(submasks(0)) == [0]


def test_supermasks_inside_full():
    assert list(supermasks(0b001, 0b111)) == [0b001, 0b011, 0b101, 0b111]


def test_bits():
    assert list(bits(0b1010)) == [1, 3]
    assert list(bits(0)) == []


@given(st.integers(min_value=0, max_value=(1 << 8) - 1))
def test_submask_count_is_power_of_popcount(mask):
    subs = list(submasks(mask))
    assert len(subs) == 2 ** mask.bit_count()
    assert subs == sorted(subs)
    assert all(s & ~mask == 0 for s in subs)


# ─── WorldSet ────────────────────────────────────────────────


def test_of_size_labels_are_indices():
    u = WorldSet.of_size(3)
    assert u.names == ("0", "1", "2")
    assert u.full == 0b111
    assert u.context_count == 8


def test_rejects_duplicate_labels():
    with pytest.raises(UniverseError, match="duplicate"):
        WorldSet(("a", "b", "a"))


def test_rejects_too_many_worlds():
    with pytest.raises(UniverseError):
        WorldSet.of_size(MAX_WORLDS + 1)
    with pytest.raises(UniverseError):
        WorldSet(())


@pytest.mark.parametrize("label", ["", " a", "a,b"])
def test_rejects_bad_labels(label):
    with pytest.raises(UniverseError):
        WorldSet(("x", label))


def test_context_keys_are_sorted_labels():
    u = WorldSet(("b", "a", "c"))
    ab = u.mask_of(["a", "b"])
    assert u.key_of(ab) == "a,b"
    assert u.parse_key("b,a") == ab
    assert u.parse_key("") == 0
    assert u.key_of(0) == ""


def test_parse_key_rejects_repeats_and_unknown_labels():
    u = WorldSet(("a", "b"))
    with pytest.raises(UniverseError):
        u.parse_key("a,a")
    with pytest.raises(UniverseError, match="undeclared"):
        u.parse_key("a,z")


# ─── Prop ────────────────────────────────────────────────────


def test_prop_algebra(w3):
    p = w3.prop([0, 1])
    q = w3.prop(["1", "2"])
    assert str(p) == "{0,1}"
    assert (p & q) == w3.prop([1])
    assert (p | q) == w3.top()
    assert (p - q) == w3.prop([0])
    assert ~p == w3.prop([2])
    assert p <= w3.top()
    assert not p <= q
    assert w3.top() >= q
    assert len(p) == 2
    assert 1 in p and 2 not in p
    assert w3.bottom().is_empty()


def test_props_from_different_universes_do_not_mix(w2, w3):
    with pytest.raises(UniverseError):
        w2.top() & w3.top()


def test_prop_mask_out_of_range(w2):
    with pytest.raises(UniverseError):
        w2.from_mask(0b100)


@given(st.integers(0, 15), st.integers(0, 15))
def test_de_morgan(a, b):
    u = WorldSet.of_size(4)
    x, y = u.from_mask(a), u.from_mask(b)
    assert ~(x | y) == (~x & ~y)
    assert ~(x & y) == (~x | ~y)


# ─── Genericity ──────────────────────────────────────────────


def test_generic_pair(w4):
    a, b = w4.prop([2, 3]), w4.prop([1, 3])
    regions = generic_regions(a, b)
    assert regions["X∩Y"] == w4.prop([3])
    assert regions["W∖(X∪Y)"] == w4.prop([0])
    assert mutually_generic(a, b).holds
    assert first_empty_region(a, b) is None


def test_non_generic_pair_names_empty_region(w4):
    a, b = w4.prop([2, 3]), w4.prop([3])
    verdict = mutually_generic(a, b)
    assert not verdict.holds
    assert "Y∖X" in verdict.detail
    assert verdict.witness_dict() == {"X": a, "Y": b}
    assert first_empty_region(a, b) == "Y∖X"


def test_small_universes_have_no_generic_pairs(w3):
    assert not any(
        mutually_generic(w3.from_mask(a), w3.from_mask(b)).holds
        for a in range(8)
        for b in range(8)
    )


@given(st.integers(0, 15), st.integers(0, 15))
def test_genericity_is_symmetric(a, b):
    u = WorldSet.of_size(4)
    x, y = u.from_mask(a), u.from_mask(b)
    assert mutually_generic(x, y).holds == mutually_generic(y, x).holds


def test_members_are_ascending_indices(w4):
    assert w4.prop([3, 1]).members == (1, 3)
    assert w4.bottom().members == ()
