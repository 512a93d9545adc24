"""Tests for the F enumerators, verification sweeps and counterexample miners."""

import pytest

from models.errors import SizeGuardError
from models.worlds import WorldSet
from deontic.search import (
    FEnumerator,
    find_counterexample,
    rankings,
    sample_tables,
    space_size,
    verify_5abc,
    verify_conflict,
    verify_theorem2,
    verify_theorem3,
    verify_weak5e,
    weak_orders,
)


# ─── Generators ──────────────────────────────────────────────


def test_space_size():
    assert space_size(1) == 2
    assert space_size(2) == 16
    assert space_size(3) == 4096
    assert space_size(4) == 2 ** 32


def test_enumerator_order_and_filtering():
    u = WorldSet.of_size(1)
    assert [table for _, table in FEnumerator(u).tables()] == [(0, 0), (0, 1)]
    # Only F({0}) = {0} satisfies (referee).
    assert [f.table for f in FEnumerator(u, ("sub", "referee"))] == [(0, 1)]


def test_enumerator_covers_the_space(w2):
    enumerator = FEnumerator(w2)
    tables = [table for _, table in enumerator.tables()]
    assert len(tables) == enumerator.total == 16
    assert len(set(tables)) == 16
    assert enumerator.position == 16


def test_enumerator_rejects_unknown_constraint(w2):
    with pytest.raises(ValueError):
        FEnumerator(w2, ("sub", "monotone"))


def test_weak_orders_and_rankings():
    assert len(list(weak_orders(3))) == 13
    assert len(list(weak_orders(4))) == 75
    assert len(list(rankings(4))) == 24


def test_samples_respect_sub_and_are_seeded(w4):
    first = sample_tables(w4, 200, seed=11)
    assert first == sample_tables(w4, 200, seed=11)
    assert first != sample_tables(w4, 200, seed=12)
    assert all(fx & ~x == 0 for table in first for x, fx in enumerate(table))


# ─── Verification suites ─────────────────────────────────────


def test_theorem2_exhaustive_at_three_worlds():
    report = verify_theorem2(3, exhaustive=True)
    assert report.mode == "exhaustive"
    assert report.candidates_examined == 4096
    assert report.violation_count == 0
    assert report.candidates_satisfying > 0
    assert report.clean


def test_theorem3_exhaustive_at_three_worlds():
    report = verify_theorem3(3)
    assert report.mode == "exhaustive"
    assert report.candidates_examined == 4096
    assert report.violation_count == 0


@pytest.mark.parametrize("construction", ["sup", "cap"])
def test_5abc_exhaustive_at_three_worlds(construction):
    report = verify_5abc(3, construction)
    assert report.conditions == ["5a", "5b", "5c"]
    assert report.construction == construction
    assert report.violation_count == 0


def test_weakened_5e_holds_under_sup():
    report = verify_weak5e(3)
    assert report.violation_count == 0


def test_sampled_sweep_at_four_worlds():
    report = verify_theorem2(4, samples=1500, seed=3)
    assert report.mode == "sampled"
    assert report.seed == 3
    assert report.candidates_examined == 1500
    assert report.targeted_examined == 75
    assert report.violation_count == 0


def test_sampled_reports_are_deterministic():
    first = verify_theorem3(4, samples=500, seed=9).as_dict()
    assert first == verify_theorem3(4, samples=500, seed=9).as_dict()
    assert "elapsed_ms" not in first


def test_timing_is_opt_in():
    assert verify_theorem2(2, timing=True).elapsed_ms is not None


def test_parallel_sweep_matches_serial():
    serial = verify_theorem2(3, exhaustive=True).as_dict()
    assert verify_theorem2(3, exhaustive=True, threads=2).as_dict() == serial


def test_size_guards():
    with pytest.raises(SizeGuardError):
        verify_theorem2(4, exhaustive=True)
    with pytest.raises(SizeGuardError):
        verify_theorem2(5)
    with pytest.raises(SizeGuardError):
        verify_conflict(6)


# ─── Counterexample miners ───────────────────────────────────


def test_5d_fails_under_cap():
    report = find_counterexample("5d-under-cap", 3)
    assert report.kind == "counterexample:5d-under-cap"
    assert report.smallest_witness_size == 2
    [violation] = report.violations
    assert violation.source == "ranking"
    assert violation.revalidated
    assert violation.witness == {"X": ["0"], "Y": ["0"], "Z": ["0", "1"]}
    assert violation.ideal["0,1,2"] == ["0"]


def test_5e_fails_under_sup():
    report = find_counterexample("5e-under-sup", 3)
    assert report.smallest_witness_size == 3
    [violation] = report.violations
    assert violation.revalidated
    assert violation.witness == {"X": ["0", "1", "2"], "Y": ["1", "2"], "Z": ["0", "2"]}


def test_no_counterexample_below_smallest_size():
    report = find_counterexample("5e-under-sup", 2)
    assert report.violations == []
    assert report.smallest_witness_size is None


def test_unknown_counterexample_kind():
    with pytest.raises(ValueError):
        find_counterexample("5c-under-sup", 3)


# ─── Conflict universality ───────────────────────────────────


def test_conflict_at_four_worlds():
    report = verify_conflict(4)
    assert report.details["ordered_pairs"] == 24
    assert report.details["unordered_pairs"] == 12
    assert report.violation_count == 0


@pytest.mark.slow
def test_conflict_at_five_worlds():
    report = verify_conflict(5)
    assert report.details["ordered_pairs"] == 240
    assert report.details["unordered_pairs"] == 120
    assert report.violation_count == 0
