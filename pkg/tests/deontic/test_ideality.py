"""Tests for ideality functions, axioms, constructions and preference orders."""

import itertools

import numpy as np
import pytest

from models.errors import UniverseError
from models.worlds import WorldSet
from deontic.ideality import (
    Construction,
    IdealFun,
    Reading,
    check_axioms,
    check_i_d,
    check_i_e,
    check_referee,
    check_sub,
    construct,
    holds_conditional,
    ob_cap,
    ob_sup,
    preference_global,
    preference_local,
    ranking_ideal,
    scores_to_ideal,
    violates_axiom,
)


def _ideal(u, mapping, default_identity=False):
    """Build F from {tuple(worlds): tuple(worlds)}; unlisted contexts are ∅ or X."""
    table = {x: x if default_identity else 0 for x in range(u.context_count)}
    for ctx, ideal in mapping.items():
        table[u.mask_of(ctx)] = u.mask_of(ideal)
    return IdealFun.from_mapping(u, table)


def _random_tables(n, count, seed):
    rng = np.random.default_rng(seed)
    return rng.integers(0, 1 << n, size=(count, 1 << n)).tolist()


# ─── F construction ──────────────────────────────────────────


def test_scores_argmin_keeps_ties(w3):
    f = scores_to_ideal(w3, [0, 0, 1])
    assert f(w3.top()) == w3.prop([0, 1])
    assert f(w3.prop([1, 2])) == w3.prop([1])
    assert f(w3.bottom()) == w3.bottom()


def test_scores_by_label():
    u = WorldSet(("CC", "CD", "DC", "DD"))
    f = scores_to_ideal(u, {"CC": 1, "CD": 3, "DC": 0, "DD": 2})
    assert f(u.prop(["CD", "DD"])) == u.prop(["DD"])
    assert f(u.top()) == u.prop(["DC"])


def test_scores_must_cover_every_world(w3):
    with pytest.raises(UniverseError, match="no score"):
        scores_to_ideal(w3, {"0": 1, "1": 2})
    with pytest.raises(UniverseError):
        scores_to_ideal(w3, [1, 2])


def test_ranking_most_ideal_first(w3):
    f = ranking_ideal(w3, (2, 0, 1))
    assert f(w3.top()) == w3.prop([2])
    assert f(w3.prop([0, 1])) == w3.prop([0])
    with pytest.raises(UniverseError):
        ranking_ideal(w3, (0, 0, 1))


def test_table_must_be_total(w2):
    with pytest.raises(UniverseError):
        IdealFun(w2, (0, 1, 2))


# ─── Axioms ──────────────────────────────────────────────────


def test_sub_violation(w2):
    f = _ideal(w2, {(0,): (1,)}, default_identity=True)
    verdict = check_sub(f)
    assert verdict.witness_dict() == {"X": w2.prop([0])}
    assert violates_axiom(f, verdict)


def test_referee_and_i_e_violation(w2):
    f = _ideal(w2, {(0, 1): (0, 1), (0,): (0,), (1,): ()})
    referee = check_referee(f)
    assert referee.witness_dict() == {"X": w2.prop([1])}
    i_e = check_i_e(f)
    assert i_e.witness_dict() == {"X": w2.top(), "Y": w2.prop([1])}
    assert violates_axiom(f, referee) and violates_axiom(f, i_e)


def test_i_d_violation(w3):
    f = _ideal(w3, {(0, 1, 2): (0,), (0, 1): (1,)}, default_identity=True)
    verdict = check_i_d(f)
    assert verdict.witness_dict() == {"X": w3.top(), "Y": w3.prop([0, 1])}
    assert violates_axiom(f, verdict)


def test_identity_ideal_satisfies_everything(w3):
    assert all(v.holds for _, v in check_axioms(IdealFun.identity(w3)))


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_every_ranking_satisfies_all_axioms(n):
    u = WorldSet.of_size(n)
    for order in itertools.permutations(range(n)):
        verdicts = check_axioms(ranking_ideal(u, order))
        assert all(v.holds for _, v in verdicts), (order, [v.describe() for _, v in verdicts])


# ─── Constructions ───────────────────────────────────────────


def test_sup_is_principal_filter(w2):
    f = ranking_ideal(w2, (1, 0))
    ob = ob_sup(f)
    assert ob.family(w2.top()) == [w2.prop([1]), w2.top()]


def test_cap_is_one_proposition_per_context(w2):
    f = ranking_ideal(w2, (1, 0))
    ob = ob_cap(f)
    assert ob.family(w2.top()) == [w2.prop([1])]
    assert ob.family(w2.prop([0])) == [w2.prop([0]), w2.top()]


def test_cap_family_empty_when_ideal_escapes_context(w2):
    f = _ideal(w2, {(0,): (1,)}, default_identity=True)
    assert ob_cap(f).family(w2.prop([0])) == []


def test_construct_dispatch(w3):
    f = ranking_ideal(w3, (0, 1, 2))
    assert construct(f, "sup") == ob_sup(f)
    assert construct(f, Construction.CAP) == ob_cap(f)


@pytest.mark.parametrize("construction", ["sup", "cap"])
def test_empty_obligation_iff_empty_ideal(construction):
    for n in (1, 2, 3, 4):
        u = WorldSet.of_size(n)
        for table in _random_tables(n, 250, seed=n):
            f = IdealFun(u, table)
            ob = construct(f, construction)
            for x in range(u.context_count):
                assert ob.has(x, 0) == (table[x] == 0)


def test_trivial_obligation(w2):
    f = ranking_ideal(w2, (0, 1))
    top, bottom = w2.top(), w2.bottom()
    assert holds_conditional(ob_sup(f), top, top)
    assert not holds_conditional(ob_cap(f), top, top)
    assert holds_conditional(ob_cap(IdealFun.identity(w2)), top, top)
    assert not holds_conditional(ob_sup(f), top, bottom)


# ─── Preference orders ───────────────────────────────────────


def test_global_preference_is_a_preorder_for_random_f():
    for n in (1, 2, 3, 4):
        u = WorldSet.of_size(n)
        for table in _random_tables(n, 250, seed=100 + n):
            assert preference_global(IdealFun(u, table)).is_preorder()


def test_strict_ranking_gives_equality(w4):
    for order in itertools.permutations(range(4)):
        assert preference_global(ranking_ideal(w4, order)).is_equality()


def test_never_ideal_world_is_below_everything(w3):
    rel = preference_global(IdealFun.from_function(w3, lambda x: x & ~0b010))
    assert rel.leq(1, 0) and rel.leq(1, 2)
    assert not rel.leq(0, 1)
    assert not rel.is_equality()


def test_local_preference_on_whole_universe_matches_global(w3):
    f = ranking_ideal(w3, (1, 2, 0))
    assert preference_local(f, w3.top()) == preference_global(f)


def test_literal_local_reading_only_sees_the_context(w3):
    f = ranking_ideal(w3, (0, 1, 2))
    rel = preference_local(f, w3.top(), Reading.LITERAL)
    assert len(rel.pairs) == 7
    assert rel.is_preorder()
    assert not rel.leq(0, 1)
    assert rel.leq(1, 0) and rel.leq(2, 1)
    assert rel.labelled_pairs()[0] == ("0", "0")


def test_f_that_is_never_ideal_relates_every_pair(w3):
    rel = preference_global(IdealFun.from_function(w3, lambda x: 0))
    assert rel.is_total()
    assert not preference_global(ranking_ideal(w3, (0, 1, 2))).is_total()


def test_local_preference_rejects_foreign_context(w2, w3):
    with pytest.raises(UniverseError):
        preference_local(ranking_ideal(w3, (0, 1, 2)), w2.top())
