"""Tests for the formula parser, printer and extension."""

import pytest
from hypothesis import given, strategies as st

from models.errors import FormulaSyntaxError, UnboundAtomError, UniverseError
from models.formula import (
    And,
    Atom,
    Bottom,
    Not,
    Or,
    Top,
    Valuation,
    atoms,
    extension,
    parse_formula,
    parse_obligation,
    to_text,
)
from models.worlds import WorldSet


# ─── Parsing ─────────────────────────────────────────────────


def test_precedence_not_and_or():
    assert parse_formula("p | q & ~r") == Or(Atom("p"), And(Atom("q"), Not(Atom("r"))))


def test_left_associative():
    assert parse_formula("a | b | c") == Or(Or(Atom("a"), Atom("b")), Atom("c"))
    assert parse_formula("a & b & c") == And(And(Atom("a"), Atom("b")), Atom("c"))


def test_constants_and_identifiers():
    assert parse_formula("T") == Top()
    assert parse_formula("F") == Bottom()
    assert parse_formula("Tx") == Atom("Tx")
    assert parse_formula("  ~ ( C_me ) ") == Not(Atom("C_me"))


def test_error_at_end_of_input():
    with pytest.raises(FormulaSyntaxError) as exc:
        parse_formula("p &")
    assert exc.value.offset == 3
    assert "(" in exc.value.expected


def test_error_on_unknown_character():
    with pytest.raises(FormulaSyntaxError) as exc:
        parse_formula("p $ q")
    assert exc.value.offset == 2


def test_error_on_unclosed_paren():
    with pytest.raises(FormulaSyntaxError) as exc:
        parse_formula("(p")
    assert exc.value.offset == 2
    assert ")" in exc.value.expected


# ─── Printing ────────────────────────────────────────────────


@pytest.mark.parametrize(
    "text",
    ["a & (b | c)", "~(a | b)", "a | b | c", "a | (b | c)", "a & (b & c)", "~~a", "T | F"],
)
def test_canonical_text_is_stable(text):
    assert to_text(parse_formula(text)) == text


def test_redundant_parens_dropped():
    assert to_text(parse_formula("((a) | (b & c))")) == "a | b & c"


def test_atoms_in_order():
    assert list(atoms(parse_formula("A | ~(A | ~B)"))) == ["A", "A", "B"]


_names = st.sampled_from(["p", "q", "r"])
_formulas = st.recursive(
    st.one_of(st.just(Top()), st.just(Bottom()), _names.map(Atom)),
    lambda inner: st.one_of(
        inner.map(Not),
        st.builds(And, inner, inner),
        st.builds(Or, inner, inner),
    ),
    max_leaves=12,
)


@given(_formulas)
def test_printed_formula_parses_back(f):
    assert parse_formula(to_text(f)) == f


@given(_formulas, st.integers(0, 7), st.integers(0, 7), st.integers(0, 7))
def test_extension_is_a_boolean_homomorphism(f, p, q, r):
    u = WorldSet.of_size(3)
    v = Valuation(u, {"p": u.from_mask(p), "q": u.from_mask(q), "r": u.from_mask(r)})
    assert extension(Not(f), v) == ~extension(f, v)
    assert extension(And(f, Atom("p")), v) == extension(f, v) & v["p"]
    assert extension(Or(f, Atom("q")), v) == extension(f, v) | v["q"]


# ─── Semantics ───────────────────────────────────────────────


def test_extension_of_proof_formulas(w4):
    v = Valuation(w4, {"A": w4.prop([2, 3]), "B": w4.prop([1, 3])})
    assert extension("A | ~B", v) == w4.prop([0, 2, 3])
    assert extension("A | ~(A | ~B)", v) == extension("A | B", v) == w4.prop([1, 2, 3])
    assert extension("T", v) == w4.top()
    assert extension("F", v) == w4.bottom()


def test_unbound_atom(w2):
    v = Valuation(w2, {"p": w2.top()})
    with pytest.raises(UnboundAtomError) as exc:
        extension("p & q", v)
    assert exc.value.atom == "q"


def test_valuation_rejects_foreign_universe(w2, w3):
    with pytest.raises(UniverseError):
        Valuation(w2, {"p": w3.top()})


# ─── Obligation queries ──────────────────────────────────────


def test_parse_obligation():
    q = parse_obligation("O(~C_me | D_other)")
    assert q.obligation == Not(Atom("C_me"))
    assert q.condition == Atom("D_other")
    assert str(q) == "O(~C_me | D_other)"


def test_obligation_splits_at_last_top_level_bar():
    q = parse_obligation("O(a | b | c)")
    assert q.obligation == Or(Atom("a"), Atom("b"))
    assert q.condition == Atom("c")

    q = parse_obligation("O(p | (q | r))")
    assert q.obligation == Atom("p")
    assert q.condition == Or(Atom("q"), Atom("r"))


def test_obligation_without_bar():
    with pytest.raises(FormulaSyntaxError) as exc:
        parse_obligation("O(p)")
    assert "|" in exc.value.expected


def test_obligation_needs_o_prefix():
    with pytest.raises(FormulaSyntaxError) as exc:
        parse_obligation("P(p | q)")
    assert exc.value.offset == 0


def test_obligation_error_offset_is_relative_to_whole_query():
    with pytest.raises(FormulaSyntaxError) as exc:
        parse_obligation("O(p & | q)")
    assert exc.value.offset == 6
