"""Ideality functions F and the obligation tables they generate.

F picks the ideal worlds of each context. Two constructions turn F into an
obligation table:

  sup   ob(X) = { Y : Y ⊇ F(X) }          many obligations, a principal filter
  cap   ob(X) = { Y : Y ∩ X = F(X) }      essentially one obligation per context

Axioms on F (checked, never enforced at construction):

  sub       F(X) ⊆ X
  referee   X ≠ ∅ ⟹ F(X) ≠ ∅
  I-d       F(X∩Y) ⊇ F(X)∩Y                    standards only relax in subcontexts
  I-e       F(X∩Y) = F(X)∩Y when F(X)∩Y ≠ ∅    and only relax when forced to
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Callable, Iterable, Mapping, Sequence, Union

from models.errors import UniverseError
from models.formula import Formula, Valuation, extension
from models.verdict import Verdict
from models.worlds import Prop, WorldSet, bits, submasks, supermasks
from deontic.obstruct import ObFun, Witness

logger = logging.getLogger(__name__)


class Construction(str, Enum):
    SUP = "sup"
    CAP = "cap"


class Reading(str, Enum):
    """How to read the localized preference order."""

    CORRECTED = "corrected"  # (∀X⊆Y)(a∈F(X) → b∈F(X))
    LITERAL = "literal"      # (∀X⊆Y)(a∈F(Y) → b∈F(Y)), as displayed


# ─── Ideality function ───────────────────────────────────────


@dataclass(frozen=True)
class IdealFun:
    """F : P(W) → P(W) as a total table indexed by context bitmask."""

    universe: WorldSet
    table: tuple[int, ...]

    def __post_init__(self) -> None:
        table = tuple(self.table)
        object.__setattr__(self, "table", table)
        if len(table) != self.universe.context_count:
            raise UniverseError(
                f"F must cover all {self.universe.context_count} contexts, got {len(table)}"
            )
        for x, fx in enumerate(table):
            if fx < 0 or fx & ~self.universe.full:
                raise UniverseError(f"F({self.universe.format_mask(x)}) has worlds outside W")

    @classmethod
    def from_mapping(cls, universe: WorldSet, mapping: Mapping[int, int]) -> "IdealFun":
        """Missing contexts map to ∅."""
        return cls(universe, tuple(mapping.get(x, 0) for x in range(universe.context_count)))

    @classmethod
    def from_function(cls, universe: WorldSet, fn: Callable[[int], int]) -> "IdealFun":
        return cls(universe, tuple(fn(x) for x in range(universe.context_count)))

    @classmethod
    def identity(cls, universe: WorldSet) -> "IdealFun":
        return cls(universe, tuple(range(universe.context_count)))

    def __call__(self, context: Prop) -> Prop:
        if context.universe != self.universe:
            raise UniverseError("context and F use different universes")
        return self.universe.from_mask(self.table[context.mask])

    def rows(self) -> list[tuple[str, str]]:
        fmt = self.universe.format_mask
        return [(fmt(x), fmt(fx)) for x, fx in enumerate(self.table)]


def scores_to_ideal(universe: WorldSet, scores: Union[Sequence[float], Mapping[str, float]]) -> IdealFun:
    """F(X) = the worlds of X with the least score; ties are all ideal."""
    if isinstance(scores, Mapping):
        missing = [name for name in universe.names if name not in scores]
        if missing:
            raise UniverseError(f"no score for world(s): {', '.join(missing)}")
        values = [scores[name] for name in universe.names]
    else:
        values = list(scores)
    if len(values) != universe.n:
        raise UniverseError(f"expected {universe.n} scores, got {len(values)}")

    def argmin(x: int) -> int:
        if not x:
            return 0
        best = min(values[i] for i in bits(x))
        return sum(1 << i for i in bits(x) if values[i] == best)

    return IdealFun.from_function(universe, argmin)


def ranking_ideal(universe: WorldSet, order: Sequence[int]) -> IdealFun:
    """Argmin of a strict ranking; `order` lists worlds from most to least ideal."""
    if sorted(order) != list(range(universe.n)):
        raise UniverseError(f"ranking must be a permutation of 0..{universe.n - 1}")
    scores = [0] * universe.n
    for rank, world in enumerate(order):
        scores[world] = rank
    return scores_to_ideal(universe, scores)


# ─── Axioms (mask level) ─────────────────────────────────────


def first_sub(table: Sequence[int], full: int) -> Witness:
    for x in range(full + 1):
        if table[x] & ~x:
            return (x,)
    return None


def first_referee(table: Sequence[int], full: int) -> Witness:
    for x in range(1, full + 1):
        if not table[x]:
            return (x,)
    return None


def first_i_d(table: Sequence[int], full: int) -> Witness:
    for x in range(full + 1):
        fx = table[x]
        if not fx:
            continue
        for y in range(full + 1):
            if fx & y & ~table[x & y]:
                return (x, y)
    return None


def first_i_e(table: Sequence[int], full: int) -> Witness:
    for x in range(full + 1):
        fx = table[x]
        if not fx:
            continue
        for y in range(full + 1):
            meet = fx & y
            if meet and table[x & y] != meet:
                return (x, y)
    return None


AXIOMS: dict[str, Callable[[Sequence[int], int], Witness]] = {
    "sub": first_sub,
    "referee": first_referee,
    "I-d": first_i_d,
    "I-e": first_i_e,
}

_AXIOM_NAMES = {"sub": ("X",), "referee": ("X",), "I-d": ("X", "Y"), "I-e": ("X", "Y")}


def _axiom(f: IdealFun, name: str) -> Verdict:
    witness = AXIOMS[name](f.table, f.universe.full)
    if witness is None:
        return Verdict.ok(name)
    props = {label: f.universe.from_mask(m) for label, m in zip(_AXIOM_NAMES[name], witness)}
    return Verdict.fail(name, **props)


def check_sub(f: IdealFun) -> Verdict:
    """F(X) ⊆ X for all X."""
    return _axiom(f, "sub")


def check_referee(f: IdealFun) -> Verdict:
    """Every nonempty context has a nonempty ideal set."""
    return _axiom(f, "referee")


def check_i_d(f: IdealFun) -> Verdict:
    """F(X∩Y) ⊇ F(X)∩Y for all X, Y."""
    return _axiom(f, "I-d")


def check_i_e(f: IdealFun) -> Verdict:
    """F(X∩Y) = F(X)∩Y whenever F(X)∩Y ≠ ∅."""
    return _axiom(f, "I-e")


def check_axioms(f: IdealFun, selection: Iterable[str] = tuple(AXIOMS)) -> list[tuple[str, Verdict]]:
    wanted = set(selection)
    return [(name, _axiom(f, name)) for name in AXIOMS if name in wanted]


def violates_axiom(f: IdealFun, verdict: Verdict) -> bool:
    """Substitute a failing axiom verdict's witness back into the axiom."""
    w = verdict.witness_dict()
    if verdict.condition == "sub":
        return not f(w["X"]) <= w["X"]
    if verdict.condition == "referee":
        return not w["X"].is_empty() and f(w["X"]).is_empty()
    x, y = w["X"], w["Y"]
    if verdict.condition == "I-d":
        return not (f(x) & y) <= f(x & y)
    if verdict.condition == "I-e":
        return not (f(x) & y).is_empty() and f(x & y) != (f(x) & y)
    raise ValueError(f"unknown axiom {verdict.condition!r}")


# ─── Constructions ───────────────────────────────────────────


@lru_cache(maxsize=4096)
def _sup_family(base: int, full: int) -> int:
    fam = 0
    for y in supermasks(base, full):
        fam |= 1 << y
    return fam


@lru_cache(maxsize=4096)
def _cap_family(x: int, fx: int, full: int) -> int:
    # Y∩X = F(X) has no solution when F(X) ⊄ X.
    if fx & ~x:
        return 0
    fam = 0
    for free in submasks(full & ~x):
        fam |= 1 << (fx | free)
    return fam


def sup_table(table: Sequence[int], full: int) -> tuple[int, ...]:
    return tuple(_sup_family(fx, full) for fx in table)


def cap_table(table: Sequence[int], full: int) -> tuple[int, ...]:
    return tuple(_cap_family(x, fx, full) for x, fx in enumerate(table))


def ob_sup(f: IdealFun) -> ObFun:
    """ob(X) = { Y : Y ⊇ F(X) }."""
    return ObFun(f.universe, sup_table(f.table, f.universe.full))


def ob_cap(f: IdealFun) -> ObFun:
    """ob(X) = { Y : Y ∩ X = F(X) }."""
    return ObFun(f.universe, cap_table(f.table, f.universe.full))


def construct(f: IdealFun, construction: Union[Construction, str]) -> ObFun:
    construction = Construction(construction)
    return ob_sup(f) if construction is Construction.SUP else ob_cap(f)


# ─── Conditional obligation ──────────────────────────────────


def holds_conditional(ob: ObFun, a: Prop, b: Prop) -> bool:
    """O(B|A): ⟦B⟧ ∈ ob(⟦A⟧). No actual world is involved."""
    return ob.obligatory(a, b)


def holds_conditional_formula(ob: ObFun, a: Formula, b: Formula, valuation: Valuation) -> bool:
    return holds_conditional(ob, extension(a, valuation), extension(b, valuation))


# ─── Preference orders ───────────────────────────────────────


@dataclass(frozen=True)
class PrefRelation:
    """a ≤ b ("a is no more desirable than b") as a set of index pairs."""

    universe: WorldSet
    pairs: frozenset[tuple[int, int]]

    def leq(self, a: int, b: int) -> bool:
        return (a, b) in self.pairs

    def is_reflexive(self) -> bool:
        return all((a, a) in self.pairs for a in range(self.universe.n))

    def is_transitive(self) -> bool:
        succ: dict[int, set[int]] = {}
        for a, b in self.pairs:
            succ.setdefault(a, set()).add(b)
        return all(
            (a, c) in self.pairs
            for a, b in self.pairs
            for c in succ.get(b, ())
        )

    def is_preorder(self) -> bool:
        return self.is_reflexive() and self.is_transitive()

    def is_equality(self) -> bool:
        return self.pairs == frozenset((a, a) for a in range(self.universe.n))

    def is_total(self) -> bool:
        n = self.universe.n
        return len(self.pairs) == n * n

    def labelled_pairs(self) -> list[tuple[str, str]]:
        names = self.universe.names
        return [(names[a], names[b]) for a, b in sorted(self.pairs)]


def _relation(universe: WorldSet, holds_in: Callable[[int], int]) -> PrefRelation:
    # holds_in(a) is a bitset of the quantified contexts in which a is ideal;
    # a ≤ b iff every such context also has b ideal.
    sets = [holds_in(a) for a in range(universe.n)]
    pairs = frozenset(
        (a, b)
        for a in range(universe.n)
        for b in range(universe.n)
        if sets[a] & ~sets[b] == 0
    )
    return PrefRelation(universe, pairs)


def preference_global(f: IdealFun) -> PrefRelation:
    """a ≤ b ⟺ (∀X)(a∈F(X) → b∈F(X))."""

    def ideal_contexts(a: int) -> int:
        return sum(1 << x for x, fx in enumerate(f.table) if fx >> a & 1)

    return _relation(f.universe, ideal_contexts)


def preference_local(
    f: IdealFun, context: Prop, reading: Union[Reading, str] = Reading.CORRECTED,
) -> PrefRelation:
    """The order localized to subcontexts of `context`.

    The displayed definition quantifies X ⊆ Y but mentions only F(Y), leaving X
    unused. ``Reading.CORRECTED`` (default) reads F(X); ``Reading.LITERAL``
    keeps F(Y) exactly as displayed.
    """
    if context.universe != f.universe:
        raise UniverseError("context and F use different universes")
    reading = Reading(reading)
    y = context.mask
    if reading is Reading.LITERAL:
        fy = f.table[y]

        def ideal_contexts(a: int) -> int:
            return 1 if fy >> a & 1 else 0
    else:

        def ideal_contexts(a: int) -> int:
            return sum(1 << x for x in submasks(y) if f.table[x] >> a & 1)

    return _relation(f.universe, ideal_contexts)
