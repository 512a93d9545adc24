"""Obligation functions and the Carmo–Jones conditions 5(a)–(e).

An `ObFun` is an explicit table: for each context X ⊆ W the family ob(X) of
obligatory propositions, stored as an int with bit Y set iff Y ∈ ob(X).

The conditions, in the forms every step of the conflict derivation and of the
two repair results relies on:

  5(a)  ∅ ∉ ob(X)
  5(b)  Y∩X = Z∩X  ⟹  (Y ∈ ob(X) ⟺ Z ∈ ob(X))
  5(c)  Y, Z ∈ ob(X)  ⟹  Y∩Z ∈ ob(X)
  5(d)  Y ⊆ X ⊆ Z, Y ∈ ob(X)  ⟹  (Z∖X)∪Y ∈ ob(Z)
  5(e)  Y ⊆ X, Z ∈ ob(X), Y∩Z ≠ ∅  ⟹  Z ∈ ob(Y)

plus a weakened 5(e) for superset-style tables:

  5(e)-weak  Y ⊆ X, Z ∈ ob(X), Y ∩ ⋂ob(X) ≠ ∅  ⟹  Z ∈ ob(Y)

Every check sweeps its quantifiers in the order X, Y, Z (each ascending by
bitmask) and reports the least violating tuple.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Mapping, Optional, Sequence

from models.errors import UniverseError, UnknownConditionError
from models.verdict import Verdict
from models.worlds import Prop, WorldSet, bits, submasks, supermasks

logger = logging.getLogger(__name__)

CONDITION_ORDER = ("5a", "5b", "5c", "5d", "5e", "5e-weak")

# Variable names of each condition's witness, in quantifier order.
WITNESS_NAMES = {
    "5a": ("X",),
    "5b": ("X", "Y", "Z"),
    "5c": ("X", "Y", "Z"),
    "5d": ("X", "Y", "Z"),
    "5e": ("X", "Y", "Z"),
    "5e-weak": ("X", "Y", "Z"),
}


# ─── Obligation table ────────────────────────────────────────


@dataclass(frozen=True)
class ObFun:
    """ob : P(W) → P(P(W)) as a total table indexed by context bitmask."""

    universe: WorldSet
    table: tuple[int, ...]

    def __post_init__(self) -> None:
        table = tuple(self.table)
        object.__setattr__(self, "table", table)
        if len(table) != self.universe.context_count:
            raise UniverseError(
                f"ob table must cover all {self.universe.context_count} contexts, got {len(table)}"
            )
        limit = 1 << self.universe.context_count
        for x, fam in enumerate(table):
            if fam < 0 or fam >= limit:
                raise UniverseError(f"family for context {self.universe.format_mask(x)} is out of range")

    # ── construction ──

    @classmethod
    def empty(cls, universe: WorldSet) -> "ObFun":
        return cls(universe, (0,) * universe.context_count)

    @classmethod
    def everything(cls, universe: WorldSet) -> "ObFun":
        """ob(X) = P(W) for every X."""
        fam = (1 << universe.context_count) - 1
        return cls(universe, (fam,) * universe.context_count)

    @classmethod
    def from_families(
        cls, universe: WorldSet, families: Mapping[int, Iterable[int]],
    ) -> "ObFun":
        """Build from ``{context mask: [member masks]}``; missing contexts get ∅."""
        table = [0] * universe.context_count
        for x, members in families.items():
            if not 0 <= x <= universe.full:
                raise UniverseError(f"context mask {x:#x} out of range")
            fam = 0
            for y in members:
                if not 0 <= y <= universe.full:
                    raise UniverseError(f"member mask {y:#x} out of range")
                fam |= 1 << y
            table[x] = fam
        return cls(universe, tuple(table))

    @classmethod
    def from_function(cls, universe: WorldSet, fn: Callable[[int], Iterable[int]]) -> "ObFun":
        return cls.from_families(universe, {x: fn(x) for x in range(universe.context_count)})

    # ── lookup ──

    def has(self, x: int, y: int) -> bool:
        return bool(self.table[x] >> y & 1)

    def obligatory(self, context: Prop, prop: Prop) -> bool:
        """Y ∈ ob(X)."""
        self._check(context)
        self._check(prop)
        return self.has(context.mask, prop.mask)

    def member_masks(self, x: int) -> Iterator[int]:
        return bits(self.table[x])

    def family(self, context: Prop) -> list[Prop]:
        self._check(context)
        return [self.universe.from_mask(y) for y in self.member_masks(context.mask)]

    def size(self, context: Prop) -> int:
        return self.table[context.mask].bit_count()

    def _check(self, prop: Prop) -> None:
        if prop.universe != self.universe:
            raise UniverseError("proposition and ob table use different universes")

    def rows(self) -> list[tuple[str, list[str]]]:
        """(context, members) rendered with world labels, context-ordered."""
        fmt = self.universe.format_mask
        return [(fmt(x), [fmt(y) for y in self.member_masks(x)]) for x in range(len(self.table))]


# ─── Raw sweeps (mask level) ─────────────────────────────────
#
# Each returns the least violating tuple of masks or None. The search module
# calls these directly on raw tables to skip Verdict construction.

Witness = Optional[tuple[int, ...]]


def first_5a(table: Sequence[int], full: int, nonempty_only: bool = True) -> Witness:
    for x in range(1 if nonempty_only else 0, full + 1):
        if table[x] & 1:
            return (x,)
    return None


def first_5b(table: Sequence[int], full: int, nonempty_only: bool = False) -> Witness:
    everything = (1 << (full + 1)) - 1
    for x in range(1 if nonempty_only else 0, full + 1):
        fam = table[x]
        if fam == 0 or fam == everything:
            continue
        outside = full & ~x
        for y in range(full + 1):
            member = fam >> y & 1
            base = y & x
            for free in submasks(outside):
                z = base | free
                if fam >> z & 1 != member:
                    return (x, y, z)
    return None


def first_5c(table: Sequence[int], full: int, nonempty_only: bool = False) -> Witness:
    for x in range(1 if nonempty_only else 0, full + 1):
        fam = table[x]
        members = list(bits(fam))
        for y in members:
            for z in members:
                if not fam >> (y & z) & 1:
                    return (x, y, z)
    return None


def first_5d(table: Sequence[int], full: int, nonempty_only: bool = False) -> Witness:
    for x in range(1 if nonempty_only else 0, full + 1):
        fam = table[x]
        if not fam:
            continue
        for y in submasks(x):
            if not fam >> y & 1:
                continue
            for z in supermasks(x, full):
                if not table[z] >> ((z & ~x) | y) & 1:
                    return (x, y, z)
    return None


def first_5e(table: Sequence[int], full: int, nonempty_only: bool = False) -> Witness:
    for x in range(1 if nonempty_only else 0, full + 1):
        fam = table[x]
        if not fam:
            continue
        members = list(bits(fam))
        for y in submasks(x):
            row = table[y]
            for z in members:
                if y & z and not row >> z & 1:
                    return (x, y, z)
    return None


def first_5e_weak(table: Sequence[int], full: int, nonempty_only: bool = False) -> Witness:
    for x in range(1 if nonempty_only else 0, full + 1):
        fam = table[x]
        if not fam:
            continue
        members = list(bits(fam))
        joint = full
        for y in members:
            joint &= y
        for y in submasks(x):
            if not y & joint:
                continue
            row = table[y]
            for z in members:
                if not row >> z & 1:
                    return (x, y, z)
    return None


SWEEPS: dict[str, Callable[[Sequence[int], int, bool], Witness]] = {
    "5a": first_5a,
    "5b": first_5b,
    "5c": first_5c,
    "5d": first_5d,
    "5e": first_5e,
    "5e-weak": first_5e_weak,
}

_DEFAULT_NONEMPTY = {"5a": True}


def _verdict(ob: ObFun, condition: str, witness: Witness) -> Verdict:
    if witness is None:
        return Verdict.ok(condition)
    props = {
        name: ob.universe.from_mask(mask)
        for name, mask in zip(WITNESS_NAMES[condition], witness)
    }
    return Verdict.fail(condition, **props)


def _run(ob: ObFun, condition: str, nonempty_only: Optional[bool]) -> Verdict:
    if nonempty_only is None:
        nonempty_only = _DEFAULT_NONEMPTY.get(condition, False)
    witness = SWEEPS[condition](ob.table, ob.universe.full, nonempty_only)
    return _verdict(ob, condition, witness)


# ─── Public checks ───────────────────────────────────────────


def check_5a(ob: ObFun, nonempty_only: bool = True) -> Verdict:
    """∅ ∉ ob(X) for every (nonempty, by default) context X."""
    return _run(ob, "5a", nonempty_only)


def check_5b(ob: ObFun, nonempty_only: bool = False) -> Verdict:
    """Membership in ob(X) depends only on the part of a proposition inside X."""
    return _run(ob, "5b", nonempty_only)


def check_5c(ob: ObFun, nonempty_only: bool = False) -> Verdict:
    """Every family is closed under pairwise intersection."""
    return _run(ob, "5c", nonempty_only)


def check_5d(ob: ObFun, nonempty_only: bool = False) -> Verdict:
    """Obligations transfer to larger contexts: Y⊆X⊆Z, Y∈ob(X) ⟹ (Z∖X)∪Y ∈ ob(Z)."""
    return _run(ob, "5d", nonempty_only)


def check_5e(ob: ObFun, nonempty_only: bool = False) -> Verdict:
    """Obligations transfer to compatible subcontexts: Y⊆X, Z∈ob(X), Y∩Z≠∅ ⟹ Z∈ob(Y)."""
    return _run(ob, "5e", nonempty_only)


def check_5e_weak(ob: ObFun, nonempty_only: bool = False) -> Verdict:
    """5(e) restricted to subcontexts that meet the joint obligation ⋂ob(X)."""
    return _run(ob, "5e-weak", nonempty_only)


# ─── Plugin conditions ───────────────────────────────────────

FamilyCondition = Callable[[Prop, list[Prop]], bool]

_PLUGINS: dict[str, FamilyCondition] = {}


def register_condition(name: str, predicate: FamilyCondition) -> None:
    """Register a user condition over (context, family) pairs.

    The predicate returns True when the family is acceptable for the context;
    `check_plugin` reports the least context for which it returns False.
    """
    if name in SWEEPS:
        raise ValueError(f"{name!r} is a built-in condition")
    _PLUGINS[name] = predicate
    logger.debug("registered plugin condition %s", name)


def unregister_condition(name: str) -> None:
    _PLUGINS.pop(name, None)


def registered_conditions() -> list[str]:
    return list(_PLUGINS)


def check_plugin(ob: ObFun, name: str, nonempty_only: bool = False) -> Verdict:
    try:
        predicate = _PLUGINS[name]
    except KeyError:
        raise UnknownConditionError(name, known_conditions()) from None
    for x in range(1 if nonempty_only else 0, ob.universe.context_count):
        context = ob.universe.from_mask(x)
        if not predicate(context, ob.family(context)):
            return Verdict.fail(name, X=context)
    return Verdict.ok(name)


# ─── Batch ───────────────────────────────────────────────────


def known_conditions() -> list[str]:
    return list(CONDITION_ORDER) + registered_conditions()


def check_all(
    ob: ObFun,
    selection: Optional[Iterable[str]] = None,
    nonempty_only: Optional[bool] = None,
) -> list[tuple[str, Verdict]]:
    """Run the selected conditions (default 5a–5e) in canonical order.

    `nonempty_only=None` keeps each condition's own default.
    """
    wanted = list(CONDITION_ORDER[:5]) if selection is None else list(selection)
    known = known_conditions()
    for name in wanted:
        if name not in known:
            raise UnknownConditionError(name, known)
    ordered = [name for name in known if name in wanted]
    results = []
    for name in ordered:
        if name in SWEEPS:
            verdict = _run(ob, name, nonempty_only)
        else:
            verdict = check_plugin(ob, name, bool(nonempty_only))
        results.append((name, verdict))
    logger.debug(
        "checked %d condition(s), %d failing",
        len(results), sum(1 for _, v in results if not v.holds),
    )
    return results


# ─── Independent witness re-validation ───────────────────────
#
# Direct transcriptions of each condition on Props, kept separate from the
# sweeps above so a reported witness can be confirmed by other code.


def violates_5a(ob: ObFun, X: Prop) -> bool:
    return ob.obligatory(X, X.universe.bottom())


def violates_5b(ob: ObFun, X: Prop, Y: Prop, Z: Prop) -> bool:
    return (Y & X) == (Z & X) and ob.obligatory(X, Y) != ob.obligatory(X, Z)


def violates_5c(ob: ObFun, X: Prop, Y: Prop, Z: Prop) -> bool:
    return ob.obligatory(X, Y) and ob.obligatory(X, Z) and not ob.obligatory(X, Y & Z)


def violates_5d(ob: ObFun, X: Prop, Y: Prop, Z: Prop) -> bool:
    return Y <= X <= Z and ob.obligatory(X, Y) and not ob.obligatory(Z, (Z - X) | Y)


def violates_5e(ob: ObFun, X: Prop, Y: Prop, Z: Prop) -> bool:
    return (
        Y <= X
        and ob.obligatory(X, Z)
        and not (Y & Z).is_empty()
        and not ob.obligatory(Y, Z)
    )


def violates_5e_weak(ob: ObFun, X: Prop, Y: Prop, Z: Prop) -> bool:
    joint = X.universe.top()
    for member in ob.family(X):
        joint = joint & member
    return (
        Y <= X
        and ob.obligatory(X, Z)
        and not (Y & joint).is_empty()
        and not ob.obligatory(Y, Z)
    )


_VIOLATES = {
    "5a": violates_5a,
    "5b": violates_5b,
    "5c": violates_5c,
    "5d": violates_5d,
    "5e": violates_5e,
    "5e-weak": violates_5e_weak,
}


def witness_violates(ob: ObFun, verdict: Verdict) -> bool:
    """True iff a failing verdict's witness, substituted back, breaks its condition."""
    if verdict.holds:
        return False
    if verdict.condition not in _VIOLATES:
        predicate = _PLUGINS[verdict.condition]
        context = verdict.witness_dict()["X"]
        return not predicate(context, ob.family(context))
    return _VIOLATES[verdict.condition](ob, **verdict.witness_dict())
