"""Forward closure over obligation facts, and the replay of the conflict proof.

A fact (X, Y) asserts Y ∈ ob(X). Conditions 5(b), 5(d) and 5(e) read as
inference rules:

  R-b   (X, Y), Z∩X = Y∩X              ⊢  (X, Z)
  R-d   (X, Y), Y ⊆ X ⊆ Z              ⊢  (Z, (Z∖X)∪Y)
  R-e   (X, Z), Y ⊆ X, Y∩Z ≠ ∅         ⊢  (Y, Z)

`close` computes the least fixpoint breadth-first, so every derived fact keeps
a shortest derivation. Frontiers are processed in (context, set) bitmask order
and rules in the order above, which makes traces canonical.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Iterable, Iterator, Optional

from models.errors import GenericityError, SizeGuardError, UniverseError
from models.formula import Valuation, extension, parse_formula, to_text
from models.verdict import Verdict
from models.worlds import Prop, WorldSet, first_empty_region, submasks, supermasks
from deontic.obstruct import ObFun

logger = logging.getLogger(__name__)

CLOSURE_MAX_WORLDS = 12


class Rule(str, Enum):
    SEED = "seed"
    RB = "R-b"
    RD = "R-d"
    RE = "R-e"
    IDENTITY = "identity"


INFERENCE_RULES = (Rule.RB, Rule.RD, Rule.RE)

# Margin annotation of each rule in the written proof.
_JUSTIFICATION = {
    Rule.SEED: "hypothesis",
    Rule.RB: "by 5(b)",
    Rule.RD: "by 5(d)",
    Rule.RE: "by 5(e)",
    Rule.IDENTITY: "set identity",
}


@dataclass(frozen=True)
class ObFact:
    """`obligatory` ∈ ob(`context`)."""

    context: Prop
    obligatory: Prop

    def __post_init__(self) -> None:
        if self.context.universe != self.obligatory.universe:
            raise UniverseError("fact mixes propositions from different universes")

    @property
    def key(self) -> tuple[int, int]:
        return (self.context.mask, self.obligatory.mask)

    def __str__(self) -> str:
        return f"ob({self.context}) ∋ {self.obligatory}"


# ─── Rule application ────────────────────────────────────────


def apply_rule(rule: Rule, premise: tuple[int, int], inst: dict[str, int]) -> tuple[int, int]:
    """Apply one inference rule to a premise under an explicit instantiation.

    Raises ValueError if the premise does not match the instantiation or a side
    condition fails. Used to re-check trace steps independently of `close`.
    """
    x, y, z = inst.get("X"), inst.get("Y"), inst.get("Z")
    if rule is Rule.RB:
        if premise != (x, y):
            raise ValueError("R-b premise must be (X, Y)")
        if z & x != y & x:
            raise ValueError("R-b needs Z∩X = Y∩X")
        return (x, z)
    if rule is Rule.RD:
        if premise != (x, y):
            raise ValueError("R-d premise must be (X, Y)")
        if y & ~x or x & ~z:
            raise ValueError("R-d needs Y ⊆ X ⊆ Z")
        return (z, (z & ~x) | y)
    if rule is Rule.RE:
        if premise != (x, z):
            raise ValueError("R-e premise must be (X, Z)")
        if y & ~x or not y & z:
            raise ValueError("R-e needs Y ⊆ X and Y∩Z ≠ ∅")
        return (y, z)
    raise ValueError(f"{rule.value} is not an inference rule")


def _successors(
    fact: tuple[int, int], rules: tuple[Rule, ...], full: int,
) -> Iterator[tuple[tuple[int, int], Rule, dict[str, int]]]:
    x, y = fact
    for rule in rules:
        if rule is Rule.RB:
            base = y & x
            for free in submasks(full & ~x):
                z = base | free
                yield (x, z), rule, {"X": x, "Y": y, "Z": z}
        elif rule is Rule.RD:
            if y & ~x:
                continue
            for z in supermasks(x, full):
                yield (z, (z & ~x) | y), rule, {"X": x, "Y": y, "Z": z}
        elif rule is Rule.RE:
            for sub in submasks(x):
                if sub & y:
                    yield (sub, y), rule, {"X": x, "Y": sub, "Z": y}


# ─── Traces ──────────────────────────────────────────────────


@dataclass(frozen=True)
class TraceStep:
    fact: ObFact
    rule: Rule
    premises: tuple[int, ...] = ()
    instantiation: tuple[tuple[str, Prop], ...] = ()
    note: str = ""

    def render(self, index: int) -> str:
        head = f"#{index}: {self.fact}"
        if self.rule is Rule.SEED:
            return f"{head}  [seed]"
        origin = "from " + ",".join(f"#{i}" for i in self.premises)
        detail = self.note or ", ".join(f"{k}={v}" for k, v in self.instantiation)
        return f"{head}  [{self.rule.value}; {origin}; {detail}]"


@dataclass
class Trace:
    """An ordered derivation: each step's premises precede it."""

    universe: WorldSet
    steps: list[TraceStep] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.steps)

    def __iter__(self) -> Iterator[TraceStep]:
        return iter(self.steps)

    @property
    def rules(self) -> list[str]:
        return [step.rule.value for step in self.steps]

    @property
    def conclusion(self) -> Optional[ObFact]:
        return self.steps[-1].fact if self.steps else None

    def render(self) -> str:
        return "\n".join(step.render(i) for i, step in enumerate(self.steps))

    def replay_check(self) -> Verdict:
        """Re-derive every step from its premises; fails at the first mismatch."""
        for i, step in enumerate(self.steps):
            if any(p >= i for p in step.premises):
                return Verdict.fail("trace", f"step #{i} cites a later premise",
                                    X=step.fact.context, Y=step.fact.obligatory)
            if step.rule is Rule.SEED:
                continue
            premise = self.steps[step.premises[0]].fact
            if step.rule is Rule.IDENTITY:
                derived = premise.key
            else:
                inst = {k: v.mask for k, v in step.instantiation}
                try:
                    derived = apply_rule(step.rule, premise.key, inst)
                except ValueError as e:
                    return Verdict.fail("trace", f"step #{i}: {e}",
                                        X=step.fact.context, Y=step.fact.obligatory)
            if derived != step.fact.key:
                return Verdict.fail("trace", f"step #{i} does not follow from its premise",
                                    X=step.fact.context, Y=step.fact.obligatory)
        return Verdict.ok("trace")

    def as_dict(self) -> dict[str, Any]:
        return {
            "worlds": list(self.universe.names),
            "steps": [
                {
                    "index": i,
                    "context": step.fact.context.labels,
                    "obligatory": step.fact.obligatory.labels,
                    "rule": step.rule.value,
                    "justification": _JUSTIFICATION[step.rule],
                    "premises": list(step.premises),
                    "instantiation": {k: v.labels for k, v in step.instantiation},
                    "note": step.note,
                }
                for i, step in enumerate(self.steps)
            ],
        }


# ─── Closure ─────────────────────────────────────────────────


@dataclass(frozen=True)
class _Derivation:
    rule: Rule
    premise: Optional[tuple[int, int]]
    inst: tuple[tuple[str, int], ...]


class Closure:
    """Least fixpoint of a seed set under the selected rules."""

    def __init__(self, universe: WorldSet, derivations: dict[tuple[int, int], _Derivation], levels: int) -> None:
        self.universe = universe
        self._derivations = derivations
        self.levels = levels

    def __len__(self) -> int:
        return len(self._derivations)

    def __contains__(self, fact: ObFact) -> bool:
        return fact.key in self._derivations

    def contains(self, context: Prop, obligatory: Prop) -> bool:
        return (context.mask, obligatory.mask) in self._derivations

    def facts(self) -> list[ObFact]:
        u = self.universe
        return [ObFact(u.from_mask(x), u.from_mask(y)) for x, y in sorted(self._derivations)]

    def trace(self, fact: ObFact) -> Trace:
        """Shortest derivation of `fact`, seeds first."""
        if fact.key not in self._derivations:
            raise KeyError(f"{fact} is not in the closure")
        chain = []
        key: Optional[tuple[int, int]] = fact.key
        while key is not None:
            chain.append(key)
            key = self._derivations[key].premise
        chain.reverse()
        u = self.universe
        steps = []
        for i, key in enumerate(chain):
            d = self._derivations[key]
            steps.append(TraceStep(
                fact=ObFact(u.from_mask(key[0]), u.from_mask(key[1])),
                rule=d.rule,
                premises=() if d.premise is None else (i - 1,),
                instantiation=tuple((k, u.from_mask(v)) for k, v in d.inst),
            ))
        return Trace(u, steps)

    def as_table(self) -> ObFun:
        """The closure as an explicit ob table."""
        families: dict[int, list[int]] = {}
        for x, y in self._derivations:
            families.setdefault(x, []).append(y)
        return ObFun.from_families(self.universe, families)


def close(
    seeds: Iterable[ObFact],
    rules: Iterable[Rule | str] = INFERENCE_RULES,
    *,
    max_worlds: int = CLOSURE_MAX_WORLDS,
) -> Closure:
    """Breadth-first closure of `seeds` under `rules`."""
    seeds = list(seeds)
    wanted = {Rule(r) for r in rules}
    if Rule.SEED in wanted or Rule.IDENTITY in wanted:
        raise ValueError("closure rules are drawn from R-b, R-d, R-e")
    ordered = tuple(r for r in INFERENCE_RULES if r in wanted)

    if not seeds:
        return Closure(WorldSet.of_size(1), {}, 0)
    universe = seeds[0].context.universe
    if any(s.context.universe != universe for s in seeds):
        raise UniverseError("seed facts use different universes")
    if universe.n > max_worlds:
        raise SizeGuardError("closure", universe.n, max_worlds)

    full = universe.full
    derivations: dict[tuple[int, int], _Derivation] = {}
    frontier = sorted({s.key for s in seeds})
    for key in frontier:
        derivations[key] = _Derivation(Rule.SEED, None, ())

    levels = 0
    while frontier:
        levels += 1
        nxt = []
        for fact in frontier:
            for derived, rule, inst in _successors(fact, ordered, full):
                if derived not in derivations:
                    derivations[derived] = _Derivation(rule, fact, tuple(inst.items()))
                    nxt.append(derived)
        frontier = sorted(nxt)

    logger.debug(
        "closure reached fixpoint after %d levels: %d facts", levels, len(derivations),
        extra={"n": universe.n},
    )
    return Closure(universe, derivations, levels)


# ─── Replay of the conflict proof ────────────────────────────


def replay_theorem1(a: Prop, b: Prop) -> Trace:
    """Replay the six-line derivation of ⟦B⟧∈ob(⟦¬A⟧) from ⟦A⟧∈ob(⟦⊤⟧).

    Each step is built from formulas evaluated over {A, B}, then re-checked
    with `apply_rule`. Raises GenericityError naming the first empty region
    when A and B are not in general position.
    """
    region = first_empty_region(a, b)
    if region is not None:
        raise GenericityError(region)

    u = a.universe
    val = Valuation(u, {"A": a, "B": b})

    def ext(text: str) -> Prop:
        return extension(parse_formula(text), val)

    top, not_a = ext("T"), ext("~A")
    a_or_not_b = ext("A | ~B")
    long_form = parse_formula("A | ~(A | ~B)")
    short_form = parse_formula("A | B")
    a_or_b = extension(short_form, val)

    steps: list[TraceStep] = [TraceStep(ObFact(top, a), Rule.SEED)]

    def add(rule: Rule, premise: int, fact: ObFact, note: str = "", **inst: Prop) -> None:
        steps.append(TraceStep(fact, rule, (premise,), tuple(inst.items()), note))

    add(Rule.RE, 0, ObFact(a_or_not_b, a), X=top, Y=a_or_not_b, Z=a)
    derived = (top - a_or_not_b) | a
    add(Rule.RD, 1, ObFact(top, derived), X=a_or_not_b, Y=a, Z=top)
    if extension(long_form, val) != a_or_b or derived != a_or_b:
        raise AssertionError("⟦A∨¬(A∨¬B)⟧ ≠ ⟦A∨B⟧")  # pragma: no cover
    add(Rule.IDENTITY, 2, ObFact(top, a_or_b),
        note=f"{to_text(long_form)} = {to_text(short_form)}")
    add(Rule.RE, 3, ObFact(not_a, a_or_b), X=top, Y=not_a, Z=a_or_b)
    add(Rule.RB, 4, ObFact(not_a, b), X=not_a, Y=a_or_b, Z=b)

    trace = Trace(u, steps)
    verdict = trace.replay_check()
    if not verdict.holds:  # pragma: no cover
        raise AssertionError(verdict.describe())
    return trace


def check_against_table(trace: Trace, ob: ObFun) -> Verdict:
    """Every fact of `trace` is present in `ob`; reports the first missing one."""
    for i, step in enumerate(trace):
        if not ob.obligatory(step.fact.context, step.fact.obligatory):
            return Verdict.fail(
                "trace-in-table",
                f"step #{i} ({step.rule.value}) is not in the table",
                X=step.fact.context,
                Y=step.fact.obligatory,
            )
    return Verdict.ok("trace-in-table")
