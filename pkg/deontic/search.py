"""Exhaustive and sampled sweeps over ideality functions.

The search space at size n is every F with F(X) ⊆ X: one independent choice of
subset per context, 2^(Σ|X|) candidates (4096 at n=3, 2^32 at n=4). Sizes up
to 3 are swept exhaustively in canonical order (contexts by bitmask, the ∅
context most significant; choices by bitmask). Size 4 is sampled uniformly
per context, plus every weak-order F (argmin of scores with ties), which
satisfies all four axioms.

Sweeps may be partitioned across worker processes by contiguous index ranges;
partial results merge in range order so reports do not depend on scheduling.
"""

from __future__ import annotations

import itertools
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional, Sequence, Union

import numpy as np

from models.errors import SizeGuardError, UniverseError
from models.reports import SearchReport, Violation
from models.verdict import Verdict
from models.worlds import WorldSet, mutually_generic, submasks
from deontic.derive import ObFact, close
from deontic.ideality import (
    AXIOMS,
    Construction,
    IdealFun,
    cap_table,
    check_axioms,
    construct,
    scores_to_ideal,
    sup_table,
)
from deontic.obstruct import SWEEPS, WITNESS_NAMES, witness_violates

logger = logging.getLogger(__name__)

EXHAUSTIVE_MAX_WORLDS = 3
SEARCH_MAX_WORLDS = 4
CONFLICT_MAX_WORLDS = 5
DEFAULT_SAMPLES = 100_000
MAX_REPORTED_VIOLATIONS = 10

COUNTEREXAMPLE_KINDS = {
    "5d-under-cap": (Construction.CAP, "5d"),
    "5e-under-sup": (Construction.SUP, "5e"),
}


# ─── Candidate generators ────────────────────────────────────


def space_size(n: int) -> int:
    """Number of F with F(X) ⊆ X over n worlds: 2^(n·2^(n-1))."""
    return 1 << (n << (n - 1))


class FEnumerator:
    """Every F respecting (sub), in canonical order, filtered by constraints."""

    def __init__(self, universe: WorldSet, constraints: Iterable[str] = ("sub",)) -> None:
        constraints = tuple(constraints)
        unknown = [c for c in constraints if c not in AXIOMS]
        if unknown:
            raise ValueError(f"unknown constraint(s): {', '.join(unknown)}")
        self.universe = universe
        # (sub) holds by construction.
        self.constraints = tuple(c for c in AXIOMS if c in constraints and c != "sub")
        self._choices = [tuple(submasks(x)) for x in range(universe.context_count)]
        self.position = 0

    @property
    def total(self) -> int:
        return space_size(self.universe.n)

    def tables(self, start: int = 0, stop: Optional[int] = None) -> Iterator[tuple[int, tuple[int, ...]]]:
        """Raw (index, table) pairs in canonical order, before filtering."""
        product = itertools.product(*self._choices)
        for index, table in enumerate(itertools.islice(product, start, stop), start):
            self.position = index + 1
            yield index, table

    def accepts(self, table: Sequence[int]) -> bool:
        full = self.universe.full
        return all(AXIOMS[c](table, full) is None for c in self.constraints)

    def __iter__(self) -> Iterator[IdealFun]:
        for _, table in self.tables():
            if self.accepts(table):
                yield IdealFun(self.universe, table)


def sample_tables(universe: WorldSet, samples: int, seed: int) -> list[tuple[int, ...]]:
    """`samples` F tables, each context's value uniform over its subsets."""
    rng = np.random.default_rng(seed)
    columns = []
    for x in range(universe.context_count):
        choices = np.array(tuple(submasks(x)), dtype=np.int64)
        columns.append(choices[rng.integers(0, len(choices), size=samples)])
    matrix = np.stack(columns, axis=1)
    return [tuple(row) for row in matrix.tolist()]


def weak_orders(n: int) -> Iterator[tuple[int, ...]]:
    """Every total preorder on n worlds as a rank vector (13 at n=3, 75 at n=4)."""
    for ranks in itertools.product(range(n), repeat=n):
        if set(ranks) == set(range(max(ranks) + 1)):
            yield ranks


def rankings(n: int) -> Iterator[tuple[int, ...]]:
    """Strict rankings, most ideal world first, in lexicographic order."""
    return itertools.permutations(range(n))


def ranking_tables(universe: WorldSet) -> Iterator[tuple[int, tuple[int, ...]]]:
    for i, order in enumerate(rankings(universe.n)):
        scores = [0] * universe.n
        for rank, world in enumerate(order):
            scores[world] = rank
        yield i, scores_to_ideal(universe, scores).table


def weak_order_tables(universe: WorldSet) -> Iterator[tuple[int, tuple[int, ...]]]:
    for i, ranks in enumerate(weak_orders(universe.n)):
        yield i, scores_to_ideal(universe, ranks).table


# ─── Sweeping ────────────────────────────────────────────────


@dataclass(frozen=True)
class _Sweep:
    """Picklable description of what to check on each candidate."""

    n: int
    constraints: tuple[str, ...]
    construction: str
    conditions: tuple[tuple[str, bool], ...]
    stop_at_first: bool = False


@dataclass
class _Partial:
    examined: int = 0
    satisfying: int = 0
    violation_count: int = 0
    # (index, table, condition, witness masks)
    hits: list[tuple[int, tuple[int, ...], str, tuple[int, ...]]] = field(default_factory=list)

    def merge(self, other: "_Partial") -> "_Partial":
        self.examined += other.examined
        self.satisfying += other.satisfying
        self.violation_count += other.violation_count
        room = MAX_REPORTED_VIOLATIONS - len(self.hits)
        self.hits.extend(other.hits[:max(room, 0)])
        return self


def _scan(sweep: _Sweep, candidates: Iterable[tuple[int, tuple[int, ...]]]) -> _Partial:
    full = (1 << sweep.n) - 1
    axioms = [AXIOMS[c] for c in sweep.constraints]
    build = sup_table if sweep.construction == Construction.SUP.value else cap_table
    out = _Partial()
    for index, table in candidates:
        out.examined += 1
        if any(axiom(table, full) is not None for axiom in axioms):
            continue
        out.satisfying += 1
        ob = build(table, full)
        for condition, nonempty_only in sweep.conditions:
            witness = SWEEPS[condition](ob, full, nonempty_only)
            if witness is not None:
                out.violation_count += 1
                if len(out.hits) < MAX_REPORTED_VIOLATIONS:
                    out.hits.append((index, tuple(table), condition, witness))
                if sweep.stop_at_first:
                    return out
    return out


def _scan_range(sweep: _Sweep, start: int, stop: int) -> _Partial:
    enumerator = FEnumerator(WorldSet.of_size(sweep.n))
    return _scan(sweep, enumerator.tables(start, stop))


def _scan_list(sweep: _Sweep, start: int, tables: list[tuple[int, ...]]) -> _Partial:
    return _scan(sweep, enumerate(tables, start))


def _chunks(total: int, parts: int) -> list[tuple[int, int]]:
    parts = max(1, min(parts, total)) if total else 1
    step = -(-total // parts)
    return [(lo, min(lo + step, total)) for lo in range(0, total, step)] or [(0, 0)]


def _run_exhaustive(sweep: _Sweep, threads: int) -> _Partial:
    total = space_size(sweep.n)
    ranges = _chunks(total, threads)
    if threads <= 1 or len(ranges) == 1:
        return _scan_range(sweep, 0, total)
    merged = _Partial()
    with ProcessPoolExecutor(max_workers=threads) as pool:
        futures = [pool.submit(_scan_range, sweep, lo, hi) for lo, hi in ranges]
        for fut in futures:
            merged.merge(fut.result())
    return merged


def _run_sampled(sweep: _Sweep, tables: list[tuple[int, ...]], threads: int) -> _Partial:
    ranges = _chunks(len(tables), threads)
    if threads <= 1 or len(ranges) == 1:
        return _scan_list(sweep, 0, tables)
    merged = _Partial()
    with ProcessPoolExecutor(max_workers=threads) as pool:
        futures = [pool.submit(_scan_list, sweep, lo, tables[lo:hi]) for lo, hi in ranges]
        for fut in futures:
            merged.merge(fut.result())
    return merged


# ─── Report assembly ─────────────────────────────────────────


def _ideal_dict(f: IdealFun) -> dict[str, list[str]]:
    u = f.universe
    return {u.key_of(x): u.labels_of(fx) for x, fx in enumerate(f.table)}


def _violation(
    universe: WorldSet,
    sweep: _Sweep,
    source: str,
    hit: tuple[int, tuple[int, ...], str, tuple[int, ...]],
) -> Violation:
    index, table, condition, witness = hit
    f = IdealFun(universe, table)
    ob = construct(f, sweep.construction)
    names = WITNESS_NAMES[condition]
    props = {name: universe.from_mask(m) for name, m in zip(names, witness)}
    verdict = Verdict.fail(condition, **props)
    axioms_hold = all(v.holds for _, v in check_axioms(f, ("sub",) + sweep.constraints))
    revalidated = axioms_hold and witness_violates(ob, verdict)
    if not revalidated:
        logger.error("violation failed re-validation: %s", verdict.describe())
    return Violation(
        condition=condition,
        source=source,
        candidate=index,
        ideal=_ideal_dict(f),
        witness={k: p.labels for k, p in props.items()},
        revalidated=revalidated,
    )


def _check_size(n: int, exhaustive: Optional[bool]) -> bool:
    if n < 1:
        raise UniverseError(f"a universe needs at least one world, got {n}")
    if n > SEARCH_MAX_WORLDS:
        raise SizeGuardError("search", n, SEARCH_MAX_WORLDS)
    if exhaustive is None:
        return n <= EXHAUSTIVE_MAX_WORLDS
    if exhaustive and n > EXHAUSTIVE_MAX_WORLDS:
        raise SizeGuardError("exhaustive search", n, EXHAUSTIVE_MAX_WORLDS)
    return exhaustive


def _verify(
    kind: str,
    n: int,
    constraints: tuple[str, ...],
    construction: Construction,
    conditions: tuple[tuple[str, bool], ...],
    exhaustive: Optional[bool],
    samples: int,
    seed: int,
    threads: int,
    timing: bool,
) -> SearchReport:
    exhaustive = _check_size(n, exhaustive)
    universe = WorldSet.of_size(n)
    sweep = _Sweep(n, constraints, construction.value, conditions)
    started = time.perf_counter()

    if exhaustive:
        partial = _run_exhaustive(sweep, threads)
        sources = [("exhaustive", partial)]
        targeted = _Partial()
    else:
        partial = _run_sampled(sweep, sample_tables(universe, samples, seed), threads)
        targeted = _scan(sweep, weak_order_tables(universe))
        sources = [("sampled", partial), ("weak-order", targeted)]

    violations = [
        _violation(universe, sweep, source, hit)
        for source, part in sources
        for hit in part.hits
    ][:MAX_REPORTED_VIOLATIONS]
    elapsed_ms = round((time.perf_counter() - started) * 1000, 1)

    report = SearchReport(
        kind=kind,
        n=n,
        construction=construction.value,
        constraints=["sub", *constraints],
        conditions=[c for c, _ in conditions],
        mode="exhaustive" if exhaustive else "sampled",
        seed=None if exhaustive else seed,
        space_size=space_size(n),
        candidates_examined=partial.examined,
        targeted_examined=targeted.examined,
        candidates_satisfying=partial.satisfying + targeted.satisfying,
        violation_count=partial.violation_count + targeted.violation_count,
        violations=violations,
        elapsed_ms=elapsed_ms if timing else None,
    )
    log = logger.warning if report.violation_count else logger.info
    log(
        "%s sweep finished: %d examined, %d violation(s)",
        kind, report.candidates_examined + report.targeted_examined, report.violation_count,
        extra={
            "kind": kind, "n": n, "construction": construction.value,
            "candidates": report.candidates_examined, "violations": report.violation_count,
            "elapsed_ms": elapsed_ms,
        },
    )
    return report


# ─── Verification suites ─────────────────────────────────────


def verify_theorem2(
    n: int, exhaustive: Optional[bool] = None, *,
    samples: int = DEFAULT_SAMPLES, seed: int = 0, threads: int = 1, timing: bool = False,
) -> SearchReport:
    """Every F with (sub)+(I-d) gives a (sup) table satisfying 5(d)."""
    return _verify("theorem2", n, ("I-d",), Construction.SUP, (("5d", False),),
                   exhaustive, samples, seed, threads, timing)


def verify_theorem3(
    n: int, exhaustive: Optional[bool] = None, *,
    samples: int = DEFAULT_SAMPLES, seed: int = 0, threads: int = 1, timing: bool = False,
) -> SearchReport:
    """Every F with (sub)+(I-e) gives a (cap) table satisfying 5(e)."""
    return _verify("theorem3", n, ("I-e",), Construction.CAP, (("5e", False),),
                   exhaustive, samples, seed, threads, timing)


def verify_5abc(
    n: int, construction: Union[Construction, str], exhaustive: Optional[bool] = None, *,
    samples: int = DEFAULT_SAMPLES, seed: int = 0, threads: int = 1, timing: bool = False,
) -> SearchReport:
    """Every F with (sub)+(referee) gives tables satisfying 5(a) on X≠∅, 5(b), 5(c)."""
    return _verify("5abc", n, ("referee",), Construction(construction),
                   (("5a", True), ("5b", False), ("5c", False)),
                   exhaustive, samples, seed, threads, timing)


def verify_weak5e(
    n: int, exhaustive: Optional[bool] = None, *,
    samples: int = DEFAULT_SAMPLES, seed: int = 0, threads: int = 1, timing: bool = False,
) -> SearchReport:
    """Every F with (sub)+(I-e) gives a (sup) table satisfying the weakened 5(e)."""
    return _verify("weak5e", n, ("I-e",), Construction.SUP, (("5e-weak", False),),
                   exhaustive, samples, seed, threads, timing)


# ─── Counterexample miners ───────────────────────────────────


def _first_hit(
    universe: WorldSet, sweep: _Sweep, samples: int, seed: int,
) -> tuple[Optional[str], _Partial]:
    """Rankings first, then the full space (or a sample of it at n=4)."""
    examined = _Partial()
    sources: list[tuple[str, Iterable[tuple[int, tuple[int, ...]]]]] = [
        ("ranking", ranking_tables(universe)),
    ]
    if universe.n <= EXHAUSTIVE_MAX_WORLDS:
        sources.append(("exhaustive", FEnumerator(universe).tables()))
    else:
        sources.append(("sampled", enumerate(sample_tables(universe, samples, seed))))
    for source, candidates in sources:
        part = _scan(sweep, candidates)
        examined.examined += part.examined
        examined.satisfying += part.satisfying
        if part.hits:
            examined.hits = part.hits
            examined.violation_count = 1
            return source, examined
    return None, examined


def find_counterexample(
    kind: str, n: int, *,
    samples: int = DEFAULT_SAMPLES, seed: int = 0, timing: bool = False,
) -> SearchReport:
    """Find an F meeting all four axioms whose table breaks the named condition.

    Scans sizes 1..n to record the smallest size with a counterexample; the
    reported witness is the first hit at size n.
    """
    if kind not in COUNTEREXAMPLE_KINDS:
        raise ValueError(f"unknown counterexample kind {kind!r}; known: {', '.join(COUNTEREXAMPLE_KINDS)}")
    _check_size(n, None)
    construction, condition = COUNTEREXAMPLE_KINDS[kind]
    constraints = ("referee", "I-d", "I-e")
    started = time.perf_counter()

    smallest: Optional[int] = None
    source: Optional[str] = None
    found = _Partial()
    for m in range(1, n + 1):
        universe = WorldSet.of_size(m)
        sweep = _Sweep(m, constraints, construction.value, ((condition, True),), stop_at_first=True)
        source, found = _first_hit(universe, sweep, samples, seed)
        if source is not None and smallest is None:
            smallest = m

    universe = WorldSet.of_size(n)
    sweep = _Sweep(n, constraints, construction.value, ((condition, True),))
    violations = [_violation(universe, sweep, source, hit) for hit in found.hits[:1]] if source else []
    elapsed_ms = round((time.perf_counter() - started) * 1000, 1)

    report = SearchReport(
        kind=f"counterexample:{kind}",
        n=n,
        construction=construction.value,
        constraints=["sub", *constraints],
        conditions=[condition],
        mode="exhaustive" if n <= EXHAUSTIVE_MAX_WORLDS else "sampled",
        seed=None if n <= EXHAUSTIVE_MAX_WORLDS else seed,
        space_size=space_size(n),
        candidates_examined=found.examined,
        candidates_satisfying=found.satisfying,
        violation_count=len(violations),
        violations=violations,
        smallest_witness_size=smallest,
        elapsed_ms=elapsed_ms if timing else None,
    )
    logger.info(
        "counterexample search %s at n=%d: %s",
        kind, n, "found" if violations else "none",
        extra={"kind": kind, "n": n, "candidates": found.examined, "elapsed_ms": elapsed_ms},
    )
    return report


# ─── Conflict universality ───────────────────────────────────


def verify_conflict(n: int, *, timing: bool = False) -> SearchReport:
    """For every generic pair (A, B), the closure of (W, A) contains (W∖A, B).

    The closure depends only on A, so it is computed once per A and every B
    in general position with A is checked against it.
    """
    if n < 1:
        raise UniverseError(f"a universe needs at least one world, got {n}")
    if n > CONFLICT_MAX_WORLDS:
        raise SizeGuardError("conflict search", n, CONFLICT_MAX_WORLDS)
    universe = WorldSet.of_size(n)
    started = time.perf_counter()

    ordered_pairs = 0
    closed = 0
    largest = 0
    failures = 0
    violations: list[Violation] = []
    top = universe.top()
    for a_mask in range(universe.context_count):
        a = universe.from_mask(a_mask)
        partners = [
            universe.from_mask(b) for b in range(universe.context_count)
            if mutually_generic(a, universe.from_mask(b)).holds
        ]
        if not partners:
            continue
        closure = close([ObFact(top, a)])
        closed += 1
        largest = max(largest, len(closure))
        for b in partners:
            ordered_pairs += 1
            if not closure.contains(~a, b):
                failures += 1
                if len(violations) < MAX_REPORTED_VIOLATIONS:
                    violations.append(Violation(
                        condition="conflict",
                        source="pairs",
                        candidate=a_mask * universe.context_count + b.mask,
                        witness={"A": a.labels, "B": b.labels},
                        revalidated=mutually_generic(a, b).holds,
                    ))
    elapsed_ms = round((time.perf_counter() - started) * 1000, 1)

    report = SearchReport(
        kind="conflict",
        n=n,
        conditions=["5b", "5d", "5e"],
        mode="pairs",
        candidates_examined=ordered_pairs,
        candidates_satisfying=ordered_pairs,
        violation_count=failures,
        violations=violations,
        details={
            "ordered_pairs": ordered_pairs,
            "unordered_pairs": ordered_pairs // 2,
            "closures": closed,
            "largest_closure": largest,
        },
        elapsed_ms=elapsed_ms if timing else None,
    )
    logger.info(
        "conflict sweep at n=%d: %d generic pair(s), %d exception(s)",
        n, ordered_pairs // 2, failures,
        extra={"kind": "conflict", "n": n, "candidates": ordered_pairs, "violations": failures},
    )
    return report
