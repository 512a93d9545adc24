"""Finite universes of worlds and propositions as bitmask subsets.

A proposition (or a context) is a subset of the universe W. We store it as an
int whose bit i is set iff world i belongs to the set, so set algebra is
integer arithmetic and a family of propositions is itself an int with one bit
per subset (bit Y set iff Y is in the family).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Union

from models.errors import UniverseError
from models.verdict import Verdict

MAX_WORLDS = 16

WorldRef = Union[int, str]


# ─── Bitmask helpers ─────────────────────────────────────────


def submasks(mask: int) -> Iterator[int]:
    """Every subset of `mask`, ascending."""
    sub = 0
    while True:
        yield sub
        if sub == mask:
            return
        sub = (sub - mask) & mask


def supermasks(mask: int, full: int) -> Iterator[int]:
    """Every superset of `mask` inside `full`, ascending."""
    for free in submasks(full & ~mask):
        yield mask | free


def bits(mask: int) -> Iterator[int]:
    """Indices of the set bits of `mask`, ascending."""
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


def context_key(labels: Iterable[str]) -> str:
    """Canonical key for a context: comma-joined sorted labels, '' for ∅."""
    return ",".join(sorted(labels))


# ─── Universe ────────────────────────────────────────────────


@dataclass(frozen=True)
class WorldSet:
    """The finite set W of possible worlds, with one label per world."""

    names: tuple[str, ...]

    def __post_init__(self) -> None:
        names = tuple(self.names)
        object.__setattr__(self, "names", names)
        if not 1 <= len(names) <= MAX_WORLDS:
            raise UniverseError(f"a universe needs 1..{MAX_WORLDS} worlds, got {len(names)}")
        for name in names:
            if not isinstance(name, str) or not name.strip():
                raise UniverseError(f"world labels must be nonempty strings, got {name!r}")
            if "," in name or name != name.strip():
                raise UniverseError(f"world label {name!r} may not contain commas or edge whitespace")
        if len(set(names)) != len(names):
            dupes = sorted({n for n in names if names.count(n) > 1})
            raise UniverseError(f"duplicate world labels: {', '.join(dupes)}")

    @classmethod
    def of_size(cls, n: int) -> "WorldSet":
        """Universe {0, ..., n-1} labelled by the decimal indices."""
        if not 1 <= n <= MAX_WORLDS:
            raise UniverseError(f"a universe needs 1..{MAX_WORLDS} worlds, got {n}")
        return cls(tuple(str(i) for i in range(n)))

    @property
    def n(self) -> int:
        return len(self.names)

    @property
    def full(self) -> int:
        """Bitmask of W itself."""
        return (1 << self.n) - 1

    @property
    def context_count(self) -> int:
        return 1 << self.n

    def index(self, world: WorldRef) -> int:
        if isinstance(world, int) and not isinstance(world, bool):
            if 0 <= world < self.n:
                return world
            raise UniverseError(f"world index {world} out of range for {self.n} worlds")
        try:
            return self.names.index(world)
        except ValueError:
            raise UniverseError(f"undeclared world label {world!r}") from None

    def mask_of(self, worlds: Iterable[WorldRef]) -> int:
        mask = 0
        for w in worlds:
            mask |= 1 << self.index(w)
        return mask

    def prop(self, worlds: Iterable[WorldRef] = ()) -> "Prop":
        return Prop(self, self.mask_of(worlds))

    def from_mask(self, mask: int) -> "Prop":
        return Prop(self, mask)

    def top(self) -> "Prop":
        return Prop(self, self.full)

    def bottom(self) -> "Prop":
        return Prop(self, 0)

    def labels_of(self, mask: int) -> list[str]:
        return [self.names[i] for i in bits(mask)]

    def key_of(self, mask: int) -> str:
        return context_key(self.labels_of(mask))

    def parse_key(self, key: str) -> int:
        """Inverse of `key_of`; accepts labels in any order."""
        if key == "":
            return 0
        labels = key.split(",")
        if len(set(labels)) != len(labels):
            raise UniverseError(f"context key {key!r} repeats a world")
        return self.mask_of(labels)

    def format_mask(self, mask: int) -> str:
        return "{" + ",".join(self.labels_of(mask)) + "}"


# ─── Propositions ────────────────────────────────────────────


@dataclass(frozen=True)
class Prop:
    """A subset of a universe. Equality is extensional."""

    universe: WorldSet
    mask: int

    def __post_init__(self) -> None:
        if self.mask < 0 or self.mask & ~self.universe.full:
            raise UniverseError(
                f"mask {self.mask:#x} has worlds outside a universe of {self.universe.n}"
            )

    def _check(self, other: "Prop") -> None:
        if other.universe != self.universe:
            raise UniverseError("propositions belong to different universes")

    @property
    def members(self) -> tuple[int, ...]:
        return tuple(bits(self.mask))

    @property
    def labels(self) -> list[str]:
        return self.universe.labels_of(self.mask)

    def is_empty(self) -> bool:
        return self.mask == 0

    def __len__(self) -> int:
        return self.mask.bit_count()

    def __iter__(self) -> Iterator[int]:
        return bits(self.mask)

    def __contains__(self, world: WorldRef) -> bool:
        return bool(self.mask >> self.universe.index(world) & 1)

    def __and__(self, other: "Prop") -> "Prop":
        self._check(other)
        return Prop(self.universe, self.mask & other.mask)

    def __or__(self, other: "Prop") -> "Prop":
        self._check(other)
        return Prop(self.universe, self.mask | other.mask)

    def __sub__(self, other: "Prop") -> "Prop":
        self._check(other)
        return Prop(self.universe, self.mask & ~other.mask)

    def __invert__(self) -> "Prop":
        return Prop(self.universe, self.universe.full & ~self.mask)

    def __le__(self, other: "Prop") -> bool:
        self._check(other)
        return self.mask & ~other.mask == 0

    def __ge__(self, other: "Prop") -> bool:
        return other <= self

    def __str__(self) -> str:
        return self.universe.format_mask(self.mask)


# ─── Genericity ──────────────────────────────────────────────

GENERIC_REGIONS = ("X∩Y", "X∖Y", "Y∖X", "W∖(X∪Y)")


def generic_regions(x: Prop, y: Prop) -> dict[str, Prop]:
    """The four boolean regions of two propositions, keyed by name."""
    x._check(y)
    return {
        "X∩Y": x & y,
        "X∖Y": x - y,
        "Y∖X": y - x,
        "W∖(X∪Y)": ~(x | y),
    }


def mutually_generic(x: Prop, y: Prop) -> Verdict:
    """X and Y are in general position iff all four regions are nonempty."""
    regions = generic_regions(x, y)
    empty = [name for name in GENERIC_REGIONS if regions[name].is_empty()]
    if not empty:
        return Verdict.ok("generic")
    return Verdict.fail("generic", f"empty region(s): {', '.join(empty)}", X=x, Y=y)


def first_empty_region(x: Prop, y: Prop) -> str | None:
    regions = generic_regions(x, y)
    for name in GENERIC_REGIONS:
        if regions[name].is_empty():
            return name
    return None
