"""Condition verdicts: either the condition holds, or a named witness breaks it."""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Any, Optional

if TYPE_CHECKING:
    from models.worlds import Prop


@dataclass(frozen=True)
class Verdict:
    """Result of checking one condition.

    `witness` instantiates the violated condition's quantified variables in
    their declared order (e.g. ``(("X", ...), ("Y", ...), ("Z", ...))``) and is
    present iff the condition fails.
    """

    condition: str
    holds: bool
    witness: Optional[tuple[tuple[str, "Prop"], ...]] = None
    detail: str = ""

    def __post_init__(self) -> None:
        if self.holds == (self.witness is not None):
            raise ValueError("a verdict carries a witness iff the condition fails")

    def __bool__(self) -> bool:
        return self.holds

    @classmethod
    def ok(cls, condition: str) -> "Verdict":
        return cls(condition=condition, holds=True)

    @classmethod
    def fail(cls, condition: str, detail: str = "", **witness: "Prop") -> "Verdict":
        return cls(condition=condition, holds=False, witness=tuple(witness.items()), detail=detail)

    def witness_dict(self) -> dict[str, "Prop"]:
        return dict(self.witness or ())

    def describe(self) -> str:
        if self.holds:
            return f"{self.condition}: holds"
        parts = ", ".join(f"{name}={prop}" for name, prop in self.witness or ())
        text = f"{self.condition}: FAILS at {parts}"
        return f"{text} ({self.detail})" if self.detail else text

    def as_dict(self) -> dict[str, Any]:
        return {
            "condition": self.condition,
            "holds": self.holds,
            "witness": {name: prop.labels for name, prop in self.witness} if self.witness else None,
            "detail": self.detail,
        }
