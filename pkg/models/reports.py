"""Search report models: what a sweep examined and what it found."""

from __future__ import annotations

from typing import Any, Optional

from pydantic import BaseModel, Field


class Violation(BaseModel):
    """One candidate whose constructed table breaks the condition under test."""

    condition: str = Field(..., description="Condition name, e.g. 5d")
    source: str = Field(..., description="exhaustive | sampled | weak-order | ranking | pairs")
    candidate: int = Field(..., ge=0, description="Position of the candidate within its source")
    ideal: Optional[dict[str, list[str]]] = Field(
        None, description="F table: context key -> ideal world labels",
    )
    witness: dict[str, list[str]] = Field(..., description="Quantified variables -> world labels")
    revalidated: bool = Field(
        ..., description="Witness re-checked by the independent condition and axiom checkers",
    )


class SearchReport(BaseModel):
    """Outcome of a verification suite or a counterexample miner."""

    kind: str
    n: int = Field(..., ge=1)
    construction: Optional[str] = None
    constraints: list[str] = Field(default_factory=list)
    conditions: list[str] = Field(default_factory=list)
    mode: str = Field(..., description="exhaustive | sampled | pairs")
    seed: Optional[int] = None
    space_size: int = Field(0, ge=0, description="Sub-respecting candidates at this size")
    candidates_examined: int = 0
    targeted_examined: int = Field(0, description="Weak-order F swept next to samples")
    candidates_satisfying: int = Field(0, description="Candidates meeting every constraint")
    violation_count: int = 0
    violations: list[Violation] = Field(default_factory=list)
    smallest_witness_size: Optional[int] = None
    details: dict[str, Any] = Field(default_factory=dict)
    elapsed_ms: Optional[float] = None

    @property
    def clean(self) -> bool:
        return self.violation_count == 0

    def as_dict(self) -> dict[str, Any]:
        return self.model_dump(exclude_none=True)
