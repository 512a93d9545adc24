"""Model file schema: the JSON document `ctd_check` reads and `--dump` writes.

A model names its worlds, binds atoms to sets of worlds, and gives exactly one
source for the obligation table:

    F        context key -> ideal world labels      (needs options.construction)
    scores   world label -> number, F = argmin     (needs options.construction)
    ob       context key -> list of obligatory propositions

Context keys are comma-joined sorted world labels, "" for the empty context.
Label-level checks (undeclared worlds, key spelling, totality) live in
`deontic.loader`, which reports them with a dotted location.
"""

import re
from typing import Literal, Optional

from pydantic import BaseModel, Field, FiniteFloat, field_validator, model_validator

from models.worlds import MAX_WORLDS

ATOM_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
RESERVED_ATOMS = frozenset({"T", "F"})


class ModelOptions(BaseModel):
    model_config = {"extra": "forbid"}

    construction: Optional[Literal["sup", "cap"]] = Field(
        None, description="How F generates ob: sup (supersets of F(X)) or cap (Y∩X = F(X))",
    )


class ModelFile(BaseModel):
    """A finite model: worlds, valuation, and one of F / scores / ob."""

    model_config = {"extra": "forbid"}

    worlds: list[str] = Field(..., min_length=1, max_length=MAX_WORLDS, description="World labels")
    valuation: dict[str, list[str]] = Field(
        default_factory=dict, description="Atom name -> worlds where it is true",
    )
    F: Optional[dict[str, list[str]]] = Field(None, description="Context key -> ideal worlds")
    scores: Optional[dict[str, FiniteFloat]] = Field(
        None, description="World label -> finite score; lower is more ideal, ties allowed",
    )
    ob: Optional[dict[str, list[list[str]]]] = Field(
        None, description="Context key -> obligatory propositions",
    )
    options: ModelOptions = Field(default_factory=ModelOptions)

    @field_validator("worlds")
    @classmethod
    def worlds_well_formed(cls, v: list[str]) -> list[str]:
        for label in v:
            if not label or label != label.strip() or "," in label:
                raise ValueError(f"world label {label!r} must be nonempty, unpadded and comma-free")
        dupes = sorted({label for label in v if v.count(label) > 1})
        if dupes:
            raise ValueError(f"duplicate world labels: {', '.join(dupes)}")
        return v

    @field_validator("valuation")
    @classmethod
    def atom_names(cls, v: dict[str, list[str]]) -> dict[str, list[str]]:
        for name in v:
            if not ATOM_NAME.fullmatch(name) or name in RESERVED_ATOMS:
                raise ValueError(f"{name!r} is not a usable atom name")
        return v

    @model_validator(mode="after")
    def one_source(self) -> "ModelFile":
        given = [name for name in ("F", "scores", "ob") if getattr(self, name) is not None]
        if len(given) != 1:
            raise ValueError(
                f"exactly one of F, scores, ob is required (got {', '.join(given) or 'none'})"
            )
        if given[0] == "ob":
            if self.options.construction is not None:
                raise ValueError("options.construction applies only to F or scores")
        elif self.options.construction is None:
            raise ValueError(f"options.construction is required with {given[0]}")
        return self

    @property
    def source(self) -> str:
        return next(name for name in ("F", "scores", "ob") if getattr(self, name) is not None)
