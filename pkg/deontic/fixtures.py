"""Bundled example models used by `demo`, `--dump` and the tests.

The Prisoners' Dilemma prison terms (CC:1, CD:3, DC:0, DD:2) are fixture
data chosen to match the classical payoff ordering; they are not taken from
any published table. World names read "my choice, their choice".
"""

from models.files import ModelFile
from models.worlds import Prop
from deontic.loader import LoadedModel, materialize

PD_QUERY = "O(~C_me | D_other)"

_PRISONERS_DILEMMA = {
    "worlds": ["CC", "CD", "DC", "DD"],
    "valuation": {
        "C_me": ["CC", "CD"],
        "D_me": ["DC", "DD"],
        "C_other": ["CC", "DC"],
        "D_other": ["CD", "DD"],
    },
    "scores": {"CC": 1, "CD": 3, "DC": 0, "DD": 2},
    "options": {"construction": "sup"},
}

# Four worlds with ⟦A⟧ = {2,3} and ⟦B⟧ = {1,3}: a generic pair. Scores rank
# world 3 best, so F(W) ⊆ ⟦A⟧ and the conflict derivation has its seed.
_CONFLICT = {
    "worlds": ["0", "1", "2", "3"],
    "valuation": {"A": ["2", "3"], "B": ["1", "3"]},
    "scores": {"0": 3, "1": 2, "2": 1, "3": 0},
    "options": {"construction": "sup"},
}

FIXTURES = {
    "pd": _PRISONERS_DILEMMA,
    "conflict": _CONFLICT,
}


def fixture_file(name: str) -> ModelFile:
    try:
        data = FIXTURES[name]
    except KeyError:
        raise KeyError(f"unknown fixture {name!r}; known: {', '.join(FIXTURES)}") from None
    return ModelFile.model_validate(data)


def prisoners_dilemma() -> LoadedModel:
    return materialize(fixture_file("pd"))


def conflict_model() -> LoadedModel:
    return materialize(fixture_file("conflict"))


def conflict_pair() -> tuple[Prop, Prop]:
    """(⟦A⟧, ⟦B⟧) of the conflict fixture."""
    model = conflict_model()
    return model.valuation["A"], model.valuation["B"]
