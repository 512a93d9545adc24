from models.errors import (
    CtdError,
    FormulaSyntaxError,
    GenericityError,
    ModelFileError,
    SizeGuardError,
    UnboundAtomError,
    UniverseError,
    UnknownConditionError,
)
from models.formula import (
    And,
    Atom,
    Bottom,
    Formula,
    Not,
    Obligation,
    Or,
    Top,
    Valuation,
    extension,
    parse_formula,
    parse_obligation,
    to_text,
)
from models.verdict import Verdict
from models.worlds import MAX_WORLDS, Prop, WorldSet, mutually_generic

__all__ = [
    "And",
    "Atom",
    "Bottom",
    "CtdError",
    "Formula",
    "FormulaSyntaxError",
    "GenericityError",
    "MAX_WORLDS",
    "ModelFileError",
    "Not",
    "Obligation",
    "Or",
    "Prop",
    "SizeGuardError",
    "Top",
    "UnboundAtomError",
    "UniverseError",
    "UnknownConditionError",
    "Valuation",
    "Verdict",
    "WorldSet",
    "extension",
    "mutually_generic",
    "parse_formula",
    "parse_obligation",
    "to_text",
]
