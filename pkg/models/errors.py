"""Exception hierarchy shared by the model, engine and CLI layers.

Everything the checker raises on bad *input* derives from `CtdError`; the CLI
maps those to exit code 2. Bugs in our own code still raise normal exceptions
and surface in Sentry.
"""

from __future__ import annotations

from typing import Iterable, Optional


class CtdError(Exception):
    """Base class for expected, user-facing failures."""


class UniverseError(CtdError):
    """Bad world labels, too many worlds, or props from different universes."""


class FormulaSyntaxError(CtdError):
    """Raised by `parse_formula` with the byte offset of the offending input."""

    def __init__(self, text: str, offset: int, expected: Iterable[str]) -> None:
        self.text = text
        self.offset = offset
        self.expected = tuple(sorted(set(expected)))
        shown = ", ".join(self.expected) or "end of input"
        super().__init__(f"syntax error at offset {offset}: expected one of {shown}")


class UnboundAtomError(CtdError):
    def __init__(self, atom: str) -> None:
        super().__init__(f"atom {atom!r} is not bound in the valuation")
        self.atom = atom


class GenericityError(CtdError):
    """A derivation step needs a nonempty region of two propositions."""

    def __init__(self, region: str, message: Optional[str] = None) -> None:
        super().__init__(message or f"propositions are not mutually generic: {region} is empty")
        self.region = region


class SizeGuardError(CtdError):
    def __init__(self, operation: str, n: int, limit: int) -> None:
        super().__init__(f"{operation}: universe of {n} worlds exceeds the limit of {limit}")
        self.operation = operation
        self.n = n
        self.limit = limit


class ModelFileError(CtdError):
    """Model file could not be read or fails validation.

    `location` is a dotted path into the document (e.g. ``F.a,b``) or the
    file path itself for I/O and JSON errors.
    """

    def __init__(self, location: str, message: str) -> None:
        super().__init__(f"{location}: {message}")
        self.location = location


class UnknownConditionError(CtdError):
    def __init__(self, name: str, known: list[str]) -> None:
        super().__init__(f"unknown condition {name!r}; known: {', '.join(known)}")
        self.name = name
