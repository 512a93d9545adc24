"""Propositional formulas over named atoms: AST, parser, printer, extension.

Surface syntax (ASCII only)::

    f := "T" | "F" | ident | "~" f | f "&" f | f "|" f | "(" f ")"

with precedence ``~ > & > |`` and left associativity. ``T``/``F`` are the
constants ⊤/⊥, so neither can name an atom.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Mapping, Union

from lark import Lark, Transformer
from lark.exceptions import UnexpectedCharacters, UnexpectedEOF, UnexpectedInput, UnexpectedToken

from models.errors import FormulaSyntaxError, UnboundAtomError, UniverseError
from models.worlds import Prop, WorldSet


# ─── AST ─────────────────────────────────────────────────────


@dataclass(frozen=True)
class Top:
    pass


@dataclass(frozen=True)
class Bottom:
    pass


@dataclass(frozen=True)
class Atom:
    name: str


@dataclass(frozen=True)
class Not:
    arg: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


Formula = Union[Top, Bottom, Atom, Not, And, Or]


# ─── Parser ──────────────────────────────────────────────────

_GRAMMAR = r"""
?start: disj

?disj: disj "|" conj   -> or_
     | conj

?conj: conj "&" neg    -> and_
     | neg

?neg: "~" neg          -> not_
    | primary

?primary: TOP          -> top
        | BOTTOM       -> bottom
        | NAME         -> var
        | "(" disj ")"

TOP: "T"
BOTTOM: "F"
NAME: /[A-Za-z_][A-Za-z0-9_]*/

%import common.WS
%ignore WS
"""

# lark's auto-generated terminal names, shown to users as the literal token.
_TOKEN_DISPLAY = {
    "TOP": "T",
    "BOTTOM": "F",
    "NAME": "identifier",
    "TILDE": "~",
    "AMPERSAND": "&",
    "VBAR": "|",
    "LPAR": "(",
    "RPAR": ")",
    "$END": "end of input",
}


class _FormulaBuilder(Transformer):
    def top(self, _items):
        return Top()

    def bottom(self, _items):
        return Bottom()

    def var(self, items):
        return Atom(str(items[0]))

    def not_(self, items):
        return Not(items[0])

    def and_(self, items):
        return And(items[0], items[1])

    def or_(self, items):
        return Or(items[0], items[1])


_parser = Lark(_GRAMMAR, parser="lalr", transformer=_FormulaBuilder())


def _byte_offset(text: str, pos: int) -> int:
    return len(text[:pos].encode("utf-8"))


def _syntax_error(text: str, err: UnexpectedInput) -> FormulaSyntaxError:
    if isinstance(err, UnexpectedToken):
        expected = err.expected
        pos = len(text) if err.token.type == "$END" else err.token.start_pos
    elif isinstance(err, UnexpectedCharacters):
        expected = err.allowed or set()
        pos = err.pos_in_stream
    elif isinstance(err, UnexpectedEOF):
        expected = err.expected
        pos = len(text)
    else:  # pragma: no cover
        expected, pos = set(), getattr(err, "pos_in_stream", 0) or 0
    shown = [_TOKEN_DISPLAY.get(name, name) for name in expected]
    return FormulaSyntaxError(text, _byte_offset(text, pos), shown)


def parse_formula(text: str) -> Formula:
    """Parse `text` into a Formula; raises FormulaSyntaxError on bad input."""
    try:
        return _parser.parse(text)
    except UnexpectedInput as err:
        raise _syntax_error(text, err) from None


# ─── Printer ─────────────────────────────────────────────────

_OR, _AND, _NOT, _ATOMIC = 1, 2, 3, 4


def _render(f: Formula) -> tuple[str, int]:
    match f:
        case Top():
            return "T", _ATOMIC
        case Bottom():
            return "F", _ATOMIC
        case Atom(name):
            return name, _ATOMIC
        case Not(arg):
            return "~" + _wrap(arg, _NOT), _NOT
        case And(left, right):
            return f"{_wrap(left, _AND)} & {_wrap(right, _NOT)}", _AND
        case Or(left, right):
            return f"{_wrap(left, _OR)} | {_wrap(right, _AND)}", _OR
    raise TypeError(f"not a formula: {f!r}")


def _wrap(f: Formula, min_prec: int) -> str:
    text, prec = _render(f)
    return text if prec >= min_prec else f"({text})"


def to_text(f: Formula) -> str:
    """Canonical text with minimal parentheses; parses back to the same AST."""
    return _render(f)[0]


def atoms(f: Formula) -> Iterator[str]:
    """Atom names in left-to-right order (with repeats)."""
    match f:
        case Atom(name):
            yield name
        case Not(arg):
            yield from atoms(arg)
        case And(left, right) | Or(left, right):
            yield from atoms(left)
            yield from atoms(right)


# ─── Semantics ───────────────────────────────────────────────


class Valuation:
    """Binding of atom names to propositions over one shared universe."""

    def __init__(self, universe: WorldSet, bindings: Mapping[str, Prop]) -> None:
        for name, prop in bindings.items():
            if prop.universe != universe:
                raise UniverseError(f"atom {name!r} is bound over a different universe")
        self.universe = universe
        self._bindings = dict(bindings)

    def __getitem__(self, name: str) -> Prop:
        try:
            return self._bindings[name]
        except KeyError:
            raise UnboundAtomError(name) from None

    def __contains__(self, name: str) -> bool:
        return name in self._bindings

    def __iter__(self) -> Iterator[str]:
        return iter(self._bindings)

    def items(self):
        return self._bindings.items()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Valuation):
            return NotImplemented
        return self.universe == other.universe and self._bindings == other._bindings

    def __repr__(self) -> str:
        inner = ", ".join(f"{k}={v}" for k, v in self._bindings.items())
        return f"Valuation({inner})"


def _mask(f: Formula, v: Valuation) -> int:
    full = v.universe.full
    match f:
        case Top():
            return full
        case Bottom():
            return 0
        case Atom(name):
            return v[name].mask
        case Not(arg):
            return full & ~_mask(arg, v)
        case And(left, right):
            return _mask(left, v) & _mask(right, v)
        case Or(left, right):
            return _mask(left, v) | _mask(right, v)
    raise TypeError(f"not a formula: {f!r}")


def extension(f: Union[Formula, str], v: Valuation) -> Prop:
    """⟦f⟧: the set of worlds where `f` is true under `v`."""
    if isinstance(f, str):
        f = parse_formula(f)
    return Prop(v.universe, _mask(f, v))


# ─── Conditional obligation queries ──────────────────────────


@dataclass(frozen=True)
class Obligation:
    """O(B|A): `obligation` is B, `condition` is A."""

    obligation: Formula
    condition: Formula

    def __str__(self) -> str:
        return f"O({to_text(self.obligation)} | {to_text(self.condition)})"


def parse_obligation(text: str) -> Obligation:
    """Parse ``O(B|A)``.

    The bar separating B from A is the last ``|`` outside parentheses, so a
    disjunctive condition must be parenthesized: ``O(p | (q | r))``.
    """
    stripped = text.strip()
    lead = len(text) - len(text.lstrip())
    if not stripped.startswith("O("):
        raise FormulaSyntaxError(text, _byte_offset(text, lead), ["O("])
    if not stripped.endswith(")"):
        raise FormulaSyntaxError(text, _byte_offset(text, len(text.rstrip())), [")"])
    start = lead + 2
    inner = stripped[2:-1]

    depth = 0
    bar = -1
    for i, ch in enumerate(inner):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "|" and depth == 0:
            bar = i
    if bar < 0:
        raise FormulaSyntaxError(text, _byte_offset(text, start + len(inner)), ["|"])

    def part(lo: int, hi: int) -> Formula:
        try:
            return parse_formula(inner[lo:hi])
        except FormulaSyntaxError as e:
            # Re-anchor the offset to the whole query.
            prefix = len(text[: start + lo].encode("utf-8"))
            raise FormulaSyntaxError(text, prefix + e.offset, e.expected) from None

    return Obligation(obligation=part(0, bar), condition=part(bar + 1, len(inner)))
