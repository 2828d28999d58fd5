"""Tense-logic formulas in negation normal form.

Formulas are immutable dataclass values.  Negation only ever sits on an
atom; general negation and implication exist solely in the concrete
syntax and are eliminated by the parser.

ASCII syntax::

    []A   box            <>A   diamond
    [*]A  black box      <*>A  black diamond
    A & B, A | B, A -> B, ~A, (A)

Unary operators bind tightest, then ``&``, ``|`` and finally ``->``
(right-associative).
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from typing import Iterator, Union


class Diamond(enum.Enum):
    WHITE = "w"
    BLACK = "b"

    def inverse(self) -> "Diamond":
        return Diamond.BLACK if self is Diamond.WHITE else Diamond.WHITE

    @property
    def symbol(self) -> str:
        return "◇" if self is Diamond.WHITE else "◆"


@dataclass(frozen=True)
class Atom:
    name: str


@dataclass(frozen=True)
class NegAtom:
    name: str


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Box:
    body: "Formula"


@dataclass(frozen=True)
class BlackBox:
    body: "Formula"


@dataclass(frozen=True)
class Dia:
    body: "Formula"


@dataclass(frozen=True)
class BlackDia:
    body: "Formula"


Formula = Union[Atom, NegAtom, And, Or, Box, BlackBox, Dia, BlackDia]

MODAL = (Box, BlackBox, Dia, BlackDia)
BINARY = (And, Or)
LITERAL = (Atom, NegAtom)

# Reserved atom used to spell the constants.
RESERVED_ATOM = "a0"
BOTTOM: Formula = And(Atom(RESERVED_ATOM), NegAtom(RESERVED_ATOM))
TOP: Formula = Or(Atom(RESERVED_ATOM), NegAtom(RESERVED_ATOM))


def diamond_of(f: Formula) -> Diamond | None:
    """Colour of a diamond formula, None for anything else."""
    if isinstance(f, Dia):
        return Diamond.WHITE
    if isinstance(f, BlackDia):
        return Diamond.BLACK
    return None


def make_diamond(colour: Diamond, body: Formula) -> Formula:
    return Dia(body) if colour is Diamond.WHITE else BlackDia(body)


def nnf_negate(f: Formula) -> Formula:
    match f:
        case Atom(name):
            return NegAtom(name)
        case NegAtom(name):
            return Atom(name)
        case And(left, right):
            return Or(nnf_negate(left), nnf_negate(right))
        case Or(left, right):
            return And(nnf_negate(left), nnf_negate(right))
        case Box(body):
            return Dia(nnf_negate(body))
        case Dia(body):
            return Box(nnf_negate(body))
        case BlackBox(body):
            return BlackDia(nnf_negate(body))
        case BlackDia(body):
            return BlackBox(nnf_negate(body))
    raise TypeError(f"not a formula: {f!r}")


def degree(f: Formula) -> int:
    if isinstance(f, LITERAL):
        return 0
    if isinstance(f, BINARY):
        return max(degree(f.left), degree(f.right))
    return 1 + degree(f.body)


def size(f: Formula) -> int:
    """Number of syntax-tree nodes; a negated atom counts as one."""
    if isinstance(f, LITERAL):
        return 1
    if isinstance(f, BINARY):
        return 1 + size(f.left) + size(f.right)
    return 1 + size(f.body)


def iter_subformulas(f: Formula) -> Iterator[Formula]:
    yield f
    if isinstance(f, BINARY):
        yield from iter_subformulas(f.left)
        yield from iter_subformulas(f.right)
    elif isinstance(f, MODAL):
        yield from iter_subformulas(f.body)


def subformula_set(f: Formula) -> frozenset[Formula]:
    return frozenset(iter_subformulas(f))


def atoms(f: Formula) -> frozenset[str]:
    return frozenset(g.name for g in iter_subformulas(f) if isinstance(g, LITERAL))


def is_black_free(f: Formula) -> bool:
    return not any(isinstance(g, (BlackBox, BlackDia)) for g in iter_subformulas(f))


# --- printing ---------------------------------------------------------------

_ASCII_PREFIX = {Box: "[]", BlackBox: "[*]", Dia: "<>", BlackDia: "<*>"}
_UNICODE_PREFIX = {Box: "□", BlackBox: "■", Dia: "◇", BlackDia: "◆"}
_PRECEDENCE = {Or: 1, And: 2}


def _render(f: Formula, unicode: bool) -> str:
    prefixes = _UNICODE_PREFIX if unicode else _ASCII_PREFIX
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, NegAtom):
        return ("¬" if unicode else "~") + f.name
    if isinstance(f, MODAL):
        inner = _render(f.body, unicode)
        if isinstance(f.body, BINARY):
            inner = f"({inner})"
        return prefixes[type(f)] + inner
    op = (" ∧ " if unicode else " & ") if isinstance(f, And) else (" ∨ " if unicode else " | ")
    prec = _PRECEDENCE[type(f)]
    left = _render(f.left, unicode)
    right = _render(f.right, unicode)
    # Binary operators parse left-associatively, so only a right operand
    # of equal precedence needs brackets.
    if isinstance(f.left, BINARY) and _PRECEDENCE[type(f.left)] < prec:
        left = f"({left})"
    if isinstance(f.right, BINARY) and _PRECEDENCE[type(f.right)] <= prec:
        right = f"({right})"
    return left + op + right


def to_text(f: Formula) -> str:
    """ASCII rendering that :func:`parse` reads back to the same formula."""
    return _render(f, unicode=False)


def to_unicode(f: Formula) -> str:
    return _render(f, unicode=True)


# --- parsing ----------------------------------------------------------------


class ParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


_TOKEN_RE = re.compile(
    r"\s*(?:(?P<struct>[ob]\s*\{|[∘•]\s*\{)|(?P<ident>[a-z][a-zA-Z0-9_]*)"
    r"|(?P<op>->|\[\*\]|<\*>|\[\]|<>|[~&|(),{}¬∧∨□■◇◆→]))"
)

_UNICODE_OPS = {"¬": "~", "∧": "&", "∨": "|", "□": "[]", "■": "[*]", "◇": "<>", "◆": "<*>", "→": "->"}


@dataclass(frozen=True)
class Token:
    kind: str  # "ident", "op", "struct", "end"
    text: str
    pos: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == pos:
            start = pos + (len(text[pos:]) - len(text[pos:].lstrip()))
            raise ParseError(f"unexpected character {text[start]!r}", start)
        kind = m.lastgroup
        value = m.group(kind)
        start = m.start(kind)
        if kind == "struct":
            value = "o" if value[0] in "o∘" else "b"
        elif kind == "op":
            value = _UNICODE_OPS.get(value, value)
        tokens.append(Token(kind, value, start))
        pos = m.end()
    tokens.append(Token("end", "", len(text)))
    return tokens


_UNARY = {"[]": Box, "[*]": BlackBox, "<>": Dia, "<*>": BlackDia}


class TokenStream:
    """Recursive-descent formula reader over a token list.

    Shared with the sequent reader, which interleaves structure tokens.
    """

    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.index = 0

    @property
    def peek(self) -> Token:
        return self.tokens[self.index]

    def advance(self) -> Token:
        tok = self.tokens[self.index]
        self.index += 1
        return tok

    def expect(self, text: str) -> Token:
        tok = self.peek
        if tok.text != text or tok.kind not in ("op",):
            raise ParseError(f"expected {text!r} but found {tok.text or 'end of input'!r}", tok.pos)
        return self.advance()

    def formula(self) -> Formula:
        return self._implication()

    def _operand(self, parse, op: Token) -> Formula:
        tok = self.peek
        if tok.kind == "end" or (tok.kind == "op" and tok.text in ("&", "|", "->", ")", ",", "}")):
            raise ParseError(f"operator {op.text!r} is missing an operand", tok.pos)
        return parse()

    def _implication(self) -> Formula:
        left = self._disjunction()
        if self.peek.kind == "op" and self.peek.text == "->":
            op = self.advance()
            right = self._operand(self._implication, op)
            return Or(nnf_negate(left), right)
        return left

    def _disjunction(self) -> Formula:
        left = self._conjunction()
        while self.peek.kind == "op" and self.peek.text == "|":
            op = self.advance()
            left = Or(left, self._operand(self._conjunction, op))
        return left

    def _conjunction(self) -> Formula:
        left = self._unary()
        while self.peek.kind == "op" and self.peek.text == "&":
            op = self.advance()
            left = And(left, self._operand(self._unary, op))
        return left

    def _unary(self) -> Formula:
        tok = self.peek
        if tok.kind == "ident":
            self.advance()
            return Atom(tok.text)
        if tok.kind == "op":
            if tok.text == "~":
                self.advance()
                return nnf_negate(self._operand(self._unary, tok))
            if tok.text in _UNARY:
                self.advance()
                return _UNARY[tok.text](self._operand(self._unary, tok))
            if tok.text == "(":
                self.advance()
                inner = self.formula()
                self.expect(")")
                return inner
        if tok.kind == "end":
            raise ParseError("unexpected end of input", tok.pos)
        raise ParseError(f"unexpected token {tok.text!r}", tok.pos)


def parse(text: str) -> Formula:
    stream = TokenStream(tokenize(text))
    f = stream.formula()
    if stream.peek.kind != "end":
        raise ParseError(f"unexpected token {stream.peek.text!r}", stream.peek.pos)
    return f
