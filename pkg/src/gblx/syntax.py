"""Formulas over the language {&, |, *, ->, 0, 1} plus named unary modals.

Abbreviations (~, <->, P, F) are expanded while parsing, so the tree only ever
contains the seven primitive node kinds below.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator

from .errors import FormulaSyntaxError

RESERVED_MODALS = ("G", "H", "P", "F", "box")
_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
_VAR = re.compile(r"p[0-9]+\Z")


class ModalSignature:
    """An ordered set I of modal connective names."""

    __slots__ = ("names",)

    def __init__(self, names: Iterable[str] = ()):
        names = tuple(names)
        for name in names:
            if not isinstance(name, str) or not _NAME.match(name) or not name.isascii():
                raise ValueError(f"invalid modal name {name!r}")
            if _VAR.match(name) or name in ("P", "F"):
                raise ValueError(f"modal name {name!r} clashes with a reserved token")
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate modal names in {names}")
        self.names = names

    def __contains__(self, name):
        return name in self.names

    def __iter__(self):
        return iter(self.names)

    def __len__(self):
        return len(self.names)

    def __eq__(self, other):
        return isinstance(other, ModalSignature) and self.names == other.names

    def __hash__(self):
        return hash(self.names)

    def __repr__(self):
        return f"ModalSignature({list(self.names)!r})"


PLAIN = ModalSignature()
MONO = ModalSignature(["box"])
TENSE = ModalSignature(["G", "H"])


def as_signature(sig) -> ModalSignature:
    if sig is None:
        return PLAIN
    if isinstance(sig, ModalSignature):
        return sig
    return ModalSignature(sig)


# ---------------------------------------------------------------- nodes

class Formula:
    __slots__ = ("_hash",)

    def _key(self) -> tuple:
        raise NotImplementedError

    def __init_hash(self):
        object.__setattr__(self, "_hash", hash((type(self).__name__,) + self._key()))

    def __post_init__(self):
        self.__init_hash()

    def __eq__(self, other):
        if self is other:
            return True
        return (
            type(self) is type(other)
            and self._hash == other._hash
            and self._key() == other._key()
        )

    def __hash__(self):
        return self._hash

    def __str__(self):
        return to_text(self)

    def __repr__(self):
        return f"<{to_text(self)}>"


@dataclass(frozen=True, eq=False, repr=False)
class Var(Formula):
    index: int

    def __post_init__(self):
        if self.index < 0:
            raise ValueError("variable indices are nonnegative")
        super().__post_init__()

    def _key(self):
        return (self.index,)


@dataclass(frozen=True, eq=False, repr=False)
class Zero(Formula):
    def _key(self):
        return ()


@dataclass(frozen=True, eq=False, repr=False)
class One(Formula):
    def _key(self):
        return ()


@dataclass(frozen=True, eq=False, repr=False)
class Binary(Formula):
    left: Formula
    right: Formula

    symbol = "?"

    def _key(self):
        return (self.left, self.right)


class Meet(Binary):
    symbol = "&"


class Join(Binary):
    symbol = "|"


class Fuse(Binary):
    symbol = "*"


class Imp(Binary):
    symbol = "->"


@dataclass(frozen=True, eq=False, repr=False)
class Modal(Formula):
    name: str
    sub: Formula

    def _key(self):
        return (self.name, self.sub)


BINARY_KINDS = (Meet, Join, Fuse, Imp)
ZERO = Zero()
ONE = One()


def neg(f: Formula) -> Formula:
    return Imp(f, ZERO)


def iff(a: Formula, b: Formula) -> Formula:
    return Meet(Imp(a, b), Imp(b, a))


# ---------------------------------------------------------------- measures

def height(f: Formula) -> int:
    if isinstance(f, Binary):
        return 1 + max(height(f.left), height(f.right))
    if isinstance(f, Modal):
        return 1 + height(f.sub)
    return 0


def variables(f: Formula) -> frozenset:
    out = set()
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, Var):
            out.add(g.index)
        elif isinstance(g, Binary):
            stack.append(g.left)
            stack.append(g.right)
        elif isinstance(g, Modal):
            stack.append(g.sub)
    return frozenset(out)


def modal_names(f: Formula) -> frozenset:
    out = set()
    for g in subformulas(f):
        if isinstance(g, Modal):
            out.add(g.name)
    return frozenset(out)


def subformulas(f: Formula) -> Iterator[Formula]:
    yield f
    if isinstance(f, Binary):
        yield from subformulas(f.left)
        yield from subformulas(f.right)
    elif isinstance(f, Modal):
        yield from subformulas(f.sub)


def is_pure(f: Formula) -> bool:
    return not modal_names(f)


def relabel(f: Formula, mapping: dict) -> Formula:
    """Rename modal connectives; names missing from ``mapping`` are kept."""
    if isinstance(f, Binary):
        return type(f)(relabel(f.left, mapping), relabel(f.right, mapping))
    if isinstance(f, Modal):
        return Modal(mapping.get(f.name, f.name), relabel(f.sub, mapping))
    return f


def substitute(f: Formula, subst: dict) -> Formula:
    """Replace variables by formulas (simultaneously)."""
    if isinstance(f, Var):
        return subst.get(f.index, f)
    if isinstance(f, Binary):
        return type(f)(substitute(f.left, subst), substitute(f.right, subst))
    if isinstance(f, Modal):
        return Modal(f.name, substitute(f.sub, subst))
    return f


# ---------------------------------------------------------------- printing

def to_text(f: Formula) -> str:
    if isinstance(f, Var):
        return f"p{f.index}"
    if isinstance(f, Zero):
        return "0"
    if isinstance(f, One):
        return "1"
    if isinstance(f, Binary):
        return f"({to_text(f.left)} {f.symbol} {to_text(f.right)})"
    if isinstance(f, Modal):
        return f"({f.name} {to_text(f.sub)})"
    raise TypeError(f"not a formula: {f!r}")


# ---------------------------------------------------------------- parsing

_TOKEN = re.compile(
    r"\s*(?:(?P<arrow><->|->)|(?P<op>[&|*~()])|(?P<const>[01])(?![0-9A-Za-z_])"
    r"|(?P<name>[A-Za-z_][A-Za-z0-9_]*))"
)


def _tokenize(text: str):
    tokens = []
    pos = 0
    end = len(text)
    while pos < end:
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            start = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise FormulaSyntaxError(
                f"unknown token {text[start]!r}", len(text[:start].encode())
            )
        kind = m.lastgroup
        value = m.group(kind)
        offset = len(text[: m.start(kind)].encode())
        tokens.append((kind, value, offset))
        pos = m.end()
    tokens.append(("end", "", len(text.encode())))
    return tokens


class _Parser:
    def __init__(self, text, sig: ModalSignature):
        self.tokens = _tokenize(text)
        self.i = 0
        self.sig = sig

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value):
        kind, val, off = self.take()
        if val != value:
            found = "end of input" if kind == "end" else repr(val)
            raise FormulaSyntaxError(f"expected {value!r}, found {found}", off)

    def parse(self):
        f = self.iff()
        kind, val, off = self.peek()
        if kind != "end":
            raise FormulaSyntaxError(f"unexpected {val!r}", off)
        return f

    def iff(self):
        f = self.imp()
        while self.peek()[1] == "<->":
            self.take()
            f = iff(f, self.imp())
        return f

    def imp(self):
        f = self.disj()
        if self.peek()[1] == "->":
            self.take()
            return Imp(f, self.imp())
        return f

    def _left_assoc(self, symbol, kind, sub):
        f = sub()
        while self.peek()[1] == symbol:
            self.take()
            f = kind(f, sub())
        return f

    def disj(self):
        return self._left_assoc("|", Join, self.conj)

    def conj(self):
        return self._left_assoc("&", Meet, self.fuse)

    def fuse(self):
        return self._left_assoc("*", Fuse, self.unary)

    def unary(self):
        kind, val, off = self.peek()
        if val == "~":
            self.take()
            return neg(self.unary())
        if kind == "name" and not _VAR.match(val):
            self.take()
            sub = self.unary()
            if val in self.sig:
                return Modal(val, sub)
            if val == "P" and "H" in self.sig:
                return neg(Modal("H", neg(sub)))
            if val == "F" and "G" in self.sig:
                return neg(Modal("G", neg(sub)))
            raise FormulaSyntaxError(f"unknown modal name {val!r}", off)
        return self.atom()

    def atom(self):
        kind, val, off = self.take()
        if kind == "name":
            return Var(int(val[1:]))
        if kind == "const":
            return ZERO if val == "0" else ONE
        if val == "(":
            f = self.iff()
            self.expect(")")
            return f
        found = "end of input" if kind == "end" else repr(val)
        raise FormulaSyntaxError(f"expected a formula, found {found}", off)


def parse(text: str, sig=None) -> Formula:
    """Parse ASCII formula text.

    Precedence from tightest: ``~`` and modals, ``*``, ``&``, ``|``, ``->``
    (right associative), ``<->``.
    """
    return _Parser(text, as_signature(sig)).parse()


def parse_equation(text: str, sig=None) -> tuple[Formula, Formula]:
    """Parse ``"<formula> = <formula>"``."""
    if text.count("=") != 1:
        raise FormulaSyntaxError("an equation needs exactly one '='")
    left, right = text.split("=")
    sides = []
    for label, part, shift in (("left", left, 0), ("right", right, len(left) + 1)):
        try:
            sides.append(parse(part, sig))
        except FormulaSyntaxError as exc:
            offset = None if exc.offset is None else exc.offset + shift
            raise FormulaSyntaxError(f"{label} side: {exc.reason}", offset) from None
    lhs, rhs = sides
    return lhs, rhs


# ---------------------------------------------------------------- translations

def translate(f: Formula, modal: str) -> Formula:
    """Box every variable and every implication with ``modal``."""
    if isinstance(f, Var):
        return Modal(modal, f)
    if isinstance(f, (Zero, One)):
        return f
    if isinstance(f, Imp):
        return Modal(modal, Imp(translate(f.left, modal), translate(f.right, modal)))
    if isinstance(f, Binary):
        return type(f)(translate(f.left, modal), translate(f.right, modal))
    raise ValueError(f"translation input must be modal-free, found {to_text(f)}")


def translate_m(f: Formula) -> Formula:
    return translate(f, "box")


def translate_t(f: Formula) -> Formula:
    return translate(f, "G")
