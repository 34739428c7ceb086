"""Formulas over {~, ->, [], <>}: AST, parser, renderer and schema matching.

Disjunction, conjunction and the recovery operators are abbreviations and
are expanded while parsing, so the tree only ever holds the four primitive
connectives.  Single uppercase letters are metavariables; a formula that
contains them is a schema.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Mapping, Union

from mnm.errors import FormulaSyntaxError, MissingBinding


@dataclass(frozen=True, eq=True)
class Atom:
    name: str
    _hash: int = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if not self.name:
            raise ValueError("atom names must be nonempty")
        object.__setattr__(self, "_hash", hash(("atom", self.name)))

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if type(other) is not Atom or self._hash != other._hash:
            return False
        return self.name == other.name

    def __hash__(self) -> int:
        return self._hash

    def __str__(self) -> str:
        return render(self)


@dataclass(frozen=True, eq=True)
class Neg:
    child: Formula
    _hash: int = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_hash", hash(("neg", self.child)))

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if type(other) is not Neg or self._hash != other._hash:
            return False
        return self.child == other.child

    def __hash__(self) -> int:
        return self._hash

    def __str__(self) -> str:
        return render(self)


@dataclass(frozen=True, eq=True)
class Box:
    child: Formula
    _hash: int = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_hash", hash(("box", self.child)))

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if type(other) is not Box or self._hash != other._hash:
            return False
        return self.child == other.child

    def __hash__(self) -> int:
        return self._hash

    def __str__(self) -> str:
        return render(self)


@dataclass(frozen=True, eq=True)
class Dia:
    child: Formula
    _hash: int = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_hash", hash(("dia", self.child)))

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if type(other) is not Dia or self._hash != other._hash:
            return False
        return self.child == other.child

    def __hash__(self) -> int:
        return self._hash

    def __str__(self) -> str:
        return render(self)


@dataclass(frozen=True, eq=True)
class Imp:
    left: Formula
    right: Formula
    _hash: int = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_hash", hash(("imp", self.left, self.right)))

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if type(other) is not Imp or self._hash != other._hash:
            return False
        return self.left == other.left and self.right == other.right

    def __hash__(self) -> int:
        return self._hash

    def __str__(self) -> str:
        return render(self)


Formula = Union[Atom, Neg, Imp, Box, Dia]
Unary = (Neg, Box, Dia)


@dataclass(frozen=True)
class Sequent:
    premises: tuple[Formula, ...]
    conclusion: Formula

    def __str__(self) -> str:
        lhs = ", ".join(render(p) for p in self.premises)
        return f"{lhs} |= {render(self.conclusion)}" if lhs else f"|= {render(self.conclusion)}"


# Abbreviations.

def disj(a: Formula, b: Formula) -> Formula:
    return Imp(Neg(a), b)


def conj(a: Formula, b: Formula) -> Formula:
    return Neg(Imp(a, Neg(b)))


def circ(a: Formula) -> Formula:
    return Imp(Box(a), Dia(a))


def bullet(a: Formula) -> Formula:
    return Neg(circ(a))


def circ_prime(a: Formula) -> Formula:
    return conj(Imp(Box(a), a), Imp(Box(Neg(a)), Neg(a)))


def big_disj(items: Iterable[Formula]) -> Formula:
    """Left-associated disjunction of a nonempty sequence."""
    it = iter(items)
    try:
        acc = next(it)
    except StopIteration:
        raise ValueError("empty disjunction") from None
    for f in it:
        acc = disj(acc, f)
    return acc


# Lexer and parser.

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<op>->|\[\]|<>|[~|&()]|¬|□|◇|→|∨|∧|∘'|∘′|∘|•)
  | (?P<ident>[A-Za-z][A-Za-z0-9_]*)
  | (?P<bad>.)
    """,
    re.VERBOSE | re.DOTALL,
)

_ALIASES = {
    "¬": "~",
    "□": "[]",
    "◇": "<>",
    "→": "->",
    "∨": "|",
    "∧": "&",
    "∘'": "circt",
    "∘′": "circt",
    "∘": "circ",
    "•": "bullet",
}
_PREFIX = {"~", "[]", "<>", "circ", "bullet", "circt"}
_KEYWORDS = {"circ", "bullet", "circt"}
_START = frozenset(_PREFIX | {"(", "<atom>"})


def is_metavariable(a: Atom) -> bool:
    return len(a.name) == 1 and a.name.isupper()


def _valid_atom_name(name: str) -> bool:
    if len(name) == 1 and name.isupper():
        return True
    return name[0].islower()


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    """Tokens as (kind, value, char offset); kind is 'op', 'atom' or 'end'."""
    tokens = []
    for m in _TOKEN_RE.finditer(text):
        kind = m.lastgroup
        value = m.group()
        pos = m.start()
        if kind == "op":
            tokens.append(("op", _ALIASES.get(value, value), pos))
        elif kind == "ident":
            if value in _KEYWORDS:
                tokens.append(("op", value, pos))
            elif _valid_atom_name(value):
                tokens.append(("atom", value, pos))
            else:
                raise FormulaSyntaxError(
                    f"bad identifier {value!r}", text, _byte_offset(text, pos), _START
                )
        elif kind == "bad":
            raise FormulaSyntaxError(
                f"unexpected character {value!r}", text, _byte_offset(text, pos), _START
            )
    tokens.append(("end", "", len(text)))
    return tokens


def _byte_offset(text: str, pos: int) -> int:
    return len(text[:pos].encode("utf-8"))


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.i]

    def fail(self, expected: Iterable[str]) -> FormulaSyntaxError:
        kind, value, pos = self.peek()
        what = "end of input" if kind == "end" else repr(value)
        return FormulaSyntaxError(
            f"unexpected {what}", self.text, _byte_offset(self.text, pos), frozenset(expected)
        )

    def accept(self, op: str) -> bool:
        # op names never collide with atom names, so comparing values suffices
        if self.tokens[self.i][1] == op:
            self.i += 1
            return True
        return False

    def parse(self) -> Formula:
        f = self.imp()
        if self.peek()[0] != "end":
            raise self.fail({"->", "|", "&", "<end>"})
        return f

    def imp(self) -> Formula:
        left = self.disj()
        if self.tokens[self.i][1] == "->":
            self.i += 1
            return Imp(left, self.imp())
        return left

    def disj(self) -> Formula:
        f = self.conj()
        while self.tokens[self.i][1] == "|":
            self.i += 1
            f = disj(f, self.conj())
        return f

    def conj(self) -> Formula:
        f = self.unary()
        while self.tokens[self.i][1] == "&":
            self.i += 1
            f = conj(f, self.unary())
        return f

    def unary(self) -> Formula:
        kind, value, _ = self.tokens[self.i]
        if kind == "atom":
            self.i += 1
            return Atom(value)
        if kind == "op":
            make = _UNARY.get(value)
            if make is not None:
                self.i += 1
                return make(self.unary())
            if value == "(":
                self.i += 1
                f = self.imp()
                if not self.accept(")"):
                    raise self.fail({")", "->", "|", "&"})
                return f
        raise self.fail(_START)


_UNARY = {"~": Neg, "[]": Box, "<>": Dia, "circ": circ, "bullet": bullet, "circt": circ_prime}


@lru_cache(maxsize=1 << 14)
def parse(text: str) -> Formula:
    return _Parser(text).parse()


# Rendering.

_ASCII = {"neg": "~", "box": "[]", "dia": "<>", "imp": "->", "or": "|", "and": "&"}
_UNICODE = {"neg": "¬", "box": "□", "dia": "◇", "imp": "→", "or": "∨", "and": "∧"}

# binding strength used by the renderer; higher binds tighter
_PREC = {"imp": 1, "or": 2, "and": 3, "unary": 4, "atom": 5}


def _view(f: Formula, sugar: bool) -> tuple[str, tuple[Formula, ...]]:
    """Top-level shape of ``f``, optionally folding abbreviations back."""
    if isinstance(f, Atom):
        return "atom", ()
    if isinstance(f, Neg):
        c = f.child
        if sugar and isinstance(c, Imp) and isinstance(c.right, Neg):
            return "and", (c.left, c.right.child)
        return "neg", (c,)
    if isinstance(f, Box):
        return "box", (f.child,)
    if isinstance(f, Dia):
        return "dia", (f.child,)
    if sugar and isinstance(f.left, Neg):
        return "or", (f.left.child, f.right)
    return "imp", (f.left, f.right)


def render(f: Formula, *, unicode: bool = False, sugar: bool = False, explicit: bool = False) -> str:
    """Concrete syntax for ``f``.

    The default output uses as few parentheses as the grammar allows and
    reparses to the same tree.  ``sugar`` folds ~a -> b back into a | b and
    ~(a -> ~b) into a & b.  ``explicit`` brackets every binary operand that
    is itself binary.
    """
    sym = _UNICODE if unicode else _ASCII

    def prec(kind: str) -> int:
        return _PREC["unary"] if kind in ("neg", "box", "dia") else _PREC[kind]

    def go(g: Formula) -> str:
        kind, kids = _view(g, sugar)
        if kind == "atom":
            return g.name
        if kind in ("neg", "box", "dia"):
            inner = go(kids[0])
            if prec(_view(kids[0], sugar)[0]) < _PREC["unary"]:
                inner = f"({inner})"
            return sym[kind] + inner
        left, right = kids
        lk = _view(left, sugar)[0]
        rk = _view(right, sugar)[0]
        p = _PREC[kind]
        ls, rs = go(left), go(right)
        binary = ("imp", "or", "and")
        if kind == "imp":
            wrap_l = prec(lk) <= p
            wrap_r = prec(rk) < p
        else:
            # | and & associate to the left
            wrap_l = prec(lk) < p
            wrap_r = prec(rk) <= p
        if explicit:
            wrap_l = wrap_l or lk in binary
            wrap_r = wrap_r or rk in binary
        if wrap_l:
            ls = f"({ls})"
        if wrap_r:
            rs = f"({rs})"
        return f"{ls} {sym[kind]} {rs}"

    return go(f)


# Structure.

def subformulas(*formulas: Formula) -> list[Formula]:
    """Distinct subformulas of the arguments, children before parents."""
    seen: dict[Formula, None] = {}

    def visit(g: Formula) -> None:
        if g in seen:
            return
        if isinstance(g, Imp):
            visit(g.left)
            visit(g.right)
        elif not isinstance(g, Atom):
            visit(g.child)
        seen[g] = None

    for f in formulas:
        visit(f)
    return list(seen)


def atoms(*formulas: Formula) -> list[Atom]:
    return [g for g in subformulas(*formulas) if isinstance(g, Atom)]


def size(f: Formula) -> int:
    """Number of nodes of ``f`` as a tree."""
    if isinstance(f, Atom):
        return 1
    if isinstance(f, Imp):
        return 1 + size(f.left) + size(f.right)
    return 1 + size(f.child)


def depth(f: Formula) -> int:
    if isinstance(f, Atom):
        return 0
    if isinstance(f, Imp):
        return 1 + max(depth(f.left), depth(f.right))
    return 1 + depth(f.child)


def uses_only(f: Formula, kinds: tuple[type, ...]) -> bool:
    return all(isinstance(g, Atom) or isinstance(g, kinds) for g in subformulas(f))


def metavariables(s: Formula) -> list[str]:
    return [a.name for a in atoms(s) if is_metavariable(a)]


def instantiate(schema: Formula, binding: Mapping[str, Formula]) -> Formula:
    cache: dict[Formula, Formula] = {}

    def go(g: Formula) -> Formula:
        if g in cache:
            return cache[g]
        if isinstance(g, Atom):
            if is_metavariable(g):
                if g.name not in binding:
                    raise MissingBinding(g.name)
                out = binding[g.name]
            else:
                out = g
        elif isinstance(g, Imp):
            out = Imp(go(g.left), go(g.right))
        else:
            out = type(g)(go(g.child))
        cache[g] = out
        return out

    return go(schema)


def match_schema(schema: Formula, f: Formula) -> dict[str, Formula] | None:
    binding: dict[str, Formula] = {}
    stack = [(schema, f)]
    while stack:
        s, g = stack.pop()
        if isinstance(s, Atom):
            if is_metavariable(s):
                bound = binding.get(s.name)
                if bound is None:
                    binding[s.name] = g
                elif bound != g:
                    return None
            elif s != g:
                return None
        elif type(s) is not type(g):
            return None
        elif isinstance(s, Imp):
            stack.append((s.right, g.right))
            stack.append((s.left, g.left))
        else:
            stack.append((s.child, g.child))
    return binding


def skeleton(schema: Formula) -> Formula:
    """Replace metavariables A, B, ... by object atoms a, b, ... for deciding."""
    return instantiate(schema, {m: Atom(m.lower()) for m in metavariables(schema)})
