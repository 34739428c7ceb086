"""Multialgebras, Nmatrices and the twelve built-in systems.

Tables are dense: a unary table is a tuple of 8 bitmasks indexed by value
ordinal, a binary table a tuple of 8 such tuples.  Cells for arguments
outside the domain are 0.  The built-in tables are generated from a few
rules over the (n, p, a) flags; ``mnm.printed`` holds the typeset tables
they are checked against.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Mapping, Sequence

from mnm.errors import (
    EmptyCell,
    MissingCell,
    TableFormatError,
    UnknownConnective,
    UnknownSystem,
    ValueOutsideDomain,
)
from mnm.syntax import Formula, metavariables
from mnm.values import (
    ALL_VALUES,
    DomainKind,
    Mode,
    TruthValue,
    domain,
    from_mask,
    iter_mask,
    mode,
    negate_value,
    to_mask,
    value_of,
)

CONNECTIVES = ("neg", "imp", "box", "dia")
ARITY = {"neg": 1, "imp": 2, "box": 1, "dia": 1}
SYMBOL = {"neg": "~", "imp": "->", "box": "[]", "dia": "<>"}

SYSTEM_IDS = ("Tm", "T4m", "T45m", "Dm", "D4m", "D45m", "Km", "K4m", "K45m", "Tmd", "T4md", "T45md")

# id -> (domain, implication rule, modal rule)
_SHAPE = {
    "Tm": (DomainKind.DOM4, "ivlev", "base"),
    "T4m": (DomainKind.DOM4, "ivlev", "4"),
    "T45m": (DomainKind.DOM4, "ivlev", "45"),
    "Dm": (DomainKind.DOM6, "ivlev", "base"),
    "D4m": (DomainKind.DOM6, "ivlev", "4"),
    "D45m": (DomainKind.DOM6, "ivlev", "45"),
    "Km": (DomainKind.DOM8, "ivlev", "base"),
    "K4m": (DomainKind.DOM8, "ivlev", "4"),
    "K45m": (DomainKind.DOM8, "ivlev", "45"),
    "Tmd": (DomainKind.DOM4, "join", "base"),
    "T4md": (DomainKind.DOM4, "join", "4"),
    "T45md": (DomainKind.DOM4, "join", "45"),
}


@dataclass(frozen=True)
class Multialgebra:
    """Domain plus one multioperation per interpreted connective."""

    values: tuple[TruthValue, ...]
    tables: tuple[tuple[str, tuple], ...]

    def __post_init__(self) -> None:
        dom = self.domain_mask
        for name, table in self.tables:
            if name not in ARITY:
                raise UnknownConnective(name)
            for args, cell in _cells(table, ARITY[name], self.values):
                if cell == 0:
                    raise EmptyCell(f"{name}{_fmt_args(args)} is empty")
                if cell & ~dom:
                    raise ValueOutsideDomain(f"{name}{_fmt_args(args)} leaves the domain")

    @property
    def domain_mask(self) -> int:
        return to_mask(self.values)

    @property
    def kind(self) -> DomainKind | None:
        for k in DomainKind:
            if domain(k).members == self.values:
                return k
        return None

    def connectives(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.tables)

    def table(self, connective: str) -> tuple:
        for name, table in self.tables:
            if name == connective:
                return table
        raise UnknownConnective(connective)

    def cell(self, connective: str, args: Sequence[TruthValue]) -> int:
        table = self.table(connective)
        if len(args) != ARITY[connective]:
            raise ValueError(f"{connective} takes {ARITY[connective]} arguments")
        for a in args:
            if a not in self.values:
                raise ValueOutsideDomain(f"{a} is not in the domain")
        if len(args) == 1:
            return table[int(args[0])]
        return table[int(args[0])][int(args[1])]


@dataclass(frozen=True)
class Nmatrix:
    name: str
    algebra: Multialgebra
    designated: int

    @property
    def values(self) -> tuple[TruthValue, ...]:
        return self.algebra.values

    @property
    def domain_mask(self) -> int:
        return self.algebra.domain_mask

    @property
    def designated_values(self) -> tuple[TruthValue, ...]:
        return from_mask(self.designated)


def _fmt_args(args: Sequence[TruthValue]) -> str:
    return "(" + ", ".join(a.label for a in args) + ")"


def _cells(table: tuple, arity: int, values: Sequence[TruthValue]):
    if arity == 1:
        for x in values:
            yield (x,), table[int(x)]
    else:
        for x in values:
            for y in values:
                yield (x, y), table[int(x)][int(y)]


def apply(m: Multialgebra | Nmatrix, connective: str, args: Sequence[TruthValue]) -> frozenset[TruthValue]:
    alg = m.algebra if isinstance(m, Nmatrix) else m
    if connective not in ARITY:
        raise UnknownConnective(connective)
    return frozenset(from_mask(alg.cell(connective, args)))


# Construction rules.

def ivlev_imp(x: TruthValue, y: TruthValue) -> int:
    """Implication cell over all eight values, before domain restriction."""
    mx, my = mode(x), mode(y)
    if Mode.I in (mx, my):
        modes = [Mode.I]
    elif mx is Mode.F or my is Mode.T:
        modes = [Mode.T]
    elif mx is Mode.T:
        modes = [Mode.C] if my is Mode.C else [Mode.F]
    elif my is Mode.C:
        modes = [Mode.T, Mode.C]
    else:
        modes = [Mode.C]
    sign = (not x.actual) or y.actual
    return to_mask(value_of(m, sign) for m in modes)


_CHAIN = (TruthValue.F_MINUS, TruthValue.C_MINUS, TruthValue.C_PLUS, TruthValue.T_PLUS)


def join_imp(x: TruthValue, y: TruthValue) -> int:
    """Deterministic implication: the larger of ~x and y on F- < C- < C+ < T+."""
    return to_mask([max(negate_value(x), y, key=_CHAIN.index)])


def _where(pred) -> int:
    return to_mask(v for v in ALL_VALUES if pred(v))


_DESIGNATED = _where(lambda v: v.actual)
_UNDESIGNATED = _where(lambda v: not v.actual)
_NECESSARY_TRUE = _where(lambda v: v.actual and v.necessary)
_IMPOSSIBLE_FALSE = _where(lambda v: not v.actual and not v.possible)


def modal_cells(rule: str, x: TruthValue) -> tuple[int, int]:
    """(box, dia) cells for ``x`` before domain restriction."""
    n, p = x.necessary, x.possible
    if rule == "base":
        return (_DESIGNATED if n else _UNDESIGNATED, _DESIGNATED if p else _UNDESIGNATED)
    if rule == "4":
        return (_NECESSARY_TRUE if n else _UNDESIGNATED, _DESIGNATED if p else _IMPOSSIBLE_FALSE)
    if rule == "45":
        return (_NECESSARY_TRUE if n else _IMPOSSIBLE_FALSE, _NECESSARY_TRUE if p else _IMPOSSIBLE_FALSE)
    raise ValueError(rule)


def _generate(sid: str) -> Nmatrix:
    kind, imp_rule, modal_rule = _SHAPE[sid]
    dom = domain(kind)
    mask = dom.mask
    neg = [0] * 8
    box = [0] * 8
    dia = [0] * 8
    imp = [[0] * 8 for _ in range(8)]
    rule = ivlev_imp if imp_rule == "ivlev" else join_imp
    for x in dom:
        neg[x] = to_mask([negate_value(x)]) & mask
        b, d = modal_cells(modal_rule, x)
        box[x] = b & mask
        dia[x] = d & mask
        for y in dom:
            imp[x][y] = rule(x, y) & mask
    alg = Multialgebra(
        dom.members,
        (
            ("neg", tuple(neg)),
            ("imp", tuple(tuple(r) for r in imp)),
            ("box", tuple(box)),
            ("dia", tuple(dia)),
        ),
    )
    return Nmatrix(sid, alg, to_mask(dom.designated))


def _from_print(sid: str) -> Nmatrix:
    from mnm.printed import printed_tables

    pt = printed_tables(sid)
    dom = domain(pt.kind)
    alg = Multialgebra(dom.members, tuple((c, pt.tables[c]) for c in CONNECTIVES))
    return Nmatrix(sid, alg, to_mask(dom.designated))


@functools.lru_cache(maxsize=None)
def builtin(sid: str, strict_paper: bool = False) -> Nmatrix:
    """The built-in Nmatrix for a system id.

    With ``strict_paper`` the tables are read verbatim off the typeset
    grids, slips included; otherwise they come from the construction rules.
    """
    if sid not in _SHAPE:
        raise UnknownSystem(sid)
    return _from_print(sid) if strict_paper else _generate(sid)


def resolve(system: str | Nmatrix, strict_paper: bool = False) -> Nmatrix:
    return system if isinstance(system, Nmatrix) else builtin(system, strict_paper)


def is_submultialgebra(a: Multialgebra | Nmatrix, b: Multialgebra | Nmatrix) -> bool:
    a = a.algebra if isinstance(a, Nmatrix) else a
    b = b.algebra if isinstance(b, Nmatrix) else b
    if set(a.connectives()) != set(b.connectives()):
        return False
    if not set(a.values) <= set(b.values):
        return False
    for name in a.connectives():
        ta, tb = a.table(name), b.table(name)
        for args, cell in _cells(ta, ARITY[name], a.values):
            other = tb[int(args[0])] if len(args) == 1 else tb[int(args[0])][int(args[1])]
            if cell & ~other:
                return False
    return True


def derived_table(nm: Nmatrix, schema: Formula) -> dict[tuple[TruthValue, ...], frozenset[TruthValue]]:
    """For each assignment to the metavariables (sorted by name), the values
    the schema can take under some legal valuation."""
    from mnm.semantics import reachable_values

    names = sorted(metavariables(schema))
    return reachable_values(nm, schema, names)


def mp_preserving(nm: Nmatrix) -> list[tuple[TruthValue, TruthValue]]:
    """Pairs (x, y) with x designated, y not, whose implication cell holds a
    designated value.  Empty exactly when modus ponens preserves designation."""
    imp = nm.algebra.table("imp")
    bad = []
    for x in from_mask(nm.designated):
        for y in from_mask(nm.domain_mask & ~nm.designated):
            if imp[x][y] & nm.designated:
                bad.append((x, y))
    return bad


def sign_law_violations(nm: Nmatrix) -> list[tuple[TruthValue, TruthValue]]:
    imp = nm.algebra.table("imp")
    bad = []
    for x in nm.values:
        for y in nm.values:
            want = (not x.actual) or y.actual
            if any(v.actual != want for v in from_mask(imp[x][y])):
                bad.append((x, y))
    return bad


# File format.

def save(nm: Nmatrix) -> str:
    lines = [f"system {nm.name}", "values " + " ".join(v.label for v in nm.values)]
    lines.append("designated " + " ".join(v.label for v in from_mask(nm.designated)))
    for name in nm.algebra.connectives():
        table = nm.algebra.table(name)
        lines.append(f"op {name} {ARITY[name]}")
        for args, cell in _cells(table, ARITY[name], nm.values):
            lhs = " ".join(a.label for a in args)
            lines.append(f"{lhs} : " + " ".join(v.label for v in from_mask(cell)))
    return "\n".join(lines) + "\n"


def load(text: str) -> Nmatrix:
    name = None
    values: list[TruthValue] | None = None
    designated: list[TruthValue] | None = None
    tables: dict[str, dict] = {}
    current: str | None = None

    def value(tok: str, lineno: int) -> TruthValue:
        try:
            return TruthValue.parse(tok)
        except ValueError:
            raise TableFormatError(f"line {lineno}: unknown value {tok!r}") from None

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, _, rest = line.partition(" ")
        if head == "system":
            name = rest.strip()
        elif head == "values":
            values = [value(t, lineno) for t in rest.split()]
            if len(set(values)) != len(values) or not values:
                raise TableFormatError(f"line {lineno}: bad value list")
        elif head == "designated":
            designated = [value(t, lineno) for t in rest.split()]
        elif head == "op":
            parts = rest.split()
            if len(parts) != 2 or parts[0] not in ARITY:
                raise TableFormatError(f"line {lineno}: bad op header")
            current = parts[0]
            if int(parts[1]) != ARITY[current]:
                raise TableFormatError(f"line {lineno}: {current} has arity {ARITY[current]}")
            if current in tables:
                raise TableFormatError(f"line {lineno}: {current} defined twice")
            tables[current] = {}
        elif ":" in line:
            if current is None or values is None:
                raise TableFormatError(f"line {lineno}: cell outside an op block")
            lhs, _, rhs = line.partition(":")
            args = tuple(value(t, lineno) for t in lhs.split())
            out = [value(t, lineno) for t in rhs.split()]
            if len(args) != ARITY[current]:
                raise TableFormatError(f"line {lineno}: wrong number of arguments")
            for v in args + tuple(out):
                if v not in values:
                    raise ValueOutsideDomain(f"line {lineno}: {v} is not a declared value")
            if not out:
                raise EmptyCell(f"line {lineno}: {current}{_fmt_args(args)} is empty")
            if args in tables[current]:
                raise TableFormatError(f"line {lineno}: {current}{_fmt_args(args)} given twice")
            tables[current][args] = to_mask(out)
        else:
            raise TableFormatError(f"line {lineno}: cannot read {raw!r}")

    if name is None or values is None or designated is None:
        raise TableFormatError("missing system, values or designated header")
    for v in designated:
        if v not in values:
            raise ValueOutsideDomain(f"designated value {v} is not declared")
    values_t = tuple(sorted(values))
    built = []
    for conn in CONNECTIVES:
        if conn not in tables:
            continue
        cells = tables[conn]
        if ARITY[conn] == 1:
            row = [0] * 8
            for x in values_t:
                if (x,) not in cells:
                    raise MissingCell(f"{conn}{_fmt_args((x,))} missing")
                row[x] = cells[(x,)]
            built.append((conn, tuple(row)))
        else:
            grid = [[0] * 8 for _ in range(8)]
            for x in values_t:
                for y in values_t:
                    if (x, y) not in cells:
                        raise MissingCell(f"{conn}{_fmt_args((x, y))} missing")
                    grid[x][y] = cells[(x, y)]
            built.append((conn, tuple(tuple(r) for r in grid)))
    return Nmatrix(name, Multialgebra(values_t, tuple(built)), to_mask(designated))


def grid_text(nm: Nmatrix, connective: str) -> str:
    """Human-readable grid for one connective."""
    table = nm.algebra.table(connective)

    def cell(mask: int) -> str:
        return "{" + ",".join(v.label for v in from_mask(mask)) + "}"

    vals = nm.values
    if ARITY[connective] == 1:
        rows = [[v.label, cell(table[v])] for v in vals]
        header = ["", SYMBOL[connective]]
    else:
        header = [SYMBOL[connective]] + [v.label for v in vals]
        rows = [[x.label] + [cell(table[x][y]) for y in vals] for x in vals]
    widths = [max(len(r[i]) for r in [header] + rows) for i in range(len(header))]
    fmt = lambda r: " | ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip()
    return "\n".join([fmt(header)] + [fmt(r) for r in rows])


def tables_as_masks(nm: Nmatrix) -> Mapping[str, tuple]:
    return {name: table for name, table in nm.algebra.tables}


def bits(mask: int) -> list[int]:
    return list(iter_mask(mask))
