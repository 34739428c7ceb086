"""Consequence and validity over finite Nmatrices.

A query is compiled into its subformula DAG.  Every node carries a bitmask
of values it may still take; premises start on the designated values, the
conclusion on the undesignated ones.  Each connective occurrence is a
constraint between a node and its children, and domains are narrowed to
generalized arc consistency before and after every branching decision.
The search branches on atoms first, then on compound nodes whose cell is
still multi-valued, always trying values in canonical order so that the
first countermodel found is the same on every run.

``brute_force_consequence`` is an independent check: it expands every
legal valuation column by column with numpy and never propagates.
"""

from __future__ import annotations

import functools
from collections.abc import Mapping
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

from mnm.errors import TooLarge, ValueOutsideDomain
from mnm.nmatrix import ARITY, Nmatrix, mp_preserving, resolve
from mnm.syntax import Atom, Box, Dia, Formula, Imp, Neg, Sequent, render, skeleton, subformulas
from mnm.values import TruthValue

ATOM, NEG, IMP, BOX, DIA = range(5)
_KIND = {Atom: ATOM, Neg: NEG, Imp: IMP, Box: BOX, Dia: DIA}
_CONN = {NEG: "neg", IMP: "imp", BOX: "box", DIA: "dia"}

_BITS = tuple(tuple(i for i in range(8) if m >> i & 1) for m in range(256))
_POP = tuple(len(b) for b in _BITS)


class Valuation(Mapping):
    """Values of the nodes of a query, children before parents."""

    def __init__(self, items: Sequence[tuple[Formula, TruthValue]]):
        self._items = tuple(items)
        self._map = dict(self._items)

    def __getitem__(self, key: Formula) -> TruthValue:
        return self._map[key]

    def __iter__(self) -> Iterator[Formula]:
        return iter(self._map)

    def __len__(self) -> int:
        return len(self._map)

    def __repr__(self) -> str:
        inner = ", ".join(f"{render(f)}: {v.label}" for f, v in self._items)
        return "Valuation({" + inner + "})"

    def atoms(self) -> dict[str, TruthValue]:
        return {f.name: v for f, v in self._items if isinstance(f, Atom)}

    def as_json(self) -> dict[str, str]:
        return {render(f): v.label for f, v in self._items}

    def atoms_json(self) -> dict[str, str]:
        return {k: v.label for k, v in self.atoms().items()}


@dataclass(frozen=True)
class Verdict:
    holds: bool
    witness: Valuation | None = None
    nodes_explored: int = 0

    @property
    def fails(self) -> bool:
        return not self.holds


# Per-Nmatrix lookup tables.

@dataclass(frozen=True)
class _Unary:
    img: tuple[int, ...]  # img[m]: union of the cells of the values in m
    sup: tuple[int, ...]  # sup[t]: values whose cell meets t


def _unary(table: Sequence[int], dom: int) -> _Unary:
    img = [0] * 256
    for m in range(1, 256):
        low = m & -m
        img[m] = img[m ^ low] | table[low.bit_length() - 1]
    sup = [0] * 256
    for t in range(256):
        s = 0
        for x in _BITS[dom]:
            if table[x] & t:
                s |= 1 << x
        sup[t] = s
    return _Unary(tuple(img), tuple(sup))


@dataclass(frozen=True)
class _Binary:
    row: tuple[tuple[int, ...], ...]  # row[x][m]: union of x -> y over y in m
    col: tuple[tuple[int, ...], ...]  # col[y][m]: union of x -> y over x in m
    diag: _Unary


def _binary(table: Sequence[Sequence[int]]) -> _Binary:
    rows, cols = [], []
    for x in range(8):
        r = [0] * 256
        c = [0] * 256
        for m in range(1, 256):
            low = m & -m
            i = low.bit_length() - 1
            r[m] = r[m ^ low] | table[x][i]
            c[m] = c[m ^ low] | table[i][x]
        rows.append(tuple(r))
        cols.append(tuple(c))
    diag = _unary([table[x][x] for x in range(8)], 255)
    return _Binary(tuple(rows), tuple(cols), diag)


@dataclass(frozen=True)
class _Kernel:
    dom: int
    des: int
    und: int
    unary: dict = field(hash=False)
    imp: _Binary | None = None


@functools.lru_cache(maxsize=64)
def _kernel(nm: Nmatrix) -> _Kernel:
    alg = nm.algebra
    unary = {}
    imp = None
    for name, table in alg.tables:
        if ARITY[name] == 1:
            unary[name] = _unary(table, nm.domain_mask)
        else:
            imp = _binary(table)
    return _Kernel(nm.domain_mask, nm.designated & nm.domain_mask, nm.domain_mask & ~nm.designated, unary, imp)


# Compiled queries.

@dataclass
class _Query:
    nodes: list[Formula]
    kind: list[int]
    left: list[int]
    right: list[int]
    parents: list[list[int]]
    atoms: list[int]
    compounds: list[int]
    start: list[int]


def _compile(nm: Nmatrix, premises: Sequence[Formula], conclusion: Formula | None) -> _Query:
    k = _kernel(nm)
    roots = list(premises) + ([conclusion] if conclusion is not None else [])
    nodes = subformulas(*roots)
    index = {f: i for i, f in enumerate(nodes)}
    n = len(nodes)
    kind = [0] * n
    left = [-1] * n
    right = [-1] * n
    parents: list[list[int]] = [[] for _ in range(n)]
    for i, f in enumerate(nodes):
        kd = _KIND[type(f)]
        kind[i] = kd
        if kd == IMP:
            left[i] = index[f.left]
            right[i] = index[f.right]
            parents[left[i]].append(i)
            if right[i] != left[i]:
                parents[right[i]].append(i)
        elif kd != ATOM:
            if _CONN[kd] not in k.unary:
                raise ValueOutsideDomain(f"{nm.name} does not interpret {_CONN[kd]}")
            left[i] = index[f.child]
            parents[left[i]].append(i)
        if kd == IMP and k.imp is None:
            raise ValueOutsideDomain(f"{nm.name} does not interpret imp")
    start = [k.dom] * n
    for p in premises:
        start[index[p]] &= k.des
    if conclusion is not None:
        start[index[conclusion]] &= k.und
    atoms_ = [i for i in range(n) if kind[i] == ATOM]
    compounds = [i for i in range(n) if kind[i] != ATOM]
    return _Query(nodes, kind, left, right, parents, atoms_, compounds, start)


def _propagate(k: _Kernel, q: _Query, d: list[int], queue: list[int]) -> bool:
    """Narrow ``d`` in place to arc consistency.  False on a wipe-out."""
    kind, left, right, parents = q.kind, q.left, q.right, q.parents
    queued = set(queue)
    unary = k.unary
    imp = k.imp

    def touch(j: int) -> None:
        if kind[j] != ATOM and j not in queued:
            queued.add(j)
            queue.append(j)
        for p in parents[j]:
            if p not in queued:
                queued.add(p)
                queue.append(p)

    while queue:
        i = queue.pop()
        queued.discard(i)
        kd = kind[i]
        di = d[i]
        l = left[i]
        dl = d[l]
        if kd == IMP:
            r = right[i]
            if l == r:
                u = imp.diag
                ni = di & u.img[dl]
                nl = dl & u.sup[ni]
                nr = nl
            else:
                dr = d[r]
                row = imp.row
                img = 0
                for x in _BITS[dl]:
                    img |= row[x][dr]
                ni = di & img
                nl = 0
                for x in _BITS[dl]:
                    if row[x][dr] & ni:
                        nl |= 1 << x
                col = imp.col
                nr = 0
                for y in _BITS[dr]:
                    if col[y][nl] & ni:
                        nr |= 1 << y
            if not ni or not nl or not nr:
                return False
            if ni != di:
                d[i] = ni
                touch(i)
            if nl != dl:
                d[l] = nl
                touch(l)
            if r != l and nr != d[r]:
                d[r] = nr
                touch(r)
        else:
            u = unary[_CONN[kd]]
            ni = di & u.img[dl]
            nl = dl & u.sup[ni]
            if not ni or not nl:
                return False
            if ni != di:
                d[i] = ni
                touch(i)
            if nl != dl:
                d[l] = nl
                touch(l)
    return True


class _Search:
    def __init__(self, k: _Kernel, q: _Query):
        self.k = k
        self.q = q
        self.nodes_explored = 0

    def pick(self, d: list[int]) -> int:
        best, size = -1, 9
        for group in (self.q.atoms, self.q.compounds):
            for i in group:
                s = _POP[d[i]]
                if 1 < s < size:
                    best, size = i, s
            if best >= 0:
                return best
        return -1

    def run(self, d: list[int]) -> list[int] | None:
        var = self.pick(d)
        if var < 0:
            return d
        for v in _BITS[d[var]]:
            self.nodes_explored += 1
            child = d.copy()
            child[var] = 1 << v
            queue = [var] if self.q.kind[var] != ATOM else []
            queue.extend(self.q.parents[var])
            if _propagate(self.k, self.q, child, queue):
                found = self.run(child)
                if found is not None:
                    return found
        return None


def _solve(nm: Nmatrix, q: _Query, d: list[int]) -> tuple[list[int] | None, int]:
    k = _kernel(nm)
    if not _propagate(k, q, d, list(q.compounds)):
        return None, 0
    s = _Search(k, q)
    found = s.run(d)
    return found, s.nodes_explored


def _valuation(q: _Query, d: list[int]) -> Valuation:
    return Valuation([(f, TruthValue(_BITS[m][0])) for f, m in zip(q.nodes, d)])


def decide_consequence(nm: Nmatrix | str, premises: Sequence[Formula], conclusion: Formula) -> Verdict:
    nm = resolve(nm)
    q = _compile(nm, premises, conclusion)
    if any(m == 0 for m in q.start):
        return Verdict(True)
    found, explored = _solve(nm, q, list(q.start))
    if found is None:
        return Verdict(True, None, explored)
    return Verdict(False, _valuation(q, found), explored)


def decide_valid(nm: Nmatrix | str, f: Formula) -> Verdict:
    return decide_consequence(nm, (), f)


def decide_sequent(nm: Nmatrix | str, s: Sequent) -> Verdict:
    return decide_consequence(nm, s.premises, s.conclusion)


def find_valuation(
    nm: Nmatrix | str,
    formulas: Sequence[Formula],
    constraints: Mapping[Formula, int],
    conclusion: Formula | None = None,
) -> Valuation | None:
    """First legal valuation designating ``formulas`` (and leaving
    ``conclusion`` undesignated, if given) in which each constrained node
    takes a value from its mask."""
    nm = resolve(nm)
    q = _compile(nm, formulas, conclusion)
    d = list(q.start)
    index = {f: i for i, f in enumerate(q.nodes)}
    for f, mask in constraints.items():
        d[index[f]] &= mask
    if any(m == 0 for m in d):
        return None
    found, _ = _solve(nm, q, d)
    return None if found is None else _valuation(q, found)


def reachable_values(nm: Nmatrix, schema: Formula, names: Sequence[str]) -> dict:
    """Values of ``schema`` reachable for each assignment to ``names``."""
    from itertools import product

    nm = resolve(nm)
    q = _compile(nm, [schema], None)
    index = {f: i for i, f in enumerate(q.nodes)}
    root = index[schema]
    slots = [index[Atom(n)] for n in names]
    out = {}
    for combo in product(nm.values, repeat=len(names)):
        reach = []
        for w in nm.values:
            d = list(q.start)
            for s, v in zip(slots, combo):
                d[s] = 1 << v
            # _compile marks the schema designated; lift that here
            d[root] = 1 << w
            if _solve(nm, q, d)[0] is not None:
                reach.append(w)
        out[combo] = frozenset(reach)
    return out


def check_legal(nm: Nmatrix | str, v: Mapping[Formula, TruthValue]) -> list[str]:
    """Problems with a valuation: values outside the domain, missing children,
    or a compound value not in its cell.  Empty means legal."""
    nm = resolve(nm)
    alg = nm.algebra
    problems = []
    for f, val in v.items():
        if val not in nm.values:
            problems.append(f"{render(f)} has {val} outside the domain")
            continue
        if isinstance(f, Atom):
            continue
        kids = (f.left, f.right) if isinstance(f, Imp) else (f.child,)
        if any(c not in v for c in kids):
            problems.append(f"{render(f)} is valued but a child is not")
            continue
        conn = _CONN[_KIND[type(f)]]
        cell = alg.cell(conn, [v[c] for c in kids])
        if not cell >> val & 1:
            problems.append(f"{render(f)} = {val} is not allowed by the {conn} table")
    return problems


def is_countermodel(nm: Nmatrix | str, v: Mapping, premises: Sequence[Formula], conclusion: Formula) -> bool:
    nm = resolve(nm)
    if check_legal(nm, v):
        return False
    des = nm.designated
    return all(des >> v[p] & 1 for p in premises) and not des >> v[conclusion] & 1


# The oracle.

BRUTE_FORCE_LIMIT = 12
_CHUNK = 1 << 16


def brute_force_consequence(
    nm: Nmatrix | str,
    premises: Sequence[Formula],
    conclusion: Formula,
    limit: int = BRUTE_FORCE_LIMIT,
) -> Verdict:
    """Enumerate legal valuations of the subformulas outright.

    Valuations are built one column at a time: atoms take every domain
    value, a compound node every value of its cell.  Rows that already
    fail to designate a premise, or designate the conclusion, are dropped
    as soon as that column is filled.
    """
    nm = resolve(nm)
    nodes = subformulas(*premises, conclusion)
    if len(nodes) > limit:
        raise TooLarge(f"{len(nodes)} subformulas exceeds the limit of {limit}")
    index = {f: i for i, f in enumerate(nodes)}
    dom = np.array([int(v) for v in nm.values], dtype=np.int8)
    des = np.zeros(8, dtype=bool)
    for v in nm.designated_values:
        des[int(v)] = True
    tables = {}
    for name, table in nm.algebra.tables:
        tables[name] = np.array(table, dtype=np.uint16)
    must = {}
    for p in premises:
        must[index[p]] = True
    ci = index[conclusion]
    if must.get(ci):
        return Verdict(True)
    must[ci] = False

    plan = []
    for i, f in enumerate(nodes):
        if isinstance(f, Atom):
            plan.append(("atom", -1, -1))
        elif isinstance(f, Imp):
            if "imp" not in tables:
                raise ValueOutsideDomain(f"{nm.name} does not interpret imp")
            plan.append(("imp", index[f.left], index[f.right]))
        else:
            conn = _CONN[_KIND[type(f)]]
            if conn not in tables:
                raise ValueOutsideDomain(f"{nm.name} does not interpret {conn}")
            plan.append((conn, index[f.child], -1))

    def extend(rows: np.ndarray, col: int) -> np.ndarray | None:
        if col == len(nodes):
            return rows[:1] if len(rows) else None
        if len(rows) > _CHUNK:
            for start in range(0, len(rows), _CHUNK):
                hit = extend(rows[start:start + _CHUNK], col)
                if hit is not None:
                    return hit
            return None
        kind, a, b = plan[col]
        if kind == "atom":
            new = np.repeat(rows, len(dom), axis=0)
            vals = np.tile(dom, len(rows))
        else:
            if kind == "imp":
                cells = tables["imp"][rows[:, a], rows[:, b]]
            else:
                cells = tables[kind][rows[:, a]]
            parts, vparts = [], []
            for v in dom:
                keep = (cells >> int(v)) & 1 == 1
                parts.append(rows[keep])
                vparts.append(np.full(int(keep.sum()), v, dtype=np.int8))
            new = np.concatenate(parts)
            vals = np.concatenate(vparts)
        if col in must:
            keep = des[vals] == must[col]
            new, vals = new[keep], vals[keep]
        if not len(new):
            return None
        return extend(np.column_stack([new, vals]), col + 1)

    hit = extend(np.zeros((1, 0), dtype=np.int8), 0)
    if hit is None:
        return Verdict(True)
    row = hit[0]
    return Verdict(False, Valuation([(f, TruthValue(int(row[i]))) for i, f in enumerate(nodes)]))


# Audits.

@dataclass(frozen=True)
class AuditEntry:
    name: str
    schema: Formula
    verdict: Verdict


@dataclass(frozen=True)
class AuditReport:
    system: str
    entries: tuple[AuditEntry, ...]
    mp_violations: tuple[tuple[TruthValue, TruthValue], ...]

    @property
    def ok(self) -> bool:
        return not self.mp_violations and all(e.verdict.holds for e in self.entries)

    def failures(self) -> list[AuditEntry]:
        return [e for e in self.entries if not e.verdict.holds]


def audit(nm: Nmatrix | str, axioms, label: str | None = None) -> AuditReport:
    """Decide each axiom skeleton over ``nm`` and check modus ponens."""
    nm = resolve(nm)
    entries = []
    for ax in axioms:
        entries.append(AuditEntry(ax.name, ax.schema, decide_valid(nm, skeleton(ax.schema))))
    return AuditReport(label or nm.name, tuple(entries), tuple(mp_preserving(nm)))


def audit_system(sid: str, strict_paper: bool = False) -> AuditReport:
    from mnm.calculus import axioms_of

    return audit(resolve(sid, strict_paper), axioms_of(sid), sid)


@dataclass(frozen=True)
class LemmaCheck:
    label: str
    sequents: tuple[Sequent, ...]
    verdicts: tuple[Verdict, ...]

    @property
    def holds(self) -> bool:
        return all(v.holds for v in self.verdicts)


def lemma_sequents() -> list[tuple[str, tuple[Sequent, ...]]]:
    """The four equivalences about duality and the six about implication,
    as consequence queries on the atoms p and q."""
    from mnm.syntax import parse

    def seq(prem: Sequence[str], concl: str) -> Sequent:
        return Sequent(tuple(parse(x) for x in prem), parse(concl))

    def equiv(a: str, b: str) -> tuple[Sequent, ...]:
        return (seq([a], b), seq([b], a))

    return [
        ("duality (i)", equiv("<>~p", "~[]p")),
        ("duality (ii)", equiv("[]p", "~<>~p")),
        ("duality (iii)", equiv("[]~p", "~<>p")),
        ("duality (iv)", equiv("<>p", "<>~~p")),
        ("implication (i)", (seq(["[]p", "<>p", "<>~q"], "<>~(p -> q)"),)),
        ("implication (ii)", (seq(["<>p", "[]~q", "<>~q"], "<>~(p -> q)"),)),
        ("implication (iii)", (seq(["[]p", "<>p", "[]~q"], "[]~(p -> q)"),)),
        ("implication (iv)", (seq(["<>p", "<>q"], "<>(p -> q)"),)),
        ("implication (v)", (seq(["<>~p", "<>q"], "<>(p -> q)"),)),
        ("implication (vi)", (seq(["<>~p", "<>~q"], "<>(p -> q)"),)),
    ]


def verify_lemma_suite(sid: str = "Km") -> list[LemmaCheck]:
    nm = resolve(sid)
    out = []
    for label, seqs in lemma_sequents():
        out.append(LemmaCheck(label, seqs, tuple(decide_sequent(nm, s) for s in seqs)))
    return out
