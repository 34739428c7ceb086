"""Recovery operators and derivability adjustment between Km, Dm and Tm.

The consistency operator circ A = []A -> <>A is designated in Km exactly
when A avoids the I values, and circt A = ([]A -> A) & ([]~A -> ~A) is
designated in Dm exactly when A avoids F+ and T-.  Adding such markers for
suitable formulas to the premises of a sequent valid in the stronger
system makes it valid in the weaker one.  ``dat_search`` finds a smallest
set of formulas to mark; everything is decided semantically.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Sequence

from mnm.nmatrix import builtin
from mnm.semantics import decide_consequence
from mnm.syntax import Atom, Box, Dia, Formula, Imp, Neg, bullet, circ, circ_prime, render, subformulas

__all__ = [
    "circ", "bullet", "circ_prime", "KINDS", "DatQuery", "DatWitness", "DatResult",
    "dat_verify", "dat_search", "widen_pool", "marking_table", "axiom_sequent",
]

# kind -> (source, target)
KINDS = {"circ": ("Dm", "Km"), "circt": ("Tm", "Dm"), "both": ("Tm", "Km")}


@dataclass(frozen=True)
class DatQuery:
    kind: str
    premises: tuple[Formula, ...]
    conclusion: Formula

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {', '.join(KINDS)}")

    @property
    def source(self) -> str:
        return KINDS[self.kind][0]

    @property
    def target(self) -> str:
        return KINDS[self.kind][1]


@dataclass(frozen=True)
class DatWitness:
    upsilon: tuple[Formula, ...] = ()
    upsilon_prime: tuple[Formula, ...] = ()

    @property
    def size(self) -> int:
        return len(self.upsilon) + len(self.upsilon_prime)


def marked_premises(q: DatQuery, w: DatWitness) -> tuple[Formula, ...]:
    extra = []
    if q.kind in ("circ", "both"):
        extra += [circ(f) for f in w.upsilon]
    if q.kind in ("circt", "both"):
        extra += [circ_prime(f) for f in w.upsilon_prime]
    return tuple(q.premises) + tuple(extra)


def dat_verify(q: DatQuery, w: DatWitness) -> bool:
    """Does the target system prove the conclusion once the witness's
    formulas are marked?"""
    return decide_consequence(builtin(q.target), marked_premises(q, w), q.conclusion).holds


def source_holds(q: DatQuery) -> bool:
    return decide_consequence(builtin(q.source), q.premises, q.conclusion).holds


def _candidates(q: DatQuery, pool: Sequence[Formula], size: int) -> Iterator[DatWitness]:
    if q.kind == "circ":
        for c in itertools.combinations(pool, size):
            yield DatWitness(upsilon=c)
    elif q.kind == "circt":
        for c in itertools.combinations(pool, size):
            yield DatWitness(upsilon_prime=c)
    else:
        for i in range(size + 1):
            for a in itertools.combinations(pool, i):
                for b in itertools.combinations(pool, size - i):
                    yield DatWitness(upsilon=a, upsilon_prime=b)


@dataclass(frozen=True)
class DatResult:
    query: DatQuery
    witness: DatWitness | None
    source_valid: bool
    tried: int
    note: str = ""

    def as_json(self) -> dict:
        w = self.witness
        return {
            "source": self.query.source,
            "target": self.query.target,
            "premises": [render(f) for f in self.query.premises],
            "conclusion": render(self.query.conclusion),
            "upsilon": [render(f) for f in w.upsilon] if w else None,
            "upsilon_prime": [render(f) for f in w.upsilon_prime] if w else None,
            "verified": w is not None,
            "note": self.note,
        }


def dat_search(q: DatQuery, pool: Sequence[Formula] | None = None, max_size: int = 3) -> DatResult:
    """Smallest marking set drawn from ``pool`` (default: the subformulas of
    the sequent), trying sizes in increasing order and subsets in pool order."""
    if not source_holds(q):
        return DatResult(q, None, False, 0, f"the sequent does not hold in {q.source}")
    if pool is None:
        pool = subformulas(*q.premises, q.conclusion)
    tried = 0
    for size in range(max_size + 1):
        for w in _candidates(q, pool, size):
            tried += 1
            if dat_verify(q, w):
                return DatResult(q, w, True, tried)
    return DatResult(q, None, True, tried, f"no witness of size <= {max_size} in the pool")


def widen_pool(base: Sequence[Formula], depth: int) -> list[Formula]:
    """``base`` plus every formula over its atoms of depth at most ``depth``."""
    atoms = [f for f in subformulas(*base) if isinstance(f, Atom)]
    layer: list[Formula] = list(atoms)
    seen = dict.fromkeys(layer)
    for _ in range(depth):
        current = list(seen)
        new = []
        for f in current:
            new += [Neg(f), Box(f), Dia(f)]
            new += [Imp(f, g) for g in current]
        for f in new:
            seen.setdefault(f, None)
    out = dict.fromkeys(base)
    for f in seen:
        out.setdefault(f, None)
    return list(out)


def marking_table(kind: str) -> dict:
    """Designation of circ A in Km (kind 'circ') or circt A in Dm (kind
    'circt') as a function of the value of A, read off the Nmatrix."""
    from mnm.semantics import reachable_values

    sid = "Km" if kind == "circ" else "Dm"
    op = circ if kind == "circ" else circ_prime
    nm = builtin(sid)
    reach = reachable_values(nm, op(Atom("A")), ["A"])
    return {combo[0]: frozenset(reach[combo]) for combo in reach}


def axiom_sequent(
    rng, sid: str, atoms_: Sequence[str] = ("p", "q"), depth: int = 1, target: str | None = None,
    parts: int = 1,
) -> tuple[tuple[Formula, ...], Formula]:
    """A sequent valid in ``sid`` by construction: a random instance of one
    of its axioms, with a random number of leading antecedents moved to the
    premises (so modus ponens gives back the consequent).

    With ``target``, half of the draws use an axiom of ``sid`` that the
    target system lacks, so that marking is usually needed.  With
    ``parts`` > 1, that many such sequents are drawn and their conclusions
    conjoined, which stays valid by classical reasoning.
    """
    if parts > 1:
        from mnm.syntax import conj

        drawn = [axiom_sequent(rng, sid, atoms_, depth, target) for _ in range(parts)]
        premises = tuple(dict.fromkeys(p for prem, _ in drawn for p in prem))
        goal = drawn[0][1]
        for _, c in drawn[1:]:
            goal = conj(goal, c)
        return premises, goal
    from mnm.calculus import axioms_of
    from mnm.generators import random_formula
    from mnm.syntax import metavariables

    axioms = axioms_of(sid)
    modal = [a for a in axioms if a.name not in ("A1", "A2", "A3")]
    missing = []
    if target is not None:
        have = {a.name for a in axioms_of(target)}
        missing = [a for a in axioms if a.name not in have]
    if missing and rng.random() < 0.5:
        ax = rng.choice(missing)
    else:
        ax = rng.choice(modal if rng.random() < 0.8 else axioms)
    f = ax.instance(**{m: random_formula(rng, depth, atoms_) for m in metavariables(ax.schema)})
    premises = []
    for _ in range(rng.randint(0, 3)):
        if not isinstance(f, Imp):
            break
        premises.append(f.left)
        f = f.right
    return tuple(premises), f
