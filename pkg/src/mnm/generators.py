"""Seeded random formulas and queries for property tests and sweeps."""

from __future__ import annotations

import random
from typing import Sequence

from mnm.syntax import Atom, Box, Dia, Formula, Imp, Neg, subformulas

DEFAULT_ATOMS = ("p", "q", "r")


def random_formula(
    rng: random.Random,
    max_depth: int,
    atoms: Sequence[str] = DEFAULT_ATOMS,
    modal: bool = True,
) -> Formula:
    """A random formula of depth at most ``max_depth``."""
    if max_depth <= 0 or rng.random() < 0.25:
        return Atom(rng.choice(atoms))
    ops = ("neg", "imp", "imp", "box", "dia") if modal else ("neg", "imp", "imp")
    op = rng.choice(ops)
    if op == "imp":
        return Imp(
            random_formula(rng, max_depth - 1, atoms, modal),
            random_formula(rng, max_depth - 1, atoms, modal),
        )
    child = random_formula(rng, max_depth - 1, atoms, modal)
    return {"neg": Neg, "box": Box, "dia": Dia}[op](child)


def random_query(
    rng: random.Random,
    max_depth: int = 5,
    atoms: Sequence[str] = DEFAULT_ATOMS,
    max_premises: int = 2,
    max_nodes: int | None = None,
) -> tuple[tuple[Formula, ...], Formula]:
    """Up to ``max_premises`` premises and a conclusion; with ``max_nodes``,
    resample until there are at most that many distinct subformulas."""
    while True:
        k = rng.randint(0, max_premises)
        premises = tuple(random_formula(rng, rng.randint(0, max_depth), atoms) for _ in range(k))
        conclusion = random_formula(rng, max_depth, atoms)
        if max_nodes is None or len(subformulas(*premises, conclusion)) <= max_nodes:
            return premises, conclusion


def random_classical(rng: random.Random, max_depth: int, atoms: Sequence[str] = DEFAULT_ATOMS) -> Formula:
    return random_formula(rng, max_depth, atoms, modal=False)
