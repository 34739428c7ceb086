"""Dugundji-style formulas and finite deterministic matrices.

delta(n) is the left-associated disjunction over i of
[]alpha(n) -> []beta_i(n), where alpha(n) joins p1..pn and beta_i(n) leaves
out p_i.  gamma(n) puts ~[] inside each box.  A deterministic matrix with
n values that models the weakest system validates delta(n + 1): two of the
n + 1 atoms must share a value, and then alpha and one beta_i agree.  The
Nmatrices refute delta(n) (resp. gamma(n)) for every n, so no finite
deterministic matrix characterises those systems.

This module builds the formulas, refutes them in the Nmatrices, and scans
small deterministic matrices with numpy.  Matrices are evaluated in
batches: a batch is a stack of tables and a formula is evaluated for every
matrix and every atom assignment at once.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import numpy as np

from mnm.calculus import axioms_of
from mnm.errors import BadN, BudgetExceeded
from mnm.generators import random_classical, random_formula
from mnm.nmatrix import builtin
from mnm.semantics import Valuation, decide_valid, find_valuation
from mnm.syntax import Atom, Box, Formula, Imp, Neg, atoms, big_disj, render, skeleton
from mnm.values import TruthValue

# Formulas.


@dataclass(frozen=True)
class DugundjiFormula:
    kind: str  # "delta" or "gamma"
    n: int
    formula: Formula
    alpha: Formula
    betas: tuple[Formula, ...]

    def render(self, unicode: bool = False) -> str:
        return render(self.formula, unicode=unicode, sugar=True, explicit=True)


def _atoms(n: int) -> list[Atom]:
    return [Atom(f"p{j}") for j in range(1, n + 1)]


def alpha(n: int) -> Formula:
    return big_disj(_atoms(n))


def beta(n: int, i: int) -> Formula:
    return big_disj(p for j, p in enumerate(_atoms(n), 1) if j != i)


def _build(kind: str, n: int) -> DugundjiFormula:
    if not isinstance(n, int) or n < 3:
        raise BadN(f"n must be an integer >= 3, got {n!r}")
    a = alpha(n)
    bs = tuple(beta(n, i) for i in range(1, n + 1))
    if kind == "delta":
        wrap = Box
    else:
        def wrap(f: Formula) -> Formula:
            return Box(Neg(Box(f)))
    f = big_disj(Imp(wrap(a), wrap(b)) for b in bs)
    return DugundjiFormula(kind, n, f, a, bs)


def build_delta(n: int) -> DugundjiFormula:
    return _build("delta", n)


def build_gamma(n: int) -> DugundjiFormula:
    return _build("gamma", n)


def falsify(sid: str, f: Formula | DugundjiFormula) -> Valuation | None:
    """A legal valuation of ``sid`` leaving ``f`` undesignated, or None.

    The search first tries the pattern of the non-validity argument: every
    atom C+, and for a DugundjiFormula also alpha on T+ with each beta_i on
    C+ (delta), or []alpha on F- with each []beta_i on C- (gamma).  It then
    drops the constraints one group at a time.
    """
    nm = builtin(sid)
    target = f.formula if isinstance(f, DugundjiFormula) else f
    seeds: list[dict[Formula, int]] = []
    cplus = 1 << TruthValue.C_PLUS
    if nm.domain_mask & cplus:
        atom_seed = {a: cplus for a in atoms(target)}
        if isinstance(f, DugundjiFormula):
            hint = dict(atom_seed)
            if f.kind == "delta":
                hint[f.alpha] = 1 << TruthValue.T_PLUS
                hint.update({b: cplus for b in f.betas})
            else:
                hint[Box(f.alpha)] = 1 << TruthValue.F_MINUS
                hint.update({Box(b): 1 << TruthValue.C_MINUS for b in f.betas})
            seeds.append(hint)
        seeds.append(atom_seed)
    seeds.append({})
    for seed in seeds:
        v = find_valuation(nm, (), seed, conclusion=target)
        if v is not None:
            return v
    return None


# Deterministic matrices.


@dataclass(frozen=True)
class DetMatrix:
    """A finite logical matrix over the values 0..size-1."""

    size: int
    designated: frozenset[int]
    neg: tuple[int, ...]
    imp: tuple[tuple[int, ...], ...]
    box: tuple[int, ...]
    dia: tuple[int, ...]
    labels: tuple[str, ...] | None = None

    def __post_init__(self) -> None:
        s = self.size
        if s < 1:
            raise ValueError("a matrix needs at least one value")
        if not self.designated or not self.designated < frozenset(range(s)):
            raise ValueError("the designated set must be a nonempty proper subset")
        for name in ("neg", "box", "dia"):
            t = getattr(self, name)
            if len(t) != s or any(not 0 <= x < s for x in t):
                raise ValueError(f"{name} must map each value to exactly one value")
        if len(self.imp) != s or any(len(r) != s or any(not 0 <= x < s for x in r) for r in self.imp):
            raise ValueError("imp must give exactly one value per pair")

    def label(self, x: int) -> str:
        return self.labels[x] if self.labels else str(x)

    def evaluate(self, f: Formula, h: Mapping[str, int]) -> int:
        if isinstance(f, Atom):
            return h[f.name]
        if isinstance(f, Imp):
            return self.imp[self.evaluate(f.left, h)][self.evaluate(f.right, h)]
        x = self.evaluate(f.child, h)
        return {Neg: self.neg, Box: self.box}.get(type(f), self.dia)[x]

    def as_json(self) -> dict:
        return {
            "size": self.size,
            "designated": sorted(self.designated),
            "neg": list(self.neg),
            "imp": [list(r) for r in self.imp],
            "box": list(self.box),
            "dia": list(self.dia),
        }


class _Batch:
    """A stack of matrices of one size as numpy arrays."""

    def __init__(self, size: int, des, neg, imp, box, dia):
        self.size = size
        self.des = np.asarray(des, dtype=bool)  # (B, s)
        self.neg = np.asarray(neg, dtype=np.int8)  # (B, s)
        self.imp = np.asarray(imp, dtype=np.int8).reshape(len(self.des), size * size)
        self.box = np.asarray(box, dtype=np.int8)
        self.dia = np.asarray(dia, dtype=np.int8)

    @classmethod
    def of(cls, ms: Sequence[DetMatrix]) -> "_Batch":
        s = ms[0].size
        return cls(
            s,
            [[x in m.designated for x in range(s)] for m in ms],
            [m.neg for m in ms],
            [m.imp for m in ms],
            [m.box for m in ms],
            [m.dia for m in ms],
        )

    def __len__(self) -> int:
        return len(self.des)

    def take(self, idx) -> "_Batch":
        s = self.size
        return _Batch(s, self.des[idx], self.neg[idx], self.imp[idx], self.box[idx], self.dia[idx])

    def matrix(self, b: int) -> DetMatrix:
        s = self.size
        return DetMatrix(
            s,
            frozenset(int(x) for x in np.flatnonzero(self.des[b])),
            tuple(int(x) for x in self.neg[b]),
            tuple(tuple(int(x) for x in self.imp[b, r * s:(r + 1) * s]) for r in range(s)),
            tuple(int(x) for x in self.box[b]),
            tuple(int(x) for x in self.dia[b]),
        )

    def values(self, fs: Sequence[Formula], names: Sequence[str]) -> list[np.ndarray]:
        """Value arrays (B, s**k) of each formula over all assignments to
        ``names``, in itertools.product order."""
        s, B = self.size, len(self)
        grid = np.array(list(itertools.product(range(s), repeat=len(names))), dtype=np.int8)
        if not names:
            grid = grid.reshape(1, 0)
        col = {n: np.broadcast_to(grid[:, j], (B, len(grid))) for j, n in enumerate(names)}
        memo: dict[Formula, np.ndarray] = {}

        def ev(f: Formula) -> np.ndarray:
            if f in memo:
                return memo[f]
            if isinstance(f, Atom):
                out = col[f.name]
            elif isinstance(f, Imp):
                idx = ev(f.left).astype(np.int16) * s + ev(f.right)
                out = np.take_along_axis(self.imp, idx, axis=1)
            else:
                table = {Neg: self.neg, Box: self.box}.get(type(f), self.dia)
                out = np.take_along_axis(table, ev(f.child), axis=1)
            memo[f] = out
            return out

        return [ev(f) for f in fs]

    def valid(self, f: Formula) -> np.ndarray:
        """Per-matrix validity of ``f``."""
        names = [a.name for a in atoms(f)]
        (v,) = self.values([f], names)
        return np.take_along_axis(self.des, v, axis=1).all(axis=1)

    def mp_preserving(self) -> np.ndarray:
        s = self.size
        ok = np.ones(len(self), dtype=bool)
        for x in range(s):
            for y in range(s):
                xy = self.imp[:, x * s + y]
                d_xy = np.take_along_axis(self.des, xy[:, None], axis=1)[:, 0]
                ok &= ~(self.des[:, x] & d_xy & ~self.des[:, y])
        return ok

    def models(self, sid: str) -> np.ndarray:
        ok = self.mp_preserving()
        for ax in axioms_of(sid):
            if not ok.any():
                break
            live = np.flatnonzero(ok)
            ok[live] &= self.take(live).valid(skeleton(ax.schema))
        return ok


def is_model(m: DetMatrix, sid: str) -> bool:
    """Every axiom skeleton of ``sid`` is valid in ``m`` and modus ponens
    preserves designation."""
    return bool(_Batch.of([m]).models(sid)[0])


def validate_det(m: DetMatrix, f: Formula | DugundjiFormula) -> bool:
    if isinstance(f, DugundjiFormula):
        f = f.formula
    return bool(_Batch.of([m]).valid(f)[0])


def validate_det_direct(m: DetMatrix, f: Formula) -> bool:
    """Plain recursive evaluation over every assignment; cross-checks the
    batched evaluator."""
    names = [a.name for a in atoms(f)]
    for combo in itertools.product(range(m.size), repeat=len(names)):
        if m.evaluate(f, dict(zip(names, combo))) not in m.designated:
            return False
    return True


def substitution_failures(m: DetMatrix, n: int) -> list[tuple[tuple[int, ...], int, int]]:
    """Assignments h to p1..pn and pairs i != k with h(p_i) = h(p_k) but
    h(alpha(n)) != h(beta_i(n)).  The pigeonhole step of the validity
    argument needs this list to be empty."""
    names = [f"p{j}" for j in range(1, n + 1)]
    fs = [alpha(n)] + [beta(n, i) for i in range(1, n + 1)]
    vals = _Batch.of([m]).values(fs, names)
    a = vals[0][0]
    out = []
    for r, h in enumerate(itertools.product(range(m.size), repeat=n)):
        for i in range(n):
            if any(h[i] == h[k] for k in range(n) if k != i) and a[r] != vals[i + 1][0][r]:
                k = next(k for k in range(n) if k != i and h[k] == h[i])
                out.append((h, i + 1, k + 1))
    return out


# Enumeration.


def _unary_tables(s: int) -> np.ndarray:
    return np.array(list(itertools.product(range(s), repeat=s)), dtype=np.int8)


def _designated_sets(s: int) -> np.ndarray:
    rows = [r for r in itertools.product((False, True), repeat=s) if any(r) and not all(r)]
    return np.array(rows, dtype=bool)


def count_candidates(size: int) -> int:
    """Matrices of ``size`` values: designated sets times tables."""
    s = size
    return len(_designated_sets(s)) * s ** s * s ** (s * s) * s ** s * s ** s


def _all_of_size(s: int) -> _Batch:
    des = _designated_sets(s)
    un = _unary_tables(s)
    bi = np.array(list(itertools.product(range(s), repeat=s * s)), dtype=np.int8)
    idx = np.array(list(itertools.product(range(len(des)), range(len(un)), range(len(bi)), range(len(un)), range(len(un)))))
    return _Batch(s, des[idx[:, 0]], un[idx[:, 1]], bi[idx[:, 2]], un[idx[:, 3]], un[idx[:, 4]])


def _permuted(batch: _Batch, perm: Sequence[int]) -> _Batch:
    """The isomorphic copies under the value renaming x -> perm[x]."""
    s = batch.size
    p = np.asarray(perm, dtype=np.int8)
    inv = np.argsort(p).astype(np.int8)
    des = batch.des[:, inv]
    neg = p[batch.neg[:, inv]]
    box = p[batch.box[:, inv]]
    dia = p[batch.dia[:, inv]]
    pairs = np.array([inv[x] * s + inv[y] for x in range(s) for y in range(s)])
    imp = p[batch.imp[:, pairs]]
    return _Batch(s, des, neg, imp, box, dia)


def _codes(batch: _Batch) -> np.ndarray:
    """Integer code of each matrix, for comparing isomorphic copies."""
    s = batch.size
    parts = [batch.des.astype(np.int64), batch.neg, batch.imp, batch.box, batch.dia]
    digits = np.concatenate([np.asarray(p, dtype=np.int64) for p in parts], axis=1)
    base = max(s, 2)
    code = np.zeros(len(batch), dtype=object if digits.shape[1] * np.log2(base) > 62 else np.int64)
    for j in range(digits.shape[1]):
        code = code * base + digits[:, j]
    return code


def canonical_mask(batch: _Batch) -> np.ndarray:
    """True for the matrices whose code is least among their isomorphic
    copies, one representative per class."""
    own = _codes(batch)
    keep = np.ones(len(batch), dtype=bool)
    for perm in itertools.permutations(range(batch.size)):
        if list(perm) == list(range(batch.size)):
            continue
        keep &= own <= _codes(_permuted(batch, perm))
    # ties (automorphisms) keep every tied copy; drop exact duplicates
    _, first = np.unique(own[keep], return_index=True)
    mask = np.zeros(len(batch), dtype=bool)
    mask[np.flatnonzero(keep)[first]] = True
    return mask


@dataclass
class ScanReport:
    size: int
    system: str
    formula: str
    candidates: int
    classes: int
    models: int
    violations: list[DetMatrix] = field(default_factory=list)
    substitution_failures: int = 0
    seed: int | None = None
    mode: str = "exhaustive"

    @property
    def ok(self) -> bool:
        return not self.violations

    def as_json(self) -> dict:
        return {
            "size": self.size,
            "system": self.system,
            "formula": self.formula,
            "mode": self.mode,
            "candidates": self.candidates,
            "classes": self.classes,
            "models": self.models,
            "violations": [m.as_json() for m in self.violations],
            "substitution_failures": self.substitution_failures,
            "seed": self.seed,
        }


SAMPLE_CAP = 2_000_000


def _substitution_fail_mask(batch: _Batch, n: int) -> np.ndarray:
    """Per matrix: does some assignment with h(p_i) = h(p_k), i != k, give
    alpha(n) and beta_i(n) different values?"""
    names = [f"p{j}" for j in range(1, n + 1)]
    vals = batch.values([alpha(n)] + [beta(n, i) for i in range(1, n + 1)], names)
    grid = np.array(list(itertools.product(range(batch.size), repeat=n)))
    fail = np.zeros(len(batch), dtype=bool)
    for i in range(n):
        shared = np.zeros(len(grid), dtype=bool)
        for k in range(n):
            if k != i:
                shared |= grid[:, i] == grid[:, k]
        fail |= ((vals[0] != vals[i + 1]) & shared[None, :]).any(axis=1)
    return fail


def _scan_batch(batch: _Batch, sid: str, f: Formula, n_sub: int | None) -> tuple[int, list[DetMatrix], int]:
    ok = batch.models(sid)
    live = np.flatnonzero(ok)
    if not len(live):
        return 0, [], 0
    models = batch.take(live)
    good = models.valid(f)
    bad = [models.matrix(int(b)) for b in np.flatnonzero(~good)]
    subs = int(_substitution_fail_mask(models, n_sub).sum()) if n_sub is not None else 0
    return len(live), bad, subs


def _run(batches: Iterable[_Batch], sid: str, f: Formula, n_sub: int | None, jobs: int) -> tuple[int, int, list[DetMatrix], int]:
    """Scan the batches, in parallel when ``jobs`` > 1; results are merged
    in batch order so reports do not depend on ``jobs``."""
    seen = models = subs = 0
    bad: list[DetMatrix] = []

    def merge(k: int, res) -> None:
        nonlocal seen, models, subs
        seen += k
        models += res[0]
        bad.extend(res[1])
        subs += res[2]

    if jobs <= 1:
        for b in batches:
            merge(len(b), _scan_batch(b, sid, f, n_sub))
    else:
        from concurrent.futures import ProcessPoolExecutor

        blist = list(batches)
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            for b, res in zip(blist, ex.map(_scan_batch, blist, *zip(*[(sid, f, n_sub)] * len(blist)))):
                merge(len(b), res)
    return seen, models, bad, subs


def scan_matrices(
    size: int,
    sid: str,
    f: Formula | DugundjiFormula,
    *,
    samples: int = 200_000,
    seed: int = 0,
    exhaustive: bool = False,
    check_substitution: bool = True,
    jobs: int = 1,
) -> ScanReport:
    """Look for matrices of ``size`` values that model ``sid`` but do not
    validate ``f``.

    Size 2 is always exhaustive, one representative per isomorphism class.
    Size 3 draws ``samples`` uniform candidates by default; with
    ``exhaustive`` it enumerates every {~, ->} part that models the
    classical axioms and then every modal part on top of it.
    """
    n_sub = f.n if isinstance(f, DugundjiFormula) and check_substitution else None
    formula = f.formula if isinstance(f, DugundjiFormula) else f
    text = render(formula, sugar=True)
    if size not in (2, 3):
        raise BadN(f"size must be 2 or 3, got {size}")
    if size == 2:
        batch = _all_of_size(2)
        reps = batch.take(np.flatnonzero(canonical_mask(batch)))
        _, models, bad, subs = _run([reps], sid, formula, n_sub, 1)
        return ScanReport(2, sid, text, len(batch), len(reps), models, bad, subs, None, "exhaustive")
    if exhaustive:
        seen, models, bad, subs = _run(_exhaustive3(), sid, formula, n_sub, jobs)
        # classes counts the candidates left after the classical filter
        return ScanReport(3, sid, text, count_candidates(3), seen, models, bad, subs, None, "exhaustive")
    if samples > SAMPLE_CAP:
        raise BudgetExceeded(f"{samples} samples exceeds the cap of {SAMPLE_CAP}")
    seen, models, bad, subs = _run(_sampled3(samples, seed), sid, formula, n_sub, jobs)
    return ScanReport(3, sid, text, samples, seen, models, bad, subs, seed, "sampled")


def _sampled3(samples: int, seed: int, chunk: int = 50_000) -> Iterable[_Batch]:
    rng = np.random.default_rng(seed)
    s = 3
    done = 0
    while done < samples:
        k = min(chunk, samples - done)
        des = _designated_sets(s)[rng.integers(0, 6, k)]
        yield _Batch(
            s, des,
            rng.integers(0, s, (k, s)), rng.integers(0, s, (k, s * s)),
            rng.integers(0, s, (k, s)), rng.integers(0, s, (k, s)),
        )
        done += k


def _exhaustive3() -> Iterable[_Batch]:
    s = 3
    pc = classical_parts(s)
    un = _unary_tables(s)
    pairs = np.array(list(itertools.product(range(len(un)), repeat=2)))
    k = len(pairs)
    for j in range(len(pc)):
        yield _Batch(
            s,
            np.repeat(pc.des[j:j + 1], k, axis=0),
            np.repeat(pc.neg[j:j + 1], k, axis=0),
            np.repeat(pc.imp[j:j + 1], k, axis=0),
            un[pairs[:, 0]],
            un[pairs[:, 1]],
        )


_PC = ("A1", "A2", "A3")


def classical_parts(size: int) -> _Batch:
    """Every (designated, ~, ->) of ``size`` values that validates the
    classical axioms and respects modus ponens; the modal tables are zero."""
    from mnm.calculus import CATALOGUE

    s = size
    des = _designated_sets(s)
    un = _unary_tables(s)
    bi = np.array(list(itertools.product(range(s), repeat=s * s)), dtype=np.int8)
    keep_des, keep_neg, keep_imp = [], [], []
    zeros = np.zeros((len(bi), s), dtype=np.int8)
    for d in des:
        for n in un:
            b = _Batch(s, np.broadcast_to(d, (len(bi), s)), np.broadcast_to(n, (len(bi), s)), bi, zeros, zeros)
            ok = b.mp_preserving()
            for name in _PC:
                live = np.flatnonzero(ok)
                if not len(live):
                    break
                ok[live] &= b.take(live).valid(skeleton(CATALOGUE[name].schema))
            for j in np.flatnonzero(ok):
                keep_des.append(d)
                keep_neg.append(n)
                keep_imp.append(bi[j])
    k = len(keep_des)
    z = np.zeros((k, s), dtype=np.int8)
    return _Batch(s, np.array(keep_des).reshape(k, s), np.array(keep_neg).reshape(k, s),
                  np.array(keep_imp).reshape(k, s * s), z, z)


# Conservativity over classical logic.


def classical_valid(f: Formula) -> bool:
    """Two-valued truth-table validity of a {~, ->} formula."""
    names = [a.name for a in atoms(f)]

    def ev(g: Formula, h: dict) -> bool:
        if isinstance(g, Atom):
            return h[g.name]
        if isinstance(g, Neg):
            return not ev(g.child, h)
        if isinstance(g, Imp):
            return (not ev(g.left, h)) or ev(g.right, h)
        raise ValueError("classical formulas use only ~ and ->")

    return all(ev(f, dict(zip(names, row))) for row in itertools.product((False, True), repeat=len(names)))


@dataclass
class ConservativityReport:
    system: str
    samples: int
    valid: int
    discrepancies: list[str]

    @property
    def ok(self) -> bool:
        return not self.discrepancies

    def as_json(self) -> dict:
        return {"system": self.system, "samples": self.samples, "classically_valid": self.valid,
                "discrepancies": self.discrepancies}


def conservativity_check(sid: str, sample_count: int = 1000, max_depth: int = 6, seed: int = 0) -> ConservativityReport:
    rng = random.Random(seed)
    nm = builtin(sid)
    valid = 0
    bad = []
    for _ in range(sample_count):
        f = random_classical(rng, max_depth)
        c = classical_valid(f)
        valid += c
        if c != decide_valid(nm, f).holds:
            bad.append(render(f))
    return ConservativityReport(sid, sample_count, valid, bad)


# The deterministic four-valued matrix.

L4_VALUES = (Fraction(1), Fraction(2, 3), Fraction(1, 3), Fraction(0))
L4_LABELS = ("T+", "C+", "C-", "F-")


def l4_matrix() -> DetMatrix:
    """Negation 1 - x and x -> y = max(1 - x, y) on {1, 2/3, 1/3, 0}; box
    is 1 only at 1, diamond is 0 only at 0; 1 and 2/3 are designated."""
    vals = L4_VALUES
    idx = {v: i for i, v in enumerate(vals)}
    neg = tuple(idx[1 - x] for x in vals)
    imp = tuple(tuple(idx[max(1 - x, y)] for y in vals) for x in vals)
    box = tuple(idx[Fraction(1) if x == 1 else Fraction(0)] for x in vals)
    dia = tuple(idx[Fraction(0) if x == 0 else Fraction(1)] for x in vals)
    des = frozenset(i for i, x in enumerate(vals) if x >= Fraction(2, 3))
    return DetMatrix(4, des, neg, imp, box, dia, L4_LABELS)


@dataclass
class AgreementReport:
    samples: int
    valid: int
    disagreements: list[str]

    @property
    def ok(self) -> bool:
        return not self.disagreements

    def as_json(self) -> dict:
        return {"samples": self.samples, "valid": self.valid, "disagreements": self.disagreements}


def t45md_agreement(sample_count: int = 500, seed: int = 0, max_depth: int = 4) -> AgreementReport:
    rng = random.Random(seed)
    m = l4_matrix()
    nm = builtin("T45md")
    valid = 0
    bad = []
    for _ in range(sample_count):
        f = random_formula(rng, max_depth)
        a = validate_det(m, f)
        valid += a
        if a != decide_valid(nm, f).holds:
            bad.append(render(f))
    return AgreementReport(sample_count, valid, bad)


def from_nmatrix(sid: str) -> DetMatrix | None:
    """The Nmatrix of ``sid`` as a DetMatrix when every cell is a singleton."""
    nm = builtin(sid)
    vals = list(nm.values)
    pos = {v: i for i, v in enumerate(vals)}

    def one(mask: int) -> int | None:
        got = [v for v in vals if mask >> v & 1]
        return pos[got[0]] if len(got) == 1 else None

    alg = nm.algebra
    neg = [one(alg.cell("neg", (x,))) for x in vals]
    box = [one(alg.cell("box", (x,))) for x in vals]
    dia = [one(alg.cell("dia", (x,))) for x in vals]
    imp = [[one(alg.cell("imp", (x, y))) for y in vals] for x in vals]
    if None in neg + box + dia or any(None in r for r in imp):
        return None
    des = frozenset(pos[v] for v in vals if nm.designated >> v & 1)
    return DetMatrix(len(vals), des, tuple(neg), tuple(tuple(r) for r in imp), tuple(box), tuple(dia),
                     tuple(v.label for v in vals))


def to_values(m: DetMatrix, h: Mapping[str, int]) -> dict[str, str]:
    return {k: m.label(v) for k, v in h.items()}


__all__ = [
    "DugundjiFormula", "build_delta", "build_gamma", "alpha", "beta", "falsify",
    "DetMatrix", "is_model", "validate_det", "scan_matrices", "ScanReport",
    "conservativity_check", "classical_valid", "l4_matrix", "t45md_agreement",
    "substitution_failures", "count_candidates",
]
