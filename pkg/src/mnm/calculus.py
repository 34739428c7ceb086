"""Hilbert calculi: axiom schemas, derivation checking and the deduction
transform.

Every system extends the same three-schema base for classical logic with
modus ponens as the only rule.  A derivation is a context of hypotheses
and a list of steps, each justified as a hypothesis, an axiom instance or
an application of modus ponens to two earlier steps.

Diamond is a primitive connective.  Some arguments read <>A as shorthand
for ~[]~A; ``dia="abbrev"`` makes the checker compare formulas after that
unfolding, so those arguments can be written down as derivations.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Mapping, Sequence, Union

from mnm.errors import DerivationFormatError, InvalidInput, StepError, UnknownSystem
from mnm.syntax import (
    Atom,
    Box,
    Dia,
    Formula,
    Imp,
    Neg,
    Sequent,
    instantiate,
    match_schema,
    metavariables,
    parse,
    render,
)


@dataclass(frozen=True)
class AxiomSchema:
    name: str
    schema: Formula

    def instance(self, **binding: Formula) -> Formula:
        return instantiate(self.schema, binding)


_CATALOGUE_SRC = [
    ("A1", "A -> (B -> A)"),
    ("A2", "(A -> (B -> C)) -> ((A -> B) -> (A -> C))"),
    ("A3", "(~B -> ~A) -> ((~B -> A) -> B)"),
    ("K", "[](A -> B) -> ([]A -> []B)"),
    ("K1", "[](A -> B) -> (<>A -> <>B)"),
    ("K2", "<>(A -> B) -> ([]A -> <>B)"),
    ("M1", "~<>A -> [](A -> B)"),
    ("M2", "[]B -> [](A -> B)"),
    ("M3", "<>B -> <>(A -> B)"),
    ("M4", "<>~A -> <>(A -> B)"),
    ("T", "[]A -> A"),
    ("D", "[]A -> <>A"),
    ("4", "[]A -> [][]A"),
    ("5", "<>[]A -> []A"),
    ("DN1", "[]A -> []~~A"),
    ("DN2", "[]~~A -> []A"),
    ("K'", "<>A -> ([](A -> B) -> ([]A -> []B))"),
    ("K1'", "<>~B -> ([](A -> B) -> (<>A -> <>B))"),
    ("K2'", "<>A -> (<>(A -> B) -> ([]A -> <>B))"),
    ("M3'", "(<>A | <>~A) -> (<>B -> <>(A -> B))"),
    ("M4'", "<>~B -> (<>~A -> <>(A -> B))"),
    ("I1", "([]A & []~A) -> ([](A -> B) & []~(A -> B))"),
    ("I2", "([]B & []~B) -> ([](A -> B) & []~(A -> B))"),
    ("K''", "circ A -> ([](A -> B) -> ([]A -> []B))"),
    ("K1''", "circ B -> ([](A -> B) -> (<>A -> <>B))"),
    ("K2''", "circ A -> (<>(A -> B) -> ([]A -> <>B))"),
    ("M3''", "circ A -> (<>B -> <>(A -> B))"),
    ("M4''", "circ B -> (<>~A -> <>(A -> B))"),
    ("I1'", "bullet A -> bullet (A -> B)"),
    ("I2'", "bullet B -> bullet (A -> B)"),
    ("I1''", "circ (A -> B) -> circ A"),
    ("I2''", "circ (A -> B) -> circ B"),
    ("Kdet", "[](A -> B) -> (<>A -> []B)"),
]

CATALOGUE: dict[str, AxiomSchema] = {name: AxiomSchema(name, parse(src)) for name, src in _CATALOGUE_SRC}

_PC = ["A1", "A2", "A3"]
_TM = _PC + ["K", "K1", "K2", "M1", "M2", "M3", "M4", "T", "DN1", "DN2"]
_DM = [("D" if n == "T" else n) for n in _TM]
_KM = _PC + ["K'", "K1'", "K2'", "M3'", "M4'", "I1", "I2", "M1", "M2", "DN1", "DN2"]
_TMD = [("Kdet" if n == "K1" else n) for n in _TM]
_KM_CIRC = _PC + ["K''", "K1''", "K2''", "M3''", "M4''", "I1'", "I2'", "M1", "M2", "DN1", "DN2"]
_KM_CIRC_BACK = _PC + ["K''", "K1''", "K2''", "M3''", "M4''", "I1''", "I2''", "M1", "M2", "DN1", "DN2"]

SYSTEM_AXIOMS: dict[str, list[str]] = {
    "Tm": _TM,
    "T4m": _TM + ["4"],
    "T45m": _TM + ["4", "5"],
    "Dm": _DM,
    "D4m": _DM + ["4"],
    "D45m": _DM + ["4", "5"],
    "Km": _KM,
    "K4m": _KM + ["4"],
    "K45m": _KM + ["4", "5"],
    "Tmd": _TMD,
    "T4md": _TMD + ["4"],
    "T45md": _TMD + ["4", "5"],
}

# Alternative axiomatizations of Km through the consistency operator.
ALTERNATE_AXIOMS: dict[str, list[str]] = {
    "Km-circ": _KM_CIRC,
    "Km-circ-back": _KM_CIRC_BACK,
}


def axioms_of(sid: str) -> list[AxiomSchema]:
    names = SYSTEM_AXIOMS.get(sid) or ALTERNATE_AXIOMS.get(sid)
    if names is None:
        raise UnknownSystem(sid)
    return [CATALOGUE[n] for n in names]


# Derivations.

@dataclass(frozen=True)
class Hyp:
    def __str__(self) -> str:
        return "hyp"


@dataclass(frozen=True)
class Ax:
    name: str
    binding: tuple[tuple[str, Formula], ...] | None = None

    def __str__(self) -> str:
        if not self.binding:
            return f"ax {self.name}"
        inner = "; ".join(f"{k}={render(v)}" for k, v in self.binding)
        return f"ax {self.name} [{inner}]"


@dataclass(frozen=True)
class MP:
    minor: int  # 1-based index of the antecedent step
    major: int  # 1-based index of the implication step

    def __str__(self) -> str:
        return f"mp {self.minor} {self.major}"


Justification = Union[Hyp, Ax, MP]


@dataclass(frozen=True)
class Step:
    formula: Formula
    why: Justification


@dataclass(frozen=True)
class Derivation:
    system: str
    context: tuple[Formula, ...]
    steps: tuple[Step, ...]
    dia: str = "primitive"
    title: str = ""

    @property
    def conclusion(self) -> Formula:
        return self.steps[-1].formula

    @property
    def sequent(self) -> Sequent:
        return Sequent(self.context, self.conclusion)


@lru_cache(maxsize=1 << 16)
def unfold_dia(f: Formula) -> Formula:
    """Replace every <>A by ~[]~A."""
    if isinstance(f, Atom):
        return f
    if isinstance(f, Imp):
        left, right = unfold_dia(f.left), unfold_dia(f.right)
        if left is f.left and right is f.right:
            return f
        return Imp(left, right)
    inner = unfold_dia(f.child)
    if isinstance(f, Dia):
        return Neg(Box(Neg(inner)))
    return f if inner is f.child else type(f)(inner)


def _axiom_list(system) -> tuple[str, list[AxiomSchema]]:
    if isinstance(system, str):
        return system, axioms_of(system)
    axioms = list(system)
    return "custom", axioms


def check_derivation(system, d: Derivation, dia: str | None = None) -> Sequent:
    """Check every step of ``d``; return the derived sequent.

    ``system`` is a system id or an explicit list of axiom schemas.  Raises
    StepError naming the first bad step (1-based).
    """
    _, axioms = _axiom_list(system)
    by_name = {a.name: a for a in axioms}
    mode = dia or d.dia
    norm = unfold_dia if mode == "abbrev" else (lambda f: f)
    context = {norm(g) for g in d.context}
    if not d.steps:
        raise StepError(0, "IndexOutOfRange", "empty derivation")
    seen: list[Formula] = []
    for idx, step in enumerate(d.steps, 1):
        f = norm(step.formula)
        why = step.why
        if isinstance(why, Hyp):
            if f not in context:
                raise StepError(idx, "NotAHypothesis", render(step.formula))
        elif isinstance(why, Ax):
            ax = by_name.get(why.name)
            if ax is None:
                raise StepError(idx, "NotAnInstance", f"{why.name} is not an axiom of this system")
            schema = norm(ax.schema)
            if why.binding is not None:
                binding = dict(why.binding)
                missing = [m for m in metavariables(schema) if m not in binding]
                if missing:
                    raise StepError(idx, "NotAnInstance", f"no binding for {', '.join(missing)}")
                if norm(instantiate(schema, binding)) != f:
                    raise StepError(idx, "NotAnInstance", f"binding does not produce the step under {why.name}")
            elif match_schema(schema, f) is None:
                raise StepError(idx, "NotAnInstance", f"not an instance of {why.name}")
        elif isinstance(why, MP):
            i, j = why.minor, why.major
            if not (1 <= i < idx and 1 <= j < idx):
                raise StepError(idx, "IndexOutOfRange", f"mp {i} {j}")
            if seen[j - 1] != Imp(seen[i - 1], f):
                raise StepError(idx, "BadMP", f"step {j} is not step {i} -> this step")
        else:
            raise StepError(idx, "NotAnInstance", f"unknown justification {why!r}")
        seen.append(f)
    return d.sequent


def is_valid_derivation(system, d: Derivation) -> bool:
    try:
        check_derivation(system, d)
    except StepError:
        return False
    return True


# The deduction transform.

def _ax(name: str, **binding: Formula) -> Step:
    f = CATALOGUE[name].instance(**binding)
    return Step(f, Ax(name, tuple(sorted(binding.items()))))


def deduction_transform(system, d: Derivation, hypothesis: Formula | None = None) -> Derivation:
    """From a derivation of B out of G, H build one of H -> B out of G.

    ``hypothesis`` defaults to the last formula of the context.  Each step
    C becomes a block ending in H -> C: axioms and other hypotheses are
    weakened with A1, H itself becomes the five-step proof of H -> H, and
    modus ponens is replayed through A2.
    """
    try:
        check_derivation(system, d)
    except StepError as e:
        raise InvalidInput(f"source derivation does not check: {e}") from e
    if hypothesis is None:
        if not d.context:
            raise InvalidInput("nothing to discharge")
        hypothesis = d.context[-1]
    if hypothesis not in d.context:
        raise InvalidInput(f"{render(hypothesis)} is not a hypothesis")
    h = hypothesis
    norm = unfold_dia if d.dia == "abbrev" else (lambda f: f)
    context = tuple(g for g in d.context if norm(g) != norm(h))
    out: list[Step] = []
    where: dict[int, int] = {}  # old step -> new step proving h -> C

    def emit(step: Step) -> int:
        out.append(step)
        return len(out)

    for idx, step in enumerate(d.steps, 1):
        c = step.formula
        why = step.why
        if isinstance(why, Hyp) and norm(c) == norm(h):
            # h -> ((h -> h) -> h), then A2 twice down to h -> h
            s1 = emit(_ax("A1", A=h, B=Imp(h, h)))
            s2 = emit(_ax("A2", A=h, B=Imp(h, h), C=h))
            s3 = emit(Step(Imp(Imp(h, Imp(h, h)), Imp(h, h)), MP(s1, s2)))
            s4 = emit(_ax("A1", A=h, B=h))
            where[idx] = emit(Step(Imp(h, h), MP(s4, s3)))
        elif isinstance(why, (Hyp, Ax)):
            s1 = emit(Step(c, why))
            s2 = emit(_ax("A1", A=c, B=h))
            where[idx] = emit(Step(Imp(h, c), MP(s1, s2)))
        else:
            a = d.steps[why.minor - 1].formula
            ha = where[why.minor]
            hac = where[why.major]
            s1 = emit(_ax("A2", A=h, B=a, C=c))
            s2 = emit(Step(Imp(Imp(h, a), Imp(h, c)), MP(hac, s1)))
            where[idx] = emit(Step(Imp(h, c), MP(ha, s2)))
    return Derivation(d.system, context, tuple(out), d.dia, d.title)


# Builder for hand-written derivations.

class ProofBuilder:
    """Accumulates steps; reuses a step when the same formula is derived twice."""

    def __init__(self, system: str, context: Sequence[Formula] = (), dia: str = "primitive"):
        self.system = system
        self.context = tuple(context)
        self.dia = dia
        self.steps: list[Step] = []
        self._index: dict[Formula, int] = {}

    def _norm(self, f: Formula) -> Formula:
        return unfold_dia(f) if self.dia == "abbrev" else f

    def _add(self, step: Step) -> int:
        key = self._norm(step.formula)
        if key in self._index:
            return self._index[key]
        self.steps.append(step)
        self._index[key] = len(self.steps)
        return len(self.steps)

    def formula(self, i: int) -> Formula:
        return self.steps[i - 1].formula

    def hyp(self, f: Formula) -> int:
        if self._norm(f) not in {self._norm(g) for g in self.context}:
            raise InvalidInput(f"{render(f)} is not in the context")
        return self._add(Step(f, Hyp()))

    def ax(self, name: str, **binding: Formula) -> int:
        return self._add(_ax(name, **binding))

    def mp(self, minor: int, major: int) -> int:
        a = self._norm(self.formula(minor))
        imp = self._norm(self.formula(major))
        if not isinstance(imp, Imp) or imp.left != a:
            raise InvalidInput(f"cannot apply step {major} to step {minor}")
        # keep the consequent as written in the major premise
        raw = self.formula(major)
        consequent = raw.right if isinstance(raw, Imp) else imp.right
        return self._add(Step(consequent, MP(minor, major)))

    def have(self, i: int, f: Formula) -> int:
        """Restate step i as ``f``, which must agree with it up to unfolding."""
        if self._norm(self.formula(i)) != self._norm(f):
            raise InvalidInput(f"{render(f)} does not restate step {i}")
        self.steps[i - 1] = Step(f, self.steps[i - 1].why)
        return i

    def use(self, lemma: Derivation, binding: Mapping[str, Formula], premises: Sequence[int] = ()) -> int:
        """Splice in a derivation of a schematic lemma.

        ``lemma`` is written over metavariables; ``premises`` are steps of
        this proof proving its context, in order, after substitution.
        """
        if len(premises) != len(lemma.context):
            raise InvalidInput("premise count does not match the lemma context")
        ctx = [instantiate(g, binding) for g in lemma.context]
        for i, g in zip(premises, ctx):
            if self._norm(self.formula(i)) != self._norm(g):
                raise InvalidInput(f"step {i} does not prove {render(g)}")
        local: dict[int, int] = {}
        for idx, step in enumerate(lemma.steps, 1):
            f = instantiate(step.formula, binding)
            why = step.why
            if isinstance(why, Hyp):
                local[idx] = premises[[self._norm(g) for g in ctx].index(self._norm(f))]
            elif isinstance(why, Ax):
                b = dict(why.binding) if why.binding else match_schema(CATALOGUE[why.name].schema, step.formula)
                if b is None and lemma.dia == "abbrev":
                    b = match_schema(unfold_dia(CATALOGUE[why.name].schema), unfold_dia(step.formula))
                inst = {k: instantiate(v, binding) for k, v in b.items()}
                local[idx] = self.ax(why.name, **inst)
            else:
                local[idx] = self.mp(local[why.minor], local[why.major])
        return local[len(lemma.steps)]

    def build(self, title: str = "", conclusion: int | None = None) -> Derivation:
        steps = list(self.steps)
        if conclusion is not None and conclusion != len(steps):
            steps.append(steps[conclusion - 1])
        return Derivation(self.system, self.context, tuple(steps), self.dia, title)


# File format.

def dumps(d: Derivation) -> str:
    lines = []
    if d.title:
        lines.append(f"# {d.title}")
    lines.append(f"system {d.system}")
    if d.dia != "primitive":
        lines.append(f"dia {d.dia}")
    for g in d.context:
        lines.append(f"hyp {render(g)}")
    for i, s in enumerate(d.steps, 1):
        lines.append(f"{i}. {render(s.formula)} ; {s.why}")
    return "\n".join(lines) + "\n"


def _parse_binding(text: str, lineno: int) -> tuple[tuple[str, Formula], ...]:
    out = []
    for part in text.split(";"):
        part = part.strip()
        if not part:
            continue
        name, eq, src = part.partition("=")
        name = name.strip()
        if not eq or not (len(name) == 1 and name.isupper()):
            raise DerivationFormatError(f"line {lineno}: bad binding {part!r}")
        out.append((name, parse(src)))
    return tuple(sorted(out))


def loads(text: str) -> Derivation:
    system = None
    dia = "primitive"
    title = ""
    context: list[Formula] = []
    steps: list[Step] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            if not title and not steps and system is None:
                title = line[1:].strip()
            continue
        head, _, rest = line.partition(" ")
        if head == "system":
            system = rest.strip()
        elif head == "dia":
            dia = rest.strip()
            if dia not in ("primitive", "abbrev"):
                raise DerivationFormatError(f"line {lineno}: dia must be primitive or abbrev")
        elif head == "hyp":
            context.append(parse(rest))
        elif head.endswith(".") and head[:-1].isdigit():
            n = int(head[:-1])
            if n != len(steps) + 1:
                raise DerivationFormatError(f"line {lineno}: expected step {len(steps) + 1}, got {n}")
            body, sep, just = rest.partition(";")
            if not sep:
                raise DerivationFormatError(f"line {lineno}: missing justification")
            steps.append(Step(parse(body), _parse_justification(just.strip(), lineno)))
        else:
            raise DerivationFormatError(f"line {lineno}: cannot read {raw!r}")
    if system is None:
        raise DerivationFormatError("missing system header")
    return Derivation(system, tuple(context), tuple(steps), dia, title)


def _parse_justification(text: str, lineno: int) -> Justification:
    parts = text.split(None, 1)
    if not parts:
        raise DerivationFormatError(f"line {lineno}: empty justification")
    kind = parts[0]
    if kind == "hyp":
        return Hyp()
    if kind == "mp":
        nums = parts[1].split() if len(parts) > 1 else []
        if len(nums) != 2 or not all(n.isdigit() for n in nums):
            raise DerivationFormatError(f"line {lineno}: mp needs two step numbers")
        return MP(int(nums[0]), int(nums[1]))
    if kind == "ax":
        rest = parts[1].strip() if len(parts) > 1 else ""
        name, _, tail = rest.partition(" ")
        tail = tail.strip()
        if not name:
            raise DerivationFormatError(f"line {lineno}: ax needs a schema name")
        if tail:
            if not (tail.startswith("[") and tail.endswith("]")):
                raise DerivationFormatError(f"line {lineno}: binding must be in brackets")
            return Ax(name, _parse_binding(tail[1:-1], lineno))
        return Ax(name)
    raise DerivationFormatError(f"line {lineno}: unknown justification {kind!r}")
