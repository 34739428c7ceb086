"""Hand-built derivations shipped with the package.

Everything is schematic over the metavariables A, B, C.  Classical lemmas
come first and are spliced into the modal ones.  The duality and
implication lemmas for Km read <>A as ~[]~A (``dia abbrev``): with a
primitive diamond they are valid in the Nmatrix but not derivable, since
nothing in the Km axioms ties <> to ~[]~.

``build_corpus`` returns the derivations keyed by file stem; the files
under ``mnm/derivations`` are its saved output.
"""

from __future__ import annotations

from functools import cache
from importlib import resources
from typing import Callable

from mnm.calculus import Derivation, ProofBuilder, deduction_transform, dumps, loads
from mnm.syntax import Atom, Box, Dia, Formula, Imp, Neg, parse

A, B, C = Atom("A"), Atom("B"), Atom("C")
SYSTEM = "Km"


def _discharge(d: Derivation, *hyps: Formula) -> Derivation:
    """Discharge hypotheses, the last one first."""
    for h in reversed(hyps):
        d = deduction_transform(d.system, d, h)
    return d


@cache
def identity() -> Derivation:
    """|- A -> A"""
    b = ProofBuilder(SYSTEM)
    s1 = b.ax("A1", A=A, B=Imp(A, A))
    s2 = b.ax("A2", A=A, B=Imp(A, A), C=A)
    s3 = b.mp(s1, s2)
    s4 = b.ax("A1", A=A, B=A)
    b.mp(s4, s3)
    return b.build("identity")


@cache
def syllogism() -> Derivation:
    """A -> B, B -> C |- A -> C"""
    b = ProofBuilder(SYSTEM, [Imp(A, B), Imp(B, C), A])
    s = b.mp(b.hyp(A), b.hyp(Imp(A, B)))
    b.mp(s, b.hyp(Imp(B, C)))
    d = deduction_transform(SYSTEM, b.build(), A)
    return Derivation(SYSTEM, d.context, d.steps, title="hypothetical syllogism")


@cache
def double_negation_elim() -> Derivation:
    """|- ~~A -> A"""
    b = ProofBuilder(SYSTEM, [Neg(Neg(A))])
    h = b.hyp(Neg(Neg(A)))
    a3 = b.ax("A3", A=Neg(A), B=A)
    w = b.ax("A1", A=Neg(Neg(A)), B=Neg(A))
    s = b.mp(h, w)
    s = b.mp(s, a3)
    i = b.use(identity(), {"A": Neg(A)})
    b.mp(i, s)
    d = _discharge(b.build(), Neg(Neg(A)))
    return Derivation(SYSTEM, d.context, d.steps, title="double negation elimination")


@cache
def double_negation_intro() -> Derivation:
    """|- A -> ~~A"""
    b = ProofBuilder(SYSTEM, [A])
    a3 = b.ax("A3", A=A, B=Neg(Neg(A)))
    dne = b.use(double_negation_elim(), {"A": Neg(A)})
    s = b.mp(dne, a3)
    w = b.ax("A1", A=A, B=Neg(Neg(Neg(A))))
    t = b.mp(b.hyp(A), w)
    b.mp(t, s)
    d = _discharge(b.build(), A)
    return Derivation(SYSTEM, d.context, d.steps, title="double negation introduction")


@cache
def contraposition_back() -> Derivation:
    """|- (~B -> ~A) -> (A -> B)"""
    b = ProofBuilder(SYSTEM, [Imp(Neg(B), Neg(A)), A])
    a3 = b.ax("A3", A=A, B=B)
    s = b.mp(b.hyp(Imp(Neg(B), Neg(A))), a3)
    w = b.ax("A1", A=A, B=Neg(B))
    t = b.mp(b.hyp(A), w)
    b.mp(t, s)
    d = _discharge(b.build(), Imp(Neg(B), Neg(A)), A)
    return Derivation(SYSTEM, d.context, d.steps, title="contraposition, negated form")


@cache
def contraposition() -> Derivation:
    """|- (A -> B) -> (~B -> ~A)"""
    b = ProofBuilder(SYSTEM, [Imp(A, B)])
    h = b.hyp(Imp(A, B))
    dne = b.use(double_negation_elim(), {"A": A})
    s = b.use(syllogism(), {"A": Neg(Neg(A)), "B": A, "C": B}, [dne, h])
    dni = b.use(double_negation_intro(), {"A": B})
    t = b.use(syllogism(), {"A": Neg(Neg(A)), "B": B, "C": Neg(Neg(B))}, [s, dni])
    cp = b.use(contraposition_back(), {"A": Neg(B), "B": Neg(A)})
    b.mp(t, cp)
    d = _discharge(b.build(), Imp(A, B))
    return Derivation(SYSTEM, d.context, d.steps, title="contraposition")


@cache
def explosion() -> Derivation:
    """|- ~A -> (A -> B)"""
    b = ProofBuilder(SYSTEM, [Neg(A), A])
    w = b.ax("A1", A=Neg(A), B=Neg(B))
    s = b.mp(b.hyp(Neg(A)), w)
    cp = b.use(contraposition_back(), {"A": A, "B": B})
    t = b.mp(s, cp)
    b.mp(b.hyp(A), t)
    d = _discharge(b.build(), Neg(A), A)
    return Derivation(SYSTEM, d.context, d.steps, title="explosion")


@cache
def explosion_swapped() -> Derivation:
    """|- A -> (~A -> B)"""
    b = ProofBuilder(SYSTEM, [A, Neg(A)])
    w = b.ax("A1", A=Neg(A), B=Neg(B))
    s = b.mp(b.hyp(Neg(A)), w)
    cp = b.use(contraposition_back(), {"A": A, "B": B})
    t = b.mp(s, cp)
    b.mp(b.hyp(A), t)
    d = _discharge(b.build(), A, Neg(A))
    return Derivation(SYSTEM, d.context, d.steps, title="explosion, swapped")


# Modal lemmas.

def _implies(b: ProofBuilder, i: int, j: int, x: Formula, y: Formula, z: Formula) -> int:
    """From steps i: x -> y and j: y -> z get x -> z."""
    return b.use(syllogism(), {"A": x, "B": y, "C": z}, [i, j])


def _contra(b: ProofBuilder, i: int, x: Formula, y: Formula) -> int:
    """From step i: x -> y get ~y -> ~x."""
    cp = b.use(contraposition(), {"A": x, "B": y})
    return b.mp(i, cp)


def _abbrev(title: str, context=()) -> ProofBuilder:
    b = ProofBuilder(SYSTEM, context, dia="abbrev")
    b.title = title
    return b


def _finish(b: ProofBuilder, last: int, hyps=()) -> Derivation:
    d = b.build(b.title, conclusion=last)
    if hyps:
        d = _discharge(d, *hyps)
        d = Derivation(d.system, d.context, d.steps, d.dia, b.title)
    return d


@cache
def duality_i_forward() -> Derivation:
    """|- <>~A -> ~[]A"""
    b = _abbrev("duality (i), left to right")
    dn1 = b.ax("DN1", A=A)
    s = _contra(b, dn1, Box(A), Box(Neg(Neg(A))))
    return _finish(b, b.have(s, Imp(Dia(Neg(A)), Neg(Box(A)))))


@cache
def duality_i_back() -> Derivation:
    """|- ~[]A -> <>~A"""
    b = _abbrev("duality (i), right to left")
    dn2 = b.ax("DN2", A=A)
    s = _contra(b, dn2, Box(Neg(Neg(A))), Box(A))
    return _finish(b, b.have(s, Imp(Neg(Box(A)), Dia(Neg(A)))))


@cache
def duality_ii_forward() -> Derivation:
    """|- []A -> ~<>~A"""
    b = _abbrev("duality (ii), left to right")
    dn1 = b.ax("DN1", A=A)
    dni = b.use(double_negation_intro(), {"A": Box(Neg(Neg(A)))})
    s = _implies(b, dn1, dni, Box(A), Box(Neg(Neg(A))), Neg(Neg(Box(Neg(Neg(A))))))
    return _finish(b, b.have(s, Imp(Box(A), Neg(Dia(Neg(A))))))


@cache
def duality_ii_back() -> Derivation:
    """|- ~<>~A -> []A"""
    b = _abbrev("duality (ii), right to left")
    dne = b.use(double_negation_elim(), {"A": Box(Neg(Neg(A)))})
    dn2 = b.ax("DN2", A=A)
    s = _implies(b, dne, dn2, Neg(Neg(Box(Neg(Neg(A))))), Box(Neg(Neg(A))), Box(A))
    return _finish(b, b.have(s, Imp(Neg(Dia(Neg(A))), Box(A))))


@cache
def duality_iii_forward() -> Derivation:
    """|- []~A -> ~<>A"""
    b = _abbrev("duality (iii), left to right")
    s = b.use(double_negation_intro(), {"A": Box(Neg(A))})
    return _finish(b, b.have(s, Imp(Box(Neg(A)), Neg(Dia(A)))))


@cache
def duality_iii_back() -> Derivation:
    """|- ~<>A -> []~A"""
    b = _abbrev("duality (iii), right to left")
    s = b.use(double_negation_elim(), {"A": Box(Neg(A))})
    return _finish(b, b.have(s, Imp(Neg(Dia(A)), Box(Neg(A)))))


@cache
def duality_iv_forward() -> Derivation:
    """|- <>A -> <>~~A"""
    b = _abbrev("duality (iv), left to right")
    dn2 = b.ax("DN2", A=Neg(A))
    s = _contra(b, dn2, Box(Neg(Neg(Neg(A)))), Box(Neg(A)))
    return _finish(b, b.have(s, Imp(Dia(A), Dia(Neg(Neg(A))))))


@cache
def duality_iv_back() -> Derivation:
    """|- <>~~A -> <>A"""
    b = _abbrev("duality (iv), right to left")
    dn1 = b.ax("DN1", A=Neg(A))
    s = _contra(b, dn1, Box(Neg(A)), Box(Neg(Neg(Neg(A)))))
    return _finish(b, b.have(s, Imp(Dia(Neg(Neg(A))), Dia(A))))


@cache
def implication_i() -> Derivation:
    """[]A, <>A, <>~B |- <>~(A -> B)"""
    ab = Imp(A, B)
    b = _abbrev("implication (i)", [Box(A), Dia(A), Dia(Neg(B))])
    k = b.ax("K'", A=A, B=B)
    s = b.mp(b.hyp(Dia(A)), k)  # [](A -> B) -> ([]A -> []B)
    # swap the antecedents to reach [](A -> B) -> []B
    inner = b.use(_permute(), {"A": Box(ab), "B": Box(A), "C": Box(B)}, [s])
    t = b.mp(b.hyp(Box(A)), inner)  # [](A -> B) -> []B
    u = _contra(b, t, Box(ab), Box(B))  # ~[]B -> ~[](A -> B)
    d1 = b.use(duality_i_forward(), {"A": B})  # <>~B -> ~[]B
    v = b.mp(b.hyp(Dia(Neg(B))), d1)
    w = b.mp(v, u)  # ~[](A -> B)
    d2 = b.use(duality_i_back(), {"A": ab})
    last = b.mp(w, d2)
    return _finish(b, b.have(last, Dia(Neg(ab))))


@cache
def implication_ii() -> Derivation:
    """<>A, []~B, <>~B |- <>~(A -> B)"""
    ab = Imp(A, B)
    b = _abbrev("implication (ii)", [Dia(A), Box(Neg(B)), Dia(Neg(B))])
    k = b.ax("K1'", A=A, B=B)
    s = b.mp(b.hyp(Dia(Neg(B))), k)  # [](A -> B) -> (<>A -> <>B)
    inner = b.use(_permute(), {"A": Box(ab), "B": Dia(A), "C": Dia(B)}, [s])
    t = b.mp(b.hyp(Dia(A)), inner)  # [](A -> B) -> <>B
    u = _contra(b, t, Box(ab), Dia(B))  # ~<>B -> ~[](A -> B)
    d1 = b.use(duality_iii_forward(), {"A": B})  # []~B -> ~<>B
    v = b.mp(b.hyp(Box(Neg(B))), d1)
    w = b.mp(v, u)
    d2 = b.use(duality_i_back(), {"A": ab})
    last = b.mp(w, d2)
    return _finish(b, b.have(last, Dia(Neg(ab))))


@cache
def implication_iii() -> Derivation:
    """[]A, <>A, []~B |- []~(A -> B)"""
    ab = Imp(A, B)
    b = _abbrev("implication (iii)", [Box(A), Dia(A), Box(Neg(B))])
    k = b.ax("K2'", A=A, B=B)
    s = b.mp(b.hyp(Dia(A)), k)  # <>(A -> B) -> ([]A -> <>B)
    inner = b.use(_permute(), {"A": Dia(ab), "B": Box(A), "C": Dia(B)}, [s])
    t = b.mp(b.hyp(Box(A)), inner)  # <>(A -> B) -> <>B
    u = _contra(b, t, Dia(ab), Dia(B))  # ~<>B -> ~<>(A -> B)
    d1 = b.use(duality_iii_forward(), {"A": B})
    v = b.mp(b.hyp(Box(Neg(B))), d1)
    w = b.mp(v, u)  # ~<>(A -> B)
    d2 = b.use(duality_iii_back(), {"A": ab})
    last = b.mp(w, d2)
    return _finish(b, b.have(last, Box(Neg(ab))))


@cache
def implication_iv() -> Derivation:
    """<>A, <>B |- <>(A -> B)"""
    b = ProofBuilder(SYSTEM, [Dia(A), Dia(B)])
    m3 = b.ax("M3'", A=A, B=B)
    efq = b.use(explosion_swapped(), {"A": Dia(A), "B": Dia(Neg(A))})
    s = b.mp(b.hyp(Dia(A)), efq)  # <>A | <>~A
    t = b.mp(s, m3)
    b.mp(b.hyp(Dia(B)), t)
    return b.build("implication (iv)")


@cache
def implication_v() -> Derivation:
    """<>~A, <>B |- <>(A -> B)"""
    b = ProofBuilder(SYSTEM, [Dia(Neg(A)), Dia(B)])
    m3 = b.ax("M3'", A=A, B=B)
    w = b.ax("A1", A=Dia(Neg(A)), B=Neg(Dia(A)))
    s = b.mp(b.hyp(Dia(Neg(A))), w)  # <>A | <>~A
    t = b.mp(s, m3)
    b.mp(b.hyp(Dia(B)), t)
    return b.build("implication (v)")


@cache
def implication_vi() -> Derivation:
    """<>~A, <>~B |- <>(A -> B)"""
    b = ProofBuilder(SYSTEM, [Dia(Neg(A)), Dia(Neg(B))])
    m4 = b.ax("M4'", A=A, B=B)
    s = b.mp(b.hyp(Dia(Neg(B))), m4)
    b.mp(b.hyp(Dia(Neg(A))), s)
    return b.build("implication (vi)")


@cache
def _permute() -> Derivation:
    """A -> (B -> C) |- B -> (A -> C)"""
    b = ProofBuilder(SYSTEM, [Imp(A, Imp(B, C)), B, A])
    s = b.mp(b.hyp(A), b.hyp(Imp(A, Imp(B, C))))
    b.mp(b.hyp(B), s)
    d = _discharge(b.build(), B, A)
    return Derivation(SYSTEM, d.context, d.steps, title="permuting antecedents")


# Short derivations for other systems.

@cache
def recovery_pattern() -> Derivation:
    """circ A, []A |- <>A in Km"""
    b = ProofBuilder("Km", [parse("circ A"), Box(A)])
    b.mp(b.hyp(Box(A)), b.hyp(parse("circ A")))
    return b.build("marked modus ponens")


@cache
def t_reflexive() -> Derivation:
    """[]A |- A in Tm"""
    b = ProofBuilder("Tm", [Box(A)])
    b.mp(b.hyp(Box(A)), b.ax("T", A=A))
    return b.build("reflexivity")


@cache
def d_serial() -> Derivation:
    """[]A |- <>A in Dm"""
    b = ProofBuilder("Dm", [Box(A)])
    b.mp(b.hyp(Box(A)), b.ax("D", A=A))
    return b.build("seriality")


@cache
def kdet_instance() -> Derivation:
    """[](A -> B), <>A |- []B in Tmd"""
    b = ProofBuilder("Tmd", [Box(Imp(A, B)), Dia(A)])
    s = b.mp(b.hyp(Box(Imp(A, B))), b.ax("Kdet", A=A, B=B))
    b.mp(b.hyp(Dia(A)), s)
    return b.build("deterministic K")


@cache
def four_chain() -> Derivation:
    """[]A |- [][][]A in T4m"""
    b = ProofBuilder("T4m", [Box(A)])
    s = b.mp(b.hyp(Box(A)), b.ax("4", A=A))
    b.mp(s, b.ax("4", A=Box(A)))
    return b.build("iterated (4)")


BUILDERS: dict[str, Callable[[], Derivation]] = {
    "pc_identity": identity,
    "pc_syllogism": syllogism,
    "pc_permute": _permute,
    "pc_dne": double_negation_elim,
    "pc_dni": double_negation_intro,
    "pc_contraposition_back": contraposition_back,
    "pc_contraposition": contraposition,
    "pc_explosion": explosion,
    "pc_explosion_swapped": explosion_swapped,
    "km_duality_i_fwd": duality_i_forward,
    "km_duality_i_back": duality_i_back,
    "km_duality_ii_fwd": duality_ii_forward,
    "km_duality_ii_back": duality_ii_back,
    "km_duality_iii_fwd": duality_iii_forward,
    "km_duality_iii_back": duality_iii_back,
    "km_duality_iv_fwd": duality_iv_forward,
    "km_duality_iv_back": duality_iv_back,
    "km_implication_i": implication_i,
    "km_implication_ii": implication_ii,
    "km_implication_iii": implication_iii,
    "km_implication_iv": implication_iv,
    "km_implication_v": implication_v,
    "km_implication_vi": implication_vi,
    "km_marked_mp": recovery_pattern,
    "tm_reflexive": t_reflexive,
    "dm_serial": d_serial,
    "tmd_kdet": kdet_instance,
    "t4m_four_chain": four_chain,
}


def build_corpus() -> dict[str, Derivation]:
    return {name: fn() for name, fn in BUILDERS.items()}


def shipped() -> dict[str, Derivation]:
    """The derivation files installed with the package."""
    root = resources.files("mnm") / "derivations"
    out = {}
    for entry in sorted(root.iterdir(), key=lambda e: e.name):
        if entry.name.endswith(".drv"):
            out[entry.name[:-4]] = loads(entry.read_text(encoding="utf-8"))
    return out


def write_corpus(directory) -> list[str]:
    from pathlib import Path

    path = Path(directory)
    path.mkdir(parents=True, exist_ok=True)
    names = []
    for name, d in build_corpus().items():
        (path / f"{name}.drv").write_text(dumps(d), encoding="utf-8")
        names.append(name)
    return names
