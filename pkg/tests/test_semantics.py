import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from mnm.calculus import CATALOGUE, axioms_of
from mnm.errors import TooLarge
from mnm.generators import random_query
from mnm.nmatrix import SYSTEM_IDS, builtin
from mnm.semantics import (
    audit, audit_system, brute_force_consequence, check_legal, decide_consequence, decide_valid,
    find_valuation, is_countermodel, verify_lemma_suite,
)
from mnm.syntax import Atom, parse, skeleton, subformulas
from mnm.values import TruthValue as V

from strategies import classical, formulas

P = parse
systems = st.sampled_from(SYSTEM_IDS)


def test_examples():
    assert decide_valid("Tm", P("[]p -> p")).holds
    k = decide_consequence("Km", [P("[](p -> q)"), P("[]p")], P("[]q"))
    assert k.fails
    assert k.witness.atoms() == {"p": V.I_PLUS, "q": V.C_PLUS}
    assert decide_consequence("Km", [P("<>p"), P("[]p"), P("[](p -> q)")], P("[]q")).holds
    t = decide_valid("Km", P("[]p -> p"))
    assert t.fails
    assert not t.witness[Atom("p")].actual and t.witness[P("[]p")].actual


def test_more_examples():
    assert decide_valid("Km", P("p -> q -> p")).holds
    assert decide_valid("Km", P("circ p | bullet p")).holds
    assert brute_force_consequence("Km", [], P("p -> p")).holds
    assert brute_force_consequence("Km", [P("p")], P("[]p")).fails


def test_brute_force_guard():
    big = P("[]<>[]<>[]<>[]<>[]<>[]<>p")
    with pytest.raises(TooLarge):
        brute_force_consequence("Km", [], big)
    assert brute_force_consequence("Km", [], big, limit=20).holds == decide_valid("Km", big).holds


def _oracle(nm, premises, conclusion):
    """Pure-Python product enumeration over the subformula list."""
    nodes = subformulas(*premises, conclusion)
    values = {}

    def rec(i):
        if i == len(nodes):
            return all(values[p].actual for p in premises) and not values[conclusion].actual
        f = nodes[i]
        if isinstance(f, Atom):
            choices = nm.values
        else:
            kids = [f.left, f.right] if hasattr(f, "left") else [f.child]
            conn = type(f).__name__.lower()
            mask = nm.algebra.cell(conn, [values[c] for c in kids])
            choices = [v for v in nm.values if mask >> v & 1]
        for v in choices:
            values[f] = v
            if rec(i + 1):
                return True
        return False

    return not rec(0)


@settings(max_examples=400, deadline=None)
@given(systems, st.lists(formulas(max_leaves=4), max_size=2), formulas(max_leaves=5))
def test_engine_agrees_with_oracles(sid, premises, conclusion):
    nm = builtin(sid)
    verdict = decide_consequence(nm, premises, conclusion)
    assert verdict.holds == _oracle(nm, premises, conclusion)
    if len(subformulas(*premises, conclusion)) <= 12:
        assert verdict.holds == brute_force_consequence(nm, premises, conclusion).holds
    if verdict.fails:
        assert check_legal(nm, verdict.witness) == []
        assert is_countermodel(nm, verdict.witness, premises, conclusion)


def test_engine_agrees_with_brute_force_on_seeded_queries():
    rng = random.Random(7)
    for sid in SYSTEM_IDS:
        for _ in range(40):
            prem, concl = random_query(rng, max_depth=4, max_nodes=12)
            assert decide_consequence(sid, prem, concl).holds == brute_force_consequence(sid, prem, concl).holds


@settings(max_examples=150, deadline=None)
@given(systems, st.lists(formulas(max_leaves=4), max_size=2), formulas(max_leaves=4), formulas(max_leaves=3))
def test_monotonicity(sid, premises, conclusion, extra):
    if decide_consequence(sid, premises, conclusion).holds:
        assert decide_consequence(sid, premises + [extra], conclusion).holds


@settings(max_examples=200, deadline=None)
@given(st.lists(formulas(max_leaves=4), max_size=2), formulas(max_leaves=5))
def test_witnesses_transfer_upwards(premises, conclusion):
    v = decide_consequence("Tm", premises, conclusion)
    if v.fails:
        for sid in ("Dm", "Km"):
            assert is_countermodel(sid, v.witness, premises, conclusion)
    v = decide_consequence("Dm", premises, conclusion)
    if v.fails:
        assert is_countermodel("Km", v.witness, premises, conclusion)


def _classically_valid(f):
    names = sorted({a.name for a in subformulas(f) if isinstance(a, Atom)})
    for bits in itertools.product([False, True], repeat=len(names)):
        env = dict(zip(names, bits))

        def ev(g):
            if isinstance(g, Atom):
                return env[g.name]
            if hasattr(g, "left"):
                return (not ev(g.left)) or ev(g.right)
            return not ev(g.child)

        if not ev(f):
            return False
    return True


@settings(max_examples=200, deadline=None)
@given(systems, classical())
def test_classical_collapse(sid, f):
    assert decide_valid(sid, f).holds == _classically_valid(f)


def test_determinism_of_witnesses():
    q = ([P("[](p -> q)")], P("<>q -> []p"))
    a = decide_consequence("Km", *q).witness
    b = decide_consequence("Km", *q).witness
    assert list(a.items()) == list(b.items())


@pytest.mark.parametrize("sid", SYSTEM_IDS)
def test_audits_pass(sid):
    report = audit_system(sid)
    assert report.ok, [e.name for e in report.failures()]


def test_km_circ_axioms_sound_and_k_fails():
    from mnm.calculus import _KM_CIRC, _KM_CIRC_BACK

    for names in (_KM_CIRC, _KM_CIRC_BACK):
        assert audit("Km", [CATALOGUE[n] for n in names]).ok
    k = audit("Km", [CATALOGUE["K"]])
    assert not k.ok
    assert k.entries[0].verdict.witness.atoms() == {"a": V.I_PLUS, "b": V.C_PLUS}


def test_strict_d45m_breaks_m1():
    report = audit_system("D45m", strict_paper=True)
    # the printed cell breaks M1; the printed Dm negation slips break the rest
    assert [e.name for e in report.failures()] == ["M1", "M4", "DN1", "DN2"]


def test_recovery_facts_hold_in_km():
    for text in ("<>p -> circ p", "<>~p -> circ p", "(<>p | <>~p) -> circ p", "circ p -> (<>p | <>~p)",
                 "bullet p -> ([]p & []~p)"):
        assert decide_valid("Km", P(text)).holds, text


def test_lemma_suite():
    checks = verify_lemma_suite("Km")
    assert len(checks) == 10
    assert all(c.holds for c in checks)


def test_find_valuation_constraints():
    f = P("[]p -> p")
    v = find_valuation("Km", (), {Atom("p"): 1 << V.T_MINUS}, conclusion=f)
    assert v[Atom("p")] is V.T_MINUS
    assert find_valuation("Tm", (), {}, conclusion=f) is None
    assert find_valuation("Km", (f,), {Atom("p"): 1 << V.I_PLUS}) is not None


def test_axioms_fail_where_they_should():
    assert decide_valid("Km", skeleton(CATALOGUE["D"].schema)).fails
    assert decide_valid("Dm", skeleton(CATALOGUE["T"].schema)).fails
    assert decide_valid("Tm", skeleton(CATALOGUE["4"].schema)).fails
    assert decide_valid("T4m", skeleton(CATALOGUE["5"].schema)).fails
    assert {a.name for a in axioms_of("T45m")} >= {"4", "5", "T"}
