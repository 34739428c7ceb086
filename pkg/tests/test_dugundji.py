import itertools

import pytest
from hypothesis import given, settings, strategies as st

from mnm.calculus import axioms_of
from mnm.dugundji import (
    DetMatrix, SAMPLE_CAP, alpha, beta, build_delta, build_gamma, classical_valid, conservativity_check,
    count_candidates, falsify, from_nmatrix, is_model, l4_matrix, scan_matrices, substitution_failures,
    t45md_agreement, validate_det, validate_det_direct,
)
from mnm.errors import BadN, BudgetExceeded
from mnm.nmatrix import SYSTEM_IDS
from mnm.semantics import check_legal, decide_valid
from mnm.syntax import Atom, Box, Imp, Neg, atoms, depth, parse, render, skeleton
from mnm.values import TruthValue as V

from strategies import formulas

P = parse

DELTA3 = ("((□((p1 ∨ p2) ∨ p3) → □(p2 ∨ p3)) ∨ (□((p1 ∨ p2) ∨ p3) → □(p1 ∨ p3))) ∨ "
          "(□((p1 ∨ p2) ∨ p3) → □(p1 ∨ p2))")


def boolean(box=(0, 1), dia=(0, 1)):
    return DetMatrix(2, frozenset({1}), (1, 0), ((1, 1), (0, 1)), box, dia)


def test_delta3_renders_as_displayed():
    assert build_delta(3).render(unicode=True) == DELTA3
    assert parse(DELTA3) == build_delta(3).formula


@pytest.mark.parametrize("n", range(3, 8))
def test_shapes(n):
    d, g = build_delta(n), build_gamma(n)
    assert [a.name for a in atoms(d.formula)] == [f"p{j}" for j in range(1, n + 1)]
    assert len(d.betas) == n == len(g.betas)
    assert d.alpha == alpha(n) and d.betas[0] == beta(n, 1)
    assert d.formula == parse(" | ".join(f"([]({render(alpha(n))}) -> []({render(beta(n, i))}))"
                                         for i in range(1, n + 1)))
    ante = Box(Neg(Box(alpha(n))))
    assert g.formula == parse(" | ".join(f"({render(ante)} -> []~[]({render(beta(n, i))}))"
                                         for i in range(1, n + 1)))
    assert depth(ante) - depth(alpha(n)) == 3


def test_bad_n():
    for n in (0, 1, 2):
        with pytest.raises(BadN):
            build_delta(n)
        with pytest.raises(BadN):
            build_gamma(n)


@pytest.mark.parametrize("n", range(3, 7))
def test_falsify_delta_in_t45m(n):
    v = falsify("T45m", build_delta(n))
    assert v is not None
    assert check_legal("T45m", v) == []
    assert not v[build_delta(n).formula].actual
    assert set(v.atoms().values()) == {V.C_PLUS}


@pytest.mark.parametrize("sid", ["Tmd", "T4md"])
@pytest.mark.parametrize("n", range(3, 7))
def test_falsify_gamma(sid, n):
    g = build_gamma(n)
    v = falsify(sid, g)
    assert v is not None and check_legal(sid, v) == []
    assert not v[g.formula].actual
    assert v[Box(g.alpha)] is V.F_MINUS
    assert all(v[Box(b)] is V.C_MINUS for b in g.betas)
    assert set(v.atoms().values()) == {V.C_PLUS}


def test_falsify_valid_formula():
    assert falsify("Km", P("p -> p")) is None
    assert falsify("Tm", P("[]p -> p")) is None
    assert falsify("Km", P("[]p -> p")) is not None


def test_is_model_examples():
    assert is_model(boolean(), "Km")
    assert is_model(boolean(), "T45m")
    assert not is_model(boolean(box=(0, 0)), "Tm")
    assert validate_det(boolean(), build_delta(3))
    assert not validate_det(boolean(), P("p -> q"))


def test_constant_false_box():
    m = boolean(box=(0, 0), dia=(0, 0))
    assert validate_det(m, P("[]p -> p"))
    assert not is_model(m, "Tm")  # M1: ~<>A -> [](A -> B) fails at <>A = 0


def test_detmatrix_validation():
    with pytest.raises(ValueError):
        DetMatrix(2, frozenset(), (1, 0), ((1, 1), (0, 1)), (0, 1), (0, 1))
    with pytest.raises(ValueError):
        DetMatrix(2, frozenset({0, 1}), (1, 0), ((1, 1), (0, 1)), (0, 1), (0, 1))
    with pytest.raises(ValueError):
        DetMatrix(2, frozenset({1}), (1, 2), ((1, 1), (0, 1)), (0, 1), (0, 1))


def _all_two_valued():
    for des in ({0}, {1}):
        for neg in itertools.product(range(2), repeat=2):
            for imp in itertools.product(range(2), repeat=4):
                for box in itertools.product(range(2), repeat=2):
                    for dia in itertools.product(range(2), repeat=2):
                        yield DetMatrix(2, frozenset(des), neg, (imp[:2], imp[2:]), box, dia)


def _swap(m):
    s = (1, 0)
    return DetMatrix(2, frozenset(s[x] for x in m.designated), tuple(s[m.neg[s[x]]] for x in range(2)),
                     tuple(tuple(s[m.imp[s[x]][s[y]]] for y in range(2)) for x in range(2)),
                     tuple(s[m.box[s[x]]] for x in range(2)), tuple(s[m.dia[s[x]]] for x in range(2)))


def _direct_model(m, sid):
    for x in m.designated:
        for y in set(range(2)) - m.designated:
            if m.imp[x][y] in m.designated:
                return False
    return all(validate_det_direct(m, skeleton(a.schema)) for a in axioms_of(sid))


@pytest.mark.parametrize("sid, expected", [("Km", 5), ("Tmd", 2)])
def test_size2_model_count_against_direct_oracle(sid, expected):
    cands = list(_all_two_valued())
    assert len(cands) == count_candidates(2) == 2048
    models = [m for m in cands if _direct_model(m, sid)]
    classes = {min(_key(m), _key(_swap(m))) for m in models}
    assert len(classes) == expected
    report = scan_matrices(2, sid, build_delta(3) if sid == "Km" else build_gamma(3))
    assert (report.candidates, report.classes, report.models) == (2048, 1024, expected)
    assert report.violations == [] and report.substitution_failures == 0


def _key(m):
    return (tuple(sorted(m.designated)), m.neg, m.imp, m.box, m.dia)


@pytest.mark.parametrize("sid", ["Km", "K4m", "K45m", "Dm", "D4m", "D45m", "Tm", "T4m", "T45m"])
def test_size2_scan_no_violations(sid):
    report = scan_matrices(2, sid, build_delta(3))
    assert report.models > 0 and report.ok and report.substitution_failures == 0


def test_substitution_lemma_on_boolean_matrix():
    assert substitution_failures(boolean(), 3) == []
    assert substitution_failures(boolean(box=(1, 1), dia=(0, 0)), 4) == []


@settings(max_examples=200, deadline=None)
@given(
    st.tuples(st.integers(0, 2), st.integers(0, 2), st.integers(0, 2)),
    st.lists(st.integers(0, 2), min_size=9, max_size=9),
    st.tuples(st.integers(0, 2), st.integers(0, 2), st.integers(0, 2)),
    st.tuples(st.integers(0, 2), st.integers(0, 2), st.integers(0, 2)),
    st.sampled_from([{0}, {1}, {2}, {0, 1}, {0, 2}, {1, 2}]),
    formulas(max_leaves=6),
)
def test_batched_evaluator_matches_direct(neg, imp, box, dia, des, f):
    m = DetMatrix(3, frozenset(des), neg, (tuple(imp[:3]), tuple(imp[3:6]), tuple(imp[6:])), box, dia)
    assert validate_det(m, f) == validate_det_direct(m, f)


def test_sampled_size3_scan():
    r = scan_matrices(3, "Km", build_delta(4), samples=20_000, seed=1)
    assert r.mode == "sampled" and r.candidates == 20_000 and r.ok
    again = scan_matrices(3, "Km", build_delta(4), samples=20_000, seed=1)
    assert again.as_json() == r.as_json()
    with pytest.raises(BudgetExceeded):
        scan_matrices(3, "Km", build_delta(4), samples=SAMPLE_CAP + 1)
    with pytest.raises(BadN):
        scan_matrices(4, "Km", build_delta(3))


@pytest.mark.slow
def test_exhaustive_size3_scan():
    r = scan_matrices(3, "Km", build_delta(4), exhaustive=True)
    assert r.candidates == count_candidates(3) == 2_324_522_934
    assert r.models == 102_264 and r.ok
    g = scan_matrices(3, "Tmd", build_gamma(4), exhaustive=True, check_substitution=False)
    assert g.models == 19_008 and g.ok


def test_conservativity():
    assert classical_valid(P("p -> q -> p")) and not classical_valid(P("~p"))
    for sid in SYSTEM_IDS:
        r = conservativity_check(sid, sample_count=150, seed=5)
        assert r.ok and 0 < r.valid < 150


def test_l4_matrix_values():
    m = l4_matrix()
    assert m.labels == ("T+", "C+", "C-", "F-")
    assert m.designated == frozenset({0, 1})
    assert m.neg == (3, 2, 1, 0)
    assert m.imp[1][2] == 2 and m.imp[2][2] == 1 and m.imp[0][3] == 3
    assert validate_det(m, P("[]p -> [][]p"))


def test_l4_matches_t45md_tables():
    assert from_nmatrix("T45md") == l4_matrix()
    assert from_nmatrix("Km") is None


def test_t45md_agreement():
    r = t45md_agreement(200, seed=2)
    assert r.ok and 0 < r.valid < 200
    assert validate_det(l4_matrix(), build_delta(3).formula) == decide_valid("T45md", build_delta(3).formula).holds
