import pytest

from mnm.values import (
    ALL_VALUES, DomainKind, Mode, TruthValue as V, domain, format_mask, from_mask,
    iter_mask, mode, negate_value, to_mask, value_of,
)


def test_canonical_order_and_flags():
    assert [v.label for v in ALL_VALUES] == ["T+", "C+", "F+", "I+", "T-", "C-", "F-", "I-"]
    assert V.T_PLUS.flags == (True, True, True)
    assert V.I_PLUS.flags == (True, False, True)
    assert V.C_MINUS.flags == (False, True, False)
    assert V.F_MINUS.flags == (False, False, False)


def test_modes():
    assert mode(V.T_MINUS) is Mode.T
    assert mode(V.C_PLUS) is Mode.C
    assert mode(V.F_PLUS) is Mode.F
    assert mode(V.I_MINUS) is Mode.I
    for v in ALL_VALUES:
        assert value_of(mode(v), v.actual) is v


def test_negation_examples():
    assert negate_value(V.T_PLUS) is V.F_MINUS
    assert negate_value(V.C_PLUS) is V.C_MINUS
    assert negate_value(V.I_PLUS) is V.I_MINUS
    assert negate_value(V.F_PLUS) is V.T_MINUS


@pytest.mark.parametrize("kind", list(DomainKind))
def test_negation_laws(kind):
    dom = domain(kind)
    for v in dom:
        assert negate_value(negate_value(v)) is v
        assert negate_value(v) in dom
        assert negate_value(v).designated != v.designated


def test_domains():
    assert [v.label for v in domain("Dom4")] == ["T+", "C+", "C-", "F-"]
    assert set(domain("Dom6")) == set(ALL_VALUES) - {V.I_PLUS, V.I_MINUS}
    assert tuple(domain(DomainKind.DOM8)) == ALL_VALUES
    d4, d6, d8 = (set(domain(k)) for k in DomainKind)
    assert d4 < d6 < d8 and (len(d4), len(d6), len(d8)) == (4, 6, 8)
    assert domain("Dom4").designated == (V.T_PLUS, V.C_PLUS)


def test_parse_labels():
    assert V.parse("T−") is V.T_MINUS
    assert V.parse(" C+ ") is V.C_PLUS
    assert V.parse("F⁻") is V.F_MINUS
    with pytest.raises(ValueError):
        V.parse("X+")


def test_masks():
    m = to_mask([V.C_PLUS, V.F_MINUS])
    assert m == 0b01000010
    assert from_mask(m) == (V.C_PLUS, V.F_MINUS)
    assert list(iter_mask(m)) == [1, 6]
    assert format_mask(m) == "{C+, F-}"
