"""Truth values of the modal Nmatrices.

Each value is a triple of flags (necessary, possible, actual).  The mode
groups values by the modal flags and the sign is the actual flag.  Values
are numbered in the canonical order T+, C+, F+, I+, T-, C-, F-, I-, and
that ordinal is what the tables index by.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Iterator


class Mode(enum.Enum):
    T = "T"
    C = "C"
    F = "F"
    I = "I"


class TruthValue(enum.IntEnum):
    T_PLUS = 0
    C_PLUS = 1
    F_PLUS = 2
    I_PLUS = 3
    T_MINUS = 4
    C_MINUS = 5
    F_MINUS = 6
    I_MINUS = 7

    @property
    def necessary(self) -> bool:
        return _FLAGS[self][0]

    @property
    def possible(self) -> bool:
        return _FLAGS[self][1]

    @property
    def actual(self) -> bool:
        return _FLAGS[self][2]

    @property
    def flags(self) -> tuple[bool, bool, bool]:
        return _FLAGS[self]

    @property
    def label(self) -> str:
        return _LABELS[self]

    @property
    def designated(self) -> bool:
        return self.actual

    @classmethod
    def from_flags(cls, necessary: bool, possible: bool, actual: bool) -> TruthValue:
        return _BY_FLAGS[(bool(necessary), bool(possible), bool(actual))]

    @classmethod
    def parse(cls, text: str) -> TruthValue:
        key = text.strip().replace("−", "-").replace("⁺", "+").replace("⁻", "-")
        try:
            return _BY_LABEL[key]
        except KeyError:
            raise ValueError(f"unknown truth value {text!r}") from None

    def __str__(self) -> str:
        return self.label


_FLAGS = {
    TruthValue.T_PLUS: (True, True, True),
    TruthValue.C_PLUS: (False, True, True),
    TruthValue.F_PLUS: (False, False, True),
    TruthValue.I_PLUS: (True, False, True),
    TruthValue.T_MINUS: (True, True, False),
    TruthValue.C_MINUS: (False, True, False),
    TruthValue.F_MINUS: (False, False, False),
    TruthValue.I_MINUS: (True, False, False),
}
_BY_FLAGS = {flags: v for v, flags in _FLAGS.items()}
_LABELS = {
    TruthValue.T_PLUS: "T+",
    TruthValue.C_PLUS: "C+",
    TruthValue.F_PLUS: "F+",
    TruthValue.I_PLUS: "I+",
    TruthValue.T_MINUS: "T-",
    TruthValue.C_MINUS: "C-",
    TruthValue.F_MINUS: "F-",
    TruthValue.I_MINUS: "I-",
}
_BY_LABEL = {label: v for v, label in _LABELS.items()}

ALL_VALUES: tuple[TruthValue, ...] = tuple(TruthValue)


def mode(v: TruthValue) -> Mode:
    n, p, _ = v.flags
    if n and p:
        return Mode.T
    if p:
        return Mode.C
    if n:
        return Mode.I
    return Mode.F


def value_of(m: Mode, actual: bool) -> TruthValue:
    """The value with mode ``m`` and the given sign."""
    n = m in (Mode.T, Mode.I)
    p = m in (Mode.T, Mode.C)
    return TruthValue.from_flags(n, p, actual)


def negate_value(v: TruthValue) -> TruthValue:
    n, p, a = v.flags
    return TruthValue.from_flags(not p, not n, not a)


# Bitsets over value ordinals.  A cell of a table is one of these.

def to_mask(values: Iterable[TruthValue]) -> int:
    m = 0
    for v in values:
        m |= 1 << int(v)
    return m


def from_mask(mask: int) -> tuple[TruthValue, ...]:
    return tuple(v for v in ALL_VALUES if mask >> int(v) & 1)


def iter_mask(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def format_mask(mask: int) -> str:
    return "{" + ", ".join(v.label for v in from_mask(mask)) + "}"


class DomainKind(enum.Enum):
    DOM4 = "Dom4"
    DOM6 = "Dom6"
    DOM8 = "Dom8"


@dataclass(frozen=True)
class Domain:
    kind: DomainKind
    members: tuple[TruthValue, ...]

    @property
    def mask(self) -> int:
        return to_mask(self.members)

    @property
    def designated(self) -> tuple[TruthValue, ...]:
        return tuple(v for v in self.members if v.actual)

    @property
    def undesignated(self) -> tuple[TruthValue, ...]:
        return tuple(v for v in self.members if not v.actual)

    def __contains__(self, v: object) -> bool:
        return v in self.members

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[TruthValue]:
        return iter(self.members)


def _in_kind(kind: DomainKind, v: TruthValue) -> bool:
    n, p, a = v.flags
    if kind is DomainKind.DOM8:
        return True
    if kind is DomainKind.DOM6:
        return n <= p
    return n <= a <= p


def domain(kind: DomainKind | str) -> Domain:
    kind = DomainKind(kind) if isinstance(kind, str) else kind
    return Domain(kind, tuple(v for v in ALL_VALUES if _in_kind(kind, v)))
