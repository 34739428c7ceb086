"""The published tables, transcribed cell by cell.

Each grid is kept exactly as typeset, including its slips: a row label
repeated where another was meant, an unclosed brace, a missing comma.  A
cell is either a braced value set, ``+`` (the designated part of the
domain) or ``-`` (the undesignated part).  Rows and columns are read by
position against the canonical value order of the domain; the printed
labels are kept only so that labelling slips can be reported.

``compare_with_print`` checks the rule-generated built-in tables against
these grids and lists every cell where they differ.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from mnm.values import DomainKind, TruthValue, domain, format_mask, to_mask

# The first, rough constraints on the four-valued connectives.
TM_ROUGH_NEG = """
   | neg
T+ | -
C+ | -
C- | +
C- | +
"""

TM_ROUGH_IMP = """
imp | T+ | C+ | C- | F-
T+  | +  | +  | -  | -
C+  | +  | +  | -  | -
C-  | +  | +  | +  | +
C-  | +  | +  | +  | +
"""

TM_NEG = """
   | neg
T+ | {F-}
C+ | {C-}
C- | {C+}
F- | {T+}
"""

TM_IMP = """
imp | T+   | C+   | C-   | F-
T+  | {T+} | {C+} | {C-} | {F-}
C+  | {T+} | +    | {C-} | {C-}
C-  | {T+} | +    | +    | {C-}
F-  | {T+} | {T+} | {T+  | {T+}
"""

TM_MODAL = """
   | box | dia
T+ | +   | +
C+ | -   | +
C- | -   | +
F- | -   | -
"""

T4M_MODAL = """
   | box  | dia
T+ | {T+} | +
C+ | -    | +
C- | -    | +
F- | -    | {F-}
"""

T45M_MODAL = """
   | box  | dia
T+ | {T+} | {T+}
C+ | {F-} | {T+}
C- | {F-} | {T+}
F- | {F-} | {F-}
"""

DM_NEG = """
   | neg
T+ | {T-}
C+ | {C-}
F+ | {F-}
T- | {F+}
C- | {C+}
F- | {T+}
"""

DM_IMP = """
imp | T+   | C+      | F+   | T-   | C-      | F-
T+  | {T+} | {C+}    | {F+} | {T-} | {C-}    | {F-}
C+  | {T+} | {T+,C+} | {C+} | {T-} | {T-,C-} | {C-}
F+  | {T+} | {T+}    | {T+} | {T-} | {T-}    | {T-}
T-  | {T+} | {C+}    | {F+} | {T+} | {C+}    | {F+}
C-  | {T+} | {T+,C+} | {C+} | {T+} | {T+,C+} | {C+}
F-  | {T+} | {T+}    | {T+} | {T+} | {T+}    | {T+}
"""

# Dm, D4m and D45m side by side, box then dia for each
DM_FAMILY_MODAL = """
   | box | dia | box  | dia  | box  | dia
T+ | +   | +   | {T+} | +    | {T+} | {T+}
C+ | -   | +   | -    | +    | {F-} | {T+}
F+ | -   | -   | -    | {F-} | {F-} | {F-}
T- | +   | +   | {T+} | +    | {F-} | {T+}
C- | -   | +   | -    | +    | {F-} | {T+}
F- | -   | -   | -    | {F-} | {F-} | {F-}
"""

# neg, then box and dia for Km, K4m and K45m
KM_FAMILY_MODAL = """
   | neg  | box | dia | box      | dia      | box      | dia
T+ | {F-} | +   | +   | {T+, I+} | +        | {T+, I+} | {T+, I+}
C+ | {C-} | -   | +   | -        | +        | {F-, I-} | {T+, I+}
F+ | {T-} | -   | -   | -        | {F-, I-} | {F-, I-} | {F-, I-}
I+ | {I-} | +   | -   | {T+, I+} | {F-, I-} | {T+ I+}  | {F-, I-}
T- | {F+} | +   | +   | {T+, I+} | +        | {T+, I+} | {T+, I+}
C- | {C+} | -   | +   | -        | +        | {F-, I-} | {T+, I+}
F- | {T+} | -   | -   | -        | {F-, I-} | {F-, I-} | {F-, I-}
I- | {I+} | +   | -   | {T+, I+} | {F-, I-} | {T+, I+} | {F-, I-}
"""

KM_IMP = """
imp | T+   | C+      | F+   | I+   | T-   | C-      | F-   | I-
T+  | {T+} | {C+}    | {F+} | {I+} | {T-} | {C-}    | {F-} | {I-}
C+  | {T+} | {T+,C+} | {C+} | {I+} | {T-} | {T-,C-} | {C-} | {I-}
F+  | {T+} | {T+}    | {T+} | {I+} | {T-} | {T-}    | {T-} | {I-}
I+  | {I+} | {I+}    | {I+} | {I+} | {I-} | {I-}    | {I-} | {I-}
T-  | {T+} | {C+}    | {F+} | {I+} | {T+} | {C+}    | {F+} | {I+}
C-  | {T+} | {T+,C+} | {C+} | {I+} | {T+} | {T+,C+} | {C+} | {I+}
F-  | {T+} | {T+}    | {T+} | {I+} | {T+} | {T+}    | {T+} | {I+}
I-  | {I+} | {I+}    | {I+} | {I+} | {I+} | {I+}    | {I+} | {I+}
"""

KM_OR = """
or | T+   | C+      | F+   | I+   | T-   | C-      | F-   | I-
T+ | {T+} | {T+}    | {T+} | {I+} | {T+} | {T+}    | {T+} | {I+}
C+ | {T+} | {T+,C+} | {C+} | {I+} | {T+} | {T+,C+} | {C+} | {I+}
F+ | {T+} | {C+}    | {F+} | {I+} | {T+} | {C+}    | {F+} | {I+}
I+ | {I+} | {I+}    | {I+} | {I+} | {I+} | {I+}    | {I+} | {I+}
T- | {T+} | {T+}    | {T+} | {I+} | {T-} | {T-}    | {T-} | {I-}
C- | {T+} | {T+,C+} | {C+} | {I+} | {T-} | {T-,C-} | {C-} | {I-}
F- | {T+} | {C+}    | {F+} | {I+} | {T-} | {C-}    | {F-} | {I-}
I- | {I+} | {I+}    | {I+} | {I+} | {I-} | {I-}    | {I-} | {I-}
"""

KM_AND = """
and | T+   | C+      | F+   | I+   | T-   | C-      | F-   | I-
T+  | {T+} | {C+}    | {F+} | {I+} | {T-} | {C-}    | {F-} | {I-}
C+  | {C+} | {F+,C+} | {F+} | {I+} | {C-} | {F-,C-} | {F-} | {I-}
F+  | {F+} | {F+}    | {F+} | {I+} | {F-} | {F-}    | {F-} | {I-}
I+  | {I+} | {I+}    | {I+} | {I+} | {I-} | {I-}    | {I-} | {I-}
T-  | {T-} | {C-}    | {F-} | {I-} | {T-} | {C-}    | {F-} | {I-}
C-  | {C-} | {F-,C-} | {F-} | {I-} | {C-} | {F-,C-} | {C-} | {I-}
F-  | {F-} | {F-}    | {F-} | {I-} | {F-} | {F-}    | {F-} | {I-}
I-  | {I-} | {I-}    | {I-} | {I-} | {I-} | {I-}    | {I-} | {I-}
"""

KM_CIRC = """
   | circ
T+ | +
C+ | +
F+ | +
I+ | -
T- | +
C- | +
F- | +
I- | -
"""

# the deterministic implication and the disjunction it induces
TMD_IMP = """
imp | T+ | C+ | C- | F-
T+  | T+ | C+ | C- | F-
C+  | T+ | C+ | C- | C-
C-  | T+ | C+ | C+ | C+
C-  | T+ | T+ | T+ | T+
"""

TMD_OR = """
or | T+ | C+ | C- | F-
T+ | T+ | T+ | T+ | T+
C+ | T+ | C+ | C+ | C+
C- | T+ | C+ | C- | C-
C- | T+ | C+ | C- | F-
"""


@dataclass(frozen=True)
class Grid:
    """A printed grid: header labels, row labels and raw cell strings."""

    header: tuple[str, ...]
    rows: tuple[str, ...]
    cells: tuple[tuple[str, ...], ...]

    def column(self, j: int) -> tuple[str, ...]:
        return tuple(r[j] for r in self.cells)


def read_grid(text: str) -> Grid:
    lines = [ln for ln in text.strip("\n").splitlines() if ln.strip()]
    header = tuple(c.strip() for c in lines[0].split("|"))
    rows, cells = [], []
    for ln in lines[1:]:
        parts = [c.strip() for c in ln.split("|")]
        rows.append(parts[0])
        cells.append(tuple(parts[1:]))
    return Grid(header[1:], tuple(rows), tuple(cells))


_SET_RE = re.compile(r"^\{?([^{}]*)\}?$")


@dataclass(frozen=True)
class Cell:
    mask: int
    raw: str
    well_formed: bool


def read_cell(raw: str, kind: DomainKind) -> Cell:
    """Decode one printed cell relative to a domain."""
    dom = domain(kind)
    text = raw.strip()
    if text == "+":
        return Cell(to_mask(dom.designated), raw, True)
    if text == "-":
        return Cell(to_mask(dom.undesignated), raw, True)
    m = _SET_RE.match(text)
    if m is None:
        raise ValueError(f"unreadable cell {raw!r}")
    names = [t for t in re.split(r"[,\s]+", m.group(1)) if t]
    values = [TruthValue.parse(t) for t in names]
    braced = text.startswith("{") and text.endswith("}")
    bare = not text.startswith("{") and not text.endswith("}") and len(values) == 1
    separated = len(values) < 2 or text.count(",") == len(values) - 1
    return Cell(to_mask(values), raw, (braced or bare) and separated)


# Where each built-in system's tables were printed: (grid, column index).

_SOURCES = {
    "Tm": ("Dom4", TM_NEG, TM_IMP, (TM_MODAL, 0), (TM_MODAL, 1)),
    "T4m": ("Dom4", TM_NEG, TM_IMP, (T4M_MODAL, 0), (T4M_MODAL, 1)),
    "T45m": ("Dom4", TM_NEG, TM_IMP, (T45M_MODAL, 0), (T45M_MODAL, 1)),
    "Dm": ("Dom6", DM_NEG, DM_IMP, (DM_FAMILY_MODAL, 0), (DM_FAMILY_MODAL, 1)),
    "D4m": ("Dom6", DM_NEG, DM_IMP, (DM_FAMILY_MODAL, 2), (DM_FAMILY_MODAL, 3)),
    "D45m": ("Dom6", DM_NEG, DM_IMP, (DM_FAMILY_MODAL, 4), (DM_FAMILY_MODAL, 5)),
    "Km": ("Dom8", KM_FAMILY_MODAL, KM_IMP, (KM_FAMILY_MODAL, 1), (KM_FAMILY_MODAL, 2)),
    "K4m": ("Dom8", KM_FAMILY_MODAL, KM_IMP, (KM_FAMILY_MODAL, 3), (KM_FAMILY_MODAL, 4)),
    "K45m": ("Dom8", KM_FAMILY_MODAL, KM_IMP, (KM_FAMILY_MODAL, 5), (KM_FAMILY_MODAL, 6)),
    "Tmd": ("Dom4", TM_NEG, TMD_IMP, (TM_MODAL, 0), (TM_MODAL, 1)),
    "T4md": ("Dom4", TM_NEG, TMD_IMP, (T4M_MODAL, 0), (T4M_MODAL, 1)),
    "T45md": ("Dom4", TM_NEG, TMD_IMP, (T45M_MODAL, 0), (T45M_MODAL, 1)),
}

GRIDS = {
    TM_ROUGH_NEG: ("rough four-valued negation", DomainKind.DOM4),
    TM_ROUGH_IMP: ("rough four-valued implication", DomainKind.DOM4),
    TM_NEG: ("four-valued negation", DomainKind.DOM4),
    TM_IMP: ("four-valued implication", DomainKind.DOM4),
    TM_MODAL: ("Tm modalities", DomainKind.DOM4),
    T4M_MODAL: ("T4m modalities", DomainKind.DOM4),
    T45M_MODAL: ("T45m modalities", DomainKind.DOM4),
    DM_NEG: ("six-valued negation", DomainKind.DOM6),
    DM_IMP: ("six-valued implication", DomainKind.DOM6),
    DM_FAMILY_MODAL: ("Dm/D4m/D45m modalities", DomainKind.DOM6),
    KM_FAMILY_MODAL: ("eight-valued negation and modalities", DomainKind.DOM8),
    KM_IMP: ("eight-valued implication", DomainKind.DOM8),
    KM_OR: ("eight-valued disjunction", DomainKind.DOM8),
    KM_AND: ("eight-valued conjunction", DomainKind.DOM8),
    KM_CIRC: ("eight-valued consistency operator", DomainKind.DOM8),
    TMD_IMP: ("deterministic implication", DomainKind.DOM4),
    TMD_OR: ("deterministic disjunction", DomainKind.DOM4),
}
GRID_NAMES = {src: name for src, (name, _) in GRIDS.items()}


@dataclass(frozen=True)
class PrintedTables:
    """One system's printed tables as masks indexed by value ordinal."""

    system: str
    kind: DomainKind
    tables: dict
    cells: dict  # (connective, args) -> (grid name, raw text, well formed)


def _unary(grid: Grid, col: int, kind: DomainKind, grid_name: str, conn: str, out, cells) -> None:
    members = domain(kind).members
    table = [0] * 8
    for v, raw in zip(members, grid.column(col)):
        c = read_cell(raw, kind)
        table[int(v)] = c.mask
        cells[(conn, (v,))] = (grid_name, raw, c.well_formed)
    out[conn] = tuple(table)


def _binary(grid: Grid, kind: DomainKind, grid_name: str, conn: str, out, cells) -> None:
    members = domain(kind).members
    table = [[0] * 8 for _ in range(8)]
    for x, row in zip(members, grid.cells):
        for y, raw in zip(members, row):
            c = read_cell(raw, kind)
            table[int(x)][int(y)] = c.mask
            cells[(conn, (x, y))] = (grid_name, raw, c.well_formed)
    out[conn] = tuple(tuple(r) for r in table)


def printed_tables(system: str) -> PrintedTables:
    kind_name, neg_src, imp_src, box_src, dia_src = _SOURCES[system]
    kind = DomainKind(kind_name)
    out: dict = {}
    cells: dict = {}
    neg_grid = read_grid(neg_src)
    neg_col = neg_grid.header.index("neg")
    _unary(neg_grid, neg_col, kind, GRID_NAMES[neg_src], "neg", out, cells)
    _binary(read_grid(imp_src), kind, GRID_NAMES[imp_src], "imp", out, cells)
    for conn, (src, col) in (("box", box_src), ("dia", dia_src)):
        _unary(read_grid(src), col, kind, GRID_NAMES[src], conn, out, cells)
    return PrintedTables(system, kind, out, cells)


def printed_binary(src: str) -> tuple[tuple[int, ...], ...]:
    """Decode a standalone binary grid (such as the disjunction tables)."""
    name, kind = GRIDS[src]
    out: dict = {}
    _binary(read_grid(src), kind, name, "op", out, {})
    return out["op"]


def printed_unary(src: str, column: int = 0) -> tuple[int, ...]:
    name, kind = GRIDS[src]
    out: dict = {}
    _unary(read_grid(src), column, kind, name, "op", out, {})
    return out["op"]


def label_slips() -> list[str]:
    """Grids whose printed row labels disagree with their position."""
    notes = []
    for src, (name, kind) in GRIDS.items():
        g = read_grid(src)
        expected = [v.label for v in domain(kind)]
        if list(g.rows) != expected:
            bad = [f"row {i + 1} printed {r} for {e}" for i, (r, e) in enumerate(zip(g.rows, expected)) if r != e]
            notes.append(f"{name}: " + "; ".join(bad))
    return notes


@dataclass(frozen=True)
class Deviation:
    system: str
    connective: str
    args: tuple[TruthValue, ...]
    printed: int
    computed: int
    grid: str
    raw: str

    def describe(self) -> str:
        a = ", ".join(v.label for v in self.args)
        return (
            f"{self.system} {self.connective}({a}): printed {self.raw!r} = "
            f"{format_mask(self.printed)}, coherent {format_mask(self.computed)} [{self.grid}]"
        )

    def as_json(self) -> dict:
        return {"system": self.system, "connective": self.connective, "args": [v.label for v in self.args],
                "printed": format_mask(self.printed), "coherent": format_mask(self.computed), "grid": self.grid}


@dataclass(frozen=True)
class Malformed:
    system: str
    connective: str
    args: tuple[TruthValue, ...]
    grid: str
    raw: str

    def describe(self) -> str:
        a = ", ".join(v.label for v in self.args)
        return f"{self.system} {self.connective}({a}): cell typeset as {self.raw!r} [{self.grid}]"

    def as_json(self) -> dict:
        return {"system": self.system, "connective": self.connective, "args": [v.label for v in self.args],
                "raw": self.raw, "grid": self.grid}


@dataclass(frozen=True)
class PrintReport:
    deviations: tuple[Deviation, ...]
    malformed: tuple[Malformed, ...]
    label_slips: tuple[str, ...]

    def lines(self) -> list[str]:
        out = [f"value deviations: {len(self.deviations)}"]
        out += ["  " + d.describe() for d in self.deviations]
        out.append(f"malformed cells: {len(self.malformed)}")
        out += ["  " + m.describe() for m in self.malformed]
        out.append(f"row label slips: {len(self.label_slips)}")
        out += ["  " + s for s in self.label_slips]
        return out


def compare_with_print(systems=None) -> PrintReport:
    """Every cell where the built-in tables differ from the printed ones."""
    from mnm.nmatrix import SYSTEM_IDS, builtin

    deviations, malformed = [], []
    for sid in systems or SYSTEM_IDS:
        nm = builtin(sid)
        pt = printed_tables(sid)
        for (conn, args), (grid, raw, ok) in pt.cells.items():
            computed = nm.algebra.cell(conn, args)
            printed = pt.tables[conn][int(args[0])] if len(args) == 1 else pt.tables[conn][int(args[0])][int(args[1])]
            if printed != computed:
                deviations.append(Deviation(sid, conn, args, printed, computed, grid, raw))
            if not ok:
                malformed.append(Malformed(sid, conn, args, grid, raw))
    return PrintReport(tuple(deviations), tuple(malformed), tuple(label_slips()))
