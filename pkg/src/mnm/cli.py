"""Command-line interface.

Exit codes: 0 when the queried property holds, 1 when it fails (a
countermodel, a bad derivation, a failed audit), 2 on usage errors and 3 on
internal errors.  ``--format json`` prints one JSON object; the text output
carries the same verdict.  JSON is deterministic: ``time_ms`` is 0 unless
``--timing`` is given.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path
from typing import Sequence

from mnm import calculus, dugundji, recovery
from mnm.errors import MnmError, StepError
from mnm.nmatrix import CONNECTIVES, SYSTEM_IDS, builtin, grid_text, resolve, save
from mnm.printed import compare_with_print
from mnm.semantics import audit, audit_system, decide_consequence, verify_lemma_suite
from mnm.syntax import Formula, atoms, depth, parse, render, size
from mnm.values import format_mask

OK, FAIL, USAGE, INTERNAL = 0, 1, 2, 3

_SHORTCUTS = {"or": "~A -> B", "and": "~(A -> ~B)", "circ": "[]A -> <>A", "bullet": "~([]A -> <>A)",
              "circt": "circt A", "dia-dual": "~[]~A"}


class _Usage(Exception):
    pass


class _Out:
    def __init__(self, args: argparse.Namespace):
        self.json = args.format == "json"
        self.timing = args.timing
        self.t0 = time.perf_counter()

    def emit(self, payload: dict, text: str | Sequence[str]) -> None:
        if self.json:
            payload = dict(payload)
            payload["time_ms"] = round((time.perf_counter() - self.t0) * 1000) if self.timing else 0
            print(json.dumps(payload, ensure_ascii=False, sort_keys=True))
        else:
            print(text if isinstance(text, str) else "\n".join(text))


# Input helpers.

def _system(args: argparse.Namespace) -> str:
    sid = args.system or os.environ.get("MNM_SYSTEM")
    if not sid:
        raise _Usage("no system given (use --system or set MNM_SYSTEM)")
    if sid not in SYSTEM_IDS:
        raise _Usage(f"unknown system {sid!r}; choose from {', '.join(SYSTEM_IDS)}")
    return sid


def _formulas(items: Sequence[str] | None) -> list[Formula]:
    """Each item is a formula or, if it does not parse as one, the path of
    a UTF-8 file with one formula per non-blank line (# starts a comment)."""
    from mnm.errors import FormulaSyntaxError

    out = []
    for item in items or ():
        try:
            out.append(parse(item))
            continue
        except FormulaSyntaxError:
            path = Path(item)
            if not path.is_file():
                raise
        try:
            text = path.read_text(encoding="utf-8")
        except UnicodeDecodeError:
            raise _Usage(f"{item} is not UTF-8 text") from None
        for line in text.splitlines():
            line = line.split("#", 1)[0].strip()
            if line:
                out.append(parse(line))
    return out


def _jobs(args: argparse.Namespace) -> int:
    if args.jobs is not None:
        return max(1, args.jobs)
    try:
        return max(1, int(os.environ.get("MNM_JOBS", "1")))
    except ValueError:
        raise _Usage("MNM_JOBS must be an integer") from None


def _witness_text(v) -> str:
    return ", ".join(f"{k}={x.label}" for k, x in v.atoms().items())


def _verdict_payload(sid: str, premises, conclusion, verdict) -> dict:
    w = verdict.witness
    lhs = ", ".join(render(p) for p in premises)
    return {
        "query": f"{lhs} |= {render(conclusion)}" if lhs else f"|= {render(conclusion)}",
        "system": sid,
        "premises": [render(p) for p in premises],
        "conclusion": render(conclusion),
        "verdict": "holds" if verdict.holds else "fails",
        "witness": w.as_json() if w is not None else None,
        "atoms": w.atoms_json() if w is not None else None,
        "nodes_explored": verdict.nodes_explored,
    }


# Subcommands.

def cmd_parse(args, out: _Out) -> int:
    f = parse(args.formula)
    payload = {
        "ascii": render(f),
        "unicode": render(f, unicode=True),
        "sugared": render(f, sugar=True),
        "atoms": [a.name for a in atoms(f)],
        "size": size(f),
        "depth": depth(f),
    }
    out.emit(payload, [payload["ascii"], payload["unicode"],
                       f"atoms: {' '.join(payload['atoms'])}  size: {payload['size']}  depth: {payload['depth']}"])
    return OK


def cmd_table(args, out: _Out) -> int:
    sid = _system(args)
    nm = resolve(sid, args.strict_paper)
    conn = args.connective
    if conn not in CONNECTIVES:
        raise _Usage(f"unknown connective {conn!r}; choose from {', '.join(CONNECTIVES)}")
    table = nm.algebra.table(conn)
    if conn == "imp":
        cells = {x.label: {y.label: format_mask(table[x][y]) for y in nm.values} for x in nm.values}
    else:
        cells = {x.label: format_mask(table[x]) for x in nm.values}
    out.emit({"system": sid, "connective": conn, "cells": cells}, grid_text(nm, conn))
    return OK


def cmd_derive_table(args, out: _Out) -> int:
    from mnm.nmatrix import derived_table
    from mnm.syntax import metavariables

    sid = _system(args)
    nm = resolve(sid, args.strict_paper)
    schema = parse(_SHORTCUTS.get(args.skeleton, args.skeleton))
    names = sorted(metavariables(schema))
    if not names:
        raise _Usage("the skeleton needs at least one metavariable (A, B, ...)")
    table = derived_table(nm, schema)
    rows = {" ".join(v.label for v in k): "{" + ", ".join(v.label for v in sorted(s)) + "}" for k, s in table.items()}
    lines = [f"{render(schema)} in {sid} ({' '.join(names)}):"]
    lines += [f"  {k} : {v}" for k, v in rows.items()]
    out.emit({"system": sid, "schema": render(schema), "metavariables": names, "cells": rows}, lines)
    return OK


def cmd_valid(args, out: _Out) -> int:
    sid = _system(args)
    f = parse(args.formula)
    v = decide_consequence(resolve(sid, args.strict_paper), (), f)
    text = "valid" if v.holds else f"not valid; countermodel: {_witness_text(v.witness)}"
    out.emit(_verdict_payload(sid, (), f, v), text)
    return OK if v.holds else FAIL


def cmd_entail(args, out: _Out) -> int:
    sid = _system(args)
    premises = _formulas(args.premise)
    conclusion = parse(args.conclusion)
    v = decide_consequence(resolve(sid, args.strict_paper), premises, conclusion)
    if v.holds:
        text = "holds"
    elif args.command == "countermodel":
        text = "\n".join(f"{k} = {x}" for k, x in v.witness.as_json().items())
    else:
        text = f"does not hold; countermodel: {_witness_text(v.witness)}"
    out.emit(_verdict_payload(sid, premises, conclusion, v), text)
    return OK if v.holds else FAIL


def cmd_audit(args, out: _Out) -> int:
    targets = []
    if args.axioms:
        nm = resolve(args.system or "Km", args.strict_paper)
        targets.append(audit(nm, calculus.axioms_of(args.axioms), f"{args.axioms} over {nm.name}"))
    elif args.all:
        targets = [audit_system(s, args.strict_paper) for s in SYSTEM_IDS]
    else:
        targets.append(audit_system(_system(args), args.strict_paper))
    payload, lines = [], []
    for r in targets:
        fails = r.failures()
        payload.append({
            "system": r.system,
            "ok": r.ok,
            "failures": [{"axiom": e.name, "witness": e.verdict.witness.atoms_json()} for e in fails],
            "mp_violations": [[x.label, y.label] for x, y in r.mp_violations],
        })
        lines.append(f"{r.system}: {'ok' if r.ok else 'FAILED'} ({len(r.entries)} axioms)")
        for e in fails:
            lines.append(f"  {e.name} fails: {_witness_text(e.verdict.witness)}")
        for x, y in r.mp_violations:
            lines.append(f"  modus ponens not preserved at {x.label}, {y.label}")
    ok = all(r.ok for r in targets)
    out.emit({"audits": payload, "ok": ok}, lines)
    return OK if ok else FAIL


def cmd_lemmas(args, out: _Out) -> int:
    sid = args.system or os.environ.get("MNM_SYSTEM") or "Km"
    checks = verify_lemma_suite(sid)
    lines = [f"{c.label}: {'holds' if c.holds else 'FAILS'}" for c in checks]
    ok = all(c.holds for c in checks)
    out.emit({"system": sid, "ok": ok, "lemmas": [{"label": c.label, "holds": c.holds,
                                                    "sequents": [str(s) for s in c.sequents]} for c in checks]},
             lines)
    return OK if ok else FAIL


def _load_derivation(path: str) -> calculus.Derivation:
    try:
        return calculus.loads(Path(path).read_text(encoding="utf-8"))
    except UnicodeDecodeError:
        raise _Usage(f"{path} is not UTF-8 text") from None


def cmd_proof(args, out: _Out) -> int:
    d = _load_derivation(args.file)
    system = args.system or d.system
    if args.action == "check":
        try:
            seq = calculus.check_derivation(system, d)
        except StepError as e:
            out.emit({"ok": False, "step": e.index, "reason": e.reason, "detail": e.detail}, str(e))
            return FAIL
        sem = decide_consequence(builtin(system), seq.premises, seq.conclusion) if args.confirm else None
        payload = {"ok": True, "system": system, "steps": len(d.steps), "sequent": str(seq)}
        lines = [f"ok: {seq} ({len(d.steps)} steps)"]
        if sem is not None:
            payload["semantically_confirmed"] = sem.holds
            lines.append("semantically confirmed" if sem.holds else "NOT semantically valid")
        out.emit(payload, lines)
        return OK if sem is None or sem.holds else FAIL
    hyp = parse(args.hyp) if args.hyp else None
    t = calculus.deduction_transform(system, d, hyp)
    calculus.check_derivation(system, t)
    text = calculus.dumps(t)
    out.emit({"ok": True, "sequent": str(t.sequent), "steps": len(t.steps), "derivation": text}, text.rstrip("\n"))
    return OK


def _dat_query(args) -> recovery.DatQuery:
    return recovery.DatQuery(args.kind, tuple(_formulas(args.premise)), parse(args.conclusion))


def cmd_dat(args, out: _Out) -> int:
    q = _dat_query(args)
    if args.action == "search":
        pool = None
        if args.pool_depth:
            from mnm.syntax import subformulas

            pool = recovery.widen_pool(subformulas(*q.premises, q.conclusion), args.pool_depth)
        r = recovery.dat_search(q, pool, args.max_size)
        payload = r.as_json()
        if r.witness is not None:
            text = (f"upsilon: {{{', '.join(render(f) for f in r.witness.upsilon)}}}"
                    f"  upsilon': {{{', '.join(render(f) for f in r.witness.upsilon_prime)}}}")
        else:
            text = f"no witness: {r.note}"
        out.emit(payload, text)
        return OK if r.witness is not None else FAIL
    w = recovery.DatWitness(tuple(_formulas(args.upsilon)), tuple(_formulas(args.upsilon_prime)))
    ok = recovery.dat_verify(q, w)
    out.emit({"source": q.source, "target": q.target, "verified": ok,
              "upsilon": [render(f) for f in w.upsilon], "upsilon_prime": [render(f) for f in w.upsilon_prime]},
             "verified" if ok else "not verified")
    return OK if ok else FAIL


def _dug_kind(args, sid: str | None) -> str:
    if args.kind:
        return args.kind
    return "gamma" if sid and sid.endswith("md") else "delta"


def cmd_dugundji(args, out: _Out) -> int:
    act = args.action
    if act in ("delta", "gamma"):
        f = dugundji.build_delta(args.n) if act == "delta" else dugundji.build_gamma(args.n)
        out.emit({"kind": act, "n": args.n, "formula": render(f.formula), "display": f.render(unicode=True)},
                 f.render(unicode=args.unicode))
        return OK
    if act == "falsify":
        sid = _system(args)
        kind = _dug_kind(args, sid)
        f = dugundji.build_delta(args.n) if kind == "delta" else dugundji.build_gamma(args.n)
        v = dugundji.falsify(sid, f)
        if v is None:
            out.emit({"system": sid, "kind": kind, "n": args.n, "falsified": False, "witness": None,
                      "atoms": None}, "valid")
            return OK
        out.emit({"system": sid, "kind": kind, "n": args.n, "falsified": True, "witness": v.as_json(),
                  "atoms": v.atoms_json()}, f"falsified: {_witness_text(v)}")
        return FAIL
    if act == "scan":
        sid = _system(args)
        kind = _dug_kind(args, sid)
        n = args.n or args.size + 1
        f = dugundji.build_delta(n) if kind == "delta" else dugundji.build_gamma(n)
        r = dugundji.scan_matrices(args.size, sid, f, samples=args.samples, seed=args.seed,
                                   exhaustive=args.exhaustive, jobs=_jobs(args))
        text = [f"size {r.size} {r.mode} scan over {sid}: {r.candidates} candidates, {r.classes} examined, "
                f"{r.models} models, {len(r.violations)} violations",
                f"substitution step fails in {r.substitution_failures} models"]
        out.emit(r.as_json(), text)
        return OK if r.ok else FAIL
    if act == "conserve":
        sid = _system(args)
        r = dugundji.conservativity_check(sid, args.samples, args.depth, args.seed)
        out.emit(r.as_json(), f"{r.samples} formulas, {r.valid} classically valid, "
                              f"{len(r.discrepancies)} discrepancies")
        return OK if r.ok else FAIL
    r = dugundji.t45md_agreement(args.samples, args.seed, args.depth)
    out.emit(r.as_json(), f"{r.samples} formulas, {r.valid} valid, {len(r.disagreements)} disagreements")
    return OK if r.ok else FAIL


def cmd_export_tables(args, out: _Out) -> int:
    report = compare_with_print()
    sections = {}
    for sid in SYSTEM_IDS:
        nm = resolve(sid, args.strict_paper)
        grids = "\n\n".join(grid_text(nm, c) for c in nm.algebra.connectives())
        sections[sid] = {"nmatrix": save(nm), "grids": grids}
    report_lines = report.lines()
    if args.out:
        d = Path(args.out)
        d.mkdir(parents=True, exist_ok=True)
        for sid, sec in sections.items():
            (d / f"{sid}.nmx").write_text(sec["nmatrix"], encoding="utf-8")
            (d / f"{sid}.txt").write_text(sec["grids"] + "\n", encoding="utf-8")
        (d / "deviations.txt").write_text("\n".join(report_lines) + "\n", encoding="utf-8")
    text = []
    for sid, sec in sections.items():
        text += [f"== {sid}", sec["grids"], ""]
    text += report_lines
    payload = {
        "strict_paper": args.strict_paper,
        "systems": sections,
        "deviations": [d.as_json() for d in report.deviations],
        "malformed": [m.as_json() for m in report.malformed],
        "label_slips": list(report.label_slips),
    }
    out.emit(payload, text)
    return OK


# Parser.

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--system", "-s", help="system id (default: $MNM_SYSTEM)")
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--jobs", type=int, default=None, help="worker processes (default: $MNM_JOBS or 1)")
    common.add_argument("--timing", action="store_true", help="report wall time in JSON output")
    common.add_argument("--strict-paper", action="store_true",
                        help="use the tables exactly as printed, slips included")

    p = argparse.ArgumentParser(prog="mnm", description="Modal Nmatrix toolkit.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("parse", parents=[common], help="parse and pretty-print a formula")
    s.add_argument("formula")
    s.set_defaults(fn=cmd_parse)

    s = sub.add_parser("table", parents=[common], help="print a connective's table")
    s.add_argument("connective")
    s.set_defaults(fn=cmd_table)

    s = sub.add_parser("derive-table", parents=[common], help="table of a derived connective")
    s.add_argument("skeleton", help="schema over A, B (or: or, and, circ, bullet, circt, dia-dual)")
    s.set_defaults(fn=cmd_derive_table)

    s = sub.add_parser("valid", parents=[common], help="decide validity")
    s.add_argument("formula")
    s.set_defaults(fn=cmd_valid)

    for name in ("entail", "countermodel"):
        s = sub.add_parser(name, parents=[common], help="decide a consequence" if name == "entail"
                           else "print a countermodel to a consequence")
        s.add_argument("-p", "--premise", action="append", help="formula or file of formulas")
        s.add_argument("-c", "--conclusion", required=True)
        s.set_defaults(fn=cmd_entail)

    s = sub.add_parser("audit", parents=[common], help="check axiom soundness")
    s.add_argument("--all", action="store_true", help="audit all twelve systems")
    s.add_argument("--axioms", help="audit a named axiom set (e.g. Km-circ) over --system")
    s.set_defaults(fn=cmd_audit)

    s = sub.add_parser("lemmas", parents=[common], help="check the duality and implication lemmas")
    s.set_defaults(fn=cmd_lemmas)

    s = sub.add_parser("proof", parents=[common], help="derivation files")
    s.add_argument("action", choices=("check", "dmt"))
    s.add_argument("file")
    s.add_argument("--hyp", help="hypothesis to discharge (dmt; default: the last one)")
    s.add_argument("--confirm", action="store_true", help="also decide the sequent semantically")
    s.set_defaults(fn=cmd_proof)

    s = sub.add_parser("dat", parents=[common], help="derivability adjustment")
    s.add_argument("action", choices=("search", "verify"))
    s.add_argument("--kind", choices=tuple(recovery.KINDS), default="circ")
    s.add_argument("-p", "--premise", action="append")
    s.add_argument("-c", "--conclusion", required=True)
    s.add_argument("--max-size", type=int, default=3)
    s.add_argument("--pool-depth", type=int, default=0)
    s.add_argument("--upsilon", "-u", action="append", help="formula to mark with circ")
    s.add_argument("--upsilon-prime", "-U", action="append", help="formula to mark with circt")
    s.set_defaults(fn=cmd_dat)

    s = sub.add_parser("dugundji", parents=[common], help="Dugundji formulas and matrix scans")
    s.add_argument("action", choices=("delta", "gamma", "falsify", "scan", "conserve", "agree"))
    s.add_argument("-n", type=int, default=None)
    s.add_argument("--kind", choices=("delta", "gamma"))
    s.add_argument("--size", type=int, default=2)
    s.add_argument("--samples", type=int, default=None)
    s.add_argument("--depth", type=int, default=None)
    s.add_argument("--exhaustive", action="store_true", help="size 3: enumerate everything")
    s.add_argument("--unicode", action="store_true")
    s.set_defaults(fn=cmd_dugundji)

    s = sub.add_parser("export-tables", parents=[common], help="all built-in tables and the print report")
    s.add_argument("--out", help="directory for .nmx and grid files")
    s.set_defaults(fn=cmd_export_tables)
    return p


_DEFAULTS = {
    "delta": {"n": 3}, "gamma": {"n": 3}, "falsify": {"n": 3},
    "scan": {"samples": 200_000}, "conserve": {"samples": 1000, "depth": 6}, "agree": {"samples": 500, "depth": 4},
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return USAGE if e.code else OK
    if args.command == "dugundji":
        for k, v in _DEFAULTS[args.action].items():
            if getattr(args, k) is None:
                setattr(args, k, v)
    out = _Out(args)
    try:
        return args.fn(args, out)
    except _Usage as e:
        print(f"mnm: {e}", file=sys.stderr)
        return USAGE
    except (MnmError, OSError) as e:
        print(f"mnm: {e}", file=sys.stderr)
        return USAGE
    except Exception as e:  # noqa: BLE001
        print(f"mnm: internal error: {type(e).__name__}: {e}", file=sys.stderr)
        return INTERNAL


if __name__ == "__main__":
    sys.exit(main())
