import json
import os
import subprocess
import sys

import pytest

from mnm.cli import main
from mnm.corpus import build_corpus
from mnm.calculus import Derivation, MP, Step, dumps
from mnm.syntax import parse


def run(capsys, *argv):
    code = main(list(argv))
    cap = capsys.readouterr()
    return code, cap.out, cap.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--format", "json")
    return code, json.loads(out)


def test_valid_example(capsys):
    code, out, _ = run(capsys, "valid", "--system", "Tm", "[]p -> p")
    assert code == 0 and out.strip() == "valid"


def test_entail_example(capsys):
    code, out, _ = run(capsys, "entail", "--system", "Km", "-p", "[](p->q)", "-p", "[]p", "-c", "[]q")
    assert code == 1 and "p=I+" in out and "q=C+" in out
    code, data = run_json(capsys, "entail", "--system", "Km", "-p", "[](p->q)", "-p", "[]p", "-c", "[]q")
    assert code == 1 and data["verdict"] == "fails"
    assert data["witness"]["p"] == "I+" and data["witness"]["q"] == "C+"
    assert set(data) >= {"query", "system", "verdict", "witness", "nodes_explored", "time_ms"}


def test_falsify_example(capsys):
    code, data = run_json(capsys, "dugundji", "falsify", "--system", "T45m", "-n", "3")
    assert code == 1 and data["atoms"] == {"p1": "C+", "p2": "C+", "p3": "C+"}
    code, data = run_json(capsys, "dugundji", "falsify", "--system", "Tmd", "-n", "3")
    assert code == 1 and data["kind"] == "gamma"


def test_usage_errors(capsys, monkeypatch):
    monkeypatch.delenv("MNM_SYSTEM", raising=False)
    assert run(capsys, "valid", "p")[0] == 2
    assert run(capsys, "valid", "-s", "S5", "p")[0] == 2
    code, _, err = run(capsys, "valid", "-s", "Km", "p ->")
    assert code == 2 and "expected" in err.lower()
    assert run(capsys, "frobnicate")[0] == 2
    assert run(capsys, "--help")[0] == 0
    assert run(capsys, "table", "-s", "Km", "xor")[0] == 2
    assert run(capsys, "proof", "check", "/nonexistent/file.drv")[0] == 2


def test_environment_system(capsys, monkeypatch):
    monkeypatch.setenv("MNM_SYSTEM", "Tm")
    assert run(capsys, "valid", "[]p -> p")[0] == 0
    monkeypatch.setenv("MNM_SYSTEM", "Km")
    assert run(capsys, "valid", "[]p -> p")[0] == 1


@pytest.mark.parametrize(
    "argv",
    [
        ["valid", "-s", "Km", "[]p -> p"],
        ["valid", "-s", "Km", "p -> q -> p"],
        ["entail", "-s", "Dm", "-p", "[]p", "-c", "<>p"],
        ["countermodel", "-s", "Km", "-c", "<>p | <>~p"],
        ["dat", "search", "--kind", "both", "-c", "[]p -> p"],
        ["dat", "verify", "--kind", "circ", "-p", "[]p", "-c", "<>p"],
        ["audit", "-s", "K45m"],
        ["dugundji", "falsify", "-s", "Km", "-n", "3"],
        ["dugundji", "falsify", "-s", "T45md", "-n", "3", "--kind", "delta"],
    ],
)
def test_text_and_json_agree(capsys, argv):
    code_t, text, _ = run(capsys, *argv)
    code_j, data = run_json(capsys, *argv)
    assert code_t == code_j
    verdict = data.get("verdict")
    if verdict is not None:
        assert (verdict == "holds") == (code_j == 0)
        assert (text.strip() in ("valid", "holds")) == (verdict == "holds")


@pytest.mark.parametrize(
    "argv",
    [
        ["entail", "-s", "Km", "-p", "[](p->q)", "-p", "[]p", "-c", "[]q"],
        ["dugundji", "scan", "-s", "Km", "--size", "3", "--samples", "5000", "--seed", "4"],
        ["dugundji", "conserve", "-s", "Dm", "--samples", "60", "--seed", "9"],
        ["dat", "search", "--kind", "circ", "-p", "[](p -> q)", "-p", "[]p", "-p", "<>p", "-c", "<>q"],
        ["export-tables"],
    ],
)
def test_json_is_byte_identical(capsys, argv):
    a = run(capsys, *argv, "--format", "json")[1]
    b = run(capsys, *argv, "--format", "json")[1]
    assert a == b
    json.loads(a)


def test_scan_jobs_do_not_change_output(capsys):
    argv = ["dugundji", "scan", "-s", "Km", "--size", "3", "--samples", "120000", "--format", "json"]
    assert run(capsys, *argv)[1] == run(capsys, *argv, "--jobs", "2")[1]


def test_timing_flag(capsys):
    _, data = run_json(capsys, "valid", "-s", "Km", "p", "--timing")
    assert isinstance(data["time_ms"], int)
    _, data = run_json(capsys, "valid", "-s", "Km", "p")
    assert data["time_ms"] == 0


def test_parse_and_tables(capsys):
    code, data = run_json(capsys, "parse", "p | q")
    assert code == 0 and data["ascii"] == "~p -> q" and data["sugared"] == "p | q"
    _, data = run_json(capsys, "table", "imp", "-s", "Km")
    assert data["cells"]["C+"]["C-"] == "{T-, C-}"
    _, data = run_json(capsys, "table", "box", "-s", "D45m")
    assert data["cells"]["T-"] == "{T+}"
    _, data = run_json(capsys, "table", "box", "-s", "D45m", "--strict-paper")
    assert data["cells"]["T-"] == "{F-}"
    _, data = run_json(capsys, "derive-table", "or", "-s", "Km")
    assert data["cells"]["C+ C+"] == "{T+, C+}"
    _, data = run_json(capsys, "derive-table", "circt", "-s", "Dm")
    assert set(data["cells"]) == {"T+", "C+", "F+", "T-", "C-", "F-"}


def test_audit_and_lemmas(capsys):
    assert run(capsys, "audit", "--all")[0] == 0
    assert run(capsys, "audit", "-s", "Km", "--axioms", "Km-circ")[0] == 0
    assert run(capsys, "audit", "-s", "D45m", "--strict-paper")[0] == 1
    code, data = run_json(capsys, "lemmas")
    assert code == 0 and len(data["lemmas"]) == 10


def test_proof_commands(capsys, tmp_path):
    d = build_corpus()["km_implication_iv"]
    path = tmp_path / "iv.drv"
    path.write_text(dumps(d), encoding="utf-8")
    assert run(capsys, "proof", "check", str(path), "--confirm")[0] == 0
    code, data = run_json(capsys, "proof", "dmt", str(path))
    assert code == 0
    bad = Derivation("Km", (parse("p"),), (Step(parse("q"), MP(1, 1)),))
    bad_path = tmp_path / "bad.drv"
    bad_path.write_text(dumps(bad), encoding="utf-8")
    code, out, _ = run(capsys, "proof", "check", str(bad_path))
    assert code == 1 and "IndexOutOfRange" in out


def test_premises_from_file(capsys, tmp_path):
    f = tmp_path / "prem.txt"
    f.write_text("# premises\n[](p -> q)\n[]p\n\n", encoding="utf-8")
    code, data = run_json(capsys, "entail", "-s", "Km", "-p", str(f), "-c", "[]q")
    assert code == 1 and data["premises"] == ["[](p -> q)", "[]p"]


def test_export_tables(capsys, tmp_path):
    code, out, _ = run(capsys, "export-tables", "--out", str(tmp_path))
    assert code == 0 and "value deviations: 10" in out
    assert (tmp_path / "Km.nmx").exists() and (tmp_path / "deviations.txt").exists()
    from mnm.nmatrix import builtin, load

    assert load((tmp_path / "Tm.nmx").read_text(encoding="utf-8")) == builtin("Tm")


def test_module_and_script_entry_points():
    env = dict(os.environ, MNM_SYSTEM="Tm")
    r = subprocess.run([sys.executable, "-m", "mnm", "valid", "[]p -> p"], capture_output=True, text=True, env=env)
    assert r.returncode == 0 and r.stdout.strip() == "valid"
    r = subprocess.run([sys.executable, "-m", "mnm", "valid", "-s", "Km", "[]p -> p", "--format", "json"],
                       capture_output=True, text=True)
    assert r.returncode == 1 and json.loads(r.stdout)["verdict"] == "fails"
