import io
import json
import sys

import pytest

import qep.cli as cli
from qep.oracle import OracleResult

EX1_MATRIX = "(z -> x) & (z | ~z).\n"
EX1 = "forall x. exists z. (z -> x) & (z | ~z).\n"
EX1_UNSAT = "exists x. forall z. (z -> x) & (z | ~z).\n"
WITNESS = "forall x. exists y. exists z. z -> x. ~z -> y. ~y -> z.\n"


@pytest.fixture
def theory_file(tmp_path):
    def write(text, name="theory.qt"):
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return str(path)

    return write


def run(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_eval_noncrisp_interpretation(theory_file, capsys):
    code, out, err = run(capsys, "eval", "--at", "x=1/2, z=0", theory_file(EX1_MATRIX))
    assert code == 0
    assert out == "g3: 1\n"


def test_eval_crisp_prints_both_readings(theory_file, capsys):
    code, out, _ = run(capsys, "eval", "--at", "x=1, z=0", theory_file(EX1_MATRIX))
    assert code == 0
    assert out == "g2: 1\ng3: 1\n"


def test_eval_bottom(theory_file, capsys):
    code, out, _ = run(capsys, "eval", "--at", "", theory_file("bot.\n"))
    assert code == 0
    assert "g3: 0" in out.splitlines()


def test_eval_quantified_value(theory_file, capsys):
    code, out, _ = run(capsys, "eval", theory_file(EX1))
    assert code == 0
    assert out == "qg3: 1\n"


def test_eval_json(theory_file, capsys):
    code, out, _ = run(capsys, "eval", "--format", "json", "--at", "x=1, z=1", theory_file(EX1))
    assert code == 0
    assert json.loads(out) == {"g2": "1", "g3": "1", "qg3": "1"}


def test_eval_free_atoms_need_values(theory_file, capsys):
    code, _, err = run(capsys, "eval", "--allow-free", theory_file("exists x. x & z.\n"))
    assert code == 3
    assert "z" in err


def test_parse_error_exit_code(theory_file, capsys):
    code, _, err = run(capsys, "eval", theory_file("x & .\n"))
    assert code == 2
    assert err.startswith("parse error:")
    assert "line 1" in err


def test_missing_file(capsys):
    code, _, err = run(capsys, "eval", "/nonexistent/path.qt")
    assert code == 3
    assert err.startswith("error:")


def test_models_listing(theory_file, capsys):
    code, out, _ = run(capsys, "models", theory_file(EX1))
    assert code == 0
    assert out == "x=0, z=0\nx=1, z=1\n"
    code, out, _ = run(capsys, "models", "--allow-free", theory_file(EX1_MATRIX))
    assert code == 0
    assert out == "x=0, z=0\nx=1, z=1\n"


def test_models_unsat(theory_file, capsys):
    code, out, _ = run(capsys, "models", theory_file("exists x. x & ~x.\n"))
    assert code == 1
    assert out == "UNSAT (no equilibrium model)\n"
    code, out, _ = run(capsys, "models", "--format", "json", theory_file("exists x. x & ~x.\n"))
    assert code == 1
    assert json.loads(out) == {"count": 0, "models": []}


def test_sat_both_readings(theory_file, capsys):
    sat_file = theory_file(WITNESS)
    for semantics in ("fandinno", "stephan"):
        code, out, _ = run(capsys, "sat", "--semantics", semantics, sat_file)
        assert code == 0
        assert out == "SAT\n"
    code, out, _ = run(capsys, "sat", theory_file("forall x. x.\n", "u.qt"))
    assert code == 1
    assert out == "UNSAT\n"
    code, out, _ = run(capsys, "sat", "--format", "json", theory_file("forall x. x.\n", "u2.qt"))
    assert code == 1
    assert json.loads(out) == {"semantics": "fandinno", "satisfiable": False}


def test_policies_text_output(theory_file, capsys):
    code, out, _ = run(capsys, "policies", theory_file(EX1))
    assert code == 0
    assert out.splitlines()[0] == "policy 1:"
    assert "x" in out and "lambda" in out


def test_policies_unsat(theory_file, capsys):
    code, out, _ = run(capsys, "policies", theory_file(EX1_UNSAT))
    assert code == 1
    assert out == "UNSAT (no equilibrium policy)\n"
    code, out, _ = run(capsys, "policies", "--format", "json", theory_file(EX1_UNSAT))
    assert code == 1
    payload = json.loads(out)
    assert payload["count"] == 0
    assert payload["policies"] == []
    assert payload["noncrisp"] == ["x=1/2, z=0"]


def test_policies_json_payload(theory_file, capsys):
    code, out, _ = run(capsys, "policies", "--format", "json", theory_file(EX1))
    assert code == 0
    payload = json.loads(out)
    assert payload["count"] == 1
    assert payload["noncrisp"] == ["x=1/2, z=0"]
    tree = payload["policies"][0]
    assert tree["kind"] == "forall" and tree["var"] == "x"
    assert tree["branches"]["0"]["value"] == "0"
    assert tree["branches"]["1"]["value"] == "1"


def test_policies_dot_output(theory_file, capsys):
    code, out, _ = run(capsys, "policies", "--format", "dot", theory_file(EX1))
    assert code == 0
    assert out.startswith("digraph")
    assert 'n0 -> n1 [label="0"];' in out


def test_policies_game_mode(theory_file, capsys):
    witness = theory_file(WITNESS)
    code, out, _ = run(capsys, "policies", "--game", "--format", "json", witness)
    assert code == 0
    payload = json.loads(out)
    assert payload["semantics"] == "fandinno"
    assert payload["count"] == 1
    code, out, _ = run(capsys, "policies", "--game", "--semantics", "stephan",
                       "--format", "json", witness)
    assert code == 0
    payload = json.loads(out)
    assert payload["semantics"] == "stephan"
    assert payload["count"] == 3


def test_policies_game_rejects_oracle_flag(theory_file, capsys):
    code, _, err = run(capsys, "policies", "--game", "--oracle", theory_file(EX1))
    assert code == 3
    assert "--game" in err


def test_policies_oracle_agreement(theory_file, capsys):
    code, out, _ = run(capsys, "policies", "--oracle", theory_file(EX1))
    assert code == 0
    assert out.splitlines()[0] == "policy 1:"


def test_policies_oracle_mismatch(theory_file, capsys, monkeypatch):
    monkeypatch.setattr(
        cli, "brute_equilibrium_policies",
        lambda binder, matrix, m, cap: OracleResult(frozenset(), {}),
    )
    code, _, err = run(capsys, "policies", "--oracle", theory_file(EX1))
    assert code == 4
    assert "oracle mismatch" in err
    assert "elimination only: x(z=0;lambda, z=1;lambda)" in err


def test_policies_trace_goes_to_stderr(theory_file, capsys):
    code, out, err = run(capsys, "policies", "--trace", theory_file(EX1))
    assert code == 0
    trace_lines = [line for line in err.splitlines() if line.startswith("QEM ")]
    assert len(trace_lines) == 4
    assert "QEM " not in out


def test_policies_figures(theory_file, capsys, tmp_path):
    figdir = tmp_path / "figs"
    code, _, _ = run(capsys, "policies", "--figures", str(figdir), theory_file(EX1))
    assert code == 0
    assert (figdir / "policy_01.png").exists()


def test_policies_with_conditioning(theory_file, capsys):
    code, out, _ = run(capsys, "policies", "--at", "z=0",
                       theory_file("exists x. (z -> x) & (z | ~z).\n"))
    assert code == 0
    assert out == "policy 1:\nx\n  0: lambda\n"


def test_oracle_command(theory_file, capsys):
    code, out, _ = run(capsys, "oracle", theory_file(EX1))
    assert code == 0
    assert out.splitlines()[0] == "policy 1: x(z=0;lambda, z=1;lambda)"
    assert "  model: x=0, z=0" in out
    assert "  model: x=1, z=1" in out
    code, out, _ = run(capsys, "oracle", theory_file(EX1_UNSAT))
    assert code == 1
    assert out == "UNSAT (no equilibrium policy)\n"


def test_oracle_json(theory_file, capsys):
    code, out, _ = run(capsys, "oracle", "--format", "json", theory_file(EX1))
    assert code == 0
    payload = json.loads(out)
    assert payload["count"] == 1
    assert payload["witness"][0]["models"] == ["x=0, z=0", "x=1, z=1"]


def test_compare_divergence(theory_file, capsys):
    code, out, _ = run(capsys, "compare", theory_file(WITNESS))
    assert code == 5
    lines = out.splitlines()
    assert lines[0] == "fandinno: SAT (1 policies)"
    assert lines[1] == "stephan: SAT (3 policies)"
    assert sum(1 for line in lines if line.startswith("only stephan: ")) == 2
    code, out, _ = run(capsys, "compare", "--format", "json", theory_file(WITNESS))
    assert code == 5
    payload = json.loads(out)
    assert payload["fandinno"]["sat"] is True
    assert len(payload["only_stephan"]) == 2
    assert payload["only_fandinno"] == []


def test_compare_agreement(theory_file, capsys):
    code, out, _ = run(capsys, "compare", theory_file("exists x. x.\n"))
    assert code == 0
    assert out.splitlines()[0] == "fandinno: SAT (1 policies)"


def test_enumerate(theory_file, capsys):
    code, out, _ = run(capsys, "enumerate", theory_file(EX1))
    assert code == 0
    assert out.count("policy ") == 4
    code, out, _ = run(capsys, "enumerate", "--ternary", "--format", "json", theory_file(EX1))
    assert code == 0
    assert json.loads(out)["count"] == 27
    code, out, _ = run(capsys, "enumerate", "--format", "dot", theory_file(EX1))
    assert code == 0
    assert out.startswith("digraph")


def test_report_writes_artifacts(theory_file, capsys, tmp_path):
    outdir = tmp_path / "report"
    code, out, _ = run(capsys, "report", "-o", str(outdir), theory_file(EX1))
    assert code == 0
    listed = out.splitlines()
    assert listed == sorted(listed)
    assert {p.name for p in outdir.iterdir()} == {"policy_01.png", "summary.csv", "report.json"}
    payload = json.loads((outdir / "report.json").read_text())
    assert payload["qg3"] == "1"
    assert payload["models"] == ["x=0, z=0", "x=1, z=1"]
    assert len(payload["policies"]) == 1
    assert payload["noncrisp"] == ["x=1/2, z=0"]
    assert payload["figures"] == ["policy_01.png"]
    rows = (outdir / "summary.csv").read_text().splitlines()
    assert rows[0] == "section,item,value"
    assert "value,qg3,1" in rows
    assert "qasp,fandinno_sat,true" in rows
    assert "qasp,divergent,true" in rows
    assert any(row.startswith("figure,1,policy_01.png") for row in rows)


def test_report_is_deterministic(theory_file, capsys, tmp_path):
    first, second = tmp_path / "r1", tmp_path / "r2"
    src = theory_file(EX1)
    run(capsys, "report", "-o", str(first), src)
    run(capsys, "report", "-o", str(second), src)
    for name in ("summary.csv", "report.json", "policy_01.png"):
        assert (first / name).read_bytes() == (second / name).read_bytes()


def test_repeated_runs_are_byte_identical(theory_file, capsys):
    src = theory_file(WITNESS)
    outputs = set()
    for _ in range(2):
        code, out, _ = run(capsys, "policies", "--format", "json", src)
        assert code == 0
        outputs.add(out)
    assert len(outputs) == 1


def test_env_cap_override(theory_file, capsys, monkeypatch):
    monkeypatch.setenv("QEP_MAX_VARS", "1")
    code, _, err = run(capsys, "policies", theory_file(EX1))
    assert code == 3
    assert "cap is 1" in err
    monkeypatch.setenv("QEP_MAX_VARS", "two")
    code, _, err = run(capsys, "policies", theory_file(EX1))
    assert code == 3
    assert "QEP_MAX_VARS" in err


def test_stdin_source(capsys, monkeypatch):
    monkeypatch.setattr(sys, "stdin", io.StringIO(EX1))
    code, out, _ = run(capsys, "eval", "-")
    assert code == 0
    assert out == "qg3: 1\n"


def test_console_script_entry_point(theory_file):
    import shutil
    import subprocess

    exe = shutil.which("qep")
    if exe is None:
        pytest.skip("console script not installed")
    proc = subprocess.run(
        [exe, "eval", "--at", "x=1/2, z=0", theory_file(EX1_MATRIX)],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert proc.stdout == "g3: 1\n"


def test_argparse_exit_paths(capsys):
    assert cli.main([]) == 2
    capsys.readouterr()
    assert cli.main(["--help"]) == 0
    capsys.readouterr()
    assert cli.main(["policies", "--format", "bogus", "x.qt"]) == 2
    capsys.readouterr()
