import io
import json
import subprocess
import sys

import pytest

from combinators.cli import run


def call(*argv, stdin=None, monkeypatch=None):
    out, err = io.StringIO(), io.StringIO()
    if stdin is not None:
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_parse_roundtrip_and_notation():
    assert call("parse", "S(KS)K") == (0, "S(KS)K\n", "")
    assert call("parse", "s[k[s]][k]") == (0, "S(KS)K\n", "")
    code, out, _ = call("parse", "S(KS)K", "--notation", "bracket")
    assert code == 0 and out == "s[k[s]][k]\n"
    assert call("parse", "CKa", "--historical-c")[1] == "KKa\n"


def test_parse_error_exit_one():
    code, out, err = call("parse", "S(K")
    assert code == 1 and out == "" and err.startswith("error:")


def test_unknown_subcommand_and_bad_flag():
    assert call("frobnicate")[0] == 1
    assert call("reduce", "Kab", "--max-steps", "lots")[0] == 1
    assert call("reduce", "Kab", "--strategy", "sideways")[0] == 1


def test_reduce_transposer_example():
    code, out, _ = call("reduce", "S(S(KS)(S(KK)S))(KK) f g x")
    assert code == 0
    assert out.splitlines() == ["status=NormalForm steps=10 size=3 max_size=13", "fxg"]


def test_reduce_limits_and_require_normal():
    omega = "SII(SII)"
    code, out, _ = call("reduce", omega, "--rules", "ski", "--max-steps", "5")
    assert code == 0 and out.startswith("status=StepLimit steps=5")
    assert call("reduce", omega, "--rules", "ski", "--max-steps", "5", "--require-normal")[0] == 2
    code, out, _ = call("reduce", omega, "--rules", "ski", "--strategy", "ri", "--detect-cycles")
    assert out.startswith("status=Cycle steps=3")


def test_reduce_trace_is_json_lines():
    code, out, _ = call("reduce", "SKKa", "--trace")
    lines = out.splitlines()
    records = [json.loads(x) for x in lines[:-2]]
    assert records[0]["header"]["strategy"] == "leftmost-outermost"
    steps = [r for r in records[1:-1] if r["step"] > 0]
    assert [(r["rule"], r["path"], r["term"]) for r in steps] == [("S", "", "Ka(Ka)"), ("K", "", "a")]
    assert records[-1] == {"size": 1, "status": "NormalForm", "steps": 2, "term": "a"}
    assert lines[-1] == "a"


def test_reduce_from_stdin_and_file(monkeypatch, tmp_path):
    assert call("reduce", stdin="Kab\n", monkeypatch=monkeypatch)[1].endswith("\na\n")
    assert call("reduce", "-", stdin="Kab", monkeypatch=monkeypatch)[1].endswith("\na\n")
    f = tmp_path / "t.txt"
    f.write_text("SKKx\n")
    assert call("reduce", "-f", str(f))[1].endswith("\nx\n")
    assert call("reduce", "-f", str(tmp_path / "missing"))[0] == 1


def test_reduce_with_rules_file(tmp_path):
    rules = tmp_path / "b.rules"
    rules.write_text("# composition\nB: Babc = a(bc)\nI: Ia = a\n")
    code, out, _ = call("reduce", "B I f x", "--rules", str(rules))
    assert code == 0 and out.splitlines()[-1] == "fx"
    bad = tmp_path / "bad.rules"
    bad.write_text("Ka = b\n")
    assert call("reduce", "Kab", "--rules", str(bad))[0] == 1


def test_config_file_sets_defaults(tmp_path):
    cfg = tmp_path / "c.cfg"
    cfg.write_text("max_steps = 3  # tight\n")
    code, out, _ = call("--config", str(cfg), "reduce", "SII(SII)", "--rules", "ski")
    assert out.startswith("status=StepLimit steps=3")
    code, out, _ = call("--config", str(cfg), "reduce", "SII(SII)", "--rules", "ski",
                        "--max-steps", "4")
    assert out.startswith("status=StepLimit steps=4")
    bad = tmp_path / "bad.cfg"
    bad.write_text("colour = blue\n")
    assert call("--config", str(bad), "reduce", "Kab")[0] == 1


def test_compile():
    assert call("compile", "\\f x y. f y x", "--optimize")[1] == "S(S(KS)(S(KK)S))(KK)\n"
    assert call("compile", "\\x. x")[1] == "I\n"
    assert call("compile", "\\x. x", "--pure-sk")[1] == "SKK\n"
    assert call("compile", "\\x. y")[0] == 1


def test_search_builtin_and_file(tmp_path):
    code, out, _ = call("search", "--spec", "compose", "--max-size", "5")
    assert code == 0 and "S(KS)K" in out
    spec = tmp_path / "k.spec"
    spec.write_text("2\nv1\n")
    code, out, _ = call("search", "--spec-file", str(spec), "--max-size", "3")
    assert code == 0 and "K" in out.split()
    assert call("search", "--spec", "transpose", "--max-size", "4")[0] == 2
    assert call("search", "--spec", "nonsense")[0] == 1


def test_enumerate():
    code, out, _ = call("enumerate", "--size", "3")
    assert code == 0 and len(out.splitlines()) == 16
    assert call("enumerate", "--size", "9", "--count")[1] == "732160\n"
    assert call("enumerate", "--size", "2", "--basis", "SKI", "--count")[1] == "9\n"


def test_multiway_and_dot(tmp_path):
    dot = tmp_path / "g.dot"
    code, out, _ = call("multiway", "K(Ia)b", "--rules", "ski", "--dot", str(dot),
                        "--check-confluence")
    assert code == 0
    assert "normal_form a" in out and out.splitlines()[-1] == "Confluent a"
    text = dot.read_text()
    assert text.startswith("digraph") and text.count("->") == 4


def test_multiway_inconclusive_exit_two():
    code, out, _ = call("multiway", "SSK(S(K(SS(S(SSK))))K)g", "--max-depth", "4",
                        "--check-confluence")
    assert code == 2 and out.splitlines()[-1].startswith("Inconclusive")


def test_census_csv():
    code, out, _ = call("census", "--sizes", "1..3")
    assert code == 0
    rows = out.split("\r\n")
    assert rows[0].startswith("size,")
    assert len([r for r in rows if r]) == 4


def test_church():
    assert call("church", "--plus", "2", "3")[1] == "plus 2 3 = 5\n"
    assert call("church", "--times", "2", "3")[1] == "times 2 3 = 6\n"
    code, out, _ = call("church", "--encode", "2")
    assert code == 0 and len(out.splitlines()) == 2
    assert call("church", "--decode", "SII(SII)", "--max-steps", "50")[0] == 2


def test_deterministic_output():
    argv = ["census", "--sizes", "5..6", "--sample", "40", "--seed", "7"]
    assert call(*argv) == call(*argv)


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "combinators", "reduce", "Kab"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and proc.stdout.splitlines()[-1] == "a"
