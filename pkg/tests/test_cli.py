import json
import subprocess
import sys

import pytest

from doodlekit.cli import build_parser, load_config, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_genus_of_hopf(capsys):
    assert run(capsys, "genus", "family:hopf") == (0, "1\n", "")


def test_d4_fixtures_are_unequal(capsys):
    code, out, _ = run(capsys, "eq", "fixtures/d4.1.pd", "fixtures/d4.2.pd")
    assert code == 1 and out == "not equal\n"


def test_eq_after_reduction(capsys, tmp_path):
    f = tmp_path / "curl.gauss"
    f.write_text("1+ 1-\n")
    code, out, _ = run(capsys, "eq", str(f), "family:trivial")
    assert code == 0 and out == "equal\n"
    code, _, _ = run(capsys, "eq", "--detour-only", str(f), "family:trivial")
    assert code == 1


def test_reduce_prints_trace(capsys, tmp_path):
    f = tmp_path / "curl.gauss"
    f.write_text("1+ 1-\n")
    code, out, _ = run(capsys, "reduce", str(f))
    assert code == 0
    assert out.splitlines() == ["O", "# 1: H1- at crossings [0]"]


def test_canon_stdin(capsys, monkeypatch):
    import io

    monkeypatch.setattr(sys, "stdin", io.StringIO("X(a,b,a,b)\n"))
    code, out, _ = run(capsys, "canon", "-")
    assert code == 0 and out.startswith("dc1-")
    code2, out2, _ = run(capsys, "canon", "family:hopf")
    assert out2 == out


def test_parse_errors(capsys, tmp_path):
    f = tmp_path / "bad.gauss"
    f.write_text("1+ 2+\n")
    code, _, err = run(capsys, "genus", str(f))
    assert code == 3 and "cannot parse" in err
    assert run(capsys, "genus", str(tmp_path / "missing.pd"))[0] == 3
    assert run(capsys, "genus", "family:nonesuch")[0] == 3


def test_usage_error(capsys):
    with pytest.raises(SystemExit) as info:
        main(["census"])
    assert info.value.code == 2


def test_census_budget_exit(capsys, tmp_path):
    code, _, err = run(capsys, "census", "6", "--budget", "0")
    assert code == 4 and "budget exhausted" in err


def test_census_store(capsys, tmp_path):
    store = tmp_path / "s.jsonl"
    code, out, _ = run(capsys, "census", "3", "--store", str(store))
    assert code == 0 and "10 records, 10 new" in out
    code, out, _ = run(capsys, "census", "3", "--store", str(store))
    assert "0 new" in out


def test_census_stdout(capsys):
    code, out, _ = run(capsys, "census", "2")
    lines = [json.loads(x) for x in out.splitlines()]
    assert code == 0 and len(lines) == 2


def test_va_and_planarize(capsys):
    assert run(capsys, "va", "fixture:fig20")[:2] == (0, "1\n")
    code, out, _ = run(capsys, "planarize", "family:borromean:3")
    assert code == 0 and out.endswith("# virtual crossings: 0\n")


def test_render(capsys):
    code, out, _ = run(capsys, "render", "family:hopf", "--svg")
    assert code == 0 and out.startswith("<svg") and 'class="virtual-crossing"' in out
    code, out, _ = run(capsys, "render", "family:borromean:3", "--dot")
    assert out.count(" -- ") == 12


def test_identities(capsys):
    code, out, _ = run(capsys, "identities", "family:poppy")
    assert code == 0 and "FAILED" not in out


def test_family_formats(capsys):
    code, out, _ = run(capsys, "family", "hopf", "--out", "gauss")
    assert code == 0 and len(out.splitlines()) == 2
    code, out, _ = run(capsys, "family", "borromean", "3")
    assert json.loads(out)["version"] == 1


def test_confluence(capsys):
    code, out, _ = run(capsys, "confluence", "--random", "50", "--seed", "3")
    assert code == 0 and "ldc without urp: 0" in out
    code, out, _ = run(capsys, "confluence", "--doodle-seed", "fixture:kishino", "--depth", "3")
    assert code == 0 and "roots 1" in out


def test_verify_claims(capsys):
    code, out, _ = run(capsys, "verify-claims")
    assert code == 0
    assert out.count("PASS") == 10 and "FAIL" not in out


def test_config_precedence(tmp_path, monkeypatch):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"store": "from-file", "budget_secs": 1, "workers": 2}))
    parser = build_parser()
    monkeypatch.setenv("DOODLE_CONFIG", str(cfg))
    monkeypatch.delenv("DOODLE_STORE", raising=False)
    monkeypatch.delenv("DOODLE_BUDGET_SECS", raising=False)
    assert load_config(parser.parse_args(["census", "3"]))["store"] == "from-file"
    monkeypatch.setenv("DOODLE_STORE", "from-env")
    monkeypatch.setenv("DOODLE_BUDGET_SECS", "5")
    got = load_config(parser.parse_args(["census", "3"]))
    assert (got["store"], got["budget_secs"], got["workers"]) == ("from-env", 5.0, 2)
    got = load_config(parser.parse_args(["census", "3", "--store", "flag", "--workers", "4"]))
    assert (got["store"], got["workers"]) == ("flag", 4)


def test_console_script_is_deterministic():
    cmd = [sys.executable, "-m", "doodlekit.cli", "planarize", "family:gyro:3", "--seed", "5"]
    a = subprocess.run(cmd, capture_output=True, text=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, text=True, check=True).stdout
    assert a == b and a.startswith("X(")
