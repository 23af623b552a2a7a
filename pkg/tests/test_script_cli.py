import json
import subprocess
import sys

import pytest

from zeckauto import automata as au
from zeckauto.cli import main
from zeckauto.script import ScriptError, Session, bundled_script, run_script

SEC5 = '''reg end0 msd_fib "(0|1)*0":
reg end01 msd_fib "1|((0|1)*01)":
def lower "?msd_fib Em $end0(m) & n=m+1":
def lower0 "?msd_fib $lower(n) | n=0":
def upper "?msd_fib Em $end01(m) & n=m+1":
def upper0 "?msd_fib $upper(n) | n=0":
'''


def test_section_block_gives_six_automata(tmp_path):
    s = Session(out_dir=tmp_path)
    assert s.run(SEC5) == ["end0", "end01", "lower", "lower0", "upper", "upper0"]
    assert all(au.is_leading_zero_closed(s.env[n]) for n in s.names())
    man = json.loads((tmp_path / "manifest.json").read_text())
    assert man["order"] == s.names()
    for n in s.names():
        assert (tmp_path / f"{n}.json").exists() and (tmp_path / f"{n}.dot").exists()


def test_tribonacci_block(trib):
    assert trib.names() == ["tend0", "tend01", "tend011", "aa", "bb", "cc", "aaplusbb", "aaplusbbpluscc"]
    assert trib.describe("aaplusbbpluscc") == "finite: {0, 1, 2, 3, 4, 5, 6, 8, 10, 12, 19}"


def test_describe_examples(fib):
    assert fib.describe("thm31i") == "finite: {0, 1, 3}"
    assert fib.describe("uplusu").startswith("infinite; complement infinite; automaton: 12 states (trimmed)")
    assert fib.describe("count2upp").startswith("linear representation of rank")
    s = Session()
    s.run('def nothing "?msd_fib n < 0"')
    assert s.describe("nothing") == "finite: {}"
    with pytest.raises(ScriptError):
        s.describe("missing")


def test_duplicate_def_is_an_error():
    s = Session()
    with pytest.raises(ScriptError) as e:
        s.run(SEC5 + 'def lower "?msd_fib n=1":\n')
    assert e.value.line == 7


def test_error_positions():
    s = Session()
    with pytest.raises(ScriptError) as e:
        s.run('\n\ndef bad "?msd_fib E x (x":')
    assert e.value.line == 3 and e.value.column == len('def bad "?msd_fib E x (x') + 1
    with pytest.raises(ScriptError) as e:
        Session().run('reg r msd_fib "((":')
    assert e.value.line == 1 and e.value.column == len('reg r msd_fib "((') + 1
    with pytest.raises(ScriptError, match="unknown|not defined|no automaton|undefined"):
        Session().run('def x "?msd_fib $nosuch(n)"')
    with pytest.raises(ScriptError):
        Session().run('frobnicate x "y"')
    s = Session()
    s.run('reg t msd_trib "(0|1)*0"')
    with pytest.raises(ScriptError, match="system"):
        s.run('def bad "?msd_fib $t(n)"')


def test_comments_and_blank_lines():
    s = Session()
    assert s.run("# a comment\n\n" + 'def z "?msd_fib n=0";') == ["z"]


def test_save_and_load_round_trip(tmp_path):
    s = run_script_text(tmp_path, bundled_script("wythoff"))
    t = Session.load(tmp_path)
    assert t.names() == s.names()
    for n in s.env:
        assert au.equivalent(s.env[n], t.env[n])
    from zeckauto.counting import evaluate
    for n, rep in s.counters.items():
        assert [evaluate(rep, k) for k in range(60)] == [evaluate(t.counters[n], k) for k in range(60)]


def run_script_text(out, text):
    path = out / "script.txt"
    path.write_text(text)
    return run_script(path, out_dir=out)


def test_runs_are_byte_identical(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    a.mkdir(), b.mkdir()
    run_script_text(a, bundled_script("wythoff"))
    run_script_text(b, bundled_script("wythoff"))
    names = sorted(p.name for p in a.iterdir() if p.name != "script.txt")
    assert names == sorted(p.name for p in b.iterdir() if p.name != "script.txt")
    for n in names:
        assert (a / n).read_bytes() == (b / n).read_bytes(), n


def test_unreadable_script():
    with pytest.raises(ScriptError):
        run_script("/nonexistent/script.txt")


# CLI


def test_cli_run_describe_export_enumerate(tmp_path, capsys):
    out = str(tmp_path / "out")
    assert main(["--out", out, "run", "wythoff"]) == 0
    assert "wrote 24 entries" in capsys.readouterr().out
    assert main(["--out", out, "describe", "thm37i"]) == 0
    assert capsys.readouterr().out.strip() == "thm37i: finite: {0, 1, 2, 3, 4, 6, 9}"
    assert main(["--out", out, "describe", "uplusu"]) == 0
    assert "uplusu.dot" in capsys.readouterr().out
    assert main(["--out", out, "enumerate", "thm35i", "--limit", "100"]) == 0
    assert capsys.readouterr().out.split() == ["0", "1", "2", "4", "7", "12", "20", "33", "54", "88"]
    assert main(["--out", out, "enumerate", "uplusu", "--limit", "30", "--complement"]) == 0
    assert capsys.readouterr().out.split()[:5] == ["0", "1", "2", "3", "5"]
    assert main(["--out", out, "export", "--dot", "end0"]) == 0
    assert capsys.readouterr().out.startswith('digraph "end0"')
    assert main(["--out", out, "export", "--json", "lower"]) == 0
    a = au.Automaton.from_json(capsys.readouterr().out)
    assert au.enumerate_values(a, 12) == [1, 3, 4, 6, 8, 9, 11, 12]
    assert main(["--out", out, "export", "count2upp"]) == 0
    assert json.loads(capsys.readouterr().out)["rank"] > 0


def test_cli_script_option(capsys):
    assert main(["enumerate", "aa", "--script", "tribonacci", "--limit", "12"]) == 0
    assert capsys.readouterr().out.split() == ["1", "3", "5", "7", "8", "10", "12"]


def test_cli_errors_exit_nonzero(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text(SEC5 + 'def lower "?msd_fib n=1":\n')
    assert main(["--out", str(tmp_path / "o"), "run", str(bad)]) == 2
    assert "line 7" in capsys.readouterr().err
    assert main(["--out", str(tmp_path / "nothing"), "describe"]) == 2
    assert main(["--out", str(tmp_path / "o2"), "run", "no-such-script"]) == 2


def test_cli_env_fallbacks(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("ZECKAUTO_OUT", str(tmp_path / "envout"))
    monkeypatch.setenv("ZECKAUTO_ADDER_BOUND", "0")
    from zeckauto.cli import build_parser
    args = build_parser().parse_args(["paperbench"])
    assert args.adder_bound == 0
    assert main(["run", "tribonacci"]) == 0
    assert (tmp_path / "envout" / "manifest.json").exists()
    monkeypatch.setenv("ZECKAUTO_ADDER_BOUND", "x")
    with pytest.raises(SystemExit):
        build_parser()


def test_bench_forced_bound_reports_failure(capsys):
    jsonschema = pytest.importorskip("jsonschema")
    from zeckauto import bench
    assert main(["--adder-bound", "0", "paperbench", "--json"]) == 1
    report = json.loads(capsys.readouterr().out)
    jsonschema.validate(report, bench.report_schema())
    assert not report["passed"]
    adder = [c for c in report["criteria"] if c["id"] == 10][0]
    assert not adder["passed"] and "fails validation" in adder["detail"]


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "zeckauto", "--help"], capture_output=True, text=True)
    assert r.returncode == 0 and "paperbench" in r.stdout
