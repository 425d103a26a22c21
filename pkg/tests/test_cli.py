"""Command-line interface: outputs, exit codes and file handling."""
import json
import os

import pytest
from click.testing import CliRunner

from divides.cli import EXIT_INVALID, EXIT_IO, EXIT_OK, EXIT_TRACE, atomic_write, main
from divides.corpus import PACKAGE_CORPUS
from divides.dynkin import parse_dynkin_text


@pytest.fixture
def run():
    runner = CliRunner()

    def invoke(*args, env=None):
        return runner.invoke(main, list(args), env=env, catch_exceptions=False)
    return invoke


def test_validate_ok(run):
    r = run("validate", "corpus/d5.dtf")
    assert r.exit_code == EXIT_OK
    assert "delta=3 r=2 g=2" in r.stdout
    assert "mu=5" in r.stdout


def test_validate_invalid(run, tmp_path):
    p = tmp_path / "two.dtf"
    p.write_text("branch b0:\nbranch b1:\nboundary: b0.s b0.e b1.s b1.e\n")
    r = run("validate", str(p))
    assert r.exit_code == EXIT_INVALID
    assert "FAIL connectivity" in r.stdout


def test_missing_file(run, tmp_path):
    r = run("validate", str(tmp_path / "nope.dtf"))
    assert r.exit_code == EXIT_IO
    assert "cannot read" in r.stderr


def test_parse_error_exit(run, tmp_path):
    p = tmp_path / "bad.dtf"
    p.write_text("branch b0: c0.0 c0.0\norient c0 +\nboundary: b0.s b0.e\n")
    r = run("invariants", str(p))
    assert r.exit_code == EXIT_IO
    assert "slot reuse" in r.stderr


def test_a2_charpoly(run):
    r = run("invariants", "corpus/a2.dtf", "--charpoly")
    assert r.exit_code == EXIT_OK
    assert r.stdout.splitlines()[-1] == "1 -1 1"
    assert "lefschetz=0" in r.stdout


def test_d5_outputs(run):
    r = run("invariants", "corpus/d5.dtf", "--charpoly", "--gram", "--monodromy")
    assert r.exit_code == EXIT_OK
    lines = r.stdout.splitlines()
    assert "1 -1 0 0 1 -1" in lines
    assert "euler=-4 genus=2 boundary=2 orientable=True" in lines


def test_dynkin_stdout(run):
    r = run("invariants", "corpus/d5.dtf", "--dynkin", "-")
    diagram = parse_dynkin_text("\n".join(l for l in r.stdout.splitlines() if l[:2] in ("v ", "e ")))
    assert [v[1] for v in diagram.vertices] == ["red", "white", "white", "white", "blue"]
    assert len(diagram.edges) == 6
    assert all(w == 1 for _, _, w in diagram.edges)


def test_file_outputs(run, tmp_path):
    out = {k: tmp_path / f"d5.{k}" for k in ("surface", "dynkin", "svg")}
    r = run("invariants", "corpus/d5.dtf", "--surface", str(out["surface"]), "--dynkin", str(out["dynkin"]),
            "--svg", str(out["svg"]))
    assert r.exit_code == EXIT_OK
    assert out["surface"].read_text().startswith("# vertices 16 strips 20")
    assert out["svg"].read_text().startswith("<svg")
    assert parse_dynkin_text(out["dynkin"].read_text()).vertices


def test_sign_anchor(run):
    a = run("invariants", "corpus/d5.dtf", "--charpoly", "--sign-anchor", "3 -")
    b = run("invariants", "corpus/d5.dtf", "--charpoly")
    assert a.exit_code == EXIT_OK
    assert a.stdout.splitlines()[-1] == b.stdout.splitlines()[-1]
    assert run("invariants", "corpus/d5.dtf", "--sign-anchor", "x").exit_code == EXIT_IO


def test_trace_implicit(run, tmp_path):
    out = tmp_path / "xy.dtf"
    r = run("trace", "x*y", "--radius", "1", "--out", str(out))
    assert r.exit_code == EXIT_OK
    assert "delta=1 r=2" in r.stdout
    assert run("validate", str(out)).exit_code == EXIT_OK
    geom = json.loads((tmp_path / "xy.dtf.geom.json").read_text())
    assert geom["radius"] == 1.0


def test_trace_param_with_set(run):
    r = run("trace", "--param", "T(4,t)/8", "s*T(6,t)/32 + T(7,t)/64", "--set", "s=1", "--radius", "0.2")
    assert r.exit_code == EXIT_OK
    assert r.stdout == (PACKAGE_CORPUS / "fig9.dtf").read_text().split("\n", 1)[1]


def test_trace_errors(run):
    assert run("trace", "t^2", "--param", "t", "t").exit_code == EXIT_IO
    assert run("trace", "x*(").exit_code == EXIT_IO
    assert run("trace", "x*y", "--set", "oops").exit_code == EXIT_IO
    r = run("trace", "--param", "t^2", "t^3")
    assert r.exit_code == EXIT_TRACE
    assert "immersion violated" in r.stderr


def test_render(run, tmp_path):
    out = tmp_path / "xy.dtf"
    run("trace", "x*y", "--out", str(out))
    svg = tmp_path / "xy.svg"
    r = run("render", str(out) + ".geom.json", "--out", str(svg), "--expr", "x*y")
    assert r.exit_code == EXIT_OK
    text = svg.read_text()
    assert text.count("<polyline") == 2
    assert "&#8722;" in text and ">+<" in text
    assert run("render", str(tmp_path / "missing.json"), "--out", str(svg)).exit_code == EXIT_IO


def test_corpus_default(run, tmp_path):
    report = tmp_path / "report.json"
    r = run("corpus", "--json", str(report))
    assert r.exit_code == EXIT_OK
    data = json.loads(report.read_text())
    assert data["ok"]
    assert list(data["entries"]) == sorted(data["entries"])


def test_corpus_deterministic(run, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    run("corpus", "--json", str(a))
    run("corpus", "--json", str(b))
    assert a.read_bytes() == b.read_bytes()


def test_corpus_wrong_expectation(run, tmp_path):
    (tmp_path / "a2.dtf").write_text((PACKAGE_CORPUS / "a2.dtf").read_text())
    m = tmp_path / "m.ini"
    m.write_text("[good]\nkind = dtf\npath = a2.dtf\nexpect = 1 1 1\n\n"
                 "[broken]\nkind = dtf\npath = a2.dtf\nexpect = 2 1 1\n")
    r = run("corpus", str(m))
    assert r.exit_code == EXIT_INVALID
    assert "FAIL broken" in r.stdout
    assert "PASS good" in r.stdout


def test_corpus_empty(run, tmp_path):
    m = tmp_path / "empty.ini"
    m.write_text("# nothing here\n")
    report = tmp_path / "r.json"
    r = run("corpus", str(m), "--json", str(report))
    assert r.exit_code == EXIT_OK
    assert r.stdout == ""
    assert json.loads(report.read_text()) == {"entries": {}, "ok": True}


def test_corpus_env_directory(run, tmp_path):
    (tmp_path / "a1.dtf").write_text((PACKAGE_CORPUS / "a1.dtf").read_text())
    (tmp_path / "manifest.ini").write_text("[only]\nkind = dtf\npath = a1.dtf\nexpect = 1 2 0\n")
    r = run("corpus", env={"DIVIDES_CORPUS": str(tmp_path)})
    assert r.exit_code == EXIT_OK
    assert r.stdout == "PASS only: delta=1 r=2 g=0 mu=1\n"
    r = run("validate", "corpus/a1.dtf", env={"DIVIDES_CORPUS": str(tmp_path)})
    assert r.exit_code == EXIT_OK


def test_atomic_write_leaves_no_partial_file(tmp_path):
    target = tmp_path / "out.txt"
    target.write_text("old")
    with pytest.raises(TypeError):
        atomic_write(target, 12345)     # not text: the write fails
    assert target.read_text() == "old"
    assert os.listdir(tmp_path) == ["out.txt"]
    atomic_write(target, "new")
    assert target.read_text() == "new"
