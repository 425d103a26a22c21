"""Manifest loading, the invariant suite and run reports."""
import pytest

from divides.corpus import (PACKAGE_CORPUS, gram_digest, invariant_checks, load_manifest, materialize, run_entry,
                            run_manifest)
from divides.divide import parse_dtf
from divides.monodromy import compute

from strategies import corpus_divide

ENTRIES = {e.name: e for e in load_manifest(PACKAGE_CORPUS / "manifest.ini")}


def test_manifest_entries():
    assert set(ENTRIES) >= {"a1", "a2", "d5", "fig1", "fig9", "fig11", "d5_traced", "fig9_param",
                            "family_plus", "family_minus"}
    assert ENTRIES["fig9_param"].params == {"s": 1}
    assert ENTRIES["fig9_param"].radius == pytest.approx(0.2)
    assert ENTRIES["fig11"].singularity is False
    assert ENTRIES["d5"].expect == (3, 2, 2)


def test_unknown_kind(tmp_path):
    m = tmp_path / "m.ini"
    m.write_text("[x]\nkind = nonsense\n")
    with pytest.raises(ValueError, match="unknown kind"):
        load_manifest(m)


def test_bundled_dtf_equals_fresh_trace():
    """The shipped fig9 file is what the parametric tracer produces today."""
    traced = materialize(ENTRIES["fig9_param"]).divide
    assert traced == corpus_divide("fig9")


@pytest.mark.parametrize("name", ["a2", "d5", "fig11"])
def test_invariant_suite_passes(name):
    checks = invariant_checks(compute(corpus_divide(name)), singularity=name != "fig11")
    assert all(c.passed for c in checks), [c for c in checks if not c.passed]
    names = {c.name for c in checks}
    assert "lefschetz" in names if name != "fig11" else "lefschetz" not in names


def test_invariant_suite_catches_bad_gram():
    md = compute(corpus_divide("d5"))
    G = [list(r) for r in md.gram]
    G[1][2], G[2][1] = 1, -1           # two white cycles made to intersect
    broken = type(md)(md.signed, md.surface, md.cycles, G, md.monodromy, md.char_poly, md.lefschetz)
    failed = {c.name for c in invariant_checks(broken) if not c.passed}
    assert "gram color blocks" in failed


def test_entry_error_is_reported(tmp_path):
    (tmp_path / "bad.dtf").write_text("branch b0: c0.0\n")
    (tmp_path / "m.ini").write_text("[bad]\nkind = dtf\npath = bad.dtf\n")
    report = run_manifest(tmp_path / "m.ini")
    assert not report.ok
    assert report.entries[0].error.startswith("DTFError")
    assert report.summary().startswith("FAIL bad: DTFError")


def test_report_is_order_independent(tmp_path):
    for name in ("a1", "a2"):
        (tmp_path / f"{name}.dtf").write_text((PACKAGE_CORPUS / f"{name}.dtf").read_text())
    (tmp_path / "m1.ini").write_text("[a1]\nkind = dtf\npath = a1.dtf\n\n[a2]\nkind = dtf\npath = a2.dtf\n")
    (tmp_path / "m2.ini").write_text("[a2]\nkind = dtf\npath = a2.dtf\n\n[a1]\nkind = dtf\npath = a1.dtf\n")
    assert run_manifest(tmp_path / "m1.ini").to_json() == run_manifest(tmp_path / "m2.ini").to_json()


def test_gram_digest_depends_on_entries():
    assert gram_digest([[0, 1], [-1, 0]]) != gram_digest([[0, -1], [1, 0]])
    assert len(gram_digest([])) == 64


def test_split_and_signs_checks():
    rep = run_entry(ENTRIES["d5"])
    names = {c.name: c.passed for c in rep.checks}
    assert names["region split"] and names["expected delta r g"]
    rep = run_entry(ENTRIES["family_minus"])
    names = {c.name: c.passed for c in rep.checks}
    assert names["region signs"] and names["coloring matches f"]


def test_parse_bundled_headers():
    for name in ("a1", "a2", "d5", "fig1", "fig9", "fig11"):
        text = (PACKAGE_CORPUS / f"{name}.dtf").read_text()
        assert text.startswith("# ")
        assert parse_dtf(text) == corpus_divide(name)
