"""Divide text format: parsing, errors, canonical form and round trips."""
import pytest
from hypothesis import given, strategies as st

from divides.divide import DTFError, parse_dtf, serialize_dtf
from divides.regions import validate

from strategies import CORPUS_DTF, chord_divides, corpus_divide, relabel

A2 = """\
branch b0: c0.0 c0.1
orient c0 -
boundary: b0.s b0.e
"""


def test_parse_a2():
    d = parse_dtf(A2)
    assert (d.delta, d.r, d.mu) == (1, 1, 2)
    assert d.orient == {"c0": -1}
    assert d.endpoint_tokens == ("b0.s", "b0.e")
    assert d.n_darts == 6   # tip-crossing, loop, crossing-tip


def test_comments_and_blank_lines_ignored():
    text = "# header\n\n" + A2.replace("orient c0 -", "orient c0 -   # a comment")
    assert parse_dtf(text) == parse_dtf(A2)


@pytest.mark.parametrize("text, message", [
    ("branch b0: c0.0 c0.0\norient c0 +\nboundary: b0.s b0.e\n", "slot reuse"),
    ("branch b0: c0.0\norient c0 +\nboundary: b0.s b0.e\n", "dangling crossing id"),
    ("branch b0: c0.0 c0.1\nboundary: b0.s b0.e\n", "dangling crossing id"),
    ("branch b0: c0.0 c0.1\norient c0 +\norient c9 +\nboundary: b0.s b0.e\n", "dangling crossing id"),
    ("branch b0: c0.0 c0.1\norient c0 +\nboundary: b0.s\n", "boundary order token mismatch"),
    ("branch b0: c0.0 c0.1\norient c0 +\nboundary: b0.s b0.e b1.s\n", "boundary order token mismatch"),
    ("branch b0: c0.0 c0.1\norient c0 +\nboundary: b0.s b0.e\nfoo bar\n", "unrecognized line"),
    ("branch b0: c0.0 c0.2\norient c0 +\nboundary: b0.s b0.e\n", "bad crossing visit"),
    ("branch b0: c0.0 c0.1\norient c0 *\nboundary: b0.s b0.e\n", "orientation must be"),
    ("orient c0 +\nboundary: b0.s b0.e\n", "no branches"),
    ("branch b0: c0.0 c0.1\norient c0 +\n", "missing boundary"),
])
def test_parse_errors(text, message):
    with pytest.raises(DTFError, match=message):
        parse_dtf(text)


def test_error_carries_position():
    with pytest.raises(DTFError) as info:
        parse_dtf("branch b0: c0.0 c0.0\norient c0 +\nboundary: b0.s b0.e\n")
    assert info.value.line == 1
    assert info.value.column == 17


@pytest.mark.parametrize("name", CORPUS_DTF)
def test_corpus_round_trip(name):
    d = corpus_divide(name)
    text = serialize_dtf(d)
    assert parse_dtf(text) == d
    assert serialize_dtf(parse_dtf(text)) == text


def test_boundary_rotation_is_canonical():
    rotated = A2.replace("boundary: b0.s b0.e", "boundary: b0.e b0.s")
    assert parse_dtf(rotated) == parse_dtf(A2)


@given(chord_divides())
def test_round_trip_random(d):
    assert parse_dtf(serialize_dtf(d)) == d


@given(chord_divides(), st.randoms(use_true_random=False))
def test_relabel_keeps_counts(d, rnd):
    perm = list(range(d.r))
    rnd.shuffle(perm)
    e = relabel(d, perm)
    assert (e.delta, e.r, e.mu) == (d.delta, d.r, d.mu)
    assert validate(e).ok


def test_rotation_has_four_darts_per_crossing():
    d = corpus_divide("fig9")
    for c in d.crossings:
        rot = d.rotation[c]
        assert len(rot) == 4
        assert all(d.dart_vertex[a] == c for a in rot)
        for k, a in enumerate(rot):
            assert d.rotation_position(a) == k


def test_face_next_is_permutation():
    d = corpus_divide("fig1")
    image = [d.face_next(a) for a in range(d.n_darts)]
    assert sorted(image) == list(range(d.n_darts))
