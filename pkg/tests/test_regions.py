"""Validation, faces, two-coloring and divide statistics."""
import pytest
from hypothesis import given

from divides.divide import make_divide, parse_dtf
from divides.regions import (ColoringError, PlanarityError, dart_region, faces, interior_regions, stats,
                             two_color, validate)

from strategies import CORPUS_DTF, chord_divides, corpus_divide

EXPECTED = {"a1": (1, 2, 0), "a2": (1, 1, 1), "d5": (3, 2, 2), "fig1": (17, 2, 16),
            "fig9": (8, 1, 8), "fig11": (8, 2, 7)}


@pytest.mark.parametrize("name", CORPUS_DTF)
def test_corpus_validates(name):
    rep = validate(corpus_divide(name))
    assert rep.ok, rep.format()
    assert (rep.delta, rep.r, rep.g) == EXPECTED[name]


def test_disconnected_divide_rejected():
    # two disjoint chords
    d = make_divide([("b0", []), ("b1", [])], {}, ["b0.s", "b0.e", "b1.s", "b1.e"])
    rep = validate(d)
    assert not rep.ok
    assert not rep["connectivity"].passed


def test_wrong_boundary_order_rejected():
    # A1 with the endpoints listed so that the two chords cannot cross
    d = make_divide([("b0", [("c0", 0)]), ("b1", [("c0", 1)])], {"c0": 1},
                    ["b0.s", "b0.e", "b1.s", "b1.e"])
    rep = validate(d)
    assert not rep.ok
    with pytest.raises(PlanarityError):
        faces(d)


def test_a1_orientations_pick_boundary_order():
    ok = make_divide([("b0", [("c0", 0)]), ("b1", [("c0", 1)])], {"c0": 1},
                     ["b0.s", "b1.s", "b0.e", "b1.e"])
    bad = make_divide([("b0", [("c0", 0)]), ("b1", [("c0", 1)])], {"c0": -1},
                      ["b0.s", "b1.s", "b0.e", "b1.e"])
    assert validate(ok).ok
    assert not validate(bad).ok


def test_faces_of_a2():
    d = corpus_divide("a2")
    inner = interior_regions(d)
    assert len(inner) == 1
    assert inner[0].corners == ("c0",)
    assert len(faces(d)) == 1 + 2   # the loop plus two boundary cells


def test_dart_region_covers_all_darts():
    d = corpus_divide("fig9")
    left = dart_region(d)
    assert sorted(left) == list(range(d.n_darts))


@pytest.mark.parametrize("name", CORPUS_DTF)
def test_two_color_is_checkerboard(name):
    d = corpus_divide(name)
    sd = two_color(d)
    left = dart_region(d)
    for e in range(len(d.edges)):
        assert sd.sign(left[2 * e]) == -sd.sign(left[2 * e + 1])


def test_flip_and_anchor():
    d = corpus_divide("d5")
    sd = two_color(d)
    rid = sd.positive[0].id
    assert two_color(d, (rid, -1)) == sd.flipped()
    with pytest.raises(ValueError):
        two_color(d, (rid, 0))
    with pytest.raises(ValueError):
        two_color(d, (999, 1))


def test_coloring_needs_valid_divide():
    d = make_divide([("b0", []), ("b1", [])], {}, ["b0.s", "b0.e", "b1.s", "b1.e"])
    with pytest.raises(PlanarityError):
        two_color(d)
    assert issubclass(ColoringError, RuntimeError)


def test_d5_split():
    st = stats(two_color(corpus_divide("d5")))
    assert (st.n_plus, st.n_minus, st.n_dot) == (1, 1, 3)


@given(chord_divides())
def test_region_count_random(d):
    rep = validate(d)
    assert rep.g == d.delta - d.r + 1 == len(interior_regions(d))
    st = stats(two_color(d))
    assert st.n_plus + st.n_minus == st.g
    assert st.mu == 2 * st.delta - st.r + 1


def test_parse_then_validate_text():
    d = parse_dtf("branch b0: c0.0\nbranch b1: c0.1\norient c0 +\nboundary: b0.s b1.s b0.e b1.e\n")
    assert validate(d).ok
