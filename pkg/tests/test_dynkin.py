"""Dynkin diagram export."""
import pytest

from divides.dynkin import DynkinDiagram, dynkin, dynkin_svg, parse_dynkin_text
from divides.monodromy import compute

from strategies import CORPUS_DTF, corpus_divide


@pytest.mark.parametrize("name", CORPUS_DTF)
def test_text_round_trip(name):
    md = compute(corpus_divide(name))
    diagram = dynkin(md.cycles, md.gram)
    assert parse_dynkin_text(diagram.to_text()) == diagram


def test_edges_follow_gram():
    md = compute(corpus_divide("fig9"))
    diagram = dynkin(md.cycles, md.gram)
    n = len(md.gram)
    assert {(i, j): w for i, j, w in diagram.edges} == {
        (i, j): md.gram[i][j] for i in range(n) for j in range(i + 1, n) if md.gram[i][j]}


def test_positions_and_svg():
    md = compute(corpus_divide("a2"))
    diagram = dynkin(md.cycles, md.gram, {"c0": (0.0, 0.0), "R0": (1.0, 0.5)})
    text = diagram.to_text()
    assert "v 1 white c0 0.000000 0.000000" in text
    svg = dynkin_svg(diagram)
    assert svg.count("<circle") == 2
    assert svg.count("<line") == 1


def test_empty_and_bad_lines():
    assert dynkin_svg(DynkinDiagram((), ())).startswith("<svg")
    with pytest.raises(ValueError):
        parse_dynkin_text("x 1 2\n")
