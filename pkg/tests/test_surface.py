"""Ribbon surface of a divide: census, topology, vanishing cycles, homology."""
import pytest
from hypothesis import given

from divides.regions import two_color
from divides.surface import (OrientabilityError, RibbonSurface, build_surface, h1_basis, surface_invariants,
                             twist_parity_ok, vanishing_cycles)
from divides.monodromy import bareiss_det

from strategies import CORPUS_DTF, chord_divides, corpus_divide


def signed_face_count(s: RibbonSurface) -> int:
    """Boundary components of a ribbon graph with twisted strips.

    Independent of the orientability certificate: the walk keeps a local
    direction flag, flips it on every odd strip and traces (dart, flag)
    states; each boundary component appears once per direction.
    """
    pos = {d: (v, i) for v, rot in enumerate(s.rotation) for i, d in enumerate(rot)}
    states = {(d, f) for d in range(2 * s.n_strips) for f in (1, -1)}
    orbits = 0
    while states:
        start = states.pop()
        d, f = start
        while True:
            if s.strips[d >> 1][2] & 1:
                f = -f
            v, i = pos[d ^ 1]
            rot = s.rotation[v]
            d = rot[(i - f) % len(rot)]
            if (d, f) == start:
                break
            states.discard((d, f))
        orbits += 1
    return orbits // 2


def surface(name):
    return build_surface(two_color(corpus_divide(name)))


@pytest.mark.parametrize("name", CORPUS_DTF)
def test_census(name):
    s = surface(name)
    d = s.divide
    assert s.n_strips == 6 * d.delta + d.r
    assert s.n_tjunctions == 4 * d.delta
    assert s.n_tips == 2 * d.r
    assert s.euler == d.r - 2 * d.delta


@pytest.mark.parametrize("name", CORPUS_DTF)
def test_topology(name):
    s = surface(name)
    d = s.divide
    inv = surface_invariants(s)
    assert inv.orientable
    assert inv.boundary_components == d.r == signed_face_count(s)
    assert inv.genus == d.delta - d.r + 1


def test_d5_surface():
    inv = surface_invariants(surface("d5"))
    assert (inv.genus, inv.boundary_components, inv.euler) == (2, 2, -4)


def test_side_bits_untwist_every_strip():
    s = surface("fig9")
    for a, b, tw in s.strips:
        assert (s.side[a] ^ s.side[b]) == (tw & 1)


def test_odd_cycle_detected():
    s = surface("a1")
    # add a one-strip loop with a single half twist at a T-junction
    broken = RibbonSurface(s.signed, s.strips + ((0, 0, 1),), s.rotation, s.vertex_labels, s.strip_labels)
    with pytest.raises(OrientabilityError):
        broken.side


@pytest.mark.parametrize("name", CORPUS_DTF)
def test_cycle_colors_and_provenance(name):
    s = surface(name)
    cs = vanishing_cycles(s)
    d = s.divide
    assert len(cs) == d.mu
    order = {"red": 0, "white": 1, "blue": 2}
    assert [order[c] for c in cs.colors] == sorted(order[c] for c in cs.colors)
    assert sorted(c.provenance for c in cs if c.color == "white") == sorted(d.crossings)
    sd = s.signed
    for c in cs:
        if c.color != "white":
            assert sd.sign(c.region) == (1 if c.color == "red" else -1)


@pytest.mark.parametrize("name", CORPUS_DTF)
def test_cycles_are_closed_walks(name):
    s = surface(name)
    for c in vanishing_cycles(s):
        for a, b in zip(c.walk, c.walk[1:] + c.walk[:1]):
            assert s.dart_vertex(a ^ 1) == s.dart_vertex(b)


def test_white_cycles_disjoint():
    s = surface("fig1")
    strips = [{a >> 1 for a in c.walk} for c in vanishing_cycles(s) if c.color == "white"]
    for i, a in enumerate(strips):
        for b in strips[:i]:
            assert not a & b


@pytest.mark.parametrize("name", CORPUS_DTF)
def test_basis_unimodular(name):
    s = surface(name)
    basis = h1_basis(s)
    assert basis.rank == s.divide.mu
    assert abs(bareiss_det([list(r) for r in basis.coordinates])) == 1
    assert twist_parity_ok(s, basis)


def test_dump_is_stable():
    a = surface("d5").dump()
    b = surface("d5").dump()
    assert a == b
    assert a.startswith("# vertices 16 strips 20 euler -4")


@given(chord_divides())
def test_random_divides(d):
    s = build_surface(two_color(d))
    inv = surface_invariants(s)
    assert inv.euler == d.r - 2 * d.delta
    assert inv.boundary_components == d.r == signed_face_count(s)
    assert inv.genus == d.delta - d.r + 1
    basis = h1_basis(s)
    assert abs(bareiss_det([list(r) for r in basis.coordinates])) == 1
