"""Algebraic intersection numbers of closed walks on a ribbon surface.

Each walk is drawn as a family of parallel lanes inside the strips; inside a
vertex disk every passage of a walk is a straight chord between two points on
the disk boundary.  Two chords cross exactly when their endpoints interleave,
and the sign of the crossing is read off from the cyclic order.
"""
from __future__ import annotations

from collections import defaultdict
from typing import Sequence

from .surface import RibbonSurface


def _on_arc(a, b, c) -> bool:
    """True if ``c`` lies on the open counterclockwise arc from ``a`` to ``b``."""
    if a < b:
        return a < c < b
    return c > a or c < b


def chord_sign(a, b, c, d) -> int:
    """Sign of the crossing of chord a->b with chord c->d (0 if disjoint).

    Positions are any totally ordered keys increasing counterclockwise.
    The sign is +1 when the second chord runs from the right of the first
    to its left.
    """
    c_in = _on_arc(a, b, c)
    d_in = _on_arc(a, b, d)
    if c_in == d_in:
        return 0
    return 1 if c_in else -1


def local_intersections(s: RibbonSurface, walks: Sequence[Sequence[int]], orientation: int = 1) -> list[list[int]]:
    """Intersection matrix of closed dart walks on an orientable ribbon surface."""
    lanes: dict[int, list[tuple[int, int]]] = defaultdict(list)
    for i, w in enumerate(walks):
        for p, dart in enumerate(w):
            lanes[dart >> 1].append((i, p))
    lane_of: dict[tuple[int, int], tuple[int, int]] = {}
    for sid, trav in lanes.items():
        for ell, key in enumerate(sorted(trav)):
            lane_of[key] = (ell, len(trav))

    def point(dart: int, key: tuple[int, int]):
        ell, n = lane_of[key]
        return (s.rotation_index(dart), ell if dart % 2 == 0 else n - 1 - ell)

    # chords grouped per vertex: (cycle, entry point, exit point)
    chords: dict[int, list[tuple[int, tuple, tuple]]] = defaultdict(list)
    for i, w in enumerate(walks):
        n = len(w)
        for p in range(n):
            into, out = w[p], w[(p + 1) % n]
            v = s.dart_vertex(into ^ 1)
            if v != s.dart_vertex(out):
                raise ValueError(f"walk {i} is not closed at position {p}")
            chords[v].append((i, point(into ^ 1, (i, p)), point(out, (i, (p + 1) % n))))

    m = len(walks)
    G = [[0] * m for _ in range(m)]
    for group in chords.values():
        for x in range(len(group)):
            i, a, b = group[x]
            for y in range(len(group)):
                if x == y:
                    continue
                j, c, dd = group[y]
                G[i][j] += chord_sign(a, b, c, dd)
    if orientation == -1:
        G = [[-v for v in row] for row in G]
    return G
