"""Ribbon surface of a divide via the roundabout construction.

Every crossing is replaced by a ring of four T-junctions, every road section
becomes a strip with a half twist.  The result is a fatgraph with 4*delta
trivalent vertices, 2r univalent tips and 6*delta + r strips.

Fatgraph darts follow the divide darts: road strip ``e`` is divide edge ``e``
so its darts are ``2e`` and ``2e + 1`` exactly as in the divide.  Ring strip
``(X, k)`` joins T-junction ``k`` of crossing ``X`` to T-junction ``k + 1``
(counterclockwise) and has index ``E + 4*i + k`` where ``i`` is the canonical
index of ``X``.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property

from .regions import SignedDivide, interior_regions


class OrientabilityError(RuntimeError):
    pass


@dataclass(frozen=True)
class SurfaceStats:
    euler: int
    genus: int
    boundary_components: int
    orientable: bool


@dataclass(frozen=True)
class RibbonSurface:
    signed: SignedDivide
    strips: tuple[tuple[int, int, int], ...]     # (tail vertex, head vertex, half-twists)
    rotation: tuple[tuple[int, ...], ...]        # planar ccw order of darts per vertex
    vertex_labels: tuple[tuple, ...]             # ("T", crossing, k) or ("tip", token)
    strip_labels: tuple[tuple, ...]              # ("road", edge) or ("ring", crossing, k)

    @property
    def divide(self):
        return self.signed.divide

    @property
    def n_vertices(self) -> int:
        return len(self.rotation)

    @property
    def n_strips(self) -> int:
        return len(self.strips)

    @property
    def n_tjunctions(self) -> int:
        return sum(1 for lab in self.vertex_labels if lab[0] == "T")

    @property
    def n_tips(self) -> int:
        return sum(1 for lab in self.vertex_labels if lab[0] == "tip")

    @property
    def euler(self) -> int:
        return self.n_vertices - self.n_strips

    def dart_vertex(self, dart: int) -> int:
        s = self.strips[dart >> 1]
        return s[1] if dart & 1 else s[0]

    def ring_strip(self, crossing: str, k: int) -> int:
        return len(self.divide.edges) + 4 * self.divide.crossing_index(crossing) + (k % 4)

    @cached_property
    def side(self) -> tuple[int, ...]:
        """Orientability certificate: a side bit per vertex.

        A strip with an odd number of half twists must join vertices on
        opposite sides; flipping the disks on side 1 untwists every strip.
        """
        nbrs: list[list[tuple[int, int]]] = [[] for _ in range(self.n_vertices)]
        for a, b, tw in self.strips:
            nbrs[a].append((b, tw & 1))
            nbrs[b].append((a, tw & 1))
        side: list[int | None] = [None] * self.n_vertices
        for root in range(self.n_vertices):
            if side[root] is not None:
                continue
            side[root] = 0
            todo = deque([root])
            while todo:
                u = todo.popleft()
                for v, tw in nbrs[u]:
                    want = side[u] ^ tw
                    if side[v] is None:
                        side[v] = want
                        todo.append(v)
                    elif side[v] != want:
                        raise OrientabilityError("a cycle of the fatgraph carries an odd number of half twists")
        return tuple(side)

    @cached_property
    def oriented_rotation(self) -> tuple[tuple[int, ...], ...]:
        return tuple(rot if s == 0 else tuple(reversed(rot)) for rot, s in zip(self.rotation, self.side))

    @cached_property
    def _orot_pos(self) -> dict[int, int]:
        return {d: i for rot in self.oriented_rotation for i, d in enumerate(rot)}

    def rotation_index(self, dart: int) -> int:
        """Position of a dart in the oriented ccw order at its vertex."""
        return self._orot_pos[dart]

    @cached_property
    def boundary_walks(self) -> tuple[tuple[int, ...], ...]:
        """Boundary components as dart walks; spurs are traversed out and back."""
        n = 2 * self.n_strips
        seen = [False] * n
        walks = []
        for start in range(n):
            if seen[start]:
                continue
            walk = []
            d = start
            while not seen[d]:
                seen[d] = True
                walk.append(d)
                back = d ^ 1
                rot = self.oriented_rotation[self.dart_vertex(back)]
                d = rot[(self._orot_pos[back] - 1) % len(rot)]
            walks.append(tuple(walk))
        return tuple(walks)

    def dump(self) -> str:
        """Stable text dump of the fatgraph."""
        lines = [f"# vertices {self.n_vertices} strips {self.n_strips} euler {self.euler}"]
        for v, (lab, rot) in enumerate(zip(self.vertex_labels, self.rotation)):
            name = f"T {lab[1]} {lab[2]}" if lab[0] == "T" else f"tip {lab[1]}"
            lines.append(f"vertex {v} {name} side {self.side[v]} rot " + " ".join(map(str, rot)))
        for s, ((a, b, tw), lab) in enumerate(zip(self.strips, self.strip_labels)):
            name = f"road {lab[1]}" if lab[0] == "road" else f"ring {lab[1]} {lab[2]}"
            lines.append(f"strip {s} {a} {b} twist {tw} {name}")
        for i, w in enumerate(self.boundary_walks):
            lines.append(f"boundary {i} " + " ".join(map(str, w)))
        return "\n".join(lines) + "\n"


def build_surface(sd: SignedDivide) -> RibbonSurface:
    """Roundabout construction of the ribbon surface."""
    d = sd.divide
    n_edges = len(d.edges)
    vertex_labels: list[tuple] = []
    tj: dict[tuple[str, int], int] = {}
    for c in d.crossings:
        for k in range(4):
            tj[(c, k)] = len(vertex_labels)
            vertex_labels.append(("T", c, k))
    tip: dict[str, int] = {}
    for tok in d.endpoint_tokens:
        tip[tok] = len(vertex_labels)
        vertex_labels.append(("tip", tok))

    def attach(dart: int) -> int:
        v = d.dart_vertex[dart]
        if v in tip:
            return tip[v]
        return tj[(v, d.rotation_position(dart))]

    strips: list[tuple[int, int, int]] = []
    strip_labels: list[tuple] = []
    for e in range(n_edges):
        strips.append((attach(2 * e), attach(2 * e + 1), 1))
        strip_labels.append(("road", e))
    for c in d.crossings:
        for k in range(4):
            strips.append((tj[(c, k)], tj[(c, (k + 1) % 4)], 1))
            strip_labels.append(("ring", c, k))

    rotation: list[tuple[int, ...]] = [()] * len(vertex_labels)
    for c in d.crossings:
        i = d.crossing_index(c)
        for k in range(4):
            road = d.rotation[c][k]
            to_next = 2 * (n_edges + 4 * i + k)
            to_prev = 2 * (n_edges + 4 * i + (k - 1) % 4) + 1
            # planar picture: outward road, then ring ccw, then ring cw
            rotation[tj[(c, k)]] = (road, to_next, to_prev)
    for tok, v in tip.items():
        rotation[v] = (d.rotation[tok][0],)

    surf = RibbonSurface(sd, tuple(strips), tuple(rotation), tuple(vertex_labels), tuple(strip_labels))
    surf.side  # fail early on a broken construction
    return surf


def surface_invariants(s: RibbonSurface) -> SurfaceStats:
    try:
        s.side
    except OrientabilityError:
        raise
    chi = s.euler
    b = len(s.boundary_walks)
    twice_genus = 2 - chi - b
    if twice_genus % 2:
        raise OrientabilityError("odd 2 - chi - b")
    return SurfaceStats(chi, twice_genus // 2, b, True)


# ---------------------------------------------------------------------------
# vanishing cycles

@dataclass(frozen=True)
class Cycle:
    color: str          # "red", "white" or "blue"
    provenance: str     # crossing id for white, "R<region id>" for red/blue
    walk: tuple[int, ...]

    @property
    def region(self) -> int | None:
        return int(self.provenance[1:]) if self.color != "white" else None


@dataclass(frozen=True)
class CycleSystem:
    cycles: tuple[Cycle, ...]
    orientation: int = 1   # +1: side-0 disks carry the planar orientation

    def __len__(self) -> int:
        return len(self.cycles)

    def __iter__(self):
        return iter(self.cycles)

    def __getitem__(self, i):
        return self.cycles[i]

    @property
    def colors(self) -> tuple[str, ...]:
        return tuple(c.color for c in self.cycles)

    def indices(self, color: str) -> list[int]:
        return [i for i, c in enumerate(self.cycles) if c.color == color]


def _reverse_walk(walk: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(d ^ 1 for d in reversed(walk))


def raw_cycles(s: RibbonSurface) -> list[Cycle]:
    """Cycles with their planar orientations: rings and region boundaries counterclockwise."""
    d = s.divide
    sd = s.signed
    out_red, out_white, out_blue = [], [], []
    for reg in interior_regions(d):
        walk = []
        for a in reg.walk:
            x = d.dart_vertex[a ^ 1]
            k_in = d.rotation_position(a ^ 1)
            walk.append(a)
            walk.append(2 * s.ring_strip(x, k_in - 1) + 1)
        # a region walk must close up at the starting T-junction
        for a, b in zip(walk, walk[1:] + walk[:1]):
            if s.dart_vertex(a ^ 1) != s.dart_vertex(b):
                raise RuntimeError(f"region walk for R{reg.id} does not close")
        cyc = Cycle("red" if sd.sign(reg.id) > 0 else "blue", f"R{reg.id}", tuple(walk))
        (out_red if cyc.color == "red" else out_blue).append(cyc)
    for c in d.crossings:
        walk = tuple(2 * s.ring_strip(c, k) for k in range(4))
        out_white.append(Cycle("white", c, walk))
    return out_red + out_white + out_blue


def vanishing_cycles(s: RibbonSurface) -> CycleSystem:
    """Red, white and blue vanishing cycles, oriented so that every
    red-white, white-blue and red-blue intersection number is nonnegative."""
    from .intersection import local_intersections

    cycles = raw_cycles(s)
    raw = local_intersections(s, [c.walk for c in cycles], orientation=1)
    colors = [c.color for c in cycles]
    block_signs = {}
    for a, b in (("red", "white"), ("white", "blue"), ("red", "blue")):
        vals = {(raw[i][j] > 0) - (raw[i][j] < 0)
                for i in range(len(cycles)) if colors[i] == a
                for j in range(len(cycles)) if colors[j] == b and raw[i][j] != 0}
        if len(vals) > 1:
            raise RuntimeError(f"mixed {a}-{b} intersection signs; local template mismatch")
        block_signs[(a, b)] = vals.pop() if vals else 0

    for eps in (1, -1):
        for wf in (1, -1):
            for bf in (1, -1):
                flip = {"red": 1, "white": wf, "blue": bf}
                if all(sg * eps * flip[a] * flip[b] >= 0 for (a, b), sg in block_signs.items()):
                    fixed = tuple(c if flip[c.color] == 1 else Cycle(c.color, c.provenance, _reverse_walk(c.walk))
                                  for c in cycles)
                    return CycleSystem(fixed, eps)
    raise RuntimeError("no orientation makes red-white-blue intersections nonnegative")


# ---------------------------------------------------------------------------
# homology oracle

@dataclass(frozen=True)
class H1Basis:
    tree: tuple[int, ...]          # strips in the spanning tree
    cotree: tuple[int, ...]        # strips indexing the basis (one fundamental cycle each)
    coordinates: tuple[tuple[int, ...], ...]   # row per vanishing cycle

    @property
    def rank(self) -> int:
        return len(self.cotree)


def h1_basis(s: RibbonSurface, cycles: CycleSystem | None = None) -> H1Basis:
    """Spanning-tree basis of the first homology of the fatgraph.

    A closed walk is determined in homology by its signed counts on the
    strips outside a spanning tree, which gives the coordinates directly.
    """
    if cycles is None:
        cycles = vanishing_cycles(s)
    nbrs: list[list[int]] = [[] for _ in range(s.n_vertices)]
    for sid, (a, b, _) in enumerate(s.strips):
        nbrs[a].append(2 * sid)
        nbrs[b].append(2 * sid + 1)
    seen = [False] * s.n_vertices
    tree = []
    for root in range(s.n_vertices):
        if seen[root]:
            continue
        seen[root] = True
        todo = deque([root])
        while todo:
            u = todo.popleft()
            for dart in nbrs[u]:
                v = s.dart_vertex(dart ^ 1)
                if not seen[v]:
                    seen[v] = True
                    tree.append(dart >> 1)
                    todo.append(v)
    in_tree = set(tree)
    cotree = tuple(sid for sid in range(s.n_strips) if sid not in in_tree)
    col = {sid: i for i, sid in enumerate(cotree)}
    coords = []
    for cyc in cycles:
        row = [0] * len(cotree)
        for dart in cyc.walk:
            sid = dart >> 1
            if sid in col:
                row[col[sid]] += -1 if dart & 1 else 1
        coords.append(tuple(row))
    if len(cotree) != len(cycles):
        raise RuntimeError(f"rank mismatch: H1 rank {len(cotree)} vs {len(cycles)} cycles")
    return H1Basis(tuple(sorted(in_tree)), cotree, tuple(coords))


def twist_parity_ok(s: RibbonSurface, basis: H1Basis | None = None) -> bool:
    """Every fundamental cycle traverses an even number of half twists."""
    if basis is None:
        basis = h1_basis(s)
    parent: dict[int, tuple[int, int]] = {}
    # recover tree paths by BFS restricted to tree strips
    tree = set(basis.tree)
    nbrs: list[list[tuple[int, int]]] = [[] for _ in range(s.n_vertices)]
    for sid in tree:
        a, b, _ = s.strips[sid]
        nbrs[a].append((b, sid))
        nbrs[b].append((a, sid))
    depth = {}
    for root in range(s.n_vertices):
        if root in depth:
            continue
        depth[root] = 0
        todo = deque([root])
        while todo:
            u = todo.popleft()
            for v, sid in nbrs[u]:
                if v not in depth:
                    depth[v] = depth[u] + 1
                    parent[v] = (u, sid)
                    todo.append(v)

    def path_twists(u, v):
        total = 0
        while u != v:
            if depth[u] >= depth[v]:
                u, sid = parent[u]
            else:
                v, sid = parent[v]
            total += s.strips[sid][2]
        return total

    for sid in basis.cotree:
        a, b, tw = s.strips[sid]
        if (tw + path_twists(a, b)) % 2:
            return False
    return True
