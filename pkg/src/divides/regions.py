"""Faces, validation, checkerboard signs and numeric invariants of a divide."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import lru_cache

from .divide import CheckResult, Divide, ValidationReport


class PlanarityError(ValueError):
    pass


class ColoringError(RuntimeError):
    """Checkerboard coloring failed; the rotation data is corrupt."""


@dataclass(frozen=True)
class Region:
    id: int
    walk: tuple[int, ...]
    corners: tuple[str, ...]
    interior: bool

    @property
    def n_corners(self) -> int:
        return len(self.corners)


@dataclass(frozen=True)
class DiskMap:
    """The divide together with the disk boundary circle as a planar map.

    Divide darts keep their ids; boundary arc ``k`` (from the k-th to the
    (k+1)-th boundary token) gets darts ``n + 2k`` and ``n + 2k + 1``.
    """

    divide: Divide
    rotation: dict
    vertex: tuple
    faces: tuple[tuple[int, ...], ...]
    exterior: int

    @property
    def n_divide_darts(self) -> int:
        return self.divide.n_darts

    def is_arc(self, dart: int) -> bool:
        return dart >= self.divide.n_darts


def _orbits(n: int, nxt) -> list[tuple[int, ...]]:
    seen = [False] * n
    out = []
    for start in range(n):
        if seen[start]:
            continue
        walk = []
        d = start
        while not seen[d]:
            seen[d] = True
            walk.append(d)
            d = nxt(d)
        if d != start:
            raise PlanarityError("face permutation is not a permutation")
        out.append(tuple(walk))
    return out


@lru_cache(maxsize=256)
def disk_map(d: Divide) -> DiskMap:
    n = d.n_darts
    bnd = d.boundary
    m = len(bnd)
    rotation = {}
    vertex = list(d.dart_vertex) + [None] * (2 * m)
    for k in range(m):
        vertex[n + 2 * k] = bnd[k]
        vertex[n + 2 * k + 1] = bnd[(k + 1) % m]
    for c in d.crossings:
        rotation[c] = d.rotation[c]
    for k, tok in enumerate(bnd):
        inward = d.rotation[tok][0]
        to_prev = n + 2 * ((k - 1) % m) + 1
        to_next = n + 2 * k
        rotation[tok] = (inward, to_prev, to_next)
    pos = {dart: i for darts in rotation.values() for i, dart in enumerate(darts)}
    vertex = tuple(vertex)

    def nxt(dart):
        back = dart ^ 1
        around = rotation[vertex[back]]
        return around[(pos[back] - 1) % len(around)]

    faces = _orbits(n + 2 * m, nxt)
    exterior = [i for i, f in enumerate(faces) if all(x >= n for x in f)]
    if len(exterior) != 1:
        raise PlanarityError("boundary circle does not bound a single exterior face")
    return DiskMap(d, rotation, vertex, tuple(faces), exterior[0])


def faces(d: Divide) -> list[Region]:
    """All cells of the disk cut along the divide, in canonical order.

    Interior regions and boundary-touching cells are both returned; the face
    outside the disk is not.  Cells are ordered by their smallest divide dart.
    """
    rep = validate(d)
    if not (rep["planarity"].passed and rep["boundary order"].passed):
        raise PlanarityError("divide is not planar: " + rep["planarity"].detail + rep["boundary order"].detail)
    return _faces(d)


@lru_cache(maxsize=256)
def _faces_cached(d: Divide) -> tuple[Region, ...]:
    dm = disk_map(d)
    n = d.n_darts
    cells = [f for i, f in enumerate(dm.faces) if i != dm.exterior]
    cells.sort(key=lambda f: min(x for x in f if x < n))
    out = []
    for rid, walk in enumerate(cells):
        k = walk.index(min(x for x in walk if x < n))
        walk = walk[k:] + walk[:k]
        corners = []
        for a in walk:
            if a < n:
                v = dm.vertex[a ^ 1]
                if v in d.orient:
                    corners.append(v)
        interior = all(x < n for x in walk)
        out.append(Region(rid, walk, tuple(corners), interior))
    return tuple(out)


def _faces(d: Divide) -> list[Region]:
    return list(_faces_cached(d))


def interior_regions(d: Divide) -> list[Region]:
    return [f for f in _faces(d) if f.interior]


def dart_region(d: Divide) -> dict[int, int]:
    """Map each divide dart to the cell on its left."""
    out = {}
    for reg in _faces(d):
        for a in reg.walk:
            if a < d.n_darts:
                out[a] = reg.id
    return out


# ---------------------------------------------------------------------------
# validation

def _connected(d: Divide) -> bool:
    parent: dict[str, str] = {}

    def find(x):
        parent.setdefault(x, x)
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for tail, head in d.edges:
        a, b = find(tail[1]), find(head[1])
        if a != b:
            parent[a] = b
    roots = {find(v) for v in d.rotation}
    return len(roots) == 1


def validate(d: Divide) -> ValidationReport:
    checks = []
    counts: dict[tuple[str, int], int] = {}
    for b in d.branches:
        for v in b.visits:
            counts[(v.crossing, v.slot)] = counts.get((v.crossing, v.slot), 0) + 1
    bad = [f"{c}.{s}" for c in d.crossings for s in (0, 1) if counts.get((c, s), 0) != 1]
    bad += [f"{c}.{s}" for (c, s), k in counts.items() if s not in (0, 1)]
    missing_orient = [c for c in d.crossings if d.orient.get(c) not in (1, -1)]
    slot_ok = not bad and not missing_orient
    detail = ""
    if bad:
        detail = "bad slots " + ",".join(sorted(bad))
    if missing_orient:
        detail += " unoriented " + ",".join(missing_orient)
    checks.append(CheckResult("slot pairing", slot_ok, detail.strip()))

    tokens_ok = sorted(d.boundary) == sorted(d.endpoint_tokens)
    if not slot_ok or not tokens_ok:
        checks.append(CheckResult("boundary order", tokens_ok, "" if tokens_ok else "token mismatch"))
        return ValidationReport(tuple(checks), d.delta, d.r, None)

    V = d.delta + 2 * d.r
    E = len(d.edges)
    F = len(_orbits(d.n_darts, d.face_next))
    euler = V - E + F
    checks.append(CheckResult("planarity", euler == 2, f"V-E+F = {V}-{E}+{F} = {euler}"))

    conn = _connected(d)
    checks.append(CheckResult("connectivity", conn, "" if conn else "divide graph is disconnected"))

    # endpoints along the outer face of the divide graph appear clockwise
    order_ok = False
    detail = ""
    ends = set(d.endpoint_tokens)
    for walk in _orbits(d.n_darts, d.face_next):
        seq = [d.dart_vertex[a] for a in walk if d.dart_vertex[a] in ends]
        if seq:
            if len(seq) == len(ends):
                rev = seq[::-1]
                k = rev.index(d.boundary[0])
                order_ok = tuple(rev[k:] + rev[:k]) == d.boundary
                detail = "" if order_ok else "boundary order disagrees with rotation system"
            else:
                detail = "endpoints are not all on one face"
            break
    checks.append(CheckResult("boundary order", order_ok, detail))

    g = None
    if euler == 2 and order_ok:
        try:
            g = len(interior_regions(d))
        except PlanarityError as exc:
            checks.append(CheckResult("region count", False, str(exc)))
        else:
            want = d.delta - d.r + 1
            checks.append(CheckResult("region count", g == want, f"g = {g}, delta - r + 1 = {want}"))
    else:
        checks.append(CheckResult("region count", False, "skipped: not planar"))
    return ValidationReport(tuple(checks), d.delta, d.r, g)


# ---------------------------------------------------------------------------
# signs

@dataclass(frozen=True)
class SignedDivide:
    divide: Divide
    signs: tuple[int, ...]  # indexed by region id (all cells)

    @property
    def regions(self) -> list[Region]:
        return _faces(self.divide)

    def sign(self, region_id: int) -> int:
        return self.signs[region_id]

    @property
    def positive(self) -> list[Region]:
        return [f for f in self.regions if f.interior and self.signs[f.id] > 0]

    @property
    def negative(self) -> list[Region]:
        return [f for f in self.regions if f.interior and self.signs[f.id] < 0]

    def flipped(self) -> "SignedDivide":
        return SignedDivide(self.divide, tuple(-s for s in self.signs))


def two_color(d: Divide, anchor: tuple[int, int] | None = None) -> SignedDivide:
    """Checkerboard-color the cells of a connected planar divide.

    Without an anchor the first interior region (or the first cell if there
    are none) is made positive.
    """
    rep = validate(d)
    if not rep.ok:
        failed = [c.name for c in rep.checks if not c.passed]
        raise PlanarityError("cannot color an invalid divide: " + ", ".join(failed))
    regs = _faces(d)
    left = dart_region(d)
    adj: dict[int, list[int]] = {r.id: [] for r in regs}
    for e in range(len(d.edges)):
        a, b = left[2 * e], left[2 * e + 1]
        if a == b:
            raise ColoringError(f"edge {e} has the same cell on both sides")
        adj[a].append(b)
        adj[b].append(a)

    if anchor is None:
        inner = [r.id for r in regs if r.interior]
        anchor = (inner[0] if inner else regs[0].id, 1)
    start, sign = anchor
    if sign not in (1, -1):
        raise ValueError("anchor sign must be +1 or -1")
    if start not in adj:
        raise ValueError(f"no region with id {start}")
    signs = {start: sign}
    todo = deque([start])
    while todo:
        u = todo.popleft()
        for v in adj[u]:
            if v not in signs:
                signs[v] = -signs[u]
                todo.append(v)
            elif signs[v] == signs[u]:
                raise ColoringError("cells across an edge received the same sign")
    if len(signs) != len(regs):
        raise ColoringError("cell adjacency graph is disconnected")
    return SignedDivide(d, tuple(signs[r.id] for r in regs))


@dataclass(frozen=True)
class DivideStats:
    delta: int
    r: int
    g: int
    mu: int
    n_plus: int
    n_dot: int
    n_minus: int


def stats(sd: SignedDivide) -> DivideStats:
    d = sd.divide
    n_plus = len(sd.positive)
    n_minus = len(sd.negative)
    return DivideStats(d.delta, d.r, n_plus + n_minus, 2 * d.delta - d.r + 1, n_plus, d.delta, n_minus)
