"""Numerical extraction of divides from real polynomial curves.

Two entry points produce :class:`TracedGeometry`:

* :func:`trace_implicit` follows the zero set of ``f(x, y)`` inside a disk by
  predictor-corrector continuation started at the sign changes of ``f`` on the
  boundary circle.  Double points are located beforehand as saddle points of
  ``f`` with vanishing critical value and are crossed along their asymptotic
  directions.
* :func:`trace_param` clips one or more polynomial parametrizations to the
  disk and finds self-intersections with a bucketed segment sweep followed by
  Newton refinement.

:func:`from_geometry` turns either result into a combinatorial divide.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import mpmath
import numpy as np

from .divide import Divide, make_divide
from .poly import BivariatePoly, ParamCurve, UnivariatePoly


class TracerError(RuntimeError):
    """Numerical tracing failed (see the message for the reason)."""


class GeometryError(ValueError):
    """Traced geometry cannot be turned into a generic divide."""


@dataclass(frozen=True)
class Crossing:
    point: tuple[float, float]
    a: tuple[int, float]            # (branch, polyline position) of the slot-0 strand
    b: tuple[int, float]            # (branch, polyline position) of the slot-1 strand
    tangents: tuple[tuple[float, float], tuple[float, float]]
    residual: float = 0.0


@dataclass(frozen=True, eq=False)
class TracedGeometry:
    radius: float
    branches: tuple[np.ndarray, ...]
    crossings: tuple[Crossing, ...]
    meta: dict = field(default_factory=dict)

    @property
    def n_branches(self) -> int:
        return len(self.branches)

    @property
    def n_crossings(self) -> int:
        return len(self.crossings)

    def to_json(self) -> str:
        data = {
            "radius": self.radius,
            "branches": [[[round(float(x), 12), round(float(y), 12)] for x, y in b] for b in self.branches],
            "crossings": [
                {"point": list(c.point), "a": list(c.a), "b": list(c.b),
                 "tangents": [list(c.tangents[0]), list(c.tangents[1])], "residual": c.residual}
                for c in self.crossings
            ],
            "meta": self.meta,
        }
        return json.dumps(data, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "TracedGeometry":
        data = json.loads(text)
        crossings = tuple(
            Crossing(tuple(c["point"]), (int(c["a"][0]), float(c["a"][1])), (int(c["b"][0]), float(c["b"][1])),
                     (tuple(c["tangents"][0]), tuple(c["tangents"][1])), float(c.get("residual", 0.0)))
            for c in data["crossings"])
        branches = tuple(np.asarray(b, dtype=float).reshape(-1, 2) for b in data["branches"])
        return cls(float(data["radius"]), branches, crossings, data.get("meta", {}))


def _unit(v):
    v = np.asarray(v, dtype=float)
    n = math.hypot(v[0], v[1])
    return v / n if n else v


def _cross(a, b) -> float:
    return float(a[0] * b[1] - a[1] * b[0])


# ---------------------------------------------------------------------------
# implicit curves

@dataclass(frozen=True)
class ImplicitOptions:
    grid: int = 400                 # nodes per side of the saddle search grid
    boundary_samples: int = 4096    # initial samples on the boundary circle
    max_step: float = 1 / 200       # continuation step cap, in units of the radius
    node_gap: float = 1e-6          # hyperbola gap (units of radius) below which a saddle is a node
    newton_tol: float = 1e-10       # residual gate for refined crossings, relative to coefficient scale
    refine_levels: int = 3          # boundary sampling doublings before giving up
    max_points: int = 2_000_000


class _Field:
    """Float and high-precision evaluation of f with its derivatives."""

    def __init__(self, f: BivariatePoly):
        self.f = f
        self.fx, self.fy = f.dx(), f.dy()
        self.fxx, self.fxy, self.fyy = self.fx.dx(), self.fx.dy(), self.fy.dy()
        self.scale = f.scale or 1.0

    def value(self, x, y):
        return self.f.eval_float(x, y)

    def grad(self, x, y):
        return self.fx.eval_float(x, y), self.fy.eval_float(x, y)

    def hess(self, x, y):
        return self.fxx.eval_float(x, y), self.fxy.eval_float(x, y), self.fyy.eval_float(x, y)

    def exact_sign(self, x: float, y: float) -> int:
        v = self.f(Fraction(x), Fraction(y))
        return (v > 0) - (v < 0)

    def sign(self, x: float, y: float) -> int:
        v = float(self.value(x, y))
        bound = 1e-9 * self.scale * max(1.0, abs(x), abs(y)) ** max(self.f.degree, 1)
        if abs(v) > bound:
            return 1 if v > 0 else -1
        return self.exact_sign(x, y)

    @staticmethod
    def _mp(p: BivariatePoly, x, y):
        return mpmath.fsum(mpmath.mpf(c.numerator) / c.denominator * x ** i * y ** j for (i, j), c in p.coeffs)

    def polish(self, x: float, y: float, dps: int = 40, iters: int = 60):
        """High-precision Newton on the gradient; returns (x, y, f, det H) as floats or None."""
        with mpmath.workdps(dps):
            X, Y = mpmath.mpf(x), mpmath.mpf(y)
            for _ in range(iters):
                gx, gy = self._mp(self.fx, X, Y), self._mp(self.fy, X, Y)
                a, b, c = self._mp(self.fxx, X, Y), self._mp(self.fxy, X, Y), self._mp(self.fyy, X, Y)
                det = a * c - b * b
                if det == 0:
                    return None
                dx = (c * gx - b * gy) / det
                dy = (a * gy - b * gx) / det
                X, Y = X - dx, Y - dy
                if abs(dx) + abs(dy) < mpmath.mpf(10) ** (-dps + 5) * (1 + abs(X) + abs(Y)):
                    break
            else:
                return None
            val = self._mp(self.f, X, Y)
            a, b, c = self._mp(self.fxx, X, Y), self._mp(self.fxy, X, Y), self._mp(self.fyy, X, Y)
            gx, gy = self._mp(self.fx, X, Y), self._mp(self.fy, X, Y)
            return float(X), float(Y), float(val), float(a * c - b * b), float(abs(gx) + abs(gy))


def _block_changes(A: np.ndarray) -> np.ndarray:
    """True for each 2x2 block of cells (3x3 nodes) in which A changes sign."""
    n = A.shape[0] - 2
    lo = np.full((n, n), np.inf)
    hi = np.full((n, n), -np.inf)
    for di in range(3):
        for dj in range(3):
            V = A[di:di + n, dj:dj + n]
            lo = np.minimum(lo, V)
            hi = np.maximum(hi, V)
    return (lo <= 0) & (hi >= 0)


def find_nodes(f: BivariatePoly, radius: float, opts: ImplicitOptions = ImplicitOptions()):
    """Double points of the zero set of f inside the disk.

    Returns a list of (point, hessian (fxx, fxy, fyy), residual).
    """
    F = _Field(f)
    n = opts.grid
    L = radius * 1.02
    xs = np.linspace(-L, L, n)
    X, Y = np.meshgrid(xs, xs, indexing="ij")
    GX, GY = F.grad(X, Y)
    hit = _block_changes(GX) & _block_changes(GY)
    ii, jj = np.nonzero(hit)
    if len(ii) == 0:
        return []
    sx, sy = xs[ii + 1], xs[jj + 1]
    # vectorized float Newton on the gradient
    px, py = sx.copy(), sy.copy()
    for _ in range(40):
        gx, gy = F.grad(px, py)
        a, b, c = F.hess(px, py)
        det = a * c - b * b
        ok = np.abs(det) > 0
        with np.errstate(divide="ignore", invalid="ignore"):
            dx = np.where(ok, (c * gx - b * gy) / det, 0.0)
            dy = np.where(ok, (a * gy - b * gx) / det, 0.0)
        step = np.hypot(dx, dy)
        lim = 4 * (2 * L / n)
        fac = np.where(step > lim, lim / np.maximum(step, 1e-300), 1.0)
        px, py = px - dx * fac, py - dy * fac
    good = np.isfinite(px) & np.isfinite(py) & (np.hypot(px, py) < radius * 1.01)
    # critical points far off the zero set are not nodes; a loose float gap test
    # spares the high-precision polish (it matters when critical points form curves)
    a, b, c = F.hess(px, py)
    with np.errstate(divide="ignore", invalid="ignore"):
        gap = np.sqrt(2 * np.abs(F.value(px, py)) / np.sqrt(np.abs(a * c - b * b)))
    good &= ~(gap > 1e3 * opts.node_gap * radius)
    cands: list[tuple[float, float]] = []
    for x, y in zip(px[good], py[good]):
        if all(math.hypot(x - u, y - v) > 1e-7 * radius for u, v in cands):
            cands.append((float(x), float(y)))

    nodes = []
    seen: list[tuple[float, float]] = []
    for x, y in cands:
        res = F.polish(x, y)
        if res is None:
            continue
        X0, Y0, val, det, gres = res
        if math.hypot(X0, Y0) >= radius or any(math.hypot(X0 - u, Y0 - v) < 1e-9 * radius for u, v in seen):
            continue
        seen.append((X0, Y0))
        gap = math.sqrt(2 * abs(val) / math.sqrt(abs(det))) if det != 0 else math.inf
        if gap >= opts.node_gap * radius:
            continue
        if det > 0:
            raise TracerError(f"non-generic zero set: isolated real point near ({X0:.6g}, {Y0:.6g})")
        residual = max(abs(val), gres) / F.scale
        if residual > opts.newton_tol:
            raise TracerError(f"crossing refinement failed near ({X0:.6g}, {Y0:.6g}): residual {residual:.3g}")
        nodes.append(((X0, Y0), tuple(float(h) for h in F.hess(X0, Y0)), residual))
    nodes.sort(key=lambda nd: (math.atan2(nd[0][1], nd[0][0]) % (2 * math.pi), math.hypot(*nd[0])))
    return nodes


def _boundary_roots(F: _Field, radius: float, opts: ImplicitOptions) -> list[float]:
    def roots_at(m):
        # an irrational phase keeps samples off symmetric zeros such as those of xy
        th = (np.arange(m) + 0.38196601125) * (2 * math.pi / m)
        cx, cy = radius * np.cos(th), radius * np.sin(th)
        v = F.value(cx, cy)
        sg = np.sign(v)
        tiny = np.abs(v) < 1e-9 * F.scale * max(1.0, radius) ** max(F.f.degree, 1)
        for k in np.nonzero(tiny | (sg == 0))[0]:
            sg[k] = F.exact_sign(float(cx[k]), float(cy[k]))
        if np.any(sg == 0):
            raise TracerError("non-transversal boundary: zero of f at a boundary sample")
        idx = np.nonzero(sg != np.roll(sg, -1))[0]
        out = []
        for k in idx:
            a, b = th[k], th[k] + 2 * math.pi / m if k + 1 < m else th[0] + 2 * math.pi
            sa = sg[k]
            for _ in range(60):
                mid = 0.5 * (a + b)
                if F.sign(radius * math.cos(mid), radius * math.sin(mid)) == sa:
                    a = mid
                else:
                    b = mid
            out.append(0.5 * (a + b) % (2 * math.pi))
        return sorted(out)

    m = opts.boundary_samples
    prev = roots_at(m)
    for _ in range(opts.refine_levels):
        m *= 2
        cur = roots_at(m)
        if len(cur) == len(prev):
            break
        prev = cur
    else:
        raise TracerError("resolution exhausted: boundary sign changes do not stabilize")
    for th in cur:
        x, y = radius * math.cos(th), radius * math.sin(th)
        gx, gy = (float(g) for g in F.grad(x, y))
        along = -math.sin(th) * gx + math.cos(th) * gy
        if abs(along) < 1e-6 * math.hypot(gx, gy):
            raise TracerError(f"non-transversal boundary at angle {th:.6g}")
    return cur


def _asymptotes(h) -> list[np.ndarray]:
    a, b, c = h
    w, V = np.linalg.eigh(np.array([[a, b], [b, c]]))
    lam_neg, lam_pos = w[0], w[1]
    e_neg, e_pos = V[:, 0], V[:, 1]
    # q(u e_pos + v e_neg) = lam_pos u^2 + lam_neg v^2 = 0
    u, v = math.sqrt(-lam_neg), math.sqrt(lam_pos)
    d1 = _unit(u * e_pos + v * e_neg)
    d2 = _unit(u * e_pos - v * e_neg)
    return [d1, -d1, d2, -d2]


def trace_implicit(f: BivariatePoly, radius: float, opts: ImplicitOptions = ImplicitOptions()) -> TracedGeometry:
    """Trace the zero set of ``f`` inside the disk of the given radius."""
    F = _Field(f)
    nodes = find_nodes(f, radius, opts)
    pts = np.array([nd[0] for nd in nodes]) if nodes else np.zeros((0, 2))
    sep = radius
    for i in range(len(pts)):
        sep = min(sep, radius - math.hypot(*pts[i]))
        for j in range(i):
            sep = min(sep, math.hypot(*(pts[i] - pts[j])))
    r_c = min(0.3 * sep, 0.02 * radius)
    h_max = opts.max_step * radius
    h_min = 1e-4 * r_c if len(pts) else 1e-7 * radius
    roots = _boundary_roots(F, radius, opts)
    if not roots:
        if len(pts):
            raise TracerError("closed component: double points found but the curve never meets the boundary")
        raise TracerError("empty zero set on the boundary circle")

    def correct(p):
        q = np.array(p, dtype=float)
        for _ in range(12):
            v = float(F.value(q[0], q[1]))
            gx, gy = (float(g) for g in F.grad(q[0], q[1]))
            g2 = gx * gx + gy * gy
            if g2 == 0:
                return None
            d = v / g2
            q = q - d * np.array([gx, gy])
            if abs(d) * math.sqrt(g2) < 1e-13 * radius:
                return q
        return q if abs(float(F.value(q[0], q[1]))) / math.sqrt(g2) < 1e-9 * radius else None

    def tangent(p, ref):
        gx, gy = (float(g) for g in F.grad(p[0], p[1]))
        t = _unit((-gy, gx))
        return t if np.dot(t, ref) >= 0 else -t

    used = [False] * len(roots)
    branches = []
    visits: dict[int, list[tuple[int, float, np.ndarray]]] = {k: [] for k in range(len(nodes))}
    n_points = 0
    for start in range(len(roots)):
        if used[start]:
            continue
        used[start] = True
        th0 = roots[start]
        p = np.array([radius * math.cos(th0), radius * math.sin(th0)])
        line = [p.copy()]
        d = tangent(p, -p)
        h = min(h_max, 0.25 * r_c) if len(pts) else h_max
        bi = len(branches)
        while True:
            if n_points + len(line) > opts.max_points:
                raise TracerError("resolution exhausted: too many continuation points")
            if len(pts):
                dist = np.hypot(pts[:, 0] - p[0], pts[:, 1] - p[1])
                k = int(np.argmin(dist))
                dn = float(dist[k])
            else:
                dn, k = math.inf, -1
            if dn < 0.5 * r_c:
                q = pts[k]
                cands = _asymptotes(nodes[k][1])
                out = max(cands, key=lambda c: float(np.dot(c, d)))
                visits[k].append((bi, float(len(line)), out))
                line.append(q.copy())
                nxt = correct(q + r_c * out)
                if nxt is None:
                    raise TracerError("crossing refinement failed: cannot leave a double point")
                p = nxt
                line.append(p.copy())
                d = tangent(p, out)
                continue
            step = min(h_max, max(0.5 * dn, h_min)) if len(pts) else h_max
            step = min(step, h * 2)
            while True:
                pred = p + step * d
                q = correct(pred)
                if q is not None and np.linalg.norm(q - pred) < 0.3 * step:
                    t_new = tangent(q, d)
                    if np.dot(t_new, d) > math.cos(0.3):
                        break
                step *= 0.5
                if step < h_min:
                    raise TracerError(f"resolution exhausted: continuation stalled near ({p[0]:.6g}, {p[1]:.6g})")
            h = step
            if math.hypot(q[0], q[1]) >= radius:
                # exit: nearest unused boundary root
                ang = math.atan2(q[1], q[0]) % (2 * math.pi)
                best = min((k2 for k2 in range(len(roots)) if not used[k2]),
                           key=lambda k2: abs((roots[k2] - ang + math.pi) % (2 * math.pi) - math.pi), default=None)
                if best is None or abs((roots[best] - ang + math.pi) % (2 * math.pi) - math.pi) * radius > 4 * h_max:
                    raise TracerError("resolution exhausted: branch exit does not match a boundary sign change")
                used[best] = True
                th = roots[best]
                line.append(np.array([radius * math.cos(th), radius * math.sin(th)]))
                break
            p, d = q, t_new
            line.append(p.copy())
        n_points += len(line)
        branches.append(np.array(line))

    crossings = []
    for k, vs in visits.items():
        if len(vs) != 2:
            raise TracerError(f"closed component: double point {k} visited {len(vs)} times by boundary branches")
        (ba, pa, ta), (bb, pb, tb) = sorted(vs, key=lambda v: (v[0], v[1]))
        crossings.append(Crossing((float(pts[k][0]), float(pts[k][1])), (ba, pa), (bb, pb),
                                  ((float(ta[0]), float(ta[1])), (float(tb[0]), float(tb[1]))), nodes[k][2]))
    _check_closed_components(F, radius, branches, opts)
    return TracedGeometry(float(radius), tuple(branches), tuple(crossings), {"mode": "implicit", "expr": str(f)})


def _check_closed_components(F: _Field, radius: float, branches, opts: ImplicitOptions) -> None:
    """Reject zero-set components that never reach the boundary circle."""
    n = opts.grid
    L = radius * 1.02
    xs = np.linspace(-L, L, n)
    X, Y = np.meshgrid(xs, xs, indexing="ij")
    V = F.value(X, Y)
    cell = 2 * L / (n - 1)
    lo = np.minimum(np.minimum(V[:-1, :-1], V[1:, :-1]), np.minimum(V[:-1, 1:], V[1:, 1:]))
    hi = np.maximum(np.maximum(V[:-1, :-1], V[1:, :-1]), np.maximum(V[:-1, 1:], V[1:, 1:]))
    change = (lo < 0) & (hi > 0)
    cx = 0.5 * (xs[:-1] + xs[1:])
    CX, CY = np.meshgrid(cx, cx, indexing="ij")
    change &= np.hypot(CX, CY) < radius - 2 * cell
    covered = np.zeros_like(change)
    for line in branches:
        # densify so every covered cell is hit
        for a, b in zip(line[:-1], line[1:]):
            m = max(1, int(math.ceil(np.linalg.norm(b - a) / (0.5 * cell))))
            for s in np.linspace(0, 1, m + 1):
                q = a + s * (b - a)
                i = int((q[0] + L) // cell)
                j = int((q[1] + L) // cell)
                covered[max(i - 2, 0):i + 3, max(j - 2, 0):j + 3] = True
    stray = change & ~covered
    if np.any(stray):
        i, j = np.argwhere(stray)[0]
        raise TracerError(f"closed component: zero set near ({cx[i]:.4g}, {cx[j]:.4g}) does not reach the boundary")


# ---------------------------------------------------------------------------
# parametric curves

@dataclass(frozen=True)
class ParamOptions:
    samples: int = 20000            # samples per branch
    immersion_tol: float = 1e-6     # min |p'| relative to max |p'| on a branch
    newton_tol: float = 1e-10       # residual gate, relative to the radius
    coincidence_tol: float = 1e-8   # parameter gap below which a self-intersection is spurious


def _inside_intervals(c: ParamCurve, radius: float) -> list[tuple[float, float]]:
    q = c.x * c.x + c.y * c.y + UnivariatePoly.from_coeffs([-Fraction(radius) ** 2])
    dq = q.deriv()
    roots = []
    for r in q.real_roots():
        for _ in range(8):  # polish with Newton
            d = dq.eval_float(r)
            if d == 0:
                break
            r = r - q.eval_float(r) / d
        roots.append(float(r))
    roots = sorted(set(roots))
    lo, hi = c.interval if c.interval else (-math.inf, math.inf)
    cuts = [lo] + [r for r in roots if lo < r < hi] + [hi]
    out = []
    for a, b in zip(cuts[:-1], cuts[1:]):
        if math.isinf(a) and math.isinf(b):
            mid = 0.0
        elif math.isinf(a):
            mid = b - 1.0
        elif math.isinf(b):
            mid = a + 1.0
        else:
            mid = 0.5 * (a + b)
        if q.eval_float(mid) < 0:
            if math.isinf(a) or math.isinf(b):
                raise TracerError("parametric branch does not leave the disk")
            out.append((a, b))
    return out


def _check_immersion(c: ParamCurve, a: float, b: float, tol: float) -> None:
    dx, dy = c.x.deriv(), c.y.deriv()
    speed2 = dx * dx + dy * dy
    cands = [a, b] + [t for t in speed2.deriv().real_roots() if a <= t <= b]
    ts = np.concatenate([np.array(cands), np.linspace(a, b, 2001)])
    v = np.sqrt(np.maximum(speed2.eval_float(ts), 0.0))
    if v.min() < tol * v.max():
        t_bad = float(ts[int(np.argmin(v))])
        raise TracerError(f"immersion violated: velocity vanishes near t = {t_bad:.6g}")


def _segment_hits(P: np.ndarray, owner: np.ndarray, index: np.ndarray, cell: float):
    """Candidate intersecting segment pairs via a uniform bucket grid."""
    A, B = P[:-1], P[1:]
    valid = owner[:-1] == owner[1:]
    A, B, own, idx = A[valid], B[valid], owner[:-1][valid], index[:-1][valid]
    lo = np.minimum(A, B)
    hi = np.maximum(A, B)
    origin = lo.min(axis=0)
    i0 = np.floor((lo - origin) / cell).astype(int)
    i1 = np.floor((hi - origin) / cell).astype(int)
    buckets: dict[tuple[int, int], list[int]] = {}
    for s in range(len(A)):
        for i in range(i0[s, 0], i1[s, 0] + 1):
            for j in range(i0[s, 1], i1[s, 1] + 1):
                buckets.setdefault((i, j), []).append(s)
    pairs = set()
    for segs in buckets.values():
        if len(segs) < 2:
            continue
        ss = np.array(segs)
        for x in range(len(ss)):
            s = ss[x]
            others = ss[x + 1:]
            if not len(others):
                continue
            keep = ~((own[others] == own[s]) & (np.abs(idx[others] - idx[s]) <= 1))
            others = others[keep]
            if not len(others):
                continue
            a, b = A[s], B[s]
            c, d = A[others], B[others]
            r = b - a
            sv = d - c
            den = r[0] * sv[:, 1] - r[1] * sv[:, 0]
            ac = c - a
            with np.errstate(divide="ignore", invalid="ignore"):
                t = (ac[:, 0] * sv[:, 1] - ac[:, 1] * sv[:, 0]) / den
                u = (ac[:, 0] * r[1] - ac[:, 1] * r[0]) / den
            hit = (den != 0) & (t >= 0) & (t <= 1) & (u >= 0) & (u <= 1)
            for o, tt, uu in zip(others[hit], t[hit], u[hit]):
                pairs.add((int(s), int(o), float(tt), float(uu)))
    return [(int(own[s]), int(idx[s]) + tt, int(own[o]), int(idx[o]) + uu) for s, o, tt, uu in sorted(pairs)]


def trace_param(curves: ParamCurve | Sequence[ParamCurve], radius: float,
                opts: ParamOptions = ParamOptions()) -> TracedGeometry:
    """Clip parametric curves to the disk and locate their double points."""
    if isinstance(curves, ParamCurve):
        curves = [curves]
    pieces = []    # (curve, a, b)
    for c in curves:
        for a, b in _inside_intervals(c, radius):
            _check_immersion(c, a, b, opts.immersion_tol)
            pieces.append((c, a, b))
    if not pieces:
        raise TracerError("no part of the curve lies inside the disk")

    n = opts.samples
    lines, owners, idxs, tvals = [], [], [], []
    for k, (c, a, b) in enumerate(pieces):
        t = np.linspace(a, b, n)
        x, y = c.point(t)
        pts = np.column_stack([x, y])
        # endpoints on the circle exactly
        for e in (0, -1):
            pts[e] = pts[e] * (radius / np.linalg.norm(pts[e]))
        lines.append(pts)
        owners.append(np.full(n, k))
        idxs.append(np.arange(n))
        tvals.append(t)
    P = np.concatenate(lines)
    owner = np.concatenate(owners)
    index = np.concatenate(idxs)
    seglen = np.hypot(*(np.diff(P, axis=0).T))
    cell = max(4 * float(np.median(seglen)), 1e-12)
    raw = _segment_hits(P, owner, index, cell)

    found: list[tuple[int, float, int, float, float, np.ndarray, np.ndarray, tuple]] = []
    for ka, pa, kb, pb in raw:
        ca, a0, b0 = pieces[ka]
        cb, a1, b1 = pieces[kb]
        ta = a0 + (b0 - a0) * pa / (n - 1)
        tb = a1 + (b1 - a1) * pb / (n - 1)
        sol = _refine_pair(ca, cb, ta, tb)
        if sol is None:
            raise TracerError(f"crossing refinement failed near t = {ta:.6g}, u = {tb:.6g}")
        ta, tb, res = sol
        if res > opts.newton_tol * radius:
            raise TracerError(f"crossing refinement failed: residual {res:.3g}")
        if ka == kb and abs(ta - tb) < opts.coincidence_tol:
            continue
        if not (a0 <= ta <= b0 and a1 <= tb <= b1):
            continue
        if ka > kb or (ka == kb and ta > tb):
            ka, kb, ta, tb = kb, ka, tb, ta
            ca, cb = cb, ca
            a0, b0, a1, b1 = a1, b1, a0, b0
        key = (ka, kb)
        if any(f[0] == ka and f[2] == kb and abs(f[1] - ta) < 1e-9 and abs(f[3] - tb) < 1e-9 for f in found):
            continue
        pt = np.array(ca.point(ta), dtype=float)
        va = _unit(ca.velocity(ta))
        vb = _unit(cb.velocity(tb))
        if abs(_cross(va, vb)) < 1e-8:
            raise TracerError(f"non-transversal self-intersection at ({pt[0]:.6g}, {pt[1]:.6g})")
        found.append((ka, ta, kb, tb, res, va, vb, key))

    crossings = []
    for ka, ta, kb, tb, res, va, vb, _ in sorted(found, key=lambda f: (f[0], f[1])):
        _, a0, b0 = pieces[ka]
        _, a1, b1 = pieces[kb]
        pa = (ta - a0) / (b0 - a0) * (n - 1)
        pb = (tb - a1) / (b1 - a1) * (n - 1)
        x, y = pieces[ka][0].point(ta)
        crossings.append(Crossing((float(x), float(y)), (ka, float(pa)), (kb, float(pb)),
                                  ((float(va[0]), float(va[1])), (float(vb[0]), float(vb[1]))), float(res)))
    meta = {"mode": "param", "intervals": [[a, b] for _, a, b in pieces]}
    return TracedGeometry(float(radius), tuple(lines), tuple(crossings), meta)


def _refine_pair(ca: ParamCurve, cb: ParamCurve, t: float, u: float, dps: int = 40):
    """Newton on p_a(t) - p_b(u) = 0 in high precision."""
    def mp_poly(p: UnivariatePoly):
        return [mpmath.mpf(c.numerator) / c.denominator for c in reversed(p.coeffs)] or [mpmath.mpf(0)]

    with mpmath.workdps(dps):
        xa, ya, xb, yb = (mp_poly(p) for p in (ca.x, ca.y, cb.x, cb.y))
        dxa, dya, dxb, dyb = (mp_poly(p.deriv()) for p in (ca.x, ca.y, cb.x, cb.y))
        T, U = mpmath.mpf(t), mpmath.mpf(u)
        for _ in range(60):
            fx = mpmath.polyval(xa, T) - mpmath.polyval(xb, U)
            fy = mpmath.polyval(ya, T) - mpmath.polyval(yb, U)
            a, b = mpmath.polyval(dxa, T), -mpmath.polyval(dxb, U)
            c, d = mpmath.polyval(dya, T), -mpmath.polyval(dyb, U)
            det = a * d - b * c
            if det == 0:
                return None
            dt = (d * fx - b * fy) / det
            du = (a * fy - c * fx) / det
            T, U = T - dt, U - du
            if abs(dt) + abs(du) < mpmath.mpf(10) ** (-dps + 8):
                break
        else:
            return None
        fx = mpmath.polyval(xa, T) - mpmath.polyval(xb, U)
        fy = mpmath.polyval(ya, T) - mpmath.polyval(yb, U)
        return float(T), float(U), float(mpmath.sqrt(fx * fx + fy * fy))


# ---------------------------------------------------------------------------
# geometry -> combinatorics

@dataclass(frozen=True)
class _Assembled:
    divide: Divide
    spans: tuple[tuple[int, float, float], ...]   # per divide edge: (branch, start pos, end pos)
    crossing_names: tuple[str, ...]               # per TracedGeometry crossing
    crossing_points: dict


def _point_at(line: np.ndarray, pos: float) -> np.ndarray:
    i = min(int(math.floor(pos)), len(line) - 2)
    s = pos - i
    return line[i] * (1 - s) + line[i + 1] * s


def _assemble(tg: TracedGeometry, tol: float = 1e-6) -> _Assembled:
    rho = tg.radius
    gate = tol * rho
    for bi, line in enumerate(tg.branches):
        if len(line) < 2:
            raise GeometryError(f"dangling branch {bi}: fewer than two points")
        for e in (line[0], line[-1]):
            if abs(math.hypot(e[0], e[1]) - rho) > gate:
                raise GeometryError(f"dangling branch {bi}: endpoint ({e[0]:.6g}, {e[1]:.6g}) is off the boundary")
    cps = [np.array(c.point) for c in tg.crossings]
    for i, p in enumerate(cps):
        if rho - math.hypot(*p) < gate:
            raise GeometryError("non-generic geometry: crossing on the boundary circle")
        for j in range(i):
            if np.linalg.norm(p - cps[j]) < gate:
                raise GeometryError("non-generic geometry: two crossings closer than the tolerance")
        ta, tb = (_unit(t) for t in tg.crossings[i].tangents)
        if abs(_cross(ta, tb)) < tol:
            raise GeometryError("non-generic geometry: tangential crossing")
    ends = []
    for bi, line in enumerate(tg.branches):
        ends.append((f"b{bi}.s", math.atan2(line[0][1], line[0][0]) % (2 * math.pi)))
        ends.append((f"b{bi}.e", math.atan2(line[-1][1], line[-1][0]) % (2 * math.pi)))
    ends.sort(key=lambda e: e[1])
    for (_, a), (_, b) in zip(ends, ends[1:] + ends[:1]):
        gap = (b - a) % (2 * math.pi) if len(ends) > 1 else 2 * math.pi
        if gap * rho < gate:
            raise GeometryError("non-generic geometry: two endpoints closer than the tolerance")

    per_branch: list[list[tuple[float, int, int]]] = [[] for _ in tg.branches]
    orient_raw = {}
    for ci, c in enumerate(tg.crossings):
        a, b = c.a, c.b
        ta, tb = c.tangents
        if a[0] == b[0] and a[1] > b[1]:
            a, b, ta, tb = b, a, tb, ta
        per_branch[a[0]].append((a[1], ci, 0))
        per_branch[b[0]].append((b[1], ci, 1))
        orient_raw[ci] = 1 if _cross(ta, tb) > 0 else -1
    names: dict[int, str] = {}
    for visits in per_branch:
        visits.sort()
        for (p1, _, _), (p2, _, _) in zip(visits, visits[1:]):
            if abs(p2 - p1) < 1e-9:
                raise GeometryError("non-generic geometry: two crossings at the same branch position")
        for _, ci, _ in visits:
            names.setdefault(ci, f"c{len(names)}")
    branches = []
    spans = []
    for bi, visits in enumerate(per_branch):
        branches.append((f"b{bi}", [(names[ci], slot) for _, ci, slot in visits]))
        stops = [0.0] + [p for p, _, _ in visits] + [float(len(tg.branches[bi]) - 1)]
        spans.extend((bi, s0, s1) for s0, s1 in zip(stops, stops[1:]))
    orientation = {names[ci]: orient_raw[ci] for ci in sorted(names, key=lambda c: int(names[c][1:]))}
    d = make_divide(branches, orientation, [tok for tok, _ in ends])
    return _Assembled(d, tuple(spans), tuple(names[i] for i in range(len(tg.crossings))),
                      {names[i]: tuple(tg.crossings[i].point) for i in range(len(tg.crossings))})


def from_geometry(tg: TracedGeometry, tol: float = 1e-6) -> Divide:
    """Combinatorial divide of traced geometry."""
    return _assemble(tg, tol).divide


def edge_spans(tg: TracedGeometry, tol: float = 1e-6):
    """Polyline span (branch, start position, end position) of each divide edge."""
    return _assemble(tg, tol).spans


def crossing_points(tg: TracedGeometry, tol: float = 1e-6) -> dict:
    return _assemble(tg, tol).crossing_points


def _span_polyline(line: np.ndarray, s0: float, s1: float) -> np.ndarray:
    i0, i1 = int(math.floor(s0)), int(math.ceil(s1))
    pts = [_point_at(line, s0)] + [line[i] for i in range(i0 + 1, i1) if s0 < i < s1] + [_point_at(line, s1)]
    return np.array(pts)


def region_points(tg: TracedGeometry, tol: float = 1e-6) -> dict[int, tuple[float, float]]:
    """A sample point strictly inside every cell of the traced divide.

    The point sits on a ray cast sideways from the middle of one bounding
    edge, halfway to the first obstacle, so it provably lies in the cell on
    that side.
    """
    from .regions import faces

    asm = _assemble(tg, tol)
    d = asm.divide
    segs = np.concatenate([np.stack([l[:-1], l[1:]], axis=1) for l in tg.branches])
    out = {}
    for reg in faces(d):
        dart = min(a for a in reg.walk if a < d.n_darts)
        bi, s0, s1 = asm.spans[dart >> 1]
        poly = _span_polyline(tg.branches[bi], s0, s1)
        seg = np.hypot(*np.diff(poly, axis=0).T)
        cum = np.concatenate([[0.0], np.cumsum(seg)])
        half = 0.5 * cum[-1]
        k = min(int(np.searchsorted(cum, half, side="right")) - 1, len(seg) - 1)
        frac = (half - cum[k]) / seg[k] if seg[k] else 0.0
        mid = poly[k] + frac * (poly[k + 1] - poly[k])
        direction = _unit(poly[k + 1] - poly[k])
        normal = np.array([-direction[1], direction[0]])
        if dart & 1:
            normal = -normal  # cell is on the left of the reversed dart
        hit = _ray_distance(mid, normal, segs, tg.radius, exclude=mid)
        out[reg.id] = tuple(float(v) for v in mid + 0.5 * hit * normal)
    return out


def _ray_distance(origin, direction, segs, radius, exclude) -> float:
    """Distance along a ray to the first polyline segment or the boundary circle."""
    a = segs[:, 0]
    b = segs[:, 1]
    r = b - a
    oa = a - origin
    den = direction[0] * r[:, 1] - direction[1] * r[:, 0]
    with np.errstate(divide="ignore", invalid="ignore"):
        t = (oa[:, 0] * r[:, 1] - oa[:, 1] * r[:, 0]) / den
        u = (oa[:, 0] * direction[1] - oa[:, 1] * direction[0]) / den
    ok = (den != 0) & (u >= 0) & (u <= 1) & (t > 1e-12 * radius)
    best = float(t[ok].min()) if np.any(ok) else math.inf
    # boundary circle: |origin + t dir| = radius
    bq = float(np.dot(origin, direction))
    cq = float(np.dot(origin, origin)) - radius * radius
    disc = bq * bq - cq
    if disc >= 0:
        tc = -bq + math.sqrt(disc)
        if tc > 0:
            best = min(best, tc)
    return best


def region_signs(tg: TracedGeometry, f: BivariatePoly, tol: float = 1e-6) -> dict[int, int]:
    """Sign of f in every cell, evaluated exactly at the cell sample point."""
    out = {}
    for rid, (x, y) in region_points(tg, tol).items():
        v = f(Fraction(x), Fraction(y))
        if v == 0:
            raise TracerError(f"sample point of cell {rid} lies on the zero set")
        out[rid] = 1 if v > 0 else -1
    return out
