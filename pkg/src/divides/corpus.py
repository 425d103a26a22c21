"""Corpus manifest, invariant suite and deterministic run reports.

The manifest is an INI file; each section is one entry::

    [fig9]
    kind = param
    curve = T(4,t)/8 ; T(6,t)/32 + T(7,t)/64
    radius = 0.2
    expect = 8 1 8
    singularity = yes

``kind`` is ``dtf`` (key ``path``, relative to the manifest), ``implicit``
(key ``expr``) or ``param`` (keys ``curve``, ``curve2``, ...).  Optional keys:
``params`` (``s=1, a=1/2``), ``anchor`` (``<region id> <+|->``),
``split`` (expected ``n_plus n_minus``), ``signs`` (``+`` or ``-``: every
interior region carries that sign of ``f``).
"""
from __future__ import annotations

import configparser
import hashlib
import json
import os
import random
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .divide import CheckResult, Divide, parse_dtf
from .monodromy import (MonodromyData, apply_twist, bareiss_det, bareiss_rank, compute,
                        monodromy, poly_eval, twist)
from .poly import BivariatePoly, ParamCurve
from .regions import SignedDivide, faces, stats, two_color, validate
from .surface import h1_basis, surface_invariants, twist_parity_ok

PACKAGE_CORPUS = Path(__file__).with_name("corpus")


def corpus_dir() -> Path:
    env = os.environ.get("DIVIDES_CORPUS")
    return Path(env) if env else PACKAGE_CORPUS


@dataclass(frozen=True)
class Entry:
    name: str
    kind: str
    data: dict
    base: Path

    @property
    def expect(self) -> tuple[int, int, int] | None:
        raw = self.data.get("expect")
        return tuple(int(v) for v in raw.split()) if raw else None

    @property
    def singularity(self) -> bool:
        return self.data.get("singularity", "no").strip().lower() in ("yes", "true", "1")

    @property
    def params(self) -> dict[str, Fraction]:
        raw = self.data.get("params", "").strip()
        out = {}
        for part in filter(None, (p.strip() for p in raw.split(","))):
            k, v = part.split("=")
            out[k.strip()] = Fraction(v.strip())
        return out

    @property
    def radius(self) -> float:
        return float(Fraction(self.data["radius"]))


def load_manifest(path: str | os.PathLike) -> list[Entry]:
    path = Path(path)
    cp = configparser.ConfigParser(interpolation=None)
    with open(path, encoding="utf-8") as fh:
        cp.read_file(fh)
    out = []
    for name in cp.sections():
        data = dict(cp[name])
        kind = data.get("kind", "").strip()
        if kind not in ("dtf", "implicit", "param"):
            raise ValueError(f"entry {name}: unknown kind {kind!r}")
        out.append(Entry(name, kind, data, path.parent))
    return out


def param_curves(entry: Entry) -> list[ParamCurve]:
    keys = sorted((k for k in entry.data if k.startswith("curve")), key=lambda k: (len(k), k))
    curves = []
    for k in keys:
        xs, ys = entry.data[k].split(";")
        curves.append(ParamCurve.parse(xs.strip(), ys.strip(), entry.params))
    return curves


@dataclass
class Materialized:
    divide: Divide
    signed: SignedDivide
    geometry: object = None
    poly: BivariatePoly | None = None
    geometric_signs: dict | None = None


def materialize(entry: Entry) -> Materialized:
    """Produce the divide of an entry (tracing if needed) and its signs."""
    from .tracer import from_geometry, region_signs, trace_implicit, trace_param

    anchor = None
    if "anchor" in entry.data:
        rid, sg = entry.data["anchor"].split()
        anchor = (int(rid), 1 if sg == "+" else -1)
    if entry.kind == "dtf":
        d = parse_dtf((entry.base / entry.data["path"]).read_text(encoding="utf-8"))
        return Materialized(d, two_color(d, anchor))
    if entry.kind == "implicit":
        f = BivariatePoly.parse(entry.data["expr"], entry.params)
        tg = trace_implicit(f, entry.radius)
        d = from_geometry(tg)
        signs = region_signs(tg, f)
        if anchor is None:
            first = min(signs)
            anchor = (first, signs[first])
        return Materialized(d, two_color(d, anchor), tg, f, signs)
    tg = trace_param(param_curves(entry), entry.radius)
    d = from_geometry(tg)
    return Materialized(d, two_color(d, anchor), tg)


# ---------------------------------------------------------------------------
# invariant suite

def _check(name, ok, detail="") -> CheckResult:
    return CheckResult(name, bool(ok), detail)


def invariant_checks(md: MonodromyData, singularity: bool | None = None, seed: int = 0) -> list[CheckResult]:
    """The exact property suite for one signed divide."""
    sd, s, cyc, G, T = md.signed, md.surface, md.cycles, md.gram, md.monodromy
    d = sd.divide
    delta, r = d.delta, d.r
    n = len(G)
    out = []
    rep = validate(d)
    out.append(_check("validation", rep.ok, "" if rep.ok else rep.format().strip()))
    out.append(_check("census", s.n_strips == 6 * delta + r and s.n_tjunctions == 4 * delta and s.n_tips == 2 * r,
                      f"strips {s.n_strips}, T-junctions {s.n_tjunctions}, tips {s.n_tips}"))
    inv = surface_invariants(s)
    g = len([f for f in faces(d) if f.interior])
    out.append(_check("euler characteristic", inv.euler == r - 2 * delta, f"chi = {inv.euler}"))
    out.append(_check("genus", inv.genus == g, f"genus {inv.genus}, regions {g}"))
    out.append(_check("boundary components", inv.boundary_components == r, f"{inv.boundary_components}"))
    basis = h1_basis(s, cyc)
    out.append(_check("orientability", twist_parity_ok(s, basis)))
    det = bareiss_det([list(row) for row in basis.coordinates])
    out.append(_check("unimodular basis", abs(det) == 1, f"det = {det}"))
    out.append(_check("mu", n == 2 * delta - r + 1 == 2 * inv.genus + r - 1, f"mu = {n}"))

    skew = all(G[i][j] == -G[j][i] for i in range(n) for j in range(n))
    colors = cyc.colors
    blocks = all(G[i][j] == 0 for i in range(n) for j in range(n) if colors[i] == colors[j])
    rank = bareiss_rank(G)
    out.append(_check("gram skew", skew))
    out.append(_check("gram color blocks", blocks))
    out.append(_check("gram rank", rank == 2 * inv.genus, f"rank {rank}"))
    order = {"red": 0, "white": 1, "blue": 2}
    nonneg = all(G[i][j] >= 0 for i in range(n) for j in range(n) if order[colors[i]] < order[colors[j]])
    out.append(_check("nonnegativity", nonneg))

    tw_ok = True
    for i in range(n):
        D = twist(G, i)
        N = [[D[a][b] - (a == b) for b in range(n)] for a in range(n)]
        if any(any(v for v in row) for row in _mul(N, N)) or bareiss_det(D) != 1:
            tw_ok = False
            break
    out.append(_check("twists unipotent", tw_ok))
    comm = True
    for i in range(n):
        for j in range(i + 1, n):
            if colors[i] == colors[j]:
                if apply_twist(G, i, twist(G, j)) != apply_twist(G, j, twist(G, i)):
                    comm = False
    out.append(_check("same-color twists commute", comm))
    out.append(_check("form preserved", _mul(_mul(_transpose(T), G), T) == G))

    cp = md.char_poly
    out.append(_check("char poly shape", len(cp) == n + 1 and cp[0] == 1 and abs(cp[-1]) == 1, " ".join(map(str, cp))))
    if r == 1:
        v1 = poly_eval(cp, 1)
        out.append(_check("alexander at 1", abs(v1) == 1, f"value {v1}"))

    # within-color reordering
    rng = random.Random(seed)
    perm = []
    for color in ("red", "white", "blue"):
        idx = cyc.indices(color)
        shuffled = idx[:]
        rng.shuffle(shuffled)
        perm += shuffled
    Gp = [[G[perm[a]][perm[b]] for b in range(n)] for a in range(n)]
    Tp = monodromy(Gp)
    Tback = [[T[perm[a]][perm[b]] for b in range(n)] for a in range(n)]
    out.append(_check("within-color reordering", Tp == Tback))

    flipped = compute(sd.flipped())
    out.append(_check("sign flip char poly", flipped.char_poly == cp))
    if singularity:
        out.append(_check("lefschetz", md.lefschetz == 0, f"lefschetz {md.lefschetz}"))
    return out


def _mul(A, B):
    Bt = list(zip(*B))
    return [[sum(x * y for x, y in zip(row, col) if x) for col in Bt] for row in A]


def _transpose(A):
    return [list(r) for r in zip(*A)]


# ---------------------------------------------------------------------------
# reports

@dataclass
class EntryReport:
    name: str
    stats: dict
    surface: dict
    gram_digest: str
    gram_rank: int
    char_poly: list[int]
    lefschetz: int
    checks: list[CheckResult] = field(default_factory=list)
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.error is None and all(c.passed for c in self.checks)

    def as_dict(self) -> dict:
        return {
            "stats": self.stats,
            "surface": self.surface,
            "gram": {"sha256": self.gram_digest, "rank": self.gram_rank},
            "char_poly": self.char_poly,
            "lefschetz": self.lefschetz,
            "checks": {c.name: c.passed for c in self.checks},
            "failures": [f"{c.name}: {c.detail}" if c.detail else c.name for c in self.checks if not c.passed],
            "error": self.error,
            "ok": self.ok,
        }


@dataclass
class RunReport:
    entries: list[EntryReport]

    @property
    def ok(self) -> bool:
        return all(e.ok for e in self.entries)

    def to_json(self) -> str:
        data = {e.name: e.as_dict() for e in sorted(self.entries, key=lambda e: e.name)}
        return json.dumps({"entries": data, "ok": self.ok}, indent=2, sort_keys=True) + "\n"

    def summary(self) -> str:
        lines = []
        for e in sorted(self.entries, key=lambda e: e.name):
            if e.error:
                lines.append(f"FAIL {e.name}: {e.error}")
                continue
            st = e.stats
            head = f"{'PASS' if e.ok else 'FAIL'} {e.name}: delta={st['delta']} r={st['r']} g={st['g']} mu={st['mu']}"
            bad = [c.name for c in e.checks if not c.passed]
            lines.append(head + (f" (failed: {', '.join(bad)})" if bad else ""))
        return "\n".join(lines) + ("\n" if lines else "")


def gram_digest(G) -> str:
    text = "\n".join(" ".join(str(v) for v in row) for row in G)
    return hashlib.sha256(text.encode()).hexdigest()


def run_entry(entry: Entry) -> EntryReport:
    try:
        mat = materialize(entry)
        md = compute(mat.signed)
    except Exception as exc:  # reported per entry, never fatal for the run
        return EntryReport(entry.name, {}, {}, "", 0, [], 0, [], f"{type(exc).__name__}: {exc}")
    st = stats(md.signed)
    inv = surface_invariants(md.surface)
    checks = invariant_checks(md, entry.singularity)
    if entry.expect:
        got = (st.delta, st.r, st.g)
        checks.insert(0, _check("expected delta r g", got == entry.expect, f"got {got}, expected {entry.expect}"))
    if "split" in entry.data:
        want = tuple(int(v) for v in entry.data["split"].split())
        checks.append(_check("region split", (st.n_plus, st.n_minus) == want, f"got {(st.n_plus, st.n_minus)}"))
    if "signs" in entry.data and mat.geometric_signs is not None:
        want = 1 if entry.data["signs"].strip() == "+" else -1
        inner = [f.id for f in faces(mat.divide) if f.interior]
        ok = all(mat.geometric_signs[i] == want for i in inner)
        checks.append(_check("region signs", ok, str({i: mat.geometric_signs[i] for i in inner})))
    if mat.geometric_signs is not None:
        agree = all(mat.signed.sign(i) == s for i, s in mat.geometric_signs.items())
        checks.append(_check("coloring matches f", agree))
    return EntryReport(
        entry.name,
        {"delta": st.delta, "r": st.r, "g": st.g, "mu": st.mu,
         "n_plus": st.n_plus, "n_dot": st.n_dot, "n_minus": st.n_minus},
        {"euler": inv.euler, "genus": inv.genus, "boundary": inv.boundary_components, "orientable": inv.orientable},
        gram_digest(md.gram), bareiss_rank(md.gram), md.char_poly, md.lefschetz, checks)


def run_manifest(path: str | os.PathLike) -> RunReport:
    return RunReport([run_entry(e) for e in load_manifest(path)])
