"""Regenerate the bundled corpus DTF files and the manifest.

    python3 scripts/build_corpus.py [--out src/divides/corpus]

Every DTF except fig11 is produced by the tracer from an explicit polynomial
or parametrization; fig11 is derived from fig9 by cutting one edge.
"""
from __future__ import annotations

import argparse
from pathlib import Path

from divides.divide import Branch, Divide, canonical, serialize_dtf
from divides.poly import BivariatePoly, ParamCurve
from divides.regions import faces, two_color, validate
from divides.tracer import from_geometry, trace_implicit, trace_param

FAMILY = (
    "y^3 - x^5 - 125/8*s^3*x^6 + (375/64*s^6 + 245/16*s^4 - 25/4*s^2)*x^5 + 75/4*s^2*x^4*y"
    " + (2695/128*s^7 + 21625/256*s^9 - 35/8*s^3 - 4847/160*s^5)*x^4"
    " - (5*s + 159/4*s^3 - 75/4*s^5)*x^3*y - 15/2*s*x^2*y^2"
    " - (2703/500*s^6 + 1281/32*s^8 - 29625/512*s^12 + 2345/128*s^10)*x^3"
    " - (17625/256*s^8 + 3583/32*s^6 + 5793/400*s^4)*x^2*y - (95/2*s^4 + 53/10*s^2)*x*y^2"
    " - (997/4000*s^9 + 42875/2048*s^15 + 4575/256*s^13 + 857/320*s^11)*x^2"
    " - (177325/2048*s^11 + 1803/200*s^7 + 35441/512*s^9)*x*y - (6395/128*s^7 + 317/40*s^5)*y^2"
    " + (19871/1280*s^14 + 10165/1024*s^16 - 59125/4096*s^18 + 4171/2000*s^12)*x"
    " + (51025/4096*s^12 + 54223/25600*s^10 - 153725/16384*s^14)*y"
)

FIG9 = ("T(4,t)/8", "s*T(6,t)/32 + T(7,t)/64")

# implicit equation of the same family, monic in y
FIG9_IMPLICIT = (
    "s^4*x^6 - 3/128*s^4*x^4 + 1/1024*s^4*x^3 - 2*s^2*y^2*x^3 - 4*s*y*x^5 - x^7 + 9/65536*s^4*x^2 - 3/262144*s^4*x + 3/128*s^2*y^2*x"
    " - 1/4096*s^2*x^3 + 5/64*s*y*x^3 + 7/256*x^5 + 1/4194304*s^4 - 1/1024*s^2*y^2 - 1/1024*s*y*x^2 + y^4 + 3/1048576*s^2*x - 5/16384*s*y*x - 7/32768*x^3 - 1/8388608*s^2 + 1/131072*s*y - 1/4096*y^2 + 7/16777216*x + 1/134217728"
)
FIG1 = (("T(5,t)/16", "T(3,t)/4"), ("T(3,t)/4", "T(5,t)/16"))

MANIFEST = f"""\
# Bundled corpus.  Radii are engineering choices: each disk contains every
# double point of the deformation and meets no other real component.

[a1]
kind = dtf
path = a1.dtf
expect = 1 2 0
singularity = yes

[a2]
kind = dtf
path = a2.dtf
expect = 1 1 1
singularity = yes

[d5]
kind = dtf
path = d5.dtf
expect = 3 2 2
split = 1 1
singularity = yes

[fig1]
kind = dtf
path = fig1.dtf
expect = 17 2 16
singularity = yes

[fig9]
kind = dtf
path = fig9.dtf
expect = 8 1 8
singularity = yes

[fig11]
kind = dtf
path = fig11.dtf
expect = 8 2 7
singularity = no

[xy]
kind = implicit
expr = x*y
radius = 1
expect = 1 2 0
singularity = yes

[d5_traced]
kind = implicit
expr = (x-1)*(x^3+5*x^2-y^2)
radius = 6
expect = 3 2 2
singularity = yes

[fig9_param]
kind = param
curve = {FIG9[0]} ; {FIG9[1]}
params = s=1
radius = 1/5
expect = 8 1 8
singularity = yes

[fig9_implicit]
kind = implicit
expr = {FIG9_IMPLICIT}
params = s=1
radius = 1/5
expect = 8 1 8
singularity = yes

[family_plus]
kind = implicit
expr = {FAMILY}
params = s=1
radius = 10
expect = 4 1 4
signs = +
singularity = yes

[family_minus]
kind = implicit
expr = {FAMILY}
params = s=-1
radius = 10
expect = 4 1 4
signs = -
singularity = yes
"""


def cut_edge(d: Divide, edge: int) -> Divide:
    """Cut a divide edge of a one-branch divide into two branches.

    The new endpoints are inserted into the boundary arc of the cell on one
    side of the edge; the placement that yields a valid planar divide wins.
    """
    if d.r != 1:
        raise ValueError("cut_edge expects a single branch")
    b = d.branches[0]
    k = edge  # edge k runs from visit k-1 (or the start) to visit k (or the end)
    left = Branch("b0", b.visits[:k])
    right = Branch("b1", b.visits[k:])
    old = {b.start: "b0.s", b.end: "b1.e"}
    base = [old[t] for t in d.boundary]
    found = []
    for pos in range(len(base) + 1):
        for pair in (["b0.e", "b1.s"], ["b1.s", "b0.e"]):
            bnd = base[:pos] + pair + base[pos:]
            cand = canonical(Divide((left, right), d.orientation, tuple(bnd)))
            if validate(cand).ok:
                found.append(cand)
    unique = {serialize_dtf(c) for c in found}
    if len(unique) != 1:
        raise RuntimeError(f"expected one valid placement of the cut, found {len(unique)}")
    return found[0]


def fig11_from_fig9(fig9: Divide) -> tuple[Divide, int, int]:
    sd = two_color(fig9)
    regs = faces(fig9)
    left = {}
    for reg in regs:
        for a in reg.walk:
            if a < fig9.n_darts:
                left[a] = reg
    for reg in reversed(sd.negative):
        for a in reg.walk:
            other = left[a ^ 1]
            if not other.interior:
                return cut_edge(fig9, a >> 1), reg.id, a >> 1
    raise RuntimeError("no negative region touches a boundary cell")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default=str(Path(__file__).resolve().parents[1] / "src" / "divides" / "corpus"))
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    made = {
        "a1": from_geometry(trace_implicit(BivariatePoly.parse("x*y"), 1.0)),
        "a2": from_geometry(trace_param(ParamCurve.parse("t^2-1", "t^3-t"), 2.0)),
        "d5": from_geometry(trace_implicit(BivariatePoly.parse("(x+1)*(x^3+5*x^2-y^2)"), 6.0)),
        "fig1": from_geometry(trace_param([ParamCurve.parse(*c) for c in FIG1], 0.5)),
        "fig9": from_geometry(trace_param(ParamCurve.parse(*FIG9, params={"s": 1}), 0.2)),
    }
    made["fig11"], region, edge = fig11_from_fig9(made["fig9"])
    headers = {
        "a1": "# xy on the unit disk",
        "a2": "# (t^2-1, t^3-t), radius 2",
        "d5": "# (x+1)(x^3+5x^2-y^2), radius 6",
        "fig1": "# (T5(t)/16, T3(t)/4) and (T3(u)/4, T5(u)/16), radius 1/2",
        "fig9": "# (T4(t)/8, T6(t)/32 + T7(t)/64), radius 1/5",
        "fig11": f"# fig9 with edge {edge} cut open; region R{region} of fig9 merges with the outside",
    }
    for name, d in made.items():
        rep = validate(d)
        assert rep.ok, (name, rep.format())
        (out / f"{name}.dtf").write_text(headers[name] + "\n" + serialize_dtf(d), encoding="utf-8")
        print(f"{name}: delta={d.delta} r={d.r} g={rep.g}")
    (out / "manifest.ini").write_text(MANIFEST, encoding="utf-8")


if __name__ == "__main__":
    main()
