"""Command-line interface: ``divides validate|invariants|trace|corpus|render``.

Exit codes: 0 success, 1 validation or invariant failure, 2 I/O or parse
error, 3 tracer error.
"""
from __future__ import annotations

import os
import sys
import tempfile
from pathlib import Path

import click

from .corpus import corpus_dir, run_manifest
from .divide import DTFError, parse_dtf, serialize_dtf
from .poly import BivariatePoly, ExprError, ParamCurve

EXIT_OK, EXIT_INVALID, EXIT_IO, EXIT_TRACE = 0, 1, 2, 3


def atomic_write(path: str | os.PathLike, text: str) -> None:
    """Write through a temporary file in the same directory, then rename."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent or ".")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def resolve(path: str) -> Path:
    """Paths of the form ``corpus/<file>`` fall back to the corpus directory."""
    p = Path(path)
    if p.exists():
        return p
    parts = p.parts
    if len(parts) >= 2 and parts[0] == "corpus":
        alt = corpus_dir().joinpath(*parts[1:])
        if alt.exists():
            return alt
    return p


def _fail(code: int, message: str):
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _load_divide(path: str):
    try:
        text = resolve(path).read_text(encoding="utf-8")
    except OSError as exc:
        _fail(EXIT_IO, f"cannot read {path}: {exc.strerror or exc}")
    try:
        return parse_dtf(text)
    except DTFError as exc:
        _fail(EXIT_IO, f"{path}: {exc}")


def _params(items) -> dict:
    out = {}
    for item in items:
        if "=" not in item:
            _fail(EXIT_IO, f"bad --set value {item!r}; use name=value")
        k, v = item.split("=", 1)
        out[k.strip()] = v.strip()
    return out


@click.group()
def main():
    """Divides, their Milnor fibers, vanishing cycles and monodromy."""


@main.command()
@click.argument("path")
def validate(path):
    """Check a DTF file: slots, planarity, connectivity, region count."""
    from .regions import validate as run_validate

    d = _load_divide(path)
    rep = run_validate(d)
    click.echo(rep.format(), nl=False)
    if rep.ok:
        click.echo(f"mu={d.mu}")
    sys.exit(EXIT_OK if rep.ok else EXIT_INVALID)


@main.command()
@click.argument("path")
@click.option("--charpoly", is_flag=True, help="Print the characteristic polynomial (highest degree first).")
@click.option("--gram", is_flag=True, help="Print the intersection matrix.")
@click.option("--monodromy", "show_T", is_flag=True, help="Print the monodromy matrix.")
@click.option("--surface", "surface_dump", type=click.Path(), help="Write the fatgraph dump to this file.")
@click.option("--dynkin", type=click.Path(), help="Write the Dynkin graph text to this file ('-' for stdout).")
@click.option("--svg", type=click.Path(), help="Write the Dynkin diagram as SVG to this file.")
@click.option("--sign-anchor", default=None, help="'<region id> <+|->' fixing one region sign.")
def invariants(path, charpoly, gram, show_T, surface_dump, dynkin, svg, sign_anchor):
    """Run the full pipeline on a DTF file."""
    from .corpus import invariant_checks
    from .dynkin import dynkin as make_dynkin, dynkin_svg
    from .monodromy import compute
    from .regions import stats, validate as run_validate
    from .surface import surface_invariants

    d = _load_divide(path)
    rep = run_validate(d)
    if not rep.ok:
        click.echo(rep.format(), nl=False)
        sys.exit(EXIT_INVALID)
    anchor = None
    if sign_anchor:
        try:
            rid, sg = sign_anchor.split()
            anchor = (int(rid), {"+": 1, "-": -1}[sg])
        except (ValueError, KeyError):
            _fail(EXIT_IO, f"bad --sign-anchor {sign_anchor!r}")
    try:
        md = compute(d, anchor)
    except ValueError as exc:
        _fail(EXIT_IO, str(exc))
    st = stats(md.signed)
    inv = surface_invariants(md.surface)
    click.echo(f"delta={st.delta} r={st.r} g={st.g} mu={st.mu} "
               f"n_plus={st.n_plus} n_dot={st.n_dot} n_minus={st.n_minus}")
    click.echo(f"euler={inv.euler} genus={inv.genus} boundary={inv.boundary_components} orientable={inv.orientable}")
    click.echo("cycles: " + " ".join(f"{c.color}:{c.provenance}" for c in md.cycles))
    click.echo(f"lefschetz={md.lefschetz}")
    if charpoly:
        click.echo(" ".join(str(c) for c in md.char_poly))
    if gram:
        click.echo("\n".join(" ".join(str(v) for v in row) for row in md.gram))
    if show_T:
        click.echo("\n".join(" ".join(str(v) for v in row) for row in md.monodromy))
    if surface_dump:
        atomic_write(surface_dump, md.surface.dump())
    if dynkin or svg:
        diagram = make_dynkin(md.cycles, md.gram)
        if dynkin == "-":
            click.echo(diagram.to_text(), nl=False)
        elif dynkin:
            atomic_write(dynkin, diagram.to_text())
        if svg:
            atomic_write(svg, dynkin_svg(diagram))
    failed = [c for c in invariant_checks(md) if not c.passed]
    for c in failed:
        click.echo(f"FAIL {c.name}: {c.detail}", err=True)
    sys.exit(EXIT_INVALID if failed else EXIT_OK)


@main.command()
@click.argument("expr", required=False)
@click.option("--param", "curves", nargs=2, multiple=True, metavar="X Y",
              help="Parametric curve x(t) y(t); repeat for several curves.")
@click.option("--radius", type=float, default=1.0, show_default=True)
@click.option("--set", "sets", multiple=True, metavar="NAME=VALUE", help="Exact value of a named parameter.")
@click.option("--out", type=click.Path(), help="Write the DTF here and geometry to <out>.geom.json.")
def trace(expr, curves, radius, sets, out):
    """Trace a divide from an implicit equation or parametric curves."""
    from .tracer import GeometryError, TracerError, from_geometry, trace_implicit, trace_param

    params = _params(sets)
    if bool(expr) == bool(curves):
        _fail(EXIT_IO, "give either an implicit expression or --param curves")
    try:
        if expr:
            source = BivariatePoly.parse(expr, params)
        else:
            source = [ParamCurve.parse(x, y, params) for x, y in curves]
    except (ExprError, ValueError, ZeroDivisionError) as exc:
        _fail(EXIT_IO, f"cannot parse expression: {exc}")
    try:
        tg = trace_implicit(source, radius) if expr else trace_param(source, radius)
        d = from_geometry(tg)
    except (TracerError, GeometryError) as exc:
        _fail(EXIT_TRACE, str(exc))
    text = serialize_dtf(d)
    if out:
        atomic_write(out, text)
        atomic_write(str(out) + ".geom.json", tg.to_json())
        click.echo(f"wrote {out}: delta={d.delta} r={d.r}")
    else:
        click.echo(text, nl=False)


@main.command()
@click.argument("manifest", required=False)
@click.option("--json", "json_out", type=click.Path(), help="Write the JSON report to this file.")
def corpus(manifest, json_out):
    """Run the pipeline and invariant suite on every manifest entry."""
    path = resolve(manifest) if manifest else corpus_dir() / "manifest.ini"
    try:
        report = run_manifest(path)
    except (OSError, ValueError) as exc:
        _fail(EXIT_IO, f"cannot load manifest {path}: {exc}")
    click.echo(report.summary(), nl=False)
    if json_out:
        atomic_write(json_out, report.to_json())
    sys.exit(EXIT_OK if report.ok else EXIT_INVALID)


@main.command()
@click.argument("geometry")
@click.option("--out", type=click.Path(), required=True, help="SVG file to write.")
@click.option("--expr", default=None, help="Implicit equation used to mark cell signs.")
@click.option("--set", "sets", multiple=True, metavar="NAME=VALUE")
def render(geometry, out, expr, sets):
    """Draw a traced divide from its geometry sidecar."""
    from .render import divide_svg
    from .tracer import GeometryError, TracedGeometry, TracerError, region_points, region_signs

    try:
        tg = TracedGeometry.from_json(resolve(geometry).read_text(encoding="utf-8"))
    except (OSError, ValueError, KeyError) as exc:
        _fail(EXIT_IO, f"cannot read geometry {geometry}: {exc}")
    signs = points = None
    try:
        if expr:
            f = BivariatePoly.parse(expr, _params(sets))
            signs = region_signs(tg, f)
            points = region_points(tg)
    except (ExprError, ValueError) as exc:
        _fail(EXIT_IO, str(exc))
    except (TracerError, GeometryError) as exc:
        _fail(EXIT_TRACE, str(exc))
    atomic_write(out, divide_svg(tg, signs, points))
    click.echo(f"wrote {out}")


if __name__ == "__main__":
    main()
