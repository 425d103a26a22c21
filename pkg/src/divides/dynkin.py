"""Signed Dynkin diagram export: graph text and SVG."""
from __future__ import annotations

from dataclasses import dataclass
from xml.sax.saxutils import escape

COLORS = {"red": "#c0392b", "white": "#ffffff", "blue": "#2471a3"}


@dataclass(frozen=True)
class DynkinDiagram:
    vertices: tuple[tuple[int, str, str, tuple[float, float] | None], ...]   # (id, color, provenance, position)
    edges: tuple[tuple[int, int, int], ...]                                   # (i, j, G[i][j]) with i < j

    def to_text(self) -> str:
        lines = []
        for i, color, prov, pos in self.vertices:
            extra = f" {pos[0]:.6f} {pos[1]:.6f}" if pos is not None else ""
            lines.append(f"v {i} {color} {prov}{extra}")
        for i, j, w in self.edges:
            lines.append(f"e {i} {j} {w:+d}")
        return "\n".join(lines) + "\n"


def dynkin(cycles, G, positions: dict | None = None) -> DynkinDiagram:
    """Diagram of a cycle system.

    ``positions`` maps provenance strings (crossing ids, ``R<id>``) to planar
    points; without them a layered layout is used (one column per color).
    """
    verts = []
    for i, c in enumerate(cycles):
        pos = positions.get(c.provenance) if positions else None
        verts.append((i, c.color, c.provenance, None if pos is None else (float(pos[0]), float(pos[1]))))
    edges = tuple((i, j, G[i][j]) for i in range(len(G)) for j in range(i + 1, len(G)) if G[i][j])
    return DynkinDiagram(tuple(verts), edges)


def parse_dynkin_text(text: str) -> DynkinDiagram:
    verts, edges = [], []
    for line in text.splitlines():
        parts = line.split()
        if not parts:
            continue
        if parts[0] == "v":
            pos = (float(parts[4]), float(parts[5])) if len(parts) >= 6 else None
            verts.append((int(parts[1]), parts[2], parts[3], pos))
        elif parts[0] == "e":
            edges.append((int(parts[1]), int(parts[2]), int(parts[3])))
        else:
            raise ValueError(f"unrecognized line: {line!r}")
    return DynkinDiagram(tuple(verts), tuple(edges))


def _layout(d: DynkinDiagram) -> dict[int, tuple[float, float]]:
    if d.vertices and all(v[3] is not None for v in d.vertices):
        return {v[0]: (v[3][0], -v[3][1]) for v in d.vertices}
    column = {"red": 0, "white": 1, "blue": 2}
    rows: dict[str, int] = {}
    out = {}
    for i, color, _, _ in d.vertices:
        k = rows.get(color, 0)
        rows[color] = k + 1
        out[i] = (float(column.get(color, 3)), float(k))
    return out


def dynkin_svg(d: DynkinDiagram, size: int = 480) -> str:
    pos = _layout(d)
    if pos:
        xs = [p[0] for p in pos.values()]
        ys = [p[1] for p in pos.values()]
        x0, x1, y0, y1 = min(xs), max(xs), min(ys), max(ys)
    else:
        x0 = x1 = y0 = y1 = 0.0
    span = max(x1 - x0, y1 - y0, 1e-9)
    pad = 30

    def tr(p):
        return (pad + (p[0] - x0) / span * (size - 2 * pad), pad + (p[1] - y0) / span * (size - 2 * pad))

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">']
    for i, j, w in d.edges:
        (ax, ay), (bx, by) = tr(pos[i]), tr(pos[j])
        dash = "" if w > 0 else ' stroke-dasharray="4 3"'
        out.append(f'<line x1="{ax:.2f}" y1="{ay:.2f}" x2="{bx:.2f}" y2="{by:.2f}" stroke="#333"{dash}/>')
        if abs(w) != 1:
            out.append(f'<text x="{(ax + bx) / 2:.2f}" y="{(ay + by) / 2:.2f}" font-size="10">{w}</text>')
    for i, color, prov, _ in d.vertices:
        x, y = tr(pos[i])
        out.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="7" fill="{COLORS.get(color, "#999")}" stroke="#000"/>')
        out.append(f'<text x="{x + 9:.2f}" y="{y - 9:.2f}" font-size="10">{escape(prov)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
