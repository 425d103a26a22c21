"""SVG drawing of traced divides."""
from __future__ import annotations

from .tracer import TracedGeometry


def divide_svg(tg: TracedGeometry, signs: dict[int, int] | None = None,
               points: dict[int, tuple[float, float]] | None = None, size: int = 480) -> str:
    """Boundary circle, branches, crossings and optional cell sign marks."""
    rho = tg.radius
    pad = 10
    k = (size - 2 * pad) / (2 * rho)

    def tr(x, y):
        return pad + (x + rho) * k, pad + (rho - y) * k

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">']
    cx, cy = tr(0.0, 0.0)
    out.append(f'<circle cx="{cx:.2f}" cy="{cy:.2f}" r="{rho * k:.2f}" fill="none" stroke="#888"/>')
    for line in tg.branches:
        step = max(1, len(line) // 2000)
        pts = list(line[::step]) + [line[-1]]
        path = " ".join(f"{a:.2f},{b:.2f}" for a, b in (tr(x, y) for x, y in pts))
        out.append(f'<polyline points="{path}" fill="none" stroke="#000" stroke-width="1.5"/>')
    for c in tg.crossings:
        x, y = tr(*c.point)
        out.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="3" fill="#d35400"/>')
    if signs and points:
        for rid, sgn in sorted(signs.items()):
            if rid in points:
                x, y = tr(*points[rid])
                color = "#c0392b" if sgn > 0 else "#2471a3"
                mark = "+" if sgn > 0 else "&#8722;"
                out.append(f'<text x="{x:.2f}" y="{y:.2f}" fill="{color}" font-size="12" '
                           f'text-anchor="middle" dominant-baseline="middle">{mark}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
