"""Self-contained SVG line charts for convergence traces.

No plotting dependency: the byte output is a pure function of the data, so
rerunning a seeded experiment reproduces the artifact exactly.
"""

from __future__ import annotations

import math
from typing import Dict, List, Sequence

WIDTH, HEIGHT = 640, 440
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 70, 20, 30, 50
COLORS = ("#c0392b", "#2471a3", "#1e8449", "#7d3c98")


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def render_line_chart(x: Sequence[float], series: Dict[str, List[float]],
                      title: str = "", x_label: str = "iteration",
                      y_label: str = "", log_y: bool = True) -> str:
    """Plot each named series against x.  With log_y, non-positive points
    are dropped (they have no place on a log axis)."""
    pts = {}
    for name, ys in series.items():
        keep = [(xi, yi) for xi, yi in zip(x, ys)
                if yi is not None and (not log_y or yi > 0)]
        if keep:
            pts[name] = keep
    if not pts:
        raise ValueError("nothing to plot: no positive finite data points")

    all_x = [p[0] for keep in pts.values() for p in keep]
    all_y = [p[1] for keep in pts.values() for p in keep]
    x_lo, x_hi = min(all_x), max(all_x)
    if x_lo == x_hi:
        x_lo, x_hi = x_lo - 0.5, x_hi + 0.5
    if log_y:
        y_lo = math.floor(math.log10(min(all_y)))
        y_hi = math.ceil(math.log10(max(all_y)))
        if y_lo == y_hi:
            y_hi += 1
    else:
        y_lo, y_hi = min(all_y), max(all_y)
        if y_lo == y_hi:
            y_lo, y_hi = y_lo - 0.5, y_hi + 0.5

    plot_w = WIDTH - MARGIN_L - MARGIN_R
    plot_h = HEIGHT - MARGIN_T - MARGIN_B

    def px(xv: float) -> float:
        return MARGIN_L + (xv - x_lo) / (x_hi - x_lo) * plot_w

    def py(yv: float) -> float:
        t = math.log10(yv) if log_y else yv
        return MARGIN_T + (y_hi - t) / (y_hi - y_lo) * plot_h

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" '
           f'height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">',
           f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>']
    if title:
        out.append(f'<text x="{WIDTH / 2:.0f}" y="20" text-anchor="middle" '
                   f'font-family="sans-serif" font-size="14">{title}</text>')

    # frame
    out.append(f'<rect x="{MARGIN_L}" y="{MARGIN_T}" width="{plot_w}" '
               f'height="{plot_h}" fill="none" stroke="black"/>')

    # y ticks: decades on log scale, 5 even steps otherwise
    if log_y:
        ticks = list(range(int(y_lo), int(y_hi) + 1))
        labels = [f"1e{t}" for t in ticks]
        tick_vals = [10.0 ** t for t in ticks]
    else:
        tick_vals = [y_lo + i * (y_hi - y_lo) / 4 for i in range(5)]
        labels = [f"{v:.3g}" for v in tick_vals]
    for v, lab in zip(tick_vals, labels):
        yy = py(v)
        out.append(f'<line x1="{MARGIN_L - 4}" y1="{_fmt(yy)}" x2="{MARGIN_L}" '
                   f'y2="{_fmt(yy)}" stroke="black"/>')
        out.append(f'<text x="{MARGIN_L - 8}" y="{_fmt(yy + 4)}" '
                   f'text-anchor="end" font-family="sans-serif" '
                   f'font-size="11">{lab}</text>')

    n_xticks = min(8, max(2, int(x_hi - x_lo)))
    for i in range(n_xticks + 1):
        xv = x_lo + i * (x_hi - x_lo) / n_xticks
        xx = px(xv)
        out.append(f'<line x1="{_fmt(xx)}" y1="{HEIGHT - MARGIN_B}" '
                   f'x2="{_fmt(xx)}" y2="{HEIGHT - MARGIN_B + 4}" stroke="black"/>')
        out.append(f'<text x="{_fmt(xx)}" y="{HEIGHT - MARGIN_B + 18}" '
                   f'text-anchor="middle" font-family="sans-serif" '
                   f'font-size="11">{xv:.0f}</text>')

    out.append(f'<text x="{MARGIN_L + plot_w / 2:.0f}" y="{HEIGHT - 12}" '
               f'text-anchor="middle" font-family="sans-serif" '
               f'font-size="12">{x_label}</text>')
    if y_label:
        out.append(f'<text x="16" y="{MARGIN_T + plot_h / 2:.0f}" '
                   f'text-anchor="middle" font-family="sans-serif" '
                   f'font-size="12" transform="rotate(-90 16 '
                   f'{MARGIN_T + plot_h / 2:.0f})">{y_label}</text>')

    for i, (name, keep) in enumerate(pts.items()):
        color = COLORS[i % len(COLORS)]
        coords = " ".join(f"{_fmt(px(xi))},{_fmt(py(yi))}" for xi, yi in keep)
        out.append(f'<polyline points="{coords}" fill="none" '
                   f'stroke="{color}" stroke-width="1.5"/>')
        ly = MARGIN_T + 16 + 16 * i
        lx = WIDTH - MARGIN_R - 150
        out.append(f'<line x1="{lx}" y1="{ly - 4}" x2="{lx + 24}" '
                   f'y2="{ly - 4}" stroke="{color}" stroke-width="1.5"/>')
        out.append(f'<text x="{lx + 30}" y="{ly}" font-family="sans-serif" '
                   f'font-size="11">{name}</text>')

    out.append("</svg>")
    return "\n".join(out) + "\n"
