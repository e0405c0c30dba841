"""CSV and self-contained SVG output for activity sweeps."""

from __future__ import annotations

import csv
import io
import math
from typing import Iterable, Optional, Sequence

from .bifurcation import SweepPoint

CSV_HEADER = ("lambda", "count", "z1_sym", "z1_low", "z1_high")

WIDTH, HEIGHT = 800, 600
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 80, 30, 40, 60
_COLORS = {"z1_sym": "#1f77b4", "z1_low": "#d62728", "z1_high": "#2ca02c"}


def fmt(v: Optional[float]) -> str:
    """12 significant digits; empty for a missing value."""
    if v is None:
        return ""
    return f"{v:.12g}"


def sweep_to_csv(points: Iterable[SweepPoint]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for p in points:
        count = "failed" if p.failed else str(p.count)
        w.writerow([fmt(p.lam), count, fmt(p.z1_sym), fmt(p.z1_low), fmt(p.z1_high)])
    return buf.getvalue()


def _nice_ticks(lo: float, hi: float, n: int = 6) -> list[float]:
    if hi <= lo:
        hi = lo + 1.0
    raw = (hi - lo) / max(n - 1, 1)
    mag = 10 ** math.floor(math.log10(raw))
    step = next(m * mag for m in (1, 2, 2.5, 5, 10) if m * mag >= raw)
    start = math.ceil(lo / step - 1e-9) * step
    ticks = []
    v = start
    while v <= hi + 1e-9 * step:
        ticks.append(0.0 if abs(v) < 1e-12 * step else v)
        v += step
    return ticks


def _segments(xs: Sequence[float], ys: Sequence[Optional[float]]):
    seg: list[tuple[float, float]] = []
    for x, y in zip(xs, ys):
        if y is None:
            if seg:
                yield seg
            seg = []
        else:
            seg.append((x, y))
    if seg:
        yield seg


def sweep_to_svg(points: Sequence[SweepPoint], title: str = "") -> str:
    """z1 of each branch against lambda, one polyline per contiguous run."""
    pts = [p for p in points if not p.failed]
    xs = [p.lam for p in pts]
    series = {name: [getattr(p, name) for p in pts] for name in ("z1_sym", "z1_low", "z1_high")}
    yvals = [v for ys in series.values() for v in ys if v is not None]
    x0, x1 = (min(xs), max(xs)) if xs else (0.0, 1.0)
    y0, y1 = (min(0.0, min(yvals)), max(yvals)) if yvals else (0.0, 1.0)
    if x1 <= x0:
        x1 = x0 + 1.0
    if y1 <= y0:
        y1 = y0 + 1.0
    pw, ph = WIDTH - MARGIN_L - MARGIN_R, HEIGHT - MARGIN_T - MARGIN_B

    def sx(x):
        return MARGIN_L + (x - x0) / (x1 - x0) * pw

    def sy(y):
        return MARGIN_T + ph - (y - y0) / (y1 - y0) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<rect x="{MARGIN_L}" y="{MARGIN_T}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
    ]
    if title:
        out.append(f'<text x="{WIDTH / 2:.2f}" y="24" text-anchor="middle" font-size="16">{_esc(title)}</text>')
    for tx in _nice_ticks(x0, x1):
        if x0 - 1e-12 <= tx <= x1 + 1e-12:
            X = sx(tx)
            out.append(f'<line x1="{X:.2f}" y1="{MARGIN_T + ph}" x2="{X:.2f}" y2="{MARGIN_T + ph + 6}" stroke="black"/>')
            out.append(f'<text x="{X:.2f}" y="{MARGIN_T + ph + 22}" text-anchor="middle" font-size="12">{tx:.6g}</text>')
    for ty in _nice_ticks(y0, y1):
        if y0 - 1e-12 <= ty <= y1 + 1e-12:
            Y = sy(ty)
            out.append(f'<line x1="{MARGIN_L - 6}" y1="{Y:.2f}" x2="{MARGIN_L}" y2="{Y:.2f}" stroke="black"/>')
            out.append(f'<text x="{MARGIN_L - 10}" y="{Y + 4:.2f}" text-anchor="end" font-size="12">{ty:.6g}</text>')
    out.append(f'<text x="{MARGIN_L + pw / 2:.2f}" y="{HEIGHT - 15}" text-anchor="middle" font-size="14">lambda</text>')
    out.append(
        f'<text x="20" y="{MARGIN_T + ph / 2:.2f}" text-anchor="middle" font-size="14" '
        f'transform="rotate(-90 20 {MARGIN_T + ph / 2:.2f})">z1</text>'
    )
    for name, ys in series.items():
        for seg in _segments(xs, ys):
            coords = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in seg)
            out.append(f'<polyline points="{coords}" fill="none" stroke="{_COLORS[name]}" stroke-width="2"/>')
    for i, name in enumerate(series):
        ly = MARGIN_T + 15 + 18 * i
        lx = MARGIN_L + pw - 110
        out.append(f'<line x1="{lx}" y1="{ly}" x2="{lx + 25}" y2="{ly}" stroke="{_COLORS[name]}" stroke-width="2"/>')
        out.append(f'<text x="{lx + 32}" y="{ly + 4}" font-size="12">{name}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _esc(s: str) -> str:
    return s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
