"""Minimal static SVG line-plot writer (no plotting dependencies).

Deterministic output: same data, same bytes.
"""

from __future__ import annotations

import math

_W, _H = 680, 460
_ML, _MR, _MT, _MB = 78, 24, 40, 58
_COLORS = ("#2a7e3e", "#2c5aa0", "#b0452b", "#6a2ca0")


def _fmt(x):
    return f"{x:.2f}"


def _nice_ticks(lo, hi, n=5):
    if hi <= lo:
        hi = lo + 1.0
    raw = (hi - lo) / max(1, n)
    mag = 10.0 ** math.floor(math.log10(raw))
    for m in (1.0, 2.0, 2.5, 5.0, 10.0):
        if raw <= m * mag:
            step = m * mag
            break
    t0 = math.ceil(lo / step) * step
    ticks = []
    t = t0
    while t <= hi + 1e-12 * step:
        ticks.append(round(t / step) * step)
        t += step
    return ticks


def write_svg_plot(path, series, xlabel="", ylabel="", title="",
                   hlines=(), xlog=False):
    """Write a line plot.

    series: iterable of (xs, ys, label); hlines: iterable of (y, label)
    drawn dashed.
    """
    xs_all = [x for s in series for x in s[0]]
    ys_all = [y for s in series for y in s[1]]
    ys_all += [h[0] for h in hlines]
    if xlog:
        xs_all = [math.log10(x) for x in xs_all]
    x_lo, x_hi = min(xs_all), max(xs_all)
    y_lo, y_hi = min(ys_all), max(ys_all)
    pad = 0.06 * (y_hi - y_lo or 1.0)
    y_lo, y_hi = y_lo - pad, y_hi + pad
    if x_hi == x_lo:
        x_hi = x_lo + 1.0

    def px(x):
        if xlog:
            x = math.log10(x)
        return _ML + (x - x_lo) / (x_hi - x_lo) * (_W - _ML - _MR)

    def py(y):
        return _H - _MB - (y - y_lo) / (y_hi - y_lo) * (_H - _MT - _MB)

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{_W}" height="{_H}" viewBox="0 0 {_W} {_H}">',
        f'<rect width="{_W}" height="{_H}" fill="white"/>',
        f'<text x="{_W // 2}" y="24" text-anchor="middle" '
        f'font-family="sans-serif" font-size="15">{title}</text>',
    ]
    # axes box
    out.append(
        f'<rect x="{_ML}" y="{_MT}" width="{_W - _ML - _MR}" '
        f'height="{_H - _MT - _MB}" fill="none" stroke="black"/>')
    # x ticks
    if xlog:
        d0, d1 = math.floor(x_lo), math.ceil(x_hi)
        xticks = [10.0 ** d for d in range(int(d0), int(d1) + 1)
                  if x_lo - 1e-9 <= d <= x_hi + 1e-9]
    else:
        xticks = _nice_ticks(x_lo, x_hi)
    for t in xticks:
        x = px(t)
        out.append(f'<line x1="{_fmt(x)}" y1="{_H - _MB}" x2="{_fmt(x)}" '
                   f'y2="{_H - _MB + 5}" stroke="black"/>')
        lab = f"{t:g}"
        out.append(f'<text x="{_fmt(x)}" y="{_H - _MB + 20}" '
                   f'text-anchor="middle" font-family="sans-serif" '
                   f'font-size="12">{lab}</text>')
    for t in _nice_ticks(y_lo, y_hi):
        y = py(t)
        out.append(f'<line x1="{_ML - 5}" y1="{_fmt(y)}" x2="{_ML}" '
                   f'y2="{_fmt(y)}" stroke="black"/>')
        out.append(f'<text x="{_ML - 8}" y="{_fmt(y + 4)}" '
                   f'text-anchor="end" font-family="sans-serif" '
                   f'font-size="12">{t:g}</text>')
    out.append(f'<text x="{(_ML + _W - _MR) // 2}" y="{_H - 14}" '
               f'text-anchor="middle" font-family="sans-serif" '
               f'font-size="13">{xlabel}</text>')
    out.append(f'<text x="20" y="{(_MT + _H - _MB) // 2}" '
               f'text-anchor="middle" font-family="sans-serif" '
               f'font-size="13" transform="rotate(-90 20 '
               f'{(_MT + _H - _MB) // 2})">{ylabel}</text>')

    for y, label in hlines:
        out.append(f'<line x1="{_ML}" y1="{_fmt(py(y))}" x2="{_W - _MR}" '
                   f'y2="{_fmt(py(y))}" stroke="#555555" '
                   'stroke-dasharray="6 4"/>')
        if label:
            out.append(f'<text x="{_W - _MR - 4}" y="{_fmt(py(y) - 5)}" '
                       f'text-anchor="end" font-family="sans-serif" '
                       f'font-size="11" fill="#555555">{label}</text>')

    for i, (xs, ys, label) in enumerate(series):
        color = _COLORS[i % len(_COLORS)]
        pts = " ".join(f"{_fmt(px(x))},{_fmt(py(y))}"
                       for x, y in zip(xs, ys))
        out.append(f'<polyline points="{pts}" fill="none" '
                   f'stroke="{color}" stroke-width="1.5"/>')
        for x, y in zip(xs, ys):
            out.append(f'<circle cx="{_fmt(px(x))}" cy="{_fmt(py(y))}" '
                       f'r="3" fill="{color}"/>')
        if label:
            out.append(f'<text x="{_ML + 10}" y="{_MT + 18 + 16 * i}" '
                       f'font-family="sans-serif" font-size="12" '
                       f'fill="{color}">{label}</text>')
    out.append("</svg>")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(out) + "\n")
