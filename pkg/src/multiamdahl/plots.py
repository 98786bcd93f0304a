"""Self-contained SVG charts (no external assets, inline styling only)."""

from __future__ import annotations

import math
from xml.sax.saxutils import escape

import numpy as np

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#17becf")
WIDTH, HEIGHT = 640, 420
MARGIN = dict(left=70, right=150, top=40, bottom=60)


class _Axes:
    def __init__(self, xlim, ylim, xlog=False):
        self.xlog = xlog
        self.x0, self.x1 = (math.log10(v) for v in xlim) if xlog else xlim
        self.y0, self.y1 = ylim
        self.pw = WIDTH - MARGIN["left"] - MARGIN["right"]
        self.ph = HEIGHT - MARGIN["top"] - MARGIN["bottom"]

    def px(self, x):
        x = np.log10(x) if self.xlog else np.asarray(x, dtype=float)
        return MARGIN["left"] + (x - self.x0) / (self.x1 - self.x0) * self.pw

    def py(self, y):
        y = np.asarray(y, dtype=float)
        return MARGIN["top"] + (1.0 - (y - self.y0) / (self.y1 - self.y0)) * self.ph


def _nice_ticks(lo, hi, n=5):
    span = hi - lo
    if span <= 0:
        return [lo]
    raw = span / n
    mag = 10 ** math.floor(math.log10(raw))
    step = min((m * mag for m in (1, 2, 2.5, 5, 10) if m * mag >= raw), default=10 * mag)
    start = math.ceil(lo / step) * step
    return [round(start + k * step, 12) for k in range(int((hi - start) / step + 1e-9) + 1)]


def _tick_label(v):
    return format(v, ".3g")


def _frame(ax: _Axes, title, xlabel, ylabel, xticks=True) -> list[str]:
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="Helvetica, Arial, sans-serif" font-size="12">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{WIDTH / 2:.1f}" y="22" text-anchor="middle" font-size="14">{escape(title)}</text>',
    ]
    l, t = MARGIN["left"], MARGIN["top"]
    out.append(f'<rect x="{l}" y="{t}" width="{ax.pw}" height="{ax.ph}" fill="none" stroke="black"/>')
    if not xticks:
        xt = []
    elif ax.xlog:
        xt = [10.0 ** k for k in range(math.floor(ax.x0), math.ceil(ax.x1) + 1)]
        xt = [v for v in xt if ax.x0 - 1e-9 <= math.log10(v) <= ax.x1 + 1e-9]
    else:
        xt = _nice_ticks(ax.x0, ax.x1)
    for v in xt:
        x = float(ax.px(v))
        out.append(f'<line x1="{x:.1f}" y1="{t + ax.ph}" x2="{x:.1f}" y2="{t + ax.ph + 5}" stroke="black"/>')
        out.append(f'<text x="{x:.1f}" y="{t + ax.ph + 18}" text-anchor="middle">{_tick_label(v)}</text>')
    for v in _nice_ticks(ax.y0, ax.y1):
        y = float(ax.py(v))
        out.append(f'<line x1="{l - 5}" y1="{y:.1f}" x2="{l}" y2="{y:.1f}" stroke="black"/>')
        out.append(f'<text x="{l - 8}" y="{y + 4:.1f}" text-anchor="end">{_tick_label(v)}</text>')
    out.append(
        f'<text x="{l + ax.pw / 2:.1f}" y="{HEIGHT - 15}" text-anchor="middle">{escape(xlabel)}</text>'
    )
    out.append(
        f'<text x="18" y="{t + ax.ph / 2:.1f}" text-anchor="middle" '
        f'transform="rotate(-90 18 {t + ax.ph / 2:.1f})">{escape(ylabel)}</text>'
    )
    return out


def _legend(labels, kind="line") -> list[str]:
    out = []
    x = WIDTH - MARGIN["right"] + 12
    for k, label in enumerate(labels):
        y = MARGIN["top"] + 10 + 18 * k
        color = PALETTE[k % len(PALETTE)]
        if kind == "line":
            out.append(f'<line x1="{x}" y1="{y}" x2="{x + 18}" y2="{y}" stroke="{color}" stroke-width="2"/>')
        else:
            out.append(f'<rect x="{x}" y="{y - 6}" width="18" height="12" fill="{color}"/>')
        out.append(f'<text x="{x + 24}" y="{y + 4}">{escape(str(label))}</text>')
    return out


def _points(ax, x, y):
    return " ".join(f"{px:.2f},{py:.2f}" for px, py in zip(ax.px(x), ax.py(y)))


def line_chart(series, title, xlabel, ylabel, xlog=False, ylim=None, markers=None) -> str:
    """``series`` is a list of ``(label, x, y)``; ``markers`` a list of ``(x, y)`` dots."""
    xs = np.concatenate([np.asarray(x, float) for _, x, _ in series])
    ys = np.concatenate([np.asarray(y, float) for _, _, y in series])
    finite = np.isfinite(ys)
    if ylim is None:
        lo, hi = float(ys[finite].min()), float(ys[finite].max())
        pad = 0.05 * (hi - lo or 1.0)
        ylim = (lo - pad, hi + pad)
    ax = _Axes((float(xs.min()), float(xs.max())), ylim, xlog=xlog)
    out = _frame(ax, title, xlabel, ylabel)
    for k, (_, x, y) in enumerate(series):
        y = np.clip(np.asarray(y, float), ylim[0], ylim[1])
        out.append(
            f'<polyline fill="none" stroke="{PALETTE[k % len(PALETTE)]}" stroke-width="2" '
            f'points="{_points(ax, x, y)}"/>'
        )
    if markers:
        mx = [m[0] for m in markers]
        my = [m[1] for m in markers]
        out.append(f'<polyline fill="none" stroke="red" stroke-dasharray="4 3" points="{_points(ax, mx, my)}"/>')
        for px, py in zip(ax.px(mx), ax.py(my)):
            out.append(f'<circle cx="{px:.2f}" cy="{py:.2f}" r="4" fill="red"/>')
    out += _legend([label for label, _, _ in series])
    out.append("</svg>")
    return "\n".join(out) + "\n"


def stacked_columns(labels, categories, shares, title, xlabel, ylabel) -> str:
    """One stacked column per entry of ``labels``; ``shares[k, j]`` is category ``j``."""
    shares = np.asarray(shares, float)
    m = len(labels)
    ax = _Axes((0.0, float(m)), (0.0, 1.0))
    out = _frame(ax, title, xlabel, ylabel, xticks=False)
    bw = ax.pw / m
    for k in range(m):
        base = 0.0
        x = MARGIN["left"] + k * bw
        for j in range(len(categories)):
            v = shares[k, j] if np.isfinite(shares[k, j]) else 0.0
            y_top, y_bot = float(ax.py(base + v)), float(ax.py(base))
            out.append(
                f'<rect x="{x + 0.1 * bw:.2f}" y="{y_top:.2f}" width="{0.8 * bw:.2f}" '
                f'height="{max(y_bot - y_top, 0):.2f}" fill="{PALETTE[j % len(PALETTE)]}"/>'
            )
            base += v
        cx = x + bw / 2
        cy = MARGIN["top"] + ax.ph + 14
        out.append(
            f'<text x="{cx:.1f}" y="{cy:.1f}" text-anchor="end" font-size="9" '
            f'transform="rotate(-45 {cx:.1f} {cy:.1f})">{escape(str(labels[k]))}</text>'
        )
    out += _legend(categories, kind="box")
    out.append("</svg>")
    return "\n".join(out) + "\n"
