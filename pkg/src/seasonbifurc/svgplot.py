"""Self-contained SVG line charts.

Nothing fancy: fixed-size canvas, linear axes with nice-number ticks,
one polyline per series, optional dashed vertical markers.  Output is
deterministic (fixed float formatting, no timestamps), so charts can be
diffed byte for byte across runs.
"""

from __future__ import annotations

from xml.sax.saxutils import escape

import numpy as np

__all__ = ["line_chart"]

_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b")
_MARGIN = {"left": 64.0, "right": 18.0, "top": 30.0, "bottom": 46.0}


def _nice_ticks(lo: float, hi: float, target: int = 5) -> list[float]:
    if hi <= lo:
        return [lo]
    raw = (hi - lo) / target
    mag = 10.0 ** np.floor(np.log10(raw))
    for mult in (1.0, 2.0, 2.5, 5.0, 10.0):
        if raw <= mult * mag:
            step = mult * mag
            break
    first = np.ceil(lo / step) * step
    ticks = np.arange(first, hi + 0.5 * step, step)
    return [float(t) for t in ticks]


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def _tick_label(v: float) -> str:
    s = f"{v:.6g}"
    return "0" if s == "-0" else s


def line_chart(
    path,
    x,
    series,
    *,
    title: str = "",
    xlabel: str = "",
    ylabel: str = "",
    vlines=(),
    width: int = 720,
    height: int = 480,
) -> None:
    """Write a line chart to ``path``.

    Parameters
    ----------
    x : array_like
        Shared abscissa.
    series : sequence of (label, values) pairs
        One polyline per pair; NaN values split the line into segments.
    vlines : sequence of (x_position, label) pairs
        Dashed vertical markers (critical values, thresholds, ...).
    """
    x = np.asarray(x, dtype=float)
    series = [(str(lbl), np.asarray(y, dtype=float)) for lbl, y in series]
    for lbl, y in series:
        if y.shape != x.shape:
            raise ValueError(
                f"series {lbl!r} has shape {y.shape}, expected {x.shape}"
            )
    finite_y = np.concatenate(
        [y[np.isfinite(y)] for _, y in series]
        or [np.zeros(1)]
    )
    if finite_y.size == 0:
        finite_y = np.zeros(1)
    xmin, xmax = float(np.min(x)), float(np.max(x))
    for vx, _ in vlines:
        xmin, xmax = min(xmin, float(vx)), max(xmax, float(vx))
    ymin, ymax = float(np.min(finite_y)), float(np.max(finite_y))
    if xmax == xmin:
        xmin, xmax = xmin - 0.5, xmax + 0.5
    if ymax == ymin:
        ymin, ymax = ymin - 0.5, ymax + 0.5
    pad = 0.04 * (ymax - ymin)
    ymin, ymax = ymin - pad, ymax + pad
    x0, x1 = _MARGIN["left"], width - _MARGIN["right"]
    y0, y1 = height - _MARGIN["bottom"], _MARGIN["top"]

    def sx(v):
        return x0 + (v - xmin) / (xmax - xmin) * (x1 - x0)

    def sy(v):
        return y0 + (v - ymin) / (ymax - ymin) * (y1 - y0)

    out = []
    out.append(
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
        f'height="{height}" viewBox="0 0 {width} {height}">'
    )
    out.append(f'<rect width="{width}" height="{height}" fill="white"/>')
    if title:
        out.append(
            f'<text x="{_fmt(width / 2)}" y="20" text-anchor="middle" '
            f'font-family="sans-serif" font-size="14">{escape(title)}</text>'
        )
    # axes box and ticks
    out.append(
        f'<rect x="{_fmt(x0)}" y="{_fmt(y1)}" width="{_fmt(x1 - x0)}" '
        f'height="{_fmt(y0 - y1)}" fill="none" stroke="#333333"/>'
    )
    for t in _nice_ticks(xmin, xmax):
        px = sx(t)
        out.append(
            f'<line x1="{_fmt(px)}" y1="{_fmt(y0)}" x2="{_fmt(px)}" '
            f'y2="{_fmt(y0 + 5)}" stroke="#333333"/>'
        )
        out.append(
            f'<text x="{_fmt(px)}" y="{_fmt(y0 + 18)}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="11">{_tick_label(t)}</text>'
        )
    for t in _nice_ticks(ymin, ymax):
        py = sy(t)
        out.append(
            f'<line x1="{_fmt(x0 - 5)}" y1="{_fmt(py)}" x2="{_fmt(x0)}" '
            f'y2="{_fmt(py)}" stroke="#333333"/>'
        )
        out.append(
            f'<text x="{_fmt(x0 - 8)}" y="{_fmt(py + 4)}" text-anchor="end" '
            f'font-family="sans-serif" font-size="11">{_tick_label(t)}</text>'
        )
    if xlabel:
        out.append(
            f'<text x="{_fmt((x0 + x1) / 2)}" y="{_fmt(height - 10.0)}" '
            'text-anchor="middle" font-family="sans-serif" font-size="12">'
            f"{escape(xlabel)}</text>"
        )
    if ylabel:
        cx, cy = 16.0, (y0 + y1) / 2
        out.append(
            f'<text x="{_fmt(cx)}" y="{_fmt(cy)}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="12" '
            f'transform="rotate(-90 {_fmt(cx)} {_fmt(cy)})">'
            f"{escape(ylabel)}</text>"
        )
    # vertical markers
    for vx, lbl in vlines:
        px = sx(float(vx))
        out.append(
            f'<line x1="{_fmt(px)}" y1="{_fmt(y0)}" x2="{_fmt(px)}" '
            f'y2="{_fmt(y1)}" stroke="#777777" stroke-dasharray="4 3"/>'
        )
        if lbl:
            out.append(
                f'<text x="{_fmt(px + 3)}" y="{_fmt(y1 + 12)}" '
                'font-family="sans-serif" font-size="11" fill="#555555">'
                f"{escape(str(lbl))}</text>"
            )
    # data polylines, split at NaN
    for i, (lbl, y) in enumerate(series):
        color = _PALETTE[i % len(_PALETTE)]
        runs: list[list[str]] = [[]]
        for xv, yv in zip(x, y):
            if np.isfinite(yv):
                runs[-1].append(f"{_fmt(sx(xv))},{_fmt(sy(yv))}")
            elif runs[-1]:
                runs.append([])
        for pts in runs:
            if len(pts) > 1:
                out.append(
                    f'<polyline points="{" ".join(pts)}" fill="none" '
                    f'stroke="{color}" stroke-width="1.5"/>'
                )
        ly = y1 + 16 + 15 * i
        out.append(
            f'<line x1="{_fmt(x1 - 120)}" y1="{_fmt(ly - 4)}" '
            f'x2="{_fmt(x1 - 100)}" y2="{_fmt(ly - 4)}" stroke="{color}" '
            'stroke-width="1.5"/>'
        )
        out.append(
            f'<text x="{_fmt(x1 - 95)}" y="{_fmt(ly)}" '
            f'font-family="sans-serif" font-size="11">{escape(lbl)}</text>'
        )
    out.append("</svg>")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(out) + "\n")
