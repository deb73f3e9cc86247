"""Bare-bones SVG line plots. Decorative only; the CSV output is the contract."""

from __future__ import annotations

from typing import Sequence

_PALETTE = (
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
)

_W, _H = 720, 440
_MARGIN = 56


def _scale(value: float, lo: float, hi: float, out_lo: float, out_hi: float) -> float:
    if hi == lo:
        return (out_lo + out_hi) / 2
    return out_lo + (value - lo) * (out_hi - out_lo) / (hi - lo)


def render_line_plot(
    series: Sequence[tuple[str, Sequence[tuple[float, float]]]],
    reference: float | None = None,
    title: str = "",
    x_label: str = "",
    y_label: str = "",
) -> str:
    """Polyline plot of (x, y) series with optional dashed reference line."""
    xs = [x for _, pts in series for x, _ in pts]
    ys = [y for _, pts in series for _, y in pts]
    if reference is not None:
        ys.append(reference)
    if not xs:
        xs, ys = [0.0, 1.0], [0.0, 1.0]
    x_lo, x_hi = min(xs), max(xs)
    y_lo, y_hi = min(ys), max(ys)
    if y_lo == y_hi:
        y_lo, y_hi = y_lo - 0.5, y_hi + 0.5

    def px(x: float) -> float:
        return _scale(x, x_lo, x_hi, _MARGIN, _W - _MARGIN)

    def py(y: float) -> float:
        return _scale(y, y_lo, y_hi, _H - _MARGIN, _MARGIN)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
        f'viewBox="0 0 {_W} {_H}" font-family="sans-serif" font-size="12">',
        f'<rect width="{_W}" height="{_H}" fill="white"/>',
        f'<line x1="{_MARGIN}" y1="{_H - _MARGIN}" x2="{_W - _MARGIN}" '
        f'y2="{_H - _MARGIN}" stroke="black"/>',
        f'<line x1="{_MARGIN}" y1="{_MARGIN}" x2="{_MARGIN}" '
        f'y2="{_H - _MARGIN}" stroke="black"/>',
        f'<text x="{_MARGIN}" y="{_H - _MARGIN + 28}">{x_lo:g}</text>',
        f'<text x="{_W - _MARGIN}" y="{_H - _MARGIN + 28}" text-anchor="end">{x_hi:g}</text>',
        f'<text x="{_MARGIN - 8}" y="{_H - _MARGIN}" text-anchor="end">{y_lo:g}</text>',
        f'<text x="{_MARGIN - 8}" y="{_MARGIN + 4}" text-anchor="end">{y_hi:g}</text>',
    ]
    if title:
        parts.append(f'<text x="{_W / 2}" y="24" text-anchor="middle" font-size="15">{title}</text>')
    if x_label:
        parts.append(f'<text x="{_W / 2}" y="{_H - 12}" text-anchor="middle">{x_label}</text>')
    if y_label:
        parts.append(
            f'<text x="16" y="{_H / 2}" text-anchor="middle" '
            f'transform="rotate(-90 16 {_H / 2})">{y_label}</text>'
        )
    if reference is not None:
        y = py(reference)
        parts.append(
            f'<line x1="{_MARGIN}" y1="{y:.2f}" x2="{_W - _MARGIN}" y2="{y:.2f}" '
            f'stroke="#444" stroke-dasharray="6 4"/>'
        )
        parts.append(
            f'<text x="{_W - _MARGIN}" y="{y - 6:.2f}" text-anchor="end" '
            f'fill="#444">reference {reference:g}</text>'
        )
    for i, (label, pts) in enumerate(series):
        color = _PALETTE[i % len(_PALETTE)]
        coords = " ".join(f"{px(x):.2f},{py(y):.2f}" for x, y in pts)
        parts.append(
            f'<polyline points="{coords}" fill="none" stroke="{color}" stroke-width="1.5"/>'
        )
        if pts:
            x0, y0 = pts[0]
            parts.append(
                f'<text x="{px(x0) + 4:.2f}" y="{py(y0) - 4:.2f}" fill="{color}">{label}</text>'
            )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
