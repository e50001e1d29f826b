"""Hand-rolled SVG emitters.

Plots are plain strings assembled with fixed float formatting, so the
same inputs always produce byte-identical files.
"""

from __future__ import annotations

__all__ = ["bar_chart", "scatter_plot"]

_PALETTE = (
    "#4e79a7",
    "#f28e2b",
    "#e15759",
    "#76b7b2",
    "#59a14f",
    "#edc948",
    "#b07aa1",
    "#ff9da7",
    "#9c755f",
    "#bab0ac",
)


def _fmt(value: float) -> str:
    return f"{value:.2f}"


def _escape(text: str) -> str:
    return (
        str(text)
        .replace("&", "&amp;")
        .replace("<", "&lt;")
        .replace(">", "&gt;")
        .replace('"', "&quot;")
    )


def _svg_open(width: int, height: int) -> str:
    return (
        '<svg xmlns="http://www.w3.org/2000/svg" '
        f'width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif">'
    )


def bar_chart(labels, values, *, title: str = "", width: int = 640, height: int = 400) -> str:
    """Vertical bar chart with a zero baseline (negative values hang)."""
    labels = [str(l) for l in labels]
    values = [float(v) for v in values]
    parts = [_svg_open(width, height)]
    if title:
        parts.append(
            f'<text x="{width // 2}" y="20" text-anchor="middle" '
            f'font-size="14">{_escape(title)}</text>'
        )
    if values:
        left, right, top, bottom = 60, 20, 40, 90
        plot_w = width - left - right
        plot_h = height - top - bottom
        lo = min(0.0, min(values))
        hi = max(0.0, max(values))
        if hi == lo:
            hi = lo + 1.0

        def y_of(v: float) -> float:
            return top + (hi - v) / (hi - lo) * plot_h

        zero_y = y_of(0.0)
        slot = plot_w / len(values)
        rotate = len(values) > 10
        for i, (label, value) in enumerate(zip(labels, values)):
            x = left + i * slot + 0.1 * slot
            bar_w = slot * 0.8
            if value >= 0:
                y, h = y_of(value), zero_y - y_of(value)
            else:
                y, h = zero_y, y_of(value) - zero_y
            color = _PALETTE[0] if value >= 0 else _PALETTE[2]
            parts.append(
                f'<rect x="{_fmt(x)}" y="{_fmt(y)}" width="{_fmt(bar_w)}" '
                f'height="{_fmt(h)}" fill="{color}"/>'
            )
            label_x = x + bar_w / 2
            label_y = height - bottom + 16
            if rotate:
                parts.append(
                    f'<text x="{_fmt(label_x)}" y="{_fmt(label_y)}" font-size="9" '
                    f'text-anchor="end" transform="rotate(-40 {_fmt(label_x)} '
                    f'{_fmt(label_y)})">{_escape(label)}</text>'
                )
            else:
                parts.append(
                    f'<text x="{_fmt(label_x)}" y="{_fmt(label_y)}" font-size="10" '
                    f'text-anchor="middle">{_escape(label)}</text>'
                )
        parts.append(
            f'<line x1="{left}" y1="{_fmt(zero_y)}" x2="{width - right}" '
            f'y2="{_fmt(zero_y)}" stroke="#333" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="12" y="{_fmt(y_of(hi) + 4)}" font-size="10">{_fmt(hi)}</text>'
        )
        parts.append(
            f'<text x="12" y="{_fmt(y_of(lo) + 4)}" font-size="10">{_fmt(lo)}</text>'
        )
    parts.append("</svg>")
    return "".join(parts) + "\n"


def scatter_plot(
    points,
    groups=None,
    *,
    point_labels=None,
    title: str = "",
    width: int = 640,
    height: int = 480,
) -> str:
    """2-D scatter, points colored by group id (palette cycles)."""
    pts = [(float(x), float(y)) for x, y in points]
    parts = [_svg_open(width, height)]
    if title:
        parts.append(
            f'<text x="{width // 2}" y="20" text-anchor="middle" '
            f'font-size="14">{_escape(title)}</text>'
        )
    if pts:
        margin = 40
        xs = [p[0] for p in pts]
        ys = [p[1] for p in pts]
        x_lo, x_hi = min(xs), max(xs)
        y_lo, y_hi = min(ys), max(ys)
        x_pad = (x_hi - x_lo) * 0.05 or 1.0
        y_pad = (y_hi - y_lo) * 0.05 or 1.0
        x_lo, x_hi = x_lo - x_pad, x_hi + x_pad
        y_lo, y_hi = y_lo - y_pad, y_hi + y_pad

        def sx(v: float) -> float:
            return margin + (v - x_lo) / (x_hi - x_lo) * (width - 2 * margin)

        def sy(v: float) -> float:
            return height - margin - (v - y_lo) / (y_hi - y_lo) * (height - 2 * margin)

        for i, (x, y) in enumerate(pts):
            group = int(groups[i]) if groups is not None else 0
            color = _PALETTE[group % len(_PALETTE)]
            parts.append(
                f'<circle cx="{_fmt(sx(x))}" cy="{_fmt(sy(y))}" r="4" '
                f'fill="{color}" fill-opacity="0.8"/>'
            )
            if point_labels is not None:
                parts.append(
                    f'<text x="{_fmt(sx(x) + 5)}" y="{_fmt(sy(y) - 5)}" '
                    f'font-size="8">{_escape(point_labels[i])}</text>'
                )
    parts.append("</svg>")
    return "".join(parts) + "\n"
