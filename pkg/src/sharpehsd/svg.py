"""Static SVG 1.1 lollipop chart of annualized Sharpe ratios with +/-HSD bars."""

from __future__ import annotations

from xml.sax.saxutils import escape

__all__ = ["lollipop_chart"]

_WIDTH = 720
_HEIGHT = 420
_MARGIN_LEFT = 70
_MARGIN_RIGHT = 20
_MARGIN_TOP = 40
_MARGIN_BOTTOM = 70


def _fmt(x: float) -> str:
    return f"{x:.2f}"


def lollipop_chart(names, values, half_width, alpha, df_mode) -> str:
    """SVG document with one lollipop and error-bar glyph per asset.

    ``half_width`` is the HSD cutoff drawn above and below each Sharpe ratio;
    the legend names the type-I level and df mode used to compute it.
    """
    names = [str(s) for s in names]
    values = [float(v) for v in values]
    if len(names) != len(values) or not names:
        raise ValueError("names and values must be nonempty and equal length")
    half_width = float(half_width)

    lo = min(values) - half_width
    hi = max(values) + half_width
    pad = 0.1 * (hi - lo) or 1.0
    lo, hi = lo - pad, hi + pad

    plot_w = _WIDTH - _MARGIN_LEFT - _MARGIN_RIGHT
    plot_h = _HEIGHT - _MARGIN_TOP - _MARGIN_BOTTOM

    def sx(i):
        return _MARGIN_LEFT + plot_w * (i + 0.5) / len(values)

    def sy(v):
        return _MARGIN_TOP + plot_h * (hi - v) / (hi - lo)

    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{_WIDTH}" height="{_HEIGHT}" viewBox="0 0 {_WIDTH} {_HEIGHT}">',
        f'<rect x="0" y="0" width="{_WIDTH}" height="{_HEIGHT}" fill="white"/>',
        f'<line x1="{_MARGIN_LEFT}" y1="{_MARGIN_TOP}" x2="{_MARGIN_LEFT}" '
        f'y2="{_MARGIN_TOP + plot_h}" stroke="black"/>',
        f'<line x1="{_MARGIN_LEFT}" y1="{_MARGIN_TOP + plot_h}" '
        f'x2="{_MARGIN_LEFT + plot_w}" y2="{_MARGIN_TOP + plot_h}" stroke="black"/>',
    ]

    # y axis ticks
    n_ticks = 5
    for t in range(n_ticks + 1):
        v = lo + (hi - lo) * t / n_ticks
        y = sy(v)
        parts.append(
            f'<line x1="{_MARGIN_LEFT - 5}" y1="{_fmt(y)}" x2="{_MARGIN_LEFT}" '
            f'y2="{_fmt(y)}" stroke="black"/>'
        )
        parts.append(
            f'<text x="{_MARGIN_LEFT - 8}" y="{_fmt(y + 4)}" font-size="11" '
            f'text-anchor="end">{v:.2f}</text>'
        )

    cap = max(4.0, min(12.0, 0.25 * plot_w / len(values)))
    for i, (name, v) in enumerate(zip(names, values)):
        x = sx(i)
        y = sy(v)
        y_hi = sy(v + half_width)
        y_lo = sy(v - half_width)
        parts.append('<g class="error-bar">')
        parts.append(
            f'<line x1="{_fmt(x)}" y1="{_fmt(y_hi)}" x2="{_fmt(x)}" '
            f'y2="{_fmt(y_lo)}" stroke="steelblue" stroke-width="1.5"/>'
        )
        for y_cap in (y_hi, y_lo):
            parts.append(
                f'<line x1="{_fmt(x - cap)}" y1="{_fmt(y_cap)}" x2="{_fmt(x + cap)}" '
                f'y2="{_fmt(y_cap)}" stroke="steelblue" stroke-width="1.5"/>'
            )
        parts.append(f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="4" fill="black"/>')
        parts.append("</g>")
        parts.append(
            f'<text x="{_fmt(x)}" y="{_HEIGHT - _MARGIN_BOTTOM + 14}" font-size="10" '
            f'text-anchor="end" transform="rotate(-35 {_fmt(x)} '
            f'{_HEIGHT - _MARGIN_BOTTOM + 14})">{escape(name)}</text>'
        )

    parts.append(
        f'<text class="legend" x="{_MARGIN_LEFT}" y="{_MARGIN_TOP - 16}" font-size="12">'
        f"annualized Sharpe ratio, error bars at ±HSD "
        f"(alpha={alpha:g}, df={escape(str(df_mode))})</text>"
    )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
