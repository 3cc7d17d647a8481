"""Standalone SVG 1.1 figures for model cards: X* pixel plots and spaghetti plots."""

from __future__ import annotations

from fractions import Fraction
from xml.sax.saxutils import escape

from .core import Ranking

CELL = 14
MARGIN = 40
FRACTION_COLOR = (204, 51, 17)


def _header(width, height, title):
    return [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f"<title>{escape(title)}</title>",
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="#ffffff"/>',
    ]


def _fmt(x) -> str:
    return f"{float(x):.4f}".rstrip("0").rstrip(".")


def _label(card, item: int) -> str:
    names = card.D.item_names
    return str(item) if names is None else names[item]


def pixel_plot(card) -> str:
    """X*(r, r) as an n-by-n grid: 1 is black, 0 white, fractional entries in a red ramp."""
    if card.xstar is None:
        raise ValueError("card has no X* matrix to plot")
    X = card.xstar
    n = X.n
    size = 2 * MARGIN + n * CELL
    out = _header(size, size, f"X* for dataset {card.dataset_id}")
    out.append(f'<g transform="translate({MARGIN},{MARGIN})">')
    for i in range(n):
        for j in range(n):
            x = Fraction(X.values[i][j])
            if x == 0:
                continue
            if x == 1:
                fill, cls = "#000000", "full"
            else:
                # lighter for near-certain, saturated at a 50/50 split
                t = float(2 * min(x, 1 - x))
                r, g, b = (round(255 - (255 - c) * t) for c in FRACTION_COLOR)
                fill, cls = f"#{r:02x}{g:02x}{b:02x}", "frac"
            out.append(
                f'<rect class="cell {cls}" x="{j * CELL}" y="{i * CELL}" width="{CELL}" height="{CELL}" '
                f'fill="{fill}" data-value="{_fmt(x)}"/>'
            )
    out.append(f'<rect x="0" y="0" width="{n * CELL}" height="{n * CELL}" fill="none" stroke="#888888"/>')
    ref = X.reference.order
    for pos, item in enumerate(ref):
        y = pos * CELL + CELL * 0.75
        out.append(f'<text x="-4" y="{_fmt(y)}" font-size="9" text-anchor="end">{escape(_label(card, item))}</text>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def spaghetti_plot(card, left, right) -> str:
    """Two columns of items in ranking order, with a line joining each item's two positions."""
    a = left if isinstance(left, Ranking) else Ranking.from_rank_vector(left)
    b = right if isinstance(right, Ranking) else Ranking.from_rank_vector(right)
    if len(a) != len(b):
        raise ValueError("rankings differ in length")
    n = len(a)
    gap = 18
    col_l, col_r = MARGIN + 120, MARGIN + 320
    width = col_r + 120 + MARGIN
    height = 2 * MARGIN + n * gap
    pos_b = {item: p for p, item in enumerate(b.order)}
    out = _header(width, height, f"Spaghetti plot for dataset {card.dataset_id}")
    for p, item in enumerate(a.order):
        y1 = MARGIN + p * gap
        y2 = MARGIN + pos_b[item] * gap
        out.append(
            f'<line class="strand" data-item="{item}" x1="{col_l}" y1="{y1}" x2="{col_r}" y2="{y2}" '
            f'stroke="#1f77b4" stroke-width="1.5"/>'
        )
    for p, item in enumerate(a.order):
        out.append(
            f'<text x="{col_l - 6}" y="{MARGIN + p * gap + 4}" font-size="11" text-anchor="end">'
            f"{p + 1}. {escape(_label(card, item))}</text>"
        )
    for p, item in enumerate(b.order):
        out.append(
            f'<text x="{col_r + 6}" y="{MARGIN + p * gap + 4}" font-size="11">'
            f"{p + 1}. {escape(_label(card, item))}</text>"
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def select_pair(card, selector: str = "farthest"):
    """``farthest``, ``closest`` or ``i,j`` (indices into the stored optimal rankings)."""
    if selector in ("farthest", "closest"):
        if card.num_optimal_rankings < 2:
            raise ValueError("card has a single optimal ranking; nothing to compare")
        return card.farthest_pair if selector == "farthest" else card.closest_pair
    try:
        i, j = (int(s) for s in selector.split(","))
    except ValueError:
        raise ValueError(f"bad pair selector {selector!r}; use farthest, closest or i,j") from None
    stored = card.optimal_rankings
    if not (0 <= i < len(stored) and 0 <= j < len(stored)):
        raise ValueError(f"pair indices out of range 0..{len(stored) - 1}")
    return stored[i], stored[j]
