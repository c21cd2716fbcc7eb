"""Write-only SVG diagrams of a tree's interval layout.

Each tree node owns a base interval; the diagram stacks them by depth,
root at the top.  Terminal leaves get a dot at their concentration
point, eta leaves a solid bar, splits an outline plus a dot for the
isolated point they shed.  All coordinates are integers obtained by
exact scaling, so equal inputs give byte-equal files.
"""

from __future__ import annotations

from fractions import Fraction

from .construct import seed_point, replacement_bridges
from .dyadic import Dyadic, interval_of
from .trees import ETA, SPINE, SPLIT, TERMINAL, LabelledTree

WIDTH = 10000
ROW = 60
BAR = 16
MARGIN = 40

_STYLE = {
    TERMINAL: ("#ffffff", "#1f4e79"),
    ETA: ("#1f4e79", "#1f4e79"),
    SPLIT: ("#dce6f1", "#1f4e79"),
    SPINE: ("#f2f2f2", "#999999"),
}


def _x(value: Dyadic | Fraction) -> int:
    f = value.as_fraction() if isinstance(value, Dyadic) else value
    return MARGIN + f.numerator * WIDTH // f.denominator


def render_tree_svg(tree: LabelledTree) -> str:
    depth = max(len(a) for a in tree.nodes)
    height = (depth + 1) * ROW + 2 * MARGIN
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" '
        f'viewBox="0 0 {WIDTH + 2 * MARGIN} {height}">',
        f'<rect width="{WIDTH + 2 * MARGIN}" height="{height}" fill="#ffffff"/>',
    ]
    for addr in sorted(tree.nodes):
        node = tree.node(addr)
        iv = interval_of(addr)
        x0, x1 = _x(iv.lo), _x(iv.hi)
        y = MARGIN + len(addr) * ROW
        fill, stroke = _STYLE[node.kind]
        out.append(
            f'<rect x="{x0}" y="{y}" width="{x1 - x0}" height="{BAR}" '
            f'fill="{fill}" stroke="{stroke}" stroke-width="2"/>'
        )
        cy = y + BAR // 2
        if node.kind == TERMINAL:
            out.append(
                f'<circle cx="{_x(iv.mid)}" cy="{cy}" r="5" fill="#c0392b"/>'
            )
        elif node.kind == SPLIT:
            if node.ever_terminal:
                out.append(
                    f'<circle cx="{_x(seed_point(addr))}" cy="{cy}" r="4" '
                    f'fill="#c0392b"/>'
                )
            for j in range(1, node.r + 1):
                left, right = replacement_bridges(addr, j)
                for p in (left, right):
                    out.append(
                        f'<circle cx="{_x(p)}" cy="{cy}" r="3" '
                        f'fill="#e67e22"/>'
                    )
    out.append("</svg>")
    return "\n".join(out) + "\n"
