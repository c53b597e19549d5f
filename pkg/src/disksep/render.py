"""Static SVG scenes of a normalized packing and its cutting circle."""

from __future__ import annotations

import numpy as np

from .separator import NormalizedPacking, SeparatorResult

DISK_STYLE = 'fill="#dfe7f2" stroke="#4a5a70"'
SEPARATOR_STYLE = 'fill="#f4a6a6" stroke="#b01c1c"'
GUIDE_STYLE = 'fill="none" stroke="#888888" stroke-dasharray="0.04 0.03"'
CUT_STYLE = 'fill="none" stroke="#b01c1c"'


def _f(v: float) -> str:
    return format(float(v), ".6f")


def render_svg(np_: NormalizedPacking, result: SeparatorResult | None = None,
               width_px: int = 800, half_width: float = 2.5) -> str:
    """SVG 1.1 document in normalized coordinates (y axis pointing up).

    Every disk is emitted; the viewport is the square of side
    ``2 * half_width`` around the origin. Separator disks are filled red, the
    circles of radius 1 and 2 are dashed and the cutting circle is solid.
    """
    c, r = np_.centers, np_.radii
    lo = np.array([-half_width, -half_width])
    w = h = 2 * half_width
    stroke = _f(w / 800)
    in_s = np.zeros(np_.n, dtype=bool)
    if result is not None and result.S:
        in_s[list(result.S)] = True

    out = [
        '<?xml version="1.0" encoding="UTF-8" standalone="no"?>',
        '<!DOCTYPE svg PUBLIC "-//W3C//DTD SVG 1.1//EN" '
        '"http://www.w3.org/Graphics/SVG/1.1/DTD/svg11.dtd">',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width_px}" '
        f'height="{width_px}" viewBox="{_f(lo[0])} {_f(lo[1])} {_f(w)} {_f(h)}">',
        f'<g stroke-width="{stroke}">',
    ]
    for i, ((x, y), rad) in enumerate(zip(c.tolist(), r.tolist())):
        style = SEPARATOR_STYLE if in_s[i] else DISK_STYLE
        out.append(f'<circle cx="{_f(x)}" cy="{_f(-y)}" r="{_f(rad)}" {style}/>')
    for rad in (1.0, 2.0):
        out.append(f'<circle cx="0" cy="0" r="{_f(rad)}" {GUIDE_STYLE}/>')
    if result is not None:
        out.append(f'<circle cx="0" cy="0" r="{_f(result.x)}" {CUT_STYLE}/>')
    out += ["</g>", "</svg>"]
    return "\n".join(out) + "\n"
