"""Embedded polyline glyph data for the synthetic ink generator.

Glyphs live in a unit box: x in [0, 0.65], x-height 0.5, ascenders to 0.72,
descenders to -0.25, accents in [0.78, 0.98]. Coverage: lowercase a-z,
digits, and a documented subset of Vietnamese letters built from base glyph
plus accent mark. The font is monospace (one shared advance width), which
keeps splice layout arithmetic exact.
"""

from __future__ import annotations

import math

Polyline = tuple[tuple[float, float], ...]
Glyph = tuple[Polyline, ...]

ADVANCE_WIDTH = 0.8


def _ring(cx: float, cy: float, rx: float, ry: float | None = None, n: int = 8) -> Polyline:
    ry = rx if ry is None else ry
    pts = []
    for i in range(n + 1):
        a = 2.0 * math.pi * i / n
        pts.append((round(cx + rx * math.cos(a), 4), round(cy + ry * math.sin(a), 4)))
    return tuple(pts)


_BASE: dict[str, Glyph] = {
    "a": (_ring(0.30, 0.25, 0.20), ((0.50, 0.45), (0.50, 0.0))),
    "b": (((0.10, 0.72), (0.10, 0.0)), _ring(0.32, 0.25, 0.20)),
    "c": (((0.52, 0.42), (0.38, 0.50), (0.18, 0.44), (0.10, 0.25), (0.18, 0.06), (0.38, 0.0), (0.52, 0.08)),),
    "d": (_ring(0.30, 0.25, 0.20), ((0.52, 0.72), (0.52, 0.0))),
    "e": (((0.10, 0.27), (0.50, 0.27), (0.46, 0.44), (0.28, 0.51), (0.12, 0.40), (0.08, 0.22), (0.20, 0.03), (0.42, 0.0), (0.52, 0.07)),),
    "f": (((0.45, 0.66), (0.34, 0.72), (0.24, 0.64), (0.24, 0.0)), ((0.08, 0.46), (0.42, 0.46))),
    "g": (_ring(0.30, 0.25, 0.20), ((0.50, 0.45), (0.50, -0.14), (0.36, -0.25), (0.14, -0.18))),
    "h": (((0.10, 0.72), (0.10, 0.0)), ((0.10, 0.33), (0.24, 0.48), (0.42, 0.40), (0.45, 0.22), (0.45, 0.0))),
    "i": (((0.30, 0.50), (0.30, 0.0)), ((0.30, 0.63), (0.30, 0.68))),
    "j": (((0.36, 0.50), (0.36, -0.14), (0.24, -0.25), (0.10, -0.17)), ((0.36, 0.63), (0.36, 0.68))),
    "k": (((0.10, 0.72), (0.10, 0.0)), ((0.44, 0.50), (0.10, 0.20)), ((0.24, 0.31), (0.46, 0.0))),
    "l": (((0.30, 0.72), (0.30, 0.06), (0.38, 0.0)),),
    "m": (((0.08, 0.50), (0.08, 0.0)), ((0.08, 0.36), (0.17, 0.50), (0.28, 0.37), (0.28, 0.0)), ((0.28, 0.36), (0.38, 0.50), (0.50, 0.37), (0.50, 0.0))),
    "n": (((0.10, 0.50), (0.10, 0.0)), ((0.10, 0.34), (0.25, 0.50), (0.42, 0.38), (0.45, 0.0))),
    "o": (_ring(0.30, 0.25, 0.21),),
    "p": (((0.10, 0.50), (0.10, -0.25)), _ring(0.33, 0.25, 0.19)),
    "q": (_ring(0.28, 0.25, 0.19), ((0.48, 0.50), (0.48, -0.25))),
    "r": (((0.12, 0.50), (0.12, 0.0)), ((0.12, 0.33), (0.26, 0.48), (0.43, 0.45))),
    "s": (((0.50, 0.44), (0.30, 0.52), (0.12, 0.42), (0.22, 0.28), (0.42, 0.22), (0.50, 0.10), (0.32, 0.0), (0.10, 0.06)),),
    "t": (((0.28, 0.68), (0.28, 0.08), (0.40, 0.0)), ((0.10, 0.50), (0.48, 0.50))),
    "u": (((0.10, 0.50), (0.10, 0.10), (0.24, 0.0), (0.42, 0.10), (0.44, 0.50)), ((0.44, 0.14), (0.52, 0.0))),
    "v": (((0.08, 0.50), (0.28, 0.0), (0.48, 0.50)),),
    "w": (((0.05, 0.50), (0.17, 0.0), (0.30, 0.38), (0.43, 0.0), (0.55, 0.50)),),
    "x": (((0.08, 0.50), (0.48, 0.0)), ((0.48, 0.50), (0.08, 0.0))),
    "y": (((0.10, 0.50), (0.28, 0.12)), ((0.48, 0.50), (0.20, -0.25))),
    "z": (((0.08, 0.50), (0.48, 0.50), (0.08, 0.0), (0.48, 0.0)),),
    "0": (_ring(0.30, 0.36, 0.20, 0.34),),
    "1": (((0.18, 0.58), (0.32, 0.72), (0.32, 0.0)),),
    "2": (((0.10, 0.58), (0.25, 0.72), (0.45, 0.60), (0.42, 0.40), (0.10, 0.0), (0.50, 0.0)),),
    "3": (((0.10, 0.65), (0.35, 0.72), (0.48, 0.58), (0.28, 0.42), (0.48, 0.22), (0.34, 0.0), (0.08, 0.06)),),
    "4": (((0.38, 0.0), (0.38, 0.72), (0.08, 0.22), (0.52, 0.22)),),
    "5": (((0.48, 0.72), (0.12, 0.72), (0.10, 0.42), (0.35, 0.46), (0.50, 0.28), (0.34, 0.0), (0.08, 0.05)),),
    "6": (((0.45, 0.70), (0.20, 0.50), (0.10, 0.22)), _ring(0.30, 0.18, 0.18)),
    "7": (((0.08, 0.72), (0.50, 0.72), (0.22, 0.0)),),
    "8": (_ring(0.30, 0.55, 0.15), _ring(0.30, 0.18, 0.18)),
    "9": (_ring(0.30, 0.52, 0.17), ((0.47, 0.50), (0.40, 0.18), (0.25, 0.0))),
}

# i without its dot, for accented forms
_DOTLESS_I: Glyph = (((0.30, 0.50), (0.30, 0.0)),)

_ACCENTS: dict[str, Glyph] = {
    "acute": (((0.24, 0.80), (0.42, 0.96)),),
    "grave": (((0.24, 0.96), (0.42, 0.80)),),
    "hook": (((0.24, 0.90), (0.31, 0.97), (0.40, 0.92), (0.33, 0.84), (0.33, 0.80)),),
    "tilde": (((0.14, 0.84), (0.23, 0.93), (0.37, 0.84), (0.46, 0.93)),),
    "dot_below": (((0.30, -0.32), (0.30, -0.38)),),
    "breve": (((0.15, 0.93), (0.30, 0.80), (0.45, 0.93)),),
    "circumflex": (((0.15, 0.80), (0.30, 0.96), (0.45, 0.80)),),
}

_HORN: Polyline = ((0.50, 0.46), (0.59, 0.55), (0.57, 0.66))
_D_BAR: Polyline = ((0.40, 0.60), (0.64, 0.60))

# Vietnamese subset: (codepoint, base glyph key or None for special, accents)
_VIETNAMESE: dict[str, tuple[str, tuple[str, ...]]] = {
    "á": ("a", ("acute",)), "à": ("a", ("grave",)), "ả": ("a", ("hook",)),
    "ã": ("a", ("tilde",)), "ạ": ("a", ("dot_below",)),
    "ă": ("a", ("breve",)), "â": ("a", ("circumflex",)),
    "é": ("e", ("acute",)), "è": ("e", ("grave",)), "ẻ": ("e", ("hook",)),
    "ẽ": ("e", ("tilde",)), "ẹ": ("e", ("dot_below",)), "ê": ("e", ("circumflex",)),
    "í": ("_dotless_i", ("acute",)), "ì": ("_dotless_i", ("grave",)),
    "ó": ("o", ("acute",)), "ò": ("o", ("grave",)), "ỏ": ("o", ("hook",)),
    "õ": ("o", ("tilde",)), "ọ": ("o", ("dot_below",)), "ô": ("o", ("circumflex",)),
    "ú": ("u", ("acute",)), "ù": ("u", ("grave",)), "ủ": ("u", ("hook",)),
    "ý": ("y", ("acute",)), "ỳ": ("y", ("grave",)),
}


_SUBDIVIDE_LONGER_THAN = 0.18


def _densify(polyline: Polyline) -> Polyline:
    """Insert midpoints into long segments so rendered glyphs sample their
    shape at a density comparable to real pen traces."""
    out = [polyline[0]]
    for a, b in zip(polyline, polyline[1:]):
        length = math.hypot(b[0] - a[0], b[1] - a[1])
        pieces = max(1, math.ceil(length / _SUBDIVIDE_LONGER_THAN))
        for t in range(1, pieces + 1):
            out.append((
                round(a[0] + (b[0] - a[0]) * t / pieces, 6),
                round(a[1] + (b[1] - a[1]) * t / pieces, 6),
            ))
    return tuple(out)


def build_glyphs() -> dict[str, Glyph]:
    glyphs = dict(_BASE)
    for ch, (base, accents) in _VIETNAMESE.items():
        base_glyph = _DOTLESS_I if base == "_dotless_i" else _BASE[base]
        glyphs[ch] = base_glyph + tuple(_ACCENTS[a][0] for a in accents)
    glyphs["ơ"] = _BASE["o"] + (_HORN,)
    glyphs["ư"] = _BASE["u"] + (_HORN,)
    glyphs["đ"] = _BASE["d"] + (_D_BAR,)
    return {ch: tuple(_densify(pl) for pl in glyph) for ch, glyph in glyphs.items()}
