"""Deterministic synthetic ink: renders labels as polyline glyphs and builds
ground-truth spell-corrected inks by splicing.

This is the desk-scale stand-in for a trained generator: rendered inks have
controllable style (scale, slant, jitter, spacing) and splice_correct
produces a corrected ink that keeps every unchanged glyph's points verbatim,
shifting them horizontally as the corrected layout requires.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping

from ._font import ADVANCE_WIDTH, Glyph, build_glyphs
from .errors import LabelMismatchError, MissingGlyphError
from .ink import Ink, Point, Stroke

_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class StyleParams:
    """Rendering style: glyph scale, slant shear, per-point jitter amplitude,
    extra spacing between letters, and the jitter seed."""

    scale: float = 10.0
    slant: float = 0.0  # radians; shears x by y
    jitter: float = 0.0  # ink units
    letter_spacing: float = 0.0  # ink units
    seed: int = 0

    def __post_init__(self):
        if self.scale <= 0:
            raise ValueError(f"scale must be > 0, got {self.scale}")
        if self.jitter < 0:
            raise ValueError(f"jitter must be >= 0, got {self.jitter}")
        if self.letter_spacing < 0:
            raise ValueError(f"letter_spacing must be >= 0, got {self.letter_spacing}")


@dataclass(frozen=True)
class GlyphFont:
    """Character -> polylines in a unit box, plus one shared advance width."""

    glyphs: Mapping[str, Glyph]
    advance: float = ADVANCE_WIDTH

    def glyph(self, char: str) -> Glyph:
        try:
            return self.glyphs[char]
        except KeyError:
            raise MissingGlyphError(char) from None

    def __contains__(self, char: str) -> bool:
        return char in self.glyphs


_BUILTIN = GlyphFont(glyphs=build_glyphs())


def builtin_font() -> GlyphFont:
    """The embedded font: lowercase a-z, digits, and a Vietnamese subset."""
    return _BUILTIN


def _splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & _MASK64
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def _jitter_value(seed: int, stroke: int, point: int, axis: int) -> float:
    """Deterministic uniform noise in [-1, 1), keyed by position not by
    iteration order."""
    h = _splitmix64(seed & _MASK64)
    h = _splitmix64(h ^ stroke)
    h = _splitmix64(h ^ point)
    h = _splitmix64(h ^ axis)
    return h / float(1 << 64) * 2.0 - 1.0


def _advance_step(font: GlyphFont, style: StyleParams) -> float:
    return font.advance * style.scale + style.letter_spacing


def _place_glyph(
    glyph: Glyph,
    pen_x: float,
    style: StyleParams,
    stroke_base: int,
) -> list[list[Point]]:
    shear = math.tan(style.slant)
    strokes = []
    for si, polyline in enumerate(glyph):
        pts = []
        for pi, (gx, gy) in enumerate(polyline):
            x = pen_x + (gx + shear * gy) * style.scale
            y = gy * style.scale
            if style.jitter > 0.0:
                x += style.jitter * _jitter_value(style.seed, stroke_base + si, pi, 0)
                y += style.jitter * _jitter_value(style.seed, stroke_base + si, pi, 1)
            pts.append(Point(x, y))
        strokes.append(pts)
    return strokes


def render_label(label: str, font: GlyphFont | None = None, style: StyleParams = StyleParams()) -> Ink:
    """Lay glyphs left to right on a common baseline.

    Spaces advance the pen without producing strokes. Deterministic: the same
    (label, font, style) always yields bit-identical ink.
    """
    font = font or _BUILTIN
    if not label or all(c == " " for c in label):
        raise ValueError("label must contain at least one non-space character")
    strokes: list[list[Point]] = []
    pen = 0.0
    step = _advance_step(font, style)
    for ch in label:
        if ch == " ":
            pen += step
            continue
        glyph = font.glyph(ch)
        strokes.extend(_place_glyph(glyph, pen, style, stroke_base=len(strokes)))
        pen += step
    return Ink([Stroke(s) for s in strokes])


def _char_layout(label: str, font: GlyphFont, style: StyleParams):
    """Per-character (pen_x, stroke_start, stroke_count); spaces have count 0."""
    out = []
    pen = 0.0
    stroke_idx = 0
    step = _advance_step(font, style)
    for ch in label:
        if ch == " ":
            out.append((ch, pen, stroke_idx, 0))
        else:
            count = len(font.glyph(ch))
            out.append((ch, pen, stroke_idx, count))
            stroke_idx += count
        pen += step
    return out


def _lcs_pairs(a: str, b: str) -> list[tuple[int, int]]:
    """Index pairs of one longest common subsequence (deterministic backtrack)."""
    n, m = len(a), len(b)
    dp = [[0] * (m + 1) for _ in range(n + 1)]
    for i in range(n - 1, -1, -1):
        for j in range(m - 1, -1, -1):
            if a[i] == b[j]:
                dp[i][j] = dp[i + 1][j + 1] + 1
            else:
                dp[i][j] = max(dp[i + 1][j], dp[i][j + 1])
    pairs = []
    i = j = 0
    while i < n and j < m:
        if a[i] == b[j]:
            pairs.append((i, j))
            i += 1
            j += 1
        elif dp[i + 1][j] >= dp[i][j + 1]:
            i += 1
        else:
            j += 1
    return pairs


def splice_correct(
    original: Ink,
    original_label: str,
    corrected_label: str,
    font: GlyphFont | None = None,
    style: StyleParams = StyleParams(),
) -> Ink:
    """Ground-truth corrected ink: copy glyphs on the common character
    subsequence of the two labels (shifted horizontally to the corrected
    layout), render the rest fresh in the same style.

    The original must have been produced by render_label with the given
    label/font/style; this is verified by re-rendering.
    """
    font = font or _BUILTIN
    rendered = render_label(original_label, font, style)
    if rendered != original:
        raise LabelMismatchError(
            "original ink does not match the layout of the given label/style"
        )

    orig_layout = _char_layout(original_label, font, style)
    corr_layout = _char_layout(corrected_label, font, style)
    matched = {j: i for i, j in _lcs_pairs(original_label, corrected_label)}

    strokes: list[list[Point]] = []
    for j, (ch, pen, _, _) in enumerate(corr_layout):
        if ch == " ":
            continue
        glyph = font.glyph(ch)
        i = matched.get(j)
        if i is not None and original_label[i] != " ":
            _, old_pen, start, count = orig_layout[i]
            dx = pen - old_pen
            for s in original.strokes[start : start + count]:
                strokes.append([Point(p.x + dx, p.y, p.t) for p in s.points])
        else:
            strokes.extend(_place_glyph(glyph, pen, style, stroke_base=len(strokes)))
    if not strokes:
        raise ValueError("corrected label produced no strokes")
    return Ink([Stroke(s) for s in strokes])
