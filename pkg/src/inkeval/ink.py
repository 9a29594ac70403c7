"""Core digital-ink data model and conversion to metric-ready point clouds.

An Ink is an ordered list of strokes; a stroke is an ordered list of 2D
points with an optional per-point timestamp. Metrics never look at time,
only at positions, so the conversion to PointCloud drops the t channel.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, NamedTuple, Optional, Sequence

import numpy as np

from .errors import InvalidInkError

HEIGHT_RATIO_FLAG_THRESHOLD = 2.0


class Point(NamedTuple):
    x: float
    y: float
    t: Optional[float] = None


def _check_finite(value: float, name: str) -> None:
    if not math.isfinite(value):
        raise InvalidInkError(f"{name} is not finite: {value!r}")


@dataclass(frozen=True)
class Stroke:
    """One pen-down-to-pen-up sequence of points.

    Timestamps, when present, must be non-decreasing along the stroke.
    """

    points: tuple[Point, ...]

    def __init__(self, points: Sequence[Point | tuple]):
        pts = tuple(Point(*p) for p in points)
        if not pts:
            raise InvalidInkError("stroke has no points")
        prev_t = None
        for p in pts:
            _check_finite(p.x, "x")
            _check_finite(p.y, "y")
            if p.t is not None:
                _check_finite(p.t, "t")
                if prev_t is not None and p.t < prev_t:
                    raise InvalidInkError(
                        f"timestamps decrease within a stroke: {prev_t} -> {p.t}"
                    )
                prev_t = p.t
        object.__setattr__(self, "points", pts)

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self) -> Iterator[Point]:
        return iter(self.points)


@dataclass(frozen=True)
class Ink:
    """An ordered, non-empty list of strokes."""

    strokes: tuple[Stroke, ...]

    def __init__(self, strokes: Sequence[Stroke | Sequence]):
        sts = tuple(s if isinstance(s, Stroke) else Stroke(s) for s in strokes)
        if not sts:
            raise InvalidInkError("ink has no strokes")
        object.__setattr__(self, "strokes", sts)

    @property
    def point_count(self) -> int:
        return sum(len(s) for s in self.strokes)

    def __len__(self) -> int:
        return len(self.strokes)

    def __iter__(self) -> Iterator[Stroke]:
        return iter(self.strokes)

    def to_stroke_lists(self, with_time: bool = True) -> list[list[list[float]]]:
        """Plain nested lists [[x, y(, t)], ...] per stroke, for serialization."""
        out = []
        for s in self.strokes:
            row = []
            for p in s.points:
                if with_time and p.t is not None:
                    row.append([p.x, p.y, p.t])
                else:
                    row.append([p.x, p.y])
            out.append(row)
        return out


@dataclass(frozen=True)
class PointCloud:
    """Flat (x, y) point set sorted ascending by x.

    Ties keep the original (stroke, point) order, so construction from an
    ink is deterministic. The array is immutable.
    """

    points: np.ndarray  # shape (n, 2), float64

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.float64)
        if pts.ndim != 2 or pts.shape[1] != 2:
            raise InvalidInkError(f"point cloud must have shape (n, 2), got {pts.shape}")
        if not np.isfinite(pts).all():
            raise InvalidInkError("point cloud has non-finite coordinates")
        if pts.shape[0] > 1 and np.any(np.diff(pts[:, 0]) < 0):
            raise InvalidInkError("point cloud is not sorted by x")
        pts = pts.copy()
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    def __len__(self) -> int:
        return int(self.points.shape[0])

    def as_list(self) -> list[tuple[float, float]]:
        return [tuple(p) for p in self.points.tolist()]


@dataclass(frozen=True)
class BoundingBox:
    min_x: float
    min_y: float
    max_x: float
    max_y: float

    def __post_init__(self):
        if self.min_x > self.max_x or self.min_y > self.max_y:
            raise InvalidInkError("bounding box has min > max")

    @property
    def width(self) -> float:
        return self.max_x - self.min_x

    @property
    def height(self) -> float:
        return self.max_y - self.min_y

    @property
    def diagonal(self) -> float:
        return math.hypot(self.width, self.height)


@dataclass(frozen=True)
class ComparabilityReport:
    """Whether two inks are on a comparable vertical scale.

    Distances are reported in raw ink units, so inks of wildly different
    height make the similarity numbers misleading. We warn, never rescale.
    """

    height_a: float
    height_b: float
    ratio: float
    flagged: bool
    degenerate: bool = False


def point_cloud(ink: Ink) -> PointCloud:
    """All points of all strokes, x-sorted with stable (stroke, point) tie-break."""
    n = ink.point_count
    xy = np.empty((n, 2), dtype=np.float64)
    i = 0
    for stroke in ink.strokes:
        for p in stroke.points:
            xy[i, 0] = p.x
            xy[i, 1] = p.y
            i += 1
    order = np.argsort(xy[:, 0], kind="stable")
    return PointCloud(xy[order])


def bounding_box(ink: Ink) -> BoundingBox:
    """Tight axis-aligned box over all points of the ink."""
    min_x = min_y = math.inf
    max_x = max_y = -math.inf
    for stroke in ink.strokes:
        for p in stroke.points:
            min_x = min(min_x, p.x)
            max_x = max(max_x, p.x)
            min_y = min(min_y, p.y)
            max_y = max(max_y, p.y)
    return BoundingBox(min_x, min_y, max_x, max_y)


def cloud_bounding_box(cloud: PointCloud) -> BoundingBox:
    pts = cloud.points
    return BoundingBox(
        float(pts[:, 0].min()), float(pts[:, 1].min()),
        float(pts[:, 0].max()), float(pts[:, 1].max()),
    )


def check_comparability(a: Ink, b: Ink) -> ComparabilityReport:
    """Flag ink pairs whose heights differ by more than the threshold ratio.

    Zero-height inks (a dot, a horizontal dash) make the ratio meaningless
    and are flagged as degenerate.
    """
    ha = bounding_box(a).height
    hb = bounding_box(b).height
    if ha == 0.0 or hb == 0.0:
        return ComparabilityReport(ha, hb, math.inf, flagged=True, degenerate=True)
    ratio = max(ha, hb) / min(ha, hb)
    return ComparabilityReport(ha, hb, ratio, flagged=ratio > HEIGHT_RATIO_FLAG_THRESHOLD)
