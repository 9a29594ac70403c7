"""Evaluation toolkit for digital-ink spelling correction.

Measures candidate corrections along two axes: similarity to the original
ink (chamfer-distance family with translation and segmentation relaxations)
and recognizability of the intended label (CER/WER, top-N recognition), and
ships the harness, file formats, CLI, and rating service used to compare
models against each other and against human preference.
"""

from .ink import (
    BoundingBox,
    ComparabilityReport,
    Ink,
    Point,
    PointCloud,
    Stroke,
    bounding_box,
    check_comparability,
    point_cloud,
)
from .metrics import (
    Alignment,
    ErrorRates,
    GridConfig,
    Offset,
    chamfer,
    chamfer_offset,
    cde,
    edit_distance,
    error_rates,
    normalize_label,
    select_k,
)

__version__ = "0.1.0"

__all__ = [
    "BoundingBox",
    "ComparabilityReport",
    "Ink",
    "Point",
    "PointCloud",
    "Stroke",
    "bounding_box",
    "check_comparability",
    "point_cloud",
    "Alignment",
    "ErrorRates",
    "GridConfig",
    "Offset",
    "chamfer",
    "chamfer_offset",
    "cde",
    "edit_distance",
    "error_rates",
    "normalize_label",
    "select_k",
    "__version__",
]
