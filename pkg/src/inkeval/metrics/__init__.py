"""Similarity and recognizability metrics.

Geometric: chamfer distance, its translation-optimized form, and the
edit-aware segmented variant. Textual: Levenshtein distance, CER/WER, and
the group-count rule used by the segmented metric.
"""

from .chamfer import GridConfig, Offset, chamfer, chamfer_offset
from .cde import Alignment, cde, shared_group_offsets
from .text import ErrorRates, edit_distance, error_rates, normalize_label, select_k

__all__ = [
    "GridConfig",
    "Offset",
    "chamfer",
    "chamfer_offset",
    "Alignment",
    "cde",
    "shared_group_offsets",
    "ErrorRates",
    "edit_distance",
    "error_rates",
    "normalize_label",
    "select_k",
]
