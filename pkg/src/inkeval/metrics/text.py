"""Text metrics: Levenshtein distance, CER/WER, and group-count selection.

All label comparisons are case-sensitive and operate on normalized text:
Unicode NFC, trimmed, with internal whitespace runs collapsed to single
spaces.
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass
from typing import Sequence

from ..errors import EmptyLabelError, EmptyReferenceError


@dataclass(frozen=True)
class ErrorRates:
    cer: float
    wer: float


def normalize_label(text: str) -> str:
    """NFC-normalize, trim, and collapse whitespace runs to single spaces."""
    return " ".join(unicodedata.normalize("NFC", text).split())


def edit_distance(a: Sequence, b: Sequence) -> int:
    """Levenshtein distance with unit insert/delete/substitute costs.

    Works on strings (Unicode scalar values) and on token lists alike.
    """
    if a == b:
        return 0
    n, m = len(a), len(b)
    if n == 0:
        return m
    if m == 0:
        return n
    if n > m:  # keep the inner row short
        a, b, n, m = b, a, m, n
    prev = list(range(n + 1))
    for i in range(1, m + 1):
        cur = [i] + [0] * n
        bi = b[i - 1]
        for j in range(1, n + 1):
            cost = 0 if a[j - 1] == bi else 1
            cur[j] = min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + cost)
        prev = cur
    return prev[n]


def select_k(original_label: str, corrected_label: str) -> int:
    """Group count for edit-aware alignment.

    Word count of the original label plus the edit distance between the two
    labels: one group per word absorbs word-level shifts, one extra group
    per edit absorbs inserted/removed letters.
    """
    orig = normalize_label(original_label)
    if not orig:
        raise EmptyLabelError("original label is empty after normalization")
    corr = normalize_label(corrected_label)
    return len(orig.split()) + edit_distance(orig, corr)


def error_rates(reference: str, hypothesis: str) -> ErrorRates:
    """CER and WER of a hypothesis against a reference label.

    CER divides character-level edit distance by the reference character
    count; WER does the same over whitespace tokens. Both can exceed 1.0
    for hypotheses much longer than the reference.
    """
    ref = normalize_label(reference)
    if not ref:
        raise EmptyReferenceError("reference is empty after normalization")
    hyp = normalize_label(hypothesis)
    cer = edit_distance(ref, hyp) / len(ref)
    ref_tokens = ref.split()
    hyp_tokens = hyp.split()
    wer = edit_distance(ref_tokens, hyp_tokens) / len(ref_tokens)
    return ErrorRates(cer=cer, wer=wer)
