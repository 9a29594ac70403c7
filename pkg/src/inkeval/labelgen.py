"""Spell-corrected label generation by dictionary-neighbor replacement.

One word of the label is replaced with a random dictionary word at edit
distance 1 or 2; distance 1 is sampled with a configurable probability
(default 71%). Everything is driven by an explicit seed, so a fixed
(label, dictionary, spec) triple always produces the same output.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable

from .errors import InvalidDistanceError, NoCandidateError
from .metrics.text import edit_distance, normalize_label


@dataclass(frozen=True)
class Dictionary:
    """Immutable set of unique, whitespace-free words."""

    words: frozenset[str]

    def __init__(self, words: Iterable[str]):
        cleaned = set()
        for w in words:
            if not w or any(c.isspace() for c in w):
                raise ValueError(f"dictionary entries must be non-empty and whitespace-free: {w!r}")
            cleaned.add(w)
        if not cleaned:
            raise ValueError("dictionary is empty")
        object.__setattr__(self, "words", frozenset(cleaned))
        object.__setattr__(self, "_alphabet", tuple(sorted({c for w in cleaned for c in w})))

    @property
    def alphabet(self) -> tuple[str, ...]:
        """Characters observed across the dictionary (used for edit enumeration)."""
        return self._alphabet  # type: ignore[attr-defined]

    def __contains__(self, word: str) -> bool:
        return word in self.words

    def __len__(self) -> int:
        return len(self.words)

    @classmethod
    def load(cls, path) -> "Dictionary":
        """One word per line, UTF-8; '#'-prefixed comment lines ignored."""
        words = []
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                word = line.strip()
                if word and not word.startswith("#"):
                    words.append(word)
        return cls(words)


@dataclass(frozen=True)
class CorruptionSpec:
    p_distance_1: float = 0.71
    seed: int = 0

    def __post_init__(self):
        if not 0.0 <= self.p_distance_1 <= 1.0:
            raise ValueError(f"p_distance_1 must be in [0, 1], got {self.p_distance_1}")


@dataclass(frozen=True)
class CorruptionResult:
    corrected_label: str
    word_index: int
    distance: int
    replacement: str


def _single_edits(word: str, alphabet: Iterable[str]) -> set[str]:
    """All strings one insert/delete/substitute away from word (word excluded)."""
    out = set()
    for i in range(len(word)):  # deletions
        out.add(word[:i] + word[i + 1 :])
    for i in range(len(word) + 1):  # insertions
        for c in alphabet:
            out.add(word[:i] + c + word[i:])
    for i in range(len(word)):  # substitutions
        for c in alphabet:
            out.add(word[:i] + c + word[i + 1 :])
    out.discard(word)
    return out


def _within_band(a: str, b: str, limit: int) -> int | None:
    """Banded Levenshtein with early exit; returns the distance or None if > limit."""
    if abs(len(a) - len(b)) > limit:
        return None
    n, m = len(a), len(b)
    prev = list(range(n + 1))
    for i in range(1, m + 1):
        cur = [i] + [0] * n
        best_row = cur[0]
        bi = b[i - 1]
        lo = max(1, i - limit)
        hi = min(n, i + limit)
        for j in range(1, n + 1):
            if j < lo or j > hi:
                cur[j] = limit + 1
                continue
            cost = 0 if a[j - 1] == bi else 1
            cur[j] = min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + cost)
            best_row = min(best_row, cur[j])
        if best_row > limit:
            return None
        prev = cur
    return prev[n] if prev[n] <= limit else None


def neighbors_at_distance(word: str, dictionary: Dictionary, d: int) -> set[str]:
    """Dictionary words at edit distance exactly d (1 or 2) from word.

    Distance 1 enumerates candidate edits and filters them against the
    dictionary; distance 2 does the same through double edits when the
    dictionary is large, falling back to a banded scan for small ones.
    """
    if d not in (1, 2):
        raise InvalidDistanceError(f"neighbor distance must be 1 or 2, got {d}")
    if not word:
        raise ValueError("word is empty")
    alphabet = dictionary.alphabet
    if d == 1:
        return {w for w in _single_edits(word, alphabet) if w in dictionary}

    # Cost estimate: double-edit enumeration grows with (word length x
    # alphabet)^2, the scan with dictionary size.
    edit_count = (2 * len(word) + 1) * len(alphabet) + len(word)
    if edit_count * edit_count // 4 < len(dictionary) * 8:
        first = _single_edits(word, alphabet) | {word}
        candidates = set()
        for e in first:
            candidates |= _single_edits(e, alphabet)
        hits = {w for w in candidates if w in dictionary and w != word}
        return {w for w in hits if edit_distance(word, w) == 2}
    out = set()
    for w in dictionary.words:
        if w != word and _within_band(word, w, 2) == 2:
            out.add(w)
    return out


def corrupt_label(
    label: str, dictionary: Dictionary, spec: CorruptionSpec
) -> CorruptionResult:
    """Replace exactly one word of the label with a dictionary neighbor.

    The word is chosen uniformly; the target edit distance is 1 with
    probability p_distance_1, else 2; the replacement is uniform over the
    neighbor set at that distance. When the sampled distance has no
    neighbors the other distance is tried, then remaining words in random
    order; if nothing works, NoCandidateError.
    """
    norm = normalize_label(label)
    if not norm:
        raise ValueError("label is empty")
    tokens = norm.split()
    rng = random.Random(spec.seed)
    first_idx = rng.randrange(len(tokens))
    d_primary = 1 if rng.random() < spec.p_distance_1 else 2
    order = [first_idx] + rng.sample(
        [i for i in range(len(tokens)) if i != first_idx],
        len(tokens) - 1,
    )
    for idx in order:
        for d in (d_primary, 3 - d_primary):
            neighbors = neighbors_at_distance(tokens[idx], dictionary, d)
            if neighbors:
                replacement = rng.choice(sorted(neighbors))
                out = tokens.copy()
                out[idx] = replacement
                return CorruptionResult(
                    corrected_label=" ".join(out),
                    word_index=idx,
                    distance=d,
                    replacement=replacement,
                )
    raise NoCandidateError(
        f"no dictionary word at distance 1 or 2 from any word of {norm!r}"
    )
