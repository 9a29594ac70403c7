"""Recognizability scoring: the recognizer contract, top-N matching, a
template recognizer for self-contained evaluation, and a client for an
external recognition service.

Any recognizer returns ranked (label, score) candidates; an empty candidate
list means the recognizer abstained. CER/WER against top-1 and top-N
recognition checks work identically for every implementation.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Protocol, Sequence

import requests

from .errors import EmptyTemplatesError, ProtocolError, TransportError
from .ink import Ink, PointCloud, point_cloud
from .metrics.chamfer import GridConfig, chamfer_offset
from .metrics.text import normalize_label

DEFAULT_MAX_CANDIDATES = 10


@dataclass(frozen=True)
class RecognitionResult:
    """Candidates ordered by descending score; empty means unrecognized."""

    candidates: tuple[tuple[str, float], ...]

    def __post_init__(self):
        scores = [s for _, s in self.candidates]
        if any(a < b for a, b in zip(scores, scores[1:])):
            raise ValueError("candidate scores must be non-increasing")

    @property
    def top1(self) -> str | None:
        return self.candidates[0][0] if self.candidates else None


class Recognizer(Protocol):
    """Recognizer contract: pure with respect to configuration."""

    max_candidates: int

    def recognize(self, ink: Ink) -> RecognitionResult: ...


def recognized_at(result: RecognitionResult, label: str, n: int) -> bool:
    """True iff the normalized label appears among the first n candidates."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    target = normalize_label(label)
    return any(
        normalize_label(cand) == target
        for cand, _ in result.candidates[: min(n, len(result.candidates))]
    )


class TemplateRecognizer:
    """Ranks template labels by translation-optimized chamfer distance.

    A stand-in for a trained recognizer: scores are negated distances, so
    an ink identical to a template (up to translation) scores ~0 and wins.
    Equal distances tie-break lexicographically for determinism.
    """

    def __init__(
        self,
        templates: Sequence[tuple[str, Ink]],
        cfg: GridConfig = GridConfig(),
        max_candidates: int = DEFAULT_MAX_CANDIDATES,
    ):
        if not templates:
            raise EmptyTemplatesError("template recognizer needs at least one template")
        self.cfg = cfg
        self.max_candidates = max_candidates
        self._templates: list[tuple[str, PointCloud]] = [
            (label, point_cloud(ink)) for label, ink in templates
        ]

    def recognize(self, ink: Ink) -> RecognitionResult:
        cloud = point_cloud(ink)
        scored = []
        for label, template_cloud in self._templates:
            dist, _ = chamfer_offset(cloud, template_cloud, self.cfg)
            scored.append((dist, label))
        scored.sort(key=lambda t: (t[0], t[1]))
        top = scored[: self.max_candidates]
        return RecognitionResult(tuple((label, -dist) for dist, label in top))


def template_recognize(
    ink: Ink,
    templates: Sequence[tuple[str, Ink]],
    cfg: GridConfig = GridConfig(),
    max_candidates: int = DEFAULT_MAX_CANDIDATES,
) -> RecognitionResult:
    """One-shot template recognition (see TemplateRecognizer)."""
    return TemplateRecognizer(templates, cfg, max_candidates).recognize(ink)


class RemoteRecognizer:
    """HTTP client for an external recognizer.

    Request: JSON {"strokes": [[[x, y], ...], ...], "max_candidates": n}.
    Response: JSON {"candidates": [{"label": ..., "score": ...}, ...]} with
    scores descending. Transport failures and malformed responses raise
    distinct errors so infrastructure problems are never mistaken for
    abstention.
    """

    def __init__(
        self,
        endpoint: str,
        max_candidates: int = DEFAULT_MAX_CANDIDATES,
        timeout: float = 30.0,
    ):
        self.endpoint = endpoint
        self.max_candidates = max_candidates
        self.timeout = timeout

    def recognize(self, ink: Ink) -> RecognitionResult:
        payload = {
            "strokes": [[[p.x, p.y] for p in s.points] for s in ink.strokes],
            "max_candidates": self.max_candidates,
        }
        try:
            resp = requests.post(self.endpoint, json=payload, timeout=self.timeout)
        except requests.RequestException as exc:
            raise TransportError(f"recognizer request failed: {exc}") from exc
        if resp.status_code != 200:
            raise ProtocolError(f"recognizer returned HTTP {resp.status_code}")
        try:
            body = resp.json()
        except (json.JSONDecodeError, ValueError) as exc:
            raise ProtocolError(f"recognizer response is not JSON: {exc}") from exc
        try:
            raw = body["candidates"]
            candidates = tuple((str(c["label"]), float(c["score"])) for c in raw)
        except (KeyError, TypeError, ValueError) as exc:
            raise ProtocolError(f"malformed recognizer response: {exc}") from exc
        try:
            return RecognitionResult(candidates)
        except ValueError as exc:
            raise ProtocolError(str(exc)) from exc


def remote_recognize(
    ink: Ink,
    endpoint: str,
    max_candidates: int = DEFAULT_MAX_CANDIDATES,
    timeout: float = 30.0,
) -> RecognitionResult:
    """One-shot remote recognition (see RemoteRecognizer)."""
    return RemoteRecognizer(endpoint, max_candidates, timeout).recognize(ink)
