"""Corpus-level evaluation: per-sample metrics, the automated pairwise
decision rule, Pareto frontiers, preference-correlation curves, and
agreement statistics against human judgments.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

from .errors import JoinFailureError
from .ink import Ink, point_cloud
from .metrics.cde import Alignment, cde
from .metrics.chamfer import GridConfig, chamfer_offset
from .metrics.text import edit_distance, error_rates, normalize_label, select_k
from .recognition import Recognizer, recognized_at

MIN_CURVE_SAMPLES = 50


@dataclass(frozen=True)
class Sample:
    id: str
    original_ink: Ink
    original_label: str
    corrected_label: str

    def __post_init__(self):
        if not self.original_label or not self.corrected_label:
            raise ValueError("sample labels must be non-empty")


@dataclass(frozen=True)
class CandidateInk:
    sample_id: str
    model_id: str
    ink: Ink
    sim: Optional[float] = None

    def __post_init__(self):
        if self.sim is not None and not 0.0 <= self.sim <= 1.0:
            raise ValueError(f"sim must be in [0, 1], got {self.sim}")


@dataclass(frozen=True)
class SampleMetrics:
    cer_top1: float
    wer_top1: float
    recognized_top1: bool
    recognized_top10: bool
    cde: float
    k_used: int
    alignment: Alignment

    def __post_init__(self):
        if self.recognized_top1 and not self.recognized_top10:
            raise ValueError("recognized at top-1 implies recognized at top-10")


@dataclass(frozen=True)
class PreferenceRecord:
    sample_id: str
    left_model: str
    right_model: str
    choice: str  # left | right | skip
    rater_id: str
    timestamp: str  # ISO-8601

    def __post_init__(self):
        if self.left_model == self.right_model:
            raise ValueError("preference pair must compare two different models")
        if self.choice not in ("left", "right", "skip"):
            raise ValueError(f"choice must be left/right/skip, got {self.choice!r}")

    @property
    def chosen_model(self) -> Optional[str]:
        if self.choice == "left":
            return self.left_model
        if self.choice == "right":
            return self.right_model
        return None


@dataclass(frozen=True)
class ParetoPoint:
    model_id: str
    cer: float
    cde: float
    sim: Optional[float] = None

    def __post_init__(self):
        if not (math.isfinite(self.cer) and math.isfinite(self.cde)):
            raise ValueError("pareto coordinates must be finite")


def _compute_metrics(
    sample: Sample,
    cand: CandidateInk,
    recognizer: Recognizer,
    cfg: GridConfig,
) -> tuple[SampleMetrics, str]:
    if cand.sample_id != sample.id:
        raise ValueError(f"candidate {cand.sample_id!r} does not belong to sample {sample.id!r}")
    result = recognizer.recognize(cand.ink)
    top1 = result.top1 or ""
    rates = error_rates(sample.corrected_label, top1)
    rec1 = recognized_at(result, sample.corrected_label, 1)
    rec10 = recognized_at(result, sample.corrected_label, 10)
    k = select_k(sample.original_label, sample.corrected_label)
    alignment = cde(point_cloud(sample.original_ink), point_cloud(cand.ink), k, cfg)
    metrics = SampleMetrics(
        cer_top1=rates.cer,
        wer_top1=rates.wer,
        recognized_top1=rec1,
        recognized_top10=rec10,
        cde=alignment.total,
        k_used=k,
        alignment=alignment,
    )
    return metrics, top1


def evaluate_sample(
    sample: Sample,
    cand: CandidateInk,
    recognizer: Recognizer,
    cfg: GridConfig = GridConfig(),
) -> SampleMetrics:
    """All per-candidate metrics: CER/WER of the recognizer's top hypothesis
    against the corrected label, top-1/top-10 recognition flags, and the
    edit-aware distance between original and candidate ink with the group
    count selected from the labels."""
    return _compute_metrics(sample, cand, recognizer, cfg)[0]


def distance_pair(
    sample: Sample, cand: CandidateInk, cfg: GridConfig = GridConfig()
) -> dict[str, float]:
    """Both similarity distances (segmented and single-offset) for curve
    analyses that compare the two."""
    p = point_cloud(sample.original_ink)
    q = point_cloud(cand.ink)
    k = select_k(sample.original_label, sample.corrected_label)
    return {
        "cde": cde(p, q, k, cfg).total,
        "cdo": chamfer_offset(p, q, cfg)[0],
    }


def decide_pair(a: SampleMetrics, b: SampleMetrics) -> str:
    """Automated preference: recognizability first, then similarity.

    If exactly one candidate is recognized at top-1, it wins. If both are,
    the lower segmented distance wins. If neither is, lower CER then lower
    distance break the tie. Returns "A", "B", or "tie".
    """
    if a.recognized_top1 != b.recognized_top1:
        return "A" if a.recognized_top1 else "B"
    if a.recognized_top1:  # both recognized
        if a.cde != b.cde:
            return "A" if a.cde < b.cde else "B"
        return "tie"
    if a.cer_top1 != b.cer_top1:
        return "A" if a.cer_top1 < b.cer_top1 else "B"
    if a.cde != b.cde:
        return "A" if a.cde < b.cde else "B"
    return "tie"


def decision_winner(decision: str, model_a: str, model_b: str) -> Optional[str]:
    """Map a decide_pair output onto model ids (None = tie)."""
    if decision == "A":
        return model_a
    if decision == "B":
        return model_b
    return None


def pareto_frontier(points: Sequence[ParetoPoint]) -> list[ParetoPoint]:
    """Points not dominated by any other (dominated: some other point has
    <= cer and <= cde with at least one strict). Duplicates are mutually
    non-dominating and are all retained. Sorted by cer ascending."""
    out = []
    for i, p in enumerate(points):
        dominated = False
        for j, q in enumerate(points):
            if i == j:
                continue
            if q.cer <= p.cer and q.cde <= p.cde and (q.cer < p.cer or q.cde < p.cde):
                dominated = True
                break
        if not dominated:
            out.append(p)
    return sorted(out, key=lambda p: (p.cer, p.cde, p.model_id))


def _join_records(
    records: Sequence[PreferenceRecord],
    metrics: Mapping[tuple[str, str], float],
) -> list[tuple[PreferenceRecord, float, float]]:
    joined = []
    unmatched = []
    for rec in records:
        left = metrics.get((rec.sample_id, rec.left_model))
        right = metrics.get((rec.sample_id, rec.right_model))
        if left is None or right is None:
            unmatched.append(rec.sample_id)
        else:
            joined.append((rec, left, right))
    if unmatched:
        raise JoinFailureError(unmatched)
    return joined


@dataclass(frozen=True)
class CurvePoint:
    threshold: float
    match_fraction: float
    n: int


def preference_curve(
    records: Sequence[PreferenceRecord],
    distances: Mapping[tuple[str, str], Mapping[str, float]],
    which_metric: str = "cde",
    min_samples: int = MIN_CURVE_SAMPLES,
) -> list[CurvePoint]:
    """How often the lower-distance candidate is the human choice, as a
    function of the distance-difference threshold.

    distances maps (sample_id, model_id) to {"cde": ..., "cdo": ...}. Skips
    are excluded, as are records where both sides have equal distance (no
    ordering to agree with). Thresholds are the distinct observed absolute
    differences; thresholds with fewer than min_samples records are omitted.
    """
    if which_metric not in ("cde", "cdo"):
        raise ValueError(f"which_metric must be 'cde' or 'cdo', got {which_metric!r}")
    flat = {
        key: vals[which_metric] for key, vals in distances.items() if which_metric in vals
    }
    active = [r for r in records if r.choice != "skip"]
    joined = _join_records(active, flat)

    diffs_matches: list[tuple[float, bool]] = []
    for rec, d_left, d_right in joined:
        if d_left == d_right:
            continue
        lower = rec.left_model if d_left < d_right else rec.right_model
        diffs_matches.append((abs(d_left - d_right), rec.chosen_model == lower))
    diffs_matches.sort(key=lambda t: t[0])

    out = []
    for threshold in sorted({d for d, _ in diffs_matches}):
        tail = [m for d, m in diffs_matches if d >= threshold]
        if len(tail) < min_samples:
            continue
        out.append(
            CurvePoint(
                threshold=threshold,
                match_fraction=sum(tail) / len(tail),
                n=len(tail),
            )
        )
    return out


def agreement(
    records: Sequence[PreferenceRecord],
    decisions: Mapping[str, Optional[str]],
) -> float:
    """Fraction of non-skip records whose automated decision matches the
    human choice; automated ties count half.

    decisions maps sample_id to the winning model id (None = tie).
    """
    active = [r for r in records if r.choice != "skip"]
    if not active:
        raise ValueError("no non-skip records to score")
    unmatched = [r.sample_id for r in active if r.sample_id not in decisions]
    if unmatched:
        raise JoinFailureError(unmatched)
    score = 0.0
    for rec in active:
        winner = decisions[rec.sample_id]
        if winner is None:
            score += 0.5
        elif winner == rec.chosen_model:
            score += 1.0
    return score / len(active)


@dataclass(frozen=True)
class RecognizabilityPreference:
    """Among records where exactly one side was recognized, how often that
    side was the human choice (with a 95% normal-approximation binomial
    interval)."""

    fraction_top1: Optional[float]
    n_top1: int
    margin_top1: Optional[float]
    fraction_top10: Optional[float]
    n_top10: int
    margin_top10: Optional[float]


def _solely_recognized_fraction(
    records: Sequence[PreferenceRecord],
    flags: Mapping[tuple[str, str], bool],
) -> tuple[Optional[float], int, Optional[float]]:
    hits = 0
    n = 0
    unmatched = []
    for rec in records:
        left = flags.get((rec.sample_id, rec.left_model))
        right = flags.get((rec.sample_id, rec.right_model))
        if left is None or right is None:
            unmatched.append(rec.sample_id)
            continue
        if left == right:
            continue
        n += 1
        recognized_model = rec.left_model if left else rec.right_model
        if rec.chosen_model == recognized_model:
            hits += 1
    if unmatched:
        raise JoinFailureError(unmatched)
    if n == 0:
        return None, 0, None
    frac = hits / n
    margin = 1.96 * math.sqrt(frac * (1.0 - frac) / n)
    return frac, n, margin


def recognizability_preference_stats(
    records: Sequence[PreferenceRecord],
    flags_top1: Mapping[tuple[str, str], bool],
    flags_top10: Mapping[tuple[str, str], bool],
) -> RecognizabilityPreference:
    active = [r for r in records if r.choice != "skip"]
    f1, n1, m1 = _solely_recognized_fraction(active, flags_top1)
    f10, n10, m10 = _solely_recognized_fraction(active, flags_top10)
    return RecognizabilityPreference(f1, n1, m1, f10, n10, m10)


# ---------------------------------------------------------------------------
# Corpus-level evaluation and aggregation


@dataclass
class CorpusReport:
    model_id: str
    per_sample: list[dict] = field(default_factory=list)
    aggregates: dict = field(default_factory=dict)


def aggregate_metrics(
    entries: Sequence[tuple[Sample, SampleMetrics, str | None]]
) -> dict:
    """Corpus aggregates. CER/WER come in two flavors: total edits over total
    reference length (corpus-weighted) and the mean of per-sample ratios."""
    if not entries:
        return {}
    cdes = sorted(m.cde for _, m, _ in entries)
    mid = len(cdes) // 2
    median = cdes[mid] if len(cdes) % 2 else 0.5 * (cdes[mid - 1] + cdes[mid])

    total_char_edits = 0
    total_chars = 0
    total_word_edits = 0
    total_words = 0
    for sample, metrics, top1 in entries:
        ref = normalize_label(sample.corrected_label)
        hyp = normalize_label(top1 or "")
        total_char_edits += edit_distance(ref, hyp)
        total_chars += len(ref)
        total_word_edits += edit_distance(ref.split(), hyp.split())
        total_words += len(ref.split())

    n = len(entries)
    return {
        "n_samples": n,
        "cde_mean": sum(cdes) / n,
        "cde_median": median,
        "cer_corpus": total_char_edits / total_chars,
        "wer_corpus": total_word_edits / total_words,
        "cer_mean_of_ratios": sum(m.cer_top1 for _, m, _ in entries) / n,
        "wer_mean_of_ratios": sum(m.wer_top1 for _, m, _ in entries) / n,
        "recognized_top1_rate": sum(m.recognized_top1 for _, m, _ in entries) / n,
        "recognized_top10_rate": sum(m.recognized_top10 for _, m, _ in entries) / n,
    }


def _evaluate_one(args) -> tuple[str, SampleMetrics, str]:
    sample, cand, recognizer, cfg = args
    metrics, top1 = _compute_metrics(sample, cand, recognizer, cfg)
    return sample.id, metrics, top1


def evaluate_corpus(
    samples: Sequence[Sample],
    candidates: Sequence[CandidateInk],
    recognizer: Recognizer,
    cfg: GridConfig = GridConfig(),
    workers: int = 1,
) -> CorpusReport:
    """Evaluate one model's candidates over a corpus.

    Per-sample work is independent, so workers > 1 fans out over processes
    (the recognizer must be picklable).
    """
    by_id = {s.id: s for s in samples}
    model_ids = {c.model_id for c in candidates}
    if len(model_ids) != 1:
        raise ValueError(f"expected candidates from one model, got {sorted(model_ids)}")
    jobs = []
    for cand in candidates:
        if cand.sample_id not in by_id:
            raise ValueError(f"candidate references unknown sample {cand.sample_id!r}")
        jobs.append((by_id[cand.sample_id], cand, recognizer, cfg))

    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_evaluate_one, jobs, chunksize=8))
    else:
        results = [_evaluate_one(j) for j in jobs]

    report = CorpusReport(model_id=next(iter(model_ids)))
    entries = []
    for (sample_id, metrics, top1), (sample, cand, _, _) in zip(results, jobs):
        entries.append((sample, metrics, top1))
        report.per_sample.append(
            {
                "sample_id": sample_id,
                "model_id": cand.model_id,
                "sim": cand.sim,
                "top1": top1,
                "cer_top1": metrics.cer_top1,
                "wer_top1": metrics.wer_top1,
                "recognized_top1": metrics.recognized_top1,
                "recognized_top10": metrics.recognized_top10,
                "cde": metrics.cde,
                "k_used": metrics.k_used,
                "p_bounds": list(metrics.alignment.p_bounds),
                "q_bounds": list(metrics.alignment.q_bounds),
                "group_offsets": [[o.dx, o.dy] for o in metrics.alignment.offsets],
            }
        )
    report.aggregates = aggregate_metrics(entries)
    return report
