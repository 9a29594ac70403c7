"""File formats: JSONL corpora, ink XML (InkML-style) ingestion, reports,
and preference CSV.

Corpus JSONL: one object per line. Sample lines carry
{"id", "label", "corrected_label", "strokes": [[[x, y(, t)], ...], ...]};
candidate lines are the same shape plus {"model_id", "sim"?} where "id"
names the sample the candidate corrects. Loading validates every ink
invariant and referential integrity.
"""

from __future__ import annotations

import csv
import io
import json
import math
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from .errors import ChannelCountError, IntegrityError, MalformedInkMLError, ParseError
from .harness import CandidateInk, PreferenceRecord, Sample
from .ink import Ink, Point, Stroke


@dataclass
class Corpus:
    samples: list[Sample] = field(default_factory=list)
    candidates: dict[str, list[CandidateInk]] = field(default_factory=dict)

    def sample(self, sample_id: str) -> Sample:
        for s in self.samples:
            if s.id == sample_id:
                return s
        raise KeyError(sample_id)

    def validate(self) -> None:
        ids = [s.id for s in self.samples]
        if len(ids) != len(set(ids)):
            dupes = sorted({i for i in ids if ids.count(i) > 1})
            raise IntegrityError(f"duplicate sample ids: {dupes}")
        known = set(ids)
        for model_id, cands in self.candidates.items():
            seen = set()
            for c in cands:
                if c.sample_id not in known:
                    raise IntegrityError(
                        f"candidate for model {model_id!r} references unknown sample {c.sample_id!r}"
                    )
                if c.sample_id in seen:
                    raise IntegrityError(
                        f"model {model_id!r} has multiple candidates for sample {c.sample_id!r}"
                    )
                seen.add(c.sample_id)


def _ink_from_strokes(raw, line_no: int, path: str | None) -> Ink:
    if not isinstance(raw, list) or not raw:
        raise ParseError("strokes must be a non-empty list", line_no, path)
    strokes = []
    for stroke in raw:
        if not isinstance(stroke, list) or not stroke:
            raise ParseError("each stroke must be a non-empty list of points", line_no, path)
        pts = []
        for pt in stroke:
            if not isinstance(pt, list) or len(pt) not in (2, 3):
                raise ParseError(f"point must be [x, y] or [x, y, t], got {pt!r}", line_no, path)
            vals = []
            for v in pt:
                if not isinstance(v, (int, float)) or isinstance(v, bool) or not math.isfinite(v):
                    raise ParseError(f"non-finite or non-numeric coordinate {v!r}", line_no, path)
                vals.append(float(v))
            pts.append(Point(*vals))
        try:
            strokes.append(Stroke(pts))
        except Exception as exc:
            raise ParseError(str(exc), line_no, path) from exc
    try:
        return Ink(strokes)
    except Exception as exc:
        raise ParseError(str(exc), line_no, path) from exc


def _parse_line(obj: dict, line_no: int, path: str | None):
    if not isinstance(obj, dict):
        raise ParseError("each line must be a JSON object", line_no, path)
    if "id" not in obj or "strokes" not in obj:
        raise ParseError("line needs 'id' and 'strokes'", line_no, path)
    ink = _ink_from_strokes(obj["strokes"], line_no, path)
    if "model_id" in obj:
        sim = obj.get("sim")
        try:
            return CandidateInk(
                sample_id=str(obj["id"]),
                model_id=str(obj["model_id"]),
                ink=ink,
                sim=None if sim is None else float(sim),
            )
        except ValueError as exc:
            raise ParseError(str(exc), line_no, path) from exc
    if "label" not in obj or "corrected_label" not in obj:
        raise ParseError("sample line needs 'label' and 'corrected_label'", line_no, path)
    try:
        return Sample(
            id=str(obj["id"]),
            original_ink=ink,
            original_label=str(obj["label"]),
            corrected_label=str(obj["corrected_label"]),
        )
    except ValueError as exc:
        raise ParseError(str(exc), line_no, path) from exc


def load_corpus(path) -> Corpus:
    """Parse a JSONL corpus (samples and, optionally, candidates)."""
    corpus = Corpus()
    path = Path(path)
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(f"invalid JSON: {exc}", line_no, str(path)) from exc
            parsed = _parse_line(obj, line_no, str(path))
            if isinstance(parsed, Sample):
                corpus.samples.append(parsed)
            else:
                corpus.candidates.setdefault(parsed.model_id, []).append(parsed)
    corpus.validate()
    return corpus


def merge_candidates(corpus: Corpus, path) -> None:
    """Load candidate lines from another JSONL file into an existing corpus."""
    extra = load_corpus_candidates(path)
    for model_id, cands in extra.items():
        corpus.candidates.setdefault(model_id, []).extend(cands)
    corpus.validate()


def load_corpus_candidates(path) -> dict[str, list[CandidateInk]]:
    out: dict[str, list[CandidateInk]] = {}
    path = Path(path)
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(f"invalid JSON: {exc}", line_no, str(path)) from exc
            parsed = _parse_line(obj, line_no, str(path))
            if not isinstance(parsed, CandidateInk):
                raise ParseError("expected candidate lines (with model_id)", line_no, str(path))
            out.setdefault(parsed.model_id, []).append(parsed)
    return out


def _sample_to_obj(sample: Sample) -> dict:
    return {
        "id": sample.id,
        "label": sample.original_label,
        "corrected_label": sample.corrected_label,
        "strokes": sample.original_ink.to_stroke_lists(),
    }


def _candidate_to_obj(cand: CandidateInk) -> dict:
    obj = {
        "id": cand.sample_id,
        "model_id": cand.model_id,
        "strokes": cand.ink.to_stroke_lists(),
    }
    if cand.sim is not None:
        obj["sim"] = cand.sim
    return obj


def save_corpus(corpus: Corpus, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for sample in corpus.samples:
            fh.write(json.dumps(_sample_to_obj(sample), ensure_ascii=False) + "\n")
        for model_id in sorted(corpus.candidates):
            for cand in corpus.candidates[model_id]:
                fh.write(json.dumps(_candidate_to_obj(cand), ensure_ascii=False) + "\n")


def save_report(report: dict, path) -> None:
    """Write a report document (per-sample array plus aggregate block)."""
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(report, fh, indent=2, ensure_ascii=False, sort_keys=True)
        fh.write("\n")


def load_report(path) -> dict:
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def parse_inkml(document: str) -> list[Stroke]:
    """Parse trace elements of an ink XML document into strokes.

    Each trace holds comma-separated points of whitespace-separated channel
    values (x y [t]); elements other than traces are ignored; namespaces on
    the trace tag are tolerated.
    """
    try:
        root = ET.fromstring(document)
    except ET.ParseError as exc:
        raise MalformedInkMLError(f"not well-formed XML: {exc}") from exc
    strokes = []
    for elem in root.iter():
        tag = elem.tag.rsplit("}", 1)[-1]
        if tag != "trace":
            continue
        text = elem.text or ""
        pts = []
        for chunk in text.split(","):
            chunk = chunk.strip()
            if not chunk:
                continue
            fields = chunk.split()
            if len(fields) < 2:
                raise ChannelCountError(
                    f"trace point needs at least x and y, got {chunk!r}"
                )
            try:
                vals = [float(v) for v in fields[:3]]
            except ValueError as exc:
                raise MalformedInkMLError(f"bad numeric value in {chunk!r}") from exc
            pts.append(Point(*vals))
        if pts:
            strokes.append(Stroke(pts))
    return strokes


PREFERENCE_CSV_HEADER = ["sample_id", "left_model", "right_model", "choice", "rater_id", "timestamp"]


def preferences_to_csv(records: Sequence[PreferenceRecord]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(PREFERENCE_CSV_HEADER)
    for r in records:
        writer.writerow([r.sample_id, r.left_model, r.right_model, r.choice, r.rater_id, r.timestamp])
    return buf.getvalue()


def load_preferences(path) -> list[PreferenceRecord]:
    records = []
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        missing = set(PREFERENCE_CSV_HEADER) - set(reader.fieldnames or [])
        if missing:
            raise ParseError(f"preference CSV missing columns: {sorted(missing)}", path=str(path))
        for row in reader:
            records.append(
                PreferenceRecord(
                    sample_id=row["sample_id"],
                    left_model=row["left_model"],
                    right_model=row["right_model"],
                    choice=row["choice"],
                    rater_id=row["rater_id"],
                    timestamp=row["timestamp"],
                )
            )
    return records
