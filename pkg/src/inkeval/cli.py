"""Command-line interface.

Verbs: metrics (corpus + candidates -> report), corrupt (labels ->
spell-corrected labels), compare (two candidate sets -> decisions and,
given preferences, agreement), pareto (reports/points -> frontier), curve
(preferences + reports -> threshold/agreement data), synth (labels ->
synthetic corpus), serve (rating service). All verbs emit JSON to stdout
unless --out is given; every randomized step takes --seed.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .corpus_io import (
    Corpus,
    load_corpus,
    load_preferences,
    load_report,
    merge_candidates,
    save_corpus,
    save_report,
)
from .harness import (
    ParetoPoint,
    agreement,
    decide_pair,
    decision_winner,
    evaluate_corpus,
    pareto_frontier,
    preference_curve,
    recognizability_preference_stats,
)
from .ink import point_cloud
from .labelgen import CorruptionSpec, Dictionary, corrupt_label
from .metrics.chamfer import GridConfig, chamfer_offset
from .recognition import RemoteRecognizer, TemplateRecognizer
from .service import build_session, serve_rating
from .synth import StyleParams, builtin_font, render_label, splice_correct


def _emit(payload, out: str | None) -> None:
    text = json.dumps(payload, indent=2, ensure_ascii=False, sort_keys=True)
    if out:
        Path(out).write_text(text + "\n", encoding="utf-8")
    else:
        print(text)


def _grid_config(args) -> GridConfig:
    return GridConfig(
        range_factor=args.grid_range,
        coarse_steps=args.grid_steps,
        refine_levels=args.grid_refine,
    )


def _add_grid_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--grid-range", type=float, default=0.5, help="offset search half-range as a fraction of the combined bounding-box diagonal")
    parser.add_argument("--grid-steps", type=int, default=21, help="offset grid cells per axis")
    parser.add_argument("--grid-refine", type=int, default=2, help="refinement levels around the best cell")


def _build_recognizer(args, corpus: Corpus):
    if args.recognizer == "remote":
        if not args.endpoint:
            raise SystemExit("--endpoint is required with --recognizer remote")
        return RemoteRecognizer(args.endpoint)
    labels = sorted(
        {s.corrected_label for s in corpus.samples} | {s.original_label for s in corpus.samples}
    )
    font = builtin_font()
    templates = [(label, render_label(label, font)) for label in labels]
    return TemplateRecognizer(templates, cfg=GridConfig(coarse_steps=9, refine_levels=1))


def _report_to_dict(report) -> dict:
    return {
        "model_id": report.model_id,
        "samples": report.per_sample,
        "aggregates": report.aggregates,
    }


def cmd_metrics(args) -> None:
    corpus = load_corpus(args.corpus)
    for extra in args.candidates or []:
        merge_candidates(corpus, extra)
    models = [args.model] if args.model else sorted(corpus.candidates)
    if not models:
        raise SystemExit("corpus has no candidates to evaluate")
    recognizer = _build_recognizer(args, corpus)
    cfg = _grid_config(args)
    reports = {}
    for model in models:
        report = evaluate_corpus(
            corpus.samples, corpus.candidates[model], recognizer, cfg, workers=args.workers
        )
        doc = _report_to_dict(report)
        if args.with_cdo:
            by_id = {s.id: s for s in corpus.samples}
            cand_by_id = {c.sample_id: c for c in corpus.candidates[model]}
            for row in doc["samples"]:
                sample = by_id[row["sample_id"]]
                cand = cand_by_id[row["sample_id"]]
                row["cdo"] = chamfer_offset(
                    point_cloud(sample.original_ink), point_cloud(cand.ink), cfg
                )[0]
        reports[model] = doc
    payload = reports[models[0]] if len(models) == 1 else {"reports": reports}
    if args.out:
        save_report(payload, args.out)
    else:
        _emit(payload, None)


def cmd_corrupt(args) -> None:
    dictionary = Dictionary.load(args.dictionary)
    labels = [
        line.strip()
        for line in Path(args.labels).read_text(encoding="utf-8").splitlines()
        if line.strip()
    ]
    rows = []
    for i, label in enumerate(labels):
        spec = CorruptionSpec(p_distance_1=args.p1, seed=args.seed + i)
        result = corrupt_label(label, dictionary, spec)
        rows.append(
            {
                "label": label,
                "corrected_label": result.corrected_label,
                "word_index": result.word_index,
                "distance": result.distance,
            }
        )
    _emit(rows, args.out)


def cmd_compare(args) -> None:
    corpus = load_corpus(args.corpus)
    for extra in args.candidates or []:
        merge_candidates(corpus, extra)
    for model in (args.model_a, args.model_b):
        if model not in corpus.candidates:
            raise SystemExit(f"corpus has no candidates for model {model!r}")
    recognizer = _build_recognizer(args, corpus)
    cfg = _grid_config(args)
    rep_a = evaluate_corpus(corpus.samples, corpus.candidates[args.model_a], recognizer, cfg, workers=args.workers)
    rep_b = evaluate_corpus(corpus.samples, corpus.candidates[args.model_b], recognizer, cfg, workers=args.workers)

    metrics_a = {row["sample_id"]: row for row in rep_a.per_sample}
    metrics_b = {row["sample_id"]: row for row in rep_b.per_sample}
    decisions = {}
    rows = []
    flags1, flags10 = {}, {}
    sm_map_a = _sample_metrics_map(corpus, rep_a)
    sm_map_b = _sample_metrics_map(corpus, rep_b)
    for sid in sorted(set(metrics_a) & set(metrics_b)):
        decision = decide_pair(sm_map_a[sid], sm_map_b[sid])
        winner = decision_winner(decision, args.model_a, args.model_b)
        decisions[sid] = winner
        rows.append(
            {
                "sample_id": sid,
                "decision": decision,
                "winner": winner,
                "cde_a": metrics_a[sid]["cde"],
                "cde_b": metrics_b[sid]["cde"],
                "recognized_a": metrics_a[sid]["recognized_top1"],
                "recognized_b": metrics_b[sid]["recognized_top1"],
            }
        )
        flags1[(sid, args.model_a)] = metrics_a[sid]["recognized_top1"]
        flags1[(sid, args.model_b)] = metrics_b[sid]["recognized_top1"]
        flags10[(sid, args.model_a)] = metrics_a[sid]["recognized_top10"]
        flags10[(sid, args.model_b)] = metrics_b[sid]["recognized_top10"]

    payload = {
        "model_a": args.model_a,
        "model_b": args.model_b,
        "decisions": rows,
        "wins_a": sum(r["winner"] == args.model_a for r in rows),
        "wins_b": sum(r["winner"] == args.model_b for r in rows),
        "ties": sum(r["winner"] is None for r in rows),
    }
    if args.preferences:
        records = load_preferences(args.preferences)
        payload["agreement"] = agreement(records, decisions)
        stats = recognizability_preference_stats(records, flags1, flags10)
        payload["recognizability_preference"] = {
            "top1": {"fraction": stats.fraction_top1, "n": stats.n_top1, "margin95": stats.margin_top1},
            "top10": {"fraction": stats.fraction_top10, "n": stats.n_top10, "margin95": stats.margin_top10},
        }
    _emit(payload, args.out)


def _sample_metrics_map(corpus: Corpus, report):
    """Rebuild SampleMetrics objects from a report's per-sample rows."""
    from .harness import SampleMetrics
    from .metrics.cde import Alignment
    from .metrics.chamfer import Offset

    out = {}
    for row in report.per_sample:
        bounds_p = tuple(row["p_bounds"])
        bounds_q = tuple(row["q_bounds"])
        offsets = tuple(Offset(dx, dy) for dx, dy in row["group_offsets"])
        k = len(bounds_p) - 1
        # group costs are not persisted per group; distribute the total
        costs = (row["cde"] / k,) * k if k else ()
        alignment = Alignment(
            k=k,
            p_bounds=bounds_p,
            q_bounds=bounds_q,
            offsets=offsets,
            group_costs=costs,
            total=row["cde"],
            k_clamped=False,
        )
        out[row["sample_id"]] = SampleMetrics(
            cer_top1=row["cer_top1"],
            wer_top1=row["wer_top1"],
            recognized_top1=row["recognized_top1"],
            recognized_top10=row["recognized_top10"],
            cde=row["cde"],
            k_used=row["k_used"],
            alignment=alignment,
        )
    return out


def cmd_pareto(args) -> None:
    points = []
    for path in args.report or []:
        doc = load_report(path)
        docs = doc["reports"].values() if "reports" in doc else [doc]
        for d in docs:
            sims = {row.get("sim") for row in d["samples"]}
            sim = sims.pop() if len(sims) == 1 else None
            points.append(
                ParetoPoint(
                    model_id=d["model_id"],
                    cer=d["aggregates"]["cer_corpus"],
                    cde=d["aggregates"]["cde_mean"],
                    sim=sim,
                )
            )
    for path in args.points or []:
        for row in json.loads(Path(path).read_text(encoding="utf-8")):
            points.append(
                ParetoPoint(
                    model_id=row["model_id"],
                    cer=float(row["cer"]),
                    cde=float(row["cde"]),
                    sim=row.get("sim"),
                )
            )
    if not points:
        raise SystemExit("no points: pass --report and/or --points")
    frontier = pareto_frontier(points)
    _emit(
        {
            "points": [p.__dict__ for p in points],
            "frontier": [p.__dict__ for p in frontier],
        },
        args.out,
    )


def cmd_curve(args) -> None:
    records = load_preferences(args.preferences)
    distances: dict[tuple[str, str], dict[str, float]] = {}
    for path in args.report:
        doc = load_report(path)
        docs = doc["reports"].values() if "reports" in doc else [doc]
        for d in docs:
            for row in d["samples"]:
                entry = distances.setdefault((row["sample_id"], row["model_id"]), {})
                entry["cde"] = row["cde"]
                if "cdo" in row:
                    entry["cdo"] = row["cdo"]
    curve = preference_curve(records, distances, args.metric, min_samples=args.min_samples)
    _emit(
        [
            {"threshold": c.threshold, "match_fraction": c.match_fraction, "n": c.n}
            for c in curve
        ],
        args.out,
    )


def cmd_synth(args) -> None:
    labels = [
        line.strip()
        for line in Path(args.labels).read_text(encoding="utf-8").splitlines()
        if line.strip()
    ]
    font = builtin_font()
    corpus = Corpus()
    emit = [m.strip() for m in args.emit.split(",") if m.strip()]
    dictionary = Dictionary.load(args.dictionary) if args.dictionary else None

    from .harness import CandidateInk, Sample

    for i, line in enumerate(labels):
        if "\t" in line:
            label, corrected = line.split("\t", 1)
        elif dictionary is not None:
            result = corrupt_label(line, dictionary, CorruptionSpec(p_distance_1=args.p1, seed=args.seed + i))
            label, corrected = line, result.corrected_label
        else:
            raise SystemExit("labels must be 'original<TAB>corrected' lines unless --dictionary is given")
        style = StyleParams(
            scale=args.scale, slant=args.slant, jitter=args.jitter,
            letter_spacing=args.spacing, seed=args.seed + 1000 + i,
        )
        original = render_label(label, font, style)
        sample_id = f"synth-{i:05d}"
        corpus.samples.append(
            Sample(id=sample_id, original_ink=original, original_label=label, corrected_label=corrected)
        )
        if "spliced" in emit:
            ink = splice_correct(original, label, corrected, font, style)
            corpus.candidates.setdefault("spliced", []).append(
                CandidateInk(sample_id=sample_id, model_id="spliced", ink=ink, sim=1.0)
            )
        if "styled" in emit:
            other = StyleParams(
                scale=args.scale * 1.25, slant=args.slant + 0.18, jitter=args.jitter,
                letter_spacing=args.spacing + 0.12 * args.scale, seed=args.seed + 2000 + i,
            )
            corpus.candidates.setdefault("styled", []).append(
                CandidateInk(sample_id=sample_id, model_id="styled", ink=render_label(corrected, font, other), sim=0.0)
            )
        if "original" in emit:
            corpus.candidates.setdefault("original", []).append(
                CandidateInk(sample_id=sample_id, model_id="original", ink=original, sim=1.0)
            )
    corpus.validate()
    if args.out:
        save_corpus(corpus, args.out)
    else:
        save_corpus(corpus, "/dev/stdout")


def cmd_serve(args) -> None:
    corpus = load_corpus(args.corpus)
    for extra in args.candidates or []:
        merge_candidates(corpus, extra)
    session = build_session(
        corpus,
        args.model_a,
        args.model_b,
        session_id=args.session_id,
        seed=args.seed,
        raters_per_pair=args.raters_per_pair,
        show_corrected_label=not args.hide_label,
    )
    serve_rating(
        session,
        corpus,
        port=args.port,
        host=args.host,
        log_path=args.log,
        static_dir=args.static_dir,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="inkeval", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("metrics", help="evaluate candidates over a corpus")
    p.add_argument("--corpus", required=True)
    p.add_argument("--candidates", action="append", help="extra candidate JSONL file(s)")
    p.add_argument("--model", help="evaluate only this model")
    p.add_argument("--recognizer", choices=["template", "remote"], default="template")
    p.add_argument("--endpoint", help="remote recognizer URL")
    p.add_argument("--with-cdo", action="store_true", help="also record the single-offset distance per sample")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out")
    _add_grid_args(p)
    p.set_defaults(func=cmd_metrics)

    p = sub.add_parser("corrupt", help="generate spell-corrected labels")
    p.add_argument("--labels", required=True, help="text file, one label per line")
    p.add_argument("--dictionary", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--p1", type=float, default=0.71, help="probability of an edit-distance-1 replacement")
    p.add_argument("--out")
    p.set_defaults(func=cmd_corrupt)

    p = sub.add_parser("compare", help="side-by-side comparison of two models")
    p.add_argument("--corpus", required=True)
    p.add_argument("--candidates", action="append")
    p.add_argument("--model-a", required=True)
    p.add_argument("--model-b", required=True)
    p.add_argument("--preferences", help="preference CSV for agreement statistics")
    p.add_argument("--recognizer", choices=["template", "remote"], default="template")
    p.add_argument("--endpoint")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out")
    _add_grid_args(p)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("pareto", help="non-dominated frontier over model operating points")
    p.add_argument("--report", action="append", help="report JSON from `metrics`")
    p.add_argument("--points", action="append", help="JSON file with [{model_id, cer, cde}] entries")
    p.add_argument("--out")
    p.set_defaults(func=cmd_pareto)

    p = sub.add_parser("curve", help="preference agreement vs distance-difference threshold")
    p.add_argument("--preferences", required=True)
    p.add_argument("--report", action="append", required=True)
    p.add_argument("--metric", choices=["cde", "cdo"], default="cde")
    p.add_argument("--min-samples", type=int, default=50)
    p.add_argument("--out")
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser("synth", help="generate a synthetic corpus from labels")
    p.add_argument("--labels", required=True, help="one label per line, or original<TAB>corrected")
    p.add_argument("--dictionary", help="corrupt labels with this dictionary when no TAB pairs are given")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--p1", type=float, default=0.71)
    p.add_argument("--scale", type=float, default=10.0)
    p.add_argument("--slant", type=float, default=0.0)
    p.add_argument("--jitter", type=float, default=0.0)
    p.add_argument("--spacing", type=float, default=0.0)
    p.add_argument("--emit", default="spliced,styled", help="comma list: spliced, styled, original")
    p.add_argument("--out")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("serve", help="run the rating service")
    p.add_argument("--corpus", required=True)
    p.add_argument("--candidates", action="append")
    p.add_argument("--model-a", required=True)
    p.add_argument("--model-b", required=True)
    p.add_argument("--session-id", default="default")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--raters-per-pair", type=int, default=3)
    p.add_argument("--hide-label", action="store_true", help="do not show the intended corrected label to raters")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--log", help="append-only submission log path")
    p.add_argument("--static-dir", help="directory with the built rating UI")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    args.func(args)
    return 0


if __name__ == "__main__":
    sys.exit(main())
