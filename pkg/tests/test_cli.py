import itertools
import json

import pytest

from inkeval.cli import main
from inkeval.corpus_io import load_corpus, preferences_to_csv
from inkeval.harness import PreferenceRecord


@pytest.fixture
def word_files(tmp_path):
    labels = tmp_path / "labels.txt"
    labels.write_text("cat dog\nbat sun\npen dab\n", encoding="utf-8")
    dictionary = tmp_path / "dict.txt"
    words = sorted({"".join(t) for t in itertools.product("abcdegopstun", repeat=3)})
    dictionary.write_text("\n".join(words) + "\n", encoding="utf-8")
    return labels, dictionary


def test_corrupt_verb(word_files, tmp_path, capsys):
    labels, dictionary = word_files
    out = tmp_path / "corrupted.json"
    main(["corrupt", "--labels", str(labels), "--dictionary", str(dictionary),
          "--seed", "3", "--out", str(out)])
    rows = json.loads(out.read_text())
    assert len(rows) == 3
    for row in rows:
        assert row["distance"] in (1, 2)
        assert row["corrected_label"] != row["label"]


def test_synth_and_metrics_and_pareto(word_files, tmp_path):
    labels, dictionary = word_files
    corpus_path = tmp_path / "corpus.jsonl"
    main(["synth", "--labels", str(labels), "--dictionary", str(dictionary),
          "--seed", "5", "--out", str(corpus_path)])
    corpus = load_corpus(corpus_path)
    assert len(corpus.samples) == 3
    assert set(corpus.candidates) == {"spliced", "styled"}

    report_path = tmp_path / "report.json"
    main(["metrics", "--corpus", str(corpus_path), "--model", "spliced",
          "--with-cdo", "--grid-steps", "9", "--grid-refine", "1",
          "--out", str(report_path)])
    report = json.loads(report_path.read_text())
    assert report["model_id"] == "spliced"
    assert report["aggregates"]["n_samples"] == 3
    assert all("cdo" in row for row in report["samples"])

    styled_path = tmp_path / "styled.json"
    main(["metrics", "--corpus", str(corpus_path), "--model", "styled",
          "--grid-steps", "9", "--grid-refine", "1", "--out", str(styled_path)])

    pareto_out = tmp_path / "pareto.json"
    main(["pareto", "--report", str(report_path), "--report", str(styled_path),
          "--out", str(pareto_out)])
    frontier = json.loads(pareto_out.read_text())
    assert {p["model_id"] for p in frontier["points"]} == {"spliced", "styled"}
    assert frontier["frontier"]


def test_compare_with_preferences(word_files, tmp_path):
    labels, dictionary = word_files
    corpus_path = tmp_path / "corpus.jsonl"
    main(["synth", "--labels", str(labels), "--dictionary", str(dictionary),
          "--seed", "5", "--out", str(corpus_path)])
    corpus = load_corpus(corpus_path)
    records = [
        PreferenceRecord(s.id, "spliced", "styled", "left", "r1", "2024-01-01T00:00:00+00:00")
        for s in corpus.samples
    ]
    prefs = tmp_path / "prefs.csv"
    prefs.write_text(preferences_to_csv(records), encoding="utf-8")

    out = tmp_path / "compare.json"
    main(["compare", "--corpus", str(corpus_path), "--model-a", "spliced",
          "--model-b", "styled", "--preferences", str(prefs),
          "--grid-steps", "9", "--grid-refine", "1", "--out", str(out)])
    result = json.loads(out.read_text())
    assert result["wins_a"] == 3  # ground truth beats restyled render
    assert result["agreement"] == 1.0


def test_curve_verb(word_files, tmp_path):
    labels, dictionary = word_files
    corpus_path = tmp_path / "corpus.jsonl"
    main(["synth", "--labels", str(labels), "--dictionary", str(dictionary),
          "--seed", "5", "--out", str(corpus_path)])
    report_path = tmp_path / "report.json"
    main(["metrics", "--corpus", str(corpus_path), "--with-cdo",
          "--grid-steps", "9", "--grid-refine", "1", "--out", str(report_path)])
    corpus = load_corpus(corpus_path)
    records = [
        PreferenceRecord(s.id, "spliced", "styled", "left", "r1", "2024-01-01T00:00:00+00:00")
        for s in corpus.samples
    ]
    prefs = tmp_path / "prefs.csv"
    prefs.write_text(preferences_to_csv(records), encoding="utf-8")
    out = tmp_path / "curve.json"
    main(["curve", "--preferences", str(prefs), "--report", str(report_path),
          "--metric", "cde", "--min-samples", "1", "--out", str(out)])
    curve = json.loads(out.read_text())
    assert curve and all(pt["match_fraction"] == 1.0 for pt in curve)


def test_points_file_pareto(tmp_path):
    points = [
        {"model_id": "a", "cer": 9.3, "cde": 4.4},
        {"model_id": "b", "cer": 8.6, "cde": 4.5},
        {"model_id": "dominated", "cer": 9.4, "cde": 4.5},
    ]
    pts = tmp_path / "points.json"
    pts.write_text(json.dumps(points), encoding="utf-8")
    out = tmp_path / "out.json"
    main(["pareto", "--points", str(pts), "--out", str(out)])
    frontier = json.loads(out.read_text())["frontier"]
    assert {p["model_id"] for p in frontier} == {"a", "b"}
