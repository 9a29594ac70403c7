import http.server
import json
import threading

import pytest

from inkeval.errors import EmptyTemplatesError, ProtocolError, TransportError
from inkeval.metrics import GridConfig
from inkeval.recognition import (
    RecognitionResult,
    RemoteRecognizer,
    TemplateRecognizer,
    recognized_at,
    template_recognize,
)
from inkeval.synth import StyleParams, builtin_font, render_label

LIGHT = GridConfig(coarse_steps=9, refine_levels=1)


def shift_ink(ink, dx, dy):
    from inkeval.ink import Ink, Point, Stroke

    return Ink(
        [Stroke([Point(p.x + dx, p.y + dy, p.t) for p in s.points]) for s in ink.strokes]
    )


class TestRecognizedAt:
    def test_top1_miss_top2_hit(self):
        result = RecognitionResult((("right", 0.9), ("night", 0.1)))
        assert not recognized_at(result, "night", 1)
        assert recognized_at(result, "night", 2)

    def test_abstention(self):
        assert not recognized_at(RecognitionResult(()), "anything", 5)

    def test_monotone_in_n(self):
        result = RecognitionResult((("a", 3.0), ("b", 2.0), ("c", 1.0)))
        for label in ("a", "b", "c", "d"):
            hits = [recognized_at(result, label, n) for n in (1, 2, 3, 4, 5)]
            for earlier, later in zip(hits, hits[1:]):
                assert later or not earlier

    def test_normalized_match(self):
        result = RecognitionResult((("hello  world", 1.0),))
        assert recognized_at(result, " hello world ", 1)

    def test_scores_must_be_non_increasing(self):
        with pytest.raises(ValueError):
            RecognitionResult((("a", 0.1), ("b", 0.9)))


class TestTemplateRecognizer:
    def test_exact_match_wins_with_zero_distance(self):
        font = builtin_font()
        templates = [(w, render_label(w, font)) for w in ("abc", "xyz")]
        rec = TemplateRecognizer(templates, LIGHT)
        result = rec.recognize(render_label("abc", font))
        assert result.top1 == "abc"
        assert result.candidates[0][1] == 0.0  # score is negated distance

    def test_translation_is_absorbed(self):
        font = builtin_font()
        templates = [(w, render_label(w, font)) for w in ("cot", "cat")]
        rec = TemplateRecognizer(templates, LIGHT)
        ink = shift_ink(render_label("cot", font), 7.0, 2.0)
        assert rec.recognize(ink).top1 == "cot"

    def test_jittered_ink_recognized(self):
        font = builtin_font()
        templates = [(w, render_label(w, font)) for w in ("right", "night")]
        rec = TemplateRecognizer(templates, LIGHT)
        hits = 0
        n = 40
        for seed in range(n):
            ink = render_label("right", font, StyleParams(jitter=0.35, seed=seed))
            hits += rec.recognize(ink).top1 == "right"
        assert hits / n >= 0.95

    def test_template_order_does_not_matter(self):
        font = builtin_font()
        names = ["bat", "cat", "hat"]
        templates = [(w, render_label(w, font)) for w in names]
        rec_fwd = TemplateRecognizer(templates, LIGHT)
        rec_rev = TemplateRecognizer(templates[::-1], LIGHT)
        ink = render_label("hat", font)
        assert rec_fwd.recognize(ink).candidates == rec_rev.recognize(ink).candidates

    def test_equal_distance_ties_break_lexicographically(self):
        font = builtin_font()
        ink = render_label("cat", font)
        templates = [("zz_copy", ink), ("aa_copy", ink)]
        rec = TemplateRecognizer(templates, LIGHT)
        assert rec.recognize(ink).top1 == "aa_copy"

    def test_empty_templates_rejected(self):
        with pytest.raises(EmptyTemplatesError):
            TemplateRecognizer([])

    def test_max_candidates_cap(self):
        font = builtin_font()
        templates = [(w, render_label(w, font)) for w in ("an", "at", "as", "ax")]
        rec = TemplateRecognizer(templates, LIGHT, max_candidates=2)
        assert len(rec.recognize(render_label("an", font)).candidates) == 2

    def test_function_form_matches_class(self):
        font = builtin_font()
        templates = [(w, render_label(w, font)) for w in ("cat", "cot")]
        ink = render_label("cot", font)
        via_fn = template_recognize(ink, templates, LIGHT)
        via_class = TemplateRecognizer(templates, LIGHT).recognize(ink)
        assert via_fn == via_class


class _RecognizerHandler(http.server.BaseHTTPRequestHandler):
    payload: bytes = b"{}"
    status: int = 200

    def do_POST(self):
        length = int(self.headers.get("Content-Length", 0))
        body = json.loads(self.rfile.read(length))
        assert "strokes" in body and "max_candidates" in body
        self.send_response(self.status)
        self.send_header("Content-Type", "application/json")
        self.end_headers()
        self.wfile.write(self.payload)

    def log_message(self, *args):
        pass


@pytest.fixture
def http_recognizer():
    server = http.server.HTTPServer(("127.0.0.1", 0), _RecognizerHandler)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    yield server, f"http://127.0.0.1:{server.server_port}/recognize"
    server.shutdown()


class TestRemoteRecognizer:
    def test_well_formed_response(self, http_recognizer):
        server, url = http_recognizer
        _RecognizerHandler.status = 200
        _RecognizerHandler.payload = json.dumps(
            {"candidates": [{"label": "cat", "score": 0.9}, {"label": "cot", "score": 0.5}, {"label": "cut", "score": 0.1}]}
        ).encode()
        result = RemoteRecognizer(url).recognize(render_label("cat"))
        assert len(result.candidates) == 3
        assert result.top1 == "cat"

    def test_empty_candidates_is_abstention(self, http_recognizer):
        server, url = http_recognizer
        _RecognizerHandler.status = 200
        _RecognizerHandler.payload = b'{"candidates": []}'
        result = RemoteRecognizer(url).recognize(render_label("cat"))
        assert result.candidates == ()

    def test_non_json_body_is_protocol_error(self, http_recognizer):
        server, url = http_recognizer
        _RecognizerHandler.status = 200
        _RecognizerHandler.payload = b"definitely not json"
        with pytest.raises(ProtocolError):
            RemoteRecognizer(url).recognize(render_label("cat"))

    def test_missing_fields_is_protocol_error(self, http_recognizer):
        server, url = http_recognizer
        _RecognizerHandler.status = 200
        _RecognizerHandler.payload = b'{"candidates": [{"label": "x"}]}'
        with pytest.raises(ProtocolError):
            RemoteRecognizer(url).recognize(render_label("cat"))

    def test_unreachable_endpoint_is_transport_error(self):
        with pytest.raises(TransportError):
            RemoteRecognizer("http://127.0.0.1:9/recognize", timeout=0.5).recognize(
                render_label("cat")
            )
