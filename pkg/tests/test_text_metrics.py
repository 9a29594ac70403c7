import random

import pytest

from inkeval.errors import EmptyLabelError, EmptyReferenceError
from inkeval.metrics import edit_distance, error_rates, normalize_label, select_k
from oracles import recursive_edit_distance


class TestEditDistance:
    @pytest.mark.parametrize(
        "a,b,expected",
        [
            ("", "abc", 3),
            ("abc", "", 3),
            ("mitsake", "mistake", 2),
            ("kitten", "sitting", 3),
            ("same", "same", 0),
        ],
    )
    def test_known_values(self, a, b, expected):
        assert edit_distance(a, b) == expected

    def test_matches_recursive_oracle(self):
        rnd = random.Random(11)
        alphabet = "abcd"
        for _ in range(200):
            a = "".join(rnd.choice(alphabet) for _ in range(rnd.randrange(0, 8)))
            b = "".join(rnd.choice(alphabet) for _ in range(rnd.randrange(0, 8)))
            assert edit_distance(a, b) == recursive_edit_distance(a, b)

    def test_metric_axioms(self):
        rnd = random.Random(5)
        alphabet = "xyz"
        words = [
            "".join(rnd.choice(alphabet) for _ in range(rnd.randrange(0, 6)))
            for _ in range(30)
        ]
        for _ in range(150):
            a, b, c = rnd.choice(words), rnd.choice(words), rnd.choice(words)
            assert edit_distance(a, b) == edit_distance(b, a)
            assert (edit_distance(a, b) == 0) == (a == b)
            assert edit_distance(a, c) <= edit_distance(a, b) + edit_distance(b, c)

    def test_works_on_token_lists(self):
        assert edit_distance(["on", "it"], ["an", "it"]) == 1

    def test_unicode_scalars(self):
        assert edit_distance("đúng", "đùng") == 1


class TestSelectK:
    def test_word_plus_edit(self):
        assert select_k("hello world", "hello word") == 2 + 1

    def test_unchanged_label(self):
        assert select_k("cat", "cat") == 1

    def test_transposed_pair_counts_two_edits(self):
        assert select_k("Mitsake", "Mistake") == 1 + 2

    def test_empty_original_rejected(self):
        with pytest.raises(EmptyLabelError):
            select_k("   ", "cat")

    def test_normalizes_before_counting(self):
        assert select_k("  hello   world ", "hello world") == 2


class TestErrorRates:
    def test_perfect_match(self):
        rates = error_rates("night", "night")
        assert rates.cer == 0.0 and rates.wer == 0.0

    def test_single_substitution(self):
        rates = error_rates("night", "right")
        assert rates.cer == pytest.approx(0.2)
        assert rates.wer == pytest.approx(1.0)

    def test_one_wrong_word_of_two(self):
        rates = error_rates("on it", "an it")
        assert rates.cer == pytest.approx(0.2)
        assert rates.wer == pytest.approx(0.5)

    def test_can_exceed_one(self):
        rates = error_rates("a", "abcdef")
        assert rates.cer > 1.0

    def test_empty_reference_rejected(self):
        with pytest.raises(EmptyReferenceError):
            error_rates("  ", "anything")

    def test_empty_hypothesis(self):
        rates = error_rates("word", "")
        assert rates.cer == 1.0 and rates.wer == 1.0


class TestNormalization:
    def test_collapses_whitespace(self):
        assert normalize_label("  a \t b\n") == "a b"

    def test_nfc(self):
        composed = "é"  # é
        decomposed = "é"
        assert normalize_label(decomposed) == composed

    def test_case_sensitive(self):
        assert normalize_label("Cat") != normalize_label("cat")
        assert edit_distance("Cat", "cat") == 1
