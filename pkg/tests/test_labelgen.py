import itertools
import random

import pytest

from inkeval.errors import InvalidDistanceError, NoCandidateError
from inkeval.labelgen import CorruptionSpec, Dictionary, corrupt_label, neighbors_at_distance
from inkeval.metrics import edit_distance


def scan_neighbors(word, dictionary, d):
    """Exhaustive reference: test every dictionary word."""
    return {w for w in dictionary.words if w != word and edit_distance(word, w) == d}


class TestDictionary:
    def test_rejects_whitespace_entries(self):
        with pytest.raises(ValueError):
            Dictionary(["ok", "not ok"])

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            Dictionary([])

    def test_load_skips_comments_and_dedupes(self, tmp_path):
        path = tmp_path / "words.txt"
        path.write_text("# header\ncat\ndog\ncat\n\n  bird  \n", encoding="utf-8")
        d = Dictionary.load(path)
        assert d.words == frozenset({"cat", "dog", "bird"})

    def test_alphabet_comes_from_entries(self):
        d = Dictionary(["ab", "bc"])
        assert d.alphabet == ("a", "b", "c")


class TestNeighbors:
    def test_distance_one_example(self):
        d = Dictionary(["cat", "cot", "bat", "dog"])
        assert neighbors_at_distance("cat", d, 1) == {"cot", "bat"}

    def test_word_itself_excluded(self):
        d = Dictionary(["cat"])
        assert neighbors_at_distance("cat", d, 1) == set()

    def test_distance_two_example_dog_is_three_away(self):
        d = Dictionary(["cat", "cot", "bat", "dog"])
        assert edit_distance("cat", "dog") == 3
        assert neighbors_at_distance("cat", d, 2) == set()

    def test_invalid_distance(self):
        d = Dictionary(["cat"])
        with pytest.raises(InvalidDistanceError):
            neighbors_at_distance("cat", d, 3)

    @pytest.mark.parametrize("n_words", [10, 4000])
    def test_matches_exhaustive_scan(self, n_words):
        # small dict exercises the banded scan, large one the edit
        # enumeration path
        rnd = random.Random(n_words)
        alphabet = "abcde"
        words = {
            "".join(rnd.choice(alphabet) for _ in range(rnd.randrange(2, 6)))
            for _ in range(n_words)
        }
        d = Dictionary(words)
        for word in list(sorted(words))[:8]:
            for dist in (1, 2):
                assert neighbors_at_distance(word, d, dist) == scan_neighbors(word, d, dist)


class TestCorruptLabel:
    def test_deterministic(self):
        d = Dictionary(["cat", "cot", "bat", "dog", "cut"])
        spec = CorruptionSpec(seed=99)
        a = corrupt_label("cat dog", d, spec)
        b = corrupt_label("cat dog", d, spec)
        assert a == b

    def test_exactly_one_token_replaced(self):
        words = {"".join(t) for t in itertools.product("abcd", repeat=3)}
        d = Dictionary(words)
        for seed in range(30):
            result = corrupt_label("abc dab cad", d, CorruptionSpec(seed=seed))
            orig = "abc dab cad".split()
            out = result.corrected_label.split()
            assert len(out) == 3
            assert sum(o != n for o, n in zip(orig, out)) == 1
            assert out[result.word_index] == result.replacement

    def test_reported_distance_is_realized(self):
        words = {"".join(t) for t in itertools.product("abcd", repeat=3)}
        d = Dictionary(words)
        for seed in range(60):
            result = corrupt_label("bad cab", d, CorruptionSpec(seed=seed))
            original_word = "bad cab".split()[result.word_index]
            assert edit_distance(original_word, result.replacement) == result.distance

    def test_fallback_to_other_distance(self):
        # 'aa' has no distance-1 neighbor here, but 'bb' is at distance 2
        d = Dictionary(["aa", "bb"])
        result = corrupt_label("aa", d, CorruptionSpec(p_distance_1=1.0, seed=1))
        assert result.replacement == "bb"
        assert result.distance == 2

    def test_fallback_to_other_word(self):
        # 'zzzzzz' is isolated; the second word has a neighbor
        d = Dictionary(["zzzzzz", "cat", "cot"])
        for seed in range(10):
            result = corrupt_label("zzzzzz cat", d, CorruptionSpec(seed=seed))
            assert result.word_index == 1
            assert result.replacement == "cot"

    def test_no_candidate_raises(self):
        d = Dictionary(["qqqqqqqq", "cat"])
        with pytest.raises(NoCandidateError):
            corrupt_label("qqqqqqqq", Dictionary(["qqqqqqqq", "zzzzzzzzzzzz"]), CorruptionSpec(seed=0))

    def test_distance_split_tracks_probability(self):
        words = {"".join(t) for t in itertools.product("abcdef", repeat=3)}
        d = Dictionary(words)
        labels = sorted(words)
        ones = 0
        n = 2000
        for seed in range(n):
            result = corrupt_label(labels[seed % len(labels)], d, CorruptionSpec(seed=seed))
            ones += result.distance == 1
        assert abs(ones / n - 0.71) < 0.04
