"""Tests for BLEU scoring."""

import math

import pytest

from streamtl.exceptions import MetricError
from streamtl.metrics import corpus_bleu, document_bleu, tokenize_text


class TestTokenize:
    """Tests for tokenize_text function."""

    def test_splits_punctuation(self):
        assert tokenize_text("Hello, world!") == ["Hello", ",", "world", "!"]

    def test_char_mode(self):
        assert tokenize_text("你好 世界。", "char") == ["你", "好", "世", "界", "。"]

    def test_unknown_mode(self):
        with pytest.raises(MetricError, match="Unknown tokenize mode"):
            tokenize_text("a", "bpe")


class TestCorpusBleu:
    """Tests for corpus_bleu function."""

    def test_identical(self):
        assert corpus_bleu(["the cat sat on the mat"], ["the cat sat on the mat"]) == (
            pytest.approx(100.0)
        )

    def test_identical_short_sentence(self):
        assert corpus_bleu(["hello world"], ["hello world"]) == pytest.approx(100.0)

    def test_one_substitution(self):
        score = corpus_bleu(["the cat sat on the mat"], ["the cat sat on a mat"])
        assert score == pytest.approx(100 * (1 / 12) ** 0.25)

    def test_brevity_penalty(self):
        score = corpus_bleu(["the cat sat on the"], ["the cat sat on the mat"])
        assert score == pytest.approx(100 * math.exp(-0.2))

    def test_counts_are_pooled(self):
        score = corpus_bleu(["a b c d", "a b e f"], ["a b c d", "a b c d"])
        assert score == pytest.approx(100 * (1 / 8) ** 0.25)

    def test_clipped_counts_and_zero_precision(self):
        assert corpus_bleu(["the the the cat"], ["the cat sat down"]) == 0.0

    def test_empty_hypothesis(self):
        assert corpus_bleu([""], ["the cat"]) == 0.0

    def test_punctuation_spacing_does_not_matter(self):
        assert corpus_bleu(["Hallo , Welt !"], ["Hallo, Welt!"]) == pytest.approx(100.0)

    def test_char_tokenization(self):
        assert corpus_bleu(["我爱你"], ["我 爱 你"], "char") == pytest.approx(100.0)
        assert corpus_bleu(["我爱你"], ["我爱他"], "whitespace_punct") == 0.0

    def test_in_range(self):
        score = corpus_bleu(["a b c d x"], ["a b c d e f"])
        assert 0.0 < score < 100.0

    def test_length_mismatch(self):
        with pytest.raises(MetricError, match="2 hypotheses for 1 references"):
            corpus_bleu(["a", "b"], ["a"])

    def test_empty_corpus(self):
        with pytest.raises(MetricError, match="empty corpus"):
            corpus_bleu([], [])


class TestDocumentBleu:
    """Tests for document_bleu function."""

    def test_joins_references(self):
        score = document_bleu(
            "Guten Morgen. Wie geht es?", ["Guten Morgen.", "Wie geht es?"]
        )
        assert score == pytest.approx(100.0)

    def test_missing_sentence(self):
        score = document_bleu("Guten Morgen.", ["Guten Morgen.", "Wie geht es?"])
        assert 0.0 < score < 100.0
