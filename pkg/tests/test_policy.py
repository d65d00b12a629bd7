"""Tests for the truncation and generation decisions."""

import random

from streamtl.config import PolicyConfig
from streamtl.models import Transcription, TruncationRule
from streamtl.policy import (
    NO_TRUNCATION,
    allowed_output_count,
    check_gold_truncation,
    check_truncation,
    decide_generation,
)


def transcripts(*texts: str) -> list[Transcription]:
    return [Transcription.from_text(text) for text in texts]


def decide(queue: list[str], current: str, n: int, a_m: int):
    return check_truncation(
        transcripts(*queue), Transcription.from_text(current), n, a_m, PolicyConfig()
    )


class TestStabilityRule:
    """Tests for truncation on unchanged transcriptions."""

    def test_three_equal_transcriptions(self):
        decision = decide(["a b", "a b"], "a b", 5, 2)
        assert decision.triggered
        assert decision.rule == TruncationRule.STABILITY
        assert decision.a_new == 5
        assert not decision.requires_retranscription

    def test_needs_full_window(self):
        decision = check_truncation(
            transcripts("a b"), Transcription.from_text("a b"), 2, 0, PolicyConfig()
        )
        assert decision == NO_TRUNCATION

    def test_silence_is_stable(self):
        decision = check_truncation(
            transcripts("", ""), Transcription(), 3, 0, PolicyConfig()
        )
        assert decision.rule == TruncationRule.STABILITY
        assert decision.a_new == 3

    def test_whitespace_is_normalized(self):
        decision = decide(["a  b", " a b"], "a b ", 4, 1)
        assert decision.rule == TruncationRule.STABILITY

    def test_longer_window(self):
        config = PolicyConfig(stability_window=4)
        queue = transcripts("a", "a b", "a b")

        assert not check_truncation(
            queue, Transcription.from_text("a b"), 4, 0, config
        ).triggered
        assert check_truncation(
            [*queue, *transcripts("a b")], Transcription.from_text("a b"), 5, 0, config
        ).triggered

    def test_growing_transcription_does_not_trigger(self):
        decision = decide(["a", "a b"], "a b c", 3, 0)
        assert decision == NO_TRUNCATION


class TestSentenceRule:
    """Tests for truncation on completed sentences."""

    def test_previous_chunk_ends_sentence(self):
        decision = check_truncation(
            transcripts("Hello there."),
            Transcription.from_text("Hello there. How"),
            2,
            0,
            PolicyConfig(),
        )
        assert decision.rule == TruncationRule.SENTENCE
        assert decision.a_new == 1
        assert decision.requires_retranscription

    def test_two_chunks_back(self):
        decision = check_truncation(
            transcripts("Hi.", "Hi. you"),
            Transcription.from_text("Hi. you are"),
            3,
            0,
            PolicyConfig(),
        )
        assert decision.rule == TruncationRule.SENTENCE
        assert decision.a_new == 1

    def test_looks_back_no_further_than_segment_start(self):
        decision = check_truncation(
            transcripts("you"),
            Transcription.from_text("you are"),
            3,
            1,
            PolicyConfig(),
        )
        assert decision == NO_TRUNCATION

    def test_punctuation_without_new_words(self):
        decision = decide(["Hello."], "Hello.", 2, 0)
        assert decision == NO_TRUNCATION

    def test_revised_prefix_does_not_trigger(self):
        decision = check_truncation(
            transcripts("Hello there."),
            Transcription.from_text("Hello their friend"),
            2,
            0,
            PolicyConfig(),
        )
        assert decision == NO_TRUNCATION

    def test_punctuation_inside_a_token(self):
        decision = decide(["Dr."], "Dr.Smith", 2, 0)
        assert decision == NO_TRUNCATION

    def test_custom_terminal_punctuation(self):
        config = PolicyConfig(terminal_punct="。")
        queue = transcripts("你好。")
        current = Transcription.from_text("你好。 再见")

        assert check_truncation(queue, current, 2, 0, config).rule == (
            TruncationRule.SENTENCE
        )
        assert not check_truncation(
            transcripts("Hello."), Transcription.from_text("Hello. you"), 2, 0, config
        ).triggered


class TestForcedRule:
    """Tests for truncation of overlong segments."""

    def test_forced_at_max_segment_chunks(self):
        queue = transcripts(*[f"w{i}" for i in range(1, 30)])
        decision = check_truncation(
            queue, Transcription.from_text("w1 w30"), 31, 1, PolicyConfig()
        )
        assert decision.rule == TruncationRule.FORCED
        assert decision.a_new == 31

    def test_not_forced_below_threshold(self):
        queue = transcripts(*[f"w{i}" for i in range(1, 29)])
        decision = check_truncation(
            queue, Transcription.from_text("w1 w29"), 29, 0, PolicyConfig()
        )
        assert decision == NO_TRUNCATION

    def test_stability_wins_over_forced(self):
        queue = transcripts(*["same"] * 29)
        decision = check_truncation(
            queue, Transcription.from_text("same"), 30, 0, PolicyConfig()
        )
        assert decision.rule == TruncationRule.STABILITY


class TestGoldRule:
    """Tests for truncation at annotated sentence ends."""

    def test_truncates_at_boundary(self):
        config = PolicyConfig(sentence_boundaries=(2, 5))
        decision = check_gold_truncation(5, 2, config)
        assert decision.rule == TruncationRule.GOLD
        assert decision.a_new == 5
        assert not decision.requires_retranscription

    def test_ignores_other_chunks(self):
        config = PolicyConfig(sentence_boundaries=(2, 5))
        assert check_gold_truncation(4, 2, config) == NO_TRUNCATION

    def test_forced_without_boundary(self):
        config = PolicyConfig(sentence_boundaries=(40,), max_segment_chunks=10)
        assert check_gold_truncation(10, 0, config).rule == TruncationRule.FORCED


class TestAllowedOutputCount:
    """Tests for the lag-k output bound."""

    def test_examples(self):
        assert allowed_output_count(10, 3, 4) == 3
        assert allowed_output_count(2, 5, 0) == 0
        assert allowed_output_count(7, 7, 0) == 0

    def test_never_negative_when_transcription_shrinks(self):
        assert allowed_output_count(3, 1, 5) == 0

    def test_random_triples(self):
        rng = random.Random(0)
        for _ in range(500):
            count = rng.randint(0, 40)
            k = rng.randint(1, 12)
            emitted = rng.randint(0, 40)
            allowed = allowed_output_count(count, k, emitted)
            assert allowed >= 0
            assert allowed == max(0, count - k - emitted)
            assert allowed_output_count(count + 1, k, emitted) >= allowed
            if allowed > 0:
                assert emitted + allowed == count - k

    def test_decide_generation(self):
        decision = decide_generation(10, 3, 4)
        assert decision.allowed == 3
        assert decision.word_count == 10
        assert decision.k == 3
        assert decision.already_emitted == 4
