"""Corpus BLEU without smoothing."""

import math
import re
from collections import Counter
from collections.abc import Sequence
from typing import Literal

from streamtl.exceptions import MetricError

Tokenize = Literal["whitespace_punct", "char"]

MAX_ORDER = 4
_WORD_OR_PUNCT = re.compile(r"\w+|[^\w\s]")


def tokenize_text(text: str, tokenize: Tokenize = "whitespace_punct") -> list[str]:
    """Split text into BLEU tokens.

    ``whitespace_punct`` separates words from punctuation; ``char`` treats
    every non-space character as a token, for Chinese and Japanese.
    """
    if tokenize == "char":
        return [ch for ch in text if not ch.isspace()]
    if tokenize == "whitespace_punct":
        return _WORD_OR_PUNCT.findall(text)
    raise MetricError(f"Unknown tokenize mode: {tokenize}")


def _ngrams(tokens: list[str], n: int) -> Counter[tuple[str, ...]]:
    return Counter(tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1))


def corpus_bleu(
    hyps: Sequence[str], refs: Sequence[str], tokenize: Tokenize = "whitespace_punct"
) -> float:
    """Corpus BLEU in [0, 100] with one reference per hypothesis.

    Clipped n-gram counts for n = 1..4 are pooled over the corpus. Orders for
    which the hypotheses hold no n-gram at all are left out of the geometric
    mean; any other zero precision gives 0.

    Raises:
        MetricError: If the lists are empty or differ in length
    """
    if len(hyps) != len(refs):
        raise MetricError(
            f"Got {len(hyps)} hypotheses for {len(refs)} references"
        )
    if not hyps:
        raise MetricError("BLEU is undefined for an empty corpus")

    matches = [0] * MAX_ORDER
    totals = [0] * MAX_ORDER
    hyp_len = ref_len = 0
    for hyp, ref in zip(hyps, refs, strict=True):
        hyp_tokens = tokenize_text(hyp, tokenize)
        ref_tokens = tokenize_text(ref, tokenize)
        hyp_len += len(hyp_tokens)
        ref_len += len(ref_tokens)
        for n in range(1, MAX_ORDER + 1):
            hyp_counts = _ngrams(hyp_tokens, n)
            ref_counts = _ngrams(ref_tokens, n)
            matches[n - 1] += sum((hyp_counts & ref_counts).values())
            totals[n - 1] += sum(hyp_counts.values())

    if hyp_len == 0:
        return 0.0
    orders = [n for n in range(MAX_ORDER) if totals[n] > 0]
    if any(matches[n] == 0 for n in orders):
        return 0.0
    log_precision = sum(math.log(matches[n] / totals[n]) for n in orders) / len(orders)
    log_brevity = min(0.0, 1.0 - ref_len / hyp_len)
    return 100.0 * math.exp(log_precision + log_brevity)


def document_bleu(
    hypothesis: str,
    ref_sentences: Sequence[str],
    tokenize: Tokenize = "whitespace_punct",
) -> float:
    """BLEU of a whole document hypothesis against its joined references."""
    return corpus_bleu([hypothesis], [" ".join(ref_sentences)], tokenize)
