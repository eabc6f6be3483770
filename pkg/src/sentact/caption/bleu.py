"""Corpus-level Bleu: geometric mean of modified n-gram precisions
(orders 1..n) times the brevity penalty."""

from __future__ import annotations

import math
from collections import Counter

from sentact.errors import DataError


def _tokens(sentence) -> list[str]:
    text = getattr(sentence, "text", sentence)
    return str(text).split()


def _ngrams(tokens: list[str], order: int) -> Counter:
    return Counter(
        tuple(tokens[i : i + order]) for i in range(len(tokens) - order + 1)
    )


def bleu(candidates: list, references: list, n: int = 4) -> float:
    """Corpus Bleu@n for aligned candidate/reference lists.

    Candidate n-gram counts are clipped by the reference counts and pooled
    over the corpus before taking precisions; any zero precision (orders
    1..n) makes the score 0.
    """
    if n < 1:
        raise DataError(f"bleu order must be >= 1, got {n}")
    if len(candidates) != len(references):
        raise DataError(
            f"candidate/reference count mismatch: {len(candidates)} vs "
            f"{len(references)}"
        )
    if not candidates:
        raise DataError("bleu needs a non-empty corpus")

    matched = [0] * n
    total = [0] * n
    candidate_len = 0
    reference_len = 0
    for cand, ref in zip(candidates, references):
        cand_toks, ref_toks = _tokens(cand), _tokens(ref)
        candidate_len += len(cand_toks)
        reference_len += len(ref_toks)
        for order in range(1, n + 1):
            cand_counts = _ngrams(cand_toks, order)
            ref_counts = _ngrams(ref_toks, order)
            total[order - 1] += max(0, len(cand_toks) - order + 1)
            matched[order - 1] += sum(
                min(count, ref_counts[gram]) for gram, count in cand_counts.items()
            )

    if candidate_len == 0:
        return 0.0
    if any(t == 0 or m == 0 for m, t in zip(matched, total)):
        return 0.0
    log_precision = sum(math.log(m / t) for m, t in zip(matched, total)) / n
    brevity = 1.0 if candidate_len > reference_len else math.exp(
        1.0 - reference_len / candidate_len
    )
    return brevity * math.exp(log_precision)
