"""Attribute-based detector: cosine similarity of token-frequency vectors.

The frequency vector counts raw token occurrences (no tf-idf or other
weighting), keyed by the lexer's comparison key. Cosine is unaffected by
dimensions absent from both vectors, so the vocabulary is implicitly the
union of the two files' keys.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass

from .lexer import TokenSequence
from .similarity import Detector, SimilarityDegree


class ZeroVectorError(ValueError):
    """Cosine against an empty frequency vector is undefined.

    An empty vector means an empty or comment-only file; callers must
    handle this case explicitly rather than treating it as similarity 0.
    """


class AbstractionMismatch(ValueError):
    """Both sequences must be lexed at the same abstraction level."""


@dataclass(frozen=True)
class FrequencyVector:
    counts: dict[tuple[str, str], int]
    total_tokens: int

    def __post_init__(self):
        if any(c <= 0 for c in self.counts.values()):
            raise ValueError("frequency vector must not store zero counts")
        if sum(self.counts.values()) != self.total_tokens:
            raise ValueError("counts do not sum to total_tokens")


def frequency_vector(tokens: TokenSequence) -> FrequencyVector:
    counts = Counter(tokens.keys())
    return FrequencyVector(dict(counts), sum(counts.values()))


def cosine_similarity(v: FrequencyVector, w: FrequencyVector) -> float:
    """dot(v, w) / (|v| * |w|), clamped into [0, 1] against rounding.

    Counts are integers, so the Cauchy-Schwarz equality case (parallel
    vectors, e.g. a file compared with a permutation of itself) is decided
    in exact arithmetic and returns 1.0 with no floating error at all.
    """
    if not v.counts or not w.counts:
        raise ZeroVectorError("cosine similarity of an empty frequency vector")
    dot = sum(c * w.counts.get(key, 0) for key, c in v.counts.items())
    norm_sq_v = sum(c * c for c in v.counts.values())
    norm_sq_w = sum(c * c for c in w.counts.values())
    if dot * dot >= norm_sq_v * norm_sq_w:
        return 1.0
    return max(0.0, dot / math.sqrt(norm_sq_v * norm_sq_w))


def aba_similarity(a: TokenSequence, b: TokenSequence) -> SimilarityDegree:
    """Similarity degree of two token sequences under the attribute lens.

    Symmetric, and exactly 1.0 for any permutation of the same tokens:
    frequency vectors are order-blind.
    """
    if a.abstraction is not b.abstraction:
        raise AbstractionMismatch(
            f"cannot compare {a.abstraction.value} tokens with {b.abstraction.value} tokens"
        )
    value = cosine_similarity(frequency_vector(a), frequency_vector(b))
    return SimilarityDegree(value, Detector.ABA)
