import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from plagbench.attribute import (
    AbstractionMismatch,
    FrequencyVector,
    ZeroVectorError,
    aba_similarity,
    cosine_similarity,
    frequency_vector,
)
from plagbench.lexer import Abstraction, tokenize
from plagbench.similarity import Detector

from conftest import seq_from_symbols


def fv(counts):
    return FrequencyVector(dict(counts), sum(counts.values()))


def test_frequency_vector_counts():
    vec = frequency_vector(seq_from_symbols(["a", "b", "a"]))
    assert vec.total_tokens == 3
    assert set(vec.counts.values()) == {2, 1}


def test_frequency_vector_empty():
    vec = frequency_vector(seq_from_symbols([]))
    assert vec.counts == {}
    assert vec.total_tokens == 0


def test_frequency_vector_single_symbol():
    vec = frequency_vector(seq_from_symbols(["a"] * 4))
    assert list(vec.counts.values()) == [4]
    assert vec.total_tokens == 4


def test_frequency_vector_rejects_zero_counts():
    with pytest.raises(ValueError):
        FrequencyVector({("IDENTIFIER", "a"): 0}, 0)


def test_cosine_parallel_vectors():
    assert cosine_similarity(fv({"a": 1, "b": 2}), fv({"a": 2, "b": 4})) == 1.0


def test_cosine_orthogonal_vectors():
    assert cosine_similarity(fv({"a": 1}), fv({"b": 1})) == 0.0


def test_cosine_partial_overlap():
    # dot = 1, norms sqrt(2) * 1 -> 1/sqrt(2)
    value = cosine_similarity(fv({"a": 1, "b": 1}), fv({"a": 1}))
    assert value == pytest.approx(1.0 / math.sqrt(2.0), abs=1e-9)


def test_cosine_rejects_empty_vector():
    with pytest.raises(ZeroVectorError):
        cosine_similarity(fv({}), fv({"a": 1}))
    with pytest.raises(ZeroVectorError):
        cosine_similarity(fv({"a": 1}), fv({}))


def test_aba_identical_files():
    a = tokenize("int x = 1;")
    b = tokenize("int x = 1;")
    assert aba_similarity(a, b).value == 1.0


def test_aba_reorder_only_is_exactly_one():
    a = seq_from_symbols(["a", "b", "c"])
    b = seq_from_symbols(["b", "a", "c"])
    result = aba_similarity(a, b)
    assert result.value == 1.0
    assert result.detector == Detector.ABA


def test_aba_one_substitution():
    a = seq_from_symbols(["a", "b", "c"])
    b = seq_from_symbols(["a", "b", "d"])
    assert aba_similarity(a, b).value == pytest.approx(2.0 / 3.0, abs=1e-9)


def test_aba_empty_side_raises():
    with pytest.raises(ZeroVectorError):
        aba_similarity(seq_from_symbols([]), seq_from_symbols(["a"]))


def test_aba_mixed_abstraction_rejected():
    a = tokenize("int x;")
    b = seq_from_symbols(["a"])
    assert a.abstraction is Abstraction.CATEGORY
    with pytest.raises(AbstractionMismatch):
        aba_similarity(a, b)


@settings(max_examples=300, deadline=None)
@given(
    st.lists(st.integers(min_value=0, max_value=19), min_size=1, max_size=60),
    st.randoms(use_true_random=False),
)
def test_property_permutation_invariance(symbols, rng):
    shuffled = list(symbols)
    rng.shuffle(shuffled)
    a = seq_from_symbols(symbols)
    b = seq_from_symbols(shuffled)
    assert aba_similarity(a, b).value == pytest.approx(1.0, abs=1e-9)


@settings(max_examples=300, deadline=None)
@given(
    st.lists(st.integers(min_value=0, max_value=9), min_size=1, max_size=40),
    st.lists(st.integers(min_value=0, max_value=9), min_size=1, max_size=40),
)
def test_property_symmetry_and_range(xs, ys):
    a = seq_from_symbols(xs)
    b = seq_from_symbols(ys)
    ab = aba_similarity(a, b).value
    ba = aba_similarity(b, a).value
    assert ab == ba
    assert 0.0 <= ab <= 1.0
