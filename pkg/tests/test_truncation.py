"""
Truncation length selection from the explicit tail bound.
"""
from fractions import Fraction

import pytest

from src.exceptions import ConfigurationError, ResourceCapError, TruncationError
from src.inference.truncation import (
    additive_error_bound, apriori_delta, choose_truncation, params_for, tail_block,
)


def test_single_vertex_needs_one_block():
    params = choose_truncation(1, Fraction(1, 1000))
    assert params.N == 4
    assert params.additive_bound == 0
    assert params.delta == 0
    assert params.certified


def test_two_vertices_half():
    params = choose_truncation(2, Fraction(1, 2))
    assert params.block == 16
    assert params.N == 208
    assert params.delta == Fraction(1, 4096)
    assert params.additive_bound <= Fraction(1, 2)
    # one block fewer misses the target
    assert additive_error_bound(192, 2, 16) > Fraction(1, 2)


@pytest.mark.parametrize("n", [2, 3, 5, 8])
def test_chosen_n_is_minimal_multiple_of_block(n):
    epsilon = Fraction(1, 100)
    params = choose_truncation(n, epsilon)
    assert params.N % params.block == 0
    assert params.additive_bound <= epsilon
    k = params.N // params.block
    if k > 3:
        assert additive_error_bound(params.N - params.block, n, params.block) > epsilon


def test_monotone_in_epsilon():
    looser = choose_truncation(3, Fraction(1, 2))
    tighter = choose_truncation(3, Fraction(1, 1000))
    assert tighter.N >= looser.N


def test_tail_size_sets_block():
    params = choose_truncation(3, Fraction(1, 10), tail_size=5)
    assert params.block == tail_block(5) == 100
    assert params.tail_size == 5
    assert params.tail_rate == (100, Fraction(1, 2))


def test_delta_and_uncertified_lengths():
    assert apriori_delta(72, 36) == Fraction(1, 2)
    assert apriori_delta(108, 36) == Fraction(1, 4)
    assert additive_error_bound(36, 3, 36) is None
    assert additive_error_bound(72, 3, 36) is None
    assert additive_error_bound(108, 3, 36) is not None
    params = params_for(64, 3)
    assert not params.certified


def test_explicit_n_keeps_epsilon_for_reference():
    params = params_for(208, 2, epsilon=Fraction(1, 2))
    assert params.epsilon_target == Fraction(1, 2)
    assert params.certified


@pytest.mark.parametrize("call", [
    lambda: choose_truncation(0, Fraction(1, 2)),
    lambda: choose_truncation(3, 0),
    lambda: choose_truncation(3, Fraction(-1, 2)),
    lambda: params_for(0, 3),
])
def test_invalid_parameters(call):
    with pytest.raises(ConfigurationError):
        call()


def test_search_cap_failure_names_remedy():
    with pytest.raises(TruncationError, match="relax epsilon") as info:
        choose_truncation(2, Fraction(1, 2), cap=100)
    assert isinstance(info.value, ResourceCapError)
    assert info.value.exit_code == 3
