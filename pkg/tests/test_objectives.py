import math

import mpmath
import numpy as np
import pytest

from ewnmf.errors import ConstraintError, DomainError
from ewnmf.objectives import (Family, ObjectiveSpec, alpha_terms, cost_frobenius,
                              cost_weighted_alpha, cost_weighted_frobenius,
                              cost_weighted_kl, evaluate)

LN2 = math.log(2)


def _brute_weighted(X, WH, T, gamma):
    # plain loops, no vectorization
    total = 0.0
    for i in range(X.shape[0]):
        for j in range(X.shape[1]):
            t = T[i, j]
            total += t * (X[i, j] - WH[i, j]) ** 2
            if t > 0:
                total += gamma * t * math.log(t)
    return total


def test_cost_frobenius_examples():
    W = np.array([[1.0], [2.0]])
    H = np.array([[1.0, 3.0]])
    assert cost_frobenius(W @ H, W, H) == 0
    assert cost_frobenius([[1]], [[0.5]], [[1]]) == 0.25
    X = np.array([[1, 2], [3, 4]], float)
    W, H = np.ones((2, 1)), np.ones((1, 2))
    oracle = sum((X[i, j] - 1) ** 2 for i in range(2) for j in range(2))
    assert cost_frobenius(X, W, H) == oracle == 14


def test_cost_weighted_frobenius_examples():
    W, H = np.ones((2, 1)), np.ones((1, 1))
    T = np.full((2, 1), 0.5)
    assert cost_weighted_frobenius(W @ H, W, H, T, 1.0) == pytest.approx(-LN2, abs=1e-12)
    assert -LN2 == pytest.approx(-0.693147, abs=1e-6)
    # residuals 1 and 2 -> squared 1 and 4
    X = np.array([[2.0], [3.0]])
    val = cost_weighted_frobenius(X, W, H, T, 1.0)
    assert val == pytest.approx(2.5 - LN2, abs=1e-12)
    assert val == pytest.approx(1.806853, abs=1e-6)
    # hard column: entropy contributes nothing
    Th = np.array([[1.0], [0.0]])
    assert cost_weighted_frobenius(X, W, H, Th, 1.0) == pytest.approx(1.0)


def test_weighted_frobenius_matches_loops(rng):
    X = rng.random((6, 4))
    W, H = rng.random((6, 2)), rng.random((2, 4))
    T = rng.random((6, 4))
    T /= T.sum(0)
    assert cost_weighted_frobenius(X, W, H, T, 0.7) == pytest.approx(
        _brute_weighted(X, W @ H, T, 0.7), rel=1e-12)


def test_cost_weighted_kl_examples():
    W, H = np.array([[2.0]]), np.array([[1.5]])
    assert cost_weighted_kl(W @ H, W, H, [[1.0]], 1.0) == pytest.approx(0, abs=1e-15)
    oracle = float(1 * mpmath.log(mpmath.mpf(1) / 2) - 1 + 2)
    val = cost_weighted_kl([[1.0]], [[2.0]], [[1.0]], [[1.0]], 1.0)
    assert val == pytest.approx(oracle, abs=1e-14)
    assert val == pytest.approx(0.306853, abs=1e-6)
    # a zero in X contributes (WH)_ij only
    assert cost_weighted_kl([[0.0]], [[3.0]], [[1.0]], [[1.0]], 1.0) == pytest.approx(3.0)


def test_cost_weighted_kl_rejects_negative_data():
    with pytest.raises(DomainError):
        cost_weighted_kl([[-1.0]], [[1.0]], [[1.0]], [[1.0]], 1.0)


def test_cost_weighted_alpha_examples(rng):
    W, H = rng.random((3, 2)) + 0.1, rng.random((2, 4)) + 0.1
    T = np.full((3, 4), 1 / 3)
    for a in (-1.0, 0.5, 2.0, 3.0):
        div = cost_weighted_alpha(W @ H, W, H, T, a, 1.0) - 1.0 * np.sum(T * np.log(T))
        assert div == pytest.approx(0, abs=1e-12)
    # alpha=2 is half the Pearson chi-square (X - Y)^2 / Y
    val = cost_weighted_alpha([[2.0]], [[1.0]], [[1.0]], [[1.0]], 2.0, 5.0)
    assert val == pytest.approx(0.5 * (2 - 1) ** 2 / 1, abs=1e-14)


def test_alpha_near_one_matches_kl(rng):
    X = rng.random((3, 3)) + 0.1
    W, H = rng.random((3, 2)) + 0.1, rng.random((2, 3)) + 0.1
    T = rng.random((3, 3))
    T /= T.sum(0)
    kl = cost_weighted_kl(X, W, H, T, 1.0)
    a = cost_weighted_alpha(X, W, H, T, 1.001, 1.0)
    assert a == pytest.approx(kl, rel=1e-2)


@pytest.mark.parametrize("alpha", [0.0, 1.0])
def test_alpha_singular_values_rejected(alpha):
    with pytest.raises(DomainError, match="KL"):
        cost_weighted_alpha([[1.0]], [[1.0]], [[1.0]], [[1.0]], alpha, 1.0)
    with pytest.raises(DomainError):
        ObjectiveSpec.weighted_alpha(alpha, 1.0)


def test_weights_must_be_column_stochastic():
    with pytest.raises(ConstraintError):
        cost_weighted_frobenius([[1.0], [1.0]], [[1.0], [1.0]], [[1.0]],
                                [[0.5], [0.6]], 1.0)


@pytest.mark.parametrize("alpha", [-1.0, 0.5, 2.0, 3.0])
def test_alpha_term_nonnegative(alpha, rng):
    X = rng.uniform(0.01, 5, size=(50, 50))
    Y = rng.uniform(0.01, 5, size=(50, 50))
    assert np.all(alpha_terms(X, Y, alpha) >= -1e-12)


def test_uniform_weights_reduce_to_scaled_frobenius(rng):
    M, N, gamma = 7, 5, 0.3
    X = rng.random((M, N))
    W, H = rng.random((M, 2)), rng.random((2, N))
    T = np.full((M, N), 1 / M)
    expected = cost_frobenius(X, W, H) / M + gamma * N * math.log(1 / M)
    assert cost_weighted_frobenius(X, W, H, T, gamma) == pytest.approx(expected, rel=1e-10)


def test_costs_deterministic(rng):
    X = rng.random((5, 6))
    W, H = rng.random((5, 2)), rng.random((2, 6))
    T = rng.random((5, 6))
    T /= T.sum(0)
    for f in (lambda: cost_weighted_frobenius(X, W, H, T, 0.1),
              lambda: cost_weighted_kl(X, W, H, T, 0.1),
              lambda: cost_weighted_alpha(X, W, H, T, 0.5, 0.1)):
        assert f() == f()


def test_spec_validation():
    with pytest.raises(DomainError):
        ObjectiveSpec.weighted_frobenius(0.0)
    assert ObjectiveSpec("hard_weight", gamma=0).family is Family.HARD_WEIGHT
    assert not ObjectiveSpec.frobenius().weighted


def test_evaluate_dispatch(rng):
    X = rng.random((4, 3))
    W, H = rng.random((4, 2)), rng.random((2, 3))
    T = np.full((4, 3), 0.25)
    assert evaluate(ObjectiveSpec.frobenius(), X, W, H) == cost_frobenius(X, W, H)
    assert evaluate(ObjectiveSpec.weighted_kl(2.0), X, W, H, T) == \
        cost_weighted_kl(X, W, H, T, 2.0)
    with pytest.raises(ConstraintError):
        evaluate(ObjectiveSpec.weighted_frobenius(1.0), X, W, H)
