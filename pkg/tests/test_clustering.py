import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ewnmf.clustering import accuracy, contingency, kmeans, nmi
from ewnmf.errors import ConfigurationError, DimensionError


def brute_acc(y, yp):
    """Best accuracy over every injective map from clusters to classes."""
    y, yp = list(y), list(yp)
    classes = sorted(set(y))
    clusters = sorted(set(yp))
    pool = classes + [None] * max(0, len(clusters) - len(classes))
    best = 0
    for perm in itertools.permutations(pool, len(clusters)):
        m = dict(zip(clusters, perm))
        best = max(best, sum(m[b] == a for a, b in zip(y, yp)))
    return best / len(y)


def brute_nmi(y, yp, log=math.log):
    n = len(y)
    cy = {a: y.count(a) / n for a in set(y)}
    cp = {b: yp.count(b) / n for b in set(yp)}
    mi = 0.0
    for a in cy:
        for b in cp:
            pab = sum(1 for u, v in zip(y, yp) if u == a and v == b) / n
            if pab > 0:
                mi += pab * log(pab / (cy[a] * cp[b]))
    hy = -sum(p * log(p) for p in cy.values())
    hp = -sum(p * log(p) for p in cp.values())
    return 1.0 if max(hy, hp) == 0 else mi / max(hy, hp)


def brute_2partition_inertia(xs):
    best = math.inf
    n = len(xs)
    for mask in range(1, 2 ** n - 1):
        parts = [[x for i, x in enumerate(xs) if (mask >> i) & 1 == b] for b in (0, 1)]
        cost = sum(sum((x - sum(p) / len(p)) ** 2 for x in p) for p in parts)
        best = min(best, cost)
    return best


# --------------------------------------------------------------------------
# k-means


def test_kmeans_far_pairs():
    P = np.array([[0.0, 0.0, 10.0, 10.0], [0.0, 1.0, 0.0, 1.0]])
    res = kmeans(P, 2, seed=0)
    assert res.assignments[0] == res.assignments[1] != res.assignments[2] == res.assignments[3]
    assert res.inertia == pytest.approx(2 * 0.5)


def test_kmeans_k_equals_n(rng):
    P = rng.random((3, 6))
    res = kmeans(P, 6, seed=1)
    assert res.inertia == pytest.approx(0, abs=1e-12)
    assert sorted(res.assignments) == list(range(6))


def test_kmeans_line_matches_exhaustive_oracle():
    xs = [0, 0.1, 0.2, 10, 10.1, 10.2]
    res = kmeans(np.array([xs]), 2, seed=0)
    assert res.inertia == pytest.approx(brute_2partition_inertia(xs), abs=1e-12)
    assert len(set(res.assignments[:3])) == 1 and len(set(res.assignments[3:])) == 1
    assert res.assignments[0] != res.assignments[3]


def test_kmeans_inertia_nonincreasing(rng):
    for s in range(10):
        P = rng.random((4, 60))
        res = kmeans(P, 5, seed=s, restarts=3)
        tr = np.array(res.inertia_trace)
        assert np.all(np.diff(tr) <= 1e-10 * (1 + tr[:-1]))


def test_kmeans_deterministic(rng):
    P = rng.random((3, 40))
    a, b = kmeans(P, 4, seed=9), kmeans(P, 4, seed=9)
    np.testing.assert_array_equal(a.assignments, b.assignments)
    assert a.inertia == b.inertia


def test_kmeans_fills_every_cluster():
    P = np.array([[0.0, 0.0, 0.0, 0.0, 5.0]])
    res = kmeans(P, 3, seed=0)
    assert len(set(res.assignments)) >= 2
    assert res.centroids.shape == (1, 3)


def test_kmeans_errors(rng):
    with pytest.raises(ConfigurationError):
        kmeans(rng.random((2, 3)), 4)
    with pytest.raises(ConfigurationError):
        kmeans(rng.random((2, 3)), 0)


# --------------------------------------------------------------------------
# ACC / NMI


def test_accuracy_examples():
    assert accuracy([0, 0, 1, 1, 2], [2, 2, 0, 0, 1]) == 1.0
    y, yp = [1, 1, 2, 2], [1, 2, 1, 2]
    assert accuracy(y, yp) == brute_acc(y, yp) == 0.5
    assert accuracy([0, 0, 1, 1], [5, 5, 5, 5]) == 0.5


def test_nmi_examples():
    assert nmi([0, 0, 1, 1, 2, 2], [0, 0, 1, 1, 2, 2]) == pytest.approx(1.0)
    assert nmi([1, 1, 2, 2], [1, 2, 1, 2]) == pytest.approx(0.0, abs=1e-15)
    y, yp = [1, 1, 2, 2], [1, 2, 2, 2]
    assert nmi(y, yp) == pytest.approx(brute_nmi(y, yp), abs=1e-12)
    assert nmi(y, yp) == pytest.approx(0.311279, abs=1e-6)
    assert nmi([3, 3, 3], [1, 1, 1]) == 1.0


def test_length_mismatch():
    with pytest.raises(DimensionError):
        accuracy([0, 1], [0])
    with pytest.raises(DimensionError):
        nmi([0, 1], [0, 1, 1])


def test_contingency_counts():
    C = contingency([0, 0, 1, 2], [1, 1, 1, 0])
    np.testing.assert_array_equal(C, [[0, 2], [0, 1], [1, 0]])


labelings = st.integers(2, 12).flatmap(
    lambda n: st.tuples(st.lists(st.integers(0, 5), min_size=n, max_size=n),
                        st.lists(st.integers(0, 5), min_size=n, max_size=n)))


@settings(max_examples=150, deadline=None)
@given(labelings)
def test_accuracy_equals_exhaustive(pair):
    y, yp = pair
    assert accuracy(y, yp) == brute_acc(y, yp)


@settings(max_examples=150, deadline=None)
@given(labelings)
def test_nmi_matches_count_oracle_and_bounds(pair):
    y, yp = pair
    v = nmi(y, yp)
    assert v == pytest.approx(brute_nmi(y, yp), abs=1e-10)
    assert 0 <= v <= 1
    assert 0 <= accuracy(y, yp) <= 1


@settings(max_examples=60, deadline=None)
@given(labelings)
def test_nmi_log_base_invariant(pair):
    y, yp = pair
    assert nmi(y, yp, log=np.log2) == pytest.approx(nmi(y, yp), abs=1e-12)


def test_renaming_invariance(rng):
    y = rng.integers(0, 4, size=30)
    yp = rng.integers(0, 5, size=30)
    a0, n0 = accuracy(y, yp), nmi(y, yp)
    for _ in range(20):
        ry = rng.permutation(10)[:4] + 7
        rp = rng.permutation(10)[:5]
        assert accuracy(ry[y], rp[yp]) == a0
        assert nmi(ry[y], rp[yp]) == pytest.approx(n0, abs=1e-12)
