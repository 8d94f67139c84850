"""k-means clustering of learned representations and external scores.

``kmeans`` treats the *columns* of its input as points, so the
representation matrix ``H`` of a factorization can be passed directly.
"""

from dataclasses import dataclass, field
from typing import List

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import ConfigurationError, DimensionError
from .matrix_core import as_matrix


@dataclass
class ClusteringResult:
    assignments: np.ndarray
    centroids: np.ndarray  # (dims, k), one centroid per column
    inertia: float
    inertia_trace: List[float] = field(default_factory=list)
    n_iter: int = 0


def _sq_dists(P, C):
    # P: (n, d) points, C: (k, d) centroids
    d = (P * P).sum(1)[:, None] - 2.0 * P @ C.T + (C * C).sum(1)[None, :]
    return np.maximum(d, 0.0)


def _kmeanspp(P, k, rng):
    n = P.shape[0]
    idx = [int(rng.integers(n))]
    closest = _sq_dists(P, P[idx])[:, 0]
    for _ in range(1, k):
        total = closest.sum()
        if total <= 0:
            # all remaining points coincide with a chosen center
            rest = np.setdiff1d(np.arange(n), idx)
            nxt = int(rng.choice(rest))
        else:
            nxt = int(rng.choice(n, p=closest / total))
        idx.append(nxt)
        closest = np.minimum(closest, _sq_dists(P, P[[nxt]])[:, 0])
    return P[idx].copy()


def _inertia(P, C, labels):
    diff = P - C[labels]
    return float(np.einsum("ij,ij->", diff, diff))


def _centroids(P, labels, k):
    counts = np.bincount(labels, minlength=k)
    while np.any(counts == 0):
        # empty cluster: hand it the point farthest from its centroid
        C = _means(P, labels, k, counts)
        d = ((P - C[labels]) ** 2).sum(1)
        d[counts[labels] < 2] = -1.0
        labels = labels.copy()
        labels[np.argmax(d)] = np.flatnonzero(counts == 0)[0]
        counts = np.bincount(labels, minlength=k)
    return _means(P, labels, k, counts), labels


def _means(P, labels, k, counts):
    C = np.zeros((k, P.shape[1]))
    np.add.at(C, labels, P)
    return C / np.maximum(counts, 1)[:, None]


def _lloyd(P, C, max_iters):
    k = C.shape[0]
    labels = np.argmin(_sq_dists(P, C), axis=1)
    trace = [_inertia(P, C, labels)]
    it = 0
    for it in range(1, max_iters + 1):
        C, labels = _centroids(P, labels, k)
        new_labels = np.argmin(_sq_dists(P, C), axis=1)
        trace.append(_inertia(P, C, new_labels))
        if np.array_equal(new_labels, labels):
            break
        labels = new_labels
    return labels, C, trace, it


def kmeans(points, k, seed=0, restarts=10, max_iters=100):
    """Lloyd's algorithm with k-means++ seeding, best of ``restarts`` runs.

    Parameters
    ----------
    points : (d, n) array
        One point per column.
    k : int
        Number of clusters, ``1 <= k <= n``.

    Returns
    -------
    ClusteringResult
        The run with the lowest inertia; ties keep the earliest restart.
    """
    P = as_matrix(points, "points").T.copy()
    n = P.shape[0]
    if k < 1 or k > n:
        raise ConfigurationError(f"k={k} must lie in [1, {n}]")
    if restarts < 1:
        raise ConfigurationError("restarts must be >= 1")
    rng = np.random.default_rng(seed)
    best = None
    for _ in range(restarts):
        C0 = _kmeanspp(P, k, rng)
        labels, C, trace, it = _lloyd(P, C0, max_iters)
        if best is None or trace[-1] < best.inertia:
            best = ClusteringResult(labels, C.T.copy(), trace[-1], trace, it)
    return best


# --------------------------------------------------------------------------
# scores


def _pair(y, y_pred):
    y = np.asarray(y).ravel()
    y_pred = np.asarray(y_pred).ravel()
    if y.shape != y_pred.shape:
        raise DimensionError(f"label lengths differ: {y.size} vs {y_pred.size}")
    if y.size == 0:
        raise DimensionError("empty labelings")
    return y, y_pred


def contingency(y, y_pred):
    """Count matrix with rows = true classes, columns = predicted clusters."""
    y, y_pred = _pair(y, y_pred)
    _, a = np.unique(y, return_inverse=True)
    _, b = np.unique(y_pred, return_inverse=True)
    C = np.zeros((a.max() + 1, b.max() + 1), dtype=np.int64)
    np.add.at(C, (a, b), 1)
    return C


def accuracy(y, y_pred):
    """Clustering accuracy under the best one-to-one cluster-to-class map.

    The map is an optimal assignment on the (zero-padded) contingency
    table; clusters left unmatched count as errors.
    """
    C = contingency(y, y_pred)
    n = max(C.shape)
    pad = np.zeros((n, n), dtype=np.int64)
    pad[:C.shape[0], :C.shape[1]] = C
    r, c = linear_sum_assignment(pad, maximize=True)
    return float(pad[r, c].sum()) / C.sum()


def _entropy(p, log):
    p = p[p > 0]
    return float(-(p * log(p)).sum())


def nmi(y, y_pred, log=np.log):
    """Mutual information normalized by the larger marginal entropy.

    Returns 1.0 when both labelings are constant.
    """
    C = contingency(y, y_pred).astype(np.float64)
    P = C / C.sum()
    py, pc = P.sum(axis=1), P.sum(axis=0)
    nz = P > 0
    mi = float((P[nz] * log(P[nz] / np.outer(py, pc)[nz])).sum())
    h = max(_entropy(py, log), _entropy(pc, log))
    if h == 0:
        return 1.0
    return min(max(mi / h, 0.0), 1.0)
