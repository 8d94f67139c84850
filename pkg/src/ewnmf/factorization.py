"""Multiplicative update rules and the alternating EWNMF loop.

Standard NMF alternates the Lee-Seung rules for ``W`` and ``H``. Entropy
weighted NMF adds a per-attribute, per-point weight matrix ``T`` whose
columns live on the probability simplex. For fixed factors, the optimal
weights are a column-wise softmax of the negated residual divergences
scaled by ``1/gamma``; for fixed weights the factors follow weighted
multiplicative rules. One cycle updates ``T``, then ``W``, then ``H``.
"""

from dataclasses import dataclass, field
from typing import Callable, List, Optional

import numpy as np

from .errors import ConfigurationError, DimensionError, DomainError, NumericalError
from .matrix_core import EPS, as_matrix
from .objectives import Family, ObjectiveSpec, alpha_terms, kl_terms, neg_entropy


@dataclass
class Residuals:
    """``E = X - WH`` and its elementwise square."""

    E: np.ndarray
    squared: np.ndarray

    @classmethod
    def from_factors(cls, X, W, H):
        E = as_matrix(X, "X") - as_matrix(W, "W") @ as_matrix(H, "H")
        return cls(E=E, squared=E * E)


@dataclass
class FactorModel:
    """State and history of one factorization run."""

    W: np.ndarray
    H: np.ndarray
    T: Optional[np.ndarray] = None
    iteration: int = 0
    cost_trace: List[float] = field(default_factory=list)
    spec: ObjectiveSpec = field(default_factory=ObjectiveSpec)
    initial_cost: Optional[float] = None

    @property
    def final_cost(self):
        return self.cost_trace[-1] if self.cost_trace else self.initial_cost


# --------------------------------------------------------------------------
# W / H updates


def _check_factor_shapes(X, W, H, T=None):
    if W.shape[0] != X.shape[0] or H.shape[1] != X.shape[1] \
            or W.shape[1] != H.shape[0]:
        raise DimensionError(
            f"shapes do not conform: X {X.shape}, W {W.shape}, H {H.shape}")
    if T is not None and T.shape != X.shape:
        raise DimensionError(f"T has shape {T.shape}, expected {X.shape}")


def _w_step(X, W, H, eps):
    return W * (X @ H.T) / np.maximum(W @ (H @ H.T), eps)


def _h_step(X, W, H, eps):
    return H * (W.T @ X) / np.maximum((W.T @ W) @ H, eps)


def _w_step_weighted(TX, T, W, H, eps):
    return W * (TX @ H.T) / np.maximum((T * (W @ H)) @ H.T, eps)


def _h_step_weighted(TX, T, W, H, eps):
    return H * (W.T @ TX) / np.maximum(W.T @ (T * (W @ H)), eps)


def update_W_nmf(X, W, H, eps=EPS):
    """``W <- W ⊙ (X Hᵀ) ./ (W H Hᵀ)``."""
    X, W, H = as_matrix(X, "X"), as_matrix(W, "W"), as_matrix(H, "H")
    _check_factor_shapes(X, W, H)
    return _w_step(X, W, H, eps)


def update_H_nmf(X, W, H, eps=EPS):
    """``H <- H ⊙ (Wᵀ X) ./ (Wᵀ W H)``."""
    X, W, H = as_matrix(X, "X"), as_matrix(W, "W"), as_matrix(H, "H")
    _check_factor_shapes(X, W, H)
    return _h_step(X, W, H, eps)


def update_W_weighted(X, W, H, T, eps=EPS):
    """``W <- W ⊙ [(T ⊙ X) Hᵀ] ./ {[T ⊙ (WH)] Hᵀ}``."""
    X, W, H, T = (as_matrix(X, "X"), as_matrix(W, "W"), as_matrix(H, "H"),
                  as_matrix(T, "T"))
    _check_factor_shapes(X, W, H, T)
    return _w_step_weighted(T * X, T, W, H, eps)


def update_H_weighted(X, W, H, T, eps=EPS):
    """``H <- H ⊙ [Wᵀ (T ⊙ X)] ./ {Wᵀ [T ⊙ (WH)]}``."""
    X, W, H, T = (as_matrix(X, "X"), as_matrix(W, "W"), as_matrix(H, "H"),
                  as_matrix(T, "T"))
    _check_factor_shapes(X, W, H, T)
    return _h_step_weighted(T * X, T, W, H, eps)


# --------------------------------------------------------------------------
# T updates


def _column_softmin(D, gamma):
    """Column-wise ``exp(-D/gamma)`` normalized to sum to one.

    Shifting each column by its minimum leaves the result unchanged and keeps
    the largest exponent at exactly zero, so nothing underflows to an
    all-zero column for small gamma.
    """
    Z = np.exp(-(D - D.min(axis=0, keepdims=True)) / gamma)
    return Z / Z.sum(axis=0, keepdims=True)


def _check_gamma(gamma):
    if not gamma > 0:
        raise DomainError(
            f"gamma must be > 0, got {gamma}; use update_T_hard for the "
            "gamma -> 0 limit")


def update_T_entropy(residuals_sq, gamma):
    """Optimal entropy-regularized weights for squared residuals.

    Parameters
    ----------
    residuals_sq : (M, N) array
        Squared residuals ``(X - WH)**2``.
    gamma : float
        Entropy strength, must be positive.

    Returns
    -------
    T : (M, N) array
        Column-stochastic weights ``T_ij ∝ exp(-r_ij / gamma)``.
    """
    _check_gamma(gamma)
    return _column_softmin(as_matrix(residuals_sq, "residuals_sq"), gamma)


def update_T_hard(residuals):
    """Zero-entropy limit: all weight on the attribute with smallest ``|E|``.

    Accepts a :class:`Residuals` or the raw residual matrix ``E``. Ties go to
    the lowest row index.
    """
    E = residuals.E if isinstance(residuals, Residuals) else residuals
    E = as_matrix(E, "E")
    T = np.zeros_like(E)
    T[np.argmin(np.abs(E), axis=0), np.arange(E.shape[1])] = 1.0
    return T


def update_T_kl(X, WH, gamma, eps=EPS):
    """Weights for the entropy-regularized KL objective."""
    _check_gamma(gamma)
    X, WH = as_matrix(X, "X"), as_matrix(WH, "WH")
    if X.shape != WH.shape:
        raise DimensionError(f"X {X.shape} vs WH {WH.shape}")
    if np.any(X < 0):
        raise DomainError("X must be nonnegative")
    return _column_softmin(kl_terms(X, WH, eps), gamma)


def update_T_alpha(X, WH, alpha, gamma, eps=EPS):
    """Weights for the entropy-regularized alpha-divergence objective."""
    _check_gamma(gamma)
    X, WH = as_matrix(X, "X"), as_matrix(WH, "WH")
    if X.shape != WH.shape:
        raise DimensionError(f"X {X.shape} vs WH {WH.shape}")
    if np.any(X < 0):
        raise DomainError("X must be nonnegative")
    return _column_softmin(alpha_terms(X, WH, alpha, eps), gamma)


# --------------------------------------------------------------------------
# outer loop

_RUNNABLE = {Family.FROBENIUS, Family.WEIGHTED_FROBENIUS, Family.HARD_WEIGHT}


def _weights(spec, X, WH):
    R = X - WH
    if spec.family is Family.WEIGHTED_FROBENIUS:
        return _column_softmin(R * R, spec.gamma)
    return update_T_hard(R)


def _cost(spec, X, WH, T):
    R = X - WH
    if spec.family is Family.FROBENIUS:
        return float(np.einsum("ij,ij->", R, R))
    c = float(np.sum(T * R * R))
    if spec.family is Family.WEIGHTED_FROBENIUS:
        c += spec.gamma * neg_entropy(T)
    return c


def run_factorization(X, spec, K, iters=300, seed=0, *, eps=EPS,
                      W0=None, H0=None, tol=None, patience=5,
                      callback: Optional[Callable] = None):
    """Alternating minimization for plain or entropy-weighted NMF.

    Parameters
    ----------
    X : (M, N) array_like
        Nonnegative data, one data point per column.
    spec : ObjectiveSpec
        ``frobenius``, ``weighted_frobenius`` or ``hard_weight``.
    K : int
        Number of basis vectors, ``1 <= K < min(M, N)``.
    iters : int
        Number of T/W/H cycles.
    seed : int
        Seed for the uniform [0.1, 1.1] initialization (ignored when both
        ``W0`` and ``H0`` are given).
    tol : float, optional
        Stop early once the relative cost change stays below ``tol`` for
        ``patience`` consecutive cycles. Off by default.
    callback : callable, optional
        Called as ``callback(model)`` after every cycle.

    Returns
    -------
    FactorModel
    """
    from .data import init_factors

    X = as_matrix(X, "X")
    if not np.all(np.isfinite(X)):
        raise DomainError("X contains non-finite values")
    if np.any(X < 0):
        raise DomainError("X must be nonnegative")
    if not isinstance(spec, ObjectiveSpec):
        raise ConfigurationError("spec must be an ObjectiveSpec")
    if spec.family not in _RUNNABLE:
        raise ConfigurationError(
            f"no W/H update rules are provided for {spec.family.value}; only "
            "its weight update and cost are available")
    M, N = X.shape
    K = int(K)
    if K < 1 or K >= min(M, N):
        raise ConfigurationError(f"K={K} must satisfy 1 <= K < min(M, N)={min(M, N)}")
    if iters < 1:
        raise ConfigurationError("iters must be >= 1")

    if W0 is None or H0 is None:
        Wi, Hi = init_factors(M, N, K, seed)
        W = Wi if W0 is None else as_matrix(W0, "W0").copy()
        H = Hi if H0 is None else as_matrix(H0, "H0").copy()
    else:
        W, H = as_matrix(W0, "W0").copy(), as_matrix(H0, "H0").copy()
    _check_factor_shapes(X, W, H)

    weighted = spec.weighted
    WH = W @ H
    T = _weights(spec, X, WH) if weighted else None
    model = FactorModel(W=W, H=H, T=T, spec=spec,
                        initial_cost=_cost(spec, X, WH, T))

    calm = 0
    for it in range(1, iters + 1):
        if weighted:
            T = _weights(spec, X, W @ H)
            TX = T * X
            W = _w_step_weighted(TX, T, W, H, eps)
            H = _h_step_weighted(TX, T, W, H, eps)
        else:
            W = _w_step(X, W, H, eps)
            H = _h_step(X, W, H, eps)
        cost = _cost(spec, X, W @ H, T)
        if not np.isfinite(cost):
            raise NumericalError(f"non-finite cost at iteration {it}", it)

        prev = model.cost_trace[-1] if model.cost_trace else model.initial_cost
        model.W, model.H, model.T = W, H, T
        model.iteration = it
        model.cost_trace.append(cost)
        if callback is not None:
            callback(model)
        if tol is not None:
            rel = abs(prev - cost) / max(abs(prev), np.finfo(float).tiny)
            calm = calm + 1 if rel < tol else 0
            if calm >= patience:
                break
    return model


def nmf(X, K, iters=300, seed=0, **kwargs):
    """Plain Frobenius NMF; shorthand for :func:`run_factorization`."""
    return run_factorization(X, ObjectiveSpec.frobenius(), K, iters, seed,
                             **kwargs)


def ewnmf(X, K, gamma, iters=300, seed=0, **kwargs):
    """Entropy-weighted NMF with squared-error residuals."""
    return run_factorization(X, ObjectiveSpec.weighted_frobenius(gamma), K,
                             iters, seed, **kwargs)
