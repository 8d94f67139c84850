"""Objective functions for plain and entropy-weighted NMF.

Every weighted cost has the form ``sum_ij T_ij d_ij + gamma * sum_ij T_ij ln T_ij``
where ``d_ij`` is a per-element divergence between ``X`` and ``WH`` and
``T`` is column-stochastic. ``0 ln 0`` is taken as 0 throughout.
"""

import enum
from dataclasses import dataclass

import numpy as np
from scipy.special import xlogy

from .errors import ConstraintError, DimensionError, DomainError
from .matrix_core import EPS, as_matrix

SIMPLEX_TOL = 1e-9


class Family(str, enum.Enum):
    FROBENIUS = "frobenius"
    WEIGHTED_FROBENIUS = "weighted_frobenius"
    WEIGHTED_KL = "weighted_kl"
    WEIGHTED_ALPHA = "weighted_alpha"
    HARD_WEIGHT = "hard_weight"


_NEEDS_GAMMA = {Family.WEIGHTED_FROBENIUS, Family.WEIGHTED_KL,
                Family.WEIGHTED_ALPHA}


@dataclass(frozen=True)
class ObjectiveSpec:
    """Which cost a factorization run minimizes.

    ``gamma`` is the entropy strength (ignored by ``frobenius`` and
    ``hard_weight``); ``alpha`` is only read by ``weighted_alpha``.
    """

    family: Family = Family.FROBENIUS
    gamma: float = 1.0
    alpha: float = 2.0

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))
        if self.family in _NEEDS_GAMMA and not self.gamma > 0:
            raise DomainError(
                f"{self.family.value} needs gamma > 0 (use hard_weight for "
                f"the gamma -> 0 limit), got {self.gamma}")
        if self.family is Family.WEIGHTED_ALPHA:
            _check_alpha(self.alpha)

    @property
    def weighted(self):
        return self.family is not Family.FROBENIUS

    @classmethod
    def frobenius(cls):
        return cls(Family.FROBENIUS)

    @classmethod
    def weighted_frobenius(cls, gamma):
        return cls(Family.WEIGHTED_FROBENIUS, gamma=gamma)

    @classmethod
    def weighted_kl(cls, gamma):
        return cls(Family.WEIGHTED_KL, gamma=gamma)

    @classmethod
    def weighted_alpha(cls, alpha, gamma):
        return cls(Family.WEIGHTED_ALPHA, gamma=gamma, alpha=alpha)

    @classmethod
    def hard_weight(cls):
        return cls(Family.HARD_WEIGHT)


def _check_alpha(alpha):
    if alpha == 0 or alpha == 1:
        raise DomainError(
            f"alpha={alpha} is a removable singularity of the alpha-divergence;"
            " use the weighted KL family for the limit")


def _product(X, W, H):
    X = as_matrix(X, "X")
    W = as_matrix(W, "W")
    H = as_matrix(H, "H")
    if W.shape[0] != X.shape[0] or H.shape[1] != X.shape[1] \
            or W.shape[1] != H.shape[0]:
        raise DimensionError(
            f"shapes do not conform: X {X.shape}, W {W.shape}, H {H.shape}")
    return X, W @ H


def _check_weights(T, shape):
    T = as_matrix(T, "T")
    if T.shape != shape:
        raise DimensionError(f"T has shape {T.shape}, expected {shape}")
    if np.any(T < 0):
        raise ConstraintError("T has negative entries")
    dev = np.abs(T.sum(axis=0) - 1.0)
    if np.any(dev > SIMPLEX_TOL):
        raise ConstraintError(
            f"columns of T must sum to 1 (worst deviation {dev.max():.3g})")
    return T


def _check_nonneg(X):
    if np.any(X < 0):
        raise DomainError("X must be nonnegative")


def neg_entropy(T):
    """``sum_ij T_ij ln T_ij`` with ``0 ln 0 = 0``."""
    return float(xlogy(T, T).sum())


def kl_terms(X, WH, eps=EPS):
    """Elementwise generalized KL divergence ``X log(X/WH) - X + WH``."""
    WH = np.maximum(WH, eps)
    return xlogy(X, X) - xlogy(X, WH) - X + WH


def alpha_terms(X, WH, alpha, eps=EPS):
    """Elementwise alpha-divergence including the ``1/(alpha(alpha-1))`` factor.

    The prefactored value is nonnegative for every admissible alpha, which
    is what enters the weight update as the effective residual.
    """
    _check_alpha(alpha)
    WH = np.maximum(WH, eps)
    with np.errstate(divide="ignore", over="ignore"):
        raw = (np.power(X, alpha) * np.power(WH, 1.0 - alpha)
               - alpha * X + (alpha - 1.0) * WH)
    return raw / (alpha * (alpha - 1.0))


def cost_frobenius(X, W, H):
    """``||X - WH||_F^2``."""
    X, WH = _product(X, W, H)
    R = X - WH
    return float(np.einsum("ij,ij->", R, R))


def cost_weighted_frobenius(X, W, H, T, gamma):
    """Entropy-regularized weighted squared error."""
    X, WH = _product(X, W, H)
    T = _check_weights(T, X.shape)
    R = X - WH
    return float(np.sum(T * R * R)) + gamma * neg_entropy(T)


def cost_hard_weight(X, W, H, T):
    """Weighted squared error without the entropy term."""
    X, WH = _product(X, W, H)
    T = _check_weights(T, X.shape)
    R = X - WH
    return float(np.sum(T * R * R))


def cost_weighted_kl(X, W, H, T, gamma, eps=EPS):
    """Entropy-regularized weighted generalized KL divergence (natural log)."""
    X, WH = _product(X, W, H)
    _check_nonneg(X)
    T = _check_weights(T, X.shape)
    return float(np.sum(T * kl_terms(X, WH, eps))) + gamma * neg_entropy(T)


def cost_weighted_alpha(X, W, H, T, alpha, gamma, eps=EPS):
    """Entropy-regularized weighted alpha-divergence."""
    _check_alpha(alpha)
    X, WH = _product(X, W, H)
    _check_nonneg(X)
    T = _check_weights(T, X.shape)
    return (float(np.sum(T * alpha_terms(X, WH, alpha, eps)))
            + gamma * neg_entropy(T))


def evaluate(spec, X, W, H, T=None, eps=EPS):
    """Evaluate the objective selected by ``spec``."""
    fam = spec.family
    if fam is Family.FROBENIUS:
        return cost_frobenius(X, W, H)
    if T is None:
        raise ConstraintError(f"{fam.value} objective needs weights T")
    if fam is Family.WEIGHTED_FROBENIUS:
        return cost_weighted_frobenius(X, W, H, T, spec.gamma)
    if fam is Family.HARD_WEIGHT:
        return cost_hard_weight(X, W, H, T)
    if fam is Family.WEIGHTED_KL:
        return cost_weighted_kl(X, W, H, T, spec.gamma, eps)
    return cost_weighted_alpha(X, W, H, T, spec.alpha, spec.gamma, eps)
