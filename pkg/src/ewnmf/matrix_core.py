"""Dense matrix primitives used by the multiplicative update rules.

Matrices are plain two-dimensional ``float64`` numpy arrays (C order, i.e.
row-major). The helpers here add the shape checks and the denominator floor
that the update rules rely on.
"""

import numpy as np

from .errors import DimensionError

#: Default floor applied to every denominator of a multiplicative update.
EPS = 1e-12


def as_matrix(A, name="matrix"):
    """Return ``A`` as a 2-D C-contiguous float64 array.

    Raises
    ------
    DimensionError
        If ``A`` is not two-dimensional or has an empty axis.
    """
    A = np.ascontiguousarray(A, dtype=np.float64)
    if A.ndim != 2:
        raise DimensionError(f"{name} must be 2-D, got shape {A.shape}")
    if A.shape[0] == 0 or A.shape[1] == 0:
        raise DimensionError(f"{name} has an empty axis: {A.shape}")
    return A


def _same_shape(A, B, op):
    if A.shape != B.shape:
        raise DimensionError(f"{op}: shape mismatch {A.shape} vs {B.shape}")


def hadamard(A, B):
    """Elementwise product ``A ⊙ B``."""
    A = as_matrix(A, "A")
    B = as_matrix(B, "B")
    _same_shape(A, B, "hadamard")
    return A * B


def safe_divide(A, B, eps=EPS):
    """Elementwise ``A / max(B, eps)``.

    The floor keeps multiplicative updates finite when a denominator
    collapses to zero.
    """
    if not eps > 0:
        raise ValueError("eps must be positive")
    A = as_matrix(A, "A")
    B = as_matrix(B, "B")
    _same_shape(A, B, "safe_divide")
    return A / np.maximum(B, eps)


def matmul(A, B):
    """Matrix product ``AB``."""
    A = as_matrix(A, "A")
    B = as_matrix(B, "B")
    if A.shape[1] != B.shape[0]:
        raise DimensionError(
            f"matmul: inner dimensions differ {A.shape} x {B.shape}")
    return A @ B


def frobenius_sq(A):
    """Squared Frobenius norm ``sum_ij A_ij**2``."""
    A = as_matrix(A, "A")
    return float(np.einsum("ij,ij->", A, A))
