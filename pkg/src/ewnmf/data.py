"""Data ingestion, preprocessing and synthetic generators.

Data matrices hold one data point per column; rows are attributes.
"""

import csv
import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, DomainError, ParseError
from .matrix_core import as_matrix


@dataclass
class LabeledDataset:
    X: np.ndarray
    labels: np.ndarray
    name: str = "dataset"

    def __post_init__(self):
        self.X = as_matrix(self.X, "X")
        self.labels = np.asarray(self.labels)
        if self.labels.ndim != 1 or self.labels.size != self.X.shape[1]:
            raise ConfigurationError(
                f"{self.labels.size} labels for {self.X.shape[1]} columns")

    @property
    def n_classes(self):
        return int(np.unique(self.labels).size)


@dataclass
class MixtureDemo:
    sources: np.ndarray
    mixing: np.ndarray
    mixed: np.ndarray
    corrupted_range: range

    @property
    def clean_mixed(self):
        return self.mixing @ self.sources


def canonicalize_labels(labels):
    """Map arbitrary label values to ``0..C-1`` in sorted order of the values."""
    _, inv = np.unique(np.asarray(labels), return_inverse=True)
    return inv.astype(np.int64)


# --------------------------------------------------------------------------
# files


def load_matrix_csv(path):
    """Read a headerless numeric CSV (rows = attributes, columns = points)."""
    rows = []
    with open(path, newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), 1):
            if not row or all(not c.strip() for c in row):
                continue
            try:
                rows.append([float(c) for c in row])
            except ValueError as exc:
                raise ParseError(f"{path}:{lineno}: {exc}") from None
    if not rows:
        raise ParseError(f"{path}: no data")
    width = len(rows[0])
    for lineno, r in enumerate(rows, 1):
        if len(r) != width:
            raise ParseError(
                f"{path}: row {lineno} has {len(r)} fields, expected {width}")
    X = np.array(rows, dtype=np.float64)
    if not np.all(np.isfinite(X)):
        raise ParseError(f"{path}: non-finite entries")
    if np.any(X < 0):
        raise DomainError(f"{path}: negative entries are not allowed")
    return X


def load_labels(path):
    """One integer label per line; line ``i`` labels column ``i``."""
    out = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            s = line.strip()
            if not s:
                continue
            try:
                out.append(int(s))
            except ValueError:
                raise ParseError(f"{path}:{lineno}: not an integer: {s!r}") from None
    return np.array(out, dtype=np.int64)


def save_matrix_csv(A, path):
    """Write a matrix as headerless CSV using round-trip float formatting."""
    A = np.atleast_2d(np.asarray(A, dtype=np.float64))
    with open(path, "w", newline="") as fh:
        for row in A:
            fh.write(",".join(repr(float(v)) for v in row))
            fh.write("\n")


def save_labels(labels, path):
    with open(path, "w") as fh:
        for v in np.asarray(labels):
            fh.write(f"{int(v)}\n")


def load_dataset(matrix_path, labels_path=None, name=None):
    X = load_matrix_csv(matrix_path)
    labels = (load_labels(labels_path) if labels_path is not None
              else np.zeros(X.shape[1], dtype=np.int64))
    return LabeledDataset(X, labels, name or str(matrix_path))


# --------------------------------------------------------------------------
# preprocessing


def minmax_normalize_columns(X):
    """Rescale every column to span [0, 1]; constant columns become zero."""
    X = as_matrix(X, "X")
    lo = X.min(axis=0, keepdims=True)
    span = X.max(axis=0, keepdims=True) - lo
    out = np.zeros_like(X)
    ok = span[0] > 0
    out[:, ok] = (X[:, ok] - lo[:, ok]) / span[:, ok]
    return out


def init_factors(M, N, K, seed):
    """Draw ``W`` (M x K) and ``H`` (K x N) i.i.d. uniform on [0.1, 1.1]."""
    if K < 1:
        raise ConfigurationError("K must be >= 1")
    rng = np.random.default_rng(seed)
    W = rng.uniform(0.1, 1.1, size=(M, K))
    H = rng.uniform(0.1, 1.1, size=(K, N))
    return W, H


# --------------------------------------------------------------------------
# generators


def gen_mixture_demo(L=1000, corrupt_fraction=0.2, seed=0):
    """Two nonnegative sources mixed by a random 2 x 2 matrix.

    The sources are rectified sinusoids ``|sin|`` at 5 and 12 cycles over
    the record, with random phases; the mixing matrix is uniform on [0, 1].
    The leading ``ceil(corrupt_fraction * L)`` samples of the first mixed
    signal are overwritten with noise drawn uniformly on ``[m, 2m]`` where
    ``m`` is the peak of that clean mixed signal. ``corrupt_fraction=0``
    gives the uncorrupted control.
    """
    if L < 10:
        raise ConfigurationError("L must be >= 10")
    if not 0 <= corrupt_fraction < 0.5:
        raise ConfigurationError("corrupt_fraction must lie in [0, 0.5)")
    rng = np.random.default_rng(seed)
    t = np.linspace(0.0, 1.0, L)
    phase = rng.uniform(0, 2 * np.pi, size=2)
    sources = np.abs(np.sin(2 * np.pi * np.array([[5.0], [12.0]]) * t
                            + phase[:, None]))
    mixing = rng.uniform(0.0, 1.0, size=(2, 2))
    mixed = mixing @ sources
    n_bad = math.ceil(corrupt_fraction * L)
    if n_bad:
        peak = mixed[0].max()
        mixed[0, :n_bad] = rng.uniform(peak, 2 * peak, size=n_bad)
    return MixtureDemo(sources=sources, mixing=mixing, mixed=mixed,
                       corrupted_range=range(0, n_bad))


def gen_clustered_synthetic(k=5, points_per_class=40, M=100,
                            corrupt_attr_fraction=0.15, seed=0, *,
                            noise=0.1, width=None, occluder=1.0):
    """Nonnegative clustered data with occluding patches.

    Each class prototype is a sum of three Gaussian bumps along the
    attribute axis (peak normalized to 1). A point is its prototype times a
    random intensity in [0.7, 1.3] plus Gaussian noise, rectified at zero.
    Each point then gets one contiguous run of
    ``round(corrupt_attr_fraction * M)`` attributes, at a random offset,
    overwritten with values near ``occluder`` -- the analogue of a hat
    covering part of a face image. Columns are grouped by class.
    """
    if k < 2:
        raise ConfigurationError("k must be >= 2")
    if M <= k:
        raise ConfigurationError("M must exceed k")
    if not 0 <= corrupt_attr_fraction < 1:
        raise ConfigurationError("corrupt_attr_fraction must lie in [0, 1)")
    rng = np.random.default_rng(seed)
    width = width if width is not None else M / 25.0
    grid = np.arange(M)[:, None]
    centers = rng.uniform(0, M, size=(k, 3))
    protos = np.zeros((M, k))
    for c in range(k):
        amp = rng.uniform(0.5, 1.0, size=3)
        protos[:, c] = (amp * np.exp(-0.5 * ((grid - centers[c]) / width) ** 2)).sum(axis=1)
    protos /= protos.max(axis=0, keepdims=True)

    labels = np.repeat(np.arange(k), points_per_class)
    n = labels.size
    X = protos[:, labels] * rng.uniform(0.7, 1.3, size=n)
    X = np.maximum(X + noise * rng.standard_normal((M, n)), 0.0)

    run = int(round(corrupt_attr_fraction * M))
    if run:
        for j in range(n):
            start = rng.integers(0, M - run + 1)
            X[start:start + run, j] = rng.uniform(0.8, 1.0, size=run) * occluder
    return LabeledDataset(X, labels, name=f"synthetic-k{k}")


def sample_class_subset(ds, k, seed):
    """Keep the columns of ``k`` uniformly drawn classes, relabeled ``0..k-1``."""
    classes = np.unique(ds.labels)
    if k < 1 or k > classes.size:
        raise ConfigurationError(
            f"cannot select {k} classes from {classes.size}")
    rng = np.random.default_rng(seed)
    chosen = rng.choice(classes, size=k, replace=False)
    mask = np.isin(ds.labels, chosen)
    return LabeledDataset(ds.X[:, mask], canonicalize_labels(ds.labels[mask]),
                          name=f"{ds.name}[{k} classes]")
