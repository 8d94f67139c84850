"""Experiment protocols: gamma sweeps, cluster-count sweeps, the unmixing
demo, and CSV export of results.

Every run derives its seed from the master seed and its (k, repeat) cell,
so reruns with the same configuration write byte-identical files.
"""

import csv
import logging
import os
from dataclasses import dataclass, field, fields, replace
from typing import List, Optional

import numpy as np

from . import data as dp
from .clustering import accuracy, kmeans, nmi
from .errors import ConfigurationError
from .factorization import FactorModel, run_factorization
from .objectives import Family, ObjectiveSpec

log = logging.getLogger(__name__)

DEFAULT_GAMMA_GRID = tuple(10.0 ** i for i in range(-8, 9))
RUN_HEADER = ("method", "gamma", "k", "seed", "acc", "nmi", "final_cost")
AGG_HEADER = ("method", "gamma", "k", "runs", "acc_mean", "nmi_mean",
              "final_cost_mean", "acc_best", "nmi_best")


@dataclass
class ExperimentConfig:
    """Declarative description of an experiment.

    ``dataset`` is either a CSV path or ``synthetic`` (see
    :func:`resolve_dataset`). ``k`` overrides the reduced dimension, which
    otherwise equals the cluster count.
    """

    dataset: str = "synthetic"
    labels: Optional[str] = None
    objective: str = "weighted_frobenius"
    gamma: float = 1.0
    alpha: float = 2.0
    gamma_grid: List[float] = field(default_factory=lambda: list(DEFAULT_GAMMA_GRID))
    cluster_counts: List[int] = field(default_factory=lambda: list(range(2, 11)))
    repeats: int = 10
    iters: int = 300
    seed: int = 0
    restarts: int = 10
    k: Optional[int] = None
    normalize: bool = True
    output_dir: str = "results"
    # synthetic generator
    classes: int = 5
    points_per_class: int = 40
    attributes: int = 100
    corrupt: float = 0.15
    # unmixing demo
    length: int = 1000
    corrupt_fraction: float = 0.2
    demo_gamma: float = 0.03

    def __post_init__(self):
        if self.repeats < 1:
            raise ConfigurationError("repeats must be >= 1")
        if self.iters < 1:
            raise ConfigurationError("iters must be >= 1")
        if not self.gamma_grid:
            raise ConfigurationError("gamma_grid must not be empty")
        if any(not g > 0 for g in self.gamma_grid):
            raise ConfigurationError("gamma_grid values must be positive")
        try:
            Family(self.objective)
        except ValueError:
            raise ConfigurationError(
                f"unknown objective {self.objective!r}; choose from "
                f"{[f.value for f in Family]}") from None

    def objective_spec(self, gamma=None):
        fam = Family(self.objective)
        g = self.gamma if gamma is None else gamma
        if fam is Family.WEIGHTED_ALPHA:
            return ObjectiveSpec(fam, gamma=g, alpha=self.alpha)
        if fam in (Family.WEIGHTED_FROBENIUS, Family.WEIGHTED_KL):
            return ObjectiveSpec(fam, gamma=g)
        return ObjectiveSpec(fam)


def _parse_bool(s):
    v = s.strip().lower()
    if v in ("1", "true", "yes", "on"):
        return True
    if v in ("0", "false", "no", "off"):
        return False
    raise ConfigurationError(f"not a boolean: {s!r}")


def _parse_int_list(s):
    out = []
    for part in s.split(","):
        part = part.strip()
        if ".." in part:
            lo, hi = part.split("..")
            out.extend(range(int(lo), int(hi) + 1))
        elif part:
            out.append(int(part))
    return out


def _coerce(name, value):
    if name in ("gamma_grid",):
        return [float(v) for v in value.split(",") if v.strip()]
    if name == "cluster_counts":
        return _parse_int_list(value)
    if name == "normalize":
        return _parse_bool(value)
    if name in ("labels", "k"):
        if value.strip().lower() in ("", "none"):
            return None
        return int(value) if name == "k" else value.strip()
    default = ExperimentConfig.__dataclass_fields__[name].default
    if isinstance(default, bool):
        return _parse_bool(value)
    if isinstance(default, int):
        return int(value)
    if isinstance(default, float):
        return float(value)
    return value.strip()


def parse_config(text, base=None):
    """Parse ``key = value`` lines into an :class:`ExperimentConfig`.

    Blank lines and ``#`` comments are ignored. Lists are comma separated;
    integer lists also accept ranges like ``2..10``. Unknown keys raise
    :class:`ConfigurationError`.
    """
    known = {f.name for f in fields(ExperimentConfig)}
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigurationError(f"line {lineno}: expected key = value")
        key, value = (p.strip() for p in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in known:
            raise ConfigurationError(f"line {lineno}: unknown key {key!r}")
        try:
            values[key] = _coerce(key, value)
        except ValueError as exc:
            raise ConfigurationError(f"line {lineno}: {exc}") from None
    return replace(base, **values) if base is not None else ExperimentConfig(**values)


def load_config(path):
    with open(path) as fh:
        return parse_config(fh.read())


def derive_seed(master, *cell):
    """Stable 32-bit seed for one experimental cell."""
    ss = np.random.SeedSequence([int(master) & 0xFFFFFFFF,
                                 *[int(c) & 0xFFFFFFFF for c in cell]])
    return int(ss.generate_state(1)[0])


def resolve_dataset(config):
    """Load the configured dataset, or generate the synthetic benchmark."""
    if config.dataset == "synthetic":
        return dp.gen_clustered_synthetic(
            config.classes, config.points_per_class, config.attributes,
            config.corrupt, config.seed)
    if config.labels is None:
        raise ConfigurationError("a labels file is required for clustering experiments")
    ds = dp.load_dataset(config.dataset, config.labels)
    return ds


# --------------------------------------------------------------------------
# reports


@dataclass(frozen=True)
class RunRecord:
    method: str
    gamma: Optional[float]
    k: int
    seed: int
    acc: float
    nmi: float
    final_cost: float


@dataclass
class MetricReport:
    runs: List[RunRecord] = field(default_factory=list)
    # per-k gamma picked for the aggregate table; None keeps every gamma
    selected_gamma: Optional[dict] = None

    def add(self, rec):
        self.runs.append(rec)

    def groups(self):
        out = {}
        for r in self.runs:
            out.setdefault((r.method, r.gamma, r.k), []).append(r)
        return out

    def aggregates(self):
        """Mean and best ACC/NMI per (method, gamma, k), in first-seen order."""
        rows = []
        for (method, gamma, k), recs in self.groups().items():
            if (self.selected_gamma is not None and gamma is not None
                    and self.selected_gamma.get(k) != gamma):
                continue
            acc = [r.acc for r in recs]
            nm = [r.nmi for r in recs]
            rows.append({
                "method": method, "gamma": gamma, "k": k, "runs": len(recs),
                "acc_mean": float(np.mean(acc)), "nmi_mean": float(np.mean(nm)),
                "final_cost_mean": float(np.mean([r.final_cost for r in recs])),
                "acc_best": max(acc), "nmi_best": max(nm),
            })
        return rows

    def best_gamma(self, k=None, method="ewnmf"):
        """Grid value with the highest mean ACC (mean NMI breaks ties)."""
        best = None
        for (m, gamma, kk), recs in self.groups().items():
            if m != method or gamma is None or (k is not None and kk != k):
                continue
            score = (np.mean([r.acc for r in recs]), np.mean([r.nmi for r in recs]))
            if best is None or score > best[0]:
                best = (score, gamma)
        return None if best is None else best[1]

    def mean(self, method, metric="acc", gamma=None, k=None):
        vals = [getattr(r, metric) for r in self.runs
                if r.method == method and (gamma is None or r.gamma == gamma)
                and (k is None or r.k == k)]
        return float(np.mean(vals))


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def write_report(report, output_dir, prefix=""):
    """Write ``runs.csv`` and ``aggregate.csv``; returns their paths."""
    os.makedirs(output_dir, exist_ok=True)
    runs_path = os.path.join(output_dir, f"{prefix}runs.csv")
    agg_path = os.path.join(output_dir, f"{prefix}aggregate.csv")
    with open(runs_path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(RUN_HEADER)
        for r in report.runs:
            w.writerow([_fmt(getattr(r, h)) for h in RUN_HEADER])
    with open(agg_path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(AGG_HEADER)
        for row in report.aggregates():
            w.writerow([_fmt(row[h]) for h in AGG_HEADER])
    return runs_path, agg_path


# --------------------------------------------------------------------------
# exports


def export_cost_trace(model, path):
    """Headerless ``iteration,cost`` CSV, one row per recorded iteration."""
    if not model.cost_trace:
        raise ConfigurationError("model has an empty cost trace")
    with open(path, "w") as fh:
        for i, c in enumerate(model.cost_trace, 1):
            fh.write(f"{i},{c!r}\n")
    return path


def normalize_basis(W):
    """Scale each column of ``W`` to sum to one; all-zero columns stay zero."""
    W = np.asarray(W, dtype=np.float64)
    s = W.sum(axis=0, keepdims=True)
    out = np.zeros_like(W)
    nz = s[0] > 0
    out[:, nz] = W[:, nz] / s[:, nz]
    return out


def export_basis(model, path):
    """Write ``W`` with unit column sums as headerless CSV."""
    W = model.W if isinstance(model, FactorModel) else model
    dp.save_matrix_csv(normalize_basis(W), path)
    return path


def export_weights(T, path):
    dp.save_matrix_csv(T, path)
    return path


# --------------------------------------------------------------------------
# protocols


def _score(X, labels, spec, K, seed, config):
    model = run_factorization(X, spec, K, config.iters, seed)
    clusters = kmeans(model.H, int(np.unique(labels).size), seed=seed,
                      restarts=config.restarts)
    return (accuracy(labels, clusters.assignments),
            nmi(labels, clusters.assignments), model.final_cost)


def _weighted_spec(config, gamma):
    spec = config.objective_spec(gamma)
    if spec.family is Family.FROBENIUS:
        raise ConfigurationError("the sweep needs a weighted objective")
    return spec


def _evaluate_cell(report, X, labels, k, seed, config, grid):
    K = config.k or k
    acc, nm, cost = _score(X, labels, ObjectiveSpec.frobenius(), K, seed, config)
    report.add(RunRecord("nmf", None, k, seed, acc, nm, cost))
    for gamma in grid:
        acc, nm, cost = _score(X, labels, _weighted_spec(config, gamma), K,
                               seed, config)
        report.add(RunRecord("ewnmf", gamma, k, seed, acc, nm, cost))


def run_gamma_sweep(config, dataset=None):
    """Clustering quality versus gamma on the full dataset.

    Every repeat draws one initialization seed shared by the plain NMF
    baseline and all grid points, so the comparison across gamma is paired.
    """
    ds = dataset if dataset is not None else resolve_dataset(config)
    labels = dp.canonicalize_labels(ds.labels)
    k = int(np.unique(labels).size)
    if k < 2:
        raise ConfigurationError("labels must contain at least two classes")
    X = dp.minmax_normalize_columns(ds.X) if config.normalize else ds.X
    report = MetricReport()
    for r in range(config.repeats):
        seed = derive_seed(config.seed, k, r)
        log.info("gamma sweep: repeat %d/%d", r + 1, config.repeats)
        _evaluate_cell(report, X, labels, k, seed, config, config.gamma_grid)
    return report


def run_cluster_count_experiment(config, dataset=None):
    """For each cluster count: sample classes, factorize, cluster, score.

    The aggregate table keeps, per cluster count, the grid value with the
    best mean ACC.
    """
    ds = dataset if dataset is not None else resolve_dataset(config)
    n_classes = ds.n_classes
    for k in config.cluster_counts:
        if k < 2 or k > n_classes:
            raise ConfigurationError(
                f"cluster count {k} outside [2, {n_classes}]")
    report = MetricReport(selected_gamma={})
    for k in config.cluster_counts:
        for r in range(config.repeats):
            seed = derive_seed(config.seed, k, r)
            sub = dp.sample_class_subset(ds, k, seed)
            X = dp.minmax_normalize_columns(sub.X) if config.normalize else sub.X
            log.info("cluster sweep: k=%d repeat %d/%d", k, r + 1, config.repeats)
            _evaluate_cell(report, X, sub.labels, k, seed, config,
                           config.gamma_grid)
        report.selected_gamma[k] = report.best_gamma(k)
    return report


@dataclass
class UnmixResult:
    demo: dp.MixtureDemo
    model: FactorModel
    weights: np.ndarray  # (L, 2): column j holds the weights of mixed signal j
    corrupted_median: float
    clean_median: float

    @property
    def ratio(self):
        if self.clean_median == 0:
            return float("inf")
        return self.corrupted_median / self.clean_median


def run_unmix_demo(config, output_dir=None):
    """Weight recovery on two mixed signals, the first partly destroyed.

    Each mixed signal is treated as one data point whose attributes are its
    time samples, so ``X`` is ``L x 2`` and each column of ``T`` is a
    distribution over time. With two data points the rank must be one.
    The report compares the median weight of the first signal over the
    destroyed segment with its median over the rest; with no corruption the
    first 20% of samples stand in for the segment.
    """
    demo = dp.gen_mixture_demo(config.length, config.corrupt_fraction, config.seed)
    X = demo.mixed.T
    if config.normalize:
        X = dp.minmax_normalize_columns(X)
    K = config.k or 1
    model = run_factorization(X, ObjectiveSpec.weighted_frobenius(config.demo_gamma),
                              K, config.iters, config.seed)
    n_bad = len(demo.corrupted_range) or int(np.ceil(0.2 * config.length))
    w = model.T[:, 0]
    result = UnmixResult(demo, model, model.T, float(np.median(w[:n_bad])),
                         float(np.median(w[n_bad:])))
    if output_dir is not None:
        os.makedirs(output_dir, exist_ok=True)
        export_weights(model.T, os.path.join(output_dir, "weights.csv"))
        dp.save_matrix_csv(demo.sources.T, os.path.join(output_dir, "sources.csv"))
        dp.save_matrix_csv(demo.mixed.T, os.path.join(output_dir, "mixed.csv"))
        export_cost_trace(model, os.path.join(output_dir, "trace.csv"))
        with open(os.path.join(output_dir, "unmix_report.csv"), "w") as fh:
            fh.write("seed,corrupted_samples,corrupted_median,clean_median,ratio\n")
            fh.write(f"{config.seed},{len(demo.corrupted_range)},"
                     f"{result.corrupted_median!r},{result.clean_median!r},"
                     f"{result.ratio!r}\n")
    return result
