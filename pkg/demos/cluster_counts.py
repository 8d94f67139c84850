"""Accuracy as the number of clusters grows.

For each k a random subset of k classes is drawn, both methods run on it,
and EWNMF is reported at its best gamma for that k.

    python demos/cluster_counts.py
"""

from ewnmf.data import gen_clustered_synthetic
from ewnmf.experiments import ExperimentConfig, run_cluster_count_experiment

ds = gen_clustered_synthetic(k=8, points_per_class=20, M=80, seed=1)
cfg = ExperimentConfig(gamma_grid=[0.01, 0.1, 1.0], cluster_counts=[2, 4, 6, 8],
                       repeats=3, iters=150, restarts=5)
report = run_cluster_count_experiment(cfg, ds)

print(" k   NMF ACC   EWNMF ACC   gamma")
for k in cfg.cluster_counts:
    g = report.selected_gamma[k]
    print(f"{k:2d}   {report.mean('nmf', 'acc', k=k):.3f}     "
          f"{report.mean('ewnmf', 'acc', gamma=g, k=k):.3f}       {g:g}")
