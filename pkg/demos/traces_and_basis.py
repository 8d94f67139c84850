"""Cost traces and normalized basis vectors.

Writes ``trace_nmf.csv``, ``trace_ewnmf.csv`` and ``basis.csv`` to the
working directory.

    python demos/traces_and_basis.py
"""

import numpy as np

from ewnmf.data import gen_clustered_synthetic, minmax_normalize_columns
from ewnmf.experiments import export_basis, export_cost_trace
from ewnmf.factorization import ewnmf, nmf

ds = gen_clustered_synthetic(seed=3)
X = minmax_normalize_columns(ds.X)

plain = nmf(X, 5, iters=300, seed=0)
weighted = ewnmf(X, 5, gamma=0.1, iters=300, seed=0)
export_cost_trace(plain, "trace_nmf.csv")
export_cost_trace(weighted, "trace_ewnmf.csv")
export_basis(weighted, "basis.csv")

for name, m in (("nmf", plain), ("ewnmf", weighted)):
    c = np.array(m.cost_trace)
    print(f"{name:5s} cost {m.initial_cost:.4g} -> {c[-1]:.4g}, "
          f"largest single-step rise {max(np.diff(c).max(), 0):.1e}")

# each column of T is a distribution over attributes; peaked columns
# mean the point is explained by few attributes
T = weighted.T
eff = np.exp(-(T * np.log(np.where(T > 0, T, 1))).sum(0))
print(f"effective attributes per point: median {np.median(eff):.1f} of {T.shape[0]}")
