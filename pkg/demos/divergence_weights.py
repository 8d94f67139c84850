"""Weight updates for KL and alpha-divergence residuals.

Only the weight step and the cost are available for these objectives; the
factors here come from a squared-error EWNMF run.

    python demos/divergence_weights.py
"""

import numpy as np

from ewnmf.factorization import ewnmf, update_T_alpha, update_T_entropy, update_T_kl
from ewnmf.objectives import ObjectiveSpec, evaluate

rng = np.random.default_rng(0)
X = rng.uniform(0.1, 1.0, (6, 4))
X[0, 0] = 5.0  # one gross outlier
m = ewnmf(X, 2, gamma=1.0, iters=200)
WH = m.W @ m.H

for name, T in (("squared", update_T_entropy((X - WH) ** 2, 1.0)),
                ("kl", update_T_kl(X, WH, 1.0)),
                ("alpha=0.5", update_T_alpha(X, WH, 0.5, 1.0)),
                ("alpha=2", update_T_alpha(X, WH, 2.0, 1.0))):
    print(f"{name:9s} weight on the outlier {T[0, 0]:.3f} (uniform {1 / X.shape[0]:.3f})")

# alpha -> 1 recovers KL
gap = np.abs(update_T_alpha(X, WH, 1.001, 1.0) - update_T_kl(X, WH, 1.0)).max()
print(f"alpha=1.001 vs KL: max difference {gap:.1e}")
T = update_T_kl(X, WH, 1.0)
print(f"KL objective at its optimal weights: "
      f"{evaluate(ObjectiveSpec.weighted_kl(1.0), X, m.W, m.H, T):.4f}")
