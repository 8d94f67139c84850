"""Two mixed signals, the first one partly destroyed.

Entropy weights should pull weight away from the destroyed samples of the
first signal. The median weight over the destroyed segment is compared
with the median over the rest of the same signal.

    python demos/unmixing.py
"""

import numpy as np

from ewnmf.experiments import ExperimentConfig, run_unmix_demo

for seed in range(3):
    res = run_unmix_demo(ExperimentConfig(seed=seed))
    bad = len(res.demo.corrupted_range)
    print(f"seed {seed}: {bad} destroyed samples")
    print(f"  signal 1 median weight  destroyed {res.corrupted_median:.2e}"
          f"  clean {res.clean_median:.2e}  ratio {res.ratio:.3g}")

# control: nothing destroyed, so the ratio should sit near one
ctl = run_unmix_demo(ExperimentConfig(seed=0, corrupt_fraction=0.0))
print(f"no corruption: ratio {ctl.ratio:.3g}")

# a larger gamma flattens the weights toward 1/L and loses the contrast
soft = run_unmix_demo(ExperimentConfig(seed=0, demo_gamma=10.0))
print(f"gamma=10: ratio {soft.ratio:.3g}, weights within "
      f"{np.ptp(soft.weights[:, 0]):.2e} of each other")
