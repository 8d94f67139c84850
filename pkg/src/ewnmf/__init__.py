"""Entropy-weighted nonnegative matrix factorization.

Each attribute of each data point carries a weight; the weights of a data
point form a probability distribution regularized by its entropy, so
attributes that the factorization cannot explain (occlusions, destroyed
samples) are discounted automatically.
"""

from .clustering import ClusteringResult, accuracy, kmeans, nmi
from .data import (LabeledDataset, MixtureDemo, gen_clustered_synthetic,
                   gen_mixture_demo, init_factors, load_labels, load_matrix_csv,
                   minmax_normalize_columns, sample_class_subset)
from .errors import (ConfigurationError, ConstraintError, DimensionError,
                     DomainError, EWNMFError, NumericalError, ParseError)
from .factorization import (FactorModel, Residuals, ewnmf, nmf,
                            run_factorization, update_H_nmf, update_H_weighted,
                            update_T_alpha, update_T_entropy, update_T_hard,
                            update_T_kl, update_W_nmf, update_W_weighted)
from .matrix_core import EPS, frobenius_sq, hadamard, matmul, safe_divide
from .objectives import (Family, ObjectiveSpec, cost_frobenius,
                         cost_weighted_alpha, cost_weighted_frobenius,
                         cost_weighted_kl)

__version__ = "0.1.0"
