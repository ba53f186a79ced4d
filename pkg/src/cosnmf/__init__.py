"""Co-separable nonnegative matrix factorization.

Select rows ``K1`` and columns ``K2`` of a nonnegative matrix so that
``M ~ P1 @ M[K1][:, K2] @ P2`` with nonnegative ``P1`` and ``P2``.
"""

from .cosfgm import (CharacterizationReport, CosSelection, CosSelectParams, cos_fgm,
                     cos_fgm_sweep, verify_characterizations)
from .docs import LabeledCorpus, scale_by_cluster_size, select_top_words
from .errors import (BalanceError, CosNMFError, DegenerateError, DimensionError,
                     InvalidInputError, InvalidWeightError, ParseError,
                     UnsupportedSizeError)
from .factors import CosFactors, ahals_nmf, compute_factors, nnls_active_set, nnls_hals
from .fgm import (FgmOutput, FgmParams, fgm_snmf, objective, gradient, omega_weights,
                  postprocess_diag, postprocess_spa, project_omega, project_omega_row)
from .matrix import (frobenius_norm, index_set, jacobi_svd, pinv_small, sinkhorn_balance,
                     spectral_norm_sq, submatrix)
from .metrics import (clustering_accuracy, cur_residual, hard_cluster, index_accuracy,
                      relative_approx_cosep, relative_approx_generic)
from .mmio import read_labels, read_mtx, write_labels, write_mtx
from .spa import SpaResult, spa, spa_columns, spa_plus, spa_rows
from .synth import SyntheticInstance, gen_cosep, noise_grid

__version__ = "0.1.0"
