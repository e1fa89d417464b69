# Copyright 2026 (c) qsr-coherence contributors. All rights reserved. Issued under the Apache 2.0 License.

#
# Second order expansions and the pruned upper bound on the smoothed max-relative entropy.
#

import logging
import math
from typing import Tuple

import numpy as np
from scipy.special import ndtri

from qsr_coherence.entropy.quantities import (EntropicValue, max_relative_entropy, relative_entropy,
                                              relative_entropy_variance)
from qsr_coherence.qmat.matrix_functions import RANK_CUTOFF, hermitian_eig
from qsr_coherence.qmat.registers import DensityOperator

logger = logging.getLogger(__name__)


def gaussian_quantile(eps: float) -> float:
    """
    Phi^{-1}(eps) for the standard normal distribution.
    """
    if not 0.0 < eps < 1.0:
        raise ValueError(f"eps must lie in (0, 1), got {eps}")
    return float(ndtri(eps))


def gaussian_quantile_bound(eps: float) -> float:
    """
    2 sqrt(ln(1/(2 eps))), an upper bound on |Phi^{-1}(eps)| for eps <= 1/2. The logarithm
    is natural: the bound follows from the tail estimate Phi(-x) <= exp(-x^2/2)/2.
    """
    if not 0.0 < eps <= 0.5:
        raise ValueError(f"eps must lie in (0, 1/2], got {eps}")
    return 2.0 * math.sqrt(math.log(1.0 / (2.0 * eps)))


def second_order_rate(rho: DensityOperator, sigma: DensityOperator, n: int, eps: float) -> float:
    """
    n D(rho||sigma) + sqrt(n V(rho||sigma)) Phi^{-1}(eps), the expansion of D_H^eps and of the
    smoothed D_max on n copies up to O(log n).
    """
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    d = relative_entropy(rho, sigma)
    if not d.finite:
        return math.inf
    v = relative_entropy_variance(rho, sigma).value
    return n * d.value + math.sqrt(n * v) * gaussian_quantile(eps)


def pruned_max_relative_entropy(rho: DensityOperator, sigma: DensityOperator,
                                eps: float) -> Tuple[EntropicValue, float]:
    """
    Upper bound on min D_max(rho'||sigma) over rho' within purified distance eps of rho.

    Removing eigenvectors of rho with total weight w and renormalizing gives a state at
    purified distance sqrt(w). Every prefix of the spectrum (smallest eigenvalues first) with
    w <= eps^2 is tried. This is not the optimal smoothing.

    Returns: the smallest D_max found and the spectral weight removed to reach it
    """
    if not 0.0 <= eps < 1.0:
        raise ValueError(f"eps must lie in [0, 1), got {eps}")
    best = max_relative_entropy(rho, sigma)
    best_weight = 0.0
    vals, vecs = hermitian_eig(rho.matrix)
    vals = np.clip(vals, 0.0, None)
    removed = 0.0
    for k in range(len(vals) - 1):
        removed += vals[k]
        if removed > eps ** 2:
            break
        if vals[k] <= RANK_CUTOFF:
            continue
        kept = vecs[:, k + 1:]
        matrix = (kept * vals[k + 1:]) @ kept.conj().T / (1.0 - removed)
        pruned = DensityOperator(rho.system, matrix, check=False)
        value = max_relative_entropy(pruned, sigma)
        if value.value < best.value:
            best, best_weight = value, removed
    if best_weight > 0:
        logger.debug(f"Pruning weight {best_weight} lowers D_max to {best.value}")
    return best, float(best_weight)
