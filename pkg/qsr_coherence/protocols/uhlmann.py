# Copyright 2026 (c) qsr-coherence contributors. All rights reserved. Issued under the Apache 2.0 License.

#
# Uhlmann isometry between two purifications of states on a common register set A.
#

import logging
from typing import List, NamedTuple, Tuple

import numpy as np

from qsr_coherence.qmat.registers import Isometry, Labels, StateVector, as_label_list

logger = logging.getLogger(__name__)


class UhlmannResult(NamedTuple):
    isometry: Isometry
    overlap: float
    theta: StateVector


def _as_matrix(psi: StateVector, common: List[str]) -> Tuple[np.ndarray, List[str]]:
    rest = [label for label in psi.system.labels if label not in common]
    d_a = psi.system.dim_of(common) if common else 1
    return psi.reorder(common + rest).amplitudes.reshape(d_a, -1), rest


def uhlmann_isometry(global_rho: StateVector, global_sigma: StateVector, common_labels: Labels) -> UhlmannResult:
    """
    Isometry V: C -> B maximizing |<theta|rho>| with |theta> = (I (x) V)|sigma>.

    Writing |rho> = sum M_rho[a, b] |a>|b> and |sigma> = sum M_sigma[a, c] |a>|c>, the overlap is
    Tr(conj(V) Y) with Y = M_sigma^dagger M_rho. From the SVD Y = U S W, conj(V) = W^dagger U^dagger
    gives Tr(S) = F(rho_A, sigma_A).

    Args:
        global_rho: pure state on A and B
        global_sigma: pure state on A and C
        common_labels: the labels of A, present in both

    Returns: the isometry, the overlap it reaches and theta in the register order of global_rho
    """
    common = as_label_list(common_labels)
    if global_rho.system.ordered(common).dims != global_sigma.system.ordered(common).dims:
        raise ValueError(f"Common registers {common} differ between {global_rho.system} and {global_sigma.system}")
    m_rho, b_labels = _as_matrix(global_rho, common)
    m_sigma, c_labels = _as_matrix(global_sigma, common)
    d_b, d_c = m_rho.shape[1], m_sigma.shape[1]
    if d_c > d_b:
        raise ValueError(f"Uhlmann isometry needs dim(C) <= dim(B), got {d_c} > {d_b}")
    y = m_sigma.conj().T @ m_rho
    u, s, wh = np.linalg.svd(y, full_matrices=False)
    v = wh.T @ u.T
    in_system = global_sigma.system.ordered(c_labels)
    out_system = global_rho.system.ordered(b_labels)
    isometry = Isometry(in_system, out_system, v)
    theta_matrix = m_sigma @ v.T
    system = global_rho.system.ordered(common).concat(out_system)
    theta = StateVector(system, theta_matrix.reshape(-1)).reorder(global_rho.system.labels)
    overlap = float(np.sum(s))
    logger.debug(f"Uhlmann overlap {overlap} over {len(s)} singular values")
    return UhlmannResult(isometry, min(overlap, 1.0), theta)
