# Copyright 2026 (c) qsr-coherence contributors. All rights reserved. Issued under the Apache 2.0 License.

#
# Convex split: tau_{P Q_1..Q_n} = (1/n) sum_j rho_{P Q_j} (x) sigma_{Q_1} (x) .. (no Q_j) .. (x) sigma_{Q_n},
# compared with rho_P (x) sigma^{(x)n}. With n = ceil(2^k / delta) and k = D_max(rho_PQ || rho_P (x) sigma_Q),
# F^2 >= 1 - (sqrt(delta) + 2 eps)^2. k is the unsmoothed D_max, which is at least the smoothed
# one, so the prescribed n is larger and the bound only easier to meet.
#

import logging
import math
from typing import List, NamedTuple, Optional, Tuple

import numpy as np

from qsr_coherence.entropy.hypothesis_testing import type_classes, type_log_probabilities
from qsr_coherence.entropy.quantities import max_relative_entropy
from qsr_coherence.errors import BoundViolationError, SupportViolationError
from qsr_coherence.protocols.budget import check_density
from qsr_coherence.qmat.matrix_functions import hermitian_eig, kernel_leakage, off_diagonal_norm
from qsr_coherence.qmat.operations import fidelity, partial_trace, reorder, tensor
from qsr_coherence.qmat.registers import SUPPORT_TOL, DensityOperator, RegisterSystem

logger = logging.getLogger(__name__)

BOUND_SLACK = 1e-8
CLASSICAL_TOL = 1e-12
CEIL_SLACK = 1e-9


class ConvexSplitCheck(NamedTuple):
    n: int
    fidelity_squared: float
    bound: float
    k: float
    classical: bool


def copy_label(label: str, j: int) -> str:
    return f"{label}{j}"


def _split_labels(rho_pq: DensityOperator, sigma_q: DensityOperator) -> Tuple[List[str], List[str]]:
    q_labels = sigma_q.system.labels
    for label in q_labels:
        rho_pq.system.index(label)
    if rho_pq.system.ordered(q_labels).dims != sigma_q.system.dims:
        raise ValueError(f"sigma_Q {sigma_q.system} does not match the Q registers of {rho_pq.system}")
    p_labels = [label for label in rho_pq.system.labels if label not in q_labels]
    return p_labels, q_labels


def _check_support(rho_pq: DensityOperator, sigma_q: DensityOperator, q_labels: List[str]):
    rho_q = reorder(partial_trace(rho_pq, q_labels), q_labels)
    leak = kernel_leakage(rho_q.matrix, sigma_q.matrix)
    if leak > SUPPORT_TOL:
        raise SupportViolationError(f"supp(rho_Q) is not inside supp(sigma_Q) (leakage {leak})")


def convex_split_system(rho_pq: DensityOperator, sigma_q: DensityOperator, n: int) -> RegisterSystem:
    p_labels, q_labels = _split_labels(rho_pq, sigma_q)
    registers = list(rho_pq.system.ordered(p_labels)) if p_labels else []
    for j in range(1, n + 1):
        registers += [(copy_label(label, j), dim) for label, dim in sigma_q.system]
    return RegisterSystem(registers)


def convex_split_state(rho_pq: DensityOperator, sigma_q: DensityOperator, n: int,
                       budget: Optional[int] = None) -> DensityOperator:
    """
    The convex split mixture on P, Q_1..Q_n. Copy j of a Q register labeled X is labeled Xj.
    Terms are accumulated one at a time.
    """
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    p_labels, q_labels = _split_labels(rho_pq, sigma_q)
    _check_support(rho_pq, sigma_q, q_labels)
    d_p = rho_pq.system.dim_of(p_labels) if p_labels else 1
    d_q = sigma_q.dim
    check_density("convex split state", d_p * d_q ** n, budget, hint=f"n={n}")

    pair = reorder(rho_pq, p_labels + q_labels).matrix
    rest = np.ones((1, 1), dtype=complex)
    for _ in range(n - 1):
        rest = np.kron(rest, sigma_q.matrix)
    term_dims = [d_p] + [d_q] * n
    total = np.zeros((d_p * d_q ** n, d_p * d_q ** n), dtype=complex)
    base = np.kron(pair, rest).reshape(term_dims + term_dims)
    for j in range(1, n + 1):
        # term axes: P, Q_j, then the other copies in increasing order
        others = [i for i in range(1, n + 1) if i != j]
        perm = [0] + [1 if i == j else 2 + others.index(i) for i in range(1, n + 1)]
        m = n + 1
        total += base.transpose(perm + [m + p for p in perm]).reshape(total.shape)
    return DensityOperator(convex_split_system(rho_pq, sigma_q, n), total / n, check=False)


def convex_split_reference(rho_pq: DensityOperator, sigma_q: DensityOperator, n: int) -> DensityOperator:
    """
    rho_P (x) sigma^{(x)n} on the registers of convex_split_state.
    """
    p_labels, _ = _split_labels(rho_pq, sigma_q)
    matrix = partial_trace(rho_pq, p_labels).matrix if p_labels else np.ones((1, 1))
    for _ in range(n):
        matrix = np.kron(matrix, sigma_q.matrix)
    return DensityOperator(convex_split_system(rho_pq, sigma_q, n), matrix, check=False)


def _classical_form(pair: np.ndarray, d_p: int, sigma: np.ndarray) -> Optional[Tuple[np.ndarray, np.ndarray]]:
    """
    Joint distribution p(x, y) and sigma's spectrum s(y) when rho_PQ and rho_P (x) sigma_Q are
    diagonal in one product basis (the computational one, or the eigenbases of rho_P and sigma_Q).
    """
    d_q = sigma.shape[0]
    rho_p = np.einsum('ijkj->ik', pair.reshape(d_p, d_q, d_p, d_q))
    _, u_p = hermitian_eig(rho_p)
    _, u_q = hermitian_eig(sigma)
    for basis_p, basis_q in [(np.eye(d_p), np.eye(d_q)), (u_p, u_q)]:
        basis = np.kron(basis_p, basis_q)
        rotated = basis.conj().T @ pair @ basis
        s_rotated = basis_q.conj().T @ sigma @ basis_q
        if off_diagonal_norm(rotated) <= CLASSICAL_TOL and off_diagonal_norm(s_rotated) <= CLASSICAL_TOL:
            joint = np.clip(np.real(np.diag(rotated)), 0.0, None).reshape(d_p, d_q)
            return joint, np.clip(np.real(np.diag(s_rotated)), 0.0, None)
    return None


def _classical_fidelity(joint: np.ndarray, s: np.ndarray, n: int) -> float:
    """
    F = sum_x p(x) sum_{y^n} prod s(y_i) sqrt((1/n) sum_j r(x, y_j)) with r = p(y|x)/s(y).
    The summand depends on y^n only through its type.
    """
    d_q = s.shape[0]
    types = type_classes(n, d_q)
    with np.errstate(invalid='ignore'):
        weights = np.exp(type_log_probabilities(types, s))
    weights = np.nan_to_num(weights)
    total = 0.0
    for row in joint:
        p_x = float(np.sum(row))
        if p_x <= 0.0:
            continue
        r = np.where(s > 0.0, row / np.where(s > 0.0, s, 1.0), 0.0) / p_x
        mean_r = types @ r / n
        total += p_x * float(np.sum(weights * np.sqrt(np.clip(mean_r, 0.0, None))))
    return min(total, 1.0)


def convex_split_fidelity(rho_pq: DensityOperator, sigma_q: DensityOperator, n: int,
                          budget: Optional[int] = None) -> Tuple[float, bool]:
    """
    F(tau_{PQ_1..Q_n}, rho_P (x) sigma^{(x)n}).

    Commuting inputs are evaluated on type classes, without building tau; other inputs are
    built densely and are subject to the density budget.

    Returns: the fidelity and whether the classical path was taken
    """
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    p_labels, q_labels = _split_labels(rho_pq, sigma_q)
    _check_support(rho_pq, sigma_q, q_labels)
    d_p = rho_pq.system.dim_of(p_labels) if p_labels else 1
    pair = reorder(rho_pq, p_labels + q_labels).matrix
    classical = _classical_form(pair, d_p, sigma_q.matrix)
    if classical is not None:
        return _classical_fidelity(classical[0], classical[1], n), True
    tau = convex_split_state(rho_pq, sigma_q, n, budget)
    return fidelity(tau, convex_split_reference(rho_pq, sigma_q, n)), False


def convex_split_k(rho_pq: DensityOperator, sigma_q: DensityOperator) -> float:
    """
    k = D_max(rho_PQ || rho_P (x) sigma_Q), unsmoothed.
    """
    p_labels, q_labels = _split_labels(rho_pq, sigma_q)
    _check_support(rho_pq, sigma_q, q_labels)
    pair = reorder(rho_pq, p_labels + q_labels)
    product = tensor(partial_trace(rho_pq, p_labels), sigma_q) if p_labels else sigma_q
    k = max_relative_entropy(pair, product)
    if not k.finite:
        raise SupportViolationError("D_max(rho_PQ || rho_P (x) sigma_Q) is infinite")
    return k.value


def prescribed_copies(k: float, delta: float) -> int:
    """
    n = ceil(2^k / delta), with a small slack so that exact powers are not pushed up by round-off.
    """
    if not 0.0 < delta < 1.0:
        raise ValueError(f"delta must lie in (0, 1), got {delta}")
    return max(1, int(math.ceil(2.0 ** k / delta - CEIL_SLACK)))


def convex_split_bound_check(rho_pq: DensityOperator, sigma_q: DensityOperator, eps: float = 0.0,
                             delta: float = 0.25, budget: Optional[int] = None) -> ConvexSplitCheck:
    """
    Sets n from the unsmoothed D_max, measures F^2 and asserts F^2 >= 1 - (sqrt(delta) + 2 eps)^2.

    Args:
        rho_pq: the joint state, Q registers named as in sigma_q
        sigma_q: the state replicated n times
        eps: smoothing parameter entering the bound (0 for the unsmoothed check)
        delta: the convex split accuracy
        budget: density budget for the dense path

    Returns: ConvexSplitCheck(n, F^2, bound, k, classical)
    """
    if eps < 0.0:
        raise ValueError(f"eps must be nonnegative, got {eps}")
    k = convex_split_k(rho_pq, sigma_q)
    n = prescribed_copies(k, delta)
    value, classical = convex_split_fidelity(rho_pq, sigma_q, n, budget)
    bound = 1.0 - (math.sqrt(delta) + 2.0 * eps) ** 2
    logger.debug(f"Convex split k={k}, n={n}, F^2={value ** 2}, bound={bound}")
    if value ** 2 < bound - BOUND_SLACK:
        raise BoundViolationError(f"Convex split F^2={value ** 2} below {bound} (n={n}, k={k}, delta={delta})")
    return ConvexSplitCheck(n, value ** 2, bound, k, classical)
