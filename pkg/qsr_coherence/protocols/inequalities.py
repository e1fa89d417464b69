# Copyright 2026 (c) qsr-coherence contributors. All rights reserved. Issued under the Apache 2.0 License.

#
# Measurement inequalities the decoder analysis rests on, evaluated on concrete states.
# Each check returns both sides and raises BoundViolationError when lhs > rhs + slack.
#

import logging
from typing import NamedTuple, Sequence

import numpy as np

from qsr_coherence.errors import BoundViolationError
from qsr_coherence.qmat.matrix_functions import hermitian_eig
from qsr_coherence.qmat.operations import fidelity, purified_distance
from qsr_coherence.qmat.registers import TAU_HERM, TAU_PSD, DensityOperator

logger = logging.getLogger(__name__)

INEQUALITY_SLACK = 1e-9
ZERO_TRACE = 1e-14


class InequalityCheck(NamedTuple):
    lhs: float
    rhs: float


def _check_operator(operator, dim: int, name: str) -> np.ndarray:
    operator = np.asarray(operator, dtype=complex)
    if operator.shape != (dim, dim):
        raise ValueError(f"{name} has shape {operator.shape}, expected {(dim, dim)}")
    if np.max(np.abs(operator - operator.conj().T)) > TAU_HERM:
        raise ValueError(f"{name} is not Hermitian")
    return operator


def _check_projector(operator, dim: int, name: str) -> np.ndarray:
    operator = _check_operator(operator, dim, name)
    deviation = float(np.max(np.abs(operator @ operator - operator)))
    if deviation > TAU_HERM:
        raise ValueError(f"{name} is not a projector (|P^2 - P| = {deviation})")
    return operator


def _check_contraction(operator, dim: int, name: str) -> np.ndarray:
    operator = _check_operator(operator, dim, name)
    vals, _ = hermitian_eig(operator)
    if vals[0] < -TAU_PSD or vals[-1] > 1.0 + TAU_PSD:
        raise ValueError(f"{name} is not between 0 and I (spectrum {vals[0]}..{vals[-1]})")
    return operator


def _trace_with(operator: np.ndarray, rho: DensityOperator) -> float:
    return float(np.real(np.trace(operator @ rho.matrix)))


def _assert(name: str, check: InequalityCheck, slack: float) -> InequalityCheck:
    if check.lhs > check.rhs + slack:
        raise BoundViolationError(f"{name}: {check.lhs} > {check.rhs}")
    return check


def sequential_projector_bound_check(rho: DensityOperator, projectors: Sequence,
                                     slack: float = INEQUALITY_SLACK) -> InequalityCheck:
    """
    P(Q_k..Q_1 rho Q_1..Q_k / Tr(..), rho) <= (sum_i Tr(Pi_i rho))^{1/4} with Q_i = I - Pi_i.

    When the complements annihilate rho the left side is taken as 1.

    Args:
        rho: the state
        projectors: Pi_1..Pi_k, applied in that order
        slack: tolerance of the assertion

    Returns: InequalityCheck(lhs, rhs)
    """
    identity = np.eye(rho.dim)
    product = identity.astype(complex)
    rhs_sum = 0.0
    for i, pi in enumerate(projectors):
        pi = _check_projector(pi, rho.dim, f"Projector {i}")
        product = (identity - pi) @ product
        rhs_sum += _trace_with(pi, rho)
    rhs = max(rhs_sum, 0.0) ** 0.25
    post = product @ rho.matrix @ product.conj().T
    weight = float(np.real(np.trace(post)))
    if rhs_sum <= ZERO_TRACE:
        # Pi_i rho = 0 for every i, rho is untouched
        lhs = 0.0
    elif weight <= ZERO_TRACE:
        lhs = 1.0
    else:
        lhs = purified_distance(DensityOperator(rho.system, post / weight, check=False), rho)
    logger.debug(f"Sequential projectors ({len(projectors)}): P={lhs}, bound={rhs}")
    return _assert("sequential projector bound", InequalityCheck(lhs, rhs), slack)


def close_states_measurement_check(rho: DensityOperator, sigma: DensityOperator, operator,
                                   slack: float = INEQUALITY_SLACK) -> InequalityCheck:
    """
    With eps = P(rho, sigma) and Tr(Pi rho) = 1 - delta^2, Tr(Pi sigma) >= 1 - (2 eps + delta)^2.

    Returns: InequalityCheck(lhs, rhs) with lhs = 1 - (2 eps + delta)^2 and rhs = Tr(Pi sigma)
    """
    pi = _check_contraction(operator, rho.dim, "Measurement operator")
    eps = purified_distance(rho, sigma)
    delta = max(0.0, 1.0 - _trace_with(pi, rho)) ** 0.5
    check = InequalityCheck(1.0 - (2.0 * eps + delta) ** 2, _trace_with(pi, sigma))
    return _assert("measurement on close states", check, slack)


def gentle_measurement_check(rho: DensityOperator, operator, slack: float = INEQUALITY_SLACK) -> InequalityCheck:
    """
    F(rho, A rho A / Tr(A^2 rho)) >= sqrt(Tr(A^2 rho)) for 0 <= A <= I.

    Returns: InequalityCheck(lhs, rhs) with lhs = sqrt(Tr(A^2 rho)) and rhs the fidelity
    """
    a = _check_contraction(operator, rho.dim, "Measurement operator")
    accepted = _trace_with(a @ a, rho)
    if accepted <= ZERO_TRACE:
        return InequalityCheck(0.0, 0.0)
    post = DensityOperator(rho.system, a @ rho.matrix @ a.conj().T / accepted, check=False)
    check = InequalityCheck(accepted ** 0.5, fidelity(rho, post))
    return _assert("gentle measurement", check, slack)
