# Copyright 2026 (c) qsr-coherence contributors. All rights reserved. Issued under the Apache 2.0 License.

#
# Hypothesis-testing relative entropy
#   D_H^eps(rho||sigma) = -log2 min { Tr(Pi sigma) : 0 <= Pi <= I, Tr(Pi rho) >= 1 - eps }
# Commuting pairs are solved classically by Neyman-Pearson. Other pairs bisect the
# threshold mu of the test {mu rho - sigma > 0} and finish with Neyman-Pearson in the
# eigenbasis of mu rho - sigma, which carries the fractional boundary weight.
#

import itertools
import logging
import math
from typing import NamedTuple, Tuple

import numpy as np
from scipy.special import gammaln

from qsr_coherence.coherence.dephasing import DEPHASING, CollapsingMap
from qsr_coherence.entropy.quantities import EntropicValue, as_probabilities, check_pair
from qsr_coherence.qmat.matrix_functions import RANK_CUTOFF, commutator_trace_norm, hermitian_eig, off_diagonal_norm
from qsr_coherence.qmat.registers import DensityOperator

logger = logging.getLogger(__name__)

COMMUTING_TOL = 1e-9
DEGENERACY_TOL = 1e-9
FREE_OUTCOME_TOL = 1e-12
MAX_BISECTIONS = 200
MAX_DOUBLINGS = 200


class HypothesisTest(NamedTuple):
    value: EntropicValue
    operator: np.ndarray
    acceptance: float
    type_two: float
    threshold: float
    commuting: bool


def _check_eps(eps: float):
    if not 0.0 < eps < 1.0:
        raise ValueError(f"eps must lie in (0, 1), got {eps}")


def _neyman_pearson(p: np.ndarray, q: np.ndarray, eps: float) -> Tuple[float, np.ndarray, float]:
    target = 1.0 - eps
    n = p.shape[0]
    weights = np.zeros(n)
    if float(np.sum(p)) < target:
        # subnormalized first argument: the test is the identity
        return float(np.sum(q)), np.ones(n), math.inf
    free = q <= FREE_OUTCOME_TOL
    ratios = np.where(free, math.inf, p / np.where(free, 1.0, q))
    order = sorted(range(n), key=lambda i: -ratios[i])
    remaining = target
    threshold = 0.0
    for i in order:
        if remaining <= 0.0:
            break
        if p[i] <= 0.0:
            continue
        if p[i] <= remaining:
            weights[i] = 1.0
            remaining -= p[i]
        else:
            weights[i] = remaining / p[i]
            remaining = 0.0
        threshold = 0.0 if free[i] else q[i] / p[i]
    beta = float(np.sum(weights[~free] * q[~free]))
    return beta, weights, threshold


def neyman_pearson(p, q, eps: float) -> Tuple[float, np.ndarray]:
    """
    Optimal randomized test between two distributions.

    Outcomes are taken by decreasing likelihood ratio p_i/q_i (outcomes with q_i = 0 first)
    until the acceptance reaches 1 - eps; the boundary outcome gets a fractional weight.

    Args:
        p: the null distribution
        q: the alternative
        eps: type-one error allowed, in (0, 1)

    Returns: the minimal type-two probability and the weight of each outcome
    """
    _check_eps(eps)
    p = np.clip(np.asarray(p, dtype=float), 0.0, None)
    q = np.clip(np.asarray(q, dtype=float), 0.0, None)
    if p.shape != q.shape:
        raise ValueError(f"Distributions of different sizes {p.shape} and {q.shape}")
    beta, weights, _ = _neyman_pearson(p, q, eps)
    return beta, weights


def _value(beta: float) -> EntropicValue:
    if beta <= 0.0:
        return EntropicValue.infinite()
    return EntropicValue(-math.log2(beta))


def joint_eigenbasis(rho: np.ndarray, sigma: np.ndarray) -> np.ndarray:
    """
    Unitary whose columns diagonalize two commuting Hermitian matrices: eigenspaces of sigma,
    each rotated to diagonalize the compression of rho.
    """
    if off_diagonal_norm(rho) <= RANK_CUTOFF and off_diagonal_norm(sigma) <= RANK_CUTOFF:
        return np.eye(rho.shape[0], dtype=complex)
    vals, vecs = hermitian_eig(sigma)
    columns = []
    start = 0
    for end in range(1, len(vals) + 1):
        if end == len(vals) or vals[end] - vals[end - 1] > DEGENERACY_TOL:
            block = vecs[:, start:end]
            _, rotation = hermitian_eig(block.conj().T @ rho @ block)
            columns.append(block @ rotation)
            start = end
    return np.hstack(columns)


def _diagonals(basis: np.ndarray, rho: np.ndarray, sigma: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    p = np.real(np.einsum('ji,jk,ki->i', basis.conj(), rho, basis))
    q = np.real(np.einsum('ji,jk,ki->i', basis.conj(), sigma, basis))
    return np.clip(p, 0.0, None), np.clip(q, 0.0, None)


def _test_in_basis(basis, rho, sigma, eps, commuting, threshold=None) -> HypothesisTest:
    p, q = _diagonals(basis, rho, sigma)
    beta, weights, np_threshold = _neyman_pearson(p, q, eps)
    operator = (basis * weights) @ basis.conj().T
    return HypothesisTest(_value(beta), operator, float(np.dot(weights, p)), beta,
                          np_threshold if threshold is None else threshold, commuting)


def _positive_acceptance(mu: float, rho: np.ndarray, sigma: np.ndarray) -> float:
    vals, vecs = hermitian_eig(mu * rho - sigma)
    positive = vecs[:, vals > 0]
    return float(np.real(np.trace(positive.conj().T @ rho @ positive)))


def _bisect_threshold(rho: np.ndarray, sigma: np.ndarray, target: float) -> float:
    """
    Smallest mu with Tr(P_{>0}(mu rho - sigma) rho) >= target.
    """
    lo, hi = 0.0, 1.0
    for _ in range(MAX_DOUBLINGS):
        if _positive_acceptance(hi, rho, sigma) >= target:
            break
        lo, hi = hi, 2.0 * hi
    else:
        raise ArithmeticError(f"No threshold reaches acceptance {target}")
    for _ in range(MAX_BISECTIONS):
        if hi - lo <= 1e-15 * hi:
            break
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if _positive_acceptance(mid, rho, sigma) >= target:
            hi = mid
        else:
            lo = mid
    return hi


def hypothesis_test(rho: DensityOperator, sigma: DensityOperator, eps: float) -> HypothesisTest:
    """
    Optimal test for D_H^eps(rho||sigma) together with its acceptance Tr(Pi rho), its type-two
    probability Tr(Pi sigma) and the threshold mu at which Pi is {mu rho - sigma > 0} plus a
    boundary term. mu maximizes the dual mu (1 - eps) - Tr(mu rho - sigma)_+.
    """
    check_pair(rho, sigma)
    _check_eps(eps)
    r, s = rho.matrix, sigma.matrix
    target = 1.0 - eps
    dim = rho.dim
    if rho.trace() < target:
        return HypothesisTest(_value(sigma.trace()), np.eye(dim, dtype=complex), rho.trace(), sigma.trace(),
                              math.inf, True)
    if commutator_trace_norm(r, s) <= COMMUTING_TOL:
        return _test_in_basis(joint_eigenbasis(r, s), r, s, eps, commuting=True)

    vals, vecs = hermitian_eig(s)
    kernel = vecs[:, vals <= RANK_CUTOFF]
    kernel_weight = float(np.real(np.trace(kernel.conj().T @ r @ kernel))) if kernel.shape[1] else 0.0
    if kernel_weight >= target:
        logger.debug(f"Kernel of sigma carries weight {kernel_weight} >= {target}, D_H is infinite")
        operator = (target / kernel_weight) * (kernel @ kernel.conj().T)
        return HypothesisTest(EntropicValue.infinite(), operator, target, 0.0, math.inf, False)

    mu = _bisect_threshold(r, s, target)
    _, basis = hermitian_eig(mu * r - s)
    logger.debug(f"Threshold mu={mu} for eps={eps}")
    return _test_in_basis(basis, r, s, eps, commuting=False, threshold=mu)


def hypothesis_testing_relative_entropy(rho: DensityOperator, sigma: DensityOperator, eps: float) -> EntropicValue:
    return hypothesis_test(rho, sigma, eps).value


def restricted_hypothesis_test(rho_bc: DensityOperator, sigma_prod: DensityOperator, eps: float,
                               collapsing: CollapsingMap = DEPHASING) -> HypothesisTest:
    """
    Optimal test among the free measurement operators. For a collapsing map surjective onto
    them, D_F^eps(rho||sigma) = D_H^eps(Delta(rho)||Delta(sigma)), and the optimal test of the
    collapsed pair is itself free.
    """
    if not collapsing.surjective_wrt_free_ops:
        raise ValueError(f"Collapsing map {collapsing.name} is not surjective onto the free measurement operators")
    return hypothesis_test(collapsing.apply(rho_bc), collapsing.apply(sigma_prod), eps)


def restricted_hypothesis_testing(rho_bc: DensityOperator, sigma_prod: DensityOperator, eps: float,
                                  collapsing: CollapsingMap = DEPHASING) -> EntropicValue:
    return restricted_hypothesis_test(rho_bc, sigma_prod, eps, collapsing).value


def type_classes(n: int, d: int) -> np.ndarray:
    """
    Every vector of d nonnegative counts summing to n, one per row.
    """
    if n < 0 or d < 1:
        raise ValueError(f"Invalid type class parameters n={n}, d={d}")
    rows = []
    for bars in itertools.combinations(range(n + d - 1), d - 1):
        edges = (-1,) + bars + (n + d - 1,)
        rows.append([edges[i + 1] - edges[i] - 1 for i in range(d)])
    return np.array(rows, dtype=int)


def type_log_probabilities(types: np.ndarray, probs: np.ndarray) -> np.ndarray:
    """
    Natural log of the probability of each type class under the i.i.d. distribution probs.
    """
    n = int(types[0].sum())
    log_multinomial = gammaln(n + 1) - np.sum(gammaln(types + 1), axis=1)
    with np.errstate(divide='ignore'):
        log_p = np.log(probs)
    terms = np.where(types > 0, types * log_p, 0.0)
    return log_multinomial + np.sum(terms, axis=1)


def iid_hypothesis_testing(p, q, n: int, eps: float) -> EntropicValue:
    """
    Exact D_H^eps(P^{xn}||Q^{xn}). Sequences of the same type share their likelihood ratio,
    so the test is run on type classes.
    """
    _check_eps(eps)
    p, q = as_probabilities(p), as_probabilities(q)
    types = type_classes(n, p.shape[0])
    p_types = np.exp(type_log_probabilities(types, p))
    q_types = np.exp(type_log_probabilities(types, q))
    beta, _, _ = _neyman_pearson(p_types, q_types, eps)
    return _value(beta)
