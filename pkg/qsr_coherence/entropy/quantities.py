# Copyright 2026 (c) qsr-coherence contributors. All rights reserved. Issued under the Apache 2.0 License.

#
# Entropic quantities in bits. Relative entropies return EntropicValue so that a support
# violation is a value (+inf), not an exception.
#

import logging
import math
from typing import NamedTuple, Optional

import numpy as np

from qsr_coherence.coherence.dephasing import dephase
from qsr_coherence.qmat.matrix_functions import (RANK_CUTOFF, entropy_of_spectrum, hermitian_eig, kernel_leakage,
                                                 support_log2)
from qsr_coherence.qmat.operations import partial_trace
from qsr_coherence.qmat.registers import SUPPORT_TOL, TAU_NORM, DensityOperator, Labels, as_label_list

logger = logging.getLogger(__name__)

CMI_CROSS_CHECK = 1e-10


class EntropicValue(NamedTuple):
    value: float
    finite: bool = True

    @classmethod
    def infinite(cls) -> 'EntropicValue':
        return cls(math.inf, False)

    def __float__(self):
        return float(self.value)


class ClassicalDistribution(object):
    """
    Probability vector, nonnegative and summing to 1.
    """

    def __init__(self, probs):
        probs = np.array(probs, dtype=float).reshape(-1)
        if probs.size == 0:
            raise ValueError("Empty distribution")
        if np.min(probs) < -TAU_NORM:
            raise ValueError(f"Negative probability {np.min(probs)}")
        total = float(np.sum(probs))
        if abs(total - 1.0) > TAU_NORM:
            raise ValueError(f"Probabilities sum to {total}, expected 1")
        self._probs = np.clip(probs, 0.0, None)
        self._probs.setflags(write=False)

    @property
    def probs(self) -> np.ndarray:
        return self._probs

    def __len__(self):
        return self._probs.shape[0]

    def entropy(self) -> float:
        return entropy_of_spectrum(self._probs)

    def as_density(self, system) -> DensityOperator:
        return DensityOperator(system, np.diag(self._probs))


def as_probabilities(p) -> np.ndarray:
    if isinstance(p, ClassicalDistribution):
        return p.probs
    return ClassicalDistribution(p).probs


def classical_fidelity(p, q) -> float:
    """
    sum_i sqrt(p_i q_i)
    """
    p, q = as_probabilities(p), as_probabilities(q)
    if p.shape != q.shape:
        raise ValueError(f"Distributions of different sizes {p.shape[0]} and {q.shape[0]}")
    return float(min(np.sum(np.sqrt(p * q)), 1.0))


def check_pair(rho: DensityOperator, sigma: DensityOperator):
    if rho.system.dims != sigma.system.dims:
        raise ValueError(f"Dimension mismatch: {rho.system} vs {sigma.system}")


def von_neumann_entropy(rho: DensityOperator) -> float:
    return entropy_of_spectrum(rho.eigenvalues())


def relative_entropy(rho: DensityOperator, sigma: DensityOperator) -> EntropicValue:
    """
    D(rho||sigma) = Tr rho log rho - Tr rho log sigma, +inf when supp(rho) is not inside supp(sigma).
    """
    check_pair(rho, sigma)
    if kernel_leakage(rho.matrix, sigma.matrix) > SUPPORT_TOL:
        return EntropicValue.infinite()
    vals, vecs = hermitian_eig(sigma.matrix)
    keep = vals > RANK_CUTOFF
    weights = np.real(np.einsum('ij,jk,ki->i', vecs.conj().T[keep], rho.matrix, vecs[:, keep]))
    cross = float(np.sum(weights * np.log2(vals[keep])))
    value = -von_neumann_entropy(rho) - cross
    return EntropicValue(max(value, 0.0))


def relative_entropy_variance(rho: DensityOperator, sigma: DensityOperator) -> EntropicValue:
    """
    V(rho||sigma) = Tr rho (log rho - log sigma)^2 - D(rho||sigma)^2
    """
    d = relative_entropy(rho, sigma)
    if not d.finite:
        return d
    diff = support_log2(rho.matrix) - support_log2(sigma.matrix)
    second = float(np.real(np.trace(rho.matrix @ diff @ diff)))
    return EntropicValue(max(second - d.value ** 2, 0.0))


def max_relative_entropy(rho: DensityOperator, sigma: DensityOperator) -> EntropicValue:
    """
    log2 of the largest eigenvalue of sigma^{-1/2} rho sigma^{-1/2} on the support of sigma.
    """
    check_pair(rho, sigma)
    if kernel_leakage(rho.matrix, sigma.matrix) > SUPPORT_TOL:
        return EntropicValue.infinite()
    vals, vecs = hermitian_eig(sigma.matrix)
    keep = vals > RANK_CUTOFF
    basis = vecs[:, keep] / np.sqrt(vals[keep])
    compressed = basis.conj().T @ rho.matrix @ basis
    largest = float(np.max(np.linalg.eigvalsh(0.5 * (compressed + compressed.conj().T))))
    if largest <= 0:
        raise ValueError("Max-relative entropy of the zero operator is undefined")
    return EntropicValue(math.log2(largest))


def marginal_entropy(rho: DensityOperator, labels: Labels) -> float:
    labels = as_label_list(labels)
    if not labels:
        return 0.0
    return von_neumann_entropy(partial_trace(rho, labels))


def mutual_information(rho: DensityOperator, part_a: Labels, part_b: Labels) -> float:
    """
    I(A:B) = S(A) + S(B) - S(AB)
    """
    a, b = as_label_list(part_a), as_label_list(part_b)
    if set(a) & set(b):
        raise ValueError(f"Parts overlap: {a} and {b}")
    return marginal_entropy(rho, a) + marginal_entropy(rho, b) - marginal_entropy(rho, a + b)


def conditional_entropy(rho: DensityOperator, part_a: Labels, part_b: Labels) -> float:
    """
    S(A|B) = S(AB) - S(B)
    """
    a, b = as_label_list(part_a), as_label_list(part_b)
    return marginal_entropy(rho, a + b) - marginal_entropy(rho, b)


def conditional_mutual_information(rho: DensityOperator, part_a: Labels, part_b: Labels, part_c: Labels) -> float:
    """
    I(A:B|C), computed both as I(A:BC) - I(A:C) and as S(A|C) - S(A|BC). The two forms
    use the same marginal entropies and must agree.

    Args:
        rho: the state
        part_a: labels of A
        part_b: labels of B
        part_c: labels of the conditioning part C (may be empty)

    Returns: the conditional mutual information in bits
    """
    a, b, c = as_label_list(part_a), as_label_list(part_b), as_label_list(part_c)
    if set(a) & set(b) or set(a) & set(c) or set(b) & set(c):
        raise ValueError(f"Parts overlap: {a}, {b}, {c}")
    cache = {}

    def s(labels):
        key = frozenset(labels)
        if key not in cache:
            cache[key] = marginal_entropy(rho, labels)
        return cache[key]

    via_mutual = (s(a) + s(b + c) - s(a + b + c)) - (s(a) + s(c) - s(a + c))
    via_conditional = (s(a + c) - s(c)) - (s(a + b + c) - s(b + c))
    if abs(via_mutual - via_conditional) > CMI_CROSS_CHECK:
        raise ArithmeticError(f"Conditional mutual information forms disagree: {via_mutual} vs {via_conditional}")
    return via_mutual


def relative_entropy_of_coherence(rho: DensityOperator, labels: Optional[Labels] = None) -> float:
    """
    R_c(rho) = S(dephase(rho)) - S(rho), the closed form of the minimum of D(rho||sigma)
    over incoherent sigma. labels restricts dephasing to some registers.
    """
    value = von_neumann_entropy(dephase(rho, labels)) - von_neumann_entropy(rho)
    return max(value, 0.0)
