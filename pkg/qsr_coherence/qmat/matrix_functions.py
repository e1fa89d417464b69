# Copyright 2026 (c) qsr-coherence contributors. All rights reserved. Issued under the Apache 2.0 License.

#
# Spectral helpers on Hermitian matrices. Everything goes through eigh of the Hermitian part.
#

from typing import Tuple

import numpy as np

RANK_CUTOFF = 1e-12


def hermitian_part(matrix: np.ndarray) -> np.ndarray:
    matrix = np.asarray(matrix, dtype=complex)
    return 0.5 * (matrix + matrix.conj().T)


def hermitian_eig(matrix: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    Eigen decomposition of the Hermitian part of a matrix, eigenvalues ascending.
    """
    return np.linalg.eigh(hermitian_part(matrix))


def psd_sqrt(matrix: np.ndarray) -> np.ndarray:
    """
    Square root of a positive semidefinite matrix. Negative eigenvalues coming from
    round-off are clamped to 0 first.
    """
    vals, vecs = hermitian_eig(matrix)
    vals = np.sqrt(np.clip(vals, 0.0, None))
    return (vecs * vals) @ vecs.conj().T


def support_log2(matrix: np.ndarray, cutoff: float = RANK_CUTOFF) -> np.ndarray:
    """
    log2 of a PSD matrix restricted to its support; the kernel is mapped to 0.
    """
    vals, vecs = hermitian_eig(matrix)
    keep = vals > cutoff
    logs = np.zeros_like(vals)
    logs[keep] = np.log2(vals[keep])
    return (vecs * logs) @ vecs.conj().T


def entropy_of_spectrum(vals: np.ndarray, cutoff: float = RANK_CUTOFF) -> float:
    """
    -sum(l * log2(l)) with eigenvalues below the cutoff treated as 0.
    """
    vals = np.asarray(vals, dtype=float)
    vals = vals[vals > cutoff]
    return float(-np.sum(vals * np.log2(vals)))


def off_diagonal_norm(matrix: np.ndarray) -> float:
    matrix = np.asarray(matrix)
    if matrix.size == 0:
        return 0.0
    return float(np.max(np.abs(matrix - np.diag(np.diag(matrix)))))


def commutator_trace_norm(a: np.ndarray, b: np.ndarray) -> float:
    """
    ||ab - ba||_1 for Hermitian a and b. i[a,b] is Hermitian, so its trace norm is the
    sum of absolute eigenvalues.
    """
    comm = 1j * (a @ b - b @ a)
    return float(np.sum(np.abs(np.linalg.eigvalsh(hermitian_part(comm)))))


def kernel_leakage(rho: np.ndarray, sigma: np.ndarray, cutoff: float = RANK_CUTOFF) -> float:
    """
    Largest eigenvalue of rho compressed to the kernel of sigma, 0 when sigma has full rank.
    """
    vals, vecs = hermitian_eig(sigma)
    kernel = vecs[:, vals <= cutoff]
    if kernel.shape[1] == 0:
        return 0.0
    compressed = kernel.conj().T @ rho @ kernel
    return float(np.max(np.linalg.eigvalsh(hermitian_part(compressed))))
