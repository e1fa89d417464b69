# Copyright 2026 (c) qsr-coherence contributors. All rights reserved. Issued under the Apache 2.0 License.

#
# Incoherent operations: Kraus operators that send every basis state to a multiple of a
# basis state, i.e. each column has at most one nonzero entry.
#

from typing import Optional, Sequence, Tuple

import numpy as np

from qsr_coherence.qmat.random_states import Rng, as_rng
from qsr_coherence.qmat.registers import DensityOperator, KrausChannel, RegisterSystem, StateVector

INCOHERENCE_TOL = 1e-10

HADAMARD = np.array([[1.0, 1.0], [1.0, -1.0]]) / np.sqrt(2.0)
PLUS = np.array([1.0, 1.0]) / np.sqrt(2.0)


def incoherence_witness(operators: Sequence[np.ndarray], tol: float = INCOHERENCE_TOL) -> Optional[Tuple[int, int]]:
    """
    First (operator index, column) with more than one nonzero entry, None if there is none.
    """
    for i, op in enumerate(operators):
        counts = np.sum(np.abs(np.asarray(op)) > tol, axis=0)
        bad = np.nonzero(counts > 1)[0]
        if bad.size:
            return i, int(bad[0])
    return None


def is_incoherent_channel(ch: KrausChannel) -> Tuple[bool, Optional[Tuple[int, int]]]:
    witness = incoherence_witness(ch.operators)
    return witness is None, witness


class IncoherentKrausSet(object):
    """
    Trace preserving Kraus set certified incoherent on construction.
    """

    def __init__(self, in_system: RegisterSystem, out_system: RegisterSystem, operators: Sequence):
        self._channel = KrausChannel(in_system, out_system, operators)
        witness = incoherence_witness(self._channel.operators)
        if witness is not None:
            raise ValueError(f"Kraus operator {witness[0]} creates coherence from basis state {witness[1]}")

    @property
    def channel(self) -> KrausChannel:
        return self._channel

    @property
    def operators(self) -> Tuple[np.ndarray, ...]:
        return self._channel.operators

    def __len__(self):
        return len(self._channel)


def random_incoherent_kraus_set(system: RegisterSystem, num_kraus: int = 2, rng: Rng = None) -> IncoherentKrausSet:
    """
    K_i = P_i diag(c_i) with random permutations P_i and complex weights normalized so that
    sum_i |c_i[j]|^2 = 1 for every column j.
    """
    rng = as_rng(rng)
    d = system.dim
    weights = rng.standard_normal((num_kraus, d)) + 1j * rng.standard_normal((num_kraus, d))
    weights = weights / np.linalg.norm(weights, axis=0)
    ops = []
    for i in range(num_kraus):
        perm = np.eye(d)[:, rng.permutation(d)]
        ops.append(perm * weights[i])
    return IncoherentKrausSet(system, system, ops)


def plus_state(num_qubits: int, labels: Optional[Sequence[str]] = None) -> StateVector:
    labels = [f"Q{i + 1}" for i in range(num_qubits)] if labels is None else list(labels)
    if len(labels) != num_qubits:
        raise ValueError(f"Expected {num_qubits} labels, got {labels}")
    system = RegisterSystem((label, 2) for label in labels)
    return StateVector(system, np.full(2 ** num_qubits, 2.0 ** (-num_qubits / 2.0)))


def maximally_coherent_state(num_qubits: int, labels: Optional[Sequence[str]] = None) -> DensityOperator:
    """
    |+><+| on num_qubits qubits, the state of num_qubits units of coherence.
    """
    return plus_state(num_qubits, labels).density()


def singlet_incoherent_unitary() -> np.ndarray:
    """
    Controlled-Z. It maps (|0>|+> + |1>|->)/sqrt(2) to |+>|+> and permutes basis states up to sign.
    """
    return np.diag([1.0, 1.0, 1.0, -1.0]).astype(complex)


def swap_unitary(d: int) -> np.ndarray:
    swap = np.zeros((d * d, d * d), dtype=complex)
    for i in range(d):
        for j in range(d):
            swap[j * d + i, i * d + j] = 1.0
    return swap
