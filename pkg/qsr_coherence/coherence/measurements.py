# Copyright 2026 (c) qsr-coherence contributors. All rights reserved. Issued under the Apache 2.0 License.

#
# Measurement dilations.
#

from typing import List, Tuple

import numpy as np
from scipy.linalg import null_space

from qsr_coherence.qmat.matrix_functions import psd_sqrt
from qsr_coherence.qmat.registers import DensityOperator, Isometry, KrausChannel, Povm, RegisterSystem


def neumark_dilation(povm: Povm, pointer_label: str = 'P') -> Tuple[Isometry, List[str]]:
    """
    Unitary U on S (x) P with U(|s>|0>) = sum_i (A_i|s>)|i>, so that projecting the pointer
    onto |i> after U leaves the branch A_i rho A_i^dagger.

    The columns for pointer value 0 are the block isometry W = sum_i A_i (x) |i>; the other
    columns complete W to a unitary with an orthonormal basis of the complement of its range.

    Args:
        povm: the measurement, already checked complete
        pointer_label: label of the appended pointer register, of dimension len(povm)

    Returns: the unitary as a square Isometry and the pointer labels
    """
    ops = np.stack(povm.operators)
    m, d, _ = ops.shape
    w = ops.transpose(1, 0, 2).reshape(d * m, d)
    complement = null_space(w.conj().T)
    unitary = np.zeros((d * m, d * m), dtype=complex)
    first = np.arange(d) * m
    rest = np.array([s * m + p for s in range(d) for p in range(1, m)], dtype=int)
    unitary[:, first] = w
    if rest.size:
        unitary[:, rest] = complement
    system = povm.system.concat(RegisterSystem([(pointer_label, m)]))
    return Isometry(system, system, unitary), [pointer_label]


def neumark_operators(unitary: Isometry) -> List[np.ndarray]:
    """
    The operators <i|_P U |0>_P, one per pointer value. They are the POVM's A_i again.
    """
    m = unitary.in_system.dims[-1]
    d = unitary.in_system.dim // m
    columns = unitary.matrix[:, np.arange(d) * m].reshape(d, m, d)
    return [columns[:, i, :] for i in range(m)]


def neumark_branch(unitary: Isometry, rho: DensityOperator, outcome: int) -> DensityOperator:
    """
    Tr_P[(I (x) |i><i|) U (rho (x) |0><0|) U^dagger], the unnormalized post-measurement state of
    outcome i. The pointer is the last register of the dilation.
    """
    m = unitary.in_system.dims[-1]
    if rho.dim * m != unitary.in_system.dim:
        raise ValueError(f"Dilation on {unitary.in_system} cannot act on {rho.system}")
    if not 0 <= outcome < m:
        raise ValueError(f"Outcome {outcome} outside 0..{m - 1}")
    rows = neumark_operators(unitary)[outcome]
    return DensityOperator(rho.system, rows @ rho.matrix @ rows.conj().T, subnormalized=True, check=False)


def flagging_channel(operator: np.ndarray, system: RegisterSystem, flag_label: str = 'F') -> KrausChannel:
    """
    rho -> O rho O^dagger (x) |0><0| + sqrt(I - O^dagger O) rho sqrt(I - O^dagger O) (x) |1><1|.
    O belongs to the free measurement operators when this channel is free.
    """
    operator = np.asarray(operator, dtype=complex)
    d = system.dim
    sqrt_complement = psd_sqrt(np.eye(d) - operator.conj().T @ operator)
    e0 = np.array([[1.0], [0.0]])
    e1 = np.array([[0.0], [1.0]])
    out_system = system.concat(RegisterSystem([(flag_label, 2)]))
    return KrausChannel(system, out_system, [np.kron(operator, e0), np.kron(sqrt_complement, e1)])
