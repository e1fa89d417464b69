# Copyright 2026 (c) qsr-coherence contributors. All rights reserved. Issued under the Apache 2.0 License.

#
# Operations on states over labeled registers. Register subsets are handled by reshaping
# into one axis per register and contracting, never through full permutation matrices.
#

from typing import List, Optional, Sequence, Tuple

import numpy as np

from qsr_coherence.qmat.matrix_functions import psd_sqrt
from qsr_coherence.qmat.registers import (RANK_CUTOFF, DensityOperator, Isometry, KrausChannel, Labels,
                                          RegisterSystem, StateVector, as_label_list)


def _same_system(rho: DensityOperator, sigma: DensityOperator):
    if rho.system.dims != sigma.system.dims:
        raise ValueError(f"Dimension mismatch: {rho.system} vs {sigma.system}")
    if rho.system.labels != sigma.system.labels:
        raise ValueError(f"Register mismatch: {rho.system.labels} vs {sigma.system.labels}, reorder or relabel first")


def _kept_and_rest(system: RegisterSystem, keep: Labels) -> Tuple[List[int], List[int]]:
    kept = system.indices(system.subsystem(keep).labels)
    rest = [i for i in range(len(system)) if i not in kept]
    return kept, rest


def contract_local(tensor: np.ndarray, operator: np.ndarray, axes: Sequence[int]) -> np.ndarray:
    """
    Applies an operator to some axes of a tensor.

    Args:
        tensor: array with one axis per register
        operator: array shaped (out dims..., in dims...) for the acted registers
        axes: the tensor axes the operator acts on, in the operator's order

    Returns: a tensor of the same layout with the acted axes replaced by the operator's outputs
    """
    axes = list(axes)
    m = len(axes)
    moved = np.tensordot(operator, tensor, axes=(list(range(m, 2 * m)), axes))
    return np.moveaxis(moved, list(range(m)), axes)


def tensor(a: DensityOperator, b: DensityOperator) -> DensityOperator:
    system = a.system.concat(b.system)
    return DensityOperator(system, np.kron(a.matrix, b.matrix),
                           subnormalized=a.subnormalized or b.subnormalized, check=False)


def tensor_vectors(a: StateVector, b: StateVector) -> StateVector:
    return StateVector(a.system.concat(b.system), np.kron(a.amplitudes, b.amplitudes), check=False)


def reorder(rho: DensityOperator, labels: Labels) -> DensityOperator:
    """
    Same operator with registers permuted into the order of labels.
    """
    system = rho.system
    perm = system.permutation_to(labels)
    n = len(system)
    t = rho.matrix.reshape(system.dims + system.dims)
    t = t.transpose(perm + [n + i for i in perm])
    return DensityOperator(system.ordered(labels), t.reshape(system.dim, system.dim),
                           subnormalized=rho.subnormalized, check=False)


def partial_trace(rho: DensityOperator, keep: Labels) -> DensityOperator:
    """
    Marginal on the kept registers, which stay in the canonical order of rho.
    """
    system = rho.system
    kept, rest = _kept_and_rest(system, keep)
    n = len(system)
    dims = system.dims
    dk = int(np.prod([dims[i] for i in kept], dtype=np.int64))
    dr = int(np.prod([dims[i] for i in rest], dtype=np.int64))
    perm = kept + rest
    t = rho.matrix.reshape(dims + dims).transpose(perm + [n + i for i in perm])
    marginal = np.einsum('ijkj->ik', t.reshape(dk, dr, dk, dr))
    return DensityOperator(system.subsystem(keep), marginal, subnormalized=rho.subnormalized, check=False)


def reduced_state(psi: StateVector, keep: Labels) -> DensityOperator:
    """
    Marginal of a pure state computed straight from its amplitudes.
    """
    system = psi.system
    kept, rest = _kept_and_rest(system, keep)
    dk = int(np.prod([system.dims[i] for i in kept], dtype=np.int64))
    amps = psi.tensor().transpose(kept + rest).reshape(dk, -1)
    return DensityOperator(system.subsystem(keep), amps @ amps.conj().T, check=False)


def purify(rho: DensityOperator, purifier_label: str = 'P') -> StateVector:
    """
    Canonical purification sum_i sqrt(l_i) |e_i>|i> with the purifier appended last.
    The purifier dimension is the numerical rank of rho.
    """
    vals, vecs = np.linalg.eigh(rho.matrix)
    keep = vals > RANK_CUTOFF
    if not np.any(keep):
        raise ValueError("Cannot purify the zero operator")
    vals, vecs = vals[keep], vecs[:, keep]
    amps = (vecs * np.sqrt(vals)).reshape(-1)
    amps = amps / np.linalg.norm(amps)
    system = rho.system.concat(RegisterSystem([(purifier_label, int(vals.shape[0]))]))
    return StateVector(system, amps)


def fidelity(rho: DensityOperator, sigma: DensityOperator) -> float:
    """
    F(rho, sigma) = || sqrt(rho) sqrt(sigma) ||_1
    """
    _same_system(rho, sigma)
    overlap = psd_sqrt(rho.matrix) @ psd_sqrt(sigma.matrix)
    value = float(np.sum(np.linalg.svd(overlap, compute_uv=False)))
    return min(max(value, 0.0), 1.0)


def vector_fidelity(psi: StateVector, rho: DensityOperator) -> float:
    """
    Fidelity between a pure state and a density operator, sqrt(<psi|rho|psi>).
    """
    if psi.system.dims != rho.system.dims:
        raise ValueError(f"Dimension mismatch: {psi.system} vs {rho.system}")
    amps = psi.amplitudes
    value = float(np.real(amps.conj() @ rho.matrix @ amps))
    return min(max(value, 0.0), 1.0) ** 0.5


def purified_distance(rho: DensityOperator, sigma: DensityOperator) -> float:
    return max(0.0, 1.0 - fidelity(rho, sigma) ** 2) ** 0.5


def trace_norm_distance(rho: DensityOperator, sigma: DensityOperator) -> float:
    _same_system(rho, sigma)
    return float(np.sum(np.abs(np.linalg.eigvalsh(rho.matrix - sigma.matrix))))


def apply_channel(ch: KrausChannel, rho: DensityOperator, labels: Optional[Labels] = None) -> DensityOperator:
    """
    Applies sum_i K_i rho K_i^dagger.

    Without labels the channel acts on the whole state and the result lives on the channel's
    output system. With labels it acts on those registers only; the channel must then keep
    every register dimension and the result keeps rho's registers.
    """
    subnormalized = rho.subnormalized or ch.subnormalized
    if labels is None:
        if ch.in_system.dims != rho.system.dims:
            raise ValueError(f"Channel input {ch.in_system} does not match state {rho.system}")
        out = sum(k @ rho.matrix @ k.conj().T for k in ch.operators)
        system = rho.system if ch.in_system == ch.out_system else ch.out_system
        return DensityOperator(system, out, subnormalized=subnormalized, check=False)

    labels = as_label_list(labels)
    system = rho.system
    axes = system.indices(labels)
    sub_dims = [system.dims[i] for i in axes]
    if ch.in_system.dims != sub_dims or ch.out_system.dims != sub_dims:
        raise ValueError(f"Channel {ch.in_system} -> {ch.out_system} cannot act locally on {labels} {sub_dims}")
    n = len(system)
    t = rho.matrix.reshape(system.dims + system.dims)
    out = np.zeros_like(t)
    for k in ch.operators:
        k_t = k.reshape(sub_dims + sub_dims)
        left = contract_local(t, k_t, axes)
        out = out + contract_local(left, k_t.conj(), [n + i for i in axes])
    return DensityOperator(system, out.reshape(system.dim, system.dim), subnormalized=subnormalized, check=False)


def apply_local_unitary(psi: StateVector, unitary: np.ndarray, labels: Labels) -> StateVector:
    labels = as_label_list(labels)
    system = psi.system
    axes = system.indices(labels)
    sub_dims = [system.dims[i] for i in axes]
    op = np.asarray(unitary, dtype=complex).reshape(sub_dims + sub_dims)
    out = contract_local(psi.tensor(), op, axes)
    return StateVector(system, out.reshape(-1))


def apply_isometry(v: Isometry, state):
    """
    Applies V to a StateVector or V . V^dagger to a DensityOperator acting on the whole state.
    """
    if state.system.dims != v.in_system.dims:
        raise ValueError(f"Isometry input {v.in_system} does not match state {state.system}")
    if isinstance(state, StateVector):
        return StateVector(v.out_system, v.matrix @ state.amplitudes)
    return DensityOperator(v.out_system, v.matrix @ state.matrix @ v.matrix.conj().T,
                           subnormalized=state.subnormalized, check=False)


def stinespring_dilation(ch: KrausChannel, env_label: str = 'E') -> Tuple[Isometry, List[str]]:
    """
    V = sum_i K_i (x) |i>_E, so that tracing E out of V rho V^dagger gives the channel output.
    """
    kraus = np.stack(ch.operators)
    rank, d_out, d_in = kraus.shape
    matrix = kraus.transpose(1, 0, 2).reshape(d_out * rank, d_in)
    out_system = ch.out_system.concat(RegisterSystem([(env_label, rank)]))
    return Isometry(ch.in_system, out_system, matrix), [env_label]
