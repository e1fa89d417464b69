# Copyright 2026 (c) qsr-coherence contributors. All rights reserved. Issued under the Apache 2.0 License.

#
# Seeded generators of random states, maps and operators.
# Vectors are Haar distributed: complex Gaussian amplitudes, normalized.
# Mixed states are marginals of a larger Haar vector, so rank is controlled by the traced dimension.
#

from typing import Optional, Sequence, Tuple, Union

import numpy as np

from qsr_coherence.qmat.registers import DensityOperator, Isometry, KrausChannel, RegisterSystem, StateVector

Rng = Union[None, int, np.random.Generator]


def as_rng(rng: Rng) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)


def qubits(labels: Sequence[str]) -> RegisterSystem:
    return RegisterSystem((label, 2) for label in labels)


def _gaussian(rng: np.random.Generator, shape) -> np.ndarray:
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def random_state_vector(system: RegisterSystem, rng: Rng = None) -> StateVector:
    rng = as_rng(rng)
    amps = _gaussian(rng, system.dim)
    return StateVector(system, amps / np.linalg.norm(amps))


def random_density(system: RegisterSystem, rank: Optional[int] = None, rng: Rng = None) -> DensityOperator:
    """
    Random mixed state of the given rank (full rank by default), obtained by tracing out
    an environment of dimension rank from a Haar vector.
    """
    rng = as_rng(rng)
    rank = system.dim if rank is None else int(rank)
    if rank < 1 or rank > system.dim:
        raise ValueError(f"Rank {rank} outside 1..{system.dim}")
    g = _gaussian(rng, (system.dim, rank))
    matrix = g @ g.conj().T
    return DensityOperator(system, matrix / np.real(np.trace(matrix)))


def random_diagonal_density(system: RegisterSystem, rng: Rng = None, alpha: float = 1.0) -> DensityOperator:
    rng = as_rng(rng)
    probs = rng.dirichlet(np.full(system.dim, alpha))
    return DensityOperator(system, np.diag(probs))


def random_unitary(dim: int, rng: Rng = None) -> np.ndarray:
    """
    Haar unitary from the QR decomposition of a Gaussian matrix with the phases of R fixed.
    """
    rng = as_rng(rng)
    q, r = np.linalg.qr(_gaussian(rng, (dim, dim)))
    phases = np.diag(r) / np.abs(np.diag(r))
    return q * phases


def random_isometry(in_system: RegisterSystem, out_system: RegisterSystem, rng: Rng = None) -> Isometry:
    u = random_unitary(out_system.dim, rng)
    return Isometry(in_system, out_system, u[:, :in_system.dim])


def random_channel(system: RegisterSystem, num_kraus: int = 2, rng: Rng = None,
                   out_system: Optional[RegisterSystem] = None) -> KrausChannel:
    """
    Random CPTP map whose Kraus operators are the blocks of a random isometry.
    """
    out_system = system if out_system is None else out_system
    d_in, d_out = system.dim, out_system.dim
    u = random_unitary(d_out * num_kraus, rng)[:, :d_in]
    ops = [u[i * d_out:(i + 1) * d_out, :] for i in range(num_kraus)]
    return KrausChannel(system, out_system, ops)


def random_commuting_pair(system: RegisterSystem, rng: Rng = None,
                          full_support: bool = True) -> Tuple[DensityOperator, DensityOperator]:
    """
    Two states diagonal in a shared random basis. Without full_support, some weights of
    the first state are zeroed so that supports differ.
    """
    rng = as_rng(rng)
    u = random_unitary(system.dim, rng)
    p = rng.dirichlet(np.ones(system.dim))
    q = rng.dirichlet(np.ones(system.dim))
    if not full_support and system.dim > 1:
        p[rng.integers(system.dim)] = 0.0
        p = p / p.sum()
    rho = DensityOperator(system, (u * p) @ u.conj().T)
    sigma = DensityOperator(system, (u * q) @ u.conj().T)
    return rho, sigma


def random_projector(dim: int, rank: int, rng: Rng = None) -> np.ndarray:
    u = random_unitary(dim, rng)[:, :rank]
    return u @ u.conj().T


def random_contraction(dim: int, rng: Rng = None) -> np.ndarray:
    """
    Random Hermitian A with 0 <= A <= I.
    """
    rng = as_rng(rng)
    u = random_unitary(dim, rng)
    return (u * rng.uniform(0.0, 1.0, dim)) @ u.conj().T


def random_close_pair(system: RegisterSystem, eps: float, rng: Rng = None) -> Tuple[DensityOperator, DensityOperator]:
    """
    A random state and its mixture (1-eps) rho + eps tau with a random tau; the pair is
    at trace distance at most 2 eps.
    """
    rng = as_rng(rng)
    rho = random_density(system, rng=rng)
    tau = random_density(system, rng=rng)
    return rho, DensityOperator(system, (1.0 - eps) * rho.matrix + eps * tau.matrix)
