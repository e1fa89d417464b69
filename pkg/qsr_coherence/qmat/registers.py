# Copyright 2026 (c) qsr-coherence contributors. All rights reserved. Issued under the Apache 2.0 License.

#
# Value types for states and maps on labeled multi-register Hilbert spaces.
# All of them are immutable: arrays are copied on construction and frozen.
#

from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from qsr_coherence.qmat.matrix_functions import RANK_CUTOFF, hermitian_part, psd_sqrt

TAU_NORM = 1e-9
TAU_HERM = 1e-9
TAU_PSD = 1e-9
TAU_RECON = 1e-8
SUPPORT_TOL = 1e-10

Labels = Union[str, Iterable[str]]


def as_label_list(labels: Optional[Labels]) -> List[str]:
    """
    Normalizes a single label or an iterable of labels into a list.
    """
    if labels is None:
        return []
    if isinstance(labels, str):
        return [labels]
    return [str(label) for label in labels]


def _frozen(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


class RegisterSystem(object):
    """
    Ordered list of named registers with their dimensions. The order is the tensor
    order of every vector or matrix bound to the system.
    """

    def __init__(self, registers: Iterable[Tuple[str, int]]):
        registers = tuple((str(label), int(dim)) for label, dim in registers)
        labels = [label for label, _ in registers]
        if len(set(labels)) != len(labels):
            raise ValueError(f"Duplicate register labels: {labels}")
        for label, dim in registers:
            if dim < 1:
                raise ValueError(f"Register {label} has invalid dimension {dim}")
        self._registers = registers

    @property
    def registers(self) -> Tuple[Tuple[str, int], ...]:
        return self._registers

    @property
    def labels(self) -> List[str]:
        return [label for label, _ in self._registers]

    @property
    def dims(self) -> List[int]:
        return [dim for _, dim in self._registers]

    @property
    def dim(self) -> int:
        total = 1
        for dim in self.dims:
            total *= dim
        return total

    def __len__(self):
        return len(self._registers)

    def __iter__(self):
        return iter(self._registers)

    def __contains__(self, label):
        return label in self.labels

    def __eq__(self, other):
        return isinstance(other, RegisterSystem) and self._registers == other._registers

    def __hash__(self):
        return hash(self._registers)

    def __repr__(self):
        inner = ", ".join(f"{label}:{dim}" for label, dim in self._registers)
        return f"RegisterSystem({inner})"

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise ValueError(f"Unknown register label {label!r}, expected one of {self.labels}")

    def indices(self, labels: Labels) -> List[int]:
        return [self.index(label) for label in as_label_list(labels)]

    def dim_of(self, labels: Labels) -> int:
        total = 1
        for i in self.indices(labels):
            total *= self._registers[i][1]
        return total

    def subsystem(self, labels: Labels) -> 'RegisterSystem':
        """
        Registers named in labels, kept in the canonical order of this system.
        """
        wanted = set(self.indices(labels))
        return RegisterSystem(reg for i, reg in enumerate(self._registers) if i in wanted)

    def ordered(self, labels: Labels) -> 'RegisterSystem':
        """
        Registers named in labels, in the order given.
        """
        return RegisterSystem(self._registers[i] for i in self.indices(labels))

    def without(self, labels: Labels) -> 'RegisterSystem':
        dropped = set(self.indices(labels))
        return RegisterSystem(reg for i, reg in enumerate(self._registers) if i not in dropped)

    def concat(self, other: 'RegisterSystem') -> 'RegisterSystem':
        clash = set(self.labels) & set(other.labels)
        if clash:
            raise ValueError(f"Register labels collide: {sorted(clash)}")
        return RegisterSystem(self._registers + other._registers)

    def relabel(self, mapping: Dict[str, str]) -> 'RegisterSystem':
        for label in mapping:
            self.index(label)
        return RegisterSystem((mapping.get(label, label), dim) for label, dim in self._registers)

    def permutation_to(self, labels: Labels) -> List[int]:
        """
        Axis permutation that brings this system into the order of labels (all labels).
        """
        labels = as_label_list(labels)
        if sorted(labels) != sorted(self.labels):
            raise ValueError(f"Reordering needs every label exactly once: {labels} vs {self.labels}")
        return self.indices(labels)


class StateVector(object):
    """
    Unit vector on a RegisterSystem.
    """

    def __init__(self, system: RegisterSystem, amplitudes, check: bool = True):
        amplitudes = np.array(amplitudes, dtype=complex).reshape(-1)
        if amplitudes.shape[0] != system.dim:
            raise ValueError(f"Got {amplitudes.shape[0]} amplitudes for a system of dimension {system.dim}")
        if check:
            norm = np.linalg.norm(amplitudes)
            if abs(norm - 1.0) > TAU_NORM:
                raise ValueError(f"State vector norm is {norm}, expected 1")
        self._system = system
        self._amplitudes = _frozen(amplitudes)

    @property
    def system(self) -> RegisterSystem:
        return self._system

    @property
    def amplitudes(self) -> np.ndarray:
        return self._amplitudes

    def tensor(self) -> np.ndarray:
        """
        Amplitudes reshaped with one axis per register.
        """
        return self._amplitudes.reshape(self._system.dims)

    def density(self) -> 'DensityOperator':
        return DensityOperator(self._system, np.outer(self._amplitudes, self._amplitudes.conj()), check=False)

    def reorder(self, labels: Labels) -> 'StateVector':
        perm = self._system.permutation_to(labels)
        amps = self.tensor().transpose(perm).reshape(-1)
        return StateVector(self._system.ordered(labels), amps, check=False)

    def relabel(self, mapping: Dict[str, str]) -> 'StateVector':
        return StateVector(self._system.relabel(mapping), self._amplitudes, check=False)

    def __repr__(self):
        return f"StateVector({self._system!r})"


class DensityOperator(object):
    """
    Positive semidefinite unit-trace matrix bound to a RegisterSystem.
    Subnormalized operators (trace at most 1) are accepted when flagged.
    """

    def __init__(self, system: RegisterSystem, matrix, subnormalized: bool = False, check: bool = True):
        matrix = np.array(matrix, dtype=complex)
        if matrix.shape != (system.dim, system.dim):
            raise ValueError(f"Matrix shape {matrix.shape} does not match system dimension {system.dim}")
        if check:
            asym = np.max(np.abs(matrix - matrix.conj().T)) if matrix.size else 0.0
            if asym > TAU_HERM:
                raise ValueError(f"Matrix is not Hermitian (deviation {asym})")
        matrix = hermitian_part(matrix)
        if check:
            smallest = float(np.min(np.linalg.eigvalsh(matrix)))
            if smallest < -TAU_PSD:
                raise ValueError(f"Matrix is not positive semidefinite (eigenvalue {smallest})")
            trace = float(np.real(np.trace(matrix)))
            if subnormalized:
                if trace > 1.0 + TAU_NORM:
                    raise ValueError(f"Subnormalized state has trace {trace} > 1")
            elif abs(trace - 1.0) > TAU_NORM:
                raise ValueError(f"State has trace {trace}, expected 1")
        self._system = system
        self._matrix = _frozen(matrix)
        self._subnormalized = bool(subnormalized)

    @property
    def system(self) -> RegisterSystem:
        return self._system

    @property
    def matrix(self) -> np.ndarray:
        return self._matrix

    @property
    def subnormalized(self) -> bool:
        return self._subnormalized

    @property
    def dim(self) -> int:
        return self._system.dim

    def trace(self) -> float:
        return float(np.real(np.trace(self._matrix)))

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self._matrix)

    def relabel(self, mapping: Dict[str, str]) -> 'DensityOperator':
        return DensityOperator(self._system.relabel(mapping), self._matrix,
                               subnormalized=self._subnormalized, check=False)

    def __repr__(self):
        return f"DensityOperator({self._system!r}, trace={self.trace():.6g})"


class Isometry(object):
    """
    Linear map V with V^dagger V = I from in_system into out_system.
    """

    def __init__(self, in_system: RegisterSystem, out_system: RegisterSystem, matrix, check: bool = True):
        matrix = np.array(matrix, dtype=complex)
        if matrix.shape != (out_system.dim, in_system.dim):
            raise ValueError(f"Isometry shape {matrix.shape} does not match "
                             f"({out_system.dim}, {in_system.dim})")
        if out_system.dim < in_system.dim:
            raise ValueError(f"Isometry cannot map dimension {in_system.dim} into {out_system.dim}")
        if check:
            gram = matrix.conj().T @ matrix
            deviation = np.max(np.abs(gram - np.eye(in_system.dim)))
            if deviation > TAU_HERM:
                raise ValueError(f"V^dagger V deviates from identity by {deviation}")
        self._in = in_system
        self._out = out_system
        self._matrix = _frozen(matrix)

    @property
    def in_system(self) -> RegisterSystem:
        return self._in

    @property
    def out_system(self) -> RegisterSystem:
        return self._out

    @property
    def matrix(self) -> np.ndarray:
        return self._matrix

    def is_unitary(self) -> bool:
        return self._in.dim == self._out.dim


class KrausChannel(object):
    """
    Completely positive map given by Kraus operators (out_dim x in_dim each).
    Trace preserving unless created with subnormalized=True, which admits a single
    measurement branch (sum K^dagger K below identity).
    """

    def __init__(self, in_system: RegisterSystem, out_system: RegisterSystem, operators: Sequence,
                 subnormalized: bool = False, check: bool = True):
        ops = [np.array(op, dtype=complex) for op in operators]
        if not ops:
            raise ValueError("A channel needs at least one Kraus operator")
        for op in ops:
            if op.shape != (out_system.dim, in_system.dim):
                raise ValueError(f"Kraus operator shape {op.shape} does not match "
                                 f"({out_system.dim}, {in_system.dim})")
        if check:
            completeness = sum(op.conj().T @ op for op in ops)
            identity = np.eye(in_system.dim)
            if subnormalized:
                gap = float(np.min(np.linalg.eigvalsh(hermitian_part(identity - completeness))))
                if gap < -TAU_PSD:
                    raise ValueError(f"Kraus operators exceed the identity (eigenvalue {gap})")
            else:
                deviation = float(np.max(np.abs(completeness - identity)))
                if deviation > TAU_HERM:
                    raise ValueError(f"Kraus operators are not trace preserving (deviation {deviation})")
        self._in = in_system
        self._out = out_system
        self._ops = tuple(_frozen(op) for op in ops)
        self._subnormalized = bool(subnormalized)

    @classmethod
    def identity(cls, system: RegisterSystem) -> 'KrausChannel':
        return cls(system, system, [np.eye(system.dim)])

    @classmethod
    def unitary(cls, system: RegisterSystem, matrix) -> 'KrausChannel':
        return cls(system, system, [matrix])

    @property
    def in_system(self) -> RegisterSystem:
        return self._in

    @property
    def out_system(self) -> RegisterSystem:
        return self._out

    @property
    def operators(self) -> Tuple[np.ndarray, ...]:
        return self._ops

    @property
    def subnormalized(self) -> bool:
        return self._subnormalized

    def __len__(self):
        return len(self._ops)


class Povm(object):
    """
    Measurement given by operators A_i with 0 <= A_i <= I and sum A_i^dagger A_i = I.
    Outcome i leaves the state A_i rho A_i^dagger.
    """

    def __init__(self, system: RegisterSystem, operators: Sequence):
        ops = [np.array(op, dtype=complex) for op in operators]
        if not ops:
            raise ValueError("A POVM needs at least one operator")
        identity = np.eye(system.dim)
        for i, op in enumerate(ops):
            if op.shape != (system.dim, system.dim):
                raise ValueError(f"POVM operator {i} has shape {op.shape}, expected {(system.dim, system.dim)}")
            if np.max(np.abs(op - op.conj().T)) > TAU_HERM:
                raise ValueError(f"POVM operator {i} is not Hermitian")
            vals = np.linalg.eigvalsh(hermitian_part(op))
            if vals[0] < -TAU_PSD or vals[-1] > 1.0 + TAU_PSD:
                raise ValueError(f"POVM operator {i} is not between 0 and I (spectrum {vals[0]}..{vals[-1]})")
        completeness = sum(op.conj().T @ op for op in ops)
        deviation = float(np.max(np.abs(completeness - identity)))
        if deviation > TAU_HERM:
            raise ValueError(f"Incomplete POVM: sum of A^dagger A deviates from identity by {deviation}")
        self._system = system
        self._ops = tuple(_frozen(op) for op in ops)

    @classmethod
    def from_effects(cls, system: RegisterSystem, effects: Sequence) -> 'Povm':
        """
        Builds the POVM whose measurement operators are the square roots of the effects.
        """
        return cls(system, [psd_sqrt(effect) for effect in effects])

    @property
    def system(self) -> RegisterSystem:
        return self._system

    @property
    def operators(self) -> Tuple[np.ndarray, ...]:
        return self._ops

    def effects(self) -> List[np.ndarray]:
        return [op.conj().T @ op for op in self._ops]

    def __len__(self):
        return len(self._ops)
