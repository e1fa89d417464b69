# Copyright 2026 (c) qsr-coherence contributors. All rights reserved. Issued under the Apache 2.0 License.

#
# Mixtures of unnormalized pure branches on one RegisterSystem. The weight of a branch is
# its squared norm; the tag carries its classical index (measurement outcomes so far).
#

from typing import Any, Dict, Iterable, List, Tuple

import numpy as np

from qsr_coherence.qmat.registers import DensityOperator, Labels, RegisterSystem, StateVector, as_label_list


class BranchEnsemble(object):

    def __init__(self, system: RegisterSystem, branches: Iterable[Tuple[np.ndarray, Any]] = ()):
        self.system = system
        self.branches: List[Tuple[np.ndarray, Any]] = []
        for vector, tag in branches:
            self.add(vector, tag)

    def add(self, vector, tag=None):
        vector = np.asarray(vector, dtype=complex).reshape(-1)
        if vector.shape[0] != self.system.dim:
            raise ValueError(f"Branch of size {vector.shape[0]} on a system of dimension {self.system.dim}")
        self.branches.append((vector, tag))

    def __len__(self):
        return len(self.branches)

    def weights(self) -> np.ndarray:
        return np.array([float(np.real(np.vdot(v, v))) for v, _ in self.branches])

    @property
    def total_weight(self) -> float:
        return float(np.sum(self.weights()))

    def weights_by_tag(self) -> Dict[Any, float]:
        totals: Dict[Any, float] = {}
        for (_, tag), w in zip(self.branches, self.weights()):
            totals[tag] = totals.get(tag, 0.0) + w
        return totals

    def _split(self, vector: np.ndarray, labels: List[str]) -> np.ndarray:
        kept = self.system.indices(labels)
        rest = [i for i in range(len(self.system)) if i not in kept]
        dk = self.system.dim_of(labels)
        return vector.reshape(self.system.dims).transpose(kept + rest).reshape(dk, -1)

    def reduced_state(self, keep: Labels) -> DensityOperator:
        """
        Sum over branches of the marginal on keep, in the order of keep.
        """
        labels = as_label_list(keep)
        dk = self.system.dim_of(labels)
        matrix = np.zeros((dk, dk), dtype=complex)
        for vector, _ in self.branches:
            m = self._split(vector, labels)
            matrix += m @ m.conj().T
        return DensityOperator(self.system.ordered(labels), matrix, subnormalized=True, check=False)

    def overlap_weight(self, target: StateVector) -> float:
        """
        Sum over branches of <t| Tr_rest(|v><v|) |t>, where t lives on a subset of the registers
        (matched by label, in t's order). Equals F^2 between t and the normalized mixture
        times the total weight.
        """
        labels = target.system.labels
        if target.system.dims != self.system.ordered(labels).dims:
            raise ValueError(f"Target {target.system} does not match the registers of {self.system}")
        total = 0.0
        for vector, _ in self.branches:
            projected = target.amplitudes.conj() @ self._split(vector, labels)
            total += float(np.real(np.vdot(projected, projected)))
        return total

    def map_branches(self, system: RegisterSystem, fn) -> 'BranchEnsemble':
        """
        New ensemble whose branches are fn(vector, tag) -> iterable of (vector, tag).
        """
        out = BranchEnsemble(system)
        for vector, tag in self.branches:
            for new_vector, new_tag in fn(vector, tag):
                out.add(new_vector, new_tag)
        return out
