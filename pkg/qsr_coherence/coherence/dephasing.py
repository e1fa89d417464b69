
#
# Collapsing maps. Dephasing in the computational basis of each register is the one
# shipped: Delta(rho) = sum_i |i><i| rho |i><i|, with Delta_RS = Delta_R (x) Delta_S.
#

from typing import Optional

import numpy as np

from qsr_coherence.qmat.registers import DensityOperator, Labels, RegisterSystem, as_label_list


def dephase_matrix(system: RegisterSystem, matrix: np.ndarray, labels: Optional[Labels] = None) -> np.ndarray:
    """
    Zeroes the entries of matrix that are off-diagonal in any of the named registers.
    All registers are dephased when labels is None.
    """
    labels = system.labels if labels is None else as_label_list(labels)
    n = len(system)
    t = np.array(matrix, dtype=complex).reshape(system.dims + system.dims)
    for i in system.indices(labels):
        d = system.dims[i]
        shape = [1] * (2 * n)
        shape[i] = shape[n + i] = d
        t = t * np.eye(d).reshape(shape)
    return t.reshape(system.dim, system.dim)


def dephase(rho: DensityOperator, labels: Optional[Labels] = None) -> DensityOperator:
    return DensityOperator(rho.system, dephase_matrix(rho.system, rho.matrix, labels),
                           subnormalized=rho.subnormalized, check=False)


class CollapsingMap(object):
    """
    Trace preserving map Delta acting register by register, with the tensor rule
    Delta_RS = Delta_R (x) Delta_S. Subclasses provide the per-register action and its adjoint.
    """

    name = "collapsing"
    surjective_wrt_free_ops = False

    def apply(self, rho: DensityOperator, labels: Optional[Labels] = None) -> DensityOperator:
        raise NotImplementedError

    def adjoint(self, system: RegisterSystem, operator: np.ndarray, labels: Optional[Labels] = None) -> np.ndarray:
        raise NotImplementedError

    def is_idempotent(self, rho: DensityOperator, labels: Optional[Labels] = None, tol: float = 1e-12) -> bool:
        once = self.apply(rho, labels)
        twice = self.apply(once, labels)
        return bool(np.max(np.abs(once.matrix - twice.matrix)) <= tol)


class DephasingMap(CollapsingMap):
    """
    Complete dephasing. It is self-adjoint, and every diagonal 0 <= Pi <= I is its own
    preimage, so the map is surjective onto the incoherent measurement operators.
    """

    name = "dephasing"
    surjective_wrt_free_ops = True

    def apply(self, rho: DensityOperator, labels: Optional[Labels] = None) -> DensityOperator:
        return dephase(rho, labels)

    def adjoint(self, system: RegisterSystem, operator: np.ndarray, labels: Optional[Labels] = None) -> np.ndarray:
        return dephase_matrix(system, operator, labels)


DEPHASING = DephasingMap()
