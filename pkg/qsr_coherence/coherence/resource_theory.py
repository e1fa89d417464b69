# Copyright 2026 (c) qsr-coherence contributors. All rights reserved. Issued under the Apache 2.0 License.

#
# Resource theories as named bundles of membership tests. Only coherence is shipped; other
# theories register an instance in RESOURCE_THEORIES.
#

import math
from typing import Callable, Dict, List, Optional

import numpy as np

from qsr_coherence.coherence.dephasing import DEPHASING, CollapsingMap
from qsr_coherence.coherence.incoherent import INCOHERENCE_TOL, is_incoherent_channel
from qsr_coherence.entropy.quantities import relative_entropy_of_coherence
from qsr_coherence.qmat.matrix_functions import off_diagonal_norm
from qsr_coherence.qmat.registers import DensityOperator, KrausChannel, RegisterSystem


def is_incoherent_state(rho: DensityOperator, tol: float = INCOHERENCE_TOL) -> bool:
    return off_diagonal_norm(rho.matrix) <= tol


def is_incoherent_operation(ch: KrausChannel) -> bool:
    return is_incoherent_channel(ch)[0]


def is_incoherent_measurement_operator(operator: np.ndarray, tol: float = INCOHERENCE_TOL) -> bool:
    """
    Diagonal operators with entries in [0, 1]. They are exactly the images of 0 <= O <= I
    under the dephasing adjoint; non-diagonal operators are rejected.
    """
    operator = np.asarray(operator)
    if off_diagonal_norm(operator) > tol:
        return False
    diagonal = np.diag(operator)
    if np.max(np.abs(diagonal.imag), initial=0.0) > tol:
        return False
    return bool(np.all(diagonal.real >= -tol) and np.all(diagonal.real <= 1.0 + tol))


def coherence_converse_constant(system: RegisterSystem) -> float:
    """
    max_n (1/n) min over free tau of ||log tau||_inf, which is log2 |R| for coherence.
    """
    return math.log2(system.dim)


class ResourceTheory(object):
    """
    Free states, free operations and free measurement operators of a resource theory,
    with an optional collapsing map.

    relative_entropy_of_resource, when given, is the closed form of min D(rho||sigma) over
    free sigma; free_states, when given, lists candidate free states of a system for theories
    without a closed form.
    """

    def __init__(self, name: str,
                 free_state_test: Callable[[DensityOperator], bool],
                 free_op_test: Callable[[KrausChannel], bool],
                 free_measurement_test: Callable[[np.ndarray], bool],
                 collapsing: Optional[CollapsingMap] = None,
                 relative_entropy_of_resource: Optional[Callable[[DensityOperator], float]] = None,
                 free_states: Optional[Callable[[RegisterSystem], List[DensityOperator]]] = None,
                 converse_constant: Optional[Callable[[RegisterSystem], float]] = None,
                 additive: bool = False):
        self.name = name
        self.free_state_test = free_state_test
        self.free_op_test = free_op_test
        self.free_measurement_test = free_measurement_test
        self.collapsing = collapsing
        self.relative_entropy_of_resource = relative_entropy_of_resource
        self.free_states = free_states
        self.converse_constant = converse_constant
        self.additive = additive

    def __repr__(self):
        return f"ResourceTheory({self.name})"


COHERENCE = ResourceTheory(
    name="coherence",
    free_state_test=is_incoherent_state,
    free_op_test=is_incoherent_operation,
    free_measurement_test=is_incoherent_measurement_operator,
    collapsing=DEPHASING,
    relative_entropy_of_resource=relative_entropy_of_coherence,
    converse_constant=coherence_converse_constant,
    additive=True,
)

RESOURCE_THEORIES: Dict[str, ResourceTheory] = {
    COHERENCE.name: COHERENCE,
}


def get_resource_theory(name: str) -> ResourceTheory:
    try:
        return RESOURCE_THEORIES[name]
    except KeyError:
        raise ValueError(f"Unknown resource theory {name!r}, expected one of {sorted(RESOURCE_THEORIES)}")
