# Copyright 2026 (c) qsr-coherence contributors. All rights reserved. Issued under the Apache 2.0 License.

#
# Coherence creation from q noiseless qubit channel uses and e shared singlets.
# Each used singlet is rotated by Alice to (|0>|+> + |1>|->)/sqrt(2), her half is sent and Bob
# turns the pair into |+>|+> with controlled-Z. Channel uses left over carry fresh |+> states.
# Bob ends with c = q + min(e, q) maximally coherent qubits.
#

import logging
from typing import List, Optional

import numpy as np

from qsr_coherence.coherence.incoherent import HADAMARD, plus_state, singlet_incoherent_unitary
from qsr_coherence.entropy.continuity import coherence_gain_bound
from qsr_coherence.entropy.quantities import relative_entropy_of_coherence
from qsr_coherence.errors import BoundViolationError
from qsr_coherence.protocols.budget import check_amplitudes
from qsr_coherence.protocols.transcript import (COHERENT_QUBITS_OUT, QUBITS_SENT, SINGLETS_CONSUMED,
                                                ProtocolTranscript)
from qsr_coherence.qmat.operations import apply_local_unitary, reduced_state, tensor_vectors, vector_fidelity
from qsr_coherence.qmat.random_states import qubits
from qsr_coherence.qmat.registers import KrausChannel, RegisterSystem, StateVector

logger = logging.getLogger(__name__)

CREATION_FIDELITY_TOL = 1e-9
GAIN_TOL = 1e-9


def _bob_coherence(psi: StateVector, bob: List[str]) -> float:
    if not bob:
        return 0.0
    return relative_entropy_of_coherence(reduced_state(psi, bob))


def coherence_creation(q: int, e: int, budget: Optional[int] = None) -> ProtocolTranscript:
    """
    Simulates the creation of q + min(e, q) maximally coherent qubits at Bob.

    Args:
        q: number of qubit channel uses from Alice to Bob
        e: number of singlets shared beforehand
        budget: amplitude budget of the simulated global state, MAX_AMPLITUDES by default

    Returns: the transcript, with Bob's final state as post_state and its fidelity to |+>^c
    """
    q, e = int(q), int(e)
    if q < 0 or e < 0:
        raise ValueError(f"q and e must be nonnegative, got q={q}, e={e}")
    used = min(e, q)
    c = q + used
    check_amplitudes("coherence creation", 2 ** c, budget, hint=f"q={q}, e={e} needs {c} qubits")

    transcript = ProtocolTranscript("coherence-creation")
    transcript.metrics.update({"q": q, "e": e, "c_expected": c})

    psi = StateVector(RegisterSystem([]), [1.0])
    bell = np.array([1.0, 0.0, 0.0, 1.0]) / np.sqrt(2.0)
    for k in range(1, used + 1):
        psi = tensor_vectors(psi, StateVector(qubits([f"A{k}", f"B{k}"]), bell))
    bob = [f"B{k}" for k in range(1, used + 1)]
    transcript.record(f"Share {used} singlets", snapshot=psi, notes={"unused_singlets": e - used})

    cz = singlet_incoherent_unitary()
    gains = []
    bound = coherence_gain_bound(2)
    for k in range(1, used + 1):
        psi = apply_local_unitary(psi, HADAMARD, [f"A{k}"])
        before = _bob_coherence(psi, bob)
        bob.append(f"A{k}")
        after = _bob_coherence(psi, bob)
        gains.append(after - before)
        if after - before > bound + GAIN_TOL:
            raise BoundViolationError(f"Bob's coherence grew by {after - before} > {bound} with one qubit")
        transcript.record(f"Alice rotates A{k} and sends it", **{QUBITS_SENT: 1, SINGLETS_CONSUMED: 1})

        local = qubits([f"A{k}", f"B{k}"])
        transcript.certify_bob_operation(KrausChannel.unitary(local, cz), f"controlled-Z on A{k},B{k}")
        psi = apply_local_unitary(psi, cz, [f"A{k}", f"B{k}"])
        transcript.record(f"Bob applies controlled-Z on A{k},B{k}")

    for k in range(1, q - used + 1):
        label = f"F{k}"
        before = _bob_coherence(psi, bob)
        psi = tensor_vectors(psi, plus_state(1, [label]))
        bob.append(label)
        after = _bob_coherence(psi, bob)
        gains.append(after - before)
        if after - before > bound + GAIN_TOL:
            raise BoundViolationError(f"Bob's coherence grew by {after - before} > {bound} with one qubit")
        transcript.record(f"Alice sends a fresh |+> in {label}", **{QUBITS_SENT: 1})

    if c == 0:
        transcript.set_fidelity(1.0)
    else:
        final = reduced_state(psi, bob)
        target = plus_state(c, final.system.labels)
        transcript.set_fidelity(vector_fidelity(target, final))
        transcript.post_state = final
    if transcript.achieved_fidelity < 1.0 - CREATION_FIDELITY_TOL:
        raise BoundViolationError(f"Coherence creation reached fidelity {transcript.achieved_fidelity} < 1")

    transcript.record(f"Bob holds {c} maximally coherent qubits", **{COHERENT_QUBITS_OUT: c})
    transcript.metrics.update({"c": c, "coherence_gains": gains, "max_gain": max(gains, default=0.0)})
    logger.info(f"Coherence creation q={q}, e={e}: c={c}")
    return transcript
