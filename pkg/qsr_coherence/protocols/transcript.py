# Copyright 2026 (c) qsr-coherence contributors. All rights reserved. Issued under the Apache 2.0 License.

#
# Step-by-step record of a protocol run: what happened, what it cost, and which Bob-side
# operations were certified free.
#

import json
import logging
from typing import Any, Dict, List, NamedTuple, Optional, Sequence

import numpy as np

from qsr_coherence.coherence.resource_theory import COHERENCE, ResourceTheory
from qsr_coherence.errors import BoundViolationError
from qsr_coherence.qmat.registers import TAU_NORM, KrausChannel
from qsr_coherence.qmat.state_io import state_to_dict

logger = logging.getLogger(__name__)

QUBITS_SENT = "qubits_sent"
COBITS_SENT = "cobits_sent"
SINGLETS_CONSUMED = "singlets_consumed"
COHERENT_QUBITS_OUT = "coherent_qubits_out"
COUNTERS = [QUBITS_SENT, COBITS_SENT, SINGLETS_CONSUMED, COHERENT_QUBITS_OUT]


class TranscriptStep(NamedTuple):
    description: str
    snapshot: Any
    deltas: Dict[str, int]
    notes: Dict[str, Any]


def _plain(value):
    # numpy scalars and arrays into JSON types
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return _plain(value.tolist())
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating,)):
        return float(value)
    if isinstance(value, (complex, np.complexfloating)):
        return [float(np.real(value)), float(np.imag(value))]
    return value


class ProtocolTranscript(object):
    """
    Ordered steps of one protocol run with its resource counters and achieved fidelity.

    Counters only move through record(), which refuses to drive any of them negative.
    Bob-side operations are certified against a resource theory as they are recorded;
    a non-free operation raises BoundViolationError.
    """

    def __init__(self, protocol: str, theory: ResourceTheory = COHERENCE):
        self.protocol = protocol
        self.theory = theory
        self.steps: List[TranscriptStep] = []
        self.counters: Dict[str, int] = {name: 0 for name in COUNTERS}
        self.achieved_fidelity: Optional[float] = None
        self.metrics: Dict[str, Any] = {}
        self.outcome_distribution: Optional[List[float]] = None
        self.post_state = None
        self.certified: List[str] = []

    def record(self, description: str, snapshot=None, notes: Optional[Dict[str, Any]] = None, **deltas):
        for name, delta in deltas.items():
            if name not in self.counters:
                raise ValueError(f"Unknown counter {name!r}, expected one of {COUNTERS}")
            if self.counters[name] + delta < 0:
                raise ValueError(f"Counter {name} would become negative ({self.counters[name]} + {delta})")
        for name, delta in deltas.items():
            self.counters[name] += int(delta)
        self.steps.append(TranscriptStep(description, snapshot, dict(deltas), dict(notes or {})))
        logger.debug(f"[{self.protocol}] {description} {deltas if deltas else ''}")

    def certify_bob_operation(self, channel: KrausChannel, description: str):
        if not self.theory.free_op_test(channel):
            raise BoundViolationError(f"Bob's operation '{description}' is not a free {self.theory.name} operation")
        self.certified.append(description)

    def certify_bob_measurement(self, operators: Sequence[np.ndarray], description: str):
        for i, op in enumerate(operators):
            if not self.theory.free_measurement_test(op):
                raise BoundViolationError(f"Measurement operator {i} of '{description}' is not free "
                                          f"for {self.theory.name}")
        self.certified.append(description)

    def set_fidelity(self, value: float):
        value = float(value)
        if value < -TAU_NORM or value > 1.0 + TAU_NORM:
            raise ValueError(f"Fidelity {value} outside [0, 1]")
        self.achieved_fidelity = min(max(value, 0.0), 1.0)

    @property
    def purified_distance(self) -> Optional[float]:
        if self.achieved_fidelity is None:
            return None
        return max(0.0, 1.0 - self.achieved_fidelity ** 2) ** 0.5

    def absorb(self, other: 'ProtocolTranscript', prefix: str):
        """
        Appends the steps, counters and certifications of a sub-protocol run.
        """
        for step in other.steps:
            self.record(f"{prefix}: {step.description}", step.snapshot, step.notes, **step.deltas)
        self.certified.extend(f"{prefix}: {c}" for c in other.certified)

    def to_dict(self, include_snapshots: bool = False) -> dict:
        steps = []
        for step in self.steps:
            entry = {"description": step.description, "deltas": step.deltas, "notes": step.notes}
            if include_snapshots and step.snapshot is not None:
                entry["snapshot"] = state_to_dict(step.snapshot)
            steps.append(entry)
        data = {
            "protocol": self.protocol,
            "counters": dict(self.counters),
            "achieved_fidelity": self.achieved_fidelity,
            "purified_distance": self.purified_distance,
            "metrics": self.metrics,
            "outcome_distribution": self.outcome_distribution,
            "certified_bob_operations": list(self.certified),
            "steps": steps,
        }
        if include_snapshots and self.post_state is not None:
            data["post_state"] = state_to_dict(self.post_state)
        return _plain(data)

    def to_json(self, include_snapshots: bool = False, indent: Optional[int] = 2) -> str:
        return json.dumps(self.to_dict(include_snapshots), indent=indent, sort_keys=False)
