# Copyright 2026 (c) qsr-coherence contributors. All rights reserved. Issued under the Apache 2.0 License.

#
# Closed form redistribution rates, per copy of a pure state on R, A, B, C.
#
# Unrestricted receiver:
#   Q >= I(C:R|B) / 2,  Q + E >= S(C|B)
# Incoherent receiver (qubits):
#   Q >= { I(C:R|B) + R_c(rho_BC) - R_c(rho_B) } / 2
# and its specializations to trivial A and B (Schumacher, Slepian-Wolf, splitting).
# Cobit counts are twice the qubit counts, superdense coding being free in coherence theory.
#

import logging
import math
from typing import Dict, List, NamedTuple, Optional, Tuple

import pandas as pd

from qsr_coherence.coherence.dephasing import dephase
from qsr_coherence.coherence.resource_theory import COHERENCE, ResourceTheory
from qsr_coherence.entropy.hypothesis_testing import restricted_hypothesis_testing
from qsr_coherence.entropy.quantities import (EntropicValue, conditional_entropy, conditional_mutual_information,
                                              marginal_entropy, max_relative_entropy, mutual_information,
                                              relative_entropy, relative_entropy_of_coherence, von_neumann_entropy)
from qsr_coherence.entropy.second_order import pruned_max_relative_entropy
from qsr_coherence.errors import BoundViolationError, SupportViolationError
from qsr_coherence.protocols.redistribution import PARTS, QsrInstance
from qsr_coherence.qmat.operations import reduced_state, reorder, tensor, tensor_vectors
from qsr_coherence.qmat.registers import DensityOperator, RegisterSystem, StateVector

logger = logging.getLogger(__name__)

FORM_TOL = 1e-9
ORDER_TOL = 1e-9
# asserted for coherence theory, where superdense coding is a free operation
SUPERDENSE_FACTOR = 2.0

UNITS = ["qubits", "cobits"]
RATE_UNITS = {
    "q_min_std": "qubits",
    "q_plus_e_min_std": "qubits+ebits",
    "sum_bound_slepian_wolf": "qubits+ebits+cobits",
    "q_min_incoherent": "qubits",
    "q_min_schumacher_incoherent": "qubits",
    "q_min_splitting_incoherent": "qubits",
    "classical_rate_incoherent": "cobits",
}
QUBIT_COLUMNS = [name for name, unit in RATE_UNITS.items() if unit == "qubits"]


class QsrParts(NamedTuple):
    """
    Register labels playing R, A, B and C. A part may hold several registers (copies) or none.
    """
    r: List[str]
    a: List[str]
    b: List[str]
    c: List[str]

    @classmethod
    def default(cls, system: RegisterSystem) -> 'QsrParts':
        unknown = [label for label in system.labels if label not in PARTS]
        if unknown:
            raise ValueError(f"Registers {unknown} are not among {PARTS}, name the parts explicitly")
        return cls(*[[label] if label in system else [] for label in PARTS])

    @classmethod
    def parse(cls, text: str) -> 'QsrParts':
        """
        "R1+R2,A1+A2,B1+B2,C1+C2": parts separated by commas, registers inside a part by '+'.
        """
        fields = text.split(",")
        if len(fields) != 4:
            raise ValueError(f"Expected four comma separated parts R,A,B,C, got {text!r}")
        return cls(*[[label.strip() for label in field.split("+") if label.strip()] for field in fields])

    def merged_reference(self) -> 'QsrParts':
        """
        Bob's side information handed to the reference, leaving a splitting task.
        """
        return QsrParts(self.r + self.b, self.a, [], self.c)

    def check(self, system: RegisterSystem):
        labels = self.r + self.a + self.b + self.c
        if len(set(labels)) != len(labels):
            raise ValueError(f"Parts overlap: {self}")
        if sorted(labels) != sorted(system.labels):
            raise ValueError(f"Parts {self} do not cover the registers {system.labels}")
        if not self.c:
            raise ValueError("The redistributed part C is empty")


def _resolve(psi: StateVector, parts: Optional[QsrParts]) -> QsrParts:
    parts = QsrParts.default(psi.system) if parts is None else parts
    parts.check(psi.system)
    return parts


def _marginal(psi: StateVector, labels: List[str]) -> DensityOperator:
    return reorder(reduced_state(psi, labels), labels)


def _finite(value: EntropicValue, what: str) -> float:
    if not value.finite:
        raise SupportViolationError(f"{what} is infinite")
    return value.value


def _trivial(psi: StateVector, labels: List[str]) -> bool:
    return not labels or psi.system.dim_of(labels) == 1


def iid_copies(psi: StateVector, n: int) -> StateVector:
    """
    psi^{(x)n} with the n copies of each register merged into one register of dimension d^n.
    The merged basis is the product basis, so dephasing commutes with the merge.
    """
    if n < 1:
        raise ValueError(f"Number of copies must be positive, got {n}")
    labels = psi.system.labels

    def copy(j):
        return psi.relabel({label: f"{label}#{j}" for label in labels})

    state = copy(1)
    for j in range(2, n + 1):
        state = tensor_vectors(state, copy(j))
    order = [f"{label}#{j}" for label in labels for j in range(1, n + 1)]
    merged = RegisterSystem([(label, psi.system.dim_of(label) ** n) for label in labels])
    return StateVector(merged, state.reorder(order).amplitudes, check=False)


def standard_qsr_rates(psi: StateVector, parts: Optional[QsrParts] = None) -> Tuple[float, float]:
    """
    Optimal rates with an unrestricted receiver: Q = I(C:R|B)/2 and Q + E = S(C|B).
    """
    parts = _resolve(psi, parts)
    rho = reduced_state(psi, parts.r + parts.b + parts.c)
    q = 0.5 * conditional_mutual_information(rho, parts.c, parts.r, parts.b)
    q_plus_e = conditional_entropy(rho, parts.c, parts.b)
    return max(q, 0.0), q_plus_e


def slepian_wolf_sum_bound(psi: StateVector, parts: Optional[QsrParts] = None) -> float:
    """
    S(Delta(rho_BC)) - S(Delta(rho_B)), a lower bound on Q + E + C. It is a necessary condition
    only; no protocol is claimed to reach it.
    """
    parts = _resolve(psi, parts)
    dephased = dephase(reduced_state(psi, parts.b + parts.c))
    return marginal_entropy(dephased, parts.b + parts.c) - marginal_entropy(dephased, parts.b)


class IncoherentRateForms(NamedTuple):
    """
    Three expressions of the incoherent receiver's qubit rate, equal by construction.
    """
    coherence_form: float
    relative_entropy_form: float
    d_difference_form: float

    def spread(self) -> float:
        return max(self) - min(self)


def _incoherent_sigma(psi: StateVector, parts: QsrParts, sigma_c: Optional[DensityOperator]) -> DensityOperator:
    rho_c = _marginal(psi, parts.c)
    if sigma_c is None:
        return dephase(rho_c)
    if sorted(sigma_c.system.labels) != sorted(parts.c):
        raise ValueError(f"sigma_C lives on {sigma_c.system.labels}, expected {parts.c}")
    sigma_c = reorder(sigma_c, parts.c)
    if not COHERENCE.free_state_test(sigma_c):
        raise ValueError("sigma_C must be incoherent (diagonal)")
    return sigma_c


def incoherent_rate_forms(psi: StateVector, parts: Optional[QsrParts] = None,
                          sigma_c: Optional[DensityOperator] = None) -> IncoherentRateForms:
    """
    Computes, in qubits per copy,

        { I(C:R|B) + R_c(rho_BC) - R_c(rho_B) } / 2
        { I(R:C|B) + D(rho_BC || Delta(rho_BC)) - D(rho_B || Delta(rho_B)) } / 2
        { D(rho_RBC || rho_RB (x) sigma_C) - D(Delta(rho_BC) || Delta(rho_B) (x) sigma_C) } / 2

    The last form holds for any incoherent sigma_C whose support contains rho_C (the dephased
    marginal by default).

    Args:
        psi: pure state
        parts: labels playing R, A, B, C (R, A, B, C by default)
        sigma_c: incoherent state on the C labels

    Returns: the three forms
    """
    parts = _resolve(psi, parts)
    r, b, c = parts.r, parts.b, parts.c
    sigma = _incoherent_sigma(psi, parts, sigma_c)
    rho_rbc = _marginal(psi, r + b + c)
    rho_bc = _marginal(psi, b + c)
    rho_b = _marginal(psi, b) if b else None

    cmi = conditional_mutual_information(rho_rbc, c, r, b)
    coherence_form = 0.5 * (cmi + relative_entropy_of_coherence(rho_bc)
                            - (relative_entropy_of_coherence(rho_b) if b else 0.0))

    gap_bc = _finite(relative_entropy(rho_bc, dephase(rho_bc)), "D(rho_BC || Delta(rho_BC))")
    gap_b = _finite(relative_entropy(rho_b, dephase(rho_b)), "D(rho_B || Delta(rho_B))") if b else 0.0
    relative_entropy_form = 0.5 * (cmi + gap_bc - gap_b)

    reference = tensor(_marginal(psi, r + b), sigma) if r + b else sigma
    upper = _finite(relative_entropy(rho_rbc, reference), "D(rho_RBC || rho_RB (x) sigma_C)")
    dephased_reference = tensor(dephase(rho_b), sigma) if b else sigma
    lower = _finite(relative_entropy(dephase(rho_bc), dephased_reference),
                    "D(Delta(rho_BC) || Delta(rho_B) (x) sigma_C)")
    d_difference_form = 0.5 * (upper - lower)
    return IncoherentRateForms(coherence_form, relative_entropy_form, d_difference_form)


def incoherent_qsr_rate(psi: StateVector, parts: Optional[QsrParts] = None,
                        sigma_c: Optional[DensityOperator] = None) -> float:
    """
    Optimal qubit rate with an incoherent receiver. Raises ArithmeticError when the three
    equivalent forms disagree beyond FORM_TOL.
    """
    forms = incoherent_rate_forms(psi, parts, sigma_c)
    if forms.spread() > FORM_TOL:
        raise ArithmeticError(f"Incoherent rate forms disagree: {forms}")
    return forms.coherence_form


def incoherent_schumacher_rate(rho_c: DensityOperator) -> float:
    """
    { S(rho_C) + S(Delta(rho_C)) } / 2, C purified by the reference alone.
    """
    return 0.5 * (von_neumann_entropy(rho_c) + von_neumann_entropy(dephase(rho_c)))


def incoherent_slepian_wolf_rate(psi: StateVector, parts: Optional[QsrParts] = None) -> float:
    """
    { I(C:R) + R_c(rho_BC) - R_c(rho_B) } / 2, for states with trivial A.
    """
    parts = _resolve(psi, parts)
    if not _trivial(psi, parts.a):
        raise ValueError(f"Slepian-Wolf rate needs a trivial A part, got {parts.a}")
    r, b, c = parts.r, parts.b, parts.c
    rho = _marginal(psi, r + b + c)
    gain = relative_entropy_of_coherence(_marginal(psi, b + c))
    if b:
        gain -= relative_entropy_of_coherence(_marginal(psi, b))
    return 0.5 * (mutual_information(rho, c, r) + gain)


def incoherent_splitting_rate(psi: StateVector, parts: Optional[QsrParts] = None) -> float:
    """
    { I(C:R) + R_c(rho_C) } / 2, for states with trivial B.
    """
    parts = _resolve(psi, parts)
    if not _trivial(psi, parts.b):
        raise ValueError(f"Splitting rate needs a trivial B part, got {parts.b}")
    rho = _marginal(psi, parts.r + parts.c)
    return 0.5 * (mutual_information(rho, parts.c, parts.r) + relative_entropy_of_coherence(_marginal(psi, parts.c)))


def classical_rate_incoherent(psi: StateVector, parts: Optional[QsrParts] = None,
                              sigma_c: Optional[DensityOperator] = None) -> float:
    """
    Forward classical communication rate: twice the qubit rate.
    """
    return SUPERDENSE_FACTOR * incoherent_qsr_rate(psi, parts, sigma_c)


class SplittingRate(NamedTuple):
    value: float
    regularized: bool


def splitting_rate_general(psi: StateVector, theory: ResourceTheory = COHERENCE,
                           parts: Optional[QsrParts] = None) -> SplittingRate:
    """
    Cobit rate of state splitting for a resource theory: I(R:C) + lim (1/n) min D(rho_C^n || sigma).

    Theories with an additive closed form (coherence) collapse the regularization. Otherwise
    the single letter minimum over theory.free_states is returned with regularized=False.
    """
    parts = _resolve(psi, parts)
    if not _trivial(psi, parts.b):
        raise ValueError(f"State splitting needs a trivial B part, got {parts.b}")
    rho_rc = _marginal(psi, parts.r + parts.c)
    rho_c = _marginal(psi, parts.c)
    info = mutual_information(rho_rc, parts.r, parts.c)
    if theory.relative_entropy_of_resource is not None and theory.additive:
        return SplittingRate(info + theory.relative_entropy_of_resource(rho_c), True)
    if theory.free_states is None:
        raise ValueError(f"Resource theory {theory.name} has neither a closed form nor candidate free states")
    candidates = theory.free_states(rho_c.system)
    best = min(relative_entropy(rho_c, sigma).value for sigma in candidates)
    logger.warning(f"Splitting rate for {theory.name}: regularization not evaluated, single letter value")
    return SplittingRate(info + best, False)


class OneShotBound(NamedTuple):
    """
    Cobits sufficient for one-shot redistribution, D_max - D_F + 2 log2(2 / (eps1 gamma^2)).
    value uses the unsmoothed D_max; pruned_value the eigenvalue pruning upper bound on the
    smoothed one, at the same eps1.
    """
    value: float
    pruned_value: float
    d_max: float
    d_max_pruned: float
    d_f: float
    constant: float


def achievability_constant(eps1: float, gamma: float) -> float:
    return 2.0 * math.log2(2.0 / (eps1 * gamma ** 2))


def one_shot_achievability_bound(instance: QsrInstance) -> OneShotBound:
    d_max = max_relative_entropy(instance.phi_rbc, instance.product(["R", "B"]))
    d_max = _finite(d_max, "D_max(Phi_RBC || Phi_RB (x) sigma_C)")
    pruned, removed = pruned_max_relative_entropy(instance.phi_rbc, instance.product(["R", "B"]), instance.eps1)
    d_f = restricted_hypothesis_testing(instance.phi_bc, instance.product(["B"]), instance.eps2 ** 4,
                                        instance.theory.collapsing).value
    constant = achievability_constant(instance.eps1, instance.gamma)
    logger.debug(f"One-shot bound: D_max={d_max:.6g}, pruned={pruned.value:.6g} (weight {removed:.3g}), "
                 f"D_F={d_f:.6g}")
    return OneShotBound(d_max - d_f + constant, pruned.value - d_f + constant, d_max, pruned.value, d_f, constant)


class ConverseAudit(NamedTuple):
    achievability: float
    converse: float
    gap: float


def audit_converse_equals_achievability(psi: StateVector, parts: Optional[QsrParts] = None,
                                        sigma_c: Optional[DensityOperator] = None,
                                        tol: float = FORM_TOL) -> ConverseAudit:
    """
    The cobit achievability expression D(rho_RBC || rho_RB (x) sigma_C) - D(Delta(rho_BC) || ...)
    against the converse I(R:C|B) + D(rho_BC || Delta(rho_BC)) - D(rho_B || Delta(rho_B)).
    """
    forms = incoherent_rate_forms(psi, parts, sigma_c)
    achievability = SUPERDENSE_FACTOR * forms.d_difference_form
    converse = SUPERDENSE_FACTOR * forms.relative_entropy_form
    gap = abs(achievability - converse)
    if gap > tol:
        raise BoundViolationError(f"Converse {converse} and achievability {achievability} differ by {gap}")
    return ConverseAudit(achievability, converse, gap)


def converse_penalty(psi: StateVector, eps: float, parts: Optional[QsrParts] = None,
                     theory: ResourceTheory = COHERENCE) -> float:
    """
    (5 + C_BC) eps log2 |RBC|, the per copy slack of the finite eps converse.
    """
    if not 0.0 < eps < 1.0:
        raise ValueError(f"eps must lie in (0, 1), got {eps}")
    if theory.converse_constant is None:
        raise ValueError(f"Resource theory {theory.name} has no converse constant")
    parts = _resolve(psi, parts)
    system = psi.system
    c_bc = theory.converse_constant(system.subsystem(parts.b + parts.c))
    return (5.0 + c_bc) * eps * math.log2(system.dim_of(parts.r + parts.b + parts.c))


class RateReport(NamedTuple):
    q_min_std: float
    q_plus_e_min_std: float
    sum_bound_slepian_wolf: float
    q_min_incoherent: float
    q_min_schumacher_incoherent: float
    q_min_splitting_incoherent: float
    classical_rate_incoherent: float

    def to_dict(self, units: str = "qubits") -> Dict[str, float]:
        """
        Rates keyed by name, with the qubit columns doubled when units is "cobits".
        """
        if units not in UNITS:
            raise ValueError(f"Unknown units {units!r}, expected one of {UNITS}")
        factor = SUPERDENSE_FACTOR if units == "cobits" else 1.0
        row = {"units": units}
        for name, value in self._asdict().items():
            row[name] = float(value) * factor if name in QUBIT_COLUMNS else float(value)
        return row

    def to_frame(self, units: str = "qubits") -> pd.DataFrame:
        return pd.DataFrame([self.to_dict(units)])


def rate_report(psi: StateVector, parts: Optional[QsrParts] = None,
                sigma_c: Optional[DensityOperator] = None) -> RateReport:
    """
    Every rate of psi. The Schumacher column treats C as purified by everything else, the
    splitting column hands B to the reference.
    """
    parts = _resolve(psi, parts)
    q_std, q_plus_e = standard_qsr_rates(psi, parts)
    q_inc = incoherent_qsr_rate(psi, parts, sigma_c)
    q_max = q_std + 0.5 * SUPERDENSE_FACTOR * math.log2(psi.system.dim_of(parts.c))
    if not q_std - ORDER_TOL <= q_inc <= q_max + ORDER_TOL:
        raise BoundViolationError(f"Incoherent rate {q_inc} outside [{q_std}, {q_max}]")
    report = RateReport(
        q_min_std=q_std,
        q_plus_e_min_std=q_plus_e,
        sum_bound_slepian_wolf=slepian_wolf_sum_bound(psi, parts),
        q_min_incoherent=q_inc,
        q_min_schumacher_incoherent=incoherent_schumacher_rate(_marginal(psi, parts.c)),
        q_min_splitting_incoherent=incoherent_splitting_rate(psi, parts.merged_reference()),
        classical_rate_incoherent=SUPERDENSE_FACTOR * q_inc,
    )
    logger.info(f"Rate report: {report}")
    return report
