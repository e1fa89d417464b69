# Copyright 2026 (c) qsr-coherence contributors. All rights reserved. Issued under the Apache 2.0 License.

#
# One-shot state redistribution with an incoherent receiver.
#
# Alice holds A and C of a pure state on R, A, B, C and must move C to Bob, who holds B and may
# only use free operations. They share n purifications |sigma>_{L_j C_j} of a free state sigma_C.
#
#   xi = Phi_RABC (x) |sigma>^{(x)n}
#   mu = n^{-1/2} sum_j |j>_J Phi_{RBAC_j} (x) |0>_{L_j} (x) |sigma>_{L_i C_i} (i != j)
#
# Alice applies the Uhlmann isometry taking xi to the purification of mu closest to it, measures J
# and sends which block of b copies holds C. Bob moves the block to C_1..C_b and tests B C_k with
# {Pi, I - Pi} for k = 1..b, swapping C_k into C_1 when Pi fires.
#

import logging
import math
from typing import Dict, List, NamedTuple, Optional

import numpy as np

from qsr_coherence.coherence.incoherent import swap_unitary
from qsr_coherence.coherence.measurements import neumark_dilation, neumark_operators
from qsr_coherence.coherence.resource_theory import COHERENCE, ResourceTheory, is_incoherent_measurement_operator
from qsr_coherence.entropy.hypothesis_testing import restricted_hypothesis_test
from qsr_coherence.entropy.quantities import max_relative_entropy
from qsr_coherence.errors import BoundViolationError, SupportViolationError
from qsr_coherence.protocols.budget import check_amplitudes
from qsr_coherence.protocols.convex_split import copy_label, prescribed_copies
from qsr_coherence.protocols.ensemble import BranchEnsemble
from qsr_coherence.protocols.transcript import COBITS_SENT, ProtocolTranscript
from qsr_coherence.protocols.uhlmann import uhlmann_isometry
from qsr_coherence.qmat.matrix_functions import kernel_leakage
from qsr_coherence.qmat.operations import contract_local, purify, reduced_state, tensor, tensor_vectors
from qsr_coherence.qmat.registers import (SUPPORT_TOL, DensityOperator, KrausChannel, Povm, RegisterSystem,
                                          StateVector)

logger = logging.getLogger(__name__)

PARTS = ["R", "A", "B", "C"]
J_LABEL = "J"
L_LABEL = "L"
BOUND_SLACK = 1e-8
CEIL_SLACK = 1e-12
BRANCH_CUTOFF = 1e-30


def _padded(psi: StateVector) -> StateVector:
    unknown = [label for label in psi.system.labels if label not in PARTS]
    if unknown:
        raise ValueError(f"Redistribution states use registers {PARTS}, got unknown {unknown}")
    missing = [(label, 1) for label in PARTS if label not in psi.system]
    system = psi.system.concat(RegisterSystem(missing)) if missing else psi.system
    return StateVector(system, psi.amplitudes).reorder(PARTS)


class QsrInstance(object):
    """
    A redistribution task: pure psi on R, A, B, C (missing registers get dimension 1), the
    accuracies eps1, eps2, gamma in (0, 1), the free state sigma_C (dephased rho_C by default)
    and optional overrides of n and b.
    """

    def __init__(self, psi: StateVector, eps1: float, eps2: float, gamma: float,
                 sigma_c: Optional[DensityOperator] = None, n_override: Optional[int] = None,
                 b_override: Optional[int] = None, theory: ResourceTheory = COHERENCE):
        for name, value in [("eps1", eps1), ("eps2", eps2), ("gamma", gamma)]:
            if not 0.0 < value < 1.0:
                raise ValueError(f"{name} must lie in (0, 1), got {value}")
        for name, value in [("n_override", n_override), ("b_override", b_override)]:
            if value is not None and int(value) < 1:
                raise ValueError(f"{name} must be a positive integer, got {value}")
        self.psi = _padded(psi)
        self.eps1, self.eps2, self.gamma = float(eps1), float(eps2), float(gamma)
        self.n_override = None if n_override is None else int(n_override)
        self.b_override = None if b_override is None else int(b_override)
        self.theory = theory

        rho_c = reduced_state(self.psi, "C")
        if sigma_c is None:
            if theory.collapsing is None:
                raise ValueError(f"Resource theory {theory.name} has no collapsing map, sigma_C must be given")
            sigma_c = theory.collapsing.apply(rho_c)
        else:
            if sigma_c.system.dims != rho_c.system.dims:
                raise ValueError(f"sigma_C lives on {sigma_c.system}, expected {rho_c.system}")
            sigma_c = DensityOperator(rho_c.system, sigma_c.matrix)
        if not theory.free_state_test(sigma_c):
            raise ValueError(f"sigma_C is not a free state of {theory.name}")
        leak = kernel_leakage(rho_c.matrix, sigma_c.matrix)
        if leak > SUPPORT_TOL:
            raise SupportViolationError(f"supp(rho_C) is not inside supp(sigma_C) (leakage {leak})")
        self.sigma_c = sigma_c

    def dim(self, label: str) -> int:
        return self.psi.system.dim_of(label)

    @property
    def phi_rbc(self) -> DensityOperator:
        return reduced_state(self.psi, ["R", "B", "C"])

    @property
    def phi_bc(self) -> DensityOperator:
        return reduced_state(self.psi, ["B", "C"])

    def product(self, labels: List[str]) -> DensityOperator:
        """
        Phi_labels (x) sigma_C.
        """
        return tensor(reduced_state(self.psi, labels), self.sigma_c)

    def __repr__(self):
        return (f"QsrInstance({self.psi.system!r}, eps1={self.eps1}, eps2={self.eps2}, gamma={self.gamma}, "
                f"n_override={self.n_override}, b_override={self.b_override})")


class QsrParameters(NamedTuple):
    k: float
    delta: float
    n: int
    d_f: float
    b: int
    b_clamped: bool
    cobits: int
    pi_bc: np.ndarray
    acceptance: float
    type_two: float
    n_overridden: bool
    b_overridden: bool


def cobit_count(n: int, b: int) -> int:
    if b >= n:
        return 0
    return int(math.ceil(math.log2(n / b) - CEIL_SLACK))


def qsr_parameters(instance: QsrInstance) -> QsrParameters:
    """
    k = D_max(Phi_RBC || Phi_RB (x) sigma_C) (unsmoothed), n = ceil(2^k / eps1^2),
    D_F = D_F^{eps2^4}(Phi_BC || Phi_B (x) sigma_C) with its optimal free test Pi_BC,
    b = ceil(gamma^4 2^{D_F}) clamped to [1, n], and ceil(log2(n / b)) cobits.
    """
    k = max_relative_entropy(instance.phi_rbc, instance.product(["R", "B"]))
    if not k.finite:
        raise SupportViolationError("D_max(Phi_RBC || Phi_RB (x) sigma_C) is infinite")
    delta = instance.eps1 ** 2
    n = instance.n_override if instance.n_override is not None else prescribed_copies(k.value, delta)

    test = restricted_hypothesis_test(instance.phi_bc, instance.product(["B"]), instance.eps2 ** 4,
                                      instance.theory.collapsing)
    d_f = test.value.value
    if instance.b_override is not None:
        b = instance.b_override
    elif not test.value.finite:
        b = n
    else:
        b = int(math.ceil(instance.gamma ** 4 * 2.0 ** d_f - 1e-9))
    clamped = not 1 <= b <= n
    if clamped:
        logger.warning(f"b={b} outside [1, n={n}], clamped")
        b = min(max(b, 1), n)
    cobits = cobit_count(n, b)
    logger.info(f"QSR parameters: k={k.value:.6g}, n={n}, D_F={d_f:.6g}, b={b}, cobits={cobits}")
    return QsrParameters(k.value, delta, n, d_f, b, clamped, cobits, test.operator, test.acceptance,
                         test.type_two, instance.n_override is not None, instance.b_override is not None)


def claim_chain_value(params: QsrParameters) -> float:
    """
    (b Tr(Pi Phi_B (x) sigma_C) + 1 - Tr(Pi Phi_BC))^{1/4}, the decoder's error estimate.
    """
    value = params.b * params.type_two + 1.0 - params.acceptance
    return max(value, 0.0) ** 0.25


def _sigma_purification(instance: QsrInstance) -> StateVector:
    return purify(instance.sigma_c, L_LABEL)


def copies_system(instance: QsrInstance, count: int) -> RegisterSystem:
    """
    R, A, B, L_1..L_count, C_1..C_count: the registers left once J is measured.
    """
    d_l = _sigma_purification(instance).system.dim_of(L_LABEL)
    d_c = instance.dim("C")
    registers = [(label, instance.dim(label)) for label in ["R", "A", "B"]]
    registers += [(copy_label(L_LABEL, i), d_l) for i in range(1, count + 1)]
    registers += [(copy_label("C", i), d_c) for i in range(1, count + 1)]
    return RegisterSystem(registers)


def _placement(instance: QsrInstance, purification: StateVector, count: int, j: int) -> np.ndarray:
    """
    Phi_{RBAC_j} (x) |0>_{L_j} (x) |sigma>_{L_i C_i} for i != j, on copies_system(instance, count).
    """
    d_l = purification.system.dim_of(L_LABEL)
    state = instance.psi.relabel({"C": copy_label("C", j)})
    for i in range(1, count + 1):
        if i == j:
            zero = np.zeros(d_l)
            zero[0] = 1.0
            part = StateVector(RegisterSystem([(copy_label(L_LABEL, i), d_l)]), zero)
        else:
            part = purification.relabel({"C": copy_label("C", i), L_LABEL: copy_label(L_LABEL, i)})
        state = tensor_vectors(state, part)
    return state.reorder(copies_system(instance, count).labels).amplitudes


def xi_state(instance: QsrInstance, n: int) -> StateVector:
    purification = _sigma_purification(instance)
    state = instance.psi
    for i in range(1, n + 1):
        state = tensor_vectors(state, purification.relabel({"C": copy_label("C", i),
                                                            L_LABEL: copy_label(L_LABEL, i)}))
    labels = PARTS + [copy_label(L_LABEL, i) for i in range(1, n + 1)] + [copy_label("C", i)
                                                                         for i in range(1, n + 1)]
    return state.reorder(labels)


def j_dimension(instance: QsrInstance, n: int) -> int:
    # V' maps A C L^n into A J L^n, so J must be at least as large as C
    return max(n, instance.dim("C"))


def mu_state(instance: QsrInstance, n: int) -> StateVector:
    purification = _sigma_purification(instance)
    copies = copies_system(instance, n)
    d_rab = copies.dim_of(["R", "A", "B"])
    d_j = j_dimension(instance, n)
    amps = np.zeros((d_rab, d_j, copies.dim // d_rab), dtype=complex)
    for j in range(1, n + 1):
        amps[:, j - 1, :] = _placement(instance, purification, n, j).reshape(d_rab, -1) / math.sqrt(n)
    registers = list(copies.ordered(["R", "A", "B"])) + [(J_LABEL, d_j)] + list(copies.without(["R", "A", "B"]))
    return StateVector(RegisterSystem(registers), amps.reshape(-1))


def _apply_local(system: RegisterSystem, vector: np.ndarray, operator: np.ndarray, labels: List[str]) -> np.ndarray:
    axes = system.indices(labels)
    sub = [system.dims[i] for i in axes]
    out = contract_local(vector.reshape(system.dims), operator.reshape(sub + sub), axes)
    return out.reshape(-1)


def _permute(system: RegisterSystem, vector: np.ndarray, mapping: Dict[str, str]) -> np.ndarray:
    perm = [system.index(mapping.get(label, label)) for label in system.labels]
    return vector.reshape(system.dims).transpose(perm).reshape(-1)


def block_swap(b: int, m: int, n: int) -> Dict[str, str]:
    """
    Exchange of C_{mb+t} with C_t for t = 1..b, skipping copies beyond n.
    """
    mapping = {}
    for t in range(1, b + 1):
        source = m * b + t
        if m == 0 or source > n:
            continue
        mapping[copy_label("C", source)] = copy_label("C", t)
        mapping[copy_label("C", t)] = copy_label("C", source)
    return mapping


def measure_and_swap(instance: QsrInstance, state: StateVector, n: int, b: int) -> BranchEnsemble:
    """
    Alice's J measurement followed by Bob's block swap. Outcome j (0-based) is read as slot j mod n
    and announced as m = slot // b. Branches are tagged (j, m).
    """
    copies = copies_system(instance, n)
    d_rab = copies.dim_of(["R", "A", "B"])
    d_j = state.system.dim_of(J_LABEL)
    amps = state.amplitudes.reshape(d_rab, d_j, -1)
    ensemble = BranchEnsemble(copies)
    for j in range(d_j):
        vector = amps[:, j, :].reshape(-1)
        if float(np.real(np.vdot(vector, vector))) <= BRANCH_CUTOFF:
            continue
        m = (j % n) // b
        ensemble.add(_permute(copies, vector, block_swap(b, m, n)), (j, m))
    return ensemble


def redistribution_ensemble(instance: QsrInstance, b: int) -> BranchEnsemble:
    """
    What Bob holds after the block swap when the protocol starts from mu:
    (1/b) sum_j Phi_{RBAC_j} (x) sigma on the other copies, purified by L_1..L_b.
    """
    purification = _sigma_purification(instance)
    ensemble = BranchEnsemble(copies_system(instance, b))
    for j in range(1, b + 1):
        ensemble.add(_placement(instance, purification, b, j) / math.sqrt(b), (j - 1, 0))
    return ensemble


def qsr_decoder_p1(mu_ensemble: BranchEnsemble, b: int, pi_bc, target: StateVector,
                   claim_bound: Optional[float] = None, b_label: str = "B", c_label: str = "C") -> ProtocolTranscript:
    """
    Bob's sequential decoder. For k = 1..b the test {Pi, I - Pi} is applied to B C_k through the
    Neumark dilation of its measurement operators {sqrt(Pi), sqrt(I - Pi)}; when Pi fires, C_k is
    swapped into C_1 and the loop stops. Outcome b + 1 (no test fired) is the decoder failure.

    Args:
        mu_ensemble: branches on registers including B and C_1..C_b
        b: block size
        pi_bc: diagonal 0 <= Pi <= I on B (x) C
        target: the state C_1 should end up in, on a subset of the registers
        claim_bound: when given, the output purified distance must not exceed it

    Returns: the transcript, with outcome distribution (k = 1..b+1) and the reduced output state
    """
    system = mu_ensemble.system
    if b < 1:
        raise ValueError(f"b must be positive, got {b}")
    copies = [copy_label(c_label, k) for k in range(1, b + 1)]
    local = system.ordered([b_label, copies[0]])
    for label in copies[1:]:
        if system.dim_of(label) != local.dims[1]:
            raise ValueError(f"Copy {label} has dimension {system.dim_of(label)}, expected {local.dims[1]}")
    pi_bc = np.asarray(pi_bc, dtype=complex)
    if pi_bc.shape != (local.dim, local.dim):
        raise ValueError(f"Decoder test has shape {pi_bc.shape}, expected {(local.dim, local.dim)}")
    if not is_incoherent_measurement_operator(pi_bc):
        raise ValueError("Decoder test is not a free measurement operator (it must be diagonal with entries in [0, 1])")

    transcript = ProtocolTranscript("qsr-decoder")
    complement = np.eye(local.dim) - pi_bc
    transcript.certify_bob_measurement([pi_bc, complement], "test {Pi, I - Pi} on B,C_k")
    povm = Povm.from_effects(RegisterSystem([(b_label, local.dims[0]), (c_label, local.dims[1])]),
                             [pi_bc, complement])
    unitary, _ = neumark_dilation(povm)
    fire, miss = neumark_operators(unitary)
    if b > 1:
        pair = system.ordered([copies[0], copies[1]])
        transcript.certify_bob_operation(KrausChannel.unitary(pair, swap_unitary(local.dims[1])), "swap C_k with C_1")

    total_in = mu_ensemble.total_weight
    out = BranchEnsemble(system)
    outcomes = np.zeros(b + 1)
    for vector, tag in mu_ensemble.branches:
        rest = vector
        for k in range(1, b + 1):
            labels = [b_label, copies[k - 1]]
            fired = _apply_local(system, rest, fire, labels)
            weight = float(np.real(np.vdot(fired, fired)))
            if weight > BRANCH_CUTOFF:
                if k > 1:
                    fired = _permute(system, fired, {copies[0]: copies[k - 1], copies[k - 1]: copies[0]})
                out.add(fired, (tag, k))
                outcomes[k - 1] += weight
            rest = _apply_local(system, rest, miss, labels)
        outcomes[b] += float(np.real(np.vdot(rest, rest)))
        out.add(rest, (tag, b + 1))
    for k in range(1, b + 1):
        transcript.record(f"Bob tests B,C{k} and swaps C{k} into C1 when Pi fires",
                          notes={"probability": outcomes[k - 1] / total_in})
    transcript.record("No test fired", notes={"probability": outcomes[b] / total_in})

    fidelity_squared = out.overlap_weight(target) / total_in
    transcript.set_fidelity(math.sqrt(min(max(fidelity_squared, 0.0), 1.0)))
    transcript.outcome_distribution = list(outcomes / total_in)
    transcript.post_state = DensityOperator(target.system, out.reduced_state(target.system.labels).matrix / total_in,
                                            check=False)
    transcript.metrics.update({"b": b, "failure_probability": outcomes[b] / total_in,
                               "purified_distance": transcript.purified_distance})
    if claim_bound is not None and transcript.purified_distance > claim_bound + BOUND_SLACK:
        raise BoundViolationError(f"Decoder output at purified distance {transcript.purified_distance} "
                                  f"exceeds {claim_bound}")
    return transcript


def decoder_claim_bound(instance: QsrInstance, params: QsrParameters) -> Optional[float]:
    """
    The bound asserted on Bob's decoder when it starts from mu: eps2 + gamma, loosened to the
    chain value when the rounded-up b breaks b 2^{-D_F} <= gamma^4. None for overridden runs.
    """
    if params.n_overridden or params.b_overridden:
        return None
    return max(instance.eps2 + instance.gamma, claim_chain_value(params))


def check_distance_bounds(instance: QsrInstance, params: QsrParameters, xi_mu_distance: float,
                          ideal_distance: float, final_distance: float):
    """
    Raises BoundViolationError when the final distance exceeds P(xi', mu) + P(P1(mu), Phi), or,
    for a run with the prescribed n and b, 3 eps1 + eps2 + gamma. Overridden runs only log the latter.
    """
    triangle = xi_mu_distance + ideal_distance
    if final_distance > triangle + BOUND_SLACK:
        raise BoundViolationError(f"Final distance {final_distance} exceeds P(xi', mu) + P(P1(mu), Phi) = {triangle}")
    distance_bound = 3 * instance.eps1 + instance.eps2 + instance.gamma
    if final_distance <= distance_bound + BOUND_SLACK:
        return
    if not params.n_overridden and not params.b_overridden:
        raise BoundViolationError(f"Final distance {final_distance} exceeds 3 eps1 + eps2 + gamma = {distance_bound} "
                                  f"with n={params.n}, b={params.b}")
    logger.warning(f"Final distance {final_distance} above 3 eps1 + eps2 + gamma = {distance_bound} "
                   f"with overridden n={params.n}, b={params.b}")


def qsr_full(instance: QsrInstance, budget: Optional[int] = None) -> ProtocolTranscript:
    """
    Runs the whole protocol and reports the purified distance of the final R A B C_1 state to Phi.

    Always asserted: P(xi', mu) + P(P1(mu), Phi) bounds the final distance. With the prescribed n,
    P(xi', mu) <= eps1; with prescribed n and b, the final distance is at most 3 eps1 + eps2 + gamma
    and the decoder bound of decoder_claim_bound holds. Whether b 2^{-D_F} <= gamma^4 holds is
    reported as claim_premise_holds.

    Args:
        instance: the task
        budget: amplitude budget, MAX_AMPLITUDES by default

    Returns: the transcript with counters, message and decoder outcome distributions and metrics
    """
    params = qsr_parameters(instance)
    n, b = params.n, params.b
    d_l = _sigma_purification(instance).system.dim_of(L_LABEL)
    size = instance.psi.system.dim_of(["R", "A", "B"]) * j_dimension(instance, n) * (d_l * instance.dim("C")) ** n
    check_amplitudes("redistribution simulation", size, budget,
                     hint=f"n={n} copies; pass an n override or a larger budget")

    transcript = ProtocolTranscript("qsr", instance.theory)
    distance_bound = 3 * instance.eps1 + instance.eps2 + instance.gamma
    transcript.metrics.update({
        "k": params.k, "delta": params.delta, "n": n, "d_f": params.d_f, "b": b, "b_clamped": params.b_clamped,
        "n_overridden": params.n_overridden, "b_overridden": params.b_overridden, "distance_bound": distance_bound,
    })

    xi = xi_state(instance, n)
    transcript.record(f"Share Phi_RABC and {n} purifications of sigma_C", snapshot=xi)
    mu = mu_state(instance, n)
    common = ["R", "B"] + [copy_label("C", i) for i in range(1, n + 1)]
    uhlmann = uhlmann_isometry(mu, xi, common)
    xi_mu_distance = max(0.0, 1.0 - uhlmann.overlap ** 2) ** 0.5
    transcript.record("Alice applies the Uhlmann isometry V' on A C L_1..L_n",
                      notes={"overlap": uhlmann.overlap, "purified_distance": xi_mu_distance})
    if not params.n_overridden and xi_mu_distance > instance.eps1 + BOUND_SLACK:
        raise BoundViolationError(f"P(xi', mu)={xi_mu_distance} exceeds eps1={instance.eps1} with n={n}")

    ensemble = measure_and_swap(instance, uhlmann.theta, n, b)
    messages: Dict[int, float] = {}
    for (_, m), weight in ensemble.weights_by_tag().items():
        messages[m] = messages.get(m, 0.0) + weight
    messages = dict(sorted(messages.items()))
    transcript.record(f"Alice measures J and sends floor(j/b) with {params.cobits} cobits",
                      notes={"message_distribution": messages}, **{COBITS_SENT: params.cobits})
    if n > 1:
        pair = RegisterSystem([(copy_label("C", 1), instance.dim("C")), (copy_label("C", 2), instance.dim("C"))])
        transcript.certify_bob_operation(KrausChannel.unitary(pair, swap_unitary(instance.dim("C"))),
                                         "block swap of C copies")
    transcript.record(f"Bob swaps the announced block into C1..C{b}")

    target = instance.psi.relabel({"C": copy_label("C", 1)})
    chain = claim_chain_value(params)
    premise = (not params.b_overridden and not params.b_clamped
               and b * params.type_two <= instance.gamma ** 4 and 1.0 - params.acceptance <= instance.eps2 ** 4)
    ideal = qsr_decoder_p1(measure_and_swap(instance, mu, n, b), b, params.pi_bc, target,
                           claim_bound=decoder_claim_bound(instance, params))
    actual = qsr_decoder_p1(ensemble, b, params.pi_bc, target)
    transcript.absorb(actual, "decoder")

    final_distance = actual.purified_distance
    transcript.set_fidelity(actual.achieved_fidelity)
    transcript.outcome_distribution = actual.outcome_distribution
    transcript.post_state = actual.post_state
    transcript.metrics.update({
        "cobits": params.cobits, "uhlmann_overlap": uhlmann.overlap, "xi_mu_distance": xi_mu_distance,
        "p1_ideal_distance": ideal.purified_distance, "claim_chain_value": chain, "claim_premise_holds": premise,
        "message_distribution": messages, "final_distance": final_distance,
    })

    check_distance_bounds(instance, params, xi_mu_distance, ideal.purified_distance, final_distance)
    logger.info(f"QSR run: n={n}, b={b}, cobits={params.cobits}, final distance {final_distance:.6g}")
    return transcript
