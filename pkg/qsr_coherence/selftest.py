# Copyright 2026 (c) qsr-coherence contributors. All rights reserved. Issued under the Apache 2.0 License.

#
# Randomized inequality battery. Every check draws one random instance and returns
# lhs - rhs for an inequality lhs <= rhs; a trial is a violation when that exceeds SLACK.
#

import logging
import math
from typing import Callable, Dict, Optional

import numpy as np
import pandas as pd
from tqdm import tqdm

from qsr_coherence.entropy.continuity import FANNES_MAX_DISTANCE, coherence_gain_bound, fannes_bound
from qsr_coherence.entropy.hypothesis_testing import hypothesis_testing_relative_entropy
from qsr_coherence.entropy.quantities import (max_relative_entropy, relative_entropy, relative_entropy_of_coherence,
                                              von_neumann_entropy)
from qsr_coherence.protocols.inequalities import (close_states_measurement_check, gentle_measurement_check,
                                                  sequential_projector_bound_check)
from qsr_coherence.qmat.operations import apply_channel, partial_trace, purified_distance
from qsr_coherence.qmat.random_states import (random_channel, random_close_pair, random_contraction, random_density,
                                              random_projector)
from qsr_coherence.qmat.registers import RegisterSystem

logger = logging.getLogger(__name__)

SLACK = 1e-8
DEFAULT_TRIALS = 500
DH_EPS = 0.1


def _system(rng, max_dim=4):
    return RegisterSystem([("A", int(rng.integers(2, max_dim + 1)))])


def _pair_system(rng):
    return RegisterSystem([("A", int(rng.integers(2, 5))), ("B", int(rng.integers(2, 5)))])


def gentle_measurement(rng) -> float:
    system = _system(rng)
    check = gentle_measurement_check(random_density(system, rng=rng), random_contraction(system.dim, rng=rng),
                                     slack=math.inf)
    return check.lhs - check.rhs


def triangle(rng) -> float:
    system = _system(rng)
    rho, sigma, tau = [random_density(system, rank=int(rng.integers(1, system.dim + 1)), rng=rng) for _ in range(3)]
    return purified_distance(rho, tau) - purified_distance(rho, sigma) - purified_distance(sigma, tau)


def sequential_projectors(rng) -> float:
    system = _system(rng)
    projectors = [random_projector(system.dim, int(rng.integers(1, system.dim)), rng=rng)
                  for _ in range(int(rng.integers(1, 4)))]
    check = sequential_projector_bound_check(random_density(system, rng=rng), projectors, slack=math.inf)
    return check.lhs - check.rhs


def close_states(rng) -> float:
    system = _system(rng)
    rho, sigma = random_close_pair(system, float(rng.uniform(0.0, 0.3)), rng=rng)
    check = close_states_measurement_check(rho, sigma, random_contraction(system.dim, rng=rng), slack=math.inf)
    return check.lhs - check.rhs


def fannes(rng) -> float:
    system = _system(rng)
    rho, sigma = random_close_pair(system, float(rng.uniform(0.0, 0.01)), rng=rng)
    eps = purified_distance(rho, sigma)
    if eps > FANNES_MAX_DISTANCE:
        return -math.inf
    return abs(von_neumann_entropy(rho) - von_neumann_entropy(sigma)) - fannes_bound(eps, system.dim)


def _processed(rng):
    system = _system(rng, 3)
    rho, sigma = random_density(system, rng=rng), random_density(system, rng=rng)
    channel = random_channel(system, num_kraus=int(rng.integers(1, 4)), rng=rng)
    return rho, sigma, apply_channel(channel, rho), apply_channel(channel, sigma)


def data_processing_relative_entropy(rng) -> float:
    rho, sigma, rho_out, sigma_out = _processed(rng)
    return relative_entropy(rho_out, sigma_out).value - relative_entropy(rho, sigma).value


def data_processing_max_relative_entropy(rng) -> float:
    rho, sigma, rho_out, sigma_out = _processed(rng)
    return max_relative_entropy(rho_out, sigma_out).value - max_relative_entropy(rho, sigma).value


def data_processing_hypothesis_testing(rng) -> float:
    rho, sigma, rho_out, sigma_out = _processed(rng)
    before = hypothesis_testing_relative_entropy(rho, sigma, DH_EPS).value
    return hypothesis_testing_relative_entropy(rho_out, sigma_out, DH_EPS).value - before


def coherence_gain(rng) -> float:
    system = _pair_system(rng)
    rho = random_density(system, rank=int(rng.integers(1, system.dim + 1)), rng=rng)
    gain = relative_entropy_of_coherence(rho) - relative_entropy_of_coherence(partial_trace(rho, "B"))
    return gain - coherence_gain_bound(system.dim_of("A"))


CHECKS: Dict[str, Callable[[np.random.Generator], float]] = {
    "gentle_measurement": gentle_measurement,
    "purified_distance_triangle": triangle,
    "sequential_projectors": sequential_projectors,
    "measurement_on_close_states": close_states,
    "fannes": fannes,
    "data_processing_relative_entropy": data_processing_relative_entropy,
    "data_processing_max_relative_entropy": data_processing_max_relative_entropy,
    "data_processing_hypothesis_testing": data_processing_hypothesis_testing,
    "coherence_gain": coherence_gain,
}


def run_selftest(trials: int = DEFAULT_TRIALS, seed: Optional[int] = None) -> pd.DataFrame:
    """
    Runs every check trials times from one seeded generator.

    Returns: one row per check with the number of violations and the largest lhs - rhs seen
    """
    if trials < 1:
        raise ValueError(f"trials must be positive, got {trials}")
    rng = np.random.default_rng(seed)
    rows = []
    for name, check in CHECKS.items():
        excesses = np.array([check(rng) for _ in tqdm(range(trials), desc=name)])
        violations = int(np.sum(excesses > SLACK))
        if violations:
            logger.error(f"{name}: {violations} violation(s) in {trials} trials, worst {np.max(excesses)}")
        rows.append({"check": name, "trials": trials, "violations": violations, "worst": float(np.max(excesses))})
    return pd.DataFrame(rows)
