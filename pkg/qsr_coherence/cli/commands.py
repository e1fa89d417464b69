# Copyright 2026 (c) qsr-coherence contributors. All rights reserved. Issued under the Apache 2.0 License.

#
# Sub-command implementations. Each takes a RunConfig, dispatches to the library and writes
# one table (or a transcript) to stdout or --out. Return value is the exit code.
#

import json
import logging
import math
from typing import List, Optional, Tuple, Union

import numpy as np
import pandas as pd

from qsr_coherence.cli.config import RunConfig, parse_values
from qsr_coherence.entropy.hypothesis_testing import (hypothesis_testing_relative_entropy,
                                                      restricted_hypothesis_testing)
from qsr_coherence.entropy.quantities import (EntropicValue, conditional_entropy, conditional_mutual_information,
                                              marginal_entropy, max_relative_entropy, mutual_information,
                                              relative_entropy, relative_entropy_of_coherence,
                                              relative_entropy_variance, von_neumann_entropy)
from qsr_coherence.protocols.coherence_creation import coherence_creation
from qsr_coherence.protocols.convex_split import convex_split_bound_check
from qsr_coherence.protocols.redistribution import QsrInstance, qsr_full
from qsr_coherence.protocols.transcript import ProtocolTranscript
from qsr_coherence.qmat.operations import fidelity, partial_trace, purified_distance, trace_norm_distance
from qsr_coherence.qmat.random_states import qubits, random_state_vector
from qsr_coherence.qmat.registers import DensityOperator, StateVector
from qsr_coherence.qmat.state_io import load_state
from qsr_coherence.rates.rates import QsrParts, rate_report
from qsr_coherence.selftest import run_selftest
from qsr_coherence.sweeps import sweep_b, sweep_copies, sweep_delta, sweep_eps, sweep_n

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_BUDGET = 3
EXIT_BOUND = 4

QUANTITIES = ["entropy", "relent", "dmax", "dh", "df", "mi", "cmi", "condent", "rc", "fidelity", "pd", "tracedist",
              "variance"]
TWO_STATE_QUANTITIES = ["relent", "dmax", "dh", "df", "fidelity", "pd", "tracedist", "variance"]
PART_COUNTS = {"entropy": (0, 1), "rc": (0, 1), "mi": (2, 2), "condent": (2, 2), "cmi": (3, 3)}
PROTOCOLS = ["coherence-creation", "convex-split", "qsr"]
RANDOM_LABELS = {1: ["C"], 2: ["R", "C"], 3: ["R", "B", "C"], 4: ["R", "A", "B", "C"]}


def _json_default(value):
    if hasattr(value, "item"):
        return value.item()
    return str(value)


def write_output(config: RunConfig, text: str):
    if config.output:
        with open(config.output, "w") as f:
            f.write(text if text.endswith("\n") else text + "\n")
        logger.info(f"Output written to {config.output}")
    else:
        print(text)


def emit_frame(config: RunConfig, df: pd.DataFrame, single: bool = False):
    if config.format == "csv":
        write_output(config, df.to_csv(index=False))
    elif config.format == "pretty":
        write_output(config, df.to_string(index=False))
    else:
        records = df.to_dict(orient="records")
        write_output(config, json.dumps(records[0] if single else records, indent=2, default=_json_default))


def emit_transcript(config: RunConfig, transcript: ProtocolTranscript):
    if config.format == "json":
        write_output(config, transcript.to_json())
        return
    row = {"protocol": transcript.protocol, "achieved_fidelity": transcript.achieved_fidelity,
           "purified_distance": transcript.purified_distance}
    row.update(transcript.counters)
    for name, value in transcript.metrics.items():
        if np.isscalar(value) or value is None:
            row[name] = value
    emit_frame(config, pd.DataFrame([row]), single=True)


def parse_parts(text: Optional[str]) -> List[List[str]]:
    """
    "R+A,C,B" into [["R", "A"], ["C"], ["B"]].
    """
    if not text:
        return []
    return [[label.strip() for label in part.split("+") if label.strip()] for part in text.split(",")]


def _states(config: RunConfig, count: Tuple[int, int]) -> List[Union[StateVector, DensityOperator]]:
    low, high = count
    if not low <= len(config.inputs) <= high:
        expected = str(low) if low == high else f"{low} to {high}"
        raise ValueError(f"{config.command} {config.target or ''} expects {expected} state file(s), "
                         f"got {len(config.inputs)}")
    return [load_state(path) for path in config.inputs]


def _density(state) -> DensityOperator:
    return state.density() if isinstance(state, StateVector) else state


def _pure(state) -> StateVector:
    if not isinstance(state, StateVector):
        raise ValueError("A pure state (amplitudes) is required")
    return state


def quantity_value(name: str, states: List[DensityOperator], parts: List[List[str]], eps: float) -> EntropicValue:
    """
    Evaluates one named quantity. Two-state quantities take (rho, sigma); the others take
    one state and the parts they need.
    """
    if name not in QUANTITIES:
        raise ValueError(f"Unknown quantity {name!r}, expected one of {QUANTITIES}")
    if name in TWO_STATE_QUANTITIES:
        if len(states) != 2:
            raise ValueError(f"Quantity {name} needs two states, got {len(states)}")
        rho, sigma = states
        if name == "relent":
            return relative_entropy(rho, sigma)
        if name == "dmax":
            return max_relative_entropy(rho, sigma)
        if name == "dh":
            return hypothesis_testing_relative_entropy(rho, sigma, eps)
        if name == "df":
            return restricted_hypothesis_testing(rho, sigma, eps)
        if name == "variance":
            return relative_entropy_variance(rho, sigma)
        if rho.system.dims != sigma.system.dims:
            raise ValueError(f"Dimension mismatch: {rho.system} vs {sigma.system}")
        if name == "fidelity":
            return EntropicValue(fidelity(rho, sigma))
        if name == "pd":
            return EntropicValue(purified_distance(rho, sigma))
        return EntropicValue(trace_norm_distance(rho, sigma))

    if len(states) != 1:
        raise ValueError(f"Quantity {name} takes one state, got {len(states)}")
    rho = states[0]
    low, high = PART_COUNTS[name]
    if not low <= len(parts) <= high:
        raise ValueError(f"Quantity {name} takes {low} to {high} parts, got {len(parts)}")
    if name == "entropy":
        return EntropicValue(marginal_entropy(rho, parts[0]) if parts else von_neumann_entropy(rho))
    if name == "rc":
        marginal = partial_trace(rho, parts[0]) if parts else rho
        return EntropicValue(relative_entropy_of_coherence(marginal))
    if name == "mi":
        return EntropicValue(mutual_information(rho, *parts))
    if name == "condent":
        return EntropicValue(conditional_entropy(rho, *parts))
    return EntropicValue(conditional_mutual_information(rho, *parts))


def cmd_quantity(config: RunConfig) -> int:
    states = [_density(s) for s in _states(config, (1, 2))]
    value = quantity_value(config.target, states, parse_parts(config.options.get("parts")),
                           float(config.options["dh_eps"]))
    if not value.finite and not config.allow_inf:
        logger.error(f"{config.target} is infinite (support violation), pass --allow-inf to report it")
        return EXIT_INPUT
    if value.finite:
        reported = value.value
    else:
        reported = None if config.format == "json" else math.inf
    row = {"quantity": config.target, "value": reported, "finite": value.finite}
    emit_frame(config, pd.DataFrame([row]), single=True)
    return EXIT_OK


def cmd_rates(config: RunConfig) -> int:
    if config.inputs:
        psi = _pure(_states(config, (1, 1))[0])
    else:
        count = int(config.options["random_qubits"])
        if count not in RANDOM_LABELS:
            raise ValueError(f"--random-qubits must be one of {sorted(RANDOM_LABELS)}, got {count}")
        psi = random_state_vector(qubits(RANDOM_LABELS[count]), rng=config.seed)
        logger.info(f"Random {count}-qubit state from seed {config.seed}")
    parts = config.options.get("parts")
    report = rate_report(psi, QsrParts.parse(parts) if parts else None)
    emit_frame(config, report.to_frame(config.units), single=True)
    return EXIT_OK


def cmd_simulate(config: RunConfig) -> int:
    options = config.options
    if config.target == "coherence-creation":
        _states(config, (0, 0))
        emit_transcript(config, coherence_creation(int(options["q"]), int(options["e"]), config.amplitude_budget))
        return EXIT_OK
    if config.target == "convex-split":
        rho_pq, sigma_q = [_density(s) for s in _states(config, (2, 2))]
        check = convex_split_bound_check(rho_pq, sigma_q, eps=float(options["smoothing"]),
                                         delta=float(options["delta"]), budget=config.density_budget)
        emit_frame(config, pd.DataFrame([check._asdict()]), single=True)
        return EXIT_OK
    if config.target == "qsr":
        psi = _pure(_states(config, (1, 1))[0])
        sigma_c = _density(load_state(options["sigma"])) if options.get("sigma") else None
        instance = QsrInstance(psi, float(options["eps1"]), float(options["eps2"]), float(options["gamma"]),
                               sigma_c=sigma_c, n_override=options.get("n_override"),
                               b_override=options.get("b_override"))
        emit_transcript(config, qsr_full(instance, config.amplitude_budget))
        return EXIT_OK
    raise ValueError(f"Unknown protocol {config.target!r}, expected one of {PROTOCOLS}")


def cmd_sweep(config: RunConfig) -> int:
    options = config.options
    kind = config.target
    cast = int if kind in ("copies", "n", "b") else float
    if options.get("values") is not None:
        values = parse_values(options["values"], cast)
    else:
        values = [cast(v) for v in options.get(kind, [])]
    workers = int(options["workers"])
    if kind == "copies":
        df = sweep_copies(_pure(_states(config, (1, 1))[0]), values, workers, config.density_budget)
    elif kind == "eps":
        df = sweep_eps(_pure(_states(config, (1, 1))[0]), values, workers)
    elif kind in ("delta", "n"):
        rho_pq, sigma_q = [_density(s) for s in _states(config, (2, 2))]
        sweep = sweep_delta if kind == "delta" else sweep_n
        df = sweep(rho_pq, sigma_q, values, workers, config.density_budget)
    elif kind == "b":
        df = sweep_b(_pure(_states(config, (1, 1))[0]), values, float(options["eps1"]), float(options["eps2"]),
                     float(options["gamma"]), options.get("n_override"), workers, config.amplitude_budget)
    else:
        raise ValueError(f"Unknown sweep {kind!r}")
    emit_frame(config, df)
    return EXIT_OK


def cmd_selftest(config: RunConfig) -> int:
    df = run_selftest(int(config.options["trials"]), config.seed)
    emit_frame(config, df)
    failed = int(df["violations"].sum())
    if failed:
        logger.error(f"Selftest found {failed} violation(s)")
        return EXIT_BOUND
    return EXIT_OK


COMMAND_HANDLERS = {
    "quantity": cmd_quantity,
    "rates": cmd_rates,
    "simulate": cmd_simulate,
    "sweep": cmd_sweep,
    "selftest": cmd_selftest,
}
