# Copyright 2026 (c) qsr-coherence contributors. All rights reserved. Issued under the Apache 2.0 License.

#
# Parameter sweeps. Each point is computed by a top level worker so that it can be shipped to a
# process pool; rows come back in parameter order whatever the completion order.
#
#   copies  rates of psi^{(x)n}, total and per copy
#   delta   convex split bound check at accuracy delta
#   n       convex split fidelity with n copies
#   eps     one-shot achievability bound at eps1 = eps2 = gamma = eps
#   b       full redistribution run with the decoder block size forced to b
#

import logging
import multiprocessing as mp
from typing import Callable, Dict, List, Optional, Sequence

import pandas as pd
from tqdm import tqdm

from qsr_coherence.protocols.budget import check_density
from qsr_coherence.protocols.convex_split import convex_split_bound_check, convex_split_fidelity
from qsr_coherence.protocols.redistribution import QsrInstance, qsr_full
from qsr_coherence.protocols.transcript import COBITS_SENT
from qsr_coherence.qmat.registers import DensityOperator, StateVector
from qsr_coherence.rates.rates import QsrParts, iid_copies, one_shot_achievability_bound, rate_report

logger = logging.getLogger(__name__)

SWEEPS = ["copies", "delta", "n", "eps", "b"]


def copies_point(task) -> Dict:
    index, psi, n, budget = task
    parts = QsrParts.default(psi.system)
    check_density(f"{n} copies of rho_RBC", psi.system.dim_of(parts.r + parts.b + parts.c) ** n, budget,
                  hint="use fewer copies or a smaller state")
    report = rate_report(iid_copies(psi, n))
    row = {"index": index, "copies": n}
    for name, value in report._asdict().items():
        row[name] = value
        row[f"{name}_per_copy"] = value / n
    return row


def delta_point(task) -> Dict:
    index, rho_pq, sigma_q, delta, budget = task
    check = convex_split_bound_check(rho_pq, sigma_q, delta=delta, budget=budget)
    return {"index": index, "delta": delta, "n": check.n, "k": check.k,
            "fidelity_squared": check.fidelity_squared, "bound": check.bound, "classical": check.classical}


def n_point(task) -> Dict:
    index, rho_pq, sigma_q, n, budget = task
    value, classical = convex_split_fidelity(rho_pq, sigma_q, n, budget)
    return {"index": index, "n": n, "fidelity_squared": value ** 2, "classical": classical}


def eps_point(task) -> Dict:
    index, psi, eps = task
    bound = one_shot_achievability_bound(QsrInstance(psi, eps, eps, eps))
    row = {"index": index, "eps": eps}
    row.update(bound._asdict())
    return row


def b_point(task) -> Dict:
    index, psi, eps1, eps2, gamma, b, n, budget = task
    transcript = qsr_full(QsrInstance(psi, eps1, eps2, gamma, n_override=n, b_override=b), budget)
    metrics = transcript.metrics
    return {"index": index, "b": metrics["b"], "n": metrics["n"], "cobits": transcript.counters[COBITS_SENT],
            "achieved_fidelity": transcript.achieved_fidelity, "final_distance": metrics["final_distance"],
            "distance_bound": metrics["distance_bound"]}


def run_sweep(worker: Callable, tasks: List, workers: int = 1) -> pd.DataFrame:
    """
    Maps worker over tasks, in a pool of the given size when workers > 1.

    Returns: one row per task, ordered by the task index
    """
    if not tasks:
        raise ValueError("Empty sweep")
    if workers < 1:
        raise ValueError(f"workers must be positive, got {workers}")
    logger.info(f"Sweep {worker.__name__}: {len(tasks)} points on {workers} worker(s)")
    if workers == 1:
        outputs = [worker(task) for task in tqdm(tasks, total=len(tasks))]
    else:
        pool = mp.Pool(workers)
        outputs = list(tqdm(pool.imap(worker, tasks), total=len(tasks)))
        pool.close()
        pool.join()
    df = pd.DataFrame(outputs)
    df.sort_values("index", inplace=True)
    df.reset_index(drop=True, inplace=True)
    return df


def sweep_copies(psi: StateVector, copies: Sequence[int], workers: int = 1,
                 budget: Optional[int] = None) -> pd.DataFrame:
    return run_sweep(copies_point, [(i, psi, int(n), budget) for i, n in enumerate(copies)], workers)


def sweep_delta(rho_pq: DensityOperator, sigma_q: DensityOperator, deltas: Sequence[float], workers: int = 1,
                budget: Optional[int] = None) -> pd.DataFrame:
    return run_sweep(delta_point, [(i, rho_pq, sigma_q, float(d), budget) for i, d in enumerate(deltas)], workers)


def sweep_n(rho_pq: DensityOperator, sigma_q: DensityOperator, ns: Sequence[int], workers: int = 1,
            budget: Optional[int] = None) -> pd.DataFrame:
    return run_sweep(n_point, [(i, rho_pq, sigma_q, int(n), budget) for i, n in enumerate(ns)], workers)


def sweep_eps(psi: StateVector, epsilons: Sequence[float], workers: int = 1) -> pd.DataFrame:
    return run_sweep(eps_point, [(i, psi, float(eps)) for i, eps in enumerate(epsilons)], workers)


def sweep_b(psi: StateVector, bs: Sequence[int], eps1: float, eps2: float, gamma: float,
            n_override: Optional[int] = None, workers: int = 1, budget: Optional[int] = None) -> pd.DataFrame:
    tasks = [(i, psi, eps1, eps2, gamma, int(b), n_override, budget) for i, b in enumerate(bs)]
    return run_sweep(b_point, tasks, workers)
