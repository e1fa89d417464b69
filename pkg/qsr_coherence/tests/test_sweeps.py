# Copyright 2026 (c) qsr-coherence contributors. All rights reserved. Issued under the Apache 2.0 License.

import unittest

import numpy as np

from qsr_coherence.errors import BudgetExceededError
from qsr_coherence.qmat.random_states import qubits
from qsr_coherence.qmat.registers import DensityOperator, StateVector
from qsr_coherence.sweeps import eps_point, run_sweep, sweep_b, sweep_copies, sweep_delta, sweep_eps, sweep_n


def ghz():
    amps = np.zeros(8)
    amps[0] = amps[7] = 1 / np.sqrt(2)
    return StateVector(qubits(["R", "B", "C"]), amps)


def diag_pair():
    return DensityOperator(qubits(["P", "Q"]), np.diag([0.4, 0.1, 0.1, 0.4]))


def uniform_q():
    return DensityOperator(qubits(["Q"]), np.eye(2) / 2)


class TestSweeps(unittest.TestCase):

    def test_copies_per_copy(self):
        df = sweep_copies(ghz(), [1, 2, 3])
        self.assertEqual([1, 2, 3], list(df["copies"]))
        self.assertTrue(np.allclose(0.5, df["q_min_std_per_copy"]), f"{df['q_min_std_per_copy']}")
        self.assertTrue(np.allclose(df["q_min_std"], 0.5 * df["copies"]))

    def test_copies_budget(self):
        with self.assertRaises(BudgetExceededError):
            sweep_copies(ghz(), [4], budget=2 ** 10)

    def test_delta(self):
        df = sweep_delta(diag_pair(), uniform_q(), [0.5, 0.25, 0.125])
        self.assertEqual([4, 7, 13], list(df["n"]))
        self.assertTrue((df["fidelity_squared"] >= df["bound"] - 1e-9).all())
        self.assertTrue(df["classical"].all())

    def test_n(self):
        df = sweep_n(diag_pair(), uniform_q(), [1, 2, 4, 8])
        self.assertEqual([1, 2, 4, 8], list(df["n"]))
        values = list(df["fidelity_squared"])
        for before, after in zip(values, values[1:]):
            self.assertTrue(after >= before - 1e-9, f"F^2 fell from {before} to {after}")

    def test_eps(self):
        df = sweep_eps(ghz(), [0.5, 0.1])
        self.assertEqual([0.5, 0.1], list(df["eps"]))
        self.assertTrue(df["constant"].is_monotonic_increasing)

    def test_block_size(self):
        psi = StateVector(qubits(["R", "C"]), [np.sqrt(0.9), 0.0, 0.0, np.sqrt(0.1)])
        df = sweep_b(psi, [1, 2, 4], 0.5, 0.1, 0.1, n_override=4)
        self.assertEqual([1, 2, 4], list(df["b"]))
        self.assertEqual([2, 1, 0], list(df["cobits"]))
        self.assertTrue(((df["achieved_fidelity"] >= 0.0) & (df["achieved_fidelity"] <= 1.0)).all())

    def test_order_kept(self):
        tasks = [(i, ghz(), eps) for i, eps in enumerate([0.5, 0.25, 0.1])]
        df = run_sweep(eps_point, list(reversed(tasks)))
        self.assertEqual([0, 1, 2], list(df["index"]))
        self.assertEqual([0.5, 0.25, 0.1], list(df["eps"]))

    def test_pool_matches_serial(self):
        serial = sweep_n(diag_pair(), uniform_q(), [1, 2, 3])
        pooled = sweep_n(diag_pair(), uniform_q(), [1, 2, 3], workers=2)
        self.assertTrue(serial.equals(pooled))

    def test_empty(self):
        with self.assertRaises(ValueError):
            sweep_n(diag_pair(), uniform_q(), [])
        with self.assertRaises(ValueError):
            sweep_n(diag_pair(), uniform_q(), [1], workers=0)


if __name__ == '__main__':
    unittest.main()
