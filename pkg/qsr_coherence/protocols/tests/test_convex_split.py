# Copyright 2026 (c) qsr-coherence contributors. All rights reserved. Issued under the Apache 2.0 License.

import math
import time
import unittest

import numpy as np

from qsr_coherence.errors import BudgetExceededError, SupportViolationError
from qsr_coherence.protocols.convex_split import (convex_split_bound_check, convex_split_fidelity, convex_split_k,
                                                  convex_split_reference, convex_split_state, prescribed_copies)
from qsr_coherence.qmat.operations import fidelity, partial_trace, tensor
from qsr_coherence.qmat.random_states import qubits, random_density, random_diagonal_density
from qsr_coherence.qmat.registers import DensityOperator, RegisterSystem

DELTAS = [0.5, 0.25, 0.125]
TRIALS = 500


def diag_pair(probs):
    return DensityOperator(qubits(["P", "Q"]), np.diag(probs))


def uniform_q():
    return DensityOperator(qubits(["Q"]), np.eye(2) / 2)


def near_product(rng, t=0.05):
    rho_p = random_density(qubits(["P"]), rng=rng)
    rho_q = random_density(qubits(["Q"]), rng=rng)
    noise = random_density(qubits(["P", "Q"]), rng=rng)
    return DensityOperator(qubits(["P", "Q"]), (1 - t) * np.kron(rho_p.matrix, rho_q.matrix) + t * noise.matrix)


class TestConvexSplitState(unittest.TestCase):

    def test_product_input(self):
        rng = np.random.default_rng(1)
        rho_p = random_density(qubits(["P"]), rng=rng)
        sigma = random_density(qubits(["Q"]), rng=rng)
        rho_pq = tensor(rho_p, sigma)
        for n in [1, 2, 4]:
            tau = convex_split_state(rho_pq, sigma, n)
            self.assertEqual(["P"] + [f"Q{j}" for j in range(1, n + 1)], tau.system.labels)
            self.assertTrue(np.allclose(convex_split_reference(rho_pq, sigma, n).matrix, tau.matrix), f"n={n}")

    def test_single_copy(self):
        rho_pq = random_density(qubits(["P", "Q"]), rng=2)
        sigma = random_density(qubits(["Q"]), rng=3)
        tau = convex_split_state(rho_pq, sigma, 1)
        self.assertTrue(np.allclose(rho_pq.matrix, tau.matrix))

    def test_marginals(self):
        # each Q_j alone is (1/n) rho_Q + (1 - 1/n) sigma
        rho_pq = random_density(qubits(["P", "Q"]), rng=4)
        sigma = random_density(qubits(["Q"]), rng=5)
        n = 3
        tau = convex_split_state(rho_pq, sigma, n)
        rho_q = partial_trace(rho_pq, "Q").matrix
        for j in range(1, n + 1):
            marginal = partial_trace(tau, f"Q{j}").matrix
            self.assertTrue(np.allclose(rho_q / n + (1 - 1 / n) * sigma.matrix, marginal), f"Q{j}")
        self.assertTrue(np.allclose(partial_trace(rho_pq, "P").matrix, partial_trace(tau, "P").matrix))

    def test_only_q(self):
        rho_q = random_density(qubits(["Q"]), rng=6)
        sigma = random_density(qubits(["Q"]), rng=7)
        tau = convex_split_state(rho_q, sigma, 2)
        self.assertEqual(["Q1", "Q2"], tau.system.labels)
        self.assertAlmostEqual(1.0, tau.trace())

    def test_support(self):
        rho_pq = random_density(qubits(["P", "Q"]), rng=8)
        pure_q = DensityOperator(qubits(["Q"]), np.diag([1.0, 0.0]))
        with self.assertRaises(SupportViolationError):
            convex_split_state(rho_pq, pure_q, 2)
        with self.assertRaises(SupportViolationError):
            convex_split_k(rho_pq, pure_q)

    def test_budget(self):
        rho_pq = random_density(qubits(["P", "Q"]), rng=9)
        with self.assertRaises(BudgetExceededError):
            convex_split_state(rho_pq, uniform_q(), 10)
        with self.assertRaises(BudgetExceededError):
            convex_split_state(rho_pq, uniform_q(), 3, budget=8)
        self.assertEqual(16, convex_split_state(rho_pq, uniform_q(), 3, budget=16).dim)

    def test_dimension_mismatch(self):
        rho_pq = random_density(qubits(["P", "Q"]), rng=10)
        with self.assertRaises(ValueError):
            convex_split_state(rho_pq, DensityOperator(RegisterSystem([("Q", 3)]), np.eye(3) / 3), 2)
        with self.assertRaises(ValueError):
            convex_split_state(rho_pq, DensityOperator(qubits(["X"]), np.eye(2) / 2), 2)


class TestConvexSplitFidelity(unittest.TestCase):

    def test_classical_path_matches_dense(self):
        rng = np.random.default_rng(11)
        for _ in range(10):
            rho_pq = random_diagonal_density(qubits(["P", "Q"]), rng=rng)
            sigma = random_diagonal_density(qubits(["Q"]), rng=rng)
            for n in [1, 2, 4]:
                value, classical = convex_split_fidelity(rho_pq, sigma, n)
                self.assertTrue(classical)
                dense = fidelity(convex_split_state(rho_pq, sigma, n), convex_split_reference(rho_pq, sigma, n))
                self.assertAlmostEqual(dense, value, delta=1e-9, msg=f"n={n}")

    def test_rotated_classical(self):
        # commuting in the eigenbases of rho_P and sigma_Q, not in the computational one
        rng = np.random.default_rng(12)
        h = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
        u = np.kron(h, h)
        rho_pq = random_diagonal_density(qubits(["P", "Q"]), rng=rng)
        rho_pq = DensityOperator(rho_pq.system, u @ rho_pq.matrix @ u.conj().T)
        sigma = DensityOperator(qubits(["Q"]), h @ np.diag([0.7, 0.3]) @ h)
        value, classical = convex_split_fidelity(rho_pq, sigma, 3)
        self.assertTrue(classical)
        dense = fidelity(convex_split_state(rho_pq, sigma, 3), convex_split_reference(rho_pq, sigma, 3))
        self.assertAlmostEqual(dense, value, delta=1e-9)

    def test_dense_path(self):
        rho_pq = random_density(qubits(["P", "Q"]), rng=13)
        sigma = partial_trace(rho_pq, "Q")
        value, classical = convex_split_fidelity(rho_pq, sigma, 8)
        self.assertFalse(classical)
        k = convex_split_k(rho_pq, sigma)
        # n = 8 meets the convex split bound with delta = 2^k / 8
        self.assertTrue(value ** 2 >= 1 - 2 ** k / 8 - 1e-8, f"F^2={value ** 2}, k={k}")

    def test_monotone_in_copies(self):
        rng = np.random.default_rng(14)
        for _ in range(100):
            rho_pq = random_diagonal_density(qubits(["P", "Q"]), rng=rng)
            sigma = random_diagonal_density(qubits(["Q"]), rng=rng, alpha=4.0)
            f8, _ = convex_split_fidelity(rho_pq, sigma, 8)
            f16, _ = convex_split_fidelity(rho_pq, sigma, 16)
            self.assertTrue(f16 >= f8 - 1e-10, f"F(16)={f16} < F(8)={f8} for {np.diag(rho_pq.matrix)}")
        for _ in range(5):
            rho_pq = near_product(rng)
            sigma = partial_trace(rho_pq, "Q")
            f2, _ = convex_split_fidelity(rho_pq, sigma, 2)
            f4, _ = convex_split_fidelity(rho_pq, sigma, 4)
            self.assertTrue(f4 >= f2 - 1e-10, f"F(4)={f4} < F(2)={f2}")


class TestConvexSplitBound(unittest.TestCase):

    def test_prescribed_copies(self):
        self.assertEqual(8, prescribed_copies(1.0, 0.25))
        self.assertEqual(2, prescribed_copies(0.0, 0.5))
        self.assertEqual(3, prescribed_copies(math.log2(1.5), 0.5))
        with self.assertRaises(ValueError):
            prescribed_copies(1.0, 1.0)

    def test_product(self):
        rng = np.random.default_rng(15)
        rho_pq = tensor(random_density(qubits(["P"]), rng=rng), uniform_q())
        for delta in DELTAS:
            check = convex_split_bound_check(rho_pq, uniform_q(), delta=delta)
            self.assertAlmostEqual(0.0, check.k, places=9)
            self.assertEqual(math.ceil(1 / delta), check.n)
            self.assertAlmostEqual(1.0, check.fidelity_squared, places=9)

    def test_perfect_correlation(self):
        check = convex_split_bound_check(diag_pair([0.5, 0, 0, 0.5]), uniform_q(), delta=0.25)
        self.assertAlmostEqual(1.0, check.k, places=9)
        self.assertEqual(8, check.n)
        self.assertTrue(check.fidelity_squared >= 0.75)
        self.assertTrue(check.classical)

    def test_random_classical_instances(self):
        start = time.time()
        rng = np.random.default_rng(16)
        for trial in range(TRIALS):
            delta = DELTAS[trial % len(DELTAS)]
            rho_pq = random_diagonal_density(qubits(["P", "Q"]), rng=rng)
            sigma = random_diagonal_density(qubits(["Q"]), rng=rng, alpha=4.0)
            check = convex_split_bound_check(rho_pq, sigma, delta=delta)
            self.assertTrue(check.fidelity_squared >= 1 - delta - 1e-8,
                            f"Trial {trial}: F^2={check.fidelity_squared} < {1 - delta} (n={check.n})")
        self.assertTrue(time.time() - start < 120, "Convex split battery too slow")

    def test_random_quantum_instances(self):
        rng = np.random.default_rng(17)
        ran = 0
        for trial in range(60):
            rho_pq = near_product(rng)
            sigma = partial_trace(rho_pq, "Q")
            delta = DELTAS[trial % 2]
            if prescribed_copies(convex_split_k(rho_pq, sigma), delta) > 9:
                continue
            check = convex_split_bound_check(rho_pq, sigma, delta=delta)
            self.assertTrue(check.fidelity_squared >= check.bound - 1e-8, f"Trial {trial}: {check}")
            ran += 1
        self.assertTrue(ran >= 10, f"Only {ran} dense instances ran")

    def test_smoothing_term(self):
        check = convex_split_bound_check(diag_pair([0.5, 0, 0, 0.5]), uniform_q(), eps=0.1, delta=0.25)
        self.assertAlmostEqual(1 - (0.5 + 0.2) ** 2, check.bound)
        with self.assertRaises(ValueError):
            convex_split_bound_check(diag_pair([0.5, 0, 0, 0.5]), uniform_q(), eps=-0.1)


if __name__ == '__main__':
    unittest.main()
