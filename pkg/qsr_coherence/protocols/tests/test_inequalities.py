# Copyright 2026 (c) qsr-coherence contributors. All rights reserved. Issued under the Apache 2.0 License.

import unittest

import numpy as np

from qsr_coherence.errors import BoundViolationError
from qsr_coherence.protocols.inequalities import (close_states_measurement_check, gentle_measurement_check,
                                                  sequential_projector_bound_check)
from qsr_coherence.qmat.operations import purified_distance
from qsr_coherence.qmat.random_states import (qubits, random_close_pair, random_contraction, random_density,
                                              random_projector, random_state_vector)
from qsr_coherence.qmat.registers import DensityOperator, RegisterSystem

TRIALS = 500


class TestSequentialProjectors(unittest.TestCase):

    def test_zero_projectors(self):
        rho = random_density(qubits(["A"]), rng=1)
        check = sequential_projector_bound_check(rho, [np.zeros((2, 2))] * 3)
        self.assertEqual(0.0, check.lhs)
        self.assertEqual(0.0, check.rhs)

    def test_single_projector(self):
        rng = np.random.default_rng(2)
        for _ in range(50):
            rho = random_density(qubits(["A"]), rng=rng)
            pi = random_projector(2, 1, rng=rng)
            t = float(np.real(np.trace(pi @ rho.matrix)))
            lhs, rhs = sequential_projector_bound_check(rho, [pi])
            self.assertAlmostEqual(t ** 0.25, rhs)
            self.assertTrue(lhs <= rhs + 1e-9, f"P={lhs} > t^(1/4)={rhs}")

    def test_random_sequences(self):
        rng = np.random.default_rng(3)
        system = RegisterSystem([("A", 3), ("B", 2)])
        for trial in range(TRIALS):
            rho = random_density(system, rng=rng)
            projectors = [random_projector(6, int(rng.integers(1, 3)), rng=rng) * (rng.uniform() < 0.9)
                          for _ in range(3)]
            check = sequential_projector_bound_check(rho, projectors)
            self.assertTrue(check.lhs <= check.rhs + 1e-8, f"Trial {trial}: {check}")

    def test_annihilated(self):
        rho = DensityOperator(qubits(["A"]), np.diag([1.0, 0.0]))
        check = sequential_projector_bound_check(rho, [np.diag([1.0, 0.0])])
        self.assertEqual(1.0, check.lhs)
        self.assertEqual(1.0, check.rhs)

    def test_not_a_projector(self):
        rho = random_density(qubits(["A"]), rng=4)
        with self.assertRaises(ValueError):
            sequential_projector_bound_check(rho, [np.diag([0.5, 0.0])])
        with self.assertRaises(ValueError):
            sequential_projector_bound_check(rho, [np.eye(3)])


class TestCloseStates(unittest.TestCase):

    def test_random_triples(self):
        rng = np.random.default_rng(5)
        system = qubits(["A", "B"])
        for trial in range(TRIALS):
            rho, sigma = random_close_pair(system, float(rng.uniform(0.0, 0.3)), rng=rng)
            operator = random_contraction(4, rng=rng)
            check = close_states_measurement_check(rho, sigma, operator)
            self.assertTrue(check.lhs <= check.rhs + 1e-8, f"Trial {trial}: {check}")

    def test_exact_acceptance(self):
        # for pure rho and Pi = rho, delta = 0 and Tr(Pi sigma) = 1 - eps^2 exactly
        rng = np.random.default_rng(6)
        for _ in range(50):
            psi = random_state_vector(qubits(["A"]), rng=rng)
            rho = psi.density()
            tau = random_density(qubits(["A"]), rng=rng)
            sigma = DensityOperator(rho.system, 0.9 * rho.matrix + 0.1 * tau.matrix)
            eps = purified_distance(rho, sigma)
            check = close_states_measurement_check(rho, sigma, rho.matrix)
            self.assertAlmostEqual(1 - eps ** 2, check.rhs, delta=1e-7)
            self.assertAlmostEqual(1 - 4 * eps ** 2, check.lhs, delta=1e-6)

    def test_bad_operator(self):
        rho = random_density(qubits(["A"]), rng=7)
        with self.assertRaises(ValueError):
            close_states_measurement_check(rho, rho, 2 * np.eye(2))


class TestGentleMeasurement(unittest.TestCase):

    def test_random(self):
        rng = np.random.default_rng(8)
        system = RegisterSystem([("A", 2), ("B", 3)])
        for trial in range(TRIALS):
            rho = random_density(system, rank=int(rng.integers(1, 7)), rng=rng)
            check = gentle_measurement_check(rho, random_contraction(6, rng=rng))
            self.assertTrue(check.lhs <= check.rhs + 1e-8, f"Trial {trial}: {check}")

    def test_identity(self):
        rho = random_density(qubits(["A"]), rng=9)
        check = gentle_measurement_check(rho, np.eye(2))
        self.assertAlmostEqual(1.0, check.lhs)
        self.assertAlmostEqual(1.0, check.rhs)

    def test_assertion(self):
        # an impossible slack turns the check into a failure
        rho = DensityOperator(qubits(["A"]), np.full((2, 2), 0.5))
        with self.assertRaises(BoundViolationError):
            gentle_measurement_check(rho, np.diag([1.0, 0.0]), slack=-1.0)


if __name__ == '__main__':
    unittest.main()
