# Copyright 2026 (c) qsr-coherence contributors. All rights reserved. Issued under the Apache 2.0 License.

import unittest

import numpy as np

from qsr_coherence.protocols.uhlmann import uhlmann_isometry
from qsr_coherence.qmat.operations import fidelity, purify, reduced_state, reorder
from qsr_coherence.qmat.random_states import random_density, random_state_vector, random_unitary
from qsr_coherence.qmat.registers import RegisterSystem, StateVector


def system(*registers):
    return RegisterSystem(registers)


class TestUhlmann(unittest.TestCase):

    def test_identical(self):
        psi = random_state_vector(system(("A", 2), ("B", 2)), rng=1)
        result = uhlmann_isometry(psi, psi, ["A"])
        self.assertAlmostEqual(1.0, result.overlap, places=9)
        # V is the identity up to a phase
        v = result.isometry.matrix
        self.assertTrue(np.allclose(np.abs(np.trace(v)), 2.0))
        self.assertTrue(np.allclose(v / v[0, 0], np.eye(2)))

    def test_same_marginal(self):
        rho = random_density(system(("A", 3)), rng=2)
        psi = purify(rho, "B")
        u = random_unitary(3, rng=3)
        other = StateVector(psi.system.relabel({"B": "C"}), (np.eye(3) @ psi.tensor() @ u.T).reshape(-1))
        result = uhlmann_isometry(psi, other, ["A"])
        self.assertAlmostEqual(1.0, result.overlap, places=9)
        overlap = abs(np.vdot(result.theta.amplitudes, psi.amplitudes))
        self.assertAlmostEqual(1.0, overlap, places=9)

    def test_random_pairs(self):
        rng = np.random.default_rng(4)
        for d in [2, 3, 4]:
            for _ in range(10):
                d_b = d + int(rng.integers(0, 3))
                rho_global = random_state_vector(system(("A", d), ("B", d_b)), rng=rng)
                sigma_global = random_state_vector(system(("A", d), ("C", d)), rng=rng)
                result = uhlmann_isometry(rho_global, sigma_global, ["A"])
                expected = fidelity(reduced_state(rho_global, "A"), reduced_state(sigma_global, "A"))
                self.assertAlmostEqual(expected, result.overlap, delta=1e-8, msg=f"d={d}, d_b={d_b}")
                achieved = abs(np.vdot(result.theta.amplitudes, rho_global.amplitudes))
                self.assertAlmostEqual(expected, achieved, delta=1e-8)
                self.assertEqual(rho_global.system, result.theta.system)

    def test_theta_is_v_applied(self):
        rho_global = random_state_vector(system(("A", 2), ("B", 4)), rng=5)
        sigma_global = random_state_vector(system(("A", 2), ("C", 2)), rng=6)
        result = uhlmann_isometry(rho_global, sigma_global, ["A"])
        applied = np.kron(np.eye(2), result.isometry.matrix) @ sigma_global.amplitudes
        self.assertTrue(np.allclose(applied, result.theta.reorder(["A", "B"]).amplitudes))

    def test_multi_register(self):
        rng = np.random.default_rng(7)
        rho_global = random_state_vector(system(("X", 2), ("B1", 2), ("Y", 2), ("B2", 2)), rng=rng)
        sigma_global = random_state_vector(system(("C", 2), ("Y", 2), ("X", 2)), rng=rng)
        result = uhlmann_isometry(rho_global, sigma_global, ["X", "Y"])
        expected = fidelity(reduced_state(rho_global, ["X", "Y"]),
                            reorder(reduced_state(sigma_global, ["X", "Y"]), ["X", "Y"]))
        self.assertAlmostEqual(expected, result.overlap, delta=1e-8)
        self.assertEqual(["B1", "B2"], result.isometry.out_system.labels)

    def test_too_large(self):
        rho_global = random_state_vector(system(("A", 2), ("B", 2)), rng=8)
        sigma_global = random_state_vector(system(("A", 2), ("C", 3)), rng=9)
        with self.assertRaises(ValueError):
            uhlmann_isometry(rho_global, sigma_global, ["A"])

    def test_common_mismatch(self):
        rho_global = random_state_vector(system(("A", 2), ("B", 3)), rng=10)
        sigma_global = random_state_vector(system(("A", 3), ("C", 2)), rng=11)
        with self.assertRaises(ValueError):
            uhlmann_isometry(rho_global, sigma_global, ["A"])


if __name__ == '__main__':
    unittest.main()
