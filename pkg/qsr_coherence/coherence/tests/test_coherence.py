# Copyright 2026 (c) qsr-coherence contributors. All rights reserved. Issued under the Apache 2.0 License.

import math
import unittest

import numpy as np

from qsr_coherence.coherence.dephasing import DEPHASING, dephase, dephase_matrix
from qsr_coherence.coherence.incoherent import (HADAMARD, IncoherentKrausSet, is_incoherent_channel,
                                                maximally_coherent_state, plus_state, random_incoherent_kraus_set,
                                                singlet_incoherent_unitary, swap_unitary)
from qsr_coherence.coherence.resource_theory import (COHERENCE, get_resource_theory,
                                                     is_incoherent_measurement_operator, is_incoherent_state)
from qsr_coherence.entropy.quantities import relative_entropy_of_coherence, von_neumann_entropy
from qsr_coherence.qmat.matrix_functions import support_log2
from qsr_coherence.qmat.operations import apply_channel, fidelity
from qsr_coherence.qmat.random_states import qubits, random_contraction, random_density, random_diagonal_density
from qsr_coherence.qmat.registers import DensityOperator, KrausChannel, RegisterSystem, StateVector

PLUS = DensityOperator(qubits(["A"]), np.full((2, 2), 0.5))


class TestDephasing(unittest.TestCase):

    def test_diagonal_unchanged(self):
        rho = random_diagonal_density(qubits(["A", "B"]), rng=1)
        self.assertTrue(np.allclose(rho.matrix, dephase(rho).matrix))

    def test_plus(self):
        self.assertTrue(np.allclose(np.eye(2) / 2, dephase(PLUS).matrix))

    def test_tensor_rule(self):
        rng = np.random.default_rng(2)
        for _ in range(50):
            rho = random_density(RegisterSystem([("A", 2), ("B", 3), ("C", 2)]), rng=rng)
            sequential = dephase(dephase(rho, "B"), "C")
            self.assertTrue(np.allclose(dephase(rho, ["B", "C"]).matrix, sequential.matrix))

    def test_partial_dephasing_keeps_other_coherences(self):
        plus_plus = StateVector(qubits(["A", "B"]), np.full(4, 0.5)).density()
        out = dephase(plus_plus, "A")
        expected = np.kron(np.eye(2) / 2, np.full((2, 2), 0.5))
        self.assertTrue(np.allclose(expected, out.matrix))

    def test_idempotent_and_trace_preserving(self):
        rng = np.random.default_rng(3)
        for _ in range(50):
            rho = random_density(qubits(["A", "B"]), rng=rng)
            self.assertTrue(DEPHASING.is_idempotent(rho))
            self.assertAlmostEqual(1.0, DEPHASING.apply(rho).trace(), places=12)

    def test_self_adjoint(self):
        rng = np.random.default_rng(4)
        system = qubits(["A", "B"])
        for _ in range(50):
            rho = random_density(system, rng=rng)
            operator = random_contraction(system.dim, rng=rng)
            lhs = np.trace(operator @ DEPHASING.apply(rho).matrix)
            rhs = np.trace(DEPHASING.adjoint(system, operator) @ rho.matrix)
            self.assertAlmostEqual(0.0, abs(lhs - rhs), places=12)
            self.assertTrue(is_incoherent_measurement_operator(DEPHASING.adjoint(system, operator)))

    def test_surjective_on_diagonal_tests(self):
        system = qubits(["A", "B"])
        pi = np.diag([0.1, 0.0, 1.0, 0.7])
        self.assertTrue(DEPHASING.surjective_wrt_free_ops)
        self.assertTrue(np.allclose(pi, DEPHASING.adjoint(system, pi)))

    def test_free_states_fixed(self):
        rng = np.random.default_rng(5)
        for _ in range(20):
            sigma = random_diagonal_density(qubits(["C"]), rng=rng)
            self.assertTrue(np.allclose(sigma.matrix, dephase(sigma).matrix))

    def test_log_of_dephased_pairs_with_dephased(self):
        rng = np.random.default_rng(6)
        for _ in range(50):
            rho = random_density(qubits(["C"]), rng=rng)
            other = random_density(qubits(["C"]), rng=rng)
            log_other = support_log2(dephase(other).matrix)
            lhs = np.trace(rho.matrix @ log_other)
            rhs = np.trace(dephase(rho).matrix @ log_other)
            self.assertAlmostEqual(0.0, abs(lhs - rhs), places=10)

    def test_dephase_matrix_unknown_label(self):
        with self.assertRaises(ValueError):
            dephase_matrix(qubits(["A"]), np.eye(2), ["X"])


class TestIncoherentOperations(unittest.TestCase):

    def test_swap(self):
        system = qubits(["A", "B"])
        ok, witness = is_incoherent_channel(KrausChannel.unitary(system, swap_unitary(2)))
        self.assertTrue(ok)
        self.assertIsNone(witness)

    def test_hadamard(self):
        ok, witness = is_incoherent_channel(KrausChannel.unitary(qubits(["A"]), HADAMARD))
        self.assertFalse(ok)
        self.assertEqual((0, 0), witness)

    def test_singlet_unitary(self):
        u = singlet_incoherent_unitary()
        ok, _ = is_incoherent_channel(KrausChannel.unitary(qubits(["A", "B"]), u))
        self.assertTrue(ok)
        zero_plus = np.kron([1, 0], [1, 1]) / np.sqrt(2)
        one_minus = np.kron([0, 1], [1, -1]) / np.sqrt(2)
        psi = (zero_plus + one_minus) / np.sqrt(2)
        self.assertTrue(np.allclose(np.full(4, 0.5), u @ psi))

    def test_incoherent_kraus_set_rejects_coherent(self):
        with self.assertRaises(ValueError):
            IncoherentKrausSet(qubits(["A"]), qubits(["A"]), [HADAMARD])

    def test_random_incoherent_never_raises_coherence(self):
        rng = np.random.default_rng(7)
        for _ in range(200):
            system = qubits(["A", "B"])
            kraus = random_incoherent_kraus_set(system, num_kraus=int(rng.integers(1, 4)), rng=rng)
            rho = random_density(system, rng=rng)
            before = relative_entropy_of_coherence(rho)
            after = relative_entropy_of_coherence(apply_channel(kraus.channel, rho))
            self.assertTrue(after <= before + 1e-9, f"R_c increased: {before} -> {after}")

    def test_free_operations_keep_free_states(self):
        rng = np.random.default_rng(8)
        for _ in range(100):
            system = qubits(["A", "B"])
            kraus = random_incoherent_kraus_set(system, num_kraus=3, rng=rng)
            sigma = random_diagonal_density(system, rng=rng)
            self.assertTrue(COHERENCE.free_op_test(kraus.channel))
            self.assertTrue(COHERENCE.free_state_test(apply_channel(kraus.channel, sigma)))

    def test_maximally_coherent_state(self):
        self.assertTrue(np.allclose(PLUS.matrix, maximally_coherent_state(1).matrix))
        self.assertAlmostEqual(2.0, relative_entropy_of_coherence(maximally_coherent_state(2)), places=12)
        three = maximally_coherent_state(3, ["X", "Y", "Z"])
        self.assertEqual(["X", "Y", "Z"], three.system.labels)
        self.assertAlmostEqual(1.0, fidelity(three, plus_state(3, ["X", "Y", "Z"]).density()), places=7)
        self.assertAlmostEqual(0.0, von_neumann_entropy(three), places=12)


class TestResourceTheory(unittest.TestCase):

    def test_registry(self):
        self.assertIs(COHERENCE, get_resource_theory("coherence"))
        with self.assertRaises(ValueError):
            get_resource_theory("thermodynamics")

    def test_membership(self):
        self.assertTrue(is_incoherent_state(random_diagonal_density(qubits(["A"]), rng=9)))
        self.assertFalse(is_incoherent_state(PLUS))
        self.assertTrue(is_incoherent_measurement_operator(np.diag([0.0, 0.4])))
        self.assertFalse(is_incoherent_measurement_operator(np.diag([1.2, 0.4])))
        self.assertFalse(is_incoherent_measurement_operator(PLUS.matrix))

    def test_converse_constant(self):
        self.assertAlmostEqual(math.log2(8), COHERENCE.converse_constant(qubits(["R1", "R2", "R3"])))


if __name__ == '__main__':
    unittest.main()
