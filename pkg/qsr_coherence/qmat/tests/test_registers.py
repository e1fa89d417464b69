# Copyright 2026 (c) qsr-coherence contributors. All rights reserved. Issued under the Apache 2.0 License.

import unittest

import numpy as np

from qsr_coherence.qmat.registers import (DensityOperator, Isometry, KrausChannel, Povm, RegisterSystem,
                                          StateVector)

H = np.array([[1, 1], [1, -1]]) / np.sqrt(2)


class TestRegisterSystem(unittest.TestCase):

    def setUp(self):
        self.system = RegisterSystem([("R", 2), ("B", 3), ("C", 2)])

    def test_dims(self):
        self.assertEqual(["R", "B", "C"], self.system.labels)
        self.assertEqual(12, self.system.dim)
        self.assertEqual(6, self.system.dim_of(["B", "C"]))
        self.assertEqual(1, RegisterSystem([]).dim)

    def test_duplicate_labels(self):
        with self.assertRaises(ValueError):
            RegisterSystem([("R", 2), ("R", 2)])

    def test_invalid_dim(self):
        with self.assertRaises(ValueError):
            RegisterSystem([("R", 0)])

    def test_unknown_label(self):
        with self.assertRaises(ValueError) as ctx:
            self.system.index("X")
        self.assertTrue("X" in str(ctx.exception))

    def test_subsystem_keeps_canonical_order(self):
        self.assertEqual(["R", "C"], self.system.subsystem(["C", "R"]).labels)
        self.assertEqual(["C", "R"], self.system.ordered(["C", "R"]).labels)
        self.assertEqual(["B"], self.system.without(["R", "C"]).labels)

    def test_concat_collision(self):
        with self.assertRaises(ValueError):
            self.system.concat(RegisterSystem([("C", 2)]))

    def test_single_label_string(self):
        self.assertEqual(3, self.system.dim_of("B"))


class TestStateTypes(unittest.TestCase):

    def test_vector_norm(self):
        system = RegisterSystem([("C", 2)])
        with self.assertRaises(ValueError):
            StateVector(system, [1.0, 1.0])
        psi = StateVector(system, [1.0, 0.0])
        self.assertFalse(psi.amplitudes.flags.writeable)

    def test_vector_reorder(self):
        system = RegisterSystem([("A", 2), ("B", 2)])
        psi = StateVector(system, [0, 1, 0, 0])
        swapped = psi.reorder(["B", "A"])
        self.assertEqual(["B", "A"], swapped.system.labels)
        self.assertTrue(np.allclose([0, 0, 1, 0], swapped.amplitudes))

    def test_density_checks(self):
        system = RegisterSystem([("C", 2)])
        with self.assertRaises(ValueError):
            DensityOperator(system, [[1.0, 0.0], [0.0, 1.0]])
        with self.assertRaises(ValueError):
            DensityOperator(system, [[1.5, 0.0], [0.0, -0.5]])
        with self.assertRaises(ValueError):
            DensityOperator(system, [[0.5, 0.5], [0.0, 0.5]])
        half = DensityOperator(system, [[0.5, 0.0], [0.0, 0.0]], subnormalized=True)
        self.assertAlmostEqual(0.5, half.trace())

    def test_isometry_check(self):
        a = RegisterSystem([("A", 2)])
        b = RegisterSystem([("B", 4)])
        v = Isometry(a, b, np.eye(4)[:, :2])
        self.assertFalse(v.is_unitary())
        with self.assertRaises(ValueError):
            Isometry(a, b, np.ones((4, 2)))
        with self.assertRaises(ValueError):
            Isometry(b, a, np.ones((2, 4)))

    def test_kraus_completeness(self):
        system = RegisterSystem([("C", 2)])
        KrausChannel.unitary(system, H)
        with self.assertRaises(ValueError):
            KrausChannel(system, system, [np.diag([1.0, 0.0])])
        branch = KrausChannel(system, system, [np.diag([1.0, 0.0])], subnormalized=True)
        self.assertEqual(1, len(branch))

    def test_povm(self):
        system = RegisterSystem([("C", 2)])
        plus = np.full((2, 2), 0.5)
        minus = np.array([[0.5, -0.5], [-0.5, 0.5]])
        povm = Povm.from_effects(system, [plus, minus])
        self.assertEqual(2, len(povm))
        for effect, expected in zip(povm.effects(), [plus, minus]):
            self.assertTrue(np.allclose(expected, effect))
        with self.assertRaises(ValueError) as ctx:
            Povm(system, [plus])
        self.assertTrue("Incomplete POVM" in str(ctx.exception))


if __name__ == '__main__':
    unittest.main()
