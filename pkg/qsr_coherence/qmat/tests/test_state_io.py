# Copyright 2026 (c) qsr-coherence contributors. All rights reserved. Issued under the Apache 2.0 License.

import os
import tempfile
import unittest

import numpy as np

from qsr_coherence.errors import StateFileError
from qsr_coherence.qmat.random_states import qubits, random_density, random_state_vector
from qsr_coherence.qmat.registers import DensityOperator, StateVector
from qsr_coherence.qmat.state_io import load_state, save_state, state_to_dict, validate_state_dict

ROOT_DIR = os.path.dirname(os.path.abspath(__file__))
FIXTURES_PATH = os.path.join(ROOT_DIR, "fixtures")

PLUS_FILE = os.path.join(FIXTURES_PATH, "plus.json")
GHZ_FILE = os.path.join(FIXTURES_PATH, "ghz.json")
MIXED_FILE = os.path.join(FIXTURES_PATH, "mixed_qubit.json")
MALFORMED_FILE = os.path.join(FIXTURES_PATH, "malformed.json")
BAD_MATRIX_FILE = os.path.join(FIXTURES_PATH, "bad_matrix.json")
BAD_TRACE_FILE = os.path.join(FIXTURES_PATH, "bad_trace.json")
BAD_AMPLITUDES_FILE = os.path.join(FIXTURES_PATH, "bad_amplitudes.json")


class TestStateIO(unittest.TestCase):

    def test_load_vector(self):
        psi = load_state(PLUS_FILE)
        self.assertTrue(isinstance(psi, StateVector))
        self.assertEqual(["C"], psi.system.labels)
        ghz = load_state(GHZ_FILE)
        self.assertEqual(["R", "B", "C"], ghz.system.labels)
        self.assertAlmostEqual(0.5, abs(ghz.amplitudes[7]) ** 2)

    def test_load_density(self):
        rho = load_state(MIXED_FILE)
        self.assertTrue(isinstance(rho, DensityOperator))
        self.assertAlmostEqual(0.1 + 0.2j, rho.matrix[1, 0])

    def test_malformed_json(self):
        with self.assertRaises(StateFileError) as ctx:
            load_state(MALFORMED_FILE)
        self.assertTrue("JSON parse error" in ctx.exception.errors[0], f"Unexpected errors: {ctx.exception.errors}")

    def test_bad_registers(self):
        with self.assertRaises(StateFileError) as ctx:
            load_state(BAD_MATRIX_FILE)
        errors = ctx.exception.errors
        self.assertEqual(2, len(errors), f"Unexpected errors: {errors}")
        self.assertTrue("invalid dimension 0" in errors[0])
        self.assertTrue("Duplicate" in errors[1])

    def test_bad_trace(self):
        with self.assertRaises(StateFileError) as ctx:
            load_state(BAD_TRACE_FILE)
        self.assertTrue("trace" in ctx.exception.errors[0], f"Unexpected errors: {ctx.exception.errors}")

    def test_bad_amplitudes(self):
        with self.assertRaises(StateFileError) as ctx:
            load_state(BAD_AMPLITUDES_FILE)
        self.assertEqual(["Expected 4 amplitudes, got 3"], ctx.exception.errors)

    def test_validate_dict(self):
        self.assertEqual(["Missing key 'registers'"], validate_state_dict({"amplitudes": []}))
        errors = validate_state_dict({"registers": [{"label": "C", "dim": 1}], "amplitudes": [[1.0, 0.0]],
                                      "matrix": [[[1.0, 0.0]]]})
        self.assertTrue("got both" in errors[0], f"Unexpected errors: {errors}")
        self.assertTrue(not validate_state_dict({"registers": [{"label": "C", "dim": 1}], "amplitudes": [[0.0, 1.0]]}))
        errors = validate_state_dict({"registers": [{"label": "C", "dim": 1}], "amplitudes": [["x", 1.0]]})
        self.assertTrue("expected [re, im]" in errors[0], f"Unexpected errors: {errors}")

    def test_save_full_precision(self):
        rng = np.random.default_rng(3)
        states = [random_density(qubits(["A", "B"]), rng=rng), random_state_vector(qubits(["R", "C"]), rng=rng)]
        with tempfile.TemporaryDirectory() as tmp:
            for i, state in enumerate(states):
                path = os.path.join(tmp, f"state_{i}.json")
                save_state(state, path)
                loaded = load_state(path)
                self.assertEqual(state.system, loaded.system)
                self.assertEqual(state_to_dict(state), state_to_dict(loaded))


if __name__ == '__main__':
    unittest.main()
