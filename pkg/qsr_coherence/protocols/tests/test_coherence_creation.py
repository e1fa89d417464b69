# Copyright 2026 (c) qsr-coherence contributors. All rights reserved. Issued under the Apache 2.0 License.

import time
import unittest

import numpy as np

from qsr_coherence.coherence.incoherent import plus_state
from qsr_coherence.errors import BudgetExceededError
from qsr_coherence.protocols.coherence_creation import coherence_creation
from qsr_coherence.protocols.transcript import COHERENT_QUBITS_OUT, QUBITS_SENT, SINGLETS_CONSUMED
from qsr_coherence.qmat.operations import vector_fidelity


class TestCoherenceCreation(unittest.TestCase):

    def test_grid(self):
        start = time.time()
        for q in range(4):
            for e in range(4):
                transcript = coherence_creation(q, e)
                c = q + min(e, q)
                counters = transcript.counters
                self.assertEqual(c, counters[COHERENT_QUBITS_OUT], f"q={q}, e={e}")
                self.assertEqual(q, counters[QUBITS_SENT], f"q={q}, e={e}")
                self.assertEqual(min(e, q), counters[SINGLETS_CONSUMED], f"q={q}, e={e}")
                self.assertTrue(transcript.achieved_fidelity >= 1.0 - 1e-9,
                                f"q={q}, e={e}: fidelity {transcript.achieved_fidelity}")
                # every used singlet brings one certified controlled-Z
                self.assertEqual(min(e, q), len(transcript.certified), f"q={q}, e={e}")
        self.assertTrue(time.time() - start < 5.0, "Coherence creation grid too slow")

    def test_two_one(self):
        transcript = coherence_creation(2, 1)
        self.assertEqual(3, transcript.metrics["c"])
        final = transcript.post_state
        self.assertEqual(8, final.dim)
        self.assertAlmostEqual(1.0, vector_fidelity(plus_state(3, final.system.labels), final), places=9)

    def test_no_channel(self):
        for e in range(3):
            transcript = coherence_creation(0, e)
            self.assertEqual(0, transcript.counters[COHERENT_QUBITS_OUT])
            self.assertEqual(1.0, transcript.achieved_fidelity)
            self.assertIsNone(transcript.post_state)

    def test_gain_per_qubit(self):
        transcript = coherence_creation(1, 3)
        self.assertEqual(2, transcript.counters[COHERENT_QUBITS_OUT])
        gains = transcript.metrics["coherence_gains"]
        self.assertEqual(1, len(gains))
        self.assertTrue(gains[0] <= 2.0 + 1e-9, f"Gain {gains[0]} above 2 log2 2")
        # Bob goes from a maximally mixed qubit to |+>|+>
        self.assertAlmostEqual(2.0, gains[0], places=9)

    def test_conservation(self):
        for q, e in [(1, 0), (2, 2), (3, 1)]:
            counters = coherence_creation(q, e).counters
            self.assertEqual(counters[QUBITS_SENT] + min(counters[SINGLETS_CONSUMED], counters[QUBITS_SENT]),
                             counters[COHERENT_QUBITS_OUT])

    def test_budget(self):
        with self.assertRaises(BudgetExceededError):
            coherence_creation(3, 3, budget=2 ** 5)
        transcript = coherence_creation(3, 3, budget=2 ** 6)
        self.assertEqual(6, transcript.counters[COHERENT_QUBITS_OUT])

    def test_negative(self):
        with self.assertRaises(ValueError):
            coherence_creation(-1, 0)

    def test_json(self):
        data = coherence_creation(1, 1).to_dict(include_snapshots=True)
        self.assertEqual("coherence-creation", data["protocol"])
        self.assertEqual(2, data["counters"][COHERENT_QUBITS_OUT])
        self.assertIn("post_state", data)
        self.assertTrue(np.isclose(1.0, data["achieved_fidelity"]))


if __name__ == '__main__':
    unittest.main()
