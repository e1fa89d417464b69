# Copyright 2026 (c) qsr-coherence contributors. All rights reserved. Issued under the Apache 2.0 License.

import math
import unittest

import numpy as np

from qsr_coherence.selftest import CHECKS, SLACK, run_selftest


class TestSelftest(unittest.TestCase):

    def test_checks_hold(self):
        rng = np.random.default_rng(3)
        for name, check in CHECKS.items():
            for _ in range(20):
                excess = check(rng)
                self.assertTrue(excess <= SLACK, f"{name}: lhs - rhs = {excess}")
                self.assertFalse(math.isnan(excess), f"{name} returned nan")

    def test_report(self):
        df = run_selftest(trials=5, seed=1)
        self.assertEqual(list(CHECKS), list(df["check"]))
        self.assertEqual(["check", "trials", "violations", "worst"], list(df.columns))
        self.assertEqual(0, df["violations"].sum())
        self.assertTrue((df["trials"] == 5).all())

    def test_seeded(self):
        self.assertTrue(run_selftest(trials=3, seed=5).equals(run_selftest(trials=3, seed=5)))

    def test_no_trials(self):
        with self.assertRaises(ValueError):
            run_selftest(trials=0)


if __name__ == '__main__':
    unittest.main()
