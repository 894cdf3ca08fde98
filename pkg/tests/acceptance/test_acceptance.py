"""
Full-scale checks of the laboratory's analytic and Monte Carlo guarantees.

The Monte Carlo classes take minutes and only run when COVLAB_SLOW is set.
"""
import math
import os
import unittest

import numpy as np

from src.config.models import DetectorKind, SchemeKind
from src.dist.analytics import (
    covertness_lower_bound,
    flag_bit_bound,
    flag_bit_kl,
    flag_scalar_check,
    kl_divergence,
    modified_pmf,
)
from src.dist.dependent import dependent_insertion_profile, make_dependent_model
from src.dist.pmf import make_pmf
from src.lab.experiments import covertness_sweep, dependent_experiment, sqrt_law_sweep, throughput_experiment
from src.lab.models import ExperimentSpec
from src.scheme.alice import alice_insert
from src.scheme.bob import bob_extract
from src.scheme.budget import derive_budget
from src.scheme.key import generate_key
from src.traffic.generator import generate_dependent, generate_iid

SLOW = bool(os.environ.get("COVLAB_SLOW"))
EPSILONS = (0.01, 0.05, 0.1, 0.3)
SIZES = (10 ** 2, 10 ** 4, 10 ** 6)


def random_pmfs(count, seed):
    rng = np.random.default_rng(seed)
    for _ in range(count):
        k = int(rng.integers(2, 17))
        support = np.sort(rng.choice(np.arange(1, 1500), size=k, replace=False)).tolist()
        yield make_pmf(support, rng.dirichlet(np.ones(k)).tolist())


def random_model(rng):
    alphabet = np.sort(rng.choice(np.arange(4, 40), size=int(rng.integers(2, 6)), replace=False)).tolist()

    def row():
        k = int(rng.integers(1, len(alphabet) + 1))
        support = sorted(rng.choice(alphabet, size=k, replace=False).tolist())
        return support, rng.dirichlet(np.ones(k)).tolist()

    rows = {(a,): row() for a in alphabet}
    return make_dependent_model(1, (alphabet, rng.dirichlet(np.ones(len(alphabet))).tolist()), rows)


def wide_pmf():
    return make_pmf(list(range(100, 136)), [1.0 / 36] * 36)


def hand_built_models():
    return {
        'nondegenerate': make_dependent_model(
            1, ([8, 9], [0.5, 0.5]),
            {(8,): ([8, 9], [0.5, 0.5]), (9,): ([8, 9], [0.9, 0.1])},
        ),
        'partially_degenerate': make_dependent_model(
            1, ([8, 9, 10], [0.4, 0.3, 0.3]),
            {(8,): ([8, 9], [0.5, 0.5]), (9,): ([10], [1.0]), (10,): ([8, 9, 10], [0.2, 0.3, 0.5])},
        ),
        'absorbing': make_dependent_model(
            1, ([8, 9], [0.5, 0.5]),
            {(8,): ([8, 9], [0.7, 0.3]), (9,): ([9], [1.0])},
        ),
    }


def forward_c(model, n):
    """sum_i P(K_i >= 2) over explicit histories."""
    dist = {(): 1.0}
    total = 0.0
    for _ in range(n):
        nxt = {}
        for history, mass in dist.items():
            row = model.conditional(history) if history else model.initial
            if row.k >= 2:
                total += mass
            for size, prob in zip(row.support, row.probs):
                key = model.next_key(history, size)
                nxt[key] = nxt.get(key, 0.0) + mass * prob
        dist = nxt
    return total


class TestAnalyticGuarantees(unittest.TestCase):
    """Exact inequalities over randomized pmfs."""

    def test_divergence_within_budget(self):
        for index, pmf in enumerate(random_pmfs(100, seed=2024)):
            for epsilon in EPSILONS:
                for n in SIZES:
                    p = derive_budget(pmf, n, epsilon).p
                    total = n * kl_divergence(modified_pmf(pmf, p), pmf)
                    self.assertLessEqual(total, 2 * epsilon ** 2, (index, epsilon, n))

    def test_flag_bit_divergence_within_bound(self):
        for index, pmf in enumerate(random_pmfs(100, seed=2024)):
            for epsilon in EPSILONS:
                for n in SIZES:
                    p = derive_budget(pmf, n, epsilon).p
                    self.assertLessEqual(n * flag_bit_kl(pmf, p), n * flag_bit_bound(pmf, p) * (1 + 1e-12),
                                         (index, epsilon, n))

    def test_scalar_flag_inequality(self):
        self.assertTrue(flag_scalar_check())
        self.assertTrue(flag_scalar_check(np.linspace(0.0, 0.999, 1000)))


class TestRoundTrips(unittest.TestCase):

    def test_thousand_round_trips(self):
        rng = np.random.default_rng(99)
        for trial in range(1000):
            n = int(rng.integers(1, 300))
            kind = (SchemeKind.UNIT, SchemeKind.GENERAL, SchemeKind.DEPENDENT)[trial % 3]
            if kind is SchemeKind.DEPENDENT:
                model = random_model(rng)
                stream = generate_dependent(model, n, seed=trial)
            else:
                k = int(rng.integers(2, 9))
                if kind is SchemeKind.UNIT:
                    start = int(rng.integers(1, 100))
                    support = list(range(start, start + k))
                else:
                    support = np.sort(rng.choice(np.arange(1, 300), size=k, replace=False)).tolist()
                model = make_pmf(support, rng.dirichlet(np.ones(k)).tolist())
                stream = generate_iid(model, n, seed=trial)
            key = generate_key(n, float(rng.uniform(0.01, 0.9)), seed=trial)
            message = rng.integers(0, 2, size=int(rng.integers(0, 500))).astype(np.uint8)
            with self.subTest(trial=trial, scheme=kind.value):
                outcome = alice_insert(kind, stream, key, model, message)
                result = bob_extract(outcome.stream, key, model)
                self.assertTrue(result.restored.content_equal(stream, ignore_flags_at=key.selected))
                cursor = outcome.message_cursor
                np.testing.assert_array_equal(result.message(cursor), message[:cursor])


class TestDependentAccounting(unittest.TestCase):

    def test_profile_matches_forward_recursion(self):
        for name, model in hand_built_models().items():
            for n in (1, 2, 10, 500):
                with self.subTest(model=name, n=n):
                    self.assertAlmostEqual(dependent_insertion_profile(model, n).c, forward_c(model, n), delta=1e-9)

    @unittest.skipUnless(SLOW, "set COVLAB_SLOW=1 to run")
    def test_monte_carlo_meets_floor(self):
        trials = 1000
        for name, model in hand_built_models().items():
            spec = ExperimentSpec(model=model, epsilons=[0.1], sizes=[10 ** 4], trials=trials,
                                  detectors=[DetectorKind.MEAN], seed=7)
            row = dependent_experiment(spec).iloc[0]
            with self.subTest(model=name):
                self.assertTrue(bool(row['row_kl_ok']))
                se = max(row['se_nc'], 1.0 / trials)
                self.assertGreaterEqual(row['mean_nc'], row['room_bound'] - 3 * se)
                self.assertLessEqual(abs(row['mean_nc'] - row['expected_nc']), 4 * se + 1.0 / trials)


@unittest.skipUnless(SLOW, "set COVLAB_SLOW=1 to run")
class TestMonteCarloCriteria(unittest.TestCase):
    """Detection and throughput at full scale."""

    def test_throughput_law_of_large_numbers(self):
        spec = ExperimentSpec(model=make_pmf([8, 9], [0.5, 0.5]), epsilons=[0.1], sizes=[10 ** 6],
                              trials=1000, seed=11)
        row = throughput_experiment(spec).iloc[0]
        self.assertAlmostEqual(row['expected_nc'], 50.0, places=9)
        self.assertLessEqual(abs(row['mean_nc'] - 50.0), 3 * row['se_nc'])
        self.assertGreaterEqual(row['frac_above_threshold'], 0.99)
        self.assertGreater(row['size_law_pvalue'], 1e-3)

    def test_likelihood_ratio_error_floor(self):
        spec = ExperimentSpec(model=make_pmf([8, 9], [0.5, 0.5]), epsilons=[0.05, 0.1], sizes=[10 ** 4],
                              trials=10 ** 4, detectors=[DetectorKind.LRT], seed=13, workers=4)
        df = covertness_sweep(spec)
        for _, row in df.iterrows():
            epsilon = row['epsilon']
            with self.subTest(epsilon=epsilon):
                self.assertGreaterEqual(row['p_e'], 0.5 - epsilon - 0.02)
                self.assertGreaterEqual(row['p_e'], covertness_lower_bound(2 * epsilon ** 2) - 0.02)

    def test_mean_detector_beyond_square_root(self):
        trials = 1000
        spec = ExperimentSpec(model=wide_pmf(), epsilons=[0.1], sizes=[10 ** 3, 10 ** 4, 10 ** 5], gammas=[0.9],
                              trials=trials, detectors=[DetectorKind.MEAN], alpha=0.05, seed=17, workers=4)
        df = sqrt_law_sweep(spec)
        se = math.sqrt(0.05 * 0.95 / trials)
        last = df.iloc[-1]
        self.assertLessEqual(last['p_fa'], 0.05 + 3 * se)
        self.assertLessEqual(last['p_md'], 0.05)
        self.assertTrue(np.all(np.diff(df['p_e'].to_numpy()) < 0))

    def test_square_root_insertion_stays_hidden(self):
        trials = 1000
        spec = ExperimentSpec(model=wide_pmf(), epsilons=[0.1], sizes=[10 ** 4, 10 ** 5], gammas=[0.5],
                              trials=trials, detectors=[DetectorKind.MEAN], alpha=0.05, seed=19, workers=4)
        for _, row in sqrt_law_sweep(spec).iterrows():
            with self.subTest(n=row['n']):
                self.assertGreaterEqual(row['p_e'], 0.4)
                self.assertLessEqual(abs(row['p_e'] - 0.5), 0.05)

    def test_near_linear_insertion_is_detected(self):
        spec = ExperimentSpec(model=wide_pmf(), epsilons=[0.1], sizes=[10 ** 5], gammas=[0.95],
                              trials=1000, detectors=[DetectorKind.MEAN], alpha=0.05, seed=23, workers=4)
        row = sqrt_law_sweep(spec).iloc[0]
        self.assertLessEqual(row['p_e'], 0.05)


if __name__ == '__main__':
    unittest.main()
