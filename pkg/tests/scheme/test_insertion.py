import unittest
from unittest.mock import MagicMock

import numpy as np

from src.config.models import EtaMode, SchemeKind
from src.dist.dependent import make_dependent_model
from src.dist.pmf import make_pmf
from src.exceptions import ExtractionError, KeyMismatchError, SchemeError
from src.scheme.alice import alice_insert, alice_insert_general, alice_insert_unit
from src.scheme.bob import bob_extract
from src.scheme.budget import derive_budget
from src.scheme.key import CovertKey, generate_key
from src.traffic.generator import generate_dependent, generate_iid
from src.traffic.models import PacketStream
from src.utils.interfaces import LoggerInterface


def order_one_model():
    return make_dependent_model(
        1, ([8, 9], [0.5, 0.5]),
        {(8,): ([8, 9], [0.5, 0.5]), (9,): ([8, 9], [0.9, 0.1])},
    )


def zero_stream(sizes):
    return PacketStream(sizes, [0] * len(sizes), np.zeros(sum(sizes), dtype=np.uint8))


def random_model(rng):
    """Order-1 model over a small alphabet; some rows are single-size."""
    alphabet = np.sort(rng.choice(np.arange(4, 40), size=int(rng.integers(2, 6)), replace=False)).tolist()

    def row():
        k = int(rng.integers(1, len(alphabet) + 1))
        support = sorted(rng.choice(alphabet, size=k, replace=False).tolist())
        return support, rng.dirichlet(np.ones(k)).tolist()

    rows = {(a,): row() for a in alphabet}
    return make_dependent_model(1, (alphabet, rng.dirichlet(np.ones(len(alphabet))).tolist()), rows)


class TestUnitScheme(unittest.TestCase):
    """Test cases for the unit-spaced scheme."""

    def setUp(self):
        self.pmf = make_pmf([8, 9], [0.5, 0.5])
        self.logger = MagicMock(spec=LoggerInterface)

    def test_lower_size_gains_one_bit(self):
        stream = zero_stream([8, 9, 8])
        outcome = alice_insert_unit(stream, CovertKey(n=3, selected=(0,)), self.pmf, "1", logger=self.logger)
        self.assertEqual(outcome.stream.sizes.tolist(), [9, 9, 8])
        self.assertEqual(int(outcome.stream.payload_bits(0)[-1]), 1)
        self.assertEqual(int(outcome.stream.flags[0]), 1)
        self.assertEqual(outcome.inserted_bits, 1)
        self.assertEqual(outcome.message_cursor, 1)
        self.logger.info.assert_called()

    def test_upper_size_only_clears_flag(self):
        stream = PacketStream([8, 9, 8], [1, 1, 1], np.zeros(25, dtype=np.uint8))
        outcome = alice_insert_unit(stream, CovertKey(n=3, selected=(1,)), self.pmf, "1")
        self.assertEqual(outcome.stream.sizes.tolist(), [8, 9, 8])
        self.assertEqual(outcome.stream.flags.tolist(), [1, 0, 1])
        self.assertEqual(outcome.inserted_bits, 0)
        self.assertEqual(outcome.message_cursor, 0)

    def test_empty_key_is_identity(self):
        stream = generate_iid(self.pmf, 100, seed=1)
        outcome = alice_insert_unit(stream, CovertKey(n=100), self.pmf, "1010")
        self.assertEqual(outcome.stream, stream)
        self.assertEqual(outcome.inserted_bits, 0)

    def test_wider_unit_support(self):
        pmf = make_pmf([8, 9, 10, 11], [0.25] * 4)
        outcome = alice_insert_unit(zero_stream([9]), CovertKey(n=1, selected=(0,)), pmf, "11")
        self.assertEqual(outcome.stream.sizes.tolist(), [11])
        self.assertEqual(outcome.inserted_bits, 2)

    def test_rejects_non_unit_support(self):
        pmf = make_pmf([10, 20, 35, 50], [0.4, 0.3, 0.2, 0.1])
        with self.assertRaises(SchemeError):
            alice_insert_unit(zero_stream([10]), CovertKey(n=1, selected=(0,)), pmf, "1")

    def test_key_length_checked(self):
        with self.assertRaises(KeyMismatchError):
            alice_insert_unit(zero_stream([8, 9]), CovertKey(n=3), self.pmf, "")

    def test_padding_after_message(self):
        stream = zero_stream([8] * 10)
        key = CovertKey(n=10, selected=tuple(range(10)), seed=5)
        outcome = alice_insert_unit(stream, key, self.pmf, "111")
        self.assertEqual(outcome.inserted_bits, 10)
        self.assertEqual(outcome.message_cursor, 3)
        self.assertEqual(outcome.padding_bits, 7)
        again = alice_insert_unit(stream, key, self.pmf, "111")
        self.assertEqual(again.stream, outcome.stream)

    def test_padding_of_seedless_keys_follows_the_key(self):
        stream = zero_stream([8] * 200)
        first = CovertKey(n=200, selected=tuple(range(0, 200, 2)))
        second = CovertKey(n=200, selected=tuple(range(1, 200, 2)))
        pad_first = alice_insert_unit(stream, first, self.pmf, "").stream
        pad_second = alice_insert_unit(stream, second, self.pmf, "").stream
        bits_first = bob_extract(pad_first, first, self.pmf).bits
        bits_second = bob_extract(pad_second, second, self.pmf).bits
        self.assertEqual(bits_first.size, 100)
        self.assertFalse(np.array_equal(bits_first, bits_second))
        again = alice_insert_unit(stream, CovertKey(n=200, selected=first.selected), self.pmf, "").stream
        self.assertEqual(again, pad_first)
        self.assertTrue(20 <= int(bits_first.sum()) <= 80)

    def test_invalid_message(self):
        with self.assertRaises(SchemeError):
            alice_insert_unit(zero_stream([8]), CovertKey(n=1, selected=(0,)), self.pmf, "12")


class TestGeneralScheme(unittest.TestCase):

    def setUp(self):
        self.pmf = make_pmf([10, 20, 35, 50], [0.4, 0.3, 0.2, 0.1])

    def test_size_ten_becomes_thirty_five(self):
        stream = zero_stream([10, 35])
        outcome = alice_insert_general(stream, CovertKey(n=2, selected=(0, 1)), self.pmf, "1" * 25)
        self.assertEqual(outcome.stream.sizes.tolist(), [35, 35])
        self.assertEqual(outcome.stream.flags.tolist(), [1, 0])
        self.assertEqual(outcome.inserted_bits, 25)
        self.assertEqual([p.bits_added for p in outcome.per_packet], [25, 0])
        self.assertEqual(outcome.stream.payload_bits(0)[10:].tolist(), [1] * 25)

    def test_size_outside_support(self):
        with self.assertRaises(SchemeError):
            alice_insert_general(zero_stream([11]), CovertKey(n=1, selected=(0,)), self.pmf, "1")

    def test_matches_unit_scheme_on_unit_support(self):
        pmf = make_pmf([8, 9, 10, 11], [0.1, 0.2, 0.3, 0.4])
        stream = generate_iid(pmf, 300, seed=2)
        key = generate_key(300, 0.3, seed=2)
        self.assertEqual(
            alice_insert_general(stream, key, pmf, "10" * 100).stream,
            alice_insert_unit(stream, key, pmf, "10" * 100).stream,
        )

    def test_dispatch_rejects_model_for_iid_scheme(self):
        with self.assertRaises(SchemeError):
            alice_insert(SchemeKind.GENERAL, zero_stream([8]), CovertKey(n=1), order_one_model(), "")


class TestDependentScheme(unittest.TestCase):

    def test_uses_original_history(self):
        model = order_one_model()
        stream = zero_stream([8, 8, 9])
        key = CovertKey(n=3, selected=(1, 2))
        outcome = alice_insert(SchemeKind.DEPENDENT, stream, key, model, "1")
        self.assertEqual(outcome.stream.sizes.tolist(), [8, 9, 9])
        self.assertEqual(outcome.stream.flags.tolist(), [0, 1, 0])
        self.assertEqual(outcome.inserted_bits, 1)
        result = bob_extract(outcome.stream, key, model)
        self.assertEqual(result.bits.tolist(), [1])
        self.assertTrue(result.restored.content_equal(stream, ignore_flags_at=key.selected))

    def test_degenerate_row_has_no_room(self):
        model = make_dependent_model(
            1, ([8, 9], [0.5, 0.5]), {(8,): ([8, 9], [0.7, 0.3]), (9,): ([9], [1.0])}
        )
        outcome = alice_insert(SchemeKind.DEPENDENT, zero_stream([9, 9]), CovertKey(n=2, selected=(1,)), model, "1")
        self.assertEqual(outcome.inserted_bits, 0)
        self.assertEqual(int(outcome.stream.flags[1]), 0)

    def test_impossible_history(self):
        with self.assertRaises(SchemeError):
            alice_insert(SchemeKind.DEPENDENT, zero_stream([8, 10]), CovertKey(n=2, selected=(1,)),
                         order_one_model(), "1")


class TestExtraction(unittest.TestCase):
    """Test cases for Bob's extraction and the insert/extract round trip."""

    def test_flagged_lower_size_is_corrupt(self):
        stream = PacketStream([8], [1], np.zeros(8, dtype=np.uint8))
        with self.assertRaises(ExtractionError):
            bob_extract(stream, CovertKey(n=1, selected=(0,)), make_pmf([8, 9], [0.5, 0.5]))

    def test_key_length_checked(self):
        with self.assertRaises(KeyMismatchError):
            bob_extract(zero_stream([8]), CovertKey(n=2), make_pmf([8, 9], [0.5, 0.5]))

    def test_iid_round_trips(self):
        rng = np.random.default_rng(17)
        for trial in range(60):
            k = int(rng.integers(2, 9))
            if trial % 2:
                start = int(rng.integers(1, 50))
                support = list(range(start, start + k))
                kind = SchemeKind.UNIT
            else:
                support = np.sort(rng.choice(np.arange(1, 200), size=k, replace=False)).tolist()
                kind = SchemeKind.GENERAL
            pmf = make_pmf(support, rng.dirichlet(np.ones(k)).tolist())
            n = int(rng.integers(1, 300))
            stream = generate_iid(pmf, n, seed=trial)
            key = generate_key(n, float(rng.uniform(0.05, 0.9)), seed=trial)
            message = rng.integers(0, 2, size=int(rng.integers(0, 400))).astype(np.uint8)
            with self.subTest(trial=trial):
                outcome = alice_insert(kind, stream, key, pmf, message)
                result = bob_extract(outcome.stream, key, pmf)
                self.assertTrue(result.restored.content_equal(stream, ignore_flags_at=key.selected))
                self.assertEqual(result.bits.size, outcome.inserted_bits)
                cursor = outcome.message_cursor
                np.testing.assert_array_equal(result.message(cursor), message[:cursor])

    def test_dependent_round_trips(self):
        rng = np.random.default_rng(23)
        for trial in range(40):
            model = random_model(rng)
            n = int(rng.integers(1, 200))
            stream = generate_dependent(model, n, seed=trial)
            key = generate_key(n, float(rng.uniform(0.05, 0.9)), seed=trial)
            message = rng.integers(0, 2, size=200).astype(np.uint8)
            with self.subTest(trial=trial):
                outcome = alice_insert(SchemeKind.DEPENDENT, stream, key, model, message)
                result = bob_extract(outcome.stream, key, model)
                self.assertTrue(result.restored.content_equal(stream, ignore_flags_at=key.selected))
                cursor = outcome.message_cursor
                np.testing.assert_array_equal(result.message(cursor), message[:cursor])


class TestBudget(unittest.TestCase):

    def test_uniform(self):
        self.assertAlmostEqual(derive_budget(make_pmf([8, 9], [0.5, 0.5]), 10 ** 4, 0.1).p, 0.001)

    def test_skewed(self):
        budget = derive_budget(make_pmf([8, 9], [0.8, 0.2]), 10 ** 4, 0.1)
        self.assertAlmostEqual(budget.p, 0.00025)
        self.assertAlmostEqual(budget.scale_constant, 4.0)

    def test_single_packet(self):
        self.assertAlmostEqual(derive_budget(make_pmf([8, 9], [0.8, 0.2]), 1, 0.1).p, 0.025)

    def test_dependent_modes(self):
        model = order_one_model()
        conservative = derive_budget(model, 100, 0.1)
        literal = derive_budget(model, 100, 0.1, EtaMode.LITERAL)
        self.assertAlmostEqual(conservative.p, 0.1 / (9 * 10))
        self.assertAlmostEqual(literal.p, 0.1 / (1.125 * 10))

    def test_invalid(self):
        pmf = make_pmf([8, 9], [0.5, 0.5])
        for eps in (0.0, 0.5, 0.9):
            with self.assertRaises(SchemeError):
                derive_budget(pmf, 100, eps)
        with self.assertRaises(SchemeError):
            derive_budget(pmf, 0, 0.1)

    def test_degenerate_model(self):
        model = make_dependent_model(1, ([8], [1.0]), {(8,): ([8], [1.0])})
        with self.assertRaises(SchemeError):
            derive_budget(model, 100, 0.1)


if __name__ == '__main__':
    unittest.main()
