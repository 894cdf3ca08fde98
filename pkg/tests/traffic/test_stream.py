import unittest

import numpy as np
from pydantic import ValidationError

from src.exceptions import StreamError
from src.traffic.bits import as_bits, bit_string, bits_from_bytes, bytes_from_bits
from src.traffic.models import Packet, PacketStream


def small_stream():
    return PacketStream([3, 2], [0, 1], [1, 0, 1, 1, 1])


class TestPacket(unittest.TestCase):

    def test_valid_packet(self):
        packet = Packet(size=3, flag=1, payload="101")
        self.assertEqual(packet.size, 3)

    def test_payload_length_must_match(self):
        with self.assertRaises(ValidationError):
            Packet(size=4, flag=0, payload="101")

    def test_flag_range(self):
        with self.assertRaises(ValidationError):
            Packet(size=1, flag=2, payload="1")


class TestPacketStream(unittest.TestCase):
    """Test cases for the column-wise stream type."""

    def test_columns(self):
        stream = small_stream()
        self.assertEqual(stream.n, 2)
        self.assertEqual(len(stream), 2)
        self.assertEqual(stream.total_size(), 5)
        self.assertEqual(stream.offsets.tolist(), [0, 3, 5])
        self.assertEqual(stream.payload_bits(1).tolist(), [1, 1])
        self.assertEqual(stream.packet(0), Packet(size=3, flag=0, payload="101"))

    def test_from_packets(self):
        packets = [Packet(size=3, flag=0, payload="101"), Packet(size=2, flag=1, payload="11")]
        self.assertEqual(PacketStream.from_packets(packets), small_stream())
        self.assertEqual(list(small_stream()), packets)

    def test_immutable_columns(self):
        with self.assertRaises(ValueError):
            small_stream().sizes[0] = 7

    def test_invalid_columns(self):
        cases = [
            ([], [], []),
            ([3], [0, 1], [1, 0, 1]),
            ([3], [2], [1, 0, 1]),
            ([3], [0], [1, 0]),
            ([0, 1], [0, 0], [1]),
        ]
        for sizes, flags, payload in cases:
            with self.subTest(sizes=sizes):
                with self.assertRaises(StreamError):
                    PacketStream(sizes, flags, payload)

    def test_with_flags(self):
        stream = small_stream().with_flags([0], [1])
        self.assertEqual(stream.flags.tolist(), [1, 1])
        self.assertTrue(stream.content_equal(small_stream(), ignore_flags_at=[0]))
        self.assertFalse(stream.content_equal(small_stream()))

    def test_append_and_strip(self):
        stream = small_stream()
        grown = stream.append_bits([0, 1], [2, 1], np.asarray([0, 0, 1]))
        self.assertEqual(grown.sizes.tolist(), [5, 3])
        self.assertEqual(grown.payload_bits(0).tolist(), [1, 0, 1, 0, 0])
        self.assertEqual(grown.payload_bits(1).tolist(), [1, 1, 1])
        shrunk, removed = grown.strip_bits([0, 1], [2, 1])
        self.assertEqual(removed.tolist(), [0, 0, 1])
        self.assertEqual(shrunk, stream)

    def test_append_count_mismatch(self):
        with self.assertRaises(StreamError):
            small_stream().append_bits([0], [2], np.asarray([1]))

    def test_strip_to_zero_rejected(self):
        with self.assertRaises(StreamError):
            small_stream().strip_bits([1], [2])


class TestBits(unittest.TestCase):

    def test_as_bits(self):
        self.assertEqual(as_bits("101").tolist(), [1, 0, 1])
        self.assertEqual(as_bits(b"\x80").tolist(), [1, 0, 0, 0, 0, 0, 0, 0])
        self.assertEqual(as_bits([0, 1]).tolist(), [0, 1])
        self.assertEqual(as_bits("").size, 0)

    def test_invalid_bits(self):
        with self.assertRaises(ValueError):
            as_bits("102")
        with self.assertRaises(ValueError):
            as_bits([0, 2])

    def test_packing(self):
        self.assertEqual(bytes_from_bits(np.asarray([1])), b"\x80")
        self.assertEqual(bits_from_bytes(b"\xa0").tolist(), [1, 0, 1, 0, 0, 0, 0, 0])
        self.assertEqual(bit_string(np.asarray([1, 1, 0])), "110")


if __name__ == '__main__':
    unittest.main()
