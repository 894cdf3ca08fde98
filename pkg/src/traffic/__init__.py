"""
Packets, packet streams, synthetic generation and the CVL1 stream format.
"""
from .models import Packet, PacketStream
from .bits import as_bits, bit_string, bits_from_bytes, bytes_from_bits
from .generator import generate_dependent, generate_iid, sample_iid_sizes, total_size
from .codec import decode_stream, encode_stream, read_stream, write_stream

__all__ = [
    'Packet',
    'PacketStream',
    'as_bits',
    'bit_string',
    'bits_from_bytes',
    'bytes_from_bits',
    'generate_iid',
    'generate_dependent',
    'sample_iid_sizes',
    'total_size',
    'encode_stream',
    'decode_stream',
    'write_stream',
    'read_stream',
]
