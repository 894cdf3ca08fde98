"""
Bit-string helpers. Bits are uint8 arrays of 0/1, most significant bit first within a byte.
"""
from typing import Union

import numpy as np

BitsLike = Union[str, bytes, bytearray, np.ndarray, list, tuple]


def bits_from_bytes(data: bytes) -> np.ndarray:
    """Unpack bytes MSB-first."""
    return np.unpackbits(np.frombuffer(bytes(data), dtype=np.uint8))


def bytes_from_bits(bits: np.ndarray) -> bytes:
    """Pack bits MSB-first, zero-padding the final byte."""
    return np.packbits(np.asarray(bits, dtype=np.uint8)).tobytes()


def as_bits(message: BitsLike) -> np.ndarray:
    """
    Normalize a message to a 0/1 array.

    Strings are read as '0'/'1' characters, bytes as MSB-first bit fields, and arrays
    or sequences as bit values.

    Raises:
        ValueError: If a character or value is not a bit
    """
    if isinstance(message, str):
        if message.strip('01'):
            raise ValueError("bit strings may only contain '0' and '1'")
        return (np.frombuffer(message.encode('ascii'), dtype=np.uint8) - ord('0')).astype(np.uint8)
    if isinstance(message, (bytes, bytearray)):
        return bits_from_bytes(message)
    bits = np.asarray(message)
    if bits.size and (bits.min() < 0 or bits.max() > 1):
        raise ValueError("bit arrays may only contain 0 and 1")
    return bits.astype(np.uint8).reshape(-1)


def bit_string(bits: np.ndarray) -> str:
    """Render bits as a '0'/'1' string."""
    return (np.asarray(bits, dtype=np.uint8) + ord('0')).tobytes().decode('ascii')
