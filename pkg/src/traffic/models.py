"""
Packet and packet-stream types.
"""
from typing import Any, Iterable, Iterator, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..exceptions import StreamError
from .bits import bit_string


class Packet(BaseModel):
    """One packet: payload length in bits, the header flag bit, and the payload."""
    model_config = ConfigDict(frozen=True)

    size: int = Field(..., ge=1, description="Payload length in bits")
    flag: int = Field(..., ge=0, le=1, description="First header bit")
    payload: str = Field(..., description="Payload as a '0'/'1' string")

    @model_validator(mode='after')
    def _payload_matches_size(self) -> 'Packet':
        if len(self.payload) != self.size:
            raise ValueError(f"payload has {len(self.payload)} bits but size is {self.size}")
        if self.payload.strip('01'):
            raise ValueError("payload may only contain '0' and '1'")
        return self


def _frozen(array: np.ndarray, dtype: Any) -> np.ndarray:
    out = np.array(array, dtype=dtype, copy=True).reshape(-1)
    out.setflags(write=False)
    return out


class PacketStream:
    """
    Immutable ordered sequence of packets.

    Stored column-wise: sizes (int64), flags (uint8) and one flat payload bit array with
    per-packet offsets. Editing methods return new streams.
    """

    __slots__ = ('_sizes', '_flags', '_payload', '_offsets', 'origin', 'seed')

    def __init__(
        self,
        sizes: Sequence[int],
        flags: Sequence[int],
        payload: Sequence[int],
        origin: Optional[Any] = None,
        seed: Optional[int] = None,
    ):
        """
        Args:
            sizes: Payload length of each packet in bits
            flags: Header flag bit of each packet
            payload: Concatenated payload bits, len == sum(sizes)
            origin: Generating pmf or dependent model, if known
            seed: Generation seed, if known

        Raises:
            StreamError: If the columns are inconsistent or the stream is empty
        """
        sizes = _frozen(sizes, np.int64)
        flags = _frozen(flags, np.uint8)
        payload = _frozen(payload, np.uint8)
        if sizes.size < 1:
            raise StreamError("a packet stream needs at least one packet")
        if flags.size != sizes.size:
            raise StreamError(
                f"{sizes.size} sizes but {flags.size} flags", context={'sizes': sizes.size, 'flags': flags.size}
            )
        if sizes.min() < 1:
            raise StreamError("packet sizes must be positive", context={'index': int(np.argmin(sizes))})
        if flags.max() > 1:
            raise StreamError("flag bits must be 0 or 1", context={'index': int(np.argmax(flags))})
        total = int(sizes.sum())
        if payload.size != total:
            raise StreamError(
                f"payload has {payload.size} bits but sizes sum to {total}",
                context={'payload_bits': int(payload.size), 'total_size': total}
            )
        if payload.size and payload.max() > 1:
            raise StreamError("payload bits must be 0 or 1")
        offsets = np.zeros(sizes.size + 1, dtype=np.int64)
        np.cumsum(sizes, out=offsets[1:])
        offsets.setflags(write=False)
        self._sizes = sizes
        self._flags = flags
        self._payload = payload
        self._offsets = offsets
        self.origin = origin
        self.seed = seed

    @classmethod
    def from_packets(cls, packets: Iterable[Packet], origin: Optional[Any] = None,
                     seed: Optional[int] = None) -> 'PacketStream':
        packets = list(packets)
        payload = np.frombuffer(''.join(p.payload for p in packets).encode('ascii'), dtype=np.uint8) - ord('0')
        return cls(
            sizes=[p.size for p in packets],
            flags=[p.flag for p in packets],
            payload=payload,
            origin=origin,
            seed=seed,
        )

    @property
    def n(self) -> int:
        return int(self._sizes.size)

    def __len__(self) -> int:
        return self.n

    @property
    def sizes(self) -> np.ndarray:
        return self._sizes

    @property
    def flags(self) -> np.ndarray:
        return self._flags

    @property
    def payload(self) -> np.ndarray:
        return self._payload

    @property
    def offsets(self) -> np.ndarray:
        return self._offsets

    def payload_bits(self, index: int) -> np.ndarray:
        return self._payload[self._offsets[index]:self._offsets[index + 1]]

    def packet(self, index: int) -> Packet:
        return Packet(
            size=int(self._sizes[index]),
            flag=int(self._flags[index]),
            payload=bit_string(self.payload_bits(index)),
        )

    def __iter__(self) -> Iterator[Packet]:
        for i in range(self.n):
            yield self.packet(i)

    def total_size(self) -> int:
        """Sum of packet sizes in bits."""
        return int(self._offsets[-1])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PacketStream):
            return NotImplemented
        return (
            np.array_equal(self._sizes, other._sizes)
            and np.array_equal(self._flags, other._flags)
            and np.array_equal(self._payload, other._payload)
        )

    __hash__ = None

    def content_equal(self, other: 'PacketStream', ignore_flags_at: Optional[Sequence[int]] = None) -> bool:
        """Equality of sizes, payloads, and flags outside `ignore_flags_at`."""
        if self.n != other.n:
            return False
        if not (np.array_equal(self._sizes, other._sizes) and np.array_equal(self._payload, other._payload)):
            return False
        keep = np.ones(self.n, dtype=bool)
        if ignore_flags_at is not None:
            keep[np.asarray(ignore_flags_at, dtype=np.int64)] = False
        return bool(np.array_equal(self._flags[keep], other._flags[keep]))

    def _derive(self, sizes: np.ndarray, flags: np.ndarray, payload: np.ndarray) -> 'PacketStream':
        return PacketStream(sizes, flags, payload, origin=self.origin, seed=self.seed)

    def with_flags(self, indices: Sequence[int], values: Sequence[int]) -> 'PacketStream':
        """Copy with the flag bits at `indices` replaced."""
        flags = self._flags.copy()
        flags[np.asarray(indices, dtype=np.int64)] = np.asarray(values, dtype=np.uint8)
        return self._derive(self._sizes, flags, self._payload)

    def append_bits(self, indices: Sequence[int], counts: Sequence[int], bits: np.ndarray) -> 'PacketStream':
        """
        Copy with bits appended to the end of selected payloads.

        Args:
            indices: Increasing packet indices
            counts: Bits appended to each packet
            bits: The appended bits in packet order, len == sum(counts)
        """
        indices = np.asarray(indices, dtype=np.int64)
        counts = np.asarray(counts, dtype=np.int64)
        if int(counts.sum()) != len(bits):
            raise StreamError(f"{len(bits)} bits supplied for {int(counts.sum())} appended positions")
        sizes = self._sizes.copy()
        sizes[indices] += counts
        # np.insert keeps equal positions in the order given
        positions = np.repeat(self._offsets[indices + 1], counts)
        payload = np.insert(self._payload, positions, np.asarray(bits, dtype=np.uint8))
        return self._derive(sizes, self._flags, payload)

    def strip_bits(self, indices: Sequence[int], counts: Sequence[int]) -> Tuple['PacketStream', np.ndarray]:
        """
        Copy with the last `counts` bits removed from selected payloads.

        Returns:
            (stripped stream, removed bits in packet order)
        """
        indices = np.asarray(indices, dtype=np.int64)
        counts = np.asarray(counts, dtype=np.int64)
        if np.any(counts > self._sizes[indices] - 1):
            raise StreamError("cannot strip a packet down to zero bits")
        ends = np.repeat(self._offsets[indices + 1], counts)
        within = np.arange(int(counts.sum()), dtype=np.int64) - np.repeat(np.cumsum(counts) - counts, counts)
        positions = ends - np.repeat(counts, counts) + within
        removed = self._payload[positions].copy()
        sizes = self._sizes.copy()
        sizes[indices] -= counts
        payload = np.delete(self._payload, positions)
        return self._derive(sizes, self._flags, payload), removed

    def __repr__(self) -> str:
        return f"PacketStream(n={self.n}, total_size={self.total_size()})"
