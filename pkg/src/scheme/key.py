"""
Shared secret key: which packets Alice may modify.

The key is n i.i.d. Bernoulli(p) draws from a counter-based stream of the key seed; it
never depends on packet content. Its canonical encoding is the sorted index list at
ceil(log2 n) bits per address. CVK1 files store b"CVK1", u64 LE n, u64 LE count and
count u64 LE indices.
"""
import hashlib
import struct
from pathlib import Path
from typing import Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..exceptions import KeyMismatchError, SchemeError, StreamFormatError
from ..traffic.models import PacketStream
from ..utils.interfaces import LoggerInterface
from ..utils.logger import LoggerFactory
from ..utils.seeding import StreamTag, uniforms

MAGIC = b"CVK1"
_HEAD = struct.Struct('<QQ')


class CovertKey(BaseModel):
    """Selected packet indices of a stream of n packets."""
    model_config = ConfigDict(frozen=True)

    n: int = Field(..., ge=1, description="Stream length")
    selected: Tuple[int, ...] = Field(default=(), description="Strictly increasing selected indices")
    p: Optional[float] = Field(None, ge=0.0, lt=1.0, description="Selection probability, if known")
    seed: Optional[int] = Field(None, ge=0, description="Key seed, if known")

    @model_validator(mode='after')
    def _check_indices(self) -> 'CovertKey':
        previous = -1
        for index in self.selected:
            if index <= previous:
                raise ValueError(f"selected indices must be strictly increasing, found {index} after {previous}")
            previous = index
        if self.selected and self.selected[-1] >= self.n:
            raise ValueError(f"selected index {self.selected[-1]} is outside [0, {self.n})")
        return self

    @property
    def indices(self) -> np.ndarray:
        return np.asarray(self.selected, dtype=np.int64)

    @property
    def count(self) -> int:
        return len(self.selected)

    @property
    def padding_seed(self) -> int:
        """Seed of the padding bits: the key seed, else a digest of n and the indices."""
        if self.seed is not None:
            return self.seed
        body = _HEAD.pack(self.n, self.count) + self.indices.astype('<u8').tobytes()
        return int.from_bytes(hashlib.blake2b(body, digest_size=8).digest(), 'little')

    def check_stream(self, stream: PacketStream) -> None:
        """
        Raises:
            KeyMismatchError: If the key was made for a different stream length
        """
        if stream.n != self.n:
            raise KeyMismatchError(
                f"key covers {self.n} packets but the stream has {stream.n}",
                scheme="key", key_n=self.n, stream_n=stream.n
            )


def bernoulli_selection(seed: int, n: int, p: float, *key: int) -> np.ndarray:
    """Indices where n i.i.d. Bernoulli(p) draws are one."""
    if not 0.0 <= p < 1.0:
        raise SchemeError(f"selection probability must lie in [0, 1), got {p}", scheme="key", p=p)
    if p == 0.0:
        return np.empty(0, dtype=np.int64)
    return np.flatnonzero(uniforms(seed, StreamTag.KEY, n, *key) < p)


def generate_key(n: int, p: float, seed: int, logger: Optional[LoggerInterface] = None) -> CovertKey:
    """Draw a key; deterministic in (n, p, seed)."""
    logger = logger or LoggerFactory.create("scheme.key")
    if n < 1:
        raise SchemeError(f"stream length must be at least 1, got {n}", scheme="key", n=n)
    selected = bernoulli_selection(seed, n, p)
    logger.debug(f"Key selects {selected.size} of {n} packets at p={p:.6g}")
    return CovertKey(n=n, p=p, seed=seed, selected=tuple(selected.tolist()))


def key_length_bits(key: CovertKey) -> int:
    """|selected| * ceil(log2 n)."""
    return key.count * (key.n - 1).bit_length()


def encode_key(key: CovertKey) -> bytes:
    return MAGIC + _HEAD.pack(key.n, key.count) + key.indices.astype('<u8').tobytes()


def decode_key(data: bytes, path: Optional[str] = None) -> CovertKey:
    """
    Parse CVK1 bytes. The decoded key carries neither p nor the seed.

    Raises:
        StreamFormatError: On bad magic, a length mismatch or invalid indices
    """
    if data[:4] != MAGIC:
        raise StreamFormatError("not a CVK1 key (bad magic)", path=path, offset=0)
    if len(data) < 4 + _HEAD.size:
        raise StreamFormatError("truncated CVK1 header", path=path, offset=len(data))
    n, count = _HEAD.unpack_from(data, 4)
    body = len(data) - 4 - _HEAD.size
    if body != 8 * count:
        raise StreamFormatError(
            f"CVK1 key declares {count} indices but carries {body} bytes", path=path, offset=4 + _HEAD.size
        )
    indices = np.frombuffer(data, dtype='<u8', offset=4 + _HEAD.size, count=count)
    try:
        return CovertKey(n=n, selected=tuple(int(i) for i in indices))
    except ValueError as e:
        raise StreamFormatError(f"invalid CVK1 key: {e}", path=path, original_error=e) from e


def write_key(key: CovertKey, path: Union[str, Path]) -> None:
    Path(path).write_bytes(encode_key(key))


def read_key(path: Union[str, Path]) -> CovertKey:
    try:
        data = Path(path).read_bytes()
    except OSError as e:
        raise StreamFormatError(f"cannot read key file: {e}", path=str(path), original_error=e) from e
    return decode_key(data, path=str(path))
