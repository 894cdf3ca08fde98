"""
CVL1 stream files.

Layout: b"CVL1", u32 LE packet count, then per packet u32 LE size in bits, u8 flag,
ceil(size / 8) payload bytes, MSB first, zero-padded in the last byte.
"""
import struct
from pathlib import Path
from typing import Optional, Union

import numpy as np

from ..exceptions import StreamError, StreamFormatError
from ..utils.interfaces import LoggerInterface
from ..utils.logger import LoggerFactory
from .models import PacketStream

MAGIC = b"CVL1"
_COUNT = struct.Struct('<I')
_HEADER = 5
_U32_MAX = 0xFFFFFFFF


def _padded_layout(sizes: np.ndarray):
    nbytes = (sizes + 7) // 8
    record = _HEADER + nbytes
    starts = np.zeros(sizes.size, dtype=np.int64)
    np.cumsum(record[:-1], out=starts[1:])
    starts += len(MAGIC) + _COUNT.size
    return nbytes, starts


def encode_stream(stream: PacketStream) -> bytes:
    """Serialize a stream to CVL1 bytes."""
    sizes = stream.sizes
    if stream.n > _U32_MAX or int(sizes.max()) > _U32_MAX:
        raise StreamFormatError("stream does not fit the u32 fields of CVL1", n=stream.n)
    nbytes, starts = _padded_layout(sizes)
    total = len(MAGIC) + _COUNT.size + int((_HEADER + nbytes).sum())
    out = np.zeros(total, dtype=np.uint8)
    out[:4] = np.frombuffer(MAGIC, dtype=np.uint8)
    out[4:8] = np.frombuffer(_COUNT.pack(stream.n), dtype=np.uint8)

    header = sizes.astype('<u4').view(np.uint8).reshape(-1, 4)
    out[starts[:, None] + np.arange(4)] = header
    out[starts + 4] = stream.flags

    # payload bits re-laid with each packet padded to whole bytes
    padded_offsets = np.zeros(sizes.size, dtype=np.int64)
    np.cumsum(nbytes[:-1] * 8, out=padded_offsets[1:])
    shift = np.repeat(padded_offsets - stream.offsets[:-1], sizes)
    padded = np.zeros(int(nbytes.sum()) * 8, dtype=np.uint8)
    padded[np.arange(stream.payload.size, dtype=np.int64) + shift] = stream.payload
    payload_bytes = np.packbits(padded)

    byte_offsets = np.zeros(sizes.size, dtype=np.int64)
    np.cumsum(nbytes[:-1], out=byte_offsets[1:])
    dest = np.arange(payload_bytes.size, dtype=np.int64) + np.repeat(starts + _HEADER - byte_offsets, nbytes)
    out[dest] = payload_bytes
    return out.tobytes()


def decode_stream(data: bytes, path: Optional[str] = None) -> PacketStream:
    """
    Parse CVL1 bytes.

    Raises:
        StreamFormatError: On bad magic, truncation, trailing bytes, a zero size,
            a flag other than 0/1, or non-zero padding bits
    """
    if data[:4] != MAGIC:
        raise StreamFormatError("not a CVL1 stream (bad magic)", path=path, offset=0)
    if len(data) < 8:
        raise StreamFormatError("truncated CVL1 header", path=path, offset=len(data))
    (count,) = _COUNT.unpack_from(data, 4)
    if count < 1:
        raise StreamFormatError("CVL1 stream has no packets", path=path, offset=4)
    if count > (len(data) - 8) // _HEADER:
        raise StreamFormatError("truncated CVL1 stream", path=path, offset=4, count=count)

    sizes = np.empty(count, dtype=np.int64)
    starts = np.empty(count, dtype=np.int64)
    pos = 8
    end = len(data)
    for i in range(count):
        if pos + _HEADER > end:
            raise StreamFormatError(f"truncated header of packet {i}", path=path, offset=pos, index=i)
        size = int.from_bytes(data[pos:pos + 4], 'little')
        if size == 0:
            raise StreamFormatError(f"packet {i} has size 0", path=path, offset=pos, index=i)
        sizes[i] = size
        starts[i] = pos
        pos += _HEADER + (size + 7) // 8
    if pos > end:
        raise StreamFormatError(f"truncated payload of packet {count - 1}", path=path, offset=end)
    if pos < end:
        raise StreamFormatError(f"{end - pos} trailing bytes after the last packet", path=path, offset=pos)

    raw = np.frombuffer(data, dtype=np.uint8)
    flags = raw[starts + 4]
    if flags.max() > 1:
        bad = int(np.argmax(flags > 1))
        raise StreamFormatError(f"packet {bad} has flag byte {int(flags[bad])}", path=path,
                                offset=int(starts[bad] + 4), index=bad)

    nbytes = (sizes + 7) // 8
    byte_offsets = np.zeros(count, dtype=np.int64)
    np.cumsum(nbytes[:-1], out=byte_offsets[1:])
    src = np.arange(int(nbytes.sum()), dtype=np.int64) + np.repeat(starts + _HEADER - byte_offsets, nbytes)
    padded = np.unpackbits(raw[src])

    padded_offsets = byte_offsets * 8
    keep = np.arange(int(sizes.sum()), dtype=np.int64)
    offsets = np.zeros(count, dtype=np.int64)
    np.cumsum(sizes[:-1], out=offsets[1:])
    keep += np.repeat(padded_offsets - offsets, sizes)
    mask = np.ones(padded.size, dtype=bool)
    mask[keep] = False
    if padded[mask].any():
        raise StreamFormatError("non-zero padding bits in payload", path=path)
    try:
        return PacketStream(sizes, flags, padded[keep])
    except StreamError as e:
        raise StreamFormatError(f"inconsistent CVL1 stream: {e.message}", path=path, original_error=e) from e


def write_stream(stream: PacketStream, path: Union[str, Path],
                 logger: Optional[LoggerInterface] = None) -> None:
    """Write a CVL1 file."""
    logger = logger or LoggerFactory.create("traffic.codec")
    Path(path).write_bytes(encode_stream(stream))
    logger.info(f"Wrote {stream.n} packets to {path}")


def read_stream(path: Union[str, Path], logger: Optional[LoggerInterface] = None) -> PacketStream:
    """
    Read a CVL1 file.

    Raises:
        StreamFormatError: If the file is missing or malformed
    """
    logger = logger or LoggerFactory.create("traffic.codec")
    try:
        data = Path(path).read_bytes()
    except OSError as e:
        raise StreamFormatError(f"cannot read stream file: {e}", path=str(path), original_error=e) from e
    stream = decode_stream(data, path=str(path))
    logger.info(f"Read {stream.n} packets from {path}")
    return stream
