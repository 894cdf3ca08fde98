"""
Alice's insertion schemes.

A selected packet whose size lies in the lower part of its (conditional) support gets
the bits that take it to its mapped upper size appended to the payload and its flag set
to 1. A selected packet without room, including a disregarded smallest size of an odd
support and any packet drawn from a single-size row, only gets its flag set to 0.
Unselected packets are untouched.
"""
from typing import Optional, Union

import numpy as np

from ..config.models import SchemeKind
from ..dist.dependent import DependentSizeModel
from ..dist.models import SizePmf
from ..exceptions import DistributionError, SchemeError
from ..traffic.bits import BitsLike, as_bits
from ..traffic.models import PacketStream
from ..utils.interfaces import LoggerInterface
from ..utils.logger import LoggerFactory
from ..utils.seeding import StreamTag, random_bits
from .key import CovertKey
from .models import InsertionOutcome, PacketInsertion


def size_gains(pmf: SizePmf, sizes: np.ndarray) -> np.ndarray:
    """
    Appended bits for packets of the given sizes when selected, any array shape.

    Raises:
        SchemeError: If a size is not in the support
    """
    sizes = np.asarray(sizes, dtype=np.int64)
    idx = np.searchsorted(pmf.support_array, sizes)
    np.minimum(idx, pmf.k - 1, out=idx)
    bad = pmf.support_array[idx] != sizes
    if np.any(bad):
        size = int(sizes[bad].flat[0])
        raise SchemeError(f"observed size {size} is not in the support", scheme="general", size=size)
    return pmf.size_map.gain_table[idx]


def plan_insertions(sizes: np.ndarray, selected: np.ndarray,
                    model: Union[SizePmf, DependentSizeModel]) -> np.ndarray:
    """
    Bits appended to each selected packet, 0 where it has no room.

    For a dependent model the conditional supports follow the original size history.
    """
    sizes = np.asarray(sizes, dtype=np.int64)
    selected = np.asarray(selected, dtype=np.int64)
    if isinstance(model, DependentSizeModel):
        try:
            states, cols = model.chain.trace(sizes)
        except DistributionError as e:
            raise SchemeError(f"history without model entry: {e.message}", scheme="dependent",
                              original_error=e) from e
        return model.chain.gain[states[selected], cols[selected]]
    return size_gains(model, sizes[selected])


def _insert(
    kind: SchemeKind,
    stream: PacketStream,
    key: CovertKey,
    gains: np.ndarray,
    message: BitsLike,
    logger: LoggerInterface,
) -> InsertionOutcome:
    selected = key.indices
    total = int(gains.sum())
    try:
        bits = as_bits(message)
    except ValueError as e:
        raise SchemeError(f"invalid message: {e}", scheme=kind.value, original_error=e) from e
    consumed = min(bits.size, total)
    padding = total - consumed
    if padding:
        bits = np.concatenate([bits[:consumed], random_bits(key.padding_seed, StreamTag.PADDING, padding)])
        logger.info(f"Message exhausted after {consumed} bits; padding {padding} random bits")
    else:
        bits = bits[:consumed]
    carrying = gains > 0
    modified = stream.append_bits(selected[carrying], gains[carrying], bits)
    modified = modified.with_flags(selected, carrying.astype(np.uint8))
    per_packet = tuple(
        PacketInsertion(index=int(i), bits_added=int(g), flag_set=int(g > 0))
        for i, g in zip(selected.tolist(), gains.tolist())
    )
    logger.info(f"{kind.value} scheme inserted {total} bits into {int(carrying.sum())} of {key.count} selected packets")
    return InsertionOutcome(
        scheme=kind,
        stream=modified,
        inserted_bits=total,
        per_packet=per_packet,
        message_cursor=consumed,
        padding_bits=padding,
    )


def alice_insert_unit(stream: PacketStream, key: CovertKey, pmf: SizePmf, message: BitsLike,
                      logger: Optional[LoggerInterface] = None) -> InsertionOutcome:
    """
    Insertion for a unit-spaced support: m = floor(K/2) bits per packet with room.

    Raises:
        SchemeError: If the support is not unit-spaced
        KeyMismatchError: If the key length differs from the stream length
    """
    logger = logger or LoggerFactory.create("scheme.alice")
    if not pmf.unit_spaced:
        raise SchemeError("the unit scheme needs a unit-spaced support", scheme="unit", support=pmf.support)
    key.check_stream(stream)
    gains = plan_insertions(stream.sizes, key.indices, pmf)
    return _insert(SchemeKind.UNIT, stream, key, gains, message, logger)


def alice_insert_general(stream: PacketStream, key: CovertKey, pmf: SizePmf, message: BitsLike,
                         logger: Optional[LoggerInterface] = None) -> InsertionOutcome:
    """
    Insertion for an arbitrary support: size S_i with room becomes S_{i + floor(K/2)}.

    Raises:
        SchemeError: If an observed size is not in the support
        KeyMismatchError: If the key length differs from the stream length
    """
    logger = logger or LoggerFactory.create("scheme.alice")
    key.check_stream(stream)
    gains = plan_insertions(stream.sizes, key.indices, pmf)
    return _insert(SchemeKind.GENERAL, stream, key, gains, message, logger)


def alice_insert_dependent(stream: PacketStream, key: CovertKey, model: DependentSizeModel,
                           message: BitsLike, logger: Optional[LoggerInterface] = None) -> InsertionOutcome:
    """
    Insertion for a history-dependent source, using each packet's conditional support
    given the original preceding sizes.

    Raises:
        SchemeError: If a size is impossible after its history
        KeyMismatchError: If the key length differs from the stream length
    """
    logger = logger or LoggerFactory.create("scheme.alice")
    key.check_stream(stream)
    gains = plan_insertions(stream.sizes, key.indices, model)
    return _insert(SchemeKind.DEPENDENT, stream, key, gains, message, logger)


def alice_insert(kind: SchemeKind, stream: PacketStream, key: CovertKey,
                 model: Union[SizePmf, DependentSizeModel], message: BitsLike,
                 logger: Optional[LoggerInterface] = None) -> InsertionOutcome:
    """Dispatch to the scheme named by `kind`."""
    kind = SchemeKind(kind)
    if kind is SchemeKind.DEPENDENT:
        if not isinstance(model, DependentSizeModel):
            model = DependentSizeModel.iid(model)
        return alice_insert_dependent(stream, key, model, message, logger)
    if isinstance(model, DependentSizeModel):
        raise SchemeError(f"the {kind.value} scheme needs an i.i.d. pmf", scheme=kind.value)
    if kind is SchemeKind.UNIT:
        return alice_insert_unit(stream, key, model, message, logger)
    return alice_insert_general(stream, key, model, message, logger)
