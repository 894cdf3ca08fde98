"""
Bob's extraction: strip the inserted bits from every flagged selected packet.
"""
from typing import Optional, Union

import numpy as np

from ..dist.dependent import DependentSizeModel
from ..dist.models import SizePmf
from ..exceptions import ExtractionError
from ..traffic.models import PacketStream
from ..utils.interfaces import LoggerInterface
from ..utils.logger import LoggerFactory
from .key import CovertKey
from .models import ExtractionResult


def _iid_counts(pmf: SizePmf, stream: PacketStream, flagged: np.ndarray) -> np.ndarray:
    size_map = pmf.size_map
    counts = np.empty(flagged.size, dtype=np.int64)
    for k, index in enumerate(flagged.tolist()):
        size = int(stream.sizes[index])
        source = size_map.source(size)
        if source is None:
            raise ExtractionError(
                f"packet {index} is flagged but size {size} is not in the upper half of the support",
                scheme="bob", index=index, size=size
            )
        counts[k] = size - source
    return counts


def _dependent_counts(model: DependentSizeModel, stream: PacketStream, flagged: np.ndarray) -> np.ndarray:
    """Recover original sizes front to back so each conditional support uses recovered history."""
    chain = model.chain
    is_flagged = np.zeros(stream.n, dtype=bool)
    is_flagged[flagged] = True
    counts = []
    state = 0
    for index, size in enumerate(stream.sizes.tolist()):
        if is_flagged[index]:
            col = chain.column(state, size)
            source = 0 if col is None else int(chain.source[state, col])
            if source == 0:
                raise ExtractionError(
                    f"packet {index} is flagged but size {size} has no lower counterpart after "
                    f"history {chain.histories[state]}",
                    scheme="bob", index=index, size=size, history=chain.histories[state]
                )
            counts.append(size - source)
            size = source
        col = chain.column(state, size)
        if col is None:
            raise ExtractionError(
                f"size {size} at packet {index} is impossible after history {chain.histories[state]}",
                scheme="bob", index=index, size=size
            )
        state = int(chain.next[state, col])
    return np.asarray(counts, dtype=np.int64)


def bob_extract(stream: PacketStream, key: CovertKey, model: Union[SizePmf, DependentSizeModel],
                logger: Optional[LoggerInterface] = None) -> ExtractionResult:
    """
    Extract inserted bits and restore the stream.

    Selected packets with flag 1 lose the bits their size map says were appended; selected
    packets with flag 0 are left as they are. Restored flags are 0 on every selected packet.

    Raises:
        KeyMismatchError: If the key length differs from the stream length
        ExtractionError: If a flagged packet cannot carry inserted bits
    """
    logger = logger or LoggerFactory.create("scheme.bob")
    key.check_stream(stream)
    selected = key.indices
    flagged = selected[stream.flags[selected] == 1]
    if isinstance(model, DependentSizeModel):
        counts = _dependent_counts(model, stream, flagged)
    else:
        counts = _iid_counts(model, stream, flagged)
    restored, bits = stream.strip_bits(flagged, counts)
    restored = restored.with_flags(selected, np.zeros(selected.size, dtype=np.uint8))
    logger.info(f"Extracted {bits.size} bits from {flagged.size} flagged packets")
    return ExtractionResult(bits=bits, restored=restored, carrying=int(flagged.size))
