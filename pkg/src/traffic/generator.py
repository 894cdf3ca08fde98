"""
Synthetic packet-stream generation for i.i.d. and history-dependent sources.

Sizes, payload bits and H0 flag bits come from separate counter-based streams of one
seed, so a stream is a pure function of (model, n, seed).
"""
from typing import Optional

import numpy as np

from ..dist.dependent import DependentSizeModel
from ..dist.models import PacketSizePmf, SizePmf
from ..exceptions import DistributionError
from ..utils.interfaces import LoggerInterface
from ..utils.logger import LoggerFactory
from ..utils.seeding import StreamTag, random_bits, uniforms
from .models import PacketStream


def _check_length(n: int) -> None:
    if n < 1:
        raise DistributionError(f"stream length must be at least 1, got {n}", field="n", n=n)


def sample_iid_sizes(pmf: SizePmf, n: int, seed: int, *key: int) -> np.ndarray:
    """Inverse-CDF draw of n i.i.d. sizes."""
    u = uniforms(seed, StreamTag.SIZES, n, *key)
    idx = np.searchsorted(pmf.cdf_array, u, side='right')
    np.minimum(idx, pmf.k - 1, out=idx)
    return pmf.support_array[idx]


def _fill(sizes: np.ndarray, origin, seed: int) -> PacketStream:
    payload = random_bits(seed, StreamTag.PAYLOAD, int(sizes.sum()))
    flags = random_bits(seed, StreamTag.FLAGS, sizes.size)
    return PacketStream(sizes, flags, payload, origin=origin, seed=seed)


def generate_iid(pmf: PacketSizePmf, n: int, seed: int,
                 logger: Optional[LoggerInterface] = None) -> PacketStream:
    """
    Stream of n packets with i.i.d. sizes drawn from `pmf`.

    Payload bits and H0 flag bits are fair coin flips.
    """
    _check_length(n)
    logger = logger or LoggerFactory.create("traffic.generator")
    sizes = sample_iid_sizes(pmf, n, seed)
    logger.debug(f"Generated {n} i.i.d. sizes, mean {sizes.mean():.4f}")
    return _fill(sizes, pmf, seed)


def generate_dependent(model: DependentSizeModel, n: int, seed: int,
                       logger: Optional[LoggerInterface] = None) -> PacketStream:
    """
    Stream of n packets whose sizes follow the history-conditional model.

    The first packet is drawn from `model.initial`.
    """
    _check_length(n)
    logger = logger or LoggerFactory.create("traffic.generator")
    sizes, _, _ = model.chain.sample(uniforms(seed, StreamTag.SIZES, n))
    logger.debug(f"Generated {n} sizes from an order-{model.order} model")
    return _fill(sizes, model, seed)


def total_size(stream: PacketStream) -> int:
    """Sum of packet sizes in bits (U n in the mean-size test)."""
    return stream.total_size()
