"""
Size-level Monte Carlo engines.

Willie sees sizes only, so trial streams are simulated as size sequences: a Bernoulli(p)
selection mask plus the insertion size map gives exactly the sizes Alice's schemes emit.
H0 and H1 draws use different stream keys and are independent.
"""
from typing import Sequence, Tuple

import numpy as np

from ..config.models import Hypothesis
from ..dist.dependent import DependentSizeModel
from ..dist.models import SizePmf
from ..scheme.alice import size_gains
from ..scheme.key import bernoulli_selection
from ..traffic.generator import sample_iid_sizes
from ..utils.seeding import StreamTag, generator, uniforms

# Trials simulated together by the vectorized dependent engine.
CHAIN_BATCH = 64


def _tag(hypothesis: Hypothesis) -> int:
    return 0 if hypothesis is Hypothesis.H0 else 1


class IidSource:
    """Size sequences of an i.i.d. source, with insertion at probability p under H1."""

    def __init__(self, pmf: SizePmf, n: int, hypothesis: Hypothesis, p: float = 0.0,
                 salt: Sequence[int] = ()):
        self.pmf = pmf
        self.n = n
        self.hypothesis = Hypothesis(hypothesis)
        self.p = p if self.hypothesis is Hypothesis.H1 else 0.0
        self.salt = tuple(salt)

    def draw(self, seed: int, trial: int) -> Tuple[np.ndarray, int]:
        """(observed sizes, inserted bits) of one trial."""
        key = (_tag(self.hypothesis),) + self.salt + (trial,)
        sizes = sample_iid_sizes(self.pmf, self.n, seed, *key)
        if self.p == 0.0:
            return sizes, 0
        selected = bernoulli_selection(seed, self.n, self.p, *key)
        gains = size_gains(self.pmf, sizes[selected])
        sizes[selected] += gains
        return sizes, int(gains.sum())

    def __call__(self, seed: int, trial: int) -> np.ndarray:
        return self.draw(seed, trial)[0]


class DependentSource:
    """Size sequences of a dependent source, with insertion at probability p' under H1."""

    def __init__(self, model: DependentSizeModel, n: int, hypothesis: Hypothesis, p: float = 0.0,
                 salt: Sequence[int] = ()):
        self.model = model
        self.n = n
        self.hypothesis = Hypothesis(hypothesis)
        self.p = p if self.hypothesis is Hypothesis.H1 else 0.0
        self.salt = tuple(salt)

    def draw(self, seed: int, trial: int) -> Tuple[np.ndarray, int]:
        key = (_tag(self.hypothesis),) + self.salt + (trial,)
        chain = self.model.chain
        sizes, states, cols = chain.sample(uniforms(seed, StreamTag.SIZES, self.n, *key))
        if self.p == 0.0:
            return sizes, 0
        selected = bernoulli_selection(seed, self.n, self.p, *key)
        gains = chain.gain[states[selected], cols[selected]]
        sizes[selected] += gains
        return sizes, int(gains.sum())

    def __call__(self, seed: int, trial: int) -> np.ndarray:
        return self.draw(seed, trial)[0]


def simulate_iid_throughput(pmf: SizePmf, n: int, p: float, trials: int, seed: int,
                            salt: Sequence[int] = ()) -> np.ndarray:
    """
    Inserted bits n_c of each trial for an i.i.d. source.

    The selection is independent of the sizes, so n_c is a sum of Binomial(n, p) i.i.d.
    per-packet gains; only the selected packets are drawn.
    """
    out = np.zeros(trials, dtype=np.int64)
    if p == 0.0:
        return out
    gains_table = pmf.size_map.gain_table
    for trial in range(trials):
        rng = generator(seed, StreamTag.TRIAL, *salt, trial)
        count = int(rng.binomial(n, p))
        if count:
            idx = np.searchsorted(pmf.cdf_array, rng.random(count), side='right')
            np.minimum(idx, pmf.k - 1, out=idx)
            out[trial] = int(gains_table[idx].sum())
    return out


def simulate_dependent_throughput(model: DependentSizeModel, n: int, p: float, trials: int, seed: int,
                                  salt: Sequence[int] = ()) -> np.ndarray:
    """Inserted bits n_c of each trial for a dependent source; paths are simulated in batches."""
    out = np.zeros(trials, dtype=np.int64)
    if p == 0.0:
        return out
    chain = model.chain
    tag = _tag(Hypothesis.H1)
    for start in range(0, trials, CHAIN_BATCH):
        batch = range(start, min(trials, start + CHAIN_BATCH))
        u = np.stack([uniforms(seed, StreamTag.SIZES, n, tag, *salt, t) for t in batch])
        selected = np.stack([uniforms(seed, StreamTag.KEY, n, tag, *salt, t) < p for t in batch])
        _, states, cols = chain.sample(u)
        out[start:start + len(batch)] = (chain.gain[states, cols] * selected).sum(axis=1)
    return out
