"""
Seeded, chunked Monte Carlo plumbing shared by the estimators.

Work is cut into fixed-size chunks. Chunk ``c`` always draws from the ``c``-th
child of ``SeedSequence(seed)``, and partial results are merged in chunk
order, so an estimate depends on (seed, n_samples, chunk size) only and never
on how many worker threads ran the chunks.
"""
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from common.exceptions import TooFewSamples
from common.settings import game_settings

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Moments:
    """
    Count, mean and centered second moment of a sample (arrays allowed).
    """
    count: int
    mean: np.ndarray
    m2: np.ndarray

    @classmethod
    def of(cls, values, axis=0):
        values = np.asarray(values, dtype=float)
        mean = values.mean(axis=axis)
        centered = values - np.expand_dims(mean, axis)
        return cls(values.shape[axis], mean, np.sum(centered * centered, axis=axis))

    def merge(self, other):
        """Chan et al. pairwise update."""
        if self.count == 0:
            return other
        if other.count == 0:
            return self
        count = self.count + other.count
        delta = other.mean - self.mean
        mean = self.mean + delta * (other.count / count)
        m2 = self.m2 + other.m2 + delta * delta * (self.count * other.count / count)
        return Moments(count, mean, m2)

    @property
    def variance(self):
        if self.count < 2:
            return np.zeros_like(self.mean)
        return self.m2 / (self.count - 1)

    @property
    def stderr(self):
        return np.sqrt(self.variance / self.count)


def check_sample_count(n_samples, minimum=None):
    minimum = game_settings.MIN_SAMPLES if minimum is None else minimum
    if n_samples < minimum:
        raise TooFewSamples(f"n_samples={n_samples} is below the minimum of {minimum}.")


def substreams(seed, n_samples, chunk_size=None):
    """
    Split ``n_samples`` into chunks, each paired with its own generator.
    """
    chunk_size = chunk_size or game_settings.CHUNK_SIZE
    n_chunks = max(1, math.ceil(n_samples / chunk_size))
    children = np.random.SeedSequence(seed).spawn(n_chunks)
    sizes = [chunk_size] * (n_chunks - 1) + [n_samples - chunk_size * (n_chunks - 1)]
    return [(size, np.random.default_rng(child)) for size, child in zip(sizes, children)]


def run_chunked(task, seed, n_samples, workers=None, chunk_size=None):
    """
    Run ``task(size, rng)`` on every chunk and return the results in chunk order.
    """
    workers = workers or game_settings.WORKERS
    chunks = substreams(seed, n_samples, chunk_size)
    logger.debug("Running %d chunks on %d worker(s), seed=%d", len(chunks), workers, seed)
    if workers == 1:
        return [task(size, rng) for size, rng in chunks]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda chunk: task(*chunk), chunks))


def merge_moments(parts):
    total = Moments(0, np.zeros(()), np.zeros(()))
    for part in parts:
        total = total.merge(part)
    return total
