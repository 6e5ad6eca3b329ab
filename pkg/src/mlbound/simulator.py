"""Exhaustive soft-decision ML decoding oracle over the BIAWGN channel.

The all-zero codeword is transmitted (valid for linear codes on symmetric
channels) and each noisy block is decoded by maximum correlation against
the whole codebook.  Noise is generated from the counter-based Philox
generator through an explicit Box-Muller transform, in fixed-size trial
blocks with per-block derived seeds, so counts are reproducible and
independent of how blocks are distributed across threads.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from ._kernels import ml_decode_block
from .channel import ChannelParams
from .codes import Codebook
from .errors import InputError, SizeError

MAX_SIM_CODEBOOK = 1 << 16
_BLOCK = 1 << 14


@dataclass(frozen=True)
class SimResult:
    """Monte-Carlo block/bit error estimates with binomial standard errors."""

    trials: int
    block_errors: int
    bit_errors: int
    pe_hat: float
    pb_hat: float
    stderr_pe: float
    stderr_pb: float
    seed: int


def _block_noise(seed: int, block_index: int, shape: tuple[int, int], sigma: float) -> np.ndarray:
    """Box-Muller Gaussian noise from a Philox stream derived per block."""
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(block_index,))
    rng = np.random.Generator(np.random.Philox(ss))
    count = shape[0] * shape[1]
    pairs = (count + 1) // 2
    u1 = rng.random(pairs)
    u2 = rng.random(pairs)
    radius = np.sqrt(-2.0 * np.log1p(-u1))
    angle = 2.0 * math.pi * u2
    z = np.concatenate([radius * np.cos(angle), radius * np.sin(angle)])[:count]
    return (sigma * z).reshape(shape)


def simulate_ml(
    cb: Codebook,
    ch: ChannelParams,
    trials: int,
    seed: int,
    threads: int = 1,
) -> SimResult:
    """Estimate ML block/bit error rates by exhaustive correlation decoding.

    Ties in correlation resolve to the lexicographically smallest codeword,
    and a tie against the all-zero word counts as an error (conservative).
    Results are deterministic in (seed, trials) and independent of
    ``threads``.
    """
    if cb.size > MAX_SIM_CODEBOOK:
        raise SizeError(f"codebook too large to simulate: {cb.size} > {MAX_SIM_CODEBOOK}")
    if trials < 1:
        raise InputError(f"trials must be >= 1, got {trials}")
    if cb.messages is None:
        raise InputError("simulate_ml needs a codebook with an info-bit mapping")

    signs = 2.0 * cb.words.astype(np.float64) - 1.0
    info_weights = cb.messages.sum(axis=1).astype(np.int64)
    k_dim = cb.messages.shape[1]
    sigma = ch.sigma

    blocks = [
        (bi, min(_BLOCK, trials - bi * _BLOCK))
        for bi in range((trials + _BLOCK - 1) // _BLOCK)
    ]

    def run(block) -> tuple[int, int]:
        bi, size = block
        noise = _block_noise(seed, bi, (size, cb.n), sigma)
        return ml_decode_block(noise, signs, info_weights)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            partials = list(pool.map(run, blocks))
    else:
        partials = [run(b) for b in blocks]

    block_errors = sum(p[0] for p in partials)
    bit_errors = sum(p[1] for p in partials)
    pe = block_errors / trials
    pb = bit_errors / (trials * k_dim)
    return SimResult(
        trials=trials,
        block_errors=block_errors,
        bit_errors=bit_errors,
        pe_hat=pe,
        pb_hat=pb,
        stderr_pe=math.sqrt(pe * (1.0 - pe) / trials),
        stderr_pb=math.sqrt(pb * (1.0 - pb) / (trials * k_dim)),
        seed=seed,
    )
