"""Distance-spectrum expurgation via Voronoi-neighbor arguments.

Expurgation applies to block-error analysis only: the block error event is
determined by the Voronoi region of the transmitted word, so non-neighbors
can be dropped from the spectrum without changing the error probability.
Bit spectra must not be expurgated and are rejected.
"""

from __future__ import annotations

import math

import numpy as np

from ._kernels import cover_flags
from .codes import Codebook, pack_rows
from .errors import InputError
from .spectrum import BitSpectrum, DistanceSpectrum

_NEG_INF = float("-inf")


def trivial_weight_cutoff(n: int, rate: float) -> int:
    """Largest weight a Voronoi neighbor can have: floor(n(1-rate) + 1)."""
    # tiny slack so rates like 4/7 do not round the integer cutoff down
    return int(math.floor(n * (1.0 - rate) + 1.0 + 1e-9))


def trivial_expurgate(spec: DistanceSpectrum, n: int, rate: float) -> DistanceSpectrum:
    """Zero all weights above the neighbor cutoff floor(n(1-rate) + 1)."""
    if isinstance(spec, BitSpectrum):
        raise InputError("expurgation does not apply to bit spectra")
    if spec.n != n:
        raise InputError(f"spectrum length {spec.n} does not match n = {n}")
    cutoff = trivial_weight_cutoff(n, rate)
    log_a = spec.log_a.copy()
    log_a[cutoff + 1 :] = _NEG_INF
    return DistanceSpectrum(n=n, log_a=log_a, k_dim=spec.k_dim)


def zero_neighbors(cb: Codebook) -> DistanceSpectrum:
    """Spectrum of the zero word's Voronoi neighbors, by the exact cover rule.

    A nonzero codeword is a neighbor iff it covers no other nonzero
    codeword (its support contains no smaller codeword's support).
    """
    packed = pack_rows(cb.words)
    weights = cb.weights
    flags = cover_flags(packed, weights)
    counts = np.zeros(cb.n + 1, dtype=np.int64)
    np.add.at(counts, weights[flags], 1)
    counts[0] = 1
    return DistanceSpectrum.from_counts(counts.tolist())
