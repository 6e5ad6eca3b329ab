"""Upper bounds on the ML decoding error probability of binary linear codes.

Submodules: ``numerics`` (log-domain building blocks), ``channel`` (MBIOS
models and Gallager constants), ``spectrum`` (distance spectra and IOWEFs),
``expurgation`` (Voronoi-neighbor spectrum thinning), ``bounds`` (union,
SFB, MSFB, simplified DS2, TSB, combined, serial-RS), ``simulator``
(exhaustive-ML Monte Carlo oracle) and ``cli``.

Set ``MLBOUND_BACKEND=numpy`` before import to bypass the numba kernels.
"""

from ._accel import backend_name
from .bounds import (
    BoundResult,
    Partition,
    msfb,
    partition_algorithm1,
    serial_rs_bound,
    sfb,
    simplified_ds2,
    tsb_bit,
    tsb_block,
    union_bound_bit,
    union_bound_block,
)
from .channel import ChannelParams, DiscreteMbios, e0, from_ebno_db, gallager_ab, random_coding_exponent
from .codes import Codebook, codebook_from_generator
from .expurgation import trivial_expurgate, zero_neighbors
from .simulator import SimResult, simulate_ml
from .spectrum import (
    BitSpectrum,
    DistanceSpectrum,
    Iowef,
    binomial_reference,
    bit_spectrum,
    enumerate_iowef,
    expurgated_random_spectrum,
    hamming_wef_closed_form,
    random_systematic_turbo_iowef,
    spectrum_ratio,
    turbo_combine,
)

__version__ = "0.1.0"

__all__ = [
    "BitSpectrum",
    "BoundResult",
    "ChannelParams",
    "Codebook",
    "DiscreteMbios",
    "DistanceSpectrum",
    "Iowef",
    "Partition",
    "SimResult",
    "backend_name",
    "binomial_reference",
    "bit_spectrum",
    "codebook_from_generator",
    "e0",
    "enumerate_iowef",
    "expurgated_random_spectrum",
    "from_ebno_db",
    "gallager_ab",
    "hamming_wef_closed_form",
    "msfb",
    "partition_algorithm1",
    "random_coding_exponent",
    "random_systematic_turbo_iowef",
    "serial_rs_bound",
    "sfb",
    "simplified_ds2",
    "simulate_ml",
    "spectrum_ratio",
    "trivial_expurgate",
    "tsb_bit",
    "tsb_block",
    "turbo_combine",
    "union_bound_bit",
    "union_bound_block",
    "zero_neighbors",
]
