"""Channel models and the Gallager constants A(rho), B(rho), E0, Er.

Energy is normalized to Es = 1, so all SNR dependence flows through the
linear Es/N0 value and sigma = sqrt(1/(2 Es/N0)).  Both the continuous
BIAWGN channel (closed forms as standard-normal expectations) and generic
discrete MBIOS channels (direct sums over the output alphabet) are
supported; the two agree on a quantized grid, which the test suite checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DomainError
from .numerics import logsumexp, minimize_scalar

_LN2 = math.log(2.0)


@dataclass(frozen=True)
class ChannelParams:
    """BIAWGN operating point: Eb/N0 in dB, code rate, derived Es/N0 and sigma."""

    ebno_db: float
    rate: float
    esno: float
    sigma: float

    def __post_init__(self) -> None:
        if not 0.0 < self.rate <= 1.0:
            raise DomainError(f"rate must be in (0, 1], got {self.rate}")
        if self.esno <= 0.0 or self.sigma <= 0.0:
            raise DomainError("esno and sigma must be positive")
        if abs(2.0 * self.esno * self.sigma * self.sigma - 1.0) > 1e-9:
            raise DomainError("inconsistent esno/sigma: 2*esno*sigma^2 must be 1")


def from_ebno_db(ebno_db: float, rate: float) -> ChannelParams:
    """Build a BIAWGN operating point from Eb/N0 (dB) and the code rate."""
    if not 0.0 < rate <= 1.0:
        raise DomainError(f"rate must be in (0, 1], got {rate}")
    esno = rate * 10.0 ** (ebno_db / 10.0)
    sigma = math.sqrt(1.0 / (2.0 * esno))
    return ChannelParams(ebno_db=ebno_db, rate=rate, esno=esno, sigma=sigma)


@dataclass(frozen=True)
class DiscreteMbios:
    """Discrete memoryless binary-input output-symmetric channel.

    ``outputs`` lists (p(y|0), p(y|1)) per output symbol.  Both conditionals
    must sum to one and the two distributions must be permutations of each
    other (output symmetry).
    """

    outputs: tuple[tuple[float, float], ...]

    def __post_init__(self) -> None:
        p0 = sum(p for p, _ in self.outputs)
        p1 = sum(q for _, q in self.outputs)
        if abs(p0 - 1.0) > 1e-9 or abs(p1 - 1.0) > 1e-9:
            raise DomainError("conditional output distributions must sum to 1")
        a = sorted(round(p, 12) for p, _ in self.outputs)
        b = sorted(round(q, 12) for _, q in self.outputs)
        if a != b:
            raise DomainError("channel is not output-symmetric")

    @classmethod
    def bsc(cls, crossover: float) -> "DiscreteMbios":
        if not 0.0 <= crossover <= 1.0:
            raise DomainError(f"crossover must be in [0, 1], got {crossover}")
        return cls(((1.0 - crossover, crossover), (crossover, 1.0 - crossover)))


def quantized_biawgn(esno: float, n_points: int = 2001, span_sigmas: float = 10.0) -> DiscreteMbios:
    """Grid-quantized BIAWGN as a DiscreteMbios (test/reference channel)."""
    sigma = math.sqrt(1.0 / (2.0 * esno))
    lim = 1.0 + span_sigmas * sigma
    y = np.linspace(-lim, lim, n_points)
    p0 = np.exp(-((y + 1.0) ** 2) / (2.0 * sigma * sigma))
    p1 = np.exp(-((y - 1.0) ** 2) / (2.0 * sigma * sigma))
    p0 /= p0.sum()
    p1 /= p1.sum()
    return DiscreteMbios(tuple(zip(p0.tolist(), p1.tolist())))


def _logcosh(x: float) -> float:
    ax = abs(x)
    return ax + math.log1p(math.exp(-2.0 * ax)) - _LN2


@lru_cache(maxsize=8)
def _gh_rule(n_nodes: int):
    t, w = np.polynomial.hermite.hermgauss(n_nodes)
    keep = w > 0.0
    return math.sqrt(2.0) * t[keep], np.log(w[keep]) - 0.5 * math.log(math.pi)


@lru_cache(maxsize=65536)
def _log_gallager_ab(ch, rho: float, n_nodes: int) -> tuple[float, float]:
    if isinstance(ch, ChannelParams):
        # vectorized Gauss-Hermite version of std_normal_expectation
        s = ch.esno
        c = math.sqrt(2.0 * s) / (1.0 + rho)
        x, logw = _gh_rule(n_nodes)
        u = np.abs(c * x)
        logcosh = u + np.log1p(np.exp(-2.0 * u)) - _LN2
        log_ea = logsumexp(logw + (rho - 1.0) * logcosh)
        log_eb = logsumexp(logw - 2.0 * c * x + (rho - 1.0) * logcosh)
        return -s + log_ea, -s + log_eb
    inv = 1.0 / (1.0 + rho)
    la_terms = []
    lb_terms = []
    for p0, p1 in ch.outputs:
        if p0 == 0.0 and p1 == 0.0:
            continue
        bracket = 0.5 * p0**inv + 0.5 * p1**inv
        lbracket = (rho - 1.0) * math.log(bracket)
        if p0 > 0.0 and p1 > 0.0:
            la_terms.append(inv * (math.log(p0) + math.log(p1)) + lbracket)
        if p0 > 0.0:
            lb_terms.append(2.0 * inv * math.log(p0) + lbracket)
    return logsumexp(np.array(la_terms)), logsumexp(np.array(lb_terms))


def gallager_ab(
    ch: ChannelParams | DiscreteMbios, rho: float, n_nodes: int = 200
) -> tuple[float, float]:
    """The channel constants A(rho), B(rho) of the tilted SFB family.

    For the BIAWGN these are e^{-Es/N0} E[cosh^{rho-1}(cX)] and
    e^{-Es/N0} E[e^{-2cX} cosh^{rho-1}(cX)] with c = sqrt(2 Es/N0)/(1+rho);
    for a discrete MBIOS channel, direct sums over the output alphabet.
    """
    la, lb = log_gallager_ab(ch, rho, n_nodes)
    return math.exp(la), math.exp(lb)


def log_gallager_ab(
    ch: ChannelParams | DiscreteMbios, rho: float, n_nodes: int = 200
) -> tuple[float, float]:
    """(ln A(rho), ln B(rho)); cached per (channel, rho, node count)."""
    if not 0.0 <= rho <= 1.0:
        raise DomainError(f"rho must be in [0, 1], got {rho}")
    return _log_gallager_ab(ch, float(rho), n_nodes)


def e0(ch: ChannelParams | DiscreteMbios, rho: float, n_nodes: int = 200) -> float:
    """Gallager function E0(rho) = -log2((A(rho) + B(rho)) / 2), in bits."""
    la, lb = log_gallager_ab(ch, rho, n_nodes)
    return -(np.logaddexp(la, lb) - _LN2) / _LN2


def random_coding_exponent(
    ch: ChannelParams | DiscreteMbios, rate: float, n_nodes: int = 200
) -> tuple[float, float]:
    """Er(R) = max over rho in [0,1] of E0(rho) - rho R, and the maximizer."""
    if not 0.0 < rate <= 1.0:
        raise DomainError(f"rate must be in (0, 1], got {rate}")
    rho_star, neg = minimize_scalar(lambda r: -(e0(ch, r, n_nodes) - r * rate), 0.0, 1.0)
    er = -neg
    if er <= 0.0:
        return 0.0, 0.0
    return er, rho_star
