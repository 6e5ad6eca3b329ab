"""Bound evaluators: union, SFB, MSFB, simplified DS2, TSB, combined, RS.

Conventions shared by the whole module:

* every bound value is tracked as a natural-log probability and clamped at
  1 on the way out;
* the SFB-family optimizers minimize the base-2 exponent of the bound over
  rho in [0, 1] through ``numerics.minimize_scalar``, so algebraically
  identical objectives (e.g. the SFB on a binomial spectrum versus
  2^{-N Er(R)}) follow bit-identical optimization paths;
* the MSFB binomial factor keeps the l = 0 term, so the factor reaches
  exactly 1 when the weight set covers {1..N} and the MSFB then coincides
  with the SFB.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable

import numpy as np

from . import _kernels
from .channel import ChannelParams, DiscreteMbios, log_gallager_ab
from .errors import DomainError, InputError, NoRootError
from .numerics import (
    find_root_monotone,
    leggauss,
    log_binom,
    log_gaussian_q,
    logsumexp,
    minimize_scalar,
)
from .spectrum import BitSpectrum, DistanceSpectrum, Iowef, bit_spectrum

_LN2 = math.log(2.0)
_NEG_INF = float("-inf")
_RHO_TOL = 1e-6


@dataclass(frozen=True)
class Partition:
    """A weight set U splitting a code into head (U) and tail (complement)."""

    u_set: frozenset[int]

    @classmethod
    def of(cls, weights: Iterable[int]) -> "Partition":
        return cls(frozenset(int(w) for w in weights))

    @classmethod
    def full(cls, n: int) -> "Partition":
        return cls(frozenset(range(1, n + 1)))

    def complement(self, n: int) -> list[int]:
        return [l for l in range(1, n + 1) if l not in self.u_set]

    def sorted_u(self) -> list[int]:
        return sorted(self.u_set)

    def max_u(self) -> int | None:
        return max(self.u_set) if self.u_set else None


@dataclass(frozen=True)
class BoundResult:
    """A bound value (clamped to [0, 1]) plus solver diagnostics."""

    value: float
    log_value: float
    rho_opt: float | None = None
    tsb_radius_opt: float | None = None
    partition: Partition | None = None
    head_value: float | None = None
    tail_value: float | None = None
    note: str | None = field(default=None)


def _result(log_value: float, **diag) -> BoundResult:
    log_value = min(0.0, float(log_value))
    return BoundResult(value=math.exp(log_value) if log_value > _NEG_INF else 0.0,
                       log_value=log_value, **diag)


def _spec_logs(spec: DistanceSpectrum | BitSpectrum) -> np.ndarray:
    if isinstance(spec, DistanceSpectrum):
        return spec.log_a
    if isinstance(spec, BitSpectrum):
        return spec.log_a_prime
    raise InputError(f"expected a spectrum, got {type(spec).__name__}")


def _resolve_rate(
    spec: DistanceSpectrum | BitSpectrum,
    ch: ChannelParams | DiscreteMbios,
    rate: float | None,
) -> float:
    if rate is not None:
        return rate
    if isinstance(ch, ChannelParams):
        return ch.rate
    if isinstance(spec, DistanceSpectrum) and spec.k_dim is not None:
        return spec.k_dim / spec.n
    raise InputError("code rate is needed for a discrete channel; pass rate=...")


def _require_awgn(ch) -> ChannelParams:
    if not isinstance(ch, ChannelParams):
        raise DomainError("this bound is defined for the BIAWGN channel only")
    return ch


# ---------------------------------------------------------------------------
# union bounds
# ---------------------------------------------------------------------------

def _union_log(log_arr: np.ndarray, ch: ChannelParams) -> float:
    n = log_arr.size - 1
    terms = [
        log_arr[l] + log_gaussian_q(math.sqrt(2.0 * l * ch.esno))
        for l in range(1, n + 1)
        if log_arr[l] > _NEG_INF
    ]
    return logsumexp(np.array(terms)) if terms else _NEG_INF


def union_bound_block(spec: DistanceSpectrum, ch: ChannelParams) -> BoundResult:
    """sum_l A_l Q(sqrt(2 l Es/N0)), accumulated in the log domain."""
    return _result(_union_log(spec.log_a, _require_awgn(ch)))


def union_bound_bit(bspec: BitSpectrum, ch: ChannelParams) -> BoundResult:
    """Union bound with the bit spectrum A'_l in place of A_l."""
    return _result(_union_log(bspec.log_a_prime, _require_awgn(ch)))


# ---------------------------------------------------------------------------
# SFB family (SFB, MSFB, simplified DS2)
# ---------------------------------------------------------------------------

def _log2_alpha(log_arr: np.ndarray, n: int, rate: float, u_weights) -> float | None:
    """log2 of max_{l in U} A_l / B_l, or None when A vanishes on U."""
    best = None
    for l in u_weights:
        if log_arr[l] == _NEG_INF:
            continue
        log_b = log_binom(n, l) - n * (1.0 - rate) * _LN2
        v = log_arr[l] - log_b
        if best is None or v > best:
            best = v
    return None if best is None else best / _LN2


def _e0_bits(ch, rho: float) -> float:
    la, lb = log_gallager_ab(ch, rho)
    return -(np.logaddexp(la, lb) - _LN2) / _LN2


def _log_q_pair(ch, rho: float) -> tuple[float, float]:
    """(ln q, ln(1-q)) with q = A / (A + B)."""
    la, lb = log_gallager_ab(ch, rho)
    s = np.logaddexp(la, lb)
    return la - s, lb - s


def _optimize_exponent(obj: Callable[[float], float]) -> tuple[float, float]:
    """Minimize a base-2 bound exponent over rho in [0, 1]."""
    return minimize_scalar(obj, 0.0, 1.0, tol=_RHO_TOL)


def sfb(
    spec: DistanceSpectrum | BitSpectrum,
    ch: ChannelParams | DiscreteMbios,
    u: Partition | None = None,
    rate: float | None = None,
) -> BoundResult:
    """Shulman-Feder bound 2^{-N(E0(rho) - rho(R + log2(alpha)/N))}, optimized.

    ``alpha`` is the max spectrum-to-binomial ratio over the weight set U
    (all of {1..N} when ``u`` is omitted); with a bit spectrum this is the
    bit-error version of the bound.
    """
    log_arr = _spec_logs(spec)
    n = spec.n
    r = _resolve_rate(spec, ch, rate)
    weights = u.sorted_u() if u is not None else range(1, n + 1)
    l2a = _log2_alpha(log_arr, n, r, weights)
    if l2a is None:
        return _result(_NEG_INF, partition=u)

    def obj(rho: float) -> float:
        return -n * _e0_bits(ch, rho) + rho * (n * r + l2a)

    rho_opt, log2_val = _optimize_exponent(obj)
    return _result(log2_val * _LN2, rho_opt=rho_opt, partition=u)


def _log_factor_binomial(n: int, u_weights: list[int], lq: float, l1q: float) -> float:
    """ln of the binomial(N, q) probability of U plus the l = 0 term.

    The l = 0 term is kept so the factor reaches exactly 1 when U covers
    all of {1..N}; full coverage is special-cased to return exactly 0.
    """
    if len(u_weights) == n:
        return 0.0
    terms = [n * l1q]
    for l in u_weights:
        terms.append(log_binom(n, l) + l * lq + (n - l) * l1q)
    return min(0.0, logsumexp(np.array(terms)))


def msfb(
    spec: DistanceSpectrum | BitSpectrum,
    ch: ChannelParams | DiscreteMbios,
    u: Partition,
    rate: float | None = None,
) -> BoundResult:
    """Modified SFB: the SFB times a binomial-tail factor restricted to U."""
    if not u.u_set:
        raise InputError("msfb requires a nonempty weight set U")
    log_arr = _spec_logs(spec)
    n = spec.n
    r = _resolve_rate(spec, ch, rate)
    uw = u.sorted_u()
    l2a = _log2_alpha(log_arr, n, r, uw)
    if l2a is None:
        return _result(_NEG_INF, partition=u)

    def obj(rho: float) -> float:
        lq, l1q = _log_q_pair(ch, rho)
        lfac = _log_factor_binomial(n, uw, lq, l1q)
        return -n * _e0_bits(ch, rho) + rho * (n * r + l2a + lfac / _LN2)

    rho_opt, log2_val = _optimize_exponent(obj)
    return _result(log2_val * _LN2, rho_opt=rho_opt, partition=u)


def simplified_ds2(
    spec: DistanceSpectrum | BitSpectrum,
    ch: ChannelParams | DiscreteMbios,
    u: Partition,
    rate: float | None = None,
) -> BoundResult:
    """Simplified DS2: the max ratio of the SFB replaced by its expectation.

    alpha-bar(rho) = sum_{l in U} (A'_l / B_l) Binom(N, q)(l) with
    q = A(rho)/(A(rho)+B(rho)); valid for block spectra as well.
    """
    if not u.u_set:
        raise InputError("simplified_ds2 requires a nonempty weight set U")
    log_arr = _spec_logs(spec)
    n = spec.n
    r = _resolve_rate(spec, ch, rate)
    uw = [l for l in u.sorted_u() if log_arr[l] > _NEG_INF]
    if not uw:
        return _result(_NEG_INF, partition=u)
    arr_u = np.array([log_arr[l] for l in uw])
    ls = np.array(uw, dtype=np.float64)
    shift = n * (1.0 - r) * _LN2

    def obj(rho: float) -> float:
        lq, l1q = _log_q_pair(ch, rho)
        log_abar = shift + logsumexp(arr_u + ls * lq + (n - ls) * l1q)
        return -n * _e0_bits(ch, rho) + rho * (n * r + log_abar / _LN2)

    rho_opt, log2_val = _optimize_exponent(obj)
    return _result(log2_val * _LN2, rho_opt=rho_opt, partition=u)


# ---------------------------------------------------------------------------
# tangential-sphere bound
# ---------------------------------------------------------------------------

def _tsb_cone_weights(log_arr: np.ndarray, n: int, r: float):
    """Cone-eligible weights for radius r: those with cos^2(theta_k) < 1."""
    ks, logs, coss = [], [], []
    r2 = r * r
    for k in range(1, n):
        if log_arr[k] == _NEG_INF:
            continue
        c2 = k * n / (r2 * (n - k))
        if c2 < 1.0:
            ks.append(k)
            logs.append(log_arr[k])
            coss.append(math.sqrt(c2))
    return ks, np.array(logs), np.array(coss)


def _tsb_radius_lhs_log(log_arr: np.ndarray, n: int, r: float) -> float:
    """ln of sum_k A_k I_{sin^2 theta_k}((N-2)/2, 1/2) (target: ln 2).

    This is the cone-optimality equation rewritten through the identity
    int_0^theta sin^{N-3} = (1/2) B((N-2)/2, 1/2) I_{sin^2 theta}.
    """
    ks, logs, coss = _tsb_cone_weights(log_arr, n, r)
    if not ks:
        return _NEG_INF
    x = 1.0 - coss * coss
    lbeta = _kernels.log_betainc_arr((n - 2) / 2.0, 0.5, x)
    return logsumexp(logs + lbeta)


def tsb_radius(spec: DistanceSpectrum | BitSpectrum, ch: ChannelParams) -> float | None:
    """Optimal cone radius, or None when the radius equation has no root."""
    _require_awgn(ch)
    log_arr = _spec_logs(spec)
    n = spec.n
    if n < 3:
        raise DomainError(f"the TSB needs N >= 3, got N = {n}")
    finite = log_arr[1:n]
    total = logsumexp(finite[finite > _NEG_INF]) if np.any(finite > _NEG_INF) else _NEG_INF
    if total <= _LN2:
        return None

    def g(r: float) -> float:
        return _tsb_radius_lhs_log(log_arr, n, r) - _LN2

    try:
        return find_root_monotone(g, 1e-6, 4.0 * math.sqrt(n), tol=1e-9)
    except NoRootError:
        return None


def _z1_rule(sigma: float, sqrt_nes: float, refine: int):
    """Composite Gauss-Legendre nodes/log-weights on [-12 sigma, 12 sigma].

    A panel boundary is pinned at sqrt(N Es) where the cone cross-section
    degenerates (integrand kink).
    """
    lo, hi = -12.0 * sigma, 12.0 * sigma
    segments = []
    if lo < sqrt_nes < hi:
        segments = [(lo, sqrt_nes), (sqrt_nes, hi)]
    else:
        segments = [(lo, hi)]
    t, logw = leggauss(16)
    nodes, logws = [], []
    for a, b in segments:
        n_panels = max(2, math.ceil((b - a) / sigma)) * refine
        edges = np.linspace(a, b, n_panels + 1)
        for i in range(n_panels):
            mid = 0.5 * (edges[i] + edges[i + 1])
            half = 0.5 * (edges[i + 1] - edges[i])
            nodes.append(mid + half * t)
            logws.append(logw + math.log(half))
    return np.concatenate(nodes), np.concatenate(logws)


def _tsb_eval_log(
    log_arr: np.ndarray, n: int, ch: ChannelParams, r: float, refine: int, n_inner: int
) -> float:
    sigma = ch.sigma
    sqrt_nes = math.sqrt(n)
    z1_nodes, z1_logw = _z1_rule(sigma, sqrt_nes, refine)
    t2, logw2 = leggauss(n_inner)
    _, logs, coss = _tsb_cone_weights(log_arr, n, r)
    terms = _kernels.tsb_log_terms(
        logs, coss, z1_nodes, z1_logw, r, sqrt_nes, sigma,
        (n - 1) / 2.0, (n - 2) / 2.0, t2, logw2,
    )
    return logsumexp(terms)


def _tsb(
    spec: DistanceSpectrum | BitSpectrum,
    ch: ChannelParams,
    union_log: float,
    rel_tol: float = 1e-6,
    max_doublings: int = 5,
) -> BoundResult:
    ch = _require_awgn(ch)
    log_arr = _spec_logs(spec)
    n = spec.n
    r = tsb_radius(spec, ch)
    if r is None:
        return _result(union_log, note="no-cone")
    refine, n_inner = 1, 128
    prev = _tsb_eval_log(log_arr, n, ch, r, refine, n_inner)
    for _ in range(max_doublings):
        refine *= 2
        n_inner *= 2
        cur = _tsb_eval_log(log_arr, n, ch, r, refine, n_inner)
        if prev > _NEG_INF and abs(math.expm1(cur - prev)) < rel_tol:
            prev = cur
            break
        prev = cur
    return _result(prev, tsb_radius_opt=r)


def tsb_block(spec: DistanceSpectrum, ch: ChannelParams) -> BoundResult:
    """Tangential-sphere bound on the block error probability.

    Solves the cone-radius equation by monotone root-finding, then runs the
    double integral with node counts doubled until the value settles; an
    empty/degenerate radius equation falls back to min(1, union bound).
    """
    return _tsb(spec, ch, _union_log(spec.log_a, _require_awgn(ch)))


def tsb_bit(bspec: BitSpectrum, ch: ChannelParams) -> BoundResult:
    """TSB with the bit spectrum A'_l; the radius is re-optimized for A'."""
    return _tsb(bspec, ch, _union_log(bspec.log_a_prime, _require_awgn(ch)))


# ---------------------------------------------------------------------------
# Algorithm-1 combined bound
# ---------------------------------------------------------------------------

_HEADS = {"sfb": sfb, "msfb": msfb, "ds2": simplified_ds2}


def partition_algorithm1(
    spec_or_iowef: DistanceSpectrum | Iowef,
    ch: ChannelParams,
    threshold: float | None = None,
    head: str = None,
    tail: str = "union",
    mode: str = "block",
) -> BoundResult:
    """Adaptive head/tail partitioning over the spectrum-to-binomial ratio.

    Sweeps l = 1..N, moving weight l into U whenever A_l/B_l (A'_l/B_l in
    bit mode) falls below the threshold, re-evaluating head(U) + tail(U^c)
    at every membership change and returning the running minimum.  Codes
    with a symmetric spectrum (A_l = A_{N-l}) are swept in mirror pairs.
    """
    ch = _require_awgn(ch)
    if mode not in ("block", "bit"):
        raise InputError(f"mode must be block or bit, got {mode!r}")
    if tail not in ("union", "tsb"):
        raise InputError(f"tail must be union or tsb, got {tail!r}")
    if head is None:
        head = "msfb" if mode == "block" else "ds2"
    if head not in _HEADS:
        raise InputError(f"head must be one of {sorted(_HEADS)}, got {head!r}")
    if threshold is None:
        threshold = 1.0 if mode == "block" else 0.5
    if threshold <= 0.0:
        raise DomainError(f"threshold must be positive, got {threshold}")

    if mode == "bit":
        if not isinstance(spec_or_iowef, Iowef):
            raise InputError("bit mode requires an IOWEF")
        work = bit_spectrum(spec_or_iowef)
        log_arr = work.log_a_prime
    else:
        if isinstance(spec_or_iowef, Iowef):
            work = spec_or_iowef.marginal()
        elif isinstance(spec_or_iowef, DistanceSpectrum):
            work = spec_or_iowef
        else:
            raise InputError("block mode requires a distance spectrum or IOWEF")
        log_arr = work.log_a

    n = work.n
    rate = ch.rate
    head_fn = _HEADS[head]
    log_thresh = math.log(threshold)
    log_b = np.array([log_binom(n, l) - n * (1.0 - rate) * _LN2 for l in range(n + 1)])

    def tail_bound(u_c: list[int]) -> BoundResult:
        restricted = work.restrict(u_c)
        if tail == "union":
            if mode == "bit":
                return union_bound_bit(restricted, ch)
            return union_bound_block(restricted, ch)
        if mode == "bit":
            return tsb_bit(restricted, ch)
        return tsb_block(restricted, ch)

    symmetric = all(log_arr[l] == log_arr[n - l] for l in range(n + 1))
    if symmetric:
        steps = []
        seen: set[int] = set()
        for l in range(1, n // 2 + n % 2 + 1):
            group = sorted({l, n - l} - seen)
            if group:
                seen.update(group)
                steps.append(group)
    else:
        steps = [[l] for l in range(1, n + 1)]

    u: set[int] = set()
    best_log = math.inf
    best: BoundResult | None = None

    def evaluate() -> None:
        nonlocal best_log, best
        u_sorted = sorted(u)
        u_c = [l for l in range(1, n + 1) if l not in u]
        if u_sorted:
            head_res = head_fn(work, ch, Partition.of(u_sorted), rate=rate)
        else:
            head_res = _result(_NEG_INF)
        tail_res = tail_bound(u_c)
        total_log = np.logaddexp(head_res.log_value, tail_res.log_value)
        if total_log < best_log:
            best_log = total_log
            best = BoundResult(
                value=math.exp(min(0.0, total_log)) if total_log > _NEG_INF else 0.0,
                log_value=min(0.0, float(total_log)),
                rho_opt=head_res.rho_opt,
                tsb_radius_opt=tail_res.tsb_radius_opt,
                partition=Partition.of(u_sorted),
                head_value=head_res.value,
                tail_value=tail_res.value,
            )

    evaluate()
    for group in steps:
        moved = False
        for l in group:
            if log_arr[l] - log_b[l] < log_thresh:
                u.add(l)
                if log_arr[l] > _NEG_INF:
                    moved = True
        if moved:
            evaluate()
    return best  # type: ignore[return-value]


# ---------------------------------------------------------------------------
# serial concatenation with an outer hard-decision RS code
# ---------------------------------------------------------------------------

def serial_rs_bound(p_s: float, n_rs: int, t: int) -> float:
    """Binomial tail sum_{i=t+1}^{n} C(n,i) p_s^i (1-p_s)^{n-i}, log domain."""
    if not 0.0 <= p_s <= 1.0:
        raise DomainError(f"p_s must be in [0, 1], got {p_s}")
    if t >= n_rs:
        return 0.0
    if p_s == 0.0:
        return 0.0
    if p_s == 1.0:
        return 1.0
    lp = math.log(p_s)
    l1p = math.log1p(-p_s)
    terms = [
        log_binom(n_rs, i) + i * lp + (n_rs - i) * l1p for i in range(t + 1, n_rs + 1)
    ]
    return math.exp(min(0.0, logsumexp(np.array(terms))))
