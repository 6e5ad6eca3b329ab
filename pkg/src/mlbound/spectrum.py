"""Distance spectra, IOWEFs and ensemble-average constructions.

Spectra are stored as dense arrays of natural-log magnitudes (-inf for
absent weights); IOWEFs as sparse {(input weight, output weight): log}
maps.  Exact integer enumeration happens in the kernels; everything here
converts to the log domain at the boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ._kernels import iowef_counts
from .errors import DomainError, InputError, RatioError, SizeError
from .numerics import log_binom, logsumexp

_LN2 = math.log(2.0)
_NEG_INF = float("-inf")

MAX_ENUM_K = 28


@dataclass(frozen=True)
class DistanceSpectrum:
    """Log-domain weight enumerator {A_l}, l = 0..n."""

    n: int
    log_a: np.ndarray
    k_dim: int | None = field(default=None)

    def __post_init__(self) -> None:
        log_a = np.asarray(self.log_a, dtype=np.float64)
        if log_a.shape != (self.n + 1,):
            raise InputError(f"log_a must have length n+1 = {self.n + 1}")
        if np.any(np.isnan(log_a)) or np.any(log_a == np.inf):
            raise InputError("spectrum entries must be finite or -inf")
        object.__setattr__(self, "log_a", log_a)

    @classmethod
    def from_counts(cls, counts, k_dim: int | None = None) -> "DistanceSpectrum":
        counts = list(counts)
        log_a = np.full(len(counts), _NEG_INF)
        for l, c in enumerate(counts):
            if c < 0:
                raise InputError("spectrum counts must be nonnegative")
            if c > 0:
                log_a[l] = math.log(c)
        return cls(n=len(counts) - 1, log_a=log_a, k_dim=k_dim)

    def total_log(self, min_weight: int = 0) -> float:
        return logsumexp(self.log_a[min_weight:])

    def restrict(self, weights) -> "DistanceSpectrum":
        """Copy with all weights outside the given set zeroed (A_0 dropped too)."""
        keep = np.zeros(self.n + 1, dtype=bool)
        for l in weights:
            if not 0 < l <= self.n:
                raise InputError(f"weight {l} outside 1..{self.n}")
            keep[l] = True
        log_a = np.where(keep, self.log_a, _NEG_INF)
        return DistanceSpectrum(n=self.n, log_a=log_a, k_dim=self.k_dim)

    def nonzero_weights(self) -> list[int]:
        return [int(l) for l in range(1, self.n + 1) if self.log_a[l] > _NEG_INF]


@dataclass(frozen=True)
class BitSpectrum:
    """Information-weight-weighted spectrum {A'_l} used by bit-error bounds."""

    n: int
    log_a_prime: np.ndarray

    def __post_init__(self) -> None:
        arr = np.asarray(self.log_a_prime, dtype=np.float64)
        if arr.shape != (self.n + 1,):
            raise InputError(f"log_a_prime must have length n+1 = {self.n + 1}")
        object.__setattr__(self, "log_a_prime", arr)

    def restrict(self, weights) -> "BitSpectrum":
        keep = np.zeros(self.n + 1, dtype=bool)
        for l in weights:
            if not 0 < l <= self.n:
                raise InputError(f"weight {l} outside 1..{self.n}")
            keep[l] = True
        return BitSpectrum(n=self.n, log_a_prime=np.where(keep, self.log_a_prime, _NEG_INF))

    def nonzero_weights(self) -> list[int]:
        return [int(l) for l in range(1, self.n + 1) if self.log_a_prime[l] > _NEG_INF]


@dataclass(frozen=True)
class Iowef:
    """Sparse log-domain input-output weight enumerator {A_{w,l}}."""

    n: int
    k_dim: int
    terms: dict[tuple[int, int], float]

    def __post_init__(self) -> None:
        if self.terms.get((0, 0)) != 0.0:
            raise InputError("IOWEF must contain A_{0,0} = 1 (log 0.0)")
        for (w, l), v in self.terms.items():
            if not (0 <= w <= self.k_dim and 0 <= l <= self.n):
                raise InputError(f"IOWEF index ({w},{l}) out of range")
            if w == 0 and l > 0:
                raise InputError("systematic encoding forbids A_{0,l} for l > 0")
            if v == _NEG_INF:
                raise InputError("store only nonzero IOWEF entries")

    def marginal(self) -> DistanceSpectrum:
        """Sum out the input weight, recovering the distance spectrum."""
        buckets: dict[int, list[float]] = {}
        for (w, l), v in self.terms.items():
            buckets.setdefault(l, []).append(v)
        log_a = np.full(self.n + 1, _NEG_INF)
        for l, vals in buckets.items():
            log_a[l] = logsumexp(np.array(vals))
        return DistanceSpectrum(n=self.n, log_a=log_a, k_dim=self.k_dim)

    def total_log(self) -> float:
        return logsumexp(np.array(list(self.terms.values())))


def binomial_reference(n: int, rate: float) -> DistanceSpectrum:
    """Average spectrum of fully random block codes: B_l = 2^{-n(1-rate)} C(n,l)."""
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    if not 0.0 < rate <= 1.0:
        raise DomainError(f"rate must be in (0, 1], got {rate}")
    shift = -n * (1.0 - rate) * _LN2
    log_a = np.array([log_binom(n, l) + shift for l in range(n + 1)])
    return DistanceSpectrum(n=n, log_a=log_a)


def bit_spectrum(io: Iowef) -> BitSpectrum:
    """A'_l = sum over w of (w/K) A_{w,l}, in the log domain."""
    k = io.k_dim
    buckets: dict[int, list[float]] = {}
    for (w, l), v in io.terms.items():
        if w == 0:
            continue
        buckets.setdefault(l, []).append(v + math.log(w) - math.log(k))
    log_ap = np.full(io.n + 1, _NEG_INF)
    for l, vals in buckets.items():
        log_ap[l] = logsumexp(np.array(vals))
    return BitSpectrum(n=io.n, log_a_prime=log_ap)


def enumerate_iowef(gen_matrix: np.ndarray) -> Iowef:
    """Exact IOWEF of a systematic [I | P] generator by exhaustive enumeration."""
    gen = np.asarray(gen_matrix, dtype=np.uint8)
    if gen.ndim != 2:
        raise InputError("generator matrix must be 2-D")
    k, n = gen.shape
    if k > n:
        raise InputError(f"generator matrix must be K x N with K <= N, got {k}x{n}")
    if k > MAX_ENUM_K:
        raise SizeError(f"K = {k} exceeds the exhaustive-enumeration cap {MAX_ENUM_K}")
    if not np.array_equal(gen[:, :k], np.eye(k, dtype=np.uint8)):
        raise InputError("generator matrix must be systematic ([I | P] form)")
    counts = iowef_counts(gen)
    terms = {
        (int(w), int(l)): math.log(int(counts[w, l]))
        for w, l in zip(*np.nonzero(counts))
    }
    return Iowef(n=n, k_dim=k, terms=terms)


def hamming_wef_counts(m: int) -> list[int]:
    """Exact weight enumerator of the (2^m - 1, 2^m - m - 1) Hamming code.

    Closed form ((1+x)^n + n (1+x)^{(n-1)/2} (1-x)^{(n+1)/2}) / (n+1) in
    big-integer arithmetic; independent of the exhaustive enumerator.
    """
    if not 2 <= m <= 12:
        raise DomainError(f"m must be in 2..12, got {m}")
    n = (1 << m) - 1
    a = (n - 1) // 2
    b = (n + 1) // 2
    counts = []
    for l in range(n + 1):
        cross = sum(
            math.comb(a, i) * ((-1) ** (l - i)) * math.comb(b, l - i)
            for i in range(max(0, l - b), min(a, l) + 1)
        )
        num = math.comb(n, l) + n * cross
        if num % (n + 1):
            raise AssertionError("Hamming closed form must divide exactly")
        counts.append(num // (n + 1))
    return counts


def hamming_wef_closed_form(m: int) -> DistanceSpectrum:
    return DistanceSpectrum.from_counts(hamming_wef_counts(m), k_dim=(1 << m) - 1 - m)


def _log_convolve(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    out = np.full(a.size + b.size - 1, _NEG_INF)
    for t in range(out.size):
        i0 = max(0, t - b.size + 1)
        i1 = min(a.size - 1, t)
        seg = a[i0 : i1 + 1] + b[t - i1 : t - i0 + 1][::-1]
        out[t] = logsumexp(seg)
    return out


def turbo_combine(components: list[Iowef], k_dim: int) -> Iowef:
    """Uniform-interleaver average of parallel-concatenated systematic codes.

    Per input weight w the component parity spectra S_{w,h} = A_{w,w+h}
    convolve across the J components; the result is divided by
    C(K,w)^{J-1}, one factor per independent uniform interleaver.
    """
    if len(components) < 2:
        raise InputError("turbo_combine needs at least two components")
    parities = []
    for io in components:
        if io.k_dim != k_dim:
            raise InputError(
                f"component dimension {io.k_dim} does not match K = {k_dim}"
            )
        npar = io.n - k_dim
        spec_w: dict[int, np.ndarray] = {}
        for (w, l), v in io.terms.items():
            if l < w:
                raise InputError("component IOWEF is not systematic (l < w found)")
            arr = spec_w.setdefault(w, np.full(npar + 1, _NEG_INF))
            arr[l - w] = np.logaddexp(arr[l - w], v)
        parities.append(spec_w)
    j = len(components)
    n_out = k_dim + sum(io.n - k_dim for io in components)
    terms: dict[tuple[int, int], float] = {}
    for w in range(k_dim + 1):
        arrs = [p.get(w) for p in parities]
        if any(a is None for a in arrs):
            continue
        conv = arrs[0]
        for a in arrs[1:]:
            conv = _log_convolve(conv, a)
        denom = (j - 1) * log_binom(k_dim, w)
        for h, v in enumerate(conv):
            if v > _NEG_INF:
                terms[(w, w + h)] = v - denom
    return Iowef(n=n_out, k_dim=k_dim, terms=terms)


def random_systematic_turbo_iowef(n: int, k_dim: int) -> Iowef:
    """Average IOWEF of turbo codes with two random systematic components.

    The (n, k) ensemble splits n - k parity bits into two equal blocks; the
    coefficient of W^w Z^j combines a 2^{-(n-k)} (C(K,w) - 1) C(n-k, j)
    part with, at even j, a 2^{-(n-k)/2} C((n-k)/2, j/2) part.
    """
    if n <= k_dim:
        raise InputError(f"need n > k, got ({n}, {k_dim})")
    npar = n - k_dim
    if npar % 2:
        raise InputError(f"n - k = {npar} must be even (two equal parity blocks)")
    half = npar // 2
    terms: dict[tuple[int, int], float] = {(0, 0): 0.0}
    for w in range(1, k_dim + 1):
        lc = log_binom(k_dim, w)
        # ln(C(K,w) - 1); exactly zero when C(K,w) = 1
        if lc > 0.0:
            lcm1 = lc + math.log1p(-math.exp(-lc))
        else:
            lcm1 = _NEG_INF
        for jj in range(npar + 1):
            v = _NEG_INF
            if lcm1 > _NEG_INF:
                v = -npar * _LN2 + lcm1 + log_binom(npar, jj)
            if jj % 2 == 0:
                v2 = -half * _LN2 + log_binom(half, jj // 2)
                v = np.logaddexp(v, v2)
            if v > _NEG_INF:
                terms[(w, w + jj)] = float(v)
    return Iowef(n=n, k_dim=k_dim, terms=terms)


def expurgated_random_spectrum(n: int, k_dim: int) -> DistanceSpectrum:
    """Expurgated average spectrum of random (n, k) linear codes.

    E[A_l] = C(n,l) 2^{-(n-k)} prod_{i=0}^{l-2} (1 - 2^{-(n-k-i)}) for
    1 <= l <= n-k+1 and zero beyond; A_0 is pinned to 1 (the all-zero word
    is always a codeword).
    """
    if not n > k_dim >= 1:
        raise InputError(f"need n > k >= 1, got ({n}, {k_dim})")
    r = n - k_dim
    log_a = np.full(n + 1, _NEG_INF)
    log_a[0] = 0.0
    prod = 0.0
    for l in range(1, min(n, r + 1) + 1):
        if l >= 2:
            prod += math.log1p(-(2.0 ** (-(r - (l - 2)))))
        log_a[l] = log_binom(n, l) - r * _LN2 + prod
    return DistanceSpectrum(n=n, log_a=log_a, k_dim=k_dim)


def spectrum_ratio(
    spec: DistanceSpectrum | BitSpectrum, ref: DistanceSpectrum
) -> list[tuple[int, float]]:
    """Per-weight log(A_l / B_l) against a reference, omitting empty weights."""
    arr = spec.log_a if isinstance(spec, DistanceSpectrum) else spec.log_a_prime
    if spec.n != ref.n:
        raise InputError(f"length mismatch: {spec.n} vs {ref.n}")
    out = []
    for l in range(1, spec.n + 1):
        if arr[l] == _NEG_INF:
            continue
        if ref.log_a[l] == _NEG_INF:
            raise RatioError(f"reference spectrum vanishes at weight {l}")
        out.append((l, float(arr[l] - ref.log_a[l])))
    return out


# ---------------------------------------------------------------------------
# serialization: text cache files
# ---------------------------------------------------------------------------

def save_spectrum(path, spec: DistanceSpectrum) -> None:
    """Write `N K` header then `l log_A_l` rows (natural logs, zeros omitted)."""
    with open(path, "w") as fh:
        k = spec.k_dim if spec.k_dim is not None else -1
        fh.write(f"{spec.n} {k}\n")
        for l in range(spec.n + 1):
            if spec.log_a[l] > _NEG_INF:
                fh.write(f"{l} {spec.log_a[l]!r}\n")


def save_iowef(path, io: Iowef) -> None:
    """Write `N K` header then `w l log_A_wl` rows."""
    with open(path, "w") as fh:
        fh.write(f"{io.n} {io.k_dim}\n")
        for (w, l) in sorted(io.terms):
            fh.write(f"{w} {l} {io.terms[(w, l)]!r}\n")


def load_spectrum_file(path) -> DistanceSpectrum | Iowef:
    """Load a cache file, telling spectra from IOWEFs by the column count."""
    with open(path) as fh:
        header = fh.readline().split()
        if len(header) != 2:
            raise InputError(f"{path}: malformed header")
        n, k = int(header[0]), int(header[1])
        rows = [line.split() for line in fh if line.strip()]
    if not rows or len(rows[0]) == 2:
        log_a = np.full(n + 1, _NEG_INF)
        for parts in rows:
            if len(parts) != 2:
                raise InputError(f"{path}: mixed row widths")
            log_a[int(parts[0])] = float(parts[1])
        return DistanceSpectrum(n=n, log_a=log_a, k_dim=None if k < 0 else k)
    terms = {}
    for parts in rows:
        if len(parts) != 3:
            raise InputError(f"{path}: mixed row widths")
        terms[(int(parts[0]), int(parts[1]))] = float(parts[2])
    return Iowef(n=n, k_dim=k, terms=terms)
