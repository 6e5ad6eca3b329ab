"""Log-domain arithmetic, special functions, quadrature and 1-D solvers.

Everything downstream (channel constants, spectra, bound evaluators) works
with natural-log magnitudes; this module owns the scalar building blocks.
All functions are pure and safe to call concurrently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterable, Sequence

import numpy as np

from . import _kernels
from .errors import DomainError, EvaluationError, NoRootError, OptimizationError

_LN2 = math.log(2.0)
_NEG_INF = float("-inf")


@dataclass(frozen=True)
class LogValue:
    """A signed magnitude stored as (sign, natural log of |value|).

    ``sign`` is +1, 0 or -1; a zero value carries log_magnitude -inf.
    """

    sign: int
    log_magnitude: float

    def __post_init__(self) -> None:
        if self.sign not in (-1, 0, 1):
            raise DomainError(f"sign must be -1, 0 or +1, got {self.sign}")
        if (self.sign == 0) != (self.log_magnitude == _NEG_INF):
            raise DomainError("sign = 0 exactly when log_magnitude = -inf")

    @classmethod
    def zero(cls) -> "LogValue":
        return cls(0, _NEG_INF)

    @classmethod
    def from_linear(cls, x: float) -> "LogValue":
        if x == 0.0:
            return cls.zero()
        if not math.isfinite(x):
            raise DomainError(f"cannot represent non-finite value {x}")
        return cls(1 if x > 0 else -1, math.log(abs(x)))

    @classmethod
    def from_log(cls, log_magnitude: float, sign: int = 1) -> "LogValue":
        if log_magnitude == _NEG_INF or sign == 0:
            return cls.zero()
        return cls(sign, log_magnitude)

    def to_linear(self) -> float:
        if self.sign == 0:
            return 0.0
        return self.sign * math.exp(self.log_magnitude)

    def __float__(self) -> float:
        return self.to_linear()


def log_binomial(n: int, k: int) -> LogValue:
    """ln C(n, k) via log-gamma; exact to well over 12 significant digits."""
    if n < 0 or k < 0 or k > n:
        raise DomainError(f"log_binomial requires 0 <= k <= n, got n={n}, k={k}")
    return LogValue.from_log(log_binom(n, k))


def log_binom(n: int, k: int) -> float:
    """Float-valued ln C(n, k) for hot paths (inputs assumed valid)."""
    if k == 0 or k == n:
        return 0.0
    return math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)


def log_sum_exp(terms: Iterable[LogValue]) -> LogValue:
    """Signed log-domain sum with the max magnitude factored out.

    An empty sequence yields the zero value.  A negative net sum is
    returned with sign -1; the caller decides whether that is meaningful.
    """
    items = [t for t in terms if t.sign != 0]
    if not items:
        return LogValue.zero()
    m = max(t.log_magnitude for t in items)
    acc = 0.0
    for t in items:
        acc += t.sign * math.exp(t.log_magnitude - m)
    if acc == 0.0:
        return LogValue.zero()
    return LogValue.from_log(m + math.log(abs(acc)), 1 if acc > 0 else -1)


def logsumexp(values: np.ndarray) -> float:
    """Plain log-sum-exp over an array of nonnegative-magnitude logs."""
    values = np.asarray(values, dtype=np.float64)
    if values.size == 0:
        return _NEG_INF
    m = values.max()
    if not np.isfinite(m):
        # all -inf (empty sum) or a +inf/nan slipped in
        return float(m) if m == _NEG_INF else float(m)
    with np.errstate(divide="ignore"):
        return float(m + math.log(np.exp(values - m).sum()))


def reg_inc_gamma(a: float, x: float) -> float:
    """Regularized lower incomplete gamma, series/continued-fraction split."""
    if a <= 0.0:
        raise DomainError(f"reg_inc_gamma requires a > 0, got a={a}")
    if x < 0.0:
        raise DomainError(f"reg_inc_gamma requires x >= 0, got x={x}")
    return math.exp(_kernels.log_gammainc_lower(a, x))


def log_reg_inc_gamma(a: float, x: float) -> float:
    """ln of the regularized lower incomplete gamma (for log-domain callers)."""
    if a <= 0.0:
        raise DomainError(f"reg_inc_gamma requires a > 0, got a={a}")
    if x < 0.0:
        raise DomainError(f"reg_inc_gamma requires x >= 0, got x={x}")
    return _kernels.log_gammainc_lower(a, x)


_SQRT1_2 = 1.0 / math.sqrt(2.0)
_LOG_INV_SQRT_2PI = -0.9189385332046727


def gaussian_q(x: float) -> float:
    """Q(x) = P(N(0,1) > x), via the complementary error function."""
    return 0.5 * math.erfc(x * _SQRT1_2)


def log_gaussian_q(x: float) -> float:
    """ln Q(x), accurate deep into the tail where erfc underflows.

    For x beyond the erfc underflow point an asymptotic expansion of
    Q(x) = phi(x)/x * (1 - 1/x^2 + 3/x^4 - ...) takes over.
    """
    if x < 35.0:
        q = 0.5 * math.erfc(x * _SQRT1_2)
        if q > 0.0:
            return math.log(q)
    inv2 = 1.0 / (x * x)
    series = 1.0 + inv2 * (-1.0 + inv2 * (3.0 + inv2 * (-15.0 + inv2 * 105.0)))
    return _LOG_INV_SQRT_2PI - 0.5 * x * x - math.log(x) + math.log(series)


@lru_cache(maxsize=8)
def _hermgauss(n_nodes: int):
    t, w = np.polynomial.hermite.hermgauss(n_nodes)
    keep = w > 0.0
    return t[keep], np.log(w[keep])


def std_normal_expectation(
    log_f: Callable[[float], float], n_nodes: int = 200
) -> LogValue:
    """ln E[f(X)] for standard normal X, f supplied in log domain.

    Gauss-Hermite quadrature, assembled as a log-sum-exp over the weighted
    nodes so integrands like cosh powers never leave the log domain.
    """
    t, logw = _hermgauss(n_nodes)
    vals = np.empty(t.size)
    for i in range(t.size):
        v = log_f(math.sqrt(2.0) * t[i])
        if math.isnan(v) or v == math.inf:
            raise EvaluationError(
                f"integrand is non-finite (log value {v}) at node x={math.sqrt(2.0) * t[i]:.6g}"
            )
        vals[i] = v
    total = logsumexp(logw + vals) - 0.5 * math.log(math.pi)
    return LogValue.from_log(total)


def minimize_scalar(
    f: Callable[[float], float], lo: float, hi: float, tol: float = 1e-4
) -> tuple[float, float]:
    """Golden-section refinement seeded by a 33-point coarse grid.

    Returns (argmin, min).  Non-finite values are treated as +inf; if the
    coarse grid sees no finite value the optimization fails.
    """
    if not lo < hi:
        raise DomainError(f"minimize_scalar requires lo < hi, got [{lo}, {hi}]")

    def safe(x: float) -> float:
        v = f(x)
        return v if math.isfinite(v) else math.inf

    grid = np.linspace(lo, hi, 33)
    vals = [safe(x) for x in grid]
    best = int(np.argmin(vals))
    if vals[best] == math.inf:
        raise OptimizationError("objective is non-finite on the whole coarse grid")

    a = grid[max(best - 1, 0)]
    b = grid[min(best + 1, 32)]
    fa, fb = safe(a), safe(b)
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = safe(c), safe(d)
    while (b - a) > tol:
        if fc <= fd:
            b, fb = d, fd
            d, fd = c, fc
            c = b - invphi * (b - a)
            fc = safe(c)
        else:
            a, fa = c, fc
            c, fc = d, fd
            d = a + invphi * (b - a)
            fd = safe(d)
    cands = [(fa, a), (fc, c), (fd, d), (fb, b), (vals[best], grid[best])]
    fbest, xbest = min(cands, key=lambda p: p[0])
    return float(xbest), float(fbest)


def find_root_monotone(
    f: Callable[[float], float], lo: float, hi: float, tol: float = 1e-10
) -> float:
    """Bisection root of a monotone function, with bracket expansion.

    If [lo, hi] does not bracket a sign change, hi is pushed out (doubling
    the interval) up to 60 times before giving up.
    """
    if not lo < hi:
        raise DomainError(f"find_root_monotone requires lo < hi, got [{lo}, {hi}]")
    flo = f(lo)
    fhi = f(hi)
    if flo == 0.0:
        return lo
    expansions = 0
    while fhi != 0.0 and (flo < 0.0) == (fhi < 0.0):
        if expansions >= 60:
            raise NoRootError(
                f"no sign change on [{lo}, {hi}] after {expansions} expansions"
            )
        hi = lo + 2.0 * (hi - lo)
        fhi = f(hi)
        expansions += 1
    if fhi == 0.0:
        return hi
    increasing = flo < 0.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        fm = f(mid)
        if abs(fm) < tol:
            return mid
        if (fm < 0.0) == increasing:
            lo = mid
        else:
            hi = mid
        if (hi - lo) < tol * max(abs(lo), abs(hi), 1e-30):
            break
    return 0.5 * (lo + hi)


@lru_cache(maxsize=16)
def leggauss(n_nodes: int):
    """Cached Gauss-Legendre rule on [-1, 1] as (nodes, log weights)."""
    t, w = np.polynomial.legendre.leggauss(n_nodes)
    return t, np.log(w)


def log_binomial_pmf_terms(n: int, log_p: float, log_q: float, ls: Sequence[int]) -> np.ndarray:
    """Log binomial(n, p) probabilities at the given support points.

    ``log_p``/``log_q`` are ln p and ln(1-p); supplying both keeps the
    caller in charge of computing the complement stably.
    """
    out = np.empty(len(ls))
    for i, l in enumerate(ls):
        out[i] = log_binom(n, l) + l * log_p + (n - l) * log_q
    return out
