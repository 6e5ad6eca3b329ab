"""Hot numeric kernels, in numba and pure-numpy flavors.

Every dispatcher below checks ``_accel.NUMBA_ENABLED`` once and routes to
either an ``@njit`` loop kernel or a vectorized numpy twin.  Both flavors
implement the same arithmetic; the numpy versions iterate whole arrays to
convergence (over-iterating converged lanes is harmless for the series and
for Lentz continued fractions, whose increments settle at exactly 1).

All probability-like quantities are carried as natural logs: spectra reach
magnitudes around exp(700) while the inner tangential-cone integrals sit
near exp(-700), so linear-space accumulation is not an option.
"""

from __future__ import annotations

import math

import numpy as np

from ._accel import NUMBA_ENABLED, njit, prange

_EPS = 2.220446049250313e-16
_FPMIN = 1e-300
_LN2 = 0.6931471805599453
_NEG_INF = -np.inf
_LOG_INV_SQRT_2PI = -0.9189385332046727


# ---------------------------------------------------------------------------
# regularized incomplete gamma, log domain
# ---------------------------------------------------------------------------

@njit(cache=True)
def _log_gammainc_pair(a: float, x: float):
    """Return (ln P(a,x), ln Q(a,x)) for the regularized incomplete gamma.

    Series for x < a+1, modified-Lentz continued fraction otherwise.
    """
    if x <= 0.0:
        return _NEG_INF, 0.0
    lpref = a * math.log(x) - x - math.lgamma(a)
    if x < a + 1.0:
        ap = a
        dlt = 1.0 / a
        s = dlt
        for _ in range(10000):
            ap += 1.0
            dlt *= x / ap
            s += dlt
            if abs(dlt) < abs(s) * _EPS:
                break
        log_lower = math.log(s) + lpref
        if log_lower > 0.0:
            log_lower = 0.0
        if log_lower < -_LN2:
            log_upper = math.log1p(-math.exp(log_lower))
        else:
            log_upper = math.log(-math.expm1(log_lower))
        return log_lower, log_upper
    b = x + 1.0 - a
    c = 1.0 / _FPMIN
    d = 1.0 / b
    h = d
    for i in range(1, 10000):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < _FPMIN:
            d = _FPMIN
        c = b + an / c
        if abs(c) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        dlt = d * c
        h *= dlt
        if abs(dlt - 1.0) < _EPS:
            break
    log_upper = lpref + math.log(h)
    if log_upper > 0.0:
        log_upper = 0.0
    if log_upper < -_LN2:
        log_lower = math.log1p(-math.exp(log_upper))
    else:
        log_lower = math.log(-math.expm1(log_upper))
    return log_lower, log_upper


@njit(cache=True, parallel=True)
def _lg_pair_arr_nb(a, x, lower, upper):
    for i in prange(x.size):
        lo, up = _log_gammainc_pair(a, x[i])
        lower[i] = lo
        upper[i] = up


def _lg_pair_arr_np(a: float, x: np.ndarray):
    x = np.asarray(x, dtype=np.float64)
    lower = np.full(x.shape, _NEG_INF)
    upper = np.zeros(x.shape)
    pos = x > 0.0
    if not pos.any():
        return lower, upper
    lgam = math.lgamma(a)
    with np.errstate(divide="ignore", invalid="ignore"):
        lpref = np.where(pos, a * np.log(np.where(pos, x, 1.0)) - x - lgam, _NEG_INF)

        ser = pos & (x < a + 1.0)
        if ser.any():
            xs = x[ser]
            ap = np.full(xs.shape, a)
            dlt = np.full(xs.shape, 1.0 / a)
            s = dlt.copy()
            for _ in range(10000):
                ap += 1.0
                dlt *= xs / ap
                s += dlt
                if np.all(np.abs(dlt) < np.abs(s) * _EPS):
                    break
            ll = np.minimum(np.log(s) + lpref[ser], 0.0)
            lu = np.where(
                ll < -_LN2,
                np.log1p(-np.exp(ll)),
                np.log(np.maximum(-np.expm1(ll), 0.0)),
            )
            lower[ser] = ll
            upper[ser] = lu

        cfm = pos & ~(x < a + 1.0)
        if cfm.any():
            xc = x[cfm]
            b = xc + 1.0 - a
            c = np.full(xc.shape, 1.0 / _FPMIN)
            d = 1.0 / b
            h = d.copy()
            for i in range(1, 10000):
                an = -i * (i - a)
                b += 2.0
                d = an * d + b
                np.copyto(d, _FPMIN, where=np.abs(d) < _FPMIN)
                c = b + an / c
                np.copyto(c, _FPMIN, where=np.abs(c) < _FPMIN)
                d = 1.0 / d
                dlt = d * c
                h *= dlt
                if np.all(np.abs(dlt - 1.0) < _EPS):
                    break
            lu = np.minimum(lpref[cfm] + np.log(h), 0.0)
            ll = np.where(
                lu < -_LN2,
                np.log1p(-np.exp(lu)),
                np.log(np.maximum(-np.expm1(lu), 0.0)),
            )
            lower[cfm] = ll
            upper[cfm] = lu
    return lower, upper


def log_gammainc_pair_arr(a: float, x: np.ndarray):
    """Vectorized (ln P(a,x), ln Q(a,x)) over an array of x values."""
    x = np.ascontiguousarray(np.asarray(x, dtype=np.float64).ravel())
    if NUMBA_ENABLED:
        lower = np.empty(x.shape)
        upper = np.empty(x.shape)
        _lg_pair_arr_nb(a, x, lower, upper)
        return lower, upper
    return _lg_pair_arr_np(a, x)


def log_gammainc_lower(a: float, x: float) -> float:
    return _log_gammainc_pair(a, x)[0]


def log_gammainc_upper(a: float, x: float) -> float:
    return _log_gammainc_pair(a, x)[1]


# ---------------------------------------------------------------------------
# regularized incomplete beta, log domain
# ---------------------------------------------------------------------------

@njit(cache=True)
def _betacf(a: float, b: float, x: float) -> float:
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _FPMIN:
        d = _FPMIN
    d = 1.0 / d
    h = d
    for m in range(1, 500):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _FPMIN:
            d = _FPMIN
        c = 1.0 + aa / c
        if abs(c) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _FPMIN:
            d = _FPMIN
        c = 1.0 + aa / c
        if abs(c) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        dlt = d * c
        h *= dlt
        if abs(dlt - 1.0) < _EPS:
            break
    return h


@njit(cache=True)
def _log_betainc(a: float, b: float, x: float) -> float:
    """ln I_x(a, b) via the Numerical-Recipes continued fraction."""
    if x <= 0.0:
        return _NEG_INF
    if x >= 1.0:
        return 0.0
    lfront = (
        a * math.log(x)
        + b * math.log1p(-x)
        + math.lgamma(a + b)
        - math.lgamma(a)
        - math.lgamma(b)
    )
    if x < (a + 1.0) / (a + b + 2.0):
        v = lfront + math.log(_betacf(a, b, x) / a)
        return min(v, 0.0)
    v = lfront + math.log(_betacf(b, a, 1.0 - x) / b)
    if v >= 0.0:
        return _NEG_INF
    if v < -_LN2:
        return math.log1p(-math.exp(v))
    return math.log(-math.expm1(v))


@njit(cache=True)
def _log_betainc_arr_nb(a, b, x, out):
    for i in range(x.size):
        out[i] = _log_betainc(a, b, x[i])


def log_betainc_arr(a: float, b: float, x: np.ndarray) -> np.ndarray:
    """Vectorized ln I_x(a, b); the numpy flavor just loops (short arrays)."""
    x = np.ascontiguousarray(np.asarray(x, dtype=np.float64).ravel())
    out = np.empty(x.shape)
    if NUMBA_ENABLED:
        _log_betainc_arr_nb(a, b, x, out)
    else:
        for i in range(x.size):
            out[i] = _log_betainc(a, b, x[i])
    return out


# ---------------------------------------------------------------------------
# tangential-sphere bound quadrature
# ---------------------------------------------------------------------------

@njit(cache=True, parallel=True)
def _tsb_terms_nb(
    log_a_el,
    cos_el,
    z1_nodes,
    z1_logw,
    r,
    sqrt_nes,
    sigma,
    a1,
    a2,
    t2,
    logw2,
):
    nterms = z1_nodes.size
    out = np.empty(nterms)
    lc = _LOG_INV_SQRT_2PI - math.log(sigma)
    two_s2 = 2.0 * sigma * sigma
    nk = log_a_el.size
    m2 = t2.size
    for i in prange(nterms):
        z1 = z1_nodes[i]
        rz = (1.0 - z1 / sqrt_nes) * r
        _, up = _log_gammainc_pair(a1, rz * rz / two_s2)
        brace_m = up
        brace_s = 1.0
        if brace_m == _NEG_INF:
            brace_s = 0.0
        if rz > 0.0:
            for kk in range(nk):
                beta = rz * cos_el[kk]
                half = 0.5 * (rz - beta)
                mid = 0.5 * (beta + rz)
                im = _NEG_INF
                isum = 0.0
                for j in range(m2):
                    z2 = mid + half * t2[j]
                    u = (rz * rz - z2 * z2) / two_s2
                    if u < 0.0:
                        u = 0.0
                    lg, _ = _log_gammainc_pair(a2, u)
                    if lg == _NEG_INF:
                        continue
                    v = logw2[j] + math.log(half) + lc - z2 * z2 / two_s2 + lg
                    if v > im:
                        if im > _NEG_INF:
                            isum = isum * math.exp(im - v) + 1.0
                        else:
                            isum = 1.0
                        im = v
                    else:
                        isum += math.exp(v - im)
                if im == _NEG_INF:
                    continue
                term = log_a_el[kk] + im + math.log(isum)
                if term > brace_m:
                    if brace_m > _NEG_INF:
                        brace_s = brace_s * math.exp(brace_m - term) + 1.0
                    else:
                        brace_s = 1.0
                    brace_m = term
                else:
                    brace_s += math.exp(term - brace_m)
        if brace_m == _NEG_INF:
            out[i] = _NEG_INF
        else:
            out[i] = z1_logw[i] + lc - z1 * z1 / two_s2 + brace_m + math.log(brace_s)
    return out


def _tsb_terms_np(
    log_a_el,
    cos_el,
    z1_nodes,
    z1_logw,
    r,
    sqrt_nes,
    sigma,
    a1,
    a2,
    t2,
    logw2,
):
    lc = _LOG_INV_SQRT_2PI - math.log(sigma)
    two_s2 = 2.0 * sigma * sigma
    rz = (1.0 - z1_nodes / sqrt_nes) * r
    _, brace = log_gammainc_pair_arr(a1, rz * rz / two_s2)
    act = rz > 0.0
    if act.any() and log_a_el.size:
        rza = rz[act]
        brace_act = brace[act]
        for kk in range(log_a_el.size):
            beta = rza * cos_el[kk]
            half = 0.5 * (rza - beta)
            mid = 0.5 * (beta + rza)
            z2 = mid[:, None] + half[:, None] * t2[None, :]
            u = np.maximum((rza * rza)[:, None] - z2 * z2, 0.0) / two_s2
            lg, _ = log_gammainc_pair_arr(a2, u)
            lg = lg.reshape(z2.shape)
            with np.errstate(divide="ignore"):
                v = (
                    logw2[None, :]
                    + np.log(half)[:, None]
                    + lc
                    - z2 * z2 / two_s2
                    + lg
                )
                vm = v.max(axis=1)
                shift = np.where(np.isfinite(vm), vm, 0.0)
                inner = shift + np.log(np.exp(v - shift[:, None]).sum(axis=1))
            brace_act = np.logaddexp(brace_act, log_a_el[kk] + inner)
        brace[act] = brace_act
    return z1_logw + lc - z1_nodes * z1_nodes / two_s2 + brace


def tsb_log_terms(
    log_a_el: np.ndarray,
    cos_el: np.ndarray,
    z1_nodes: np.ndarray,
    z1_logw: np.ndarray,
    r: float,
    sqrt_nes: float,
    sigma: float,
    a1: float,
    a2: float,
    t2: np.ndarray,
    logw2: np.ndarray,
) -> np.ndarray:
    """Per-z1-node log integrand terms of the tangential-cone double integral.

    ``log_a_el``/``cos_el`` describe the cone-eligible weights (log spectrum
    value and cos of the cone half-angle per weight).  The caller supplies
    flattened Gauss-Legendre nodes/log-weights for the z1 axis and the
    [-1, 1] rule (``t2``, ``logw2``) reused on every inner z2 interval.
    """
    args = (
        np.ascontiguousarray(log_a_el, dtype=np.float64),
        np.ascontiguousarray(cos_el, dtype=np.float64),
        np.ascontiguousarray(z1_nodes, dtype=np.float64),
        np.ascontiguousarray(z1_logw, dtype=np.float64),
        float(r),
        float(sqrt_nes),
        float(sigma),
        float(a1),
        float(a2),
        np.ascontiguousarray(t2, dtype=np.float64),
        np.ascontiguousarray(logw2, dtype=np.float64),
    )
    if NUMBA_ENABLED:
        return _tsb_terms_nb(*args)
    return _tsb_terms_np(*args)


# ---------------------------------------------------------------------------
# soft-decision ML decoding trials
# ---------------------------------------------------------------------------

@njit(cache=True, parallel=True)
def _ml_decode_nb(noise, signs, info_weights):
    trials = noise.shape[0]
    ncw, n = signs.shape
    block_errors = 0
    bit_errors = 0
    for t in prange(trials):
        s0 = 0.0
        for j in range(n):
            s0 += (noise[t, j] - 1.0) * signs[0, j]
        best = -1e300
        best_i = 1
        for i in range(1, ncw):
            s = 0.0
            for j in range(n):
                s += (noise[t, j] - 1.0) * signs[i, j]
            if s > best:
                best = s
                best_i = i
        if best >= s0:
            block_errors += 1
            bit_errors += info_weights[best_i]
    return block_errors, bit_errors


def _ml_decode_np(noise, signs, info_weights):
    y = noise - 1.0
    scores = y @ signs.T
    s0 = scores[:, 0]
    rest = scores[:, 1:]
    best = rest.max(axis=1)
    err = best >= s0
    idx = rest.argmax(axis=1) + 1
    return int(err.sum()), int(info_weights[idx[err]].sum())


def ml_decode_block(noise: np.ndarray, signs: np.ndarray, info_weights: np.ndarray):
    """Decode one block of all-zero-codeword trials; count block/bit errors.

    ``signs`` holds the BPSK-modulated codebook sorted so that row 0 is the
    all-zero codeword and ties resolve to the lexicographically smallest
    word; a tie against row 0 counts as an error.
    """
    noise = np.ascontiguousarray(noise, dtype=np.float64)
    signs = np.ascontiguousarray(signs, dtype=np.float64)
    info_weights = np.ascontiguousarray(info_weights, dtype=np.int64)
    if NUMBA_ENABLED:
        be, bite = _ml_decode_nb(noise, signs, info_weights)
        return int(be), int(bite)
    return _ml_decode_np(noise, signs, info_weights)


# ---------------------------------------------------------------------------
# exhaustive IOWEF enumeration
# ---------------------------------------------------------------------------

_M1 = np.uint64(0x5555555555555555)
_M2 = np.uint64(0x3333333333333333)
_M4 = np.uint64(0x0F0F0F0F0F0F0F0F)
_H01 = np.uint64(0x0101010101010101)
_S1 = np.uint64(1)
_S2 = np.uint64(2)
_S4 = np.uint64(4)
_S56 = np.uint64(56)


@njit(cache=True)
def _popcount64(x):
    x = x - ((x >> _S1) & _M1)
    x = (x & _M2) + ((x >> _S2) & _M2)
    x = (x + (x >> _S4)) & _M4
    return (x * _H01) >> _S56


@njit(cache=True)
def _iowef_counts_nb(rows, k_dim, counts):
    nwords = rows.shape[1]
    cw = np.zeros(nwords, dtype=np.uint64)
    counts[0, 0] += 1
    w = 0
    msg = np.uint64(0)
    total = 1 << k_dim
    for i in range(1, total):
        b = 0
        ii = i
        while ii & 1 == 0:
            ii >>= 1
            b += 1
        bit = _S1 << np.uint64(b)
        if msg & bit:
            w -= 1
        else:
            w += 1
        msg ^= bit
        l = 0
        for j in range(nwords):
            cw[j] ^= rows[b, j]
            l += int(_popcount64(cw[j]))
        counts[w, l] += 1


def _iowef_counts_np(gen, counts):
    k_dim, n = gen.shape
    total = 1 << k_dim
    block = 1 << 14
    shifts = np.arange(k_dim, dtype=np.uint32)
    for start in range(0, total, block):
        idx = np.arange(start, min(start + block, total), dtype=np.uint32)
        bits = ((idx[:, None] >> shifts[None, :]) & 1).astype(np.uint8)
        cw = (bits @ gen) & 1
        w = bits.sum(axis=1).astype(np.int64)
        l = cw.sum(axis=1).astype(np.int64)
        np.add.at(counts, (w, l), 1)


def iowef_counts(gen: np.ndarray) -> np.ndarray:
    """Exact (input weight, output weight) codeword counts over all 2^K messages."""
    gen = np.ascontiguousarray(gen, dtype=np.uint8)
    k_dim, n = gen.shape
    counts = np.zeros((k_dim + 1, n + 1), dtype=np.int64)
    if NUMBA_ENABLED:
        nwords = (n + 63) // 64
        rows = np.zeros((k_dim, nwords), dtype=np.uint64)
        for i in range(k_dim):
            for j in range(n):
                if gen[i, j]:
                    rows[i, j // 64] |= np.uint64(1) << np.uint64(j % 64)
        _iowef_counts_nb(rows, k_dim, counts)
    else:
        _iowef_counts_np(gen, counts)
    return counts


# ---------------------------------------------------------------------------
# Voronoi cover check (the C rule)
# ---------------------------------------------------------------------------

@njit(cache=True, parallel=True)
def _cover_flags_nb(words, weights, flags):
    m, nwords = words.shape
    for i in prange(1, m):
        covered = False
        for j in range(1, m):
            if weights[j] >= weights[i]:
                continue
            ok = True
            for t in range(nwords):
                if words[j, t] & ~words[i, t]:
                    ok = False
                    break
            if ok:
                covered = True
                break
        flags[i] = 0 if covered else 1


def _cover_flags_np(words, weights, flags):
    m = words.shape[0]
    chunk = 256
    for start in range(1, m, chunk):
        stop = min(start + chunk, m)
        block = words[start:stop]
        sub = (words[None, 1:, :] & ~block[:, None, :]) == 0
        covers = sub.all(axis=2)
        lighter = weights[None, 1:] < weights[start:stop, None]
        flags[start:stop] = ~(covers & lighter).any(axis=1)


def cover_flags(words_packed: np.ndarray, weights: np.ndarray) -> np.ndarray:
    """Flag codewords that cover no lighter nonzero codeword (index 0 = zero word).

    A codeword covers another when the other has zeros wherever it has
    zeros; only strictly lighter words can be distinct covered words.
    """
    words_packed = np.ascontiguousarray(words_packed, dtype=np.uint64)
    weights = np.ascontiguousarray(weights, dtype=np.int64)
    flags = np.zeros(words_packed.shape[0], dtype=np.uint8)
    if NUMBA_ENABLED:
        _cover_flags_nb(words_packed, weights, flags)
    else:
        _cover_flags_np(words_packed, weights, flags)
    return flags.astype(bool)
