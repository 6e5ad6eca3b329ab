"""Explicit small codes: codebooks, generator matrices, bit packing."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InputError, SizeError

MAX_CODEBOOK = 1 << 20


def pack_rows(bits: np.ndarray) -> np.ndarray:
    """Pack (M, n) 0/1 rows into (M, ceil(n/64)) uint64 words, bit j -> word j//64."""
    bits = np.asarray(bits, dtype=np.uint8)
    m, n = bits.shape
    nwords = (n + 63) // 64
    out = np.zeros((m, nwords), dtype=np.uint64)
    for j in range(n):
        out[:, j // 64] |= bits[:, j].astype(np.uint64) << np.uint64(j % 64)
    return out


@dataclass(frozen=True)
class Codebook:
    """All codewords of a small binary linear code, sorted lexicographically.

    ``words`` is an (M, n) 0/1 array whose first row is the all-zero word;
    ``messages`` (optional, aligned with ``words``) carries the systematic
    information bits needed by the bit-error simulator.
    """

    n: int
    words: np.ndarray
    messages: np.ndarray | None = field(default=None)

    def __post_init__(self) -> None:
        words = np.asarray(self.words, dtype=np.uint8)
        if words.ndim != 2 or words.shape[1] != self.n:
            raise InputError("words must be an (M, n) bit array")
        if len(words) > MAX_CODEBOOK:
            raise SizeError(f"codebook too large: {len(words)} > {MAX_CODEBOOK}")
        if words[0].any():
            raise InputError("first codeword must be the all-zero word (sorted order)")
        _verify_linear(words)
        object.__setattr__(self, "words", words)

    @property
    def size(self) -> int:
        return len(self.words)

    @property
    def weights(self) -> np.ndarray:
        return self.words.sum(axis=1).astype(np.int64)

    def spectrum_counts(self) -> np.ndarray:
        counts = np.zeros(self.n + 1, dtype=np.int64)
        np.add.at(counts, self.weights, 1)
        return counts


def _verify_linear(words: np.ndarray) -> None:
    """Check closure under XOR: zero word present, distinct words, |C| = 2^rank."""
    packed = pack_rows(words)
    as_int = [tuple(row.tolist()) for row in packed]
    if len(set(as_int)) != len(as_int):
        raise InputError("codebook contains duplicate words")
    basis: dict[int, int] = {}
    for row in packed:
        v = 0
        for t, wrd in enumerate(row.tolist()):
            v |= int(wrd) << (64 * t)
        while v:
            p = v.bit_length() - 1
            if p not in basis:
                basis[p] = v
                break
            v ^= basis[p]
    if len(words) != (1 << len(basis)):
        raise InputError("codebook is not closed under addition (not a linear code)")


def codebook_from_generator(gen: np.ndarray) -> Codebook:
    """Enumerate the code of a K x n generator matrix, keeping the message map."""
    gen = np.asarray(gen, dtype=np.uint8)
    k, n = gen.shape
    if k > 20:
        raise SizeError(f"refusing to enumerate 2^{k} codewords")
    idx = np.arange(1 << k, dtype=np.uint32)
    msgs = ((idx[:, None] >> np.arange(k, dtype=np.uint32)[None, :]) & 1).astype(np.uint8)
    words = (msgs @ gen) & 1
    # lexicographic order with column 0 most significant
    order = np.lexsort(words.T[::-1])
    return Codebook(n=n, words=words[order], messages=msgs[order])


def hamming_generator(m: int) -> np.ndarray:
    """Systematic [I | P] generator of the (2^m - 1, 2^m - m - 1) Hamming code."""
    if m < 2:
        raise InputError("hamming_generator requires m >= 2")
    n = (1 << m) - 1
    k = n - m
    heavy = [v for v in range(1, n + 1) if bin(v).count("1") >= 2]
    assert len(heavy) == k
    p = np.zeros((k, m), dtype=np.uint8)
    for i, v in enumerate(heavy):
        for j in range(m):
            p[i, j] = (v >> j) & 1
    return np.hstack([np.eye(k, dtype=np.uint8), p])


def extended_hamming_generator(m: int = 3) -> np.ndarray:
    """Generator of the (2^m, 2^m - m - 1) extended Hamming code."""
    g = hamming_generator(m)
    parity = (g.sum(axis=1) & 1).astype(np.uint8)
    return np.hstack([g, parity[:, None]])


def repetition_generator(n: int) -> np.ndarray:
    if n < 1:
        raise InputError("repetition_generator requires n >= 1")
    return np.ones((1, n), dtype=np.uint8)


def single_parity_check_generator(n: int) -> np.ndarray:
    if n < 2:
        raise InputError("single_parity_check_generator requires n >= 2")
    return np.hstack([np.eye(n - 1, dtype=np.uint8), np.ones((n - 1, 1), dtype=np.uint8)])
