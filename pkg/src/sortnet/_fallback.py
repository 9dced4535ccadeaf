"""Pure numpy implementation of the bit-parallel kernels.

Word layout: ``words[c, w]`` holds channel ``c`` for 64 inputs, bit ``b``
belonging to input ``64*w + b``. During exhaustive scans input index ``k``
sets channel ``c`` to bit ``n-1-c`` of ``k``.
"""
import numpy as np

ALL = np.uint64(0xFFFFFFFFFFFFFFFF)
# bit b of PATTERNS[p] equals bit p of b, for b in 0..63
PATTERNS = [np.uint64(sum(1 << b for b in range(64) if (b >> p) & 1)) for p in range(6)]
CHUNK_WORDS = 1 << 14


def apply_network(words, comps):
    for lo, hi in comps:
        a = words[lo].copy()
        b = words[hi]
        words[lo] &= b
        words[hi] = a | b


def _exhaustive_words(n, w0, w1):
    m = np.arange(w0, w1, dtype=np.uint64)
    words = np.empty((n, w1 - w0), dtype=np.uint64)
    for c in range(n):
        p = n - 1 - c
        if p < 6:
            words[c] = PATTERNS[p]
        else:
            words[c] = np.where((m >> np.uint64(p - 6)) & np.uint64(1), ALL, np.uint64(0))
    return words


def _valid_mask(n):
    if n >= 6:
        return ALL
    return np.uint64((1 << (1 << n)) - 1)


def _word_range(n, start, stop):
    return start // 64, -(-stop // 64)


def _range_mask(n, start, stop, w0, w1):
    mask = np.full(w1 - w0, _valid_mask(n), dtype=np.uint64)
    if start % 64:
        mask[0] &= ALL << np.uint64(start % 64)
    if stop % 64:
        mask[-1] &= ALL >> np.uint64(64 - stop % 64)
    return mask


def first_failure(n, comps, start, stop):
    """Smallest input index in ``[start, stop)`` left unsorted, or -1."""
    if n < 2 or stop <= start:
        return -1
    w_lo, w_hi = _word_range(n, start, stop)
    for w0 in range(w_lo, w_hi, CHUNK_WORDS):
        w1 = min(w_hi, w0 + CHUNK_WORDS)
        words = _exhaustive_words(n, w0, w1)
        apply_network(words, comps)
        bad = np.zeros(w1 - w0, dtype=np.uint64)
        for c in range(n - 1):
            bad |= words[c] & ~words[c + 1]
        bad &= _range_mask(n, start, stop, w0, w1)
        hits = np.flatnonzero(bad)
        if hits.size:
            i = int(hits[0])
            word = int(bad[i])
            return (w0 + i) * 64 + ((word & -word).bit_length() - 1)
    return -1


def output_codes(n, comps, start, stop):
    """Output codes for input indices ``start..stop-1`` in order."""
    if stop <= start:
        return np.zeros(0, dtype=np.uint64)
    w_lo, w_hi = _word_range(n, start, stop)
    parts = []
    for w0 in range(w_lo, w_hi, CHUNK_WORDS):
        w1 = min(w_hi, w0 + CHUNK_WORDS)
        words = _exhaustive_words(n, w0, w1)
        apply_network(words, comps)
        codes = np.zeros((w1 - w0) * 64, dtype=np.uint64)
        for c in range(n):
            bits = np.unpackbits(words[c].view(np.uint8), bitorder="little")
            codes |= bits.astype(np.uint64) << np.uint64(n - 1 - c)
        lo = max(start, w0 * 64) - w0 * 64
        hi = min(stop, w1 * 64) - w0 * 64
        parts.append(codes[lo:hi])
    return np.concatenate(parts)
