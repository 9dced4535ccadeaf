# cython: language_level=3
"""Compiled bit-parallel kernels; see ``_fallback`` for the word layout."""
import numpy as np
cimport cython
from libc.stdint cimport uint64_t, int32_t, int64_t
from libc.stdlib cimport malloc, free

cdef extern from *:
    int __builtin_ctzll(unsigned long long) nogil

cdef uint64_t ALL = 0xFFFFFFFFFFFFFFFFULL
cdef uint64_t PATTERNS[6]
PATTERNS[0] = 0xAAAAAAAAAAAAAAAAULL
PATTERNS[1] = 0xCCCCCCCCCCCCCCCCULL
PATTERNS[2] = 0xF0F0F0F0F0F0F0F0ULL
PATTERNS[3] = 0xFF00FF00FF00FF00ULL
PATTERNS[4] = 0xFFFF0000FFFF0000ULL
PATTERNS[5] = 0xFFFFFFFF00000000ULL


def apply_network(uint64_t[:, ::1] words, int32_t[:, ::1] comps):
    cdef Py_ssize_t nw = words.shape[1]
    cdef Py_ssize_t m = comps.shape[0]
    cdef Py_ssize_t k, w
    cdef int32_t lo, hi
    cdef uint64_t a, b
    with nogil:
        for k in range(m):
            lo = comps[k, 0]
            hi = comps[k, 1]
            for w in range(nw):
                a = words[lo, w]
                b = words[hi, w]
                words[lo, w] = a & b
                words[hi, w] = a | b


cdef inline void fill_inputs(int n, int64_t w, uint64_t* v) noexcept nogil:
    cdef int c, p
    for c in range(n):
        p = n - 1 - c
        if p < 6:
            v[c] = PATTERNS[p]
        elif (w >> (p - 6)) & 1:
            v[c] = ALL
        else:
            v[c] = 0


cdef inline uint64_t word_mask(int n, int64_t w, int64_t start, int64_t stop) noexcept nogil:
    cdef uint64_t mask = ALL
    if n < 6:
        mask = (<uint64_t>1 << (1 << n)) - 1
    if w == start // 64 and start % 64:
        mask &= ALL << (start % 64)
    if w == (stop - 1) // 64 and stop % 64:
        mask &= ALL >> (64 - stop % 64)
    return mask


def first_failure(int n, int32_t[:, ::1] comps, int64_t start, int64_t stop):
    if n < 2 or stop <= start:
        return -1
    cdef int64_t w, w_lo = start // 64, w_hi = (stop + 63) // 64
    cdef Py_ssize_t m = comps.shape[0]
    cdef Py_ssize_t k
    cdef int c
    cdef int32_t lo, hi
    cdef uint64_t a, b, bad
    cdef int64_t found = -1
    cdef uint64_t* v = <uint64_t*> malloc(n * sizeof(uint64_t))
    if v == NULL:
        raise MemoryError()
    try:
        with nogil:
            for w in range(w_lo, w_hi):
                fill_inputs(n, w, v)
                for k in range(m):
                    lo = comps[k, 0]
                    hi = comps[k, 1]
                    a = v[lo]
                    b = v[hi]
                    v[lo] = a & b
                    v[hi] = a | b
                bad = 0
                for c in range(n - 1):
                    bad |= v[c] & ~v[c + 1]
                bad &= word_mask(n, w, start, stop)
                if bad:
                    found = w * 64 + __builtin_ctzll(bad)
                    break
    finally:
        free(v)
    return found


def output_codes(int n, int32_t[:, ::1] comps, int64_t start, int64_t stop):
    if stop <= start:
        return np.zeros(0, dtype=np.uint64)
    out = np.zeros(stop - start, dtype=np.uint64)
    cdef uint64_t[::1] codes = out
    cdef int64_t w, w_lo = start // 64, w_hi = (stop + 63) // 64
    cdef int64_t i, idx
    cdef Py_ssize_t m = comps.shape[0]
    cdef Py_ssize_t k
    cdef int c
    cdef int32_t lo, hi
    cdef uint64_t a, b, code
    cdef uint64_t* v = <uint64_t*> malloc(max(n, 1) * sizeof(uint64_t))
    if v == NULL:
        raise MemoryError()
    try:
        with nogil:
            for w in range(w_lo, w_hi):
                fill_inputs(n, w, v)
                for k in range(m):
                    lo = comps[k, 0]
                    hi = comps[k, 1]
                    a = v[lo]
                    b = v[hi]
                    v[lo] = a & b
                    v[hi] = a | b
                for i in range(64):
                    idx = w * 64 + i
                    if idx < start or idx >= stop:
                        continue
                    code = 0
                    for c in range(n):
                        code = (code << 1) | ((v[c] >> i) & 1)
                    codes[idx - start] = code
    finally:
        free(v)
    return out
