# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled DBM kernels; same contract as ``_dbm_py``."""

from libc.stdlib cimport malloc, free
from libc.stdint cimport int64_t

cdef int64_t CINF = 1152921504606846976  # 1 << 60

INF = CINF
LE_ZERO = 1


cdef inline int64_t _add(int64_t a, int64_t b) nogil:
    if a >= CINF or b >= CINF:
        return CINF
    return (((a >> 1) + (b >> 1)) << 1) | (a & b & 1)


def add(a, b):
    return _add(a, b)


cdef bint _close(int64_t* m, int n) nogil:
    cdef int i, j, k
    cdef int64_t mik, mkj, s
    for k in range(n):
        for i in range(n):
            mik = m[i * n + k]
            if mik >= CINF:
                continue
            for j in range(n):
                mkj = m[k * n + j]
                if mkj >= CINF:
                    continue
                s = (((mik >> 1) + (mkj >> 1)) << 1) | (mik & mkj & 1)
                if s < m[i * n + j]:
                    m[i * n + j] = s
        if m[k * n + k] < 1:
            return False
    for i in range(n):
        if m[i * n + i] < 1:
            return False
    return True


cdef int64_t* _load(list m, int n) except NULL:
    cdef int64_t* buf = <int64_t*> malloc(n * n * sizeof(int64_t))
    if buf == NULL:
        raise MemoryError()
    cdef int i
    for i in range(n * n):
        buf[i] = m[i]
    return buf


cdef void _store(int64_t* buf, list m, int n):
    cdef int i
    for i in range(n * n):
        m[i] = buf[i]


def close(list m, int n):
    cdef int64_t* buf = _load(m, n)
    cdef bint ok
    try:
        ok = _close(buf, n)
        _store(buf, m, n)
    finally:
        free(buf)
    return ok


def close_ij(list m, int n, int a, int b):
    cdef int64_t* buf = _load(m, n)
    cdef int i, j
    cdef int64_t ab, ia, iab, bj, s
    cdef bint ok = True
    try:
        ab = buf[a * n + b]
        for i in range(n):
            ia = buf[i * n + a]
            if ia >= CINF:
                continue
            iab = _add(ia, ab)
            for j in range(n):
                bj = buf[b * n + j]
                if bj >= CINF:
                    continue
                s = _add(iab, bj)
                if s < buf[i * n + j]:
                    buf[i * n + j] = s
        for i in range(n):
            if buf[i * n + i] < 1:
                ok = False
        _store(buf, m, n)
    finally:
        free(buf)
    return ok


def extrapolate(list m, int n, list bounds):
    cdef int64_t* buf = _load(m, n)
    cdef int i, j
    cdef int64_t v, upper_i, lower_j
    cdef bint ok
    try:
        for i in range(n):
            upper_i = ((<int64_t> bounds[i]) << 1) | 1
            for j in range(n):
                if i == j:
                    continue
                v = buf[i * n + j]
                if v >= CINF:
                    continue
                lower_j = (-(<int64_t> bounds[j])) << 1
                if v > upper_i:
                    buf[i * n + j] = CINF
                elif v < lower_j:
                    buf[i * n + j] = lower_j
        ok = _close(buf, n)
        _store(buf, m, n)
    finally:
        free(buf)
    return ok
