"""Pure-Python DBM kernels.

Bounds are encoded as single integers: ``2*c + 1`` for ``<= c`` and ``2*c`` for
``< c``.  Smaller encodings are tighter bounds, so ``min`` works directly.
Matrices are flat lists of length ``n*n`` with row-major indexing.
"""

INF = 1 << 60
LE_ZERO = 1


def add(a, b):
    if a >= INF or b >= INF:
        return INF
    return (((a >> 1) + (b >> 1)) << 1) | (a & b & 1)


def close(m, n):
    """Tighten ``m`` in place (Floyd-Warshall). Returns False if empty."""
    for k in range(n):
        rk = k * n
        for i in range(n):
            ri = i * n
            mik = m[ri + k]
            if mik >= INF:
                continue
            for j in range(n):
                mkj = m[rk + j]
                if mkj >= INF:
                    continue
                s = (((mik >> 1) + (mkj >> 1)) << 1) | (mik & mkj & 1)
                if s < m[ri + j]:
                    m[ri + j] = s
        if m[k * n + k] < LE_ZERO:
            return False
    for i in range(n):
        if m[i * n + i] < LE_ZERO:
            return False
    return True


def close_ij(m, n, a, b):
    """Re-tighten after a single entry ``m[a][b]`` has been lowered."""
    ab = m[a * n + b]
    for i in range(n):
        ia = m[i * n + a]
        if ia >= INF:
            continue
        iab = add(ia, ab)
        ri = i * n
        for j in range(n):
            bj = m[b * n + j]
            if bj >= INF:
                continue
            s = add(iab, bj)
            if s < m[ri + j]:
                m[ri + j] = s
    for i in range(n):
        if m[i * n + i] < LE_ZERO:
            return False
    return True


def extrapolate(m, n, bounds):
    """Classic maximal-constant extrapolation; ``bounds[0]`` must be 0."""
    for i in range(n):
        ri = i * n
        upper_i = (bounds[i] << 1) | 1
        for j in range(n):
            if i == j:
                continue
            v = m[ri + j]
            if v >= INF:
                continue
            if v > upper_i:
                m[ri + j] = INF
            elif v < (-bounds[j]) << 1:
                m[ri + j] = (-bounds[j]) << 1
    return close(m, n)
