# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: Howell form over Z/m and decomposable enumeration.

Same contracts as ``brunr._purepy``.  Entries are C ``long long``; callers
only dispatch here when ``m < 2**31`` so every product fits in 63 bits.
"""

import numpy as np
cimport numpy as cnp

ctypedef long long i64


cdef inline i64 _mod(i64 x, i64 m) nogil:
    x %= m
    if x < 0:
        x += m
    return x


cdef void _xgcd(i64 a, i64 b, i64* g, i64* s, i64* t) nogil:
    cdef i64 s0 = 1, s1 = 0, t0 = 0, t1 = 1, q, r, tmp
    while b != 0:
        q = a // b
        r = a - q * b
        a = b
        b = r
        tmp = s0 - q * s1
        s0 = s1
        s1 = tmp
        tmp = t0 - q * t1
        t0 = t1
        t1 = tmp
    if a < 0:
        a = -a
        s0 = -s0
        t0 = -t0
    g[0] = a
    s[0] = s0
    t[0] = t0


cdef i64 _unit_normalizer(i64 a, i64 m) nogil:
    cdef i64 g, s, t, mg, u, gg, ss, tt
    _xgcd(_mod(a, m), m, &g, &s, &t)
    if g == 0:
        return 1
    mg = m // g
    if mg > 1:
        u = _mod(s, mg)
    else:
        u = 1
    _xgcd(u, m, &gg, &ss, &tt)
    while gg != 1:
        u += mg
        _xgcd(u, m, &gg, &ss, &tt)
    return _mod(u, m)


def howell_form(rows, Py_ssize_t ncols, i64 m):
    cdef cnp.ndarray[i64, ndim=2] src = np.ascontiguousarray(rows, dtype=np.int64).reshape(-1, ncols)
    cdef Py_ssize_t nrows = src.shape[0]
    cdef Py_ssize_t cap = nrows + ncols + 1
    cdef cnp.ndarray[i64, ndim=2] A = np.zeros((cap, ncols), dtype=np.int64)
    cdef i64[:, ::1] M = A
    cdef Py_ssize_t i, j, c, r = 0, piv, last
    cdef i64 a, b, g, s, t, u, v, q, x, y, k
    cdef bint nonzero

    for i in range(nrows):
        for j in range(ncols):
            M[i, j] = _mod(src[i, j], m)
    last = nrows

    with nogil:
        for c in range(ncols):
            piv = -1
            for i in range(r, last):
                if M[i, c] != 0:
                    piv = i
                    break
            if piv < 0:
                continue
            if piv != r:
                for j in range(c, ncols):
                    x = M[r, j]
                    M[r, j] = M[piv, j]
                    M[piv, j] = x
            for i in range(r + 1, last):
                b = M[i, c]
                if b == 0:
                    continue
                a = M[r, c]
                if b % a == 0:
                    q = b // a
                    for j in range(c, ncols):
                        M[i, j] = _mod(M[i, j] - q * M[r, j], m)
                    continue
                _xgcd(a, b, &g, &s, &t)
                u = _mod(-(b // g), m)
                v = a // g
                s = _mod(s, m)
                t = _mod(t, m)
                for j in range(c, ncols):
                    x = M[r, j]
                    y = M[i, j]
                    M[r, j] = (s * x + t * y) % m
                    M[i, j] = (u * x + v * y) % m
            u = _unit_normalizer(M[r, c], m)
            if u != 1:
                for j in range(c, ncols):
                    M[r, j] = (u * M[r, j]) % m
            a = M[r, c]
            for i in range(r):
                q = M[i, c] // a
                if q != 0:
                    for j in range(c, ncols):
                        M[i, j] = _mod(M[i, j] - q * M[r, j], m)
            if a != 1:
                k = m // a
                nonzero = False
                for j in range(c, ncols):
                    x = (k * M[r, j]) % m
                    M[last, j] = x
                    if x != 0:
                        nonzero = True
                if nonzero:
                    last += 1
                    # annihilator rows never exceed the pivot count
                else:
                    for j in range(c, ncols):
                        M[last, j] = 0
            r += 1
    return A[:r].copy()


def decomposable_span(basis, Py_ssize_t d, i64 p):
    from brunr._purepy import plucker_quads
    cdef Py_ssize_t k = len(basis)
    cdef Py_ssize_t D = d * (d - 1) // 2
    cdef cnp.ndarray[i64, ndim=2] B = np.zeros((max(k, 1), max(D, 1)), dtype=np.int64)
    cdef Py_ssize_t i, j, pos, nq
    for i in range(k):
        for j in range(D):
            B[i, j] = _mod(basis[i][j], p)
    quads = plucker_quads(d)
    nq = len(quads)
    cdef cnp.ndarray[i64, ndim=2] Q = np.zeros((max(nq, 1), 6), dtype=np.int64)
    for i in range(nq):
        for j in range(6):
            Q[i, j] = quads[i][j]
    cdef cnp.ndarray[i64, ndim=1] coeffs = np.zeros(max(k, 1), dtype=np.int64)
    cdef cnp.ndarray[i64, ndim=1] w = np.zeros(max(D, 1), dtype=np.int64)
    cdef cnp.ndarray[i64, ndim=1] tmp = np.zeros(max(D, 1), dtype=np.int64)
    cdef cnp.ndarray[i64, ndim=2] E = np.zeros((max(k, 1), max(D, 1)), dtype=np.int64)
    cdef cnp.ndarray[i64, ndim=1] pivots = np.zeros(max(k, 1), dtype=np.int64)
    cdef i64[:, ::1] Bv = B
    cdef i64[:, ::1] Qv = Q
    cdef i64[::1] cv = coeffs
    cdef i64[::1] wv = w
    cdef i64[::1] tv = tmp
    cdef i64[:, ::1] Ev = E
    cdef i64[::1] pv = pivots
    cdef Py_ssize_t rank = 0, e
    cdef i64 count = 0, step, total = 1, x, inv, g, s, t
    cdef bint dec
    for i in range(k):
        total *= p
    with nogil:
        for step in range(1, total):
            pos = 0
            while True:
                cv[pos] += 1
                if cv[pos] == p:
                    cv[pos] = 0
                    for j in range(D):
                        wv[j] = (wv[j] + Bv[pos, j]) % p
                    pos += 1
                else:
                    for j in range(D):
                        wv[j] = (wv[j] + Bv[pos, j]) % p
                    break
            dec = True
            for i in range(nq):
                x = wv[Qv[i, 0]] * wv[Qv[i, 1]] - wv[Qv[i, 2]] * wv[Qv[i, 3]] + wv[Qv[i, 4]] * wv[Qv[i, 5]]
                if x % p != 0:
                    dec = False
                    break
            if not dec:
                continue
            count += 1
            if rank == k:
                continue
            for j in range(D):
                tv[j] = wv[j]
            for e in range(rank):
                x = tv[pv[e]]
                if x != 0:
                    for j in range(D):
                        tv[j] = _mod(tv[j] - x * Ev[e, j], p)
            for j in range(D):
                if tv[j] != 0:
                    _xgcd(tv[j], p, &g, &s, &t)
                    inv = _mod(s, p)
                    for i in range(D):
                        Ev[rank, i] = (inv * tv[i]) % p
                    pv[rank] = j
                    rank += 1
                    break
    rows = [[int(E[e, j]) for j in range(D)] for e in range(rank)]
    return rows, int(count)
