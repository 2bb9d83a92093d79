"""Pure-Python versions of the hot kernels.

These mirror ``_kernels.pyx`` function for function and are used when the
compiled extension is unavailable (or ``BRUNR_PURE=1`` is set).  They work on
plain Python ints, so unlike the compiled path they have no modulus limit.
"""

from itertools import combinations


def xgcd(a, b):
    """Return ``(g, s, t)`` with ``g = s*a + t*b = gcd(a, b) >= 0``."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        return -a, -s0, -t0
    return a, s0, t0


def unit_normalizer(a, m):
    """A unit ``u`` of Z/m with ``u*a = gcd(a, m)`` (mod m)."""
    g, s, _ = xgcd(a % m, m)
    if g == 0:
        return 1
    mg = m // g
    u = s % mg if mg > 1 else 1
    # lift u mod m/g to a unit mod m
    while xgcd(u, m)[0] != 1:
        u += mg
    return u % m


def howell_form(rows, ncols, m):
    """Howell form of the Z/m-row-span of ``rows``.

    Returns the nonzero rows, each pivot a divisor of ``m`` and the entries
    above every pivot reduced into ``[0, pivot)``.  The result depends only on
    the module spanned, not on the generating set.
    """
    A = [[x % m for x in r] for r in rows]
    r = 0
    for c in range(ncols):
        piv = -1
        for i in range(r, len(A)):
            if A[i][c]:
                piv = i
                break
        if piv < 0:
            continue
        A[r], A[piv] = A[piv], A[r]
        Rr = A[r]
        for i in range(r + 1, len(A)):
            b = A[i][c]
            if not b:
                continue
            a = Rr[c]
            Ri = A[i]
            if b % a == 0:
                q = b // a
                A[i] = [(y - q * x) % m for x, y in zip(Rr, Ri)]
                continue
            g, s, t = xgcd(a, b)
            u, v = -b // g, a // g
            Rr = [(s * x + t * y) % m for x, y in zip(Rr, Ri)]
            A[i] = [(u * x + v * y) % m for x, y in zip(A[r], Ri)]
            A[r] = Rr
        u = unit_normalizer(Rr[c], m)
        if u != 1:
            Rr = [(u * x) % m for x in Rr]
        A[r] = Rr
        a = Rr[c]
        for i in range(r):
            q = A[i][c] // a
            if q:
                A[i] = [(y - q * x) % m for x, y in zip(Rr, A[i])]
        if a != 1:
            k = m // a
            ann = [(k * x) % m for x in Rr]
            if any(ann):
                A.append(ann)
        r += 1
    return [row for row in A[:r]]


def plucker_quads(d):
    """Coordinate index sextuples (ij, kl, ik, jl, il, jk) for i<j<k<l."""
    idx = {}
    for i, j in combinations(range(d), 2):
        idx[i, j] = len(idx)
    return [
        (idx[i, j], idx[k, l], idx[i, k], idx[j, l], idx[i, l], idx[j, k])
        for i, j, k, l in combinations(range(d), 4)
    ]


def is_decomposable(w, quads, p):
    for a, b, c, e, f, h in quads:
        if (w[a] * w[b] - w[c] * w[e] + w[f] * w[h]) % p:
            return False
    return True


def _insert(echelon, v, p):
    """Reduce ``v`` against ``echelon`` (list of (pivot, row)); append if new."""
    v = list(v)
    for piv, row in echelon:
        x = v[piv]
        if x:
            v = [(y - x * z) % p for y, z in zip(v, row)]
    for j, x in enumerate(v):
        if x:
            inv = pow(x, -1, p)
            echelon.append((j, [(inv * y) % p for y in v]))
            return True
    return False


def decomposable_span(basis, d, p):
    """Span of the decomposable vectors in the F_p-span of ``basis``.

    Enumerates all ``p**len(basis)`` combinations.  Returns
    ``(rows, count)`` where ``rows`` spans the decomposables (echelon, not
    yet reduced) and ``count`` is the number of nonzero decomposable vectors.
    """
    quads = plucker_quads(d)
    k = len(basis)
    D = d * (d - 1) // 2
    echelon = []
    count = 0
    coeffs = [0] * k
    w = [0] * D
    total = p**k
    for step in range(1, total):
        # mixed-radix increment; update w incrementally
        pos = 0
        while True:
            coeffs[pos] += 1
            if coeffs[pos] == p:
                coeffs[pos] = 0
                row = basis[pos]
                w = [(x - (p - 1) * y) % p for x, y in zip(w, row)]
                pos += 1
            else:
                row = basis[pos]
                w = [(x + y) % p for x, y in zip(w, row)]
                break
        if is_decomposable(w, quads, p):
            count += 1
            if len(echelon) < k:
                _insert(echelon, w, p)
    return [row for _, row in echelon], count
