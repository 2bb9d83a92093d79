"""Exact linear algebra over Z, Z/m and F_p.

Everything here works on Python ints (or on int64 arrays inside the compiled
Howell kernel when the modulus is small enough), so no result ever depends on
floating point.  Matrices are row-major.

The two workhorses are

* ``smith_normal_form`` -- classical elimination with 2x2 unimodular steps,
  recorded as an operation log so that ``U``, ``V``, ``U @ v`` and
  ``U^{-1} @ e_i`` can be produced on demand without forming dense products;
* ``howell_form`` -- the canonical echelon form of a submodule of (Z/m)^n,
  which is what makes ``kernel_mod`` and ``subquotient_structure`` canonical
  when ``m`` has zero divisors.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from typing import Iterable, Sequence

from brunr import _backend
from brunr._purepy import xgcd
from brunr.errors import ContainmentViolation, DimensionMismatch


# ---------------------------------------------------------------------------
# small number theory helpers


def factorize(n: int) -> dict[int, int]:
    """Trial-division factorisation; inputs here are group orders and moduli."""
    out: dict[int, int] = {}
    n = abs(n)
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def is_prime(n: int) -> bool:
    return n >= 2 and factorize(n) == {n: 1}


def lcm(*values: int) -> int:
    out = 1
    for v in values:
        out = out * v // gcd(out, v)
    return out


def invariant_factors_from_orders(orders: Iterable[int]) -> tuple[int, ...]:
    """Invariant factors of the direct sum of cyclic groups of the given orders."""
    by_prime: dict[int, list[int]] = {}
    for n in orders:
        if n == 0:
            raise ValueError("infinite cyclic summand has no invariant factor")
        for p, e in factorize(n).items():
            by_prime.setdefault(p, []).append(p**e)
    if not by_prime:
        return ()
    for powers in by_prime.values():
        powers.sort(reverse=True)
    length = max(len(v) for v in by_prime.values())
    factors = []
    for i in range(length):
        f = 1
        for powers in by_prime.values():
            if i < len(powers):
                f *= powers[i]
        factors.append(f)
    return tuple(reversed(factors))


# ---------------------------------------------------------------------------
# domain types


@dataclass(frozen=True)
class IntMatrix:
    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self):
        if self.rows * self.cols != len(self.entries):
            raise DimensionMismatch(
                f"{self.rows}x{self.cols} matrix needs {self.rows * self.cols} entries, got {len(self.entries)}"
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> "IntMatrix":
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != cols:
                raise DimensionMismatch("ragged rows")
        return cls(len(rows), cols, tuple(int(x) for r in rows for x in r))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, tuple(int(i == j) for i in range(n) for j in range(n)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols, (0,) * (rows * cols))

    def to_rows(self) -> list[list[int]]:
        c = self.cols
        return [list(self.entries[i * c : (i + 1) * c]) for i in range(self.rows)]

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def transpose(self) -> "IntMatrix":
        r = self.to_rows()
        return IntMatrix.from_rows([list(col) for col in zip(*r)] if r else [], self.rows)

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise DimensionMismatch(f"{self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        a = self.to_rows()
        bt = other.transpose().to_rows()
        return IntMatrix.from_rows(
            [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a], other.cols
        )

    def det(self) -> int:
        """Fraction-free (Bareiss) determinant."""
        if self.rows != self.cols:
            raise DimensionMismatch("determinant of a non-square matrix")
        n = self.rows
        M = self.to_rows()
        sign, prev = 1, 1
        for k in range(n - 1):
            if M[k][k] == 0:
                for i in range(k + 1, n):
                    if M[i][k]:
                        M[k], M[i] = M[i], M[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
            prev = M[k][k]
        return sign * M[n - 1][n - 1] if n else 1


@dataclass(frozen=True)
class ModMatrix:
    modulus: int
    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self):
        if self.modulus < 2:
            raise ValueError("modulus must be at least 2")
        if self.rows * self.cols != len(self.entries):
            raise DimensionMismatch("entry count does not match shape")
        if any(not 0 <= x < self.modulus for x in self.entries):
            object.__setattr__(self, "entries", tuple(x % self.modulus for x in self.entries))

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], modulus: int, cols: int | None = None) -> "ModMatrix":
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        return cls(modulus, len(rows), cols, tuple(int(x) % modulus for r in rows for x in r))

    def to_rows(self) -> list[list[int]]:
        c = self.cols
        return [list(self.entries[i * c : (i + 1) * c]) for i in range(self.rows)]


@dataclass(frozen=True)
class AbelianStructure:
    """A finitely generated abelian group  Z^free_rank + sum Z/d_i.

    ``generators`` (optional) are representative vectors in ``ambient``, one
    per invariant factor (then one per free summand).
    """

    invariant_factors: tuple[int, ...]
    generators: tuple[tuple[int, ...], ...] | None = field(default=None, compare=False)
    ambient: str = field(default="", compare=False)
    free_rank: int = 0

    def __post_init__(self):
        f = tuple(int(x) for x in self.invariant_factors)
        object.__setattr__(self, "invariant_factors", f)
        for a, b in zip(f, f[1:]):
            if b % a:
                raise ValueError(f"invariant factors must form a divisibility chain: {f}")
        if any(x < 2 for x in f):
            raise ValueError(f"invariant factors must be >= 2: {f}")

    @property
    def order(self) -> int | None:
        if self.free_rank:
            return None
        out = 1
        for d in self.invariant_factors:
            out *= d
        return out

    @property
    def is_trivial(self) -> bool:
        return not self.invariant_factors and not self.free_rank

    @property
    def exponent(self) -> int:
        return self.invariant_factors[-1] if self.invariant_factors else 1

    def isomorphic(self, other: "AbelianStructure") -> bool:
        return self.invariant_factors == other.invariant_factors and self.free_rank == other.free_rank

    def direct_sum(self, other: "AbelianStructure") -> "AbelianStructure":
        return AbelianStructure(
            invariant_factors_from_orders(self.invariant_factors + other.invariant_factors),
            free_rank=self.free_rank + other.free_rank,
        )

    def to_json(self) -> dict:
        out = {"invariant_factors": list(self.invariant_factors), "order": self.order}
        if self.free_rank:
            out["free_rank"] = self.free_rank
        if self.generators is not None:
            out["generators"] = [list(g) for g in self.generators]
        if self.ambient:
            out["ambient"] = self.ambient
        return out

    def __str__(self):
        parts = [f"Z/{d}" for d in self.invariant_factors] + ["Z"] * self.free_rank
        return " + ".join(parts) if parts else "0"


# ---------------------------------------------------------------------------
# Smith normal form


class SmithForm:
    """Smith normal form of an integer matrix with a replayable operation log.

    After construction ``diagonal`` holds d_1 | d_2 | ... (zeros last) and
    ``U A V = D`` where ``U`` and ``V`` are the products of the logged row and
    column operations.  ``U`` and ``V`` are materialised only on request.
    """

    def __init__(self, rows: Sequence[Sequence[int]], ncols: int, log_cols: bool = True):
        A = [[int(x) for x in r] for r in rows]
        R, K = len(A), ncols
        self.nrows, self.ncols = R, K
        self.row_ops: list[tuple] = []
        self.col_ops: list[tuple] | None = [] if log_cols else None
        t = 0
        while t < min(R, K):
            best = None
            for i in range(t, R):
                row = A[i]
                for j in range(t, K):
                    x = row[j]
                    if x and (best is None or abs(x) < best[0]):
                        best = (abs(x), i, j)
                        if best[0] == 1:
                            break
                if best is not None and best[0] == 1:
                    break
            if best is None:
                break
            _, i, j = best
            if i != t:
                self._row(A, t, i, 0, 1, 1, 0, t)
            if j != t:
                self._col(A, t, j, 0, 1, 1, 0, t)
            while True:
                for i in range(t + 1, R):
                    b = A[i][t]
                    if not b:
                        continue
                    a = A[t][t]
                    if b % a == 0:
                        self._row(A, t, i, 1, 0, -(b // a), 1, t)
                    else:
                        g, s, u = xgcd(a, b)
                        self._row(A, t, i, s, u, -(b // g), a // g, t)
                dirty = False
                for j in range(t + 1, K):
                    b = A[t][j]
                    if not b:
                        continue
                    a = A[t][t]
                    if b % a == 0:
                        self._col(A, t, j, 1, 0, -(b // a), 1, t)
                    else:
                        g, s, u = xgcd(a, b)
                        self._col(A, t, j, s, u, -(b // g), a // g, t)
                        dirty = True
                if not dirty or all(A[i][t] == 0 for i in range(t + 1, R)):
                    break
            if A[t][t] < 0:
                self.row_ops.append(("n", t))
                A[t] = [-x for x in A[t]]
            t += 1
        self.rank = t
        diag = [A[i][i] for i in range(t)]
        # enforce d_i | d_{i+1} with 2x2 gcd/lcm steps
        for i in range(t):
            for j in range(i + 1, t):
                a, b = diag[i], diag[j]
                if b % a == 0:
                    continue
                g, s, u = xgcd(a, b)
                self.row_ops.append(("c", i, j, s, u, -(b // g), a // g))
                if self.col_ops is not None:
                    self.col_ops.append(("c", i, j, 1, 1, -(u * b // g), s * a // g))
                diag[i], diag[j] = g, a * b // g
        self.diagonal = diag + [0] * (min(R, K) - t)

    def _row(self, A, i, j, s, t, u, v, start):
        self.row_ops.append(("c", i, j, s, t, u, v))
        ri, rj = A[i], A[j]
        for k in range(start, len(ri)):
            x, y = ri[k], rj[k]
            ri[k], rj[k] = s * x + t * y, u * x + v * y

    def _col(self, A, i, j, s, t, u, v, start):
        if self.col_ops is not None:
            self.col_ops.append(("c", i, j, s, t, u, v))
        for k in range(start, len(A)):
            row = A[k]
            x, y = row[i], row[j]
            row[i], row[j] = s * x + t * y, u * x + v * y

    def apply_u(self, vec: Sequence[int]) -> list[int]:
        """``U @ vec``."""
        v = [int(x) for x in vec]
        for op in self.row_ops:
            if op[0] == "n":
                v[op[1]] = -v[op[1]]
            else:
                _, i, j, s, t, u, w = op
                x, y = v[i], v[j]
                v[i], v[j] = s * x + t * y, u * x + w * y
        return v

    def apply_u_inverse(self, vec: Sequence[int]) -> list[int]:
        """``U^{-1} @ vec``."""
        v = [int(x) for x in vec]
        for op in reversed(self.row_ops):
            if op[0] == "n":
                v[op[1]] = -v[op[1]]
            else:
                _, i, j, s, t, u, w = op
                det = s * w - t * u
                x, y = v[i], v[j]
                v[i], v[j] = det * (w * x - t * y), det * (-u * x + s * y)
        return v

    def u_matrix(self) -> IntMatrix:
        n = self.nrows
        cols = [self.apply_u([int(i == j) for i in range(n)]) for j in range(n)]
        return IntMatrix.from_rows([list(r) for r in zip(*cols)] if n else [], n)

    def v_matrix(self) -> IntMatrix:
        if self.col_ops is None:
            raise ValueError("column operations were not logged")
        n = self.ncols
        V = [[int(i == j) for j in range(n)] for i in range(n)]
        for _, i, j, s, t, u, w in self.col_ops:
            for row in V:
                x, y = row[i], row[j]
                row[i], row[j] = s * x + t * y, u * x + w * y
        return IntMatrix.from_rows(V, n)


def smith_normal_form(A: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return ``(D, U, V)`` with ``U @ A @ V == D`` in Smith form."""
    sf = SmithForm(A.to_rows(), A.cols)
    D = [[0] * A.cols for _ in range(A.rows)]
    for i, d in enumerate(sf.diagonal):
        D[i][i] = d
    return IntMatrix.from_rows(D, A.cols), sf.u_matrix(), sf.v_matrix()


def _cokernel(sf: SmithForm) -> tuple[tuple[int, ...], list[list[int]], int]:
    """Invariant factors, generators and free rank of  Z^R / im."""
    R = sf.nrows
    factors, gens = [], []
    for i, d in enumerate(sf.diagonal):
        if d > 1:
            factors.append(d)
            gens.append(sf.apply_u_inverse([int(k == i) for k in range(R)]))
    free = R - sf.rank
    for i in range(sf.rank, R):
        gens.append(sf.apply_u_inverse([int(k == i) for k in range(R)]))
    return tuple(factors), gens, free


def cokernel_structure(A: IntMatrix, ambient_rank: int | None = None) -> AbelianStructure:
    """Structure of Z^ambient_rank modulo the column span of ``A``."""
    if ambient_rank is None:
        ambient_rank = A.rows
    if A.rows != ambient_rank:
        raise DimensionMismatch(f"matrix has {A.rows} rows, ambient rank is {ambient_rank}")
    sf = SmithForm(A.to_rows(), A.cols, log_cols=False)
    factors, gens, free = _cokernel(sf)
    return AbelianStructure(
        factors, tuple(tuple(g) for g in gens), ambient=f"Z^{ambient_rank}", free_rank=free
    )


# ---------------------------------------------------------------------------
# modules over Z/m


def howell_form(rows: Sequence[Sequence[int]], ncols: int, m: int) -> list[list[int]]:
    """Canonical Howell form of the Z/m-row-span of ``rows``."""
    return [list(map(int, r)) for r in _backend.howell_form(rows, ncols, m)]


def howell_coordinates(H: Sequence[Sequence[int]], v: Sequence[int], m: int) -> list[int] | None:
    """Coefficients ``c`` with ``sum c_i H_i == v`` (mod m), or None if v is outside the span."""
    v = [int(x) % m for x in v]
    coeffs = []
    for row in H:
        c = next(j for j, x in enumerate(row) if x)
        a = row[c]
        x = v[c]
        if x % a:
            return None
        q = x // a
        coeffs.append(q)
        if q:
            v = [(y - q * z) % m for y, z in zip(v, row)]
    if any(v):
        return None
    return coeffs


def kernel_mod(A: ModMatrix) -> list[tuple[int, ...]]:
    """Howell-form generators of {x : A x = 0 mod m}."""
    m, n = A.modulus, A.cols
    H = howell_form(A.to_rows(), n, m) if A.rows else []
    h = len(H)
    aug = [[H[i][j] for i in range(h)] + [int(k == j) for k in range(n)] for j in range(n)]
    HA = howell_form(aug, h + n, m)
    return [tuple(row[h:]) for row in HA if not any(row[:h])]


def intersect_mod(U: Sequence[Sequence[int]], V: Sequence[Sequence[int]], n: int, m: int) -> list[list[int]]:
    """Howell form of span(U) ∩ span(V) inside (Z/m)^n."""
    if not U or not V:
        return []
    cols = len(U) + len(V)
    M = [[U[i][r] for i in range(len(U))] + [(-V[j][r]) % m for j in range(len(V))] for r in range(n)]
    ker = kernel_mod(ModMatrix.from_rows(M, m, cols))
    vecs = []
    for kv in ker:
        vecs.append([sum(kv[i] * U[i][r] for i in range(len(U))) % m for r in range(n)])
    return howell_form(vecs, n, m)


class Subquotient:
    """The Z/m-module  span(num) / span(den)  inside (Z/m)^n.

    Besides the invariant factors it keeps what is needed to read off the
    coordinates of any element of span(num) in the cyclic decomposition.
    """

    def __init__(self, num, den, n: int, m: int):
        self.n, self.m = n, m
        H = howell_form(num, n, m) if len(num) else []
        self.basis = H
        k = len(H)
        relations = [[m * int(i == j) for i in range(k)] for j in range(k)]
        if k:
            HT = [[H[i][r] for i in range(k)] for r in range(n)]
            relations += [list(v) for v in kernel_mod(ModMatrix.from_rows(HT, m, k))]
        for d in den:
            c = howell_coordinates(H, d, m) if k else (None if any(x % m for x in d) else [])
            if c is None:
                raise ContainmentViolation(f"denominator generator {list(d)} is not in the numerator span")
            relations.append(c)
        # k x (#relations) integer matrix, relations as columns
        rel_rows = [[rel[i] for rel in relations] for i in range(k)]
        self._smith = SmithForm(rel_rows, len(relations), log_cols=False)
        self._slots = [i for i, d in enumerate(self._smith.diagonal) if d > 1]
        self.invariant_factors = tuple(self._smith.diagonal[i] for i in self._slots)
        gens = []
        for i in self._slots:
            t = self._smith.apply_u_inverse([int(r == i) for r in range(k)])
            gens.append(tuple(sum(t[j] * H[j][r] for j in range(k)) % m for r in range(n)))
        self.generators = gens

    def structure(self) -> AbelianStructure:
        return AbelianStructure(
            self.invariant_factors, tuple(self.generators), ambient=f"(Z/{self.m})^{self.n}"
        )

    def coordinates(self, v: Sequence[int]) -> list[int]:
        """Coordinates of ``v`` (an element of the numerator) on ``generators``."""
        c = howell_coordinates(self.basis, v, self.m) if self.basis else (
            None if any(x % self.m for x in v) else []
        )
        if c is None:
            raise ContainmentViolation("vector is not in the numerator span")
        y = self._smith.apply_u(c)
        return [y[i] % d for i, d in zip(self._slots, self.invariant_factors)]


def subquotient_structure(numerator_gens, denominator_gens, n: int, m: int) -> AbelianStructure:
    """Invariant factors and representatives of span(num)/span(den) in (Z/m)^n."""
    return Subquotient(numerator_gens, denominator_gens, n, m).structure()


def hom_kernel(images: Sequence[Sequence[int]], src_orders: Sequence[int], dst_orders: Sequence[int]):
    """Kernel of a homomorphism  sum Z/src_j -> sum Z/dst_i.

    ``images[j]`` is the image of the j-th source generator in destination
    coordinates.  Returns the kernel as a Subquotient of (Z/M)^k, M the lcm of
    all orders, with generators in source coordinates.
    """
    k = len(src_orders)
    M = lcm(*src_orders, *dst_orders) if (src_orders or dst_orders) else 1
    if k == 0:
        return None
    if M == 1:
        M = 2
    rows = []
    for i, e in enumerate(dst_orders):
        scale = M // e
        rows.append([(scale * images[j][i]) % M for j in range(k)])
    if rows:
        ker = kernel_mod(ModMatrix.from_rows(rows, M, k))
    else:
        ker = [tuple(int(i == j) for i in range(k)) for j in range(k)]
    den = [[(src_orders[j] if i == j else 0) for i in range(k)] for j in range(k)]
    return Subquotient(ker, den, k, M)


# ---------------------------------------------------------------------------
# lattices over Z


def hermite_rows(rows: Sequence[Sequence[int]], ncols: int) -> list[list[int]]:
    """Row Hermite normal form over Z (positive pivots, reduced above)."""
    A = [[int(x) for x in r] for r in rows]
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, len(A)):
            if A[i][c]:
                if piv is None or abs(A[i][c]) < abs(A[piv][c]):
                    piv = i
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        for i in range(r + 1, len(A)):
            b = A[i][c]
            if not b:
                continue
            a = A[r][c]
            ri, rr = A[i], A[r]
            if b % a == 0:
                q = b // a
                A[i] = [y - q * x for x, y in zip(rr, ri)]
            else:
                g, s, t = xgcd(a, b)
                u, v = -b // g, a // g
                A[r] = [s * x + t * y for x, y in zip(rr, ri)]
                A[i] = [u * x + v * y for x, y in zip(rr, ri)]
        if A[r][c] < 0:
            A[r] = [-x for x in A[r]]
        a = A[r][c]
        for i in range(r):
            q = A[i][c] // a
            if q:
                A[i] = [y - q * x for x, y in zip(A[r], A[i])]
        r += 1
    return A[:r]


def hermite_coordinates(H: Sequence[Sequence[int]], v: Sequence[int]) -> list[int] | None:
    """Integer coefficients of ``v`` on the rows of a Hermite basis, or None."""
    v = [int(x) for x in v]
    coeffs = []
    for row in H:
        c = next(j for j, x in enumerate(row) if x)
        q, rem = divmod(v[c], row[c])
        if rem:
            return None
        coeffs.append(q)
        if q:
            v = [y - q * z for y, z in zip(v, row)]
    return None if any(v) else coeffs


def integer_kernel(rows: Sequence[Sequence[int]], ncols: int) -> list[list[int]]:
    """Hermite basis of {x in Z^ncols : A x = 0}."""
    r = len(rows)
    aug = [[rows[i][j] for i in range(r)] + [int(k == j) for k in range(ncols)] for j in range(ncols)]
    H = hermite_rows(aug, r + ncols)
    return [row[r:] for row in H if not any(row[:r])]


def rank_mod_p(rows: Sequence[Sequence[int]], ncols: int, p: int) -> int:
    if not rows:
        return 0
    return len(howell_form(rows, ncols, p))


def rref_mod_p(rows: Sequence[Sequence[int]], ncols: int, p: int) -> list[list[int]]:
    """Reduced row echelon form over F_p (the Howell form for a prime modulus)."""
    if not rows:
        return []
    return howell_form(rows, ncols, p)
