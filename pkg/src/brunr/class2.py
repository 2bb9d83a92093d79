"""Closed-form obstruction for class-2 central extensions of (Z/p)^d.

A datum is the commutator pairing  lambda: Lambda^2 Gamma -> C  of an
extension 1 -> C -> G -> Gamma -> 1 with Gamma = (Z/p)^d and C = (Z/p)^r.
With S = ker(lambda) and S_bic the span of the decomposable tensors
(u ^ v) that lie in S, the obstruction group is the dual of S / S_bic;
being elementary abelian it has the same invariant factors as S / S_bic.

Wedge coordinates are indexed by pairs (i, j), i < j, in lexicographic order;
for d = 4 that is (12, 13, 14, 23, 24, 34).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations, product

from brunr import _backend
from brunr.errors import (
    BudgetExceeded,
    DimensionMismatch,
    UnsupportedDimension,
    WitnessNotFound,
)
from brunr.exactalg import (
    AbelianStructure,
    ModMatrix,
    is_prime,
    kernel_mod,
    rank_mod_p,
    rref_mod_p,
)
from brunr.groups import wedge_pairs

DEFAULT_SBIC_BUDGET = 10**7

LABELS = (
    "point-off-Q",
    "point-on-Q",
    "line-secant",
    "line-tangent",
    "line-external",
    "line-contained",
    "plane-smooth-conic",
    "plane-two-lines",
    "plane-double-line",
    "plane-point",
    "plane-contained",
    "higher-dim",
)
OBSTRUCTED_LABELS = frozenset(
    {"point-off-Q", "line-tangent", "line-external", "plane-double-line", "plane-point"}
)
# example number -> (label, dim S)
CASES = {
    1: ("point-off-Q", 1),
    2: ("line-tangent", 2),
    3: ("line-external", 2),
    4: ("plane-double-line", 3),
    5: ("plane-point", 3),
}


def wedge_dim(d: int) -> int:
    return d * (d - 1) // 2


@dataclass(frozen=True)
class CentralExtensionData:
    p: int
    gamma_rank: int
    c_rank: int
    lambda_rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"p = {self.p} is not prime")
        D = wedge_dim(self.gamma_rank)
        rows = tuple(tuple(int(x) % self.p for x in r) for r in self.lambda_rows)
        if len(rows) != self.c_rank or any(len(r) != D for r in rows):
            raise DimensionMismatch(f"lambda must be {self.c_rank} x {D}")
        object.__setattr__(self, "lambda_rows", rows)

    @classmethod
    def from_lambda(cls, p, d, rows):
        rows = [list(r) for r in rows]
        return cls(p, d, len(rows), tuple(tuple(r) for r in rows))

    @property
    def c(self) -> AbelianStructure:
        return AbelianStructure((self.p,) * self.c_rank)

    @property
    def lambda_(self) -> ModMatrix:
        return ModMatrix.from_rows(self.lambda_rows, self.p, wedge_dim(self.gamma_rank))

    @property
    def group_order(self) -> int:
        return self.p ** (self.gamma_rank + self.c_rank)

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "gamma_rank": self.gamma_rank,
            "c_rank": self.c_rank,
            "lambda": [list(r) for r in self.lambda_rows],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "CentralExtensionData":
        rows = obj["lambda"]
        return cls(int(obj["p"]), int(obj["gamma_rank"]), int(obj.get("c_rank", len(rows))),
                   tuple(tuple(int(x) for x in r) for r in rows))


@dataclass(frozen=True)
class Wedge2:
    p: int
    d: int
    coords: tuple[int, ...]

    def __post_init__(self):
        if len(self.coords) != wedge_dim(self.d):
            raise DimensionMismatch(f"expected {wedge_dim(self.d)} coordinates")
        object.__setattr__(self, "coords", tuple(int(x) % self.p for x in self.coords))


@dataclass(frozen=True)
class SubspaceClassification:
    dim: int  # projective dimension of P(S)
    label: str
    obstructed: bool
    predicted_group_order: int
    points_on_q: int = 0
    b_factors: tuple[int, ...] = field(default=())

    def to_json(self):
        return {
            "projective_dim": self.dim,
            "label": self.label,
            "obstructed": self.obstructed,
            "predicted_group_order": self.predicted_group_order,
            "points_on_Q": self.points_on_q,
            "B_G": list(self.b_factors),
        }


# ---------------------------------------------------------------------------
# exterior square


def wedge(u, v, p) -> Wedge2:
    if len(u) != len(v):
        raise DimensionMismatch("wedge of vectors of different lengths")
    d = len(u)
    return Wedge2(p, d, tuple((u[i] * v[j] - u[j] * v[i]) % p for i, j in wedge_pairs(d)))


def form_matrix(w: Wedge2) -> list[list[int]]:
    """The alternating d x d matrix with (i, j) entry w_ij."""
    d, p = w.d, w.p
    M = [[0] * d for _ in range(d)]
    for (i, j), x in zip(wedge_pairs(d), w.coords):
        M[i][j] = x % p
        M[j][i] = (-x) % p
    return M


def rank_of_form(w: Wedge2) -> int:
    return rank_mod_p(form_matrix(w), w.d, w.p)


def plucker_quadric(w: Wedge2) -> int:
    """w12 w34 - w13 w24 + w14 w23 over F_p (d = 4 only)."""
    if w.d != 4:
        raise DimensionMismatch("the Pluecker quadric is defined for d = 4")
    w12, w13, w14, w23, w24, w34 = w.coords
    return (w12 * w34 - w13 * w24 + w14 * w23) % w.p


def _pf(M, idx, p):
    if not idx:
        return 1
    i = idx[0]
    total = 0
    for k in range(1, len(idx)):
        j = idx[k]
        if M[i][j]:
            rest = idx[1:k] + idx[k + 1 :]
            sign = 1 if k % 2 == 1 else -1
            total += sign * M[i][j] * _pf(M, rest, p)
    return total % p


def pfaffian(w: Wedge2) -> int:
    """Pfaffian of the associated alternating matrix, expanded along the first row."""
    if w.d % 2:
        raise DimensionMismatch("the Pfaffian needs an even number of rows")
    return _pf(form_matrix(w), tuple(range(w.d)), w.p)


def is_decomposable(coords, d, p) -> bool:
    """rank <= 2, via the 4x4 Pfaffian (Pluecker) relations."""
    return _backend._purepy.is_decomposable(coords, _quads(d), p)


@lru_cache(maxsize=None)
def _quads(d):
    return tuple(_backend._purepy.plucker_quads(d))


# ---------------------------------------------------------------------------
# S_G, S_bic, B_G


def s_group(ext: CentralExtensionData) -> list[list[int]]:
    """Reduced echelon basis of S_G = ker(lambda) inside Lambda^2 Gamma."""
    D = wedge_dim(ext.gamma_rank)
    if D == 0:
        return []
    if ext.c_rank == 0:
        return [[int(i == j) for j in range(D)] for i in range(D)]
    return [list(v) for v in kernel_mod(ext.lambda_)]


def s_bic(S, d, p, budget=DEFAULT_SBIC_BUDGET, backend=None) -> list[list[int]]:
    """Reduced echelon basis of the span of the decomposables inside span(S)."""
    S = rref_mod_p(S, wedge_dim(d), p) if S else []
    k = len(S)
    if k == 0:
        return []
    if p**k > budget:
        raise BudgetExceeded("s_bic enumeration", p**k, budget, "shrink p or dim S")
    rows, _ = _backend.decomposable_span(S, d, p, backend=backend)
    return rref_mod_p(rows, wedge_dim(d), p) if rows else []


def _complement(S, T, D, p):
    """Rows of S extending a basis of span(T) to a basis of span(S)."""
    out, cur = [], [list(t) for t in T]
    r = rank_mod_p(cur, D, p)
    for v in S:
        if rank_mod_p(cur + [list(v)], D, p) > r:
            cur.append(list(v))
            out.append(tuple(v))
            r += 1
    return out


def bogomolov_class2(ext: CentralExtensionData, budget=DEFAULT_SBIC_BUDGET) -> AbelianStructure:
    """Invariant factors of S_G / S_bic, with generators of that quotient."""
    d, p = ext.gamma_rank, ext.p
    S = s_group(ext)
    Sb = s_bic(S, d, p, budget=budget)
    gens = _complement(S, Sb, wedge_dim(d), p)
    return AbelianStructure((p,) * len(gens), tuple(gens), ambient=f"Lambda^2 (F_{p})^{d}")


def annihilator(S, D, p) -> list[list[int]]:
    """Echelon basis of {y : y.s = 0 for all s in S}."""
    if not S:
        return [[int(i == j) for j in range(D)] for i in range(D)]
    return [list(v) for v in kernel_mod(ModMatrix.from_rows(S, p, D))]


def extension_for_subspace(S, d, p) -> CentralExtensionData:
    """The datum with C = Lambda^2 Gamma / S and lambda the quotient map."""
    D = wedge_dim(d)
    S = rref_mod_p(S, D, p) if S else []
    lam = annihilator(S, D, p)
    return CentralExtensionData.from_lambda(p, d, lam)


# ---------------------------------------------------------------------------
# the d = 4 geometry


def _span_vectors(S, p, projective):
    k = len(S)
    D = len(S[0])
    for c in product(range(p), repeat=k):
        if not any(c):
            continue
        if projective and c[next(i for i, x in enumerate(c) if x)] != 1:
            continue
        yield tuple(sum(ci * s[j] for ci, s in zip(c, S)) % p for j in range(D))


def quadric_points(S, p):
    """Projective points of P(span S) on the Pluecker quadric (d = 4)."""
    return [w for w in _span_vectors(S, p, True) if plucker_quadric(Wedge2(p, 4, w)) == 0]


def classify_subspace(S, p, d=4, budget=DEFAULT_SBIC_BUDGET) -> SubspaceClassification:
    if d != 4:
        raise UnsupportedDimension("classification is implemented for Gamma = (Z/p)^4")
    S = rref_mod_p(S, 6, p) if S else []
    k = len(S)
    if k not in (1, 2, 3):
        raise UnsupportedDimension(f"dim S = {k}; classification covers dims 1, 2, 3")
    pts = quadric_points(S, p)
    n = len(pts)
    if k == 1:
        label = "point-on-Q" if n else "point-off-Q"
    elif k == 2:
        label = {0: "line-external", 1: "line-tangent", 2: "line-secant"}.get(n)
        if n == p + 1:
            label = "line-contained"
    else:
        if n == p * p + p + 1:
            label = "plane-contained"
        elif n == 1:
            label = "plane-point"
        elif n == 2 * p + 1:
            label = "plane-two-lines"
        elif n == p + 1:
            collinear = rank_mod_p([list(x) for x in pts], 6, p) == 2
            label = "plane-double-line" if collinear else "plane-smooth-conic"
        else:
            label = None
    if label is None:  # pragma: no cover - a plane section of Q is one of the above
        raise RuntimeError(f"unexpected point count {n} for dim {k}")
    Sb = s_bic(S, 4, p, budget=budget)
    return SubspaceClassification(
        dim=k - 1,
        label=label,
        obstructed=len(Sb) != k,
        predicted_group_order=p ** (4 + 6 - k),
        points_on_q=n,
        b_factors=(p,) * (k - len(Sb)),
    )


def rref_subspaces(n, k, p):
    """All k-dim subspaces of F_p^n as reduced echelon bases, in lexicographic order.

    Order: pivot tuples lexicographically, then the free entries (row-major,
    left to right) as a base-p counter with the first entry most significant.
    """
    for pivots in combinations(range(n), k):
        free = [(i, j) for i, piv in enumerate(pivots) for j in range(piv + 1, n) if j not in pivots]
        for vals in product(range(p), repeat=len(free)):
            rows = [[0] * n for _ in range(k)]
            for i, piv in enumerate(pivots):
                rows[i][piv] = 1
            for (i, j), v in zip(free, vals):
                rows[i][j] = v
            yield rows


def example_case(case: int, p: int) -> CentralExtensionData:
    """First subspace (in ``rref_subspaces`` order) realising example ``case``."""
    if case not in CASES:
        raise ValueError("case must be 1..5")
    if not is_prime(p):
        raise ValueError(f"p = {p} is not prime")
    label, k = CASES[case]
    for S in rref_subspaces(6, k, p):
        if _label_only(S, p, k) == label:
            return extension_for_subspace(S, 4, p)
    raise WitnessNotFound(f"no subspace of type {label} over F_{p}")


def _label_only(S, p, k):
    # cheap pre-filter on the point count before the full classification
    n = len(quadric_points(S, p))
    if k == 1:
        return "point-on-Q" if n else "point-off-Q"
    if k == 2:
        return {0: "line-external", 1: "line-tangent"}.get(n, "other")
    if n == 1:
        return "plane-point"
    if n == p + 1:
        return classify_subspace(S, p).label
    return "other"


def pfaffian_family_subspace(m: int, p: int) -> tuple[list[list[int]], list[list[int]]]:
    """Basis of the block family and of its hyperplane {lambda = 0}.

    The family is the alternating 2m x 2m matrices [[0, M], [-M^T, 0]] with M
    upper triangular with constant diagonal lambda.
    """
    d = 2 * m
    pairs = {pq: i for i, pq in enumerate(wedge_pairs(d))}
    D = wedge_dim(d)
    diag = [0] * D
    for i in range(m):
        diag[pairs[i, m + i]] = 1
    upper = []
    for i in range(m):
        for j in range(i + 1, m):
            v = [0] * D
            v[pairs[i, m + j]] = 1
            upper.append(v)
    return [diag] + upper, upper


def pfaffian_family(m: int, p: int, budget=DEFAULT_SBIC_BUDGET) -> CentralExtensionData:
    if m < 1:
        raise ValueError("m must be positive")
    S, _ = pfaffian_family_subspace(m, p)
    if p ** len(S) > budget:
        raise BudgetExceeded("pfaffian family", p ** len(S), budget)
    return extension_for_subspace(S, 2 * m, p)
