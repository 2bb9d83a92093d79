"""G-lattices, Tate H^0, H^2(G, L) and the multiplicative-invariant obstruction.

Action convention: ``action[g]`` is an integer matrix acting on column
vectors, and ``action[g] @ action[h] == action[g*h]``.  Permutation lattices
send the basis vector e_x to e_{g x}.

H^2(G, L) is computed on normalised cochains in the same tree coordinates as
:mod:`brunr.cohomology`: a normalised 2-cocycle is determined by the values
u(g, x) = f(g, x) for g != e and x in a generating set, through

    f(g, h x) = f(g, h) + f(g h, x) - g.f(h, x).

Because H^2(G, L) is finite, the cocycles (a saturated sublattice, being a
kernel) are exactly the saturation of the coboundaries.  Hence H^2(G, L) is
the torsion subgroup of Z^{(|G|-1)|X|rank} / delta(C^1), read off from one
Smith normal form, without ever writing down the cocycle equations.

Shifted route for the standard kernel lattice M = ker(Z[G x G] -> Z[G]).
The image of pi is the augmentation ideal I, so there are short exact
sequences 0 -> M -> Z[G x G] -> I -> 0 and 0 -> I -> Z[G] -> Z -> 0.  The
pair lattice and Z[G] are free over every subgroup A of G (diagonal
translation on G x G has no fixed points), so dimension shifting gives
H^2(A, M) = H^1(A, I) = H^0^(A, Z) = Z/|A| naturally in A.  Restriction from
G to A on H^0^(-, Z) = Z/|-| is the reduction Z/|G| -> Z/|A|, so the kernel
of all restrictions to bicyclic subgroups is lcm(|A|) Z/|G|.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from brunr.errors import BudgetExceeded, InvalidLattice
from brunr.exactalg import (
    AbelianStructure,
    IntMatrix,
    SmithForm,
    cokernel_structure,
    hermite_coordinates,
    hom_kernel,
    integer_kernel,
    lcm,
)
from brunr.groups import CayleyGroup, Subgroup, as_group, bicyclic_subgroups, generating_set

DEFAULT_DIRECT_BUDGET = 4096  # |G|^2 * rank
DEFAULT_RANK_BUDGET = 256  # |G|^2 for the standard kernel lattice


@dataclass(eq=False)
class GLattice:
    """A Z-free module of finite rank with a G-action by integer matrices."""

    group: CayleyGroup
    rank: int
    action: np.ndarray  # shape (|G|, rank, rank)
    kind: str = "custom"
    basis: list | None = field(default=None, repr=False)

    def __post_init__(self):
        A = np.asarray(self.action, dtype=np.int64)
        n, r = self.group.order, int(self.rank)
        if A.shape != (n, r, r):
            raise InvalidLattice(f"action must have shape ({n}, {r}, {r}), got {A.shape}")
        A = A.copy()
        A.setflags(write=False)
        self.action = A
        self.rank = r
        if not (A[self.group.identity] == np.eye(r, dtype=np.int64)).all():
            raise InvalidLattice("the identity does not act trivially")
        T = self.group.table
        # A_g A_h == A_{gh}; since A_g^ord(g) = I this also makes every A_g unimodular
        for g in range(n):
            prod_ = np.einsum("ij,hjk->hik", A[g], A)
            bad = np.nonzero((prod_ != A[T[g]]).any(axis=(1, 2)))[0]
            if len(bad):
                raise InvalidLattice(f"action is not a homomorphism at ({g}, {int(bad[0])})")

    def act(self, g, v):
        return self.action[g] @ np.asarray(v, dtype=np.int64)

    def restrict(self, A: Subgroup) -> tuple["GLattice", tuple[int, ...]]:
        Ag, emb = as_group(A)
        return GLattice(Ag, self.rank, self.action[list(emb)], kind=self.kind), emb

    def to_json(self) -> dict:
        return {"kind": self.kind, "rank": self.rank, "action": self.action.tolist()}


def _perm_action(G: CayleyGroup, perms) -> np.ndarray:
    perms = np.asarray(perms, dtype=np.int64)
    n, k = perms.shape
    A = np.zeros((n, k, k), dtype=np.int64)
    g_idx = np.repeat(np.arange(n), k)
    A[g_idx, perms.ravel(), np.tile(np.arange(k), n)] = 1
    return A


def trivial_lattice(G: CayleyGroup, rank: int = 1) -> GLattice:
    A = np.broadcast_to(np.eye(rank, dtype=np.int64), (G.order, rank, rank))
    return GLattice(G, rank, A, kind="trivial")


def regular_lattice(G: CayleyGroup) -> GLattice:
    """Z[G] with left translation."""
    return GLattice(G, G.order, _perm_action(G, G.table), kind="regular")


def pair_lattice(G: CayleyGroup) -> GLattice:
    """Z[G x G] with the diagonal action; basis index a*|G| + b."""
    n, T = G.order, G.table
    perms = (T[:, :, None] * n + T[:, None, :]).reshape(n, n * n)
    return GLattice(G, n * n, _perm_action(G, perms), kind="pair")


def pi_matrix(G: CayleyGroup) -> list[list[int]]:
    """The matrix of Z[G x G] -> Z[G], (a, b) -> a - b."""
    n = G.order
    rows = [[0] * (n * n) for _ in range(n)]
    for a in range(n):
        for b in range(n):
            rows[a][a * n + b] += 1
            rows[b][a * n + b] -= 1
    return rows


def _sublattice(G, ambient: GLattice, basis, kind) -> GLattice:
    """The action of ``ambient`` restricted to an invariant sublattice with Hermite ``basis``."""
    B = np.array(basis, dtype=np.int64).reshape(len(basis), ambient.rank)
    r = len(basis)
    act = np.zeros((G.order, r, r), dtype=np.int64)
    for g in range(G.order):
        images = (ambient.action[g] @ B.T).T
        for i, v in enumerate(images):
            c = hermite_coordinates(basis, v.tolist())
            if c is None:
                raise InvalidLattice("sublattice is not invariant")
            act[g, :, i] = c
    return GLattice(G, r, act, kind=kind, basis=[list(b) for b in basis])


def standard_kernel_lattice(G: CayleyGroup, budget=DEFAULT_RANK_BUDGET) -> GLattice:
    """M = ker(pi: Z[G x G] -> Z[G]), rank |G|^2 - |G| + 1, on its Hermite kernel basis."""
    n = G.order
    if budget is not None and n * n > budget:
        raise BudgetExceeded("standard lattice |G|^2", n * n, budget, "raise the rank budget")
    K = integer_kernel(pi_matrix(G), n * n)
    return _sublattice(G, pair_lattice(G), K, "standard")


def augmentation_lattice(G: CayleyGroup) -> GLattice:
    """The augmentation ideal ker(Z[G] -> Z)."""
    K = integer_kernel([[1] * G.order], G.order)
    return _sublattice(G, regular_lattice(G), K, "augmentation")


def make_lattice(G: CayleyGroup, kind: str, budget=DEFAULT_RANK_BUDGET) -> GLattice:
    makers = {
        "trivial": trivial_lattice,
        "regular": regular_lattice,
        "pair": pair_lattice,
        "augmentation": augmentation_lattice,
        "standard": lambda G: standard_kernel_lattice(G, budget=budget),
    }
    if kind not in makers:
        raise ValueError(f"unknown lattice kind {kind!r}; choose from {sorted(makers)}")
    return makers[kind](G)


def lattice_from_json(G: CayleyGroup, data: dict) -> GLattice:
    return GLattice(G, int(data["rank"]), np.array(data["action"], dtype=np.int64), kind=data.get("kind", "custom"))


# ---------------------------------------------------------------------------
# Tate H^0


def fixed_sublattice(L: GLattice) -> list[list[int]]:
    r = L.rank
    rows = []
    for g in range(L.group.order):
        M = L.action[g] - np.eye(r, dtype=np.int64)
        rows.extend(row for row in M.tolist() if any(row))
    if not rows:
        return [[int(i == j) for j in range(r)] for i in range(r)]
    return integer_kernel(rows, r)


def tate_h0(G: CayleyGroup, L: GLattice) -> AbelianStructure:
    """L^G / N L with N the norm sum_g action[g]."""
    K = fixed_sublattice(L)
    if not K:
        return AbelianStructure((), ambient="L^G = 0")
    Nm = L.action.sum(axis=0)
    cols = []
    for j in range(L.rank):
        c = hermite_coordinates(K, Nm[:, j].tolist())
        assert c is not None, "norm image must be invariant"
        cols.append(c)
    k = len(K)
    M = IntMatrix.from_rows([[cols[j][i] for j in range(L.rank)] for i in range(k)], L.rank)
    st = cokernel_structure(M, k)
    gens = tuple(tuple(int(sum(c * K[i][t] for i, c in enumerate(g))) for t in range(L.rank)) for g in st.generators)
    return AbelianStructure(st.invariant_factors, gens[: len(st.invariant_factors)], ambient=f"Z^{L.rank}")


# ---------------------------------------------------------------------------
# H^2(G, L) directly


class LatticeCochains:
    """Normalised cochains of G with values in L, in tree coordinates."""

    def __init__(self, L: GLattice):
        G = L.group
        self.G, self.L = G, L
        n, r, e, T = G.order, L.rank, G.identity, G.table
        self.gens = generating_set(G)
        k = len(self.gens)
        self.nonid = [g for g in range(n) if g != e]
        self.pos = {g: i for i, g in enumerate(self.nonid)}
        self.nunk = (n - 1) * k * r
        parent = {e: None}
        order = [e]
        for h in order:
            for i, x in enumerate(self.gens):
                y = int(T[h, x])
                if y not in parent:
                    parent[y] = (h, i)
                    order.append(y)
        self.bfs = [(h, parent[h]) for h in order[1:]]

    def _slot(self, g, i):
        k, r = len(self.gens), self.L.rank
        s = (self.pos[g] * k + i) * r
        return slice(s, s + r)

    def coboundary_matrix(self) -> np.ndarray:
        """Columns: delta of the basis 1-cochains c = e_t at a (a != e)."""
        G, L = self.G, self.L
        T, r = G.table, L.rank
        D = np.zeros((self.nunk, (G.order - 1) * r), dtype=np.int64)
        for g in self.nonid:
            for i, x in enumerate(self.gens):
                rows = self._slot(g, i)
                gx = int(T[g, x])
                # (delta c)(g, x) = g.c(x) - c(gx) + c(g)
                if x != G.identity:
                    cx = self.pos[x] * r
                    D[rows, cx : cx + r] += L.action[g]
                if gx != G.identity:
                    c = self.pos[gx] * r
                    D[rows, c : c + r] -= np.eye(r, dtype=np.int64)
                c = self.pos[g] * r
                D[rows, c : c + r] += np.eye(r, dtype=np.int64)
        return D

    def table(self, u) -> np.ndarray:
        """The full cocycle table F[g, h] in Z^rank from tree coordinates."""
        G, L = self.G, self.L
        n, r, T = G.order, L.rank, G.table
        u = np.asarray(u, dtype=object)
        F = np.zeros((n, n, r), dtype=object)
        for g in self.nonid:
            for i, x in enumerate(self.gens):
                F[g, x] = u[self._slot(g, i)]
        act = L.action.astype(object)
        for h, (hp, i) in self.bfs:
            x = self.gens[i]
            if h == x and hp == G.identity:
                continue
            # f(g, hp x) = f(g, hp) + f(g hp, x) - g.f(hp, x)
            gf = np.einsum("gij,j->gi", act, F[hp, x])
            F[:, h] = F[:, hp] + F[T[:, hp], x] - gf
        return F

    def coords(self, F) -> list[int]:
        out = [0] * self.nunk
        for g in self.nonid:
            for i, x in enumerate(self.gens):
                out[self._slot(g, i)] = [int(v) for v in F[g, x]]
        return out


def is_lattice_cocycle(L: GLattice, F) -> bool:
    """g.f(h,k) - f(gh,k) + f(g,hk) - f(g,h) = 0 on all triples."""
    G, T = L.group, L.group.table
    F = np.asarray(F, dtype=object)
    act = L.action.astype(object)
    for g in range(G.order):
        gf = np.einsum("ij,hkj->hki", act[g], F)  # g.f(h, k)
        lhs = gf - F[T[g]] + F[g][T] - F[g][:, None, :]
        if lhs.any():
            return False
    return True


class LatticeCohomology:
    """H^2(G, L) with representatives (direct route) or a shifted-route marker."""

    def __init__(self, structure, representatives, route, ctx=None, smith=None, slots=None):
        self.structure = structure
        self.representatives = representatives
        self.route = route
        self._ctx, self._smith, self._slots = ctx, smith, slots

    @property
    def invariant_factors(self):
        return self.structure.invariant_factors

    def coordinates(self, F) -> list[int]:
        if self.route != "direct":
            raise ValueError("coordinates are only available on the direct route")
        if not self._slots:
            return []
        y = self._smith.apply_u(self._ctx.coords(F))
        return [y[i] % d for i, d in zip(self._slots, self.invariant_factors)]

    def to_json(self) -> dict:
        out = {"route": self.route, "invariant_factors": list(self.invariant_factors)}
        if self.route == "shifted":
            out["identification"] = "H2(G,M) = H0^(G,Z) = Z/|G|; restriction = reduction mod |A|"
        return out


def _direct_budget_check(G, L, budget):
    size = G.order**2 * L.rank
    if budget is not None and size > budget:
        hint = "use the shifted route" if L.kind == "standard" else "raise the budget or pass slow"
        raise BudgetExceeded("direct H2(G,L) |G|^2*rank", size, budget, hint)


def h2_lattice(G: CayleyGroup, L: GLattice, route: str = "auto", budget=DEFAULT_DIRECT_BUDGET) -> LatticeCohomology:
    """H^2(G, L).  ``route`` is 'direct', 'shifted' (standard lattice only) or 'auto'."""
    if L.group is not G and not np.array_equal(L.group.table, G.table):
        raise InvalidLattice("lattice is defined over a different group")
    if route not in ("auto", "direct", "shifted"):
        raise ValueError(f"unknown route {route!r}")
    if route == "shifted" or (
        route == "auto" and L.kind == "standard" and budget is not None and G.order**2 * L.rank > budget
    ):
        if L.kind != "standard":
            raise ValueError("the shifted route applies to the standard kernel lattice only")
        n = G.order
        st = AbelianStructure((n,) if n > 1 else (), ((1,),) if n > 1 else (), ambient=f"Z/{n}")
        return LatticeCohomology(st, None, "shifted")
    _direct_budget_check(G, L, budget)
    ctx = LatticeCochains(L)
    if ctx.nunk == 0:
        return LatticeCohomology(AbelianStructure(()), [], "direct", ctx, None, [])
    D = ctx.coboundary_matrix()
    sf = SmithForm(D.tolist(), D.shape[1], log_cols=False)
    slots = [i for i, d in enumerate(sf.diagonal) if d > 1]
    factors = tuple(sf.diagonal[i] for i in slots)
    reps = []
    for i in slots:
        u = sf.apply_u_inverse([int(k == i) for k in range(ctx.nunk)])
        reps.append(ctx.table(u))
    st = AbelianStructure(factors, tuple(tuple(int(v) for v in F.ravel()) for F in reps),
                          ambient=f"normalised 2-cochains G x G -> Z^{L.rank}")
    return LatticeCohomology(st, reps, "direct", ctx, sf, slots)


# ---------------------------------------------------------------------------
# obstructions


def standard_obstruction(G: CayleyGroup) -> AbelianStructure:
    """Kernel of Z/|G| -> prod Z/|A| over bicyclic A: the subgroup l Z/|G|, l = lcm |A|."""
    n = G.order
    ell = lcm(*[A.order for A in bicyclic_subgroups(G)])
    k = n // ell
    if k == 1:
        return AbelianStructure((), ambient=f"Z/{n}")
    return AbelianStructure((k,), ((ell,),), ambient=f"Z/{n}")


def lattice_restriction_kernel(G: CayleyGroup, L: GLattice, budget=DEFAULT_DIRECT_BUDGET) -> AbelianStructure:
    """ker[H^2(G, L) -> prod_A H^2(A, L)] over bicyclic A, on the direct route."""
    H = h2_lattice(G, L, route="direct", budget=budget)
    k = len(H.representatives)
    if k == 0:
        return AbelianStructure(())
    images = [[] for _ in range(k)]
    dst = []
    for A in bicyclic_subgroups(G):
        LA, emb = L.restrict(A)
        HA = h2_lattice(LA.group, LA, route="direct", budget=budget)
        if not HA.invariant_factors:
            continue
        E = list(emb)
        for j, F in enumerate(H.representatives):
            images[j].extend(HA.coordinates(F[np.ix_(E, E)]))
        dst.extend(HA.invariant_factors)
    sub = hom_kernel(images, H.invariant_factors, dst)
    st = sub.structure()
    gens = []
    for t in st.generators:
        F = sum(int(c) * R for c, R in zip(t, H.representatives))
        gens.append(tuple(int(v) for v in np.asarray(F).ravel()))
    return AbelianStructure(st.invariant_factors, tuple(gens), ambient=H.structure.ambient)


def multiplicative_kernel(G: CayleyGroup, L: GLattice, route: str = "auto", budget=DEFAULT_DIRECT_BUDGET,
                          b0_budget=None) -> AbelianStructure:
    """b0(G) + ker[H^2(G, L) -> prod_A H^2(A, L)] over bicyclic A."""
    from brunr.cohomology import DEFAULT_B0_BUDGET, b0

    part_q = b0(G, "bicyclic", budget=DEFAULT_B0_BUDGET if b0_budget is None else b0_budget)
    size = G.order**2 * L.rank
    shifted = route == "shifted" or (route == "auto" and L.kind == "standard" and budget is not None and size > budget)
    if shifted:
        if L.kind != "standard":
            raise ValueError("the shifted route applies to the standard kernel lattice only")
        part_l = standard_obstruction(G)
    else:
        part_l = lattice_restriction_kernel(G, L, budget=budget)
    return part_q.direct_sum(part_l)
