"""Second cohomology of small groups with trivial coefficients, by brute force.

Cochains are normalised (they vanish when an argument is the identity).  A
normalised 2-cocycle is determined by its values f(g, x) on a generating set
X: the cocycle identity with k = x gives

    f(g, h x) = f(g, h) + f(g h, x) - f(h, x),

so every f(g, h) is a fixed linear form in the unknowns u(g, x), obtained by
walking a spanning tree of the Cayley graph.  Conversely, if these identities
hold for all g, h and every generator x, the full identity holds for all
triples (induction on the word length of the third argument).  The linear
system solved below is therefore equivalent to the cocycle identity on all
|G|^3 triples while having only (|G|-1)|X| unknowns.

Q/Z coefficients.  With N a multiple of |G|, the sequence
0 -> Z/N -> Q/Z --N--> Q/Z -> 0 gives

    Hom(G, Q/Z) --delta--> H^2(G, Z/N) -> H^2(G, Q/Z) --N--> H^2(G, Q/Z).

Multiplication by N kills H^2(G, Q/Z) (it is |G|-torsion) and every
character of G takes values in (1/N)Z/Z, so

    H^2(G, Q/Z) = H^2(G, Z/N) / delta(Hom(G, Z/N)),

where for a character with integer lift a(g) in [0, N) the class delta(chi)
is represented by (g, h) -> (a(g) + a(h) - a(gh)) / N  mod N.  Here Z/N sits
in Q/Z as (1/N)Z/Z.  Subgroups A of G are handled with the same N, so
restriction is literally restriction of the table.
"""

from __future__ import annotations

import numpy as np

from brunr.errors import BudgetExceeded
from brunr.exactalg import (
    AbelianStructure,
    ModMatrix,
    Subquotient,
    intersect_mod,
    kernel_mod,
)
from brunr.groups import (
    CayleyGroup,
    Subgroup,
    abelian_subgroups,
    as_group,
    bicyclic_subgroups,
    from_abelian,
    generating_set,
)

DEFAULT_H2_BUDGET = 48
DEFAULT_B0_BUDGET = 32


def _check_budget(what, n, limit):
    if limit is not None and n > limit:
        raise BudgetExceeded(what, n, limit, "raise the budget or pass slow=True")


class CochainContext:
    """Normalised cochains of G with values in Z/N, in tree coordinates."""

    def __init__(self, G: CayleyGroup, N: int):
        self.G, self.N = G, N
        n = G.order
        e = G.identity
        T = G.table
        self.gens = generating_set(G)
        k = len(self.gens)
        self.nonid = [g for g in range(n) if g != e]
        self.pos = {g: i for i, g in enumerate(self.nonid)}
        self.nunk = (n - 1) * k
        # unknown index of u(a, x_i); -1 for a = e
        uidx = np.full((n, max(k, 1)), -1, dtype=np.int64)
        for g, i in self.pos.items():
            uidx[g, :k] = i * k + np.arange(k)
        self._uidx = uidx
        # BFS tree: parent[h] = (h', i) with h = h' * x_i
        parent = {e: None}
        order = [e]
        for h in order:
            for i, x in enumerate(self.gens):
                y = int(T[h, x])
                if y not in parent:
                    parent[y] = (h, i)
                    order.append(y)
        self._parent = parent
        L = np.zeros((n, n, max(self.nunk, 1)), dtype=np.int64)
        rows = np.arange(n)
        for h in order[1:]:
            hp, i = parent[h]
            L[:, h, :] = L[:, hp, :]
            idx = uidx[T[:, hp], i]
            ok = idx >= 0
            L[rows[ok], h, idx[ok]] += 1
            j = uidx[hp, i]
            if j >= 0:
                L[:, h, j] -= 1
        self.L = L % N if N else L

    # -- conversions -------------------------------------------------------

    def table(self, u) -> np.ndarray:
        """Full cocycle table from tree coordinates."""
        u = np.asarray(u, dtype=np.int64)
        if self.nunk == 0:
            return np.zeros((self.G.order, self.G.order), dtype=np.int64)
        return (self.L[:, :, : self.nunk] @ u) % self.N

    def coords(self, f) -> list[int]:
        f = np.asarray(f)
        k = len(self.gens)
        out = [0] * self.nunk
        for g, i in self.pos.items():
            for j, x in enumerate(self.gens):
                out[i * k + j] = int(f[g, x]) % self.N
        return out

    # -- linear systems ----------------------------------------------------

    def cocycle_equations(self) -> np.ndarray:
        G, T, N = self.G, self.G.table, self.N
        n, U = G.order, self.nunk
        L = self.L[:, :, :U]
        blocks = []
        rows_g = np.array(self.nonid, dtype=np.int64)
        for i, x in enumerate(self.gens):
            hx = T[:, x]
            A = L[rows_g][:, hx, :] - L[rows_g]  # [g, h] -> f(g, hx) - f(g, h)
            gh = T[np.ix_(rows_g, np.arange(n))]
            idx = self._uidx[gh, i]
            gi, hi = np.nonzero(idx >= 0)
            np.subtract.at(A, (gi, hi, idx[gi, hi]), 1)
            hidx = self._uidx[:, i]
            ok = np.nonzero(hidx >= 0)[0]
            A[:, ok, hidx[ok]] += 1
            blocks.append((A % N).reshape(-1, U))
        E = np.concatenate(blocks) if blocks else np.zeros((0, U), dtype=np.int64)
        E = E[E.any(axis=1)]
        if len(E):
            E = np.unique(E, axis=0)
        return E

    def cocycles(self) -> list[list[int]]:
        if self.nunk == 0:
            return []
        E = self.cocycle_equations()
        if len(E) == 0:
            return [[int(i == j) for j in range(self.nunk)] for i in range(self.nunk)]
        return [list(v) for v in kernel_mod(ModMatrix(self.N, E.shape[0], E.shape[1], tuple(E.ravel().tolist())))]

    def coboundaries(self) -> list[list[int]]:
        G, T = self.G, self.G.table
        out = []
        for a in self.nonid:
            c = np.zeros(G.order, dtype=np.int64)
            c[a] = 1
            out.append(self.coords(coboundary_table(G, c, self.N)))
        return out

    def connecting_images(self) -> list[list[int]]:
        return [self.coords(connecting_table(self.G, a, self.N)) for a in characters(self.G, self.N)]


def coboundary_table(G: CayleyGroup, c, N) -> np.ndarray:
    """(delta c)(g, h) = c(g) + c(h) - c(gh)."""
    c = np.asarray(c, dtype=np.int64)
    return (c[:, None] + c[None, :] - c[G.table]) % N


def connecting_table(G: CayleyGroup, a, N) -> np.ndarray:
    """delta(chi) for the character with integer lift ``a`` (values in [0, N))."""
    a = np.asarray(a, dtype=np.int64) % N
    s = a[:, None] + a[None, :] - a[G.table]
    assert not (s % N).any(), "not a character"
    return (s // N) % N


def characters(G: CayleyGroup, N: int) -> list[list[int]]:
    """Generators of Hom(G, Z/N), as value lists indexed by element."""
    n, T, e = G.order, G.table, G.identity
    nonid = [g for g in range(n) if g != e]
    if not nonid:
        return []
    pos = {g: i for i, g in enumerate(nonid)}
    rows = []
    for g in range(n):
        for x in generating_set(G):
            row = [0] * len(nonid)
            gx = int(T[g, x])
            if gx != e:
                row[pos[gx]] += 1
            if g != e:
                row[pos[g]] -= 1
            row[pos[x]] -= 1
            if any(v % N for v in row):
                rows.append(row)
    if rows:
        ker = kernel_mod(ModMatrix.from_rows(rows, N, len(nonid)))
    else:
        ker = [tuple(int(i == j) for j in range(len(nonid))) for i in range(len(nonid))]
    out = []
    for v in ker:
        a = [0] * n
        for g, i in pos.items():
            a[g] = int(v[i]) % N
        out.append(a)
    return out


def is_cocycle(G: CayleyGroup, f, N) -> bool:
    """Check f(g,h) + f(gh,k) = f(h,k) + f(g,hk) on all |G|^3 triples."""
    f = np.asarray(f, dtype=np.int64)
    T = G.table
    for g in range(G.order):
        lhs = f[g][:, None] + f[T[g]]  # [h, k]: f(g,h) + f(gh,k)
        rhs = f + f[g][T]  # f(h,k) + f(g,hk)
        if ((lhs - rhs) % N).any():
            return False
    return True


class CocycleClassGroup:
    """Z^2 / (B^2 [+ delta Hom]) with canonical representative cocycles."""

    def __init__(self, group, modulus, structure, representatives, ctx, sub, kind):
        self.group = group
        self.modulus = modulus
        self.structure = structure
        self.representatives = representatives
        self._ctx = ctx
        self._sub = sub
        self.kind = kind

    @property
    def invariant_factors(self):
        return self.structure.invariant_factors

    def coordinates(self, f) -> list[int]:
        """Coordinates of the class of cocycle table ``f`` on the representatives."""
        if self._sub is None:
            return []
        return self._sub.coordinates(self._ctx.coords(f))

    def to_json(self, with_tables=False):
        out = {"kind": self.kind, "modulus": self.modulus, **self.structure.to_json()}
        out.pop("generators", None)
        if with_tables:
            out["representatives"] = [np.asarray(r).tolist() for r in self.representatives]
        return out


def _class_group(G, N, qz):
    ctx = CochainContext(G, N)
    kind = "H2(G,Q/Z)" if qz else f"H2(G,Z/{N})"
    if ctx.nunk == 0:
        return CocycleClassGroup(G, N, AbelianStructure((), (), "trivial"), [], ctx, None, kind)
    Z = ctx.cocycles()
    den = ctx.coboundaries()
    if qz:
        den += ctx.connecting_images()
    sub = Subquotient(Z, den, ctx.nunk, N)
    reps = [ctx.table(g) for g in sub.generators]
    st = AbelianStructure(sub.invariant_factors, tuple(tuple(r.ravel().tolist()) for r in reps),
                          ambient=f"normalised 2-cochains G x G -> Z/{N}")
    return CocycleClassGroup(G, N, st, reps, ctx, sub, kind)


def h2_trivial_mod(G: CayleyGroup, m: int, budget=DEFAULT_H2_BUDGET) -> CocycleClassGroup:
    """H^2(G, Z/m) with trivial action."""
    _check_budget("h2_trivial_mod |G|", G.order, budget)
    if m < 2:
        raise ValueError("modulus must be at least 2")
    return _class_group(G, m, qz=False)


def h2_qz(G: CayleyGroup, modulus=None, budget=DEFAULT_H2_BUDGET) -> CocycleClassGroup:
    """H^2(G, Q/Z), realised inside H^2(G, Z/N) with N = modulus or |G|."""
    _check_budget("h2_qz |G|", G.order, budget)
    N = modulus or G.order
    if N % G.order:
        raise ValueError("the modulus must be a multiple of |G|")
    if G.order == 1:
        return CocycleClassGroup(G, N, AbelianStructure((), (), "trivial"), [], None, None, "H2(G,Q/Z)")
    return _class_group(G, N, qz=True)


class RestrictedClass:
    def __init__(self, subgroup, table, coordinates, target):
        self.subgroup = subgroup
        self.table = table
        self.coordinates = coordinates
        self.target = target

    @property
    def is_zero(self):
        return all(c == 0 for c in self.coordinates)


def restrict_class(G: CayleyGroup, A: Subgroup, f, modulus=None, budget=DEFAULT_H2_BUDGET) -> RestrictedClass:
    """Restrict a Q/Z-cocycle (values in (1/N)Z/Z) of G to A and read its class in H^2(A, Q/Z)."""
    if not isinstance(A, Subgroup):
        A = Subgroup(G, A)  # validates, raising NotASubgroup
    if A.parent is not G:
        A = Subgroup(G, A.elements)
    N = modulus or G.order
    Ag, emb = as_group(A)
    E = np.array(emb, dtype=np.int64)
    fA = np.asarray(f, dtype=np.int64)[np.ix_(E, E)] % N
    target = h2_qz(Ag, modulus=N, budget=budget)
    return RestrictedClass(A, fA, target.coordinates(fA), target)


def _restriction_kernel(G, H, A, N):
    """t in (Z/N)^k with sum t_j f_j|_A trivial in H^2(A, Q/Z)."""
    k = len(H.representatives)
    Ag, emb = as_group(A)
    E = np.array(emb, dtype=np.int64)
    m = Ag.order
    if m == 1:
        return [[int(i == j) for j in range(k)] for i in range(k)]
    nonid = np.array([i for i in range(m) if i != Ag.identity], dtype=np.int64)
    sel = np.ix_(nonid, nonid)
    cols = [np.asarray(f)[np.ix_(E, E)][sel].ravel() % N for f in H.representatives]
    for a in nonid:
        c = np.zeros(m, dtype=np.int64)
        c[a] = 1
        cols.append(coboundary_table(Ag, c, N)[sel].ravel())
    for a in characters(Ag, N):
        cols.append(connecting_table(Ag, a, N)[sel].ravel())
    M = np.stack(cols, axis=1)
    ker = kernel_mod(ModMatrix(N, M.shape[0], M.shape[1], tuple(M.ravel().tolist())))
    return [list(v[:k]) for v in ker if any(v[:k])]


def family_subgroups(G: CayleyGroup, family: str) -> list[Subgroup]:
    if family == "bicyclic":
        return bicyclic_subgroups(G)
    if family == "abelian":
        return abelian_subgroups(G)
    raise ValueError(f"unknown family {family!r}")


def kernel_of_restrictions(G: CayleyGroup, subgroups, budget=DEFAULT_H2_BUDGET) -> AbelianStructure:
    """ker[H^2(G, Q/Z) -> prod_A H^2(A, Q/Z)] over an explicit list of subgroups."""
    N = G.order
    H = h2_qz(G, budget=budget)
    k = len(H.representatives)
    if k == 0:
        return AbelianStructure((), (), ambient="H2(G,Q/Z)")
    K = [[int(i == j) for j in range(k)] for i in range(k)]
    orders = H.invariant_factors
    for A in subgroups:
        KA = _restriction_kernel(G, H, A, N)
        K = intersect_mod(K, KA, k, N) if KA else []
        if not K:
            return AbelianStructure((), (), ambient="H2(G,Q/Z)")
    den = [[orders[j] * int(i == j) for i in range(k)] for j in range(k)]
    sub = Subquotient(K, den, k, N)
    gens = []
    for t in sub.generators:
        f = sum(int(c) * np.asarray(r) for c, r in zip(t, H.representatives)) % N
        gens.append(tuple(f.ravel().tolist()))
    return AbelianStructure(sub.invariant_factors, tuple(gens),
                            ambient=f"normalised 2-cochains G x G -> Z/{N} = (1/{N})Z/Z")


def b0(G: CayleyGroup, family: str = "bicyclic", budget=DEFAULT_B0_BUDGET) -> AbelianStructure:
    """ker[H^2(G, Q/Z) -> prod_A H^2(A, Q/Z)] over the bicyclic (or all abelian) subgroups."""
    _check_budget("b0 |G|", G.order, budget)
    return kernel_of_restrictions(G, family_subgroups(G, family), budget=None)


def commutator_form_kernel(G: CayleyGroup, budget=DEFAULT_B0_BUDGET) -> AbelianStructure:
    """Cross-check for b0: classes whose cocycles are symmetric on every commuting pair.

    For abelian A, H^2(A, Q/Z) -> Hom(Lambda^2 A, Q/Z), f -> f(x,y) - f(y,x) is
    injective, so a class dies on all abelian subgroups iff this form vanishes
    on commuting pairs.
    """
    _check_budget("b0 |G|", G.order, budget)
    N = G.order
    H = h2_qz(G, budget=None)
    k = len(H.representatives)
    if k == 0:
        return AbelianStructure(())
    T = G.table
    a_idx, b_idx = np.nonzero(T == T.T)
    rows = []
    for j in range(k):
        f = np.asarray(H.representatives[j])
        rows.append(((f[a_idx, b_idx] - f[b_idx, a_idx]) % N).tolist())
    M = [list(r) for r in zip(*rows)]
    M = [r for r in M if any(r)]
    if M:
        ker = kernel_mod(ModMatrix.from_rows(M, N, k))
    else:
        ker = [tuple(int(i == j) for j in range(k)) for i in range(k)]
    den = [[H.invariant_factors[j] * int(i == j) for i in range(k)] for j in range(k)]
    return Subquotient(ker, den, k, N).structure() if ker else AbelianStructure(())


def h2_abelian_via_wedge(p: int, d: int) -> AbelianStructure:
    """H^2((Z/p)^d, Q/Z) = Hom(Lambda^2, Q/Z) = (Z/p)^{d(d-1)/2}.

    Generators are the bilinear cocycles (g, h) -> g_i h_j / p, i < j, written
    over Z/N with N = p^d (so 1/p is N/p), on the group ``from_abelian([p]*d)``.
    """
    D = d * (d - 1) // 2
    if d == 0:
        return AbelianStructure(())
    G = from_abelian([p] * d)
    N = p**d
    X = np.array(G.labels, dtype=np.int64).reshape(G.order, d)
    gens = []
    for i in range(d):
        for j in range(i + 1, d):
            f = ((N // p) * np.outer(X[:, i], X[:, j])) % N
            gens.append(tuple(f.ravel().tolist()))
    return AbelianStructure((p,) * D, tuple(gens), ambient=f"2-cochains of (Z/{p})^{d} -> Z/{N}")
