"""Finite groups as multiplication tables.

Elements are the indices ``0 .. n-1`` of a validated Cayley table, with
``table[g, h] = g*h``.  Constructors translate permutations, abelian
invariants and class-2 central extensions into that form; the rest of the
module enumerates the subgroups the obstruction formulas restrict to.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import product
from math import gcd

import numpy as np

from brunr.errors import (
    InvalidPermutation,
    NotAGroup,
    NotASubgroup,
    OrderBoundExceeded,
)
from brunr.exactalg import factorize

DEFAULT_ORDER_BOUND = 512
DEFAULT_VALIDATION_BOUND = 512


class CayleyGroup:
    """An immutable finite group given by its multiplication table."""

    def __init__(self, table, identity, inverses, element_orders, labels=None, name=""):
        self.table = table
        self.order = int(table.shape[0])
        self.identity = int(identity)
        self.inverses = tuple(int(x) for x in inverses)
        self.element_orders = tuple(int(x) for x in element_orders)
        self.labels = labels
        self.name = name
        self._cyclic = None

    def __repr__(self):
        tag = f" {self.name}" if self.name else ""
        return f"<CayleyGroup{tag} order={self.order}>"

    def __len__(self):
        return self.order

    def mul(self, g, h):
        return int(self.table[g, h])

    def inv(self, g):
        return self.inverses[g]

    def power(self, g, k):
        k %= self.element_orders[g]
        out = self.identity
        for _ in range(k):
            out = int(self.table[out, g])
        return out

    def commutator(self, g, h):
        """[g, h] = g h g^-1 h^-1."""
        T = self.table
        return int(T[T[T[g, h], self.inverses[g]], self.inverses[h]])

    def cyclic_subgroup(self, g):
        """Powers of ``g`` in order e, g, g^2, ..."""
        if self._cyclic is None:
            self._cyclic = [None] * self.order
        if self._cyclic[g] is None:
            out = [self.identity]
            x = g
            while x != self.identity:
                out.append(x)
                x = int(self.table[x, g])
            self._cyclic[g] = out
        return self._cyclic[g]

    @property
    def exponent(self):
        out = 1
        for o in self.element_orders:
            out = out * o // gcd(out, o)
        return out

    def to_table(self):
        return self.table.tolist()


@dataclass(frozen=True)
class Subgroup:
    parent: CayleyGroup
    elements: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(sorted(set(int(x) for x in self.elements))))
        validate_subgroup(self.parent, self.elements)

    @property
    def order(self):
        return len(self.elements)

    def __contains__(self, g):
        return g in set(self.elements)

    def __hash__(self):
        return hash((id(self.parent), self.elements))

    def __eq__(self, other):
        return isinstance(other, Subgroup) and other.parent is self.parent and other.elements == self.elements


def validate_subgroup(G: CayleyGroup, elements):
    S = set(elements)
    if G.identity not in S:
        raise NotASubgroup("identity missing")
    E = np.array(sorted(S), dtype=np.int64)
    prod_ = G.table[np.ix_(E, E)]
    if not np.isin(prod_, E).all():
        raise NotASubgroup("not closed under the product")
    if any(G.inverses[g] not in S for g in S):
        raise NotASubgroup("not closed under inverses")


# ---------------------------------------------------------------------------
# construction


def _finish(table, name="", labels=None, validate_bound=DEFAULT_VALIDATION_BOUND, check_assoc=True):
    n = table.shape[0]
    ar = np.arange(n)
    ident = None
    for e in range(n):
        if (table[e] == ar).all() and (table[:, e] == ar).all():
            ident = e
            break
    if ident is None:
        raise NotAGroup("identity", ())
    inverses = np.empty(n, dtype=np.int64)
    for g in range(n):
        hs = np.nonzero(table[g] == ident)[0]
        if len(hs) != 1:
            raise NotAGroup("inverse", (g,))
        h = int(hs[0])
        if table[h, g] != ident:
            raise NotAGroup("inverse", (g, h))
        inverses[g] = h
    if check_assoc and n <= validate_bound:
        for a in range(n):
            lhs = table[table[a]]  # (a*b)*c indexed [b, c]
            rhs = table[a][table]  # a*(b*c)
            bad = np.argwhere(lhs != rhs)
            if len(bad):
                b, c = bad[0]
                raise NotAGroup("associativity", (a, int(b), int(c)))
    orders = np.empty(n, dtype=np.int64)
    for g in range(n):
        x, k = g, 1
        while x != ident:
            x = table[x, g]
            k += 1
        orders[g] = k
    table = table.astype(np.int64, copy=False)
    table.setflags(write=False)
    return CayleyGroup(table, ident, inverses, orders, labels=labels, name=name)


def from_cayley_table(table, name="", validate_bound=DEFAULT_VALIDATION_BOUND) -> CayleyGroup:
    """Validate a square table of indices and wrap it as a group."""
    T = np.array(table, dtype=np.int64)
    if T.ndim != 2 or T.shape[0] != T.shape[1] or T.shape[0] == 0:
        raise NotAGroup("square table", T.shape)
    n = T.shape[0]
    if T.min() < 0 or T.max() >= n:
        bad = np.argwhere((T < 0) | (T >= n))[0]
        raise NotAGroup("entries in range", tuple(int(x) for x in bad))
    for g in range(n):
        if len(np.unique(T[g])) != n:
            raise NotAGroup("latin square (row)", (g,))
        if len(np.unique(T[:, g])) != n:
            raise NotAGroup("latin square (column)", (g,))
    return _finish(T.copy(), name=name, validate_bound=validate_bound)


def _compose(g, h):
    # (g*h)(x) = g(h(x))
    return tuple(g[x] for x in h)


def from_permutations(degree, generators, order_bound=DEFAULT_ORDER_BOUND, name="") -> CayleyGroup:
    """The group generated by permutations of {0..degree-1} (image tuples).

    The product is composition, applying the right factor first.  Elements
    are listed in breadth-first order from the identity.
    """
    gens = []
    for g in generators:
        g = tuple(int(x) for x in g)
        if len(g) != degree or sorted(g) != list(range(degree)):
            raise InvalidPermutation(f"{list(g)} is not a permutation of range({degree})")
        gens.append(g)
    ident = tuple(range(degree))
    elements = [ident]
    index = {ident: 0}
    queue = deque([ident])
    while queue:
        x = queue.popleft()
        for s in gens:
            y = _compose(x, s)
            if y not in index:
                if len(elements) >= order_bound:
                    raise OrderBoundExceeded(f"closure exceeds order bound {order_bound}")
                index[y] = len(elements)
                elements.append(y)
                queue.append(y)
    n = len(elements)
    T = np.empty((n, n), dtype=np.int64)
    for i, a in enumerate(elements):
        for j, b in enumerate(elements):
            T[i, j] = index[_compose(a, b)]
    return _finish(T, name=name, labels=tuple(elements), check_assoc=False)


def from_abelian(invariants, name="") -> CayleyGroup:
    """Z/n_1 x ... x Z/n_k; element tuples in lexicographic order (last coordinate fastest)."""
    inv = [int(x) for x in invariants]
    if any(x < 2 for x in inv):
        raise ValueError("cyclic factors must have order >= 2")
    elems = list(product(*[range(x) for x in inv])) if inv else [()]
    n = len(elems)
    coords = np.array(elems, dtype=np.int64).reshape(n, len(inv))
    radix = np.array([int(np.prod(inv[i + 1 :])) for i in range(len(inv))], dtype=np.int64)
    summed = (coords[:, None, :] + coords[None, :, :]) % np.array(inv, dtype=np.int64)
    T = (summed * radix).sum(axis=2) if inv else np.zeros((1, 1), dtype=np.int64)
    return _finish(
        np.ascontiguousarray(T, dtype=np.int64),
        name=name or ("Z/" + " x Z/".join(map(str, inv)) if inv else "1"),
        labels=tuple(elems),
        check_assoc=False,
    )


def from_central_extension(ext, order_bound=DEFAULT_ORDER_BOUND, twist=None, name="") -> CayleyGroup:
    """The class-<=2 group on Gamma x C for a commutator datum.

    Elements are tuples (gamma_1..gamma_d, c_1..c_r) in lexicographic order.
    The product is (g1, c1)(g2, c2) = (g1+g2, c1+c2+f(g1,g2)) with the
    upper-triangular bilinear cocycle f(g1,g2) = sum_{i<j} lambda(e_i^e_j) g1_i g2_j.
    ``twist`` (shape d x d x r, symmetric in the first two axes) adds a
    symmetric bilinear form to f: a different group with the same commutator
    pairing.
    """
    p, d, r = ext.p, ext.gamma_rank, ext.c_rank
    n = p ** (d + r)
    if n > order_bound:
        raise OrderBoundExceeded(f"|G| = {n} exceeds order bound {order_bound}")
    elems = list(product(range(p), repeat=d + r))
    X = np.array(elems, dtype=np.int64).reshape(n, d + r)
    gam, c = X[:, :d], X[:, d:]
    lam = np.array(ext.lambda_rows, dtype=np.int64).reshape(r, d * (d - 1) // 2)
    form = np.zeros((d, d, r), dtype=np.int64)
    for k, (i, j) in enumerate(wedge_pairs(d)):
        form[i, j] = lam[:, k]
    if twist is not None:
        tw = np.array(twist, dtype=np.int64).reshape(d, d, r)
        if not (tw == tw.transpose(1, 0, 2)).all():
            raise ValueError("twist must be symmetric")
        form = form + tw
    # f[a, b, :] = sum_ij gam[a,i] gam[b,j] form[i,j,:]
    f = np.einsum("ai,bj,ijk->abk", gam, gam, form) % p
    new_g = (gam[:, None, :] + gam[None, :, :]) % p
    new_c = (c[:, None, :] + c[None, :, :] + f) % p
    coords = np.concatenate([new_g, new_c], axis=2)
    radix = p ** np.arange(d + r - 1, -1, -1, dtype=np.int64)
    T = (coords * radix).sum(axis=2)
    return _finish(
        np.ascontiguousarray(T, dtype=np.int64),
        name=name or f"ext(p={p},d={d},r={r})",
        labels=tuple(elems),
    )


def wedge_pairs(d):
    """Lexicographic wedge basis (i, j), i < j, zero-based."""
    return [(i, j) for i in range(d) for j in range(i + 1, d)]


# ---------------------------------------------------------------------------
# subgroups


def closure(G: CayleyGroup, gens) -> tuple[int, ...]:
    seen = {G.identity}
    queue = deque([G.identity])
    gens = [int(g) for g in gens]
    while queue:
        x = queue.popleft()
        for s in gens:
            y = int(G.table[x, s])
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return tuple(sorted(seen))


def subgroup_generated(G: CayleyGroup, gens) -> Subgroup:
    return Subgroup(G, closure(G, gens))


def whole(G: CayleyGroup) -> Subgroup:
    return Subgroup(G, tuple(range(G.order)))


def as_group(S: Subgroup) -> tuple[CayleyGroup, tuple[int, ...]]:
    """``S`` as a standalone CayleyGroup; returns it with the index embedding."""
    E = np.array(S.elements, dtype=np.int64)
    pos = {int(g): i for i, g in enumerate(E)}
    sub = S.parent.table[np.ix_(E, E)]
    remap = np.vectorize(pos.__getitem__, otypes=[np.int64])(sub) if len(E) > 1 else np.zeros((1, 1), np.int64)
    G = _finish(np.ascontiguousarray(remap, dtype=np.int64), check_assoc=False)
    return G, tuple(int(x) for x in E)


def generating_set(G: CayleyGroup) -> list[int]:
    """A small generating set, chosen greedily by decreasing element order."""
    order = sorted(range(G.order), key=lambda g: (-G.element_orders[g], g))
    gens: list[int] = []
    current = {G.identity}
    for g in order:
        if len(current) == G.order:
            break
        if g not in current:
            gens.append(g)
            current = set(closure(G, gens))
    return gens


def is_abelian(G: CayleyGroup) -> bool:
    return bool((G.table == G.table.T).all())


def is_cyclic(G: CayleyGroup) -> bool:
    return G.order in G.element_orders


def is_bicyclic(G: CayleyGroup) -> bool:
    """Abelian and generated by at most two elements.

    For abelian groups this is checked through the p-ranks: G is 2-generated
    iff for every prime p at most p^2 elements satisfy g^p = e.
    """
    if not is_abelian(G):
        return False
    for p in factorize(G.order):
        if sum(1 for o in G.element_orders if p % o == 0) > p * p:
            return False
    return True


def _sorted_family(subgroups):
    return sorted(subgroups, key=lambda s: (len(s), s))


def bicyclic_subgroups(G: CayleyGroup) -> list[Subgroup]:
    """All subgroups <a, b> with ab = ba, including cyclic and trivial ones."""
    T = G.table
    found = set()
    n = G.order
    for a in range(n):
        ca = np.array(G.cyclic_subgroup(a), dtype=np.int64)
        comm = np.nonzero(T[a] == T[:, a])[0]
        for b in comm:
            if b < a:
                continue
            cb = np.array(G.cyclic_subgroup(int(b)), dtype=np.int64)
            found.add(tuple(np.unique(T[np.ix_(ca, cb)]).tolist()))
    return [Subgroup(G, s) for s in _sorted_family(found)]


def abelian_subgroups(G: CayleyGroup) -> list[Subgroup]:
    """Every abelian subgroup, grown from the bicyclic ones by central adjunction."""
    T = G.table
    start = {s.elements for s in bicyclic_subgroups(G)}
    found = set(start)
    queue = deque(sorted(start))
    while queue:
        A = queue.popleft()
        Aarr = np.array(A, dtype=np.int64)
        cent = np.nonzero((T[:, Aarr] == T[Aarr, :].T).all(axis=1))[0]
        Aset = set(A)
        for c in cent:
            if int(c) in Aset:
                continue
            cc = np.array(G.cyclic_subgroup(int(c)), dtype=np.int64)
            B = tuple(np.unique(T[np.ix_(Aarr, cc)]).tolist())
            if B not in found:
                found.add(B)
                queue.append(B)
    return [Subgroup(G, s) for s in _sorted_family(found)]


def conjugate(S: Subgroup, g: int) -> Subgroup:
    G = S.parent
    T = G.table
    E = np.array(S.elements, dtype=np.int64)
    return Subgroup(G, T[T[g, E], G.inverses[g]].tolist())


def _p_part(G, g, p):
    o = G.element_orders[g]
    m = o
    while m % p == 0:
        m //= p
    return G.power(g, m)


def sylow_subgroup(G: CayleyGroup, p: int) -> Subgroup:
    """One Sylow p-subgroup, grown inside successive normalisers."""
    n = G.order
    target = 1
    while n % (target * p) == 0:
        target *= p
    T = G.table
    P = (G.identity,)
    while len(P) < target:
        Parr = np.array(P, dtype=np.int64)
        Pset = set(P)
        ext = None
        for g in range(n):
            if g in Pset:
                continue
            conj = set(T[T[g, Parr], G.inverses[g]].tolist())
            if conj != Pset:
                continue
            h = _p_part(G, g, p)
            if h not in Pset:
                ext = h
                break
        if ext is None:  # pragma: no cover - Sylow theory guarantees an extension
            raise RuntimeError("failed to extend p-subgroup")
        P = closure(G, list(P) + [ext])
    return Subgroup(G, P)


def all_sylow_bicyclic(G: CayleyGroup) -> bool:
    return all(is_bicyclic(as_group(sylow_subgroup(G, p))[0]) for p in factorize(G.order))


def all_sylow_cyclic(G: CayleyGroup) -> bool:
    return all(is_cyclic(as_group(sylow_subgroup(G, p))[0]) for p in factorize(G.order))


def center(G: CayleyGroup) -> tuple[int, ...]:
    T = G.table
    return tuple(int(g) for g in np.nonzero((T == T.T).all(axis=1))[0])


def commutator_subgroup(G: CayleyGroup) -> tuple[int, ...]:
    comms = {G.commutator(a, b) for a in range(G.order) for b in range(G.order)}
    return closure(G, sorted(comms))


# ---------------------------------------------------------------------------
# catalogue of small test groups


def cyclic(n):
    return from_abelian([n], name=f"Z/{n}") if n > 1 else from_cayley_table([[0]], name="1")


def symmetric(k):
    if k < 2:
        return from_permutations(1, [], name="S1")
    gens = [tuple([1, 0] + list(range(2, k)))]
    if k > 2:
        gens.append(tuple(list(range(1, k)) + [0]))
    return from_permutations(k, gens, name=f"S{k}")


def alternating4():
    return from_permutations(4, [(1, 2, 0, 3), (0, 2, 3, 1)], name="A4")


def dihedral(k):
    """Symmetries of a k-gon, order 2k."""
    rot = tuple((i + 1) % k for i in range(k))
    ref = tuple((-i) % k for i in range(k))
    return from_permutations(k, [rot, ref], name=f"D{k}")


_QUAT = {  # unit products: (a, b) -> (sign, c) on {1, i, j, k} = {0, 1, 2, 3}
    (0, 0): (1, 0), (0, 1): (1, 1), (0, 2): (1, 2), (0, 3): (1, 3),
    (1, 0): (1, 1), (1, 1): (-1, 0), (1, 2): (1, 3), (1, 3): (-1, 2),
    (2, 0): (1, 2), (2, 1): (-1, 3), (2, 2): (-1, 0), (2, 3): (1, 1),
    (3, 0): (1, 3), (3, 1): (1, 2), (3, 2): (-1, 1), (3, 3): (-1, 0),
}


def quaternion():
    """Q8 with elements (+-1, +-i, +-j, +-k) indexed 4*[negative] + unit."""
    T = np.empty((8, 8), dtype=np.int64)
    for x in range(8):
        for y in range(8):
            s, c = _QUAT[x % 4, y % 4]
            neg = (x >= 4) ^ (y >= 4) ^ (s < 0)
            T[x, y] = 4 * neg + c
    labels = ("1", "i", "j", "k", "-1", "-i", "-j", "-k")
    return _finish(T, name="Q8", labels=labels)


def heisenberg(p):
    from brunr.class2 import CentralExtensionData

    ext = CentralExtensionData.from_lambda(p, 2, [[1]])
    return from_central_extension(ext, name=f"Heis({p})")


def dicyclic(k):
    """Dic_k of order 4k: <a, x | a^2k = 1, x^2 = a^k, x a x^-1 = a^-1>.

    Element a^i x^e has index 2k*e + i.  Dic_2 is Q8, Dic_4 the generalised
    quaternion group of order 16.
    """
    m = 2 * k
    T = np.empty((2 * m, 2 * m), dtype=np.int64)
    for e in range(2):
        for i in range(m):
            for f in range(2):
                for j in range(m):
                    if e == 0:
                        r, s = (i + j) % m, f
                    elif f == 0:
                        r, s = (i - j) % m, 1
                    else:
                        r, s = (i - j + k) % m, 0
                    T[e * m + i, f * m + j] = s * m + r
    return _finish(T, name=f"Dic{k}")


def direct_product(G: CayleyGroup, H: CayleyGroup, name="") -> CayleyGroup:
    """G x H with element (g, h) at index g*|H| + h."""
    m = H.order
    T = (G.table[:, None, :, None] * m + H.table[None, :, None, :]).reshape(G.order * m, G.order * m)
    return _finish(np.ascontiguousarray(T), name=name or f"{G.name} x {H.name}", check_assoc=False)


def _gl2_perm(mat, p):
    vecs = [(a, b) for a in range(p) for b in range(p) if (a, b) != (0, 0)]
    idx = {v: i for i, v in enumerate(vecs)}
    (a, b), (c, d) = mat
    return tuple(idx[((a * x + b * y) % p, (c * x + d * y) % p)] for x, y in vecs)


def special_linear_2_3():
    """SL(2, 3), order 24, acting on the nonzero vectors of F_3^2."""
    gens = [_gl2_perm(((1, 1), (0, 1)), 3), _gl2_perm(((1, 0), (1, 1)), 3)]
    return from_permutations(8, gens, name="SL(2,3)")


def general_linear_2_3():
    """GL(2, 3), order 48."""
    gens = [_gl2_perm(((1, 1), (0, 1)), 3), _gl2_perm(((2, 0), (0, 1)), 3), _gl2_perm(((0, 1), (1, 0)), 3)]
    return from_permutations(8, gens, name="GL(2,3)")


CATALOG = {
    **{f"Z{n}": (lambda n=n: cyclic(n)) for n in range(1, 13)},
    "Z2^2": lambda: from_abelian([2, 2]),
    "Z2^3": lambda: from_abelian([2, 2, 2]),
    "Z2^4": lambda: from_abelian([2, 2, 2, 2]),
    "Z3^2": lambda: from_abelian([3, 3]),
    "Z3^3": lambda: from_abelian([3, 3, 3]),
    "Z4xZ2": lambda: from_abelian([4, 2]),
    "S3": lambda: symmetric(3),
    "S4": lambda: symmetric(4),
    "A4": alternating4,
    "D4": lambda: dihedral(4),
    "D6": lambda: dihedral(6),
    "Q8": quaternion,
    "Dic3": lambda: dicyclic(3),
    "Q16": lambda: dicyclic(4),
    "Z2xD4": lambda: direct_product(cyclic(2), dihedral(4)),
    "Z2xQ8": lambda: direct_product(cyclic(2), quaternion()),
    "SL(2,3)": special_linear_2_3,
    "S3xS3": lambda: direct_product(symmetric(3), symmetric(3)),
    "S4xZ2": lambda: direct_product(symmetric(4), cyclic(2)),
    "GL(2,3)": general_linear_2_3,
    "Heis27": lambda: heisenberg(3),
}


def named_group(name: str) -> CayleyGroup:
    """Look up a catalog group; names are case-insensitive (``s4``, ``z6``, ``gl(2,3)``)."""
    key = name.strip()
    lookup = {k.lower(): k for k in CATALOG}
    if key.lower() in lookup:
        G = CATALOG[lookup[key.lower()]]()
        G.name = lookup[key.lower()]
        return G
    low = key.lower()
    for prefix, make in (("z", cyclic), ("s", symmetric), ("d", dihedral), ("dic", dicyclic)):
        rest = low[len(prefix):]
        if low.startswith(prefix) and rest.isdigit():
            return make(int(rest))
    raise KeyError(f"unknown group name {name!r}")
