import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from brunr.class2 import CentralExtensionData
from brunr.errors import InvalidPermutation, NotAGroup, NotASubgroup, OrderBoundExceeded
from brunr.groups import (
    CATALOG,
    Subgroup,
    abelian_subgroups,
    all_sylow_bicyclic,
    all_sylow_cyclic,
    as_group,
    bicyclic_subgroups,
    center,
    commutator_subgroup,
    conjugate,
    cyclic,
    dicyclic,
    dihedral,
    direct_product,
    from_abelian,
    from_cayley_table,
    from_central_extension,
    from_permutations,
    generating_set,
    heisenberg,
    is_abelian,
    is_bicyclic,
    is_cyclic,
    named_group,
    quaternion,
    subgroup_generated,
    sylow_subgroup,
    symmetric,
)


def assert_group_axioms(G):
    T = G.table
    n = G.order
    rng = np.arange(n)
    for row in T:
        assert sorted(row.tolist()) == list(range(n))
    for col in T.T:
        assert sorted(col.tolist()) == list(range(n))
    assert (T[G.identity] == rng).all() and (T[:, G.identity] == rng).all()
    assert all(T[g, G.inverses[g]] == G.identity for g in range(n))
    # associativity on every triple
    for g in range(n):
        assert (T[T[g]] == T[g][T]).all()


def test_trivial_and_z2_tables():
    G = from_cayley_table([[0]])
    assert G.order == 1 and G.element_orders == (1,)
    G = from_cayley_table([[0, 1], [1, 0]])
    assert G.order == 2 and G.element_orders == (1, 2)


def test_not_a_latin_square():
    with pytest.raises(NotAGroup) as exc:
        from_cayley_table([[0, 1], [0, 1]])
    assert exc.value.axiom


def test_non_associative_table_is_rejected():
    # a Latin square with identity 0 that is not associative (order 5 loop)
    T = [
        [0, 1, 2, 3, 4],
        [1, 0, 3, 4, 2],
        [2, 4, 0, 1, 3],
        [3, 2, 4, 0, 1],
        [4, 3, 1, 2, 0],
    ]
    with pytest.raises(NotAGroup) as exc:
        from_cayley_table(T)
    assert "assoc" in exc.value.axiom
    assert len(exc.value.witness) == 3


def test_permutation_examples():
    G = from_permutations(3, [(1, 2, 0), (1, 0, 2)])
    assert G.order == 6 and not is_abelian(G)
    K = from_permutations(4, [(1, 0, 3, 2), (2, 3, 0, 1)])
    assert K.order == 4 and max(K.element_orders) == 2
    assert from_permutations(1, []).order == 1


def test_permutation_errors():
    with pytest.raises(InvalidPermutation):
        from_permutations(3, [(0, 0, 1)])
    with pytest.raises(InvalidPermutation):
        from_permutations(3, [(0, 1)])
    with pytest.raises(OrderBoundExceeded):
        from_permutations(6, [(1, 2, 3, 4, 5, 0), (1, 0, 2, 3, 4, 5)], order_bound=100)


def test_abelian_examples():
    V = from_abelian([2, 2])
    assert V.order == 4 and not is_cyclic(V) and is_bicyclic(V)
    Z4 = from_abelian([4])
    assert sorted(Z4.element_orders).count(4) == 2 and is_cyclic(Z4)
    G = from_abelian([2, 4])
    assert G.order == 8 and G.exponent == 4 and not is_cyclic(G)
    # mixed-radix ordering, last coordinate fastest
    assert G.labels[:3] == ((0, 0), (0, 1), (0, 2))


def test_heisenberg_27():
    G = heisenberg(3)
    assert G.order == 27 and not is_abelian(G)
    assert G.exponent == 3
    assert len(center(G)) == 3
    assert len(commutator_subgroup(G)) == 3


def test_zero_lambda_is_abelian():
    for p in (2, 3):
        ext = CentralExtensionData.from_lambda(p, 2, [[0], [0]])
        G = from_central_extension(ext)
        assert G.order == p**4 and is_abelian(G)


def test_extension_order_bound():
    ext = CentralExtensionData.from_lambda(2, 4, [[1, 0, 0, 0, 0, 0]] * 6)
    with pytest.raises(OrderBoundExceeded):
        from_central_extension(ext)


def test_order_512_extension():
    # 5 relations, one-dimensional S spanned by e12 + e34 (off the quadric)
    rows = [[1, 0, 0, 0, 0, 1], [0, 1, 0, 0, 0, 0], [0, 0, 1, 0, 0, 0], [0, 0, 0, 1, 0, 0], [0, 0, 0, 0, 1, 0]]
    G = from_central_extension(CentralExtensionData.from_lambda(2, 4, rows))
    assert G.order == 512


def commutator_check(ext):
    """[g1, g2] equals lambda(gamma1 ^ gamma2) in C, for every pair."""
    G = from_central_extension(ext)
    d, r, p = ext.gamma_rank, ext.c_rank, ext.p
    lab = np.array(G.labels).reshape(G.order, d + r)
    pairs = [(i, j) for i in range(d) for j in range(i + 1, d)]
    lam = np.array(ext.lambda_rows, dtype=np.int64).reshape(r, len(pairs))
    for a in range(G.order):
        for b in range(G.order):
            c = G.commutator(a, b)
            g1, g2 = lab[a, :d], lab[b, :d]
            w = np.array([g1[i] * g2[j] - g1[j] * g2[i] for i, j in pairs], dtype=np.int64)
            expect = (lam @ w) % p if len(pairs) else np.zeros(r, dtype=np.int64)
            assert (lab[c, :d] == 0).all()
            assert ((lab[c, d:] - expect) % p == 0).all()
    return G


@settings(max_examples=25, deadline=None)
@given(st.sampled_from([2, 3]), st.integers(2, 3), st.integers(1, 2), st.data())
def test_commutator_recovers_lambda(p, d, r, data):
    if p ** (d + r) > 243:
        r = 1
    D = d * (d - 1) // 2
    rows = data.draw(st.lists(st.lists(st.integers(0, p - 1), min_size=D, max_size=D), min_size=r, max_size=r))
    ext = CentralExtensionData.from_lambda(p, d, rows)
    G = commutator_check(ext)
    # C = last r coordinates is central
    lab = G.labels
    Z = set(center(G))
    for g in range(G.order):
        if all(x == 0 for x in lab[g][:d]):
            assert g in Z


def test_bicyclic_examples():
    Q = quaternion()
    B = bicyclic_subgroups(Q)
    assert [A.order for A in B] == [1, 2, 4, 4, 4]
    assert all(A.order < 8 for A in B)
    V = from_abelian([2, 2])
    B = bicyclic_subgroups(V)
    # the Klein group has exactly five subgroups, all bicyclic
    assert len(B) == 5 and B[-1].order == 4
    E = from_abelian([2, 2, 2])
    B = bicyclic_subgroups(E)
    assert max(A.order for A in B) == 4 and len(B) == 15


def test_bicyclic_counts_frozen():
    assert len(bicyclic_subgroups(symmetric(4))) == 21
    assert len(bicyclic_subgroups(dihedral(4))) == 9
    assert len(abelian_subgroups(from_abelian([2, 2, 2]))) == 16


@pytest.mark.parametrize("name", ["S3", "S4", "D4", "Q8", "A4", "Heis27", "Z2xD4"])
def test_bicyclic_closed_under_conjugation(name):
    G = named_group(name)
    fam = set(bicyclic_subgroups(G))
    for A in fam:
        assert Subgroup(G, A.elements) == A
        for g in range(G.order):
            assert conjugate(A, g) in fam


@pytest.mark.parametrize("inv", [[2], [6], [2, 2], [2, 4], [3, 3], [2, 2, 2], [2, 2, 4], [2, 6]])
def test_abelian_self_in_family_iff_two_factors(inv):
    G = from_abelian(inv)
    whole = tuple(range(G.order))
    in_family = any(A.elements == whole for A in bicyclic_subgroups(G))
    assert in_family == (len(inv) <= 2)


def test_predicates():
    assert not is_bicyclic(from_abelian([2, 2, 2]))
    assert is_cyclic(cyclic(6))
    D = dihedral(4)
    assert not is_abelian(D) and not is_bicyclic(D)


def test_sylow_examples():
    assert sylow_subgroup(symmetric(3), 2).order == 2
    P = sylow_subgroup(symmetric(4), 2)
    assert P.order == 8 and not is_abelian(as_group(P)[0])
    assert sylow_subgroup(cyclic(6), 5).order == 1
    assert all_sylow_bicyclic(symmetric(3)) and all_sylow_cyclic(symmetric(3))
    assert not all_sylow_bicyclic(symmetric(4))
    V = from_abelian([2, 2])
    assert all_sylow_bicyclic(V) and not all_sylow_cyclic(V)


@pytest.mark.parametrize("name", sorted(CATALOG))
def test_catalog_groups(name):
    G = named_group(name)
    assert_group_axioms(G)
    n = G.order
    for p in {q for q in range(2, n + 1) if n % q == 0 and all(q % r for r in range(2, q))}:
        P = sylow_subgroup(G, p)
        k = n
        while k % p == 0:
            k //= p
        assert P.order * k == n
    assert len(set(subgroup_generated(G, generating_set(G)).elements)) == n


def test_catalog_orders_frozen():
    orders = {k: named_group(k).order for k in ["Dic3", "Q16", "SL(2,3)", "GL(2,3)", "S4xZ2", "S3xS3", "Z3^3"]}
    assert orders == {"Dic3": 12, "Q16": 16, "SL(2,3)": 24, "GL(2,3)": 48, "S4xZ2": 48, "S3xS3": 36, "Z3^3": 27}


def test_dicyclic_two_is_quaternion():
    D = dicyclic(2)
    assert sorted(D.element_orders) == sorted(quaternion().element_orders)


def test_direct_product():
    G = direct_product(cyclic(2), cyclic(3))
    assert is_cyclic(G)


def test_named_group_lookup():
    assert named_group("s4").order == 24
    assert named_group("z7").order == 7
    assert named_group("d5").order == 10
    with pytest.raises(KeyError):
        named_group("nonsense")


def test_subgroup_validation():
    G = symmetric(3)
    with pytest.raises(NotASubgroup):
        Subgroup(G, (1,))
    with pytest.raises(NotASubgroup):
        Subgroup(G, tuple(range(4)))


def test_table_is_read_only():
    G = symmetric(3)
    with pytest.raises(ValueError):
        G.table[0, 0] = 1
