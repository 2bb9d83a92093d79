import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from brunr.errors import BudgetExceeded, InvalidLattice
from brunr.exactalg import rank_mod_p
from brunr.groups import (
    CATALOG,
    all_sylow_bicyclic,
    cyclic,
    from_abelian,
    from_cayley_table,
    named_group,
    symmetric,
)
from brunr.lattices import (
    GLattice,
    LatticeCochains,
    augmentation_lattice,
    h2_lattice,
    is_lattice_cocycle,
    lattice_from_json,
    lattice_restriction_kernel,
    make_lattice,
    multiplicative_kernel,
    pair_lattice,
    pi_matrix,
    regular_lattice,
    standard_kernel_lattice,
    standard_obstruction,
    tate_h0,
    trivial_lattice,
)


def test_regular_and_pair_examples():
    G = cyclic(2)
    R = regular_lattice(G)
    assert R.rank == 2 and R.action[1].tolist() == [[0, 1], [1, 0]]
    P = pair_lattice(G)
    assert P.rank == 4
    # diagonal action on pairs has no fixed basis vector
    assert all(P.action[1][i, i] == 0 for i in range(4))
    E = from_cayley_table([[0]])
    assert regular_lattice(E).action.tolist() == [[[1]]]
    assert pair_lattice(E).action.tolist() == [[[1]]]


@pytest.mark.parametrize("inv,rank", [([2], 3), ([3], 7), ([2, 2], 13), ([2, 2, 2], 57)])
def test_standard_lattice_rank(inv, rank):
    assert standard_kernel_lattice(from_abelian(inv)).rank == rank


@pytest.mark.parametrize("name", ["Z2", "Z3", "Z2^2", "S3", "Q8"])
def test_exactness_audit(name):
    G = named_group(name)
    n = G.order
    P = pi_matrix(G)
    # augmentation o pi = 0
    assert all(sum(P[a][j] for a in range(n)) == 0 for j in range(n * n))
    r = max(rank_mod_p(P, n * n, p) for p in (2, 3, 5, 7, 101))
    assert r == n - 1
    M = standard_kernel_lattice(G)
    assert M.rank == n * n - n + 1
    # every basis vector lies in ker(pi)
    B = np.array(M.basis)
    assert not (np.array(P) @ B.T).any()


def test_standard_lattice_budget():
    with pytest.raises(BudgetExceeded):
        standard_kernel_lattice(cyclic(17))
    with pytest.raises(BudgetExceeded):
        standard_kernel_lattice(cyclic(5), budget=24)
    assert standard_kernel_lattice(cyclic(5), budget=None).rank == 21


def test_tate_h0_examples():
    for n in (1, 2, 5, 6):
        assert tate_h0(cyclic(n), trivial_lattice(cyclic(n))).invariant_factors == ((n,) if n > 1 else ())
    assert tate_h0(cyclic(4), regular_lattice(cyclic(4))).is_trivial
    Aug = augmentation_lattice(cyclic(2))
    assert Aug.rank == 1 and Aug.action[1].tolist() == [[-1]]
    assert tate_h0(cyclic(2), Aug).is_trivial
    assert tate_h0(symmetric(3), pair_lattice(symmetric(3))).is_trivial


def test_h2_lattice_examples():
    G = from_abelian([2, 2])
    H = h2_lattice(G, standard_kernel_lattice(G))
    assert H.invariant_factors == (4,) and H.route == "direct"
    assert h2_lattice(cyclic(2), trivial_lattice(cyclic(2))).invariant_factors == (2,)
    assert h2_lattice(cyclic(3), regular_lattice(cyclic(3))).invariant_factors == ()
    # H^2(G, Z) = Hom(G, Q/Z) is the dual of G^ab
    assert h2_lattice(G, trivial_lattice(G)).invariant_factors == (2, 2)
    S3 = symmetric(3)
    assert h2_lattice(S3, trivial_lattice(S3)).invariant_factors == (2,)


@pytest.mark.parametrize("inv", [[2], [3], [2, 2]])
def test_shifted_equals_direct(inv):
    G = from_abelian(inv)
    M = standard_kernel_lattice(G)
    direct = h2_lattice(G, M, route="direct")
    shifted = h2_lattice(G, M, route="shifted")
    assert direct.invariant_factors == shifted.invariant_factors == (G.order,)


@pytest.mark.slow
def test_shifted_equals_direct_e8():
    G = from_abelian([2, 2, 2])
    M = standard_kernel_lattice(G)
    assert h2_lattice(G, M, route="direct").invariant_factors == (8,)


@pytest.mark.parametrize("name", ["Z2", "Z2^2", "S3", "D4"])
def test_lattice_representatives_are_cocycles(name):
    G = named_group(name)
    for L in (trivial_lattice(G), augmentation_lattice(G)):
        H = h2_lattice(G, L)
        for j, F in enumerate(H.representatives):
            assert is_lattice_cocycle(L, F)
            want = [int(i == j) for i in range(len(H.invariant_factors))]
            assert H.coordinates(F) == want


def test_coboundaries_have_zero_coordinates():
    G = named_group("Z2^2")
    L = standard_kernel_lattice(G)
    H = h2_lattice(G, L)
    ctx = LatticeCochains(L)
    D = ctx.coboundary_matrix()
    rng = np.random.default_rng(0)
    u = D @ rng.integers(-3, 4, D.shape[1])
    F = ctx.table(u)
    assert is_lattice_cocycle(L, F)
    assert H.coordinates(F) == [0]
    F2 = F + 3 * H.representatives[0]
    assert H.coordinates(F2) == [3]


def test_shifted_route_has_no_coordinates():
    G = cyclic(2)
    H = h2_lattice(G, standard_kernel_lattice(G), route="shifted")
    with pytest.raises(ValueError):
        H.coordinates(None)
    with pytest.raises(ValueError):
        h2_lattice(G, trivial_lattice(G), route="shifted")


def test_direct_budget():
    G = from_abelian([2, 2, 2])
    M = standard_kernel_lattice(G)
    with pytest.raises(BudgetExceeded) as exc:
        h2_lattice(G, M, route="direct", budget=1000)
    assert "shifted" in exc.value.hint
    # auto falls back to the shifted route when over budget
    assert h2_lattice(G, M, budget=1000).route == "shifted"


def test_standard_obstruction_examples():
    E = standard_obstruction(from_abelian([2, 2, 2]))
    assert E.invariant_factors == (2,) and E.generators == ((4,),)
    assert standard_obstruction(from_abelian([2, 2])).is_trivial
    assert standard_obstruction(symmetric(4)).invariant_factors == (2,)
    assert standard_obstruction(from_abelian([2, 2, 2, 2])).invariant_factors == (4,)


@pytest.mark.parametrize("name", ["Z2^3", "S3", "Z4xZ2", "Q8", "D4", "Z3^2"])
def test_direct_restriction_kernel_matches_shifted(name):
    G = named_group(name)
    M = standard_kernel_lattice(G)
    K = lattice_restriction_kernel(G, M, budget=None)
    assert K.invariant_factors == standard_obstruction(G).invariant_factors


def test_multiplicative_kernel_examples():
    G = from_abelian([2, 2])
    assert multiplicative_kernel(G, standard_kernel_lattice(G)).is_trivial
    E = from_abelian([2, 2, 2])
    assert multiplicative_kernel(E, standard_kernel_lattice(E), route="shifted").invariant_factors == (2,)
    assert multiplicative_kernel(E, standard_kernel_lattice(E)).invariant_factors == (2,)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 6])
@pytest.mark.parametrize("kind", ["trivial", "regular", "augmentation", "standard", "pair"])
def test_multiplicative_kernel_cyclic_vanishes(n, kind):
    G = cyclic(n)
    L = make_lattice(G, kind)
    if G.order**2 * L.rank > 4096:
        pytest.skip("over the direct budget")
    assert multiplicative_kernel(G, L).is_trivial


@pytest.mark.parametrize("name", sorted(CATALOG))
def test_sylow_criterion(name):
    G = named_group(name)
    assert (not standard_obstruction(G).is_trivial) == (not all_sylow_bicyclic(G))


def test_lattice_validation():
    G = cyclic(2)
    with pytest.raises(InvalidLattice):
        GLattice(G, 1, np.array([[[1]], [[2]]]))
    with pytest.raises(InvalidLattice):
        GLattice(G, 1, np.array([[[-1]], [[1]]]))
    with pytest.raises(InvalidLattice):
        GLattice(G, 2, np.array([[[1]], [[1]]]))
    # a representation of Z/3 that is not one of Z/3
    with pytest.raises(InvalidLattice):
        GLattice(cyclic(3), 1, np.array([[[1]], [[-1]], [[-1]]]))
    with pytest.raises(InvalidLattice):
        h2_lattice(cyclic(3), trivial_lattice(cyclic(2)))
    with pytest.raises(ValueError):
        make_lattice(G, "bogus")


def test_lattice_json_roundtrip():
    G = symmetric(3)
    L = augmentation_lattice(G)
    L2 = lattice_from_json(G, L.to_json())
    assert (L2.action == L.action).all() and L2.kind == "augmentation"


@settings(max_examples=20, deadline=None)
@given(st.sampled_from(["Z2", "Z3", "Z4", "Z2^2", "S3"]), st.data())
def test_lattice_cocycle_tables(name, data):
    """Any tree-coordinate vector in the image of delta gives a genuine cocycle."""
    G = named_group(name)
    L = augmentation_lattice(G)
    ctx = LatticeCochains(L)
    D = ctx.coboundary_matrix()
    c = data.draw(st.lists(st.integers(-4, 4), min_size=D.shape[1], max_size=D.shape[1]))
    F = ctx.table(D @ np.array(c, dtype=np.int64))
    assert is_lattice_cocycle(L, F)
    assert ctx.coords(F) == (D @ np.array(c, dtype=np.int64)).tolist()


@pytest.mark.parametrize("name", ["Z2", "Z3", "Z2^2", "S3", "Q8"])
def test_h2_lattice_annihilated_by_order(name):
    G = named_group(name)
    for kind in ("trivial", "augmentation", "standard"):
        L = make_lattice(G, kind)
        if G.order**2 * L.rank > 4096:
            continue
        assert all(G.order % d == 0 for d in h2_lattice(G, L).invariant_factors)
