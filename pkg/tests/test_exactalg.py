import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from brunr.errors import ContainmentViolation, DimensionMismatch
from brunr.exactalg import (
    AbelianStructure,
    IntMatrix,
    ModMatrix,
    SmithForm,
    Subquotient,
    cokernel_structure,
    factorize,
    hermite_coordinates,
    hom_kernel,
    howell_coordinates,
    howell_form,
    integer_kernel,
    intersect_mod,
    invariant_factors_from_orders,
    kernel_mod,
    rank_mod_p,
    smith_normal_form,
    subquotient_structure,
)


def small_matrices(max_rows=4, max_cols=4, bound=9):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(
                st.lists(st.integers(-bound, bound), min_size=c, max_size=c), min_size=r, max_size=r
            )
        )
    )


def span_mod(rows, n, m):
    """All Z/m-combinations of ``rows`` (brute force, tiny cases only)."""
    out = {tuple([0] * n)}
    for r in rows:
        new = set()
        for v in out:
            for c in range(m):
                new.add(tuple((x + c * y) % m for x, y in zip(v, r)))
        out = new
    return out


# -- frozen values ---------------------------------------------------------


def test_snf_2x2_frozen():
    D, U, V = smith_normal_form(IntMatrix.from_rows([[2, 4], [6, 8]]))
    assert D.to_rows() == [[2, 0], [0, 4]]
    A = IntMatrix.from_rows([[2, 4], [6, 8]])
    assert (U @ A @ V).to_rows() == D.to_rows()
    assert abs(U.det()) == 1 and abs(V.det()) == 1


def test_snf_rectangular_frozen():
    D, _, _ = smith_normal_form(IntMatrix.from_rows([[4, 6, 8], [6, 9, 12]]))
    assert D.to_rows() == [[1, 0, 0], [0, 0, 0]]
    D, _, _ = smith_normal_form(IntMatrix.from_rows([[2, 0], [0, 3]]))
    assert D.to_rows() == [[1, 0], [0, 6]]


def test_cokernel_examples():
    st_ = cokernel_structure(IntMatrix.from_rows([[1, 0], [0, 6]]))
    assert st_.invariant_factors == (6,)
    st_ = cokernel_structure(IntMatrix.from_rows([[2, 0], [0, 0]]))
    assert st_.invariant_factors == (2,) and st_.free_rank == 1
    assert cokernel_structure(IntMatrix.identity(3)).is_trivial


def test_cokernel_rank_mismatch():
    with pytest.raises(DimensionMismatch):
        cokernel_structure(IntMatrix.identity(2), ambient_rank=3)


def test_abelian_structure_validation():
    with pytest.raises(ValueError):
        AbelianStructure((4, 2))
    with pytest.raises(ValueError):
        AbelianStructure((1, 2))
    A = AbelianStructure((2, 6))
    assert A.order == 12 and A.exponent == 6
    assert A.direct_sum(AbelianStructure((3,))).invariant_factors == (6, 6)
    assert str(AbelianStructure(())) in ("0", "trivial")


def test_invariant_factors_from_orders():
    assert invariant_factors_from_orders([2, 3, 4]) == (2, 12)
    assert invariant_factors_from_orders([2, 2, 2]) == (2, 2, 2)
    assert invariant_factors_from_orders([]) == ()


def test_factorize():
    assert factorize(360) == {2: 3, 3: 2, 5: 1}
    assert factorize(1) == {}


def test_howell_frozen():
    # over Z/12 the span of (4) contains (8) and (0); Howell form is [[4]]
    assert howell_form([[8]], 1, 12) == [[4]]
    # (2, 1) over Z/4: the annihilator row 2*(2,1) = (0, 2) must appear
    assert howell_form([[2, 1]], 2, 4) == [[2, 1], [0, 2]]


def test_kernel_mod_examples():
    assert kernel_mod(ModMatrix.from_rows([[1, -1]], 5)) == [(1, 1)]
    assert kernel_mod(ModMatrix.from_rows([[2]], 4)) == [(2,)]
    assert kernel_mod(ModMatrix.from_rows([[1, 0], [0, 1]], 7)) == []


def test_subquotient_examples():
    assert subquotient_structure([[1]], [[2]], 1, 4).invariant_factors == (2,)
    assert subquotient_structure([[1, 0], [0, 1]], [], 2, 3).invariant_factors == (3, 3)
    assert subquotient_structure([[1, 0]], [[1, 0]], 2, 5).is_trivial


def test_subquotient_containment():
    with pytest.raises(ContainmentViolation):
        Subquotient([[2]], [[1]], 1, 4)


def test_subquotient_coordinates_frozen():
    sq = Subquotient([[1, 0], [0, 1]], [[2, 0]], 2, 4)
    assert sq.invariant_factors == (2, 4)
    # coordinates are additive and kill the denominator
    a, b = [1, 3], [3, 2]
    s = [(x + y) % 4 for x, y in zip(a, b)]
    ca, cb, cs = sq.coordinates(a), sq.coordinates(b), sq.coordinates(s)
    assert cs == [(x + y) % d for x, y, d in zip(ca, cb, sq.invariant_factors)]
    assert sq.coordinates([2, 0]) == [0, 0]


def test_hom_kernel_frozen():
    # Z/4 -> Z/2 reduction: kernel is 2Z/4 = Z/2
    sq = hom_kernel([[1]], [4], [2])
    assert sq.invariant_factors == (2,)
    # Z/6 -> Z/2 x Z/3 (CRT) is injective
    sq = hom_kernel([[1, 1]], [6], [2, 3])
    assert sq.invariant_factors == ()


def test_integer_kernel_and_hermite():
    K = integer_kernel([[1, 1, 1]], 3)
    assert len(K) == 2
    for v in K:
        assert sum(v) == 0
    assert hermite_coordinates(K, [1, -1, 0]) is not None
    assert hermite_coordinates(K, [1, 0, 0]) is None


def test_rank_mod_p():
    assert rank_mod_p([[1, 2], [2, 4]], 2, 5) == 1
    assert rank_mod_p([[1, 2], [2, 4]], 2, 3) == 1
    assert rank_mod_p([[1, 1], [1, 2]], 2, 3) == 2


def test_modmatrix_shape_check():
    with pytest.raises(DimensionMismatch):
        ModMatrix(5, 2, 2, (1, 2, 3))


# -- properties ------------------------------------------------------------


@settings(max_examples=80, deadline=None)
@given(small_matrices())
def test_snf_properties(rows):
    A = IntMatrix.from_rows(rows)
    D, U, V = smith_normal_form(A)
    assert (U @ A @ V).to_rows() == D.to_rows()
    assert abs(U.det()) == 1 and abs(V.det()) == 1
    diag = [D[i, i] for i in range(min(D.rows, D.cols))]
    nz = [d for d in diag if d]
    assert all(d > 0 for d in nz)
    assert diag[: len(nz)] == nz  # zeros last
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))


@settings(max_examples=80, deadline=None)
@given(small_matrices(3, 3, 20))
def test_smithform_u_inverse(rows):
    sf = SmithForm(rows, len(rows[0]))
    v = [random.Random(len(rows)).randint(-5, 5) for _ in rows]
    assert sf.apply_u_inverse(sf.apply_u(v)) == v


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([4, 6, 8, 9, 12]), small_matrices(3, 3, 11))
def test_howell_span_and_canonicity(m, rows):
    n = len(rows[0])
    rows = [[x % m for x in r] for r in rows]
    H = howell_form(rows, n, m)
    assert span_mod(H, n, m) == span_mod(rows, n, m)
    # canonical: a different generating set of the same module gives the same form
    shuffled = list(reversed(rows)) + [[(a + b) % m for a, b in zip(rows[0], rows[-1])]]
    assert howell_form(shuffled, n, m) == H
    for v in span_mod(rows, n, m):
        c = howell_coordinates(H, v, m)
        assert c is not None
        assert [sum(ci * h[j] for ci, h in zip(c, H)) % m for j in range(n)] == list(v)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([2, 4, 6, 9]), small_matrices(3, 3, 9))
def test_kernel_mod_is_full_kernel(m, rows):
    n = len(rows[0])
    K = kernel_mod(ModMatrix.from_rows(rows, m, n))
    brute = {v for v in itertools.product(range(m), repeat=n)
             if all(sum(a * x for a, x in zip(r, v)) % m == 0 for r in rows)}
    assert span_mod(K, n, m) == brute


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([4, 6]), small_matrices(2, 2, 6), small_matrices(2, 2, 6))
def test_intersect_mod(m, U, V):
    U = [r[:2] + [0] * (2 - len(r)) for r in U]
    V = [r[:2] + [0] * (2 - len(r)) for r in V]
    W = intersect_mod(U, V, 2, m)
    assert span_mod(W, 2, m) == span_mod(U, 2, m) & span_mod(V, 2, m)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([4, 6, 8]), small_matrices(3, 2, 9), st.integers(0, 3))
def test_subquotient_order(m, num, k):
    num = [[x % m for x in r] for r in num]
    n = len(num[0])
    den = [[(k * x) % m for x in r] for r in num]
    sq = Subquotient(num, den, n, m)
    assert sq.structure().order == len(span_mod(num, n, m)) // len(span_mod(den, n, m))
