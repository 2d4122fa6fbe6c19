import itertools
from fractions import Fraction
from math import gcd

from hypothesis import given, settings
from hypothesis import strategies as st

from tordiv import linalg


def small_matrix(max_rows=4, max_cols=4, lo=-6, hi=6):
    return st.integers(1, max_rows).flatmap(
        lambda m: st.integers(1, max_cols).flatmap(
            lambda n: st.lists(st.lists(st.integers(lo, hi), min_size=n, max_size=n), min_size=m, max_size=m)
        )
    )


def determinantal_divisors(M):
    """``d_k`` = gcd of all k x k minors; elementary divisors are ``d_k / d_{k-1}``."""
    m, n = len(M), len(M[0])
    out = []
    prev = 1
    for k in range(1, min(m, n) + 1):
        g = 0
        for rows in itertools.combinations(range(m), k):
            for cols in itertools.combinations(range(n), k):
                g = gcd(g, int(linalg.determinant([[M[i][j] for j in cols] for i in rows])))
        if g == 0:
            out.extend([0] * (min(m, n) - k + 1))
            break
        out.append(g // prev)
        prev = g
    return out


def is_unimodular(U):
    return abs(linalg.determinant(U)) == 1


@settings(max_examples=150, deadline=None)
@given(small_matrix())
def test_smith_form_transforms_and_divisibility(M):
    U, D, V = linalg.smith_normal_form(M)
    assert linalg.mat_mul(linalg.mat_mul(U, M), V) == D
    assert is_unimodular(U) and is_unimodular(V)
    diag = [D[i][i] for i in range(min(len(M), len(M[0])))]
    for i, row in enumerate(D):
        for j, x in enumerate(row):
            if i != j:
                assert x == 0
    assert all(x >= 0 for x in diag)
    for a, b in zip(diag, diag[1:]):
        assert (a == 0 and b == 0) or (a != 0 and b % a == 0)


@settings(max_examples=100, deadline=None)
@given(small_matrix(3, 3))
def test_elementary_divisors_match_minor_gcds(M):
    assert linalg.elementary_divisors(M) == determinantal_divisors(M)


@settings(max_examples=150, deadline=None)
@given(small_matrix())
def test_hermite_form_shape(M):
    H, U = linalg.hermite_normal_form(M)
    assert linalg.mat_mul(U, M) == H
    assert is_unimodular(U)
    last_pivot = -1
    seen_zero = False
    for r, row in enumerate(H):
        nz = [j for j, x in enumerate(row) if x]
        if not nz:
            seen_zero = True
            continue
        assert not seen_zero
        p = nz[0]
        assert p > last_pivot and row[p] > 0
        for i in range(r):
            assert 0 <= H[i][p] < row[p]
        last_pivot = p


@settings(max_examples=100, deadline=None)
@given(small_matrix(3, 3), st.lists(st.integers(-3, 3), min_size=9, max_size=9))
def test_hermite_form_is_invariant_under_left_unimodular(M, entries):
    m = len(M)
    # a unimodular matrix built from elementary row operations
    W = linalg.identity(m)
    for k, c in enumerate(entries):
        i, j = k % m, (k + 1) % m
        if i != j:
            W[i] = [a + c * b for a, b in zip(W[i], W[j])]
    assert linalg.hermite_normal_form(linalg.mat_mul(W, M))[0] == linalg.hermite_normal_form(M)[0]


@settings(max_examples=100, deadline=None)
@given(small_matrix(3, 5))
def test_integer_kernel_is_saturated_basis(A):
    K = linalg.integer_kernel(A)
    n = len(A[0])
    assert len(K) == n - linalg.rank(A)
    for v in K:
        assert all(x == 0 for x in linalg.mat_vec(A, v))
    if K:
        assert linalg.saturation_index(K) == 1


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(-5, 5), min_size=4, max_size=4))
def test_complete_to_basis(v):
    if not any(v):
        return
    g = linalg.vec_gcd(v)
    v = [x // g for x in v]
    B = linalg.complete_to_basis([v], 4)
    assert B[0] == v and is_unimodular(B)


def test_complete_to_basis_rejects_non_saturated():
    try:
        linalg.complete_to_basis([[2, 0]], 2)
    except ValueError:
        return
    raise AssertionError("expected ValueError")


def test_saturation_index():
    assert linalg.saturation_index([[1, 1], [1, -1]]) == 2
    assert linalg.saturation_index([[1, 0, 0], [0, 3, 0]]) == 3
    assert linalg.saturation_index([[1, 2], [2, 4]]) == 0


@settings(max_examples=100, deadline=None)
@given(small_matrix(3, 4, -3, 3), st.lists(st.integers(-3, 3), min_size=3, max_size=3))
def test_feasible_nonneg_certificate(A, b):
    b = b[: len(A)]
    x = linalg.feasible_nonneg(A, b)
    if x is not None:
        assert all(t >= 0 for t in x)
        assert linalg.mat_vec(A, x) == [Fraction(t) for t in b]
    else:
        # no non-negative integer point in a small box either
        n = len(A[0])
        for y in itertools.product(range(4), repeat=n):
            assert linalg.mat_vec(A, y) != list(b)


def test_feasible_nonneg_infeasible():
    assert linalg.feasible_nonneg([[1, 1]], [-1]) is None
    assert linalg.feasible_nonneg([[1, -1]], [0]) is not None


def test_solve_integer():
    assert linalg.solve_integer([[2, 0], [0, 3]], [4, 9]) == [2, 3]
    assert linalg.solve_integer([[2, 0], [0, 3]], [1, 9]) is None


def test_determinant_and_inverse():
    M = [[2, 1, 0], [1, 2, 1], [0, 1, 2]]
    assert linalg.determinant(M) == 4
    assert linalg.mat_mul(M, linalg.inverse(M)) == linalg.identity(3)
