"""Exact linear algebra: Smith normal form, solvability, presentations."""
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st
from sympy import Matrix
from sympy.matrices.normalforms import invariant_factors

from charrig import zlin


def small_matrices(max_dim=8, lo=-5, hi=5):
    return st.integers(1, max_dim).flatmap(
        lambda m: st.integers(1, max_dim).flatmap(
            lambda n: st.lists(
                st.lists(st.integers(lo, hi), min_size=n, max_size=n),
                min_size=m, max_size=m)))


@settings(max_examples=60, deadline=None)
@given(small_matrices())
def test_snf_transforms_and_divisibility(a):
    f = zlin.smith_normal_form(a)
    assert zlin.mat_mul(zlin.mat_mul(f.U, a), f.V) == f.S
    m, n = f.shape
    assert zlin.mat_mul(f.U, f.Uinv) == zlin.identity(m)
    assert zlin.mat_mul(f.Vinv, f.V) == zlin.identity(n)
    assert abs(Matrix(f.U).det()) == 1
    assert abs(Matrix(f.V).det()) == 1
    nz = [d for d in f.diag if d]
    assert all(d > 0 for d in nz)
    assert all(nz[i + 1] % nz[i] == 0 for i in range(len(nz) - 1))


@settings(max_examples=40, deadline=None)
@given(small_matrices(max_dim=6))
def test_snf_matches_independent_oracle(a):
    f = zlin.smith_normal_form(a)
    expected = [int(d) for d in invariant_factors(Matrix(a)) if d != 0]
    assert [d for d in f.diag if d] == expected


def test_snf_examples():
    f = zlin.smith_normal_form([[2]])
    assert f.diag == (2,) and f.U == [[1]] and f.V == [[1]]
    z = zlin.smith_normal_form([[0, 0], [0, 0]])
    assert z.diag == (0, 0)
    assert z.U == zlin.identity(2) and z.V == zlin.identity(2)


def test_snf_is_deterministic():
    rng = random.Random(7)
    a = [[rng.randrange(-5, 6) for _ in range(5)] for _ in range(4)]
    f1 = zlin.smith_normal_form(a)
    f2 = zlin.smith_normal_form([row[:] for row in a])
    assert (f1.U, f1.V, f1.diag) == (f2.U, f2.V, f2.diag)


@settings(max_examples=50, deadline=None)
@given(small_matrices(max_dim=6), st.integers(0, 10**6))
def test_solve_integer_roundtrip(a, seed):
    rng = random.Random(seed)
    n = len(a[0])
    x0 = [rng.randrange(-3, 4) for _ in range(n)]
    b = zlin.mat_vec(a, x0)
    x = zlin.solve_integer(a, b)
    assert x is not None
    assert zlin.mat_vec(a, x) == b


def test_solve_integer_examples():
    assert zlin.solve_integer([[2]], [4]) == [2]
    assert zlin.solve_integer([[2]], [3]) is None


@settings(max_examples=30, deadline=None)
@given(small_matrices(max_dim=4, lo=-3, hi=3),
       st.lists(st.integers(-3, 3), min_size=4, max_size=4))
def test_solve_integer_unsolvable_confirmed_by_enumeration(a, braw):
    m = len(a)
    b = braw[:m]
    x = zlin.solve_integer(a, b)
    if x is not None:
        assert zlin.mat_vec(a, x) == b
        return
    # brute-force over the SNF-reduced system: solvability would demand
    # each diagonal d_i to divide (U b)_i and zero rows to match exactly
    f = zlin.smith_normal_form(a)
    c = zlin.mat_vec(f.U, b)
    solvable = True
    for i in range(m):
        if i < len(f.diag) and f.diag[i]:
            solvable = solvable and (c[i] % f.diag[i] == 0)
        else:
            solvable = solvable and (c[i] == 0)
    assert not solvable


def test_kernel_basis_examples():
    assert zlin.kernel_basis(zlin.identity(3)) == []
    assert zlin.kernel_basis([[0, 0], [0, 0]]) == [[1, 0], [0, 1]]


def test_kernel_basis_spans_and_is_exact():
    rng = random.Random(3)
    for _ in range(40):
        m, n = rng.randrange(1, 6), rng.randrange(1, 6)
        a = [[rng.randrange(-4, 5) for _ in range(n)] for _ in range(m)]
        K = zlin.kernel_basis(a)
        for col in K:
            assert all(v == 0 for v in zlin.mat_vec(a, col))
        # rank-nullity over Q
        assert len(K) == n - Matrix(a).rank()


def test_cokernel_examples():
    g = zlin.cokernel([[2]])
    assert (g.rank, g.torsion) == (0, (2,))
    empty = zlin.cokernel([], ambient=3)
    assert (empty.rank, empty.torsion) == (3, ())


def test_cokernel_order_matches_determinant_oracle():
    rng = random.Random(11)
    for _ in range(30):
        n = rng.randrange(1, 5)
        a = [[rng.randrange(-3, 4) for _ in range(n)] for _ in range(n)]
        det = Matrix(a).det()
        g = zlin.cokernel(a)
        if det != 0:
            assert g.order() == abs(det)
        else:
            assert g.order() is None


def test_fg_group_projection_left_inverse():
    rng = random.Random(5)
    for _ in range(25):
        m, n = rng.randrange(1, 5), rng.randrange(0, 5)
        a = [[rng.randrange(-4, 5) for _ in range(n)] for _ in range(m)]
        g = zlin.cokernel(a)
        for t in range(g.n_coords):
            e = [0] * g.n_coords
            e[t] = 1
            assert g.project(g.lift(e)) == tuple(e)
        # the image itself projects to zero
        for _ in range(3):
            x = [rng.randrange(-2, 3) for _ in range(n)]
            assert g.project(zlin.mat_vec(a, x)) == g.zero()


def test_solve_rational():
    x = zlin.solve_rational([[2, 1], [4, 2]], [3, 6])
    assert x is not None and 2 * x[0] + x[1] == 3
    assert zlin.solve_rational([[1], [1]], [1, 2]) is None
    assert zlin.solve_rational([], [], ncols=2) == [Fraction(0), Fraction(0)]


def test_shape_errors():
    with pytest.raises(zlin.ShapeError):
        zlin.solve_integer([[1, 2]], [1, 2])
    with pytest.raises(zlin.ShapeError):
        zlin.mat_vec([[1, 2]], [1])
