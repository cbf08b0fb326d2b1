from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from extrikit.linalg import (Matrix, QQ_FIELD, Subspace, field, image_basis, intersect_subspaces,
                             inverse, kernel_basis, kronecker_tensor, left_inverse,
                             preimage_of_subspace, rank, solve, sum_subspaces, cokernel_section)

entries = st.integers(min_value=-3, max_value=3)


@st.composite
def matrices(draw, max_dim=5):
    r = draw(st.integers(0, max_dim))
    c = draw(st.integers(0, max_dim))
    rows = [[draw(entries) for _ in range(c)] for _ in range(r)]
    return Matrix.from_rows(QQ_FIELD, rows, cols=c), rows, r, c


def _sympy_rank(rows, r, c):
    if not r or not c:
        return 0
    return sympy.Matrix(rows).rank()


@given(matrices())
def test_rank_matches_sympy(data):
    m, rows, r, c = data
    assert rank(m) == _sympy_rank(rows, r, c)


@given(matrices())
def test_rank_nullity(data):
    m, _, _, c = data
    ker = kernel_basis(m)
    assert ker.dim + rank(m) == c
    assert (m @ ker.basis).is_zero()


@given(matrices())
def test_cokernel_section(data):
    m, _, r, _ = data
    P, S = cokernel_section(m)
    assert P.rows == r - rank(m)
    assert (P @ m).is_zero()
    assert P @ S == Matrix.identity(QQ_FIELD, P.rows)


@given(matrices(), st.lists(entries, min_size=5, max_size=5))
def test_solve_consistent(data, xs):
    m, _, _, c = data
    x = Matrix.column(QQ_FIELD, xs[:c])
    b = m @ x
    sol = solve(m, b)
    assert sol is not None
    assert m @ sol.particular == b


@given(matrices(), matrices())
@settings(max_examples=40)
def test_sum_and_intersection_dimensions(a, b):
    ma, mb = a[0], b[0]
    if ma.rows != mb.rows:
        return
    A, B = image_basis(ma), image_basis(mb)
    assert sum_subspaces(A, B).dim + intersect_subspaces(A, B).dim == A.dim + B.dim


@given(matrices())
@settings(max_examples=40)
def test_preimage_of_zero_is_kernel(data):
    m, *_ = data
    assert preimage_of_subspace(m, Subspace.zero(QQ_FIELD, m.rows)) == kernel_basis(m)


def test_inverse_and_left_inverse():
    m = Matrix.from_rows(QQ_FIELD, [[2, 1], [1, 1]])
    assert m @ inverse(m) == Matrix.identity(QQ_FIELD, 2)
    t = Matrix.from_rows(QQ_FIELD, [[1, 0], [0, 1], [1, 1]])
    assert left_inverse(t) @ t == Matrix.identity(QQ_FIELD, 2)


def test_rationals_are_exact():
    m = Matrix.from_rows(QQ_FIELD, [[Fraction(1, 3), Fraction(2, 3)], [1, 2]])
    assert rank(m) == 1


def test_finite_field_rank_differs():
    rows = [[1, 1], [1, -1]]
    assert rank(Matrix.from_rows(QQ_FIELD, rows)) == 2
    assert rank(Matrix.from_rows(field(2), rows)) == 1


def test_non_prime_characteristic_rejected():
    with pytest.raises(ValueError):
        field(4)


def test_kronecker_first_factor_major():
    a = Matrix.from_rows(QQ_FIELD, [[1, 2]])
    b = Matrix.from_rows(QQ_FIELD, [[0, 1], [1, 0]])
    k = kronecker_tensor(a, b)
    assert k.to_rows() == [[0, 1, 0, 2], [1, 0, 2, 0]]
