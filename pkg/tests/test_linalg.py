from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from digitfn import linalg as la

small = st.integers(min_value=-5, max_value=5)


def matrices(n):
    return st.lists(st.lists(small, min_size=n, max_size=n), min_size=n, max_size=n)


def test_frac_rejects_floats():
    with pytest.raises(TypeError):
        la.frac(0.1)
    assert la.frac("3/6") == Fraction(1, 2)


def test_rank_examples():
    assert la.rank([[1, 2], [2, 4]]) == 1
    assert la.rank([[1, 13], [0, 2]]) == 2
    assert la.rank([[0, 0], [0, 0]]) == 0
    assert la.rank([["1/2", "1/3"], ["3/2", 1]]) == 1


@given(matrices(3), st.lists(small, min_size=3, max_size=3))
def test_solve_inverts(a, b):
    A = la.mat(a)
    if la.rank(A) < 3:
        with pytest.raises(ZeroDivisionError):
            la.solve(A, b)
        return
    x = la.solve(A, b)
    assert la.mat_vec(A, x) == la.vec(b)


@given(matrices(3))
def test_rank_matches_echelon_basis(a):
    assert la.rank(a) == len(la.span_basis(a, 3))


@given(matrices(2), matrices(2), matrices(2))
def test_kron_mixed_product(a, b, c):
    A, B, C = la.mat(a), la.mat(b), la.mat(c)
    lhs = la.mat_mul(la.kron(A, B), la.kron(C, C))
    rhs = la.kron(la.mat_mul(A, C), la.mat_mul(B, C))
    assert lhs == rhs


def test_echelon_coordinates():
    basis = la.span_basis([[1, 0, 1], [0, 1, 1]], 3)
    assert basis.contains([2, 3, 5])
    assert basis.coordinates([2, 3, 5]) == [2, 3]
    assert not basis.contains([0, 0, 1])
    with pytest.raises(ValueError):
        basis.coordinates([0, 0, 1])


def test_mat_pow():
    M = la.mat([[1, 1], [0, 1]])
    assert la.mat_pow(M, 5) == la.mat([[1, 5], [0, 1]])
    assert la.mat_pow(M, 0) == la.identity(2)


def test_fmt():
    assert la.fmt(Fraction(2, 27)) == "2/27"
    assert la.fmt(Fraction(4)) == "4"
