from fractions import Fraction

import numpy as np
import pytest
import sympy

from seplinf.exact import bareiss_echelon, nullspace, primitive_integer_vector, rank, same_row_space


def _random_int_matrix(rng, m, n, r):
    # product of m x r and r x n integer factors has rank <= r
    a = rng.integers(-3, 4, size=(m, r))
    b = rng.integers(-3, 4, size=(r, n))
    return (a @ b).tolist()


@pytest.mark.parametrize("seed", range(25))
def test_rank_matches_sympy(seed):
    rng = np.random.default_rng(seed)
    m, n = rng.integers(1, 8, size=2)
    r = int(rng.integers(0, min(m, n) + 1))
    A = _random_int_matrix(rng, int(m), int(n), max(r, 1))
    assert rank(A) == sympy.Matrix(A).rank()


@pytest.mark.parametrize("seed", range(25))
def test_nullspace_is_kernel_with_right_dimension(seed):
    rng = np.random.default_rng(100 + seed)
    m, n = int(rng.integers(1, 7)), int(rng.integers(1, 9))
    A = _random_int_matrix(rng, m, n, int(rng.integers(1, min(m, n) + 1)))
    basis = nullspace(A, n)
    assert len(basis) == n - sympy.Matrix(A).rank()
    for v in basis:
        assert all(sum(Fraction(a) * x for a, x in zip(row, v)) == 0 for row in A)
    if basis:
        assert sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in v] for v in basis]).rank() == len(basis)


def test_echelon_pivots_and_fraction_input():
    rows = [[Fraction(1, 2), Fraction(1, 3)], [1, Fraction(2, 3)]]
    ech, piv = bareiss_echelon(rows)
    assert piv == [0]
    assert all(isinstance(v, int) for r in ech for v in r)


def test_primitive_integer_vector():
    assert primitive_integer_vector([Fraction(1, 2), Fraction(-3, 4), 0]) == [2, -3, 0]
    assert primitive_integer_vector([Fraction(6), Fraction(9)]) == [2, 3]


def test_same_row_space():
    a = [[1, 0, 1], [0, 1, 1]]
    assert same_row_space(a, [[1, 1, 2], [1, -1, 0]])
    assert not same_row_space(a, [[1, 0, 0], [0, 1, 1]])
