import numpy as np
import pytest
from sympy import Matrix, Poly, symbols

from grouplen.src.core.errors import ContractViolationError
from grouplen.src.core.linalg import (
    PrimeFieldMatrix,
    charpoly,
    determinant,
    evaluate_polynomial,
    factor_polynomial,
    inverse,
    left_nullspace,
    matmul,
    nullspace,
    rank,
    rref,
)

A = np.array([[1, 2, 0, 3], [0, 1, 4, 1], [2, 0, 1, 1], [3, 3, 4, 0]], dtype=np.int64)


def test_rref_and_rank():
    R, pivots = rref(np.array([[2, 4, 1], [1, 2, 4]]), 5)
    assert pivots == [0, 2]
    assert R.tolist() == [[1, 2, 0], [0, 0, 1]]
    assert rank(np.array([[1, 2], [2, 4]]), 7) == 1


def test_nullspaces():
    M = np.array([[1, 2, 3], [2, 4, 6]])
    N = nullspace(M, 7)
    assert N.shape == (2, 3)
    assert not matmul(M, N.T, 7).any()
    L = left_nullspace(M, 7)
    assert L.shape == (1, 2)
    assert not matmul(L, M, 7).any()


def test_inverse_and_determinant():
    q = 5
    B = inverse(A, q)
    assert (matmul(A, B, q) == np.eye(4, dtype=np.int64)).all()
    assert determinant(A, q) == int(Matrix(A.tolist()).det()) % q
    with pytest.raises(ContractViolationError):
        inverse(np.array([[1, 2], [2, 4]]), 5)


@pytest.mark.parametrize("q", [2, 3, 7])
def test_charpoly_matches_sympy(q):
    x = symbols("x")
    expected = Poly(Matrix(A.tolist()).charpoly(x).as_expr(), x, modulus=q)
    coefficients = [int(c) % q for c in reversed(expected.all_coeffs())]
    assert charpoly(A, q).tolist() == coefficients


def test_cayley_hamilton():
    q = 7
    assert not evaluate_polynomial(charpoly(A, q), A, q).any()


def test_factor_polynomial_is_monic_and_sorted():
    # x^2 - 1 = (x + 1)(x + 4) over F_5
    factors = factor_polynomial([4, 0, 1], 5)
    assert [f.tolist() for f, _ in factors] == [[1, 1], [4, 1]]
    # x^2 + 1 is irreducible over F_3
    assert [(f.tolist(), m) for f, m in factor_polynomial([1, 0, 1], 3)] == [([1, 0, 1], 1)]


class TestPrimeFieldMatrix:
    def test_arithmetic(self):
        M = PrimeFieldMatrix([[1, 1], [0, 1]], 5)
        assert (M ** 5).is_identity()
        assert (M @ M.inverse()).is_identity()
        assert (M + M) == 2 * M
        assert M.determinant() == 1
        assert M.is_invertible()
        assert not PrimeFieldMatrix([[1, 2], [2, 4]], 7).is_invertible()

    def test_reduces_entries(self):
        assert PrimeFieldMatrix([[7, -1]], 5).key() == (2, 4)

    def test_nullspace_is_left(self):
        M = PrimeFieldMatrix([[1, 2], [2, 4]], 7)
        N = M.nullspace()
        assert (N @ M).key() == (0, 0)
        assert M.nullity() == 1

    def test_rejects_composite_modulus(self):
        with pytest.raises(ContractViolationError):
            PrimeFieldMatrix([[1]], 4)

    def test_rejects_mixed_moduli(self):
        with pytest.raises(ContractViolationError):
            PrimeFieldMatrix([[1]], 5) + PrimeFieldMatrix([[1]], 7)
