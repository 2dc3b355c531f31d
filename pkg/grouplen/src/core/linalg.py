"""
Dense linear algebra over prime fields on numpy int64 arrays.

Vectors are rows and matrices act on the right (v -> v @ A). The module-level
functions take and return plain arrays with entries in [0, q); the
`PrimeFieldMatrix` wrapper carries the modulus along for typed call sites.
"""

from __future__ import annotations

from functools import lru_cache
from typing import List, Sequence, Tuple, Union

import numpy as np
from sympy import Poly, isprime, symbols

from .errors import ContractViolationError

_X = symbols("x")

# float64 products are exact while every partial sum stays below 2**53
_FLOAT_EXACT = 2 ** 52


@lru_cache(maxsize=None)
def check_modulus(q: int) -> int:
    if not isprime(q):
        raise ContractViolationError(f"modulus {q} is not prime")
    return q


def mod(A, q: int) -> np.ndarray:
    return np.asarray(A, dtype=np.int64) % q


def matmul(A: np.ndarray, B: np.ndarray, q: int) -> np.ndarray:
    if A.shape[-1] * (q - 1) ** 2 < _FLOAT_EXACT and A.ndim == 2 and B.ndim == 2 and A.size and B.size:
        product = np.rint(A.astype(np.float64) @ B.astype(np.float64)).astype(np.int64)
        return product % q
    return (A @ B) % q


def rref(A: np.ndarray, q: int) -> Tuple[np.ndarray, List[int]]:
    """Reduced row echelon form; returns (the rank nonzero rows, pivot columns)."""
    R = mod(A, q).copy()
    if R.ndim != 2:
        raise ContractViolationError("rref expects a matrix")
    rows, cols = R.shape
    pivots: List[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nonzero = np.nonzero(R[r:, c])[0]
        if nonzero.size == 0:
            continue
        i = r + int(nonzero[0])
        if i != r:
            R[[r, i]] = R[[i, r]]
        R[r] = (R[r] * pow(int(R[r, c]), -1, q)) % q
        column = R[:, c].copy()
        column[r] = 0
        targets = np.nonzero(column)[0]
        if targets.size:
            R[targets] = (R[targets] - np.outer(column[targets], R[r])) % q
        pivots.append(c)
        r += 1
    return R[:r], pivots


def rank(A: np.ndarray, q: int) -> int:
    return len(rref(A, q)[1])


def nullspace(A: np.ndarray, q: int) -> np.ndarray:
    """Rows spanning {x : A @ x = 0}, in reduced form."""
    R, pivots = rref(A, q)
    n = A.shape[1]
    pivot_set = set(pivots)
    free = [c for c in range(n) if c not in pivot_set]
    basis = np.zeros((len(free), n), dtype=np.int64)
    if free:
        basis[np.arange(len(free)), free] = 1
        if pivots:
            basis[:, pivots] = (-R[:, free].T) % q
    return basis


def left_nullspace(A: np.ndarray, q: int) -> np.ndarray:
    """Rows spanning {v : v @ A = 0}."""
    return nullspace(A.T, q)


def reduce_rows(C: np.ndarray, E: np.ndarray, pivots: Sequence[int], q: int) -> np.ndarray:
    """Residues of the rows of C modulo the row space of E (E in reduced echelon form)."""
    if not len(pivots):
        return mod(C, q)
    return (C - matmul(C[:, list(pivots)], E, q)) % q


def inverse(A: np.ndarray, q: int) -> np.ndarray:
    n = A.shape[0]
    if A.shape != (n, n):
        raise ContractViolationError("only square matrices are invertible")
    R, pivots = rref(np.concatenate([mod(A, q), np.eye(n, dtype=np.int64)], axis=1), q)
    if pivots[:n] != list(range(n)) or len(R) < n:
        raise ContractViolationError("matrix is singular")
    return R[:n, n:]


def determinant(A: np.ndarray, q: int) -> int:
    M = mod(A, q).copy()
    n = M.shape[0]
    det = 1
    for c in range(n):
        nonzero = np.nonzero(M[c:, c])[0]
        if nonzero.size == 0:
            return 0
        i = c + int(nonzero[0])
        if i != c:
            M[[c, i]] = M[[i, c]]
            det = -det
        det = det * int(M[c, c]) % q
        inv = pow(int(M[c, c]), -1, q)
        factors = (M[c + 1:, c] * inv) % q
        M[c + 1:] = (M[c + 1:] - np.outer(factors, M[c])) % q
    return det % q


def hessenberg(A: np.ndarray, q: int) -> np.ndarray:
    """Upper Hessenberg matrix similar to A."""
    H = mod(A, q).copy()
    n = H.shape[0]
    for j in range(n - 2):
        if H[j + 1, j] == 0:
            nonzero = np.nonzero(H[j + 2:, j])[0]
            if nonzero.size == 0:
                continue
            i = j + 2 + int(nonzero[0])
            H[[j + 1, i]] = H[[i, j + 1]]
            H[:, [j + 1, i]] = H[:, [i, j + 1]]
        multipliers = (H[j + 2:, j] * pow(int(H[j + 1, j]), -1, q)) % q
        if not multipliers.any():
            continue
        H[j + 2:] = (H[j + 2:] - np.outer(multipliers, H[j + 1])) % q
        H[:, j + 1] = (H[:, j + 1] + H[:, j + 2:] @ multipliers) % q
    return H


def charpoly(A: np.ndarray, q: int) -> np.ndarray:
    """Monic characteristic polynomial, coefficients from the constant term upwards."""
    H = hessenberg(A, q)
    n = H.shape[0]
    P = np.zeros((n + 1, n + 1), dtype=np.int64)
    P[0, 0] = 1
    for m in range(1, n + 1):
        c = m - 1
        current = np.zeros(n + 1, dtype=np.int64)
        current[1:] = P[m - 1, :-1]
        current = (current - H[c, c] * P[m - 1]) % q
        if m > 1:
            weights = np.zeros(m - 1, dtype=np.int64)
            running = 1
            for i in range(1, m):
                running = running * int(H[c - i + 1, c - i]) % q
                weights[i - 1] = int(H[c - i, c]) * running % q
            # rows m-2, m-3, ..., 0 pair with i = 1, ..., m-1
            current = (current - weights @ P[m - 2::-1][:m - 1]) % q
        P[m] = current
    return P[n]


def factor_polynomial(coefficients: Sequence[int], q: int) -> List[Tuple[np.ndarray, int]]:
    """Monic irreducible factors over F_q with multiplicities, sorted by (degree, coefficients)."""
    poly = Poly([int(c) for c in reversed(list(coefficients))], _X, modulus=q)
    _, factors = poly.factor_list()
    result = []
    for factor, multiplicity in factors:
        coeffs = [int(c) % q for c in reversed(factor.all_coeffs())]
        lead_inverse = pow(coeffs[-1], -1, q)
        result.append((np.array([c * lead_inverse % q for c in coeffs], dtype=np.int64), int(multiplicity)))
    result.sort(key=lambda item: (len(item[0]), tuple(item[0][::-1])))
    return result


def evaluate_polynomial(coefficients: Sequence[int], A: np.ndarray, q: int) -> np.ndarray:
    """f(A) by Horner's rule, coefficients from the constant term upwards."""
    n = A.shape[0]
    identity = np.eye(n, dtype=np.int64)
    result = np.zeros((n, n), dtype=np.int64)
    for c in reversed(list(coefficients)):
        result = (matmul(result, A, q) + int(c) * identity) % q
    return result


class PrimeFieldMatrix:
    """An immutable matrix over F_q."""

    __slots__ = ("_array", "modulus")

    def __init__(self, entries, modulus: int):
        self.modulus = check_modulus(int(modulus))
        array = mod(entries, self.modulus)
        if array.ndim != 2:
            raise ContractViolationError("a matrix needs two dimensions")
        array.setflags(write=False)
        self._array = array

    @classmethod
    def identity(cls, n: int, modulus: int) -> "PrimeFieldMatrix":
        return cls(np.eye(n, dtype=np.int64), modulus)

    @classmethod
    def zeros(cls, rows: int, cols: int, modulus: int) -> "PrimeFieldMatrix":
        return cls(np.zeros((rows, cols), dtype=np.int64), modulus)

    @property
    def array(self) -> np.ndarray:
        return self._array

    @property
    def rows(self) -> int:
        return int(self._array.shape[0])

    @property
    def cols(self) -> int:
        return int(self._array.shape[1])

    @property
    def shape(self) -> Tuple[int, int]:
        return self.rows, self.cols

    @property
    def T(self) -> "PrimeFieldMatrix":
        return PrimeFieldMatrix(self._array.T, self.modulus)

    def _check(self, other: "PrimeFieldMatrix") -> None:
        if other.modulus != self.modulus:
            raise ContractViolationError(f"moduli {self.modulus} and {other.modulus} differ")

    def __add__(self, other: "PrimeFieldMatrix") -> "PrimeFieldMatrix":
        self._check(other)
        return PrimeFieldMatrix(self._array + other._array, self.modulus)

    def __sub__(self, other: "PrimeFieldMatrix") -> "PrimeFieldMatrix":
        self._check(other)
        return PrimeFieldMatrix(self._array - other._array, self.modulus)

    def __neg__(self) -> "PrimeFieldMatrix":
        return PrimeFieldMatrix(-self._array, self.modulus)

    def __matmul__(self, other: "PrimeFieldMatrix") -> "PrimeFieldMatrix":
        self._check(other)
        if self.cols != other.rows:
            raise ContractViolationError(f"cannot multiply {self.shape} by {other.shape}")
        return PrimeFieldMatrix(matmul(self._array, other._array, self.modulus), self.modulus)

    def __mul__(self, other: Union[int, "PrimeFieldMatrix"]) -> "PrimeFieldMatrix":
        if isinstance(other, PrimeFieldMatrix):
            return self @ other
        return self.scale(int(other))

    def scale(self, c: int) -> "PrimeFieldMatrix":
        return PrimeFieldMatrix(self._array * int(c), self.modulus)

    def __rmul__(self, c: int) -> "PrimeFieldMatrix":
        return self.scale(c)

    def __pow__(self, exponent: int) -> "PrimeFieldMatrix":
        base = self if exponent >= 0 else self.inverse()
        result = PrimeFieldMatrix.identity(self.rows, self.modulus)
        n = abs(exponent)
        while n:
            if n & 1:
                result = result @ base
            base = base @ base
            n >>= 1
        return result

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PrimeFieldMatrix):
            return NotImplemented
        return self.modulus == other.modulus and np.array_equal(self._array, other._array)

    def __hash__(self) -> int:
        return hash((self.modulus, self.shape, self._array.tobytes()))

    def key(self) -> Tuple[int, ...]:
        return tuple(int(x) for x in self._array.ravel())

    def is_identity(self) -> bool:
        return self.rows == self.cols and np.array_equal(self._array, np.eye(self.rows, dtype=np.int64))

    def rref(self) -> Tuple["PrimeFieldMatrix", List[int]]:
        R, pivots = rref(self._array, self.modulus)
        return PrimeFieldMatrix(R.reshape(len(pivots), self.cols), self.modulus), pivots

    def rank(self) -> int:
        return rank(self._array, self.modulus)

    def nullity(self) -> int:
        return self.cols - self.rank()

    def nullspace(self) -> "PrimeFieldMatrix":
        """Left nullspace: rows v with v @ self = 0."""
        return PrimeFieldMatrix(left_nullspace(self._array, self.modulus).reshape(-1, self.rows), self.modulus)

    def inverse(self) -> "PrimeFieldMatrix":
        return PrimeFieldMatrix(inverse(self._array, self.modulus), self.modulus)

    def determinant(self) -> int:
        if self.rows != self.cols:
            raise ContractViolationError("determinant of a non-square matrix")
        return determinant(self._array, self.modulus)

    def is_invertible(self) -> bool:
        return self.rows == self.cols and self.determinant() != 0

    def charpoly(self) -> List[int]:
        if self.rows != self.cols:
            raise ContractViolationError("characteristic polynomial of a non-square matrix")
        return [int(c) for c in charpoly(self._array, self.modulus)]

    def evaluate(self, coefficients: Sequence[int]) -> "PrimeFieldMatrix":
        """f(self) for f given from the constant term upwards."""
        return PrimeFieldMatrix(evaluate_polynomial(coefficients, self._array, self.modulus), self.modulus)

    def __repr__(self) -> str:
        return f"PrimeFieldMatrix({self._array.tolist()}, modulus={self.modulus})"
