"""Smith normal form over the integers with exact object-dtype arithmetic.

Every routine works on ``numpy`` arrays of Python integers, so entries never
overflow. Row and column operations are tracked together with their
inverses, since ``np.linalg.inv`` only works for floats.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

from ..exceptions import SmithFormError


def as_integer_matrix(matrix: Iterable) -> np.ndarray:
    array = np.array(matrix, dtype=object)
    if array.ndim != 2:
        raise ValueError("expected a two-dimensional matrix")
    return np.vectorize(int, otypes=[object])(array) if array.size else array.reshape(array.shape)


def identity(size: int) -> np.ndarray:
    eye = np.zeros((size, size), dtype=object)
    for i in range(size):
        eye[i, i] = 1
    return eye


def zeros(rows: int, cols: int) -> np.ndarray:
    return np.zeros((rows, cols), dtype=object)


def matrix_power(matrix: np.ndarray, exponent: int) -> np.ndarray:
    if exponent < 0:
        raise ValueError("negative exponents are not supported")
    result = identity(matrix.shape[0])
    for _ in range(exponent):
        result = result @ matrix
    return result


def block_diagonal(*blocks: np.ndarray) -> np.ndarray:
    rows = sum(b.shape[0] for b in blocks)
    cols = sum(b.shape[1] for b in blocks)
    result = zeros(rows, cols)
    r = c = 0
    for block in blocks:
        result[r:r + block.shape[0], c:c + block.shape[1]] = block
        r += block.shape[0]
        c += block.shape[1]
    return result


def exgcd(a: int, b: int) -> np.ndarray:
    """A 2x2 integer matrix ``M`` of determinant 1 with ``M @ [a, b] = [gcd(a, b), 0]``.

    If ``a`` divides ``b``, ``M[0, 1]`` is 0.
    """

    a_sign = -1 if a < 0 else 1
    a *= a_sign
    b_sign = -1 if b < 0 else 1
    b *= b_sign

    # Euclid on the column [a, b], tracking the row operations in an identity block.
    M = np.array([[a, 1, 0], [b, 0, 1]], dtype=object)
    M = M[::-1]
    while M[1, 0] != 0:
        q = M[0, 0] // M[1, 0]
        M[0] -= q * M[1]
        M = M[::-1]

    g = M[0, 0]
    M = M[:, 1:].copy()
    M *= [a_sign, b_sign]
    if g != 0:
        M[1] = [-b_sign * b // g, a_sign * a // g]
    return M


def inv_2x2_det1(M: np.ndarray) -> np.ndarray:
    """Inverse of a 2x2 matrix with determinant 1."""

    if M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0] != 1:
        raise SmithFormError("elementary operation is not unimodular")
    return np.array([[M[1, 1], -M[0, 1]], [-M[1, 0], M[0, 0]]], dtype=object)


@dataclass(frozen=True)
class SmithForm:
    """``A = U @ D @ V`` with ``D`` diagonal and ``d_1 | d_2 | ... | d_r``.

    ``U_inv`` and ``V_inv`` are the exact integer inverses of ``U`` and ``V``.
    """

    A: np.ndarray
    D: np.ndarray
    U: np.ndarray
    V: np.ndarray
    U_inv: np.ndarray
    V_inv: np.ndarray

    @property
    def diagonal(self) -> list[int]:
        return [int(self.D[i, i]) for i in range(min(self.D.shape))]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d != 0)

    @property
    def invariant_factors(self) -> list[int]:
        return [d for d in self.diagonal if d != 0]

    def verify(self) -> None:
        """Recompute ``U @ D @ V`` and the inverses; raise :class:`SmithFormError` on mismatch."""

        m, n = self.A.shape
        if not (self.U @ self.D @ self.V == self.A).all():
            raise SmithFormError("U @ D @ V does not reproduce the input matrix")
        if not (self.U @ self.U_inv == identity(m)).all() or not (self.V_inv @ self.V == identity(n)).all():
            raise SmithFormError("recorded inverses are wrong")
        off_diagonal = self.D.copy()
        for i in range(min(m, n)):
            off_diagonal[i, i] = 0
        if (off_diagonal != 0).any():
            raise SmithFormError("D is not diagonal")
        factors = self.invariant_factors
        if any(d < 0 for d in factors) or any(self.diagonal[i] == 0 for i in range(len(factors))):
            raise SmithFormError("invariant factors must be positive and come first")
        if any(factors[i + 1] % factors[i] for i in range(len(factors) - 1)):
            raise SmithFormError("invariant factors do not form a divisibility chain")


class _Reducer:
    def __init__(self, A: np.ndarray) -> None:
        m, n = A.shape
        self.D = A.copy()
        self.U, self.U_inv = identity(m), identity(m)
        self.V, self.V_inv = identity(n), identity(n)

    def row_op(self, i: int, j: int, M: np.ndarray) -> None:
        self.D[[i, j]] = M @ self.D[[i, j]]
        self.U[:, [i, j]] = self.U[:, [i, j]] @ inv_2x2_det1(M)
        self.U_inv[[i, j]] = M @ self.U_inv[[i, j]]

    def col_op(self, i: int, j: int, M: np.ndarray) -> None:
        self.D[:, [i, j]] = self.D[:, [i, j]] @ M
        self.V[[i, j]] = inv_2x2_det1(M) @ self.V[[i, j]]
        self.V_inv[:, [i, j]] = self.V_inv[:, [i, j]] @ M

    def swap_rows(self, i: int, j: int) -> None:
        if i != j:
            self.D[[i, j]] = self.D[[j, i]]
            self.U[:, [i, j]] = self.U[:, [j, i]]
            self.U_inv[[i, j]] = self.U_inv[[j, i]]

    def swap_cols(self, i: int, j: int) -> None:
        if i != j:
            self.D[:, [i, j]] = self.D[:, [j, i]]
            self.V[[i, j]] = self.V[[j, i]]
            self.V_inv[:, [i, j]] = self.V_inv[:, [j, i]]

    def negate_row(self, i: int) -> None:
        self.D[i] = -self.D[i]
        self.U[:, i] = -self.U[:, i]
        self.U_inv[i] = -self.U_inv[i]

    def clear_col(self, i: int) -> bool:
        rows = [j for j in range(i + 1, self.D.shape[0]) if self.D[j, i] != 0]
        for j in rows:
            self.row_op(i, j, exgcd(self.D[i, i], self.D[j, i]))
        return bool(rows)

    def clear_row(self, i: int) -> bool:
        cols = [j for j in range(i + 1, self.D.shape[1]) if self.D[i, j] != 0]
        for j in cols:
            self.col_op(i, j, exgcd(self.D[i, i], self.D[i, j]).T)
        return bool(cols)

    def pivot(self, i: int) -> bool:
        block = self.D[i:, i:]
        nonzero = np.argwhere(block != 0)
        if not len(nonzero):
            return False
        r, c = min(nonzero, key=lambda rc: abs(block[rc[0], rc[1]]))
        self.swap_rows(i, i + int(r))
        self.swap_cols(i, i + int(c))
        return True

    def fix_divisibility(self, i: int, j: int) -> None:
        a, b = self.D[i, i], self.D[j, j]
        if b % a == 0:
            return
        s, t = (int(x) for x in exgcd(a, b)[0])
        g = s * a + t * b
        L = np.array([[s, t], [-b // g, a // g]], dtype=object)
        R = np.array([[1, -t * b // g], [1, s * a // g]], dtype=object)
        self.row_op(i, j, L)
        self.col_op(i, j, R)


def smith_normal_form(matrix: Iterable, check: bool = True) -> SmithForm:
    """Smith normal form of an integer matrix, verified by recomputation when ``check``."""

    A = as_integer_matrix(matrix)
    reducer = _Reducer(A)
    rank = 0
    for i in range(min(A.shape)):
        if not reducer.pivot(i):
            break
        reducer.clear_col(i)
        while reducer.clear_row(i) and reducer.clear_col(i):
            pass
        if reducer.D[i, i] < 0:
            reducer.negate_row(i)
        rank += 1

    for i in range(rank):
        for j in range(i + 1, rank):
            reducer.fix_divisibility(i, j)

    form = SmithForm(A, reducer.D, reducer.U, reducer.V, reducer.U_inv, reducer.V_inv)
    if check:
        form.verify()
    return form


def integer_rank(matrix: Iterable) -> int:
    A = as_integer_matrix(matrix)
    if not A.size:
        return 0
    return smith_normal_form(A, check=False).rank


def integer_kernel(matrix: Iterable) -> np.ndarray:
    """Columns forming a basis of the (saturated) integer kernel."""

    A = as_integer_matrix(matrix)
    if not A.size:
        return identity(A.shape[1])
    form = smith_normal_form(A)
    return form.V_inv[:, form.rank:]


def index_in_saturation(matrix: Iterable) -> int:
    """Index of the column span of ``matrix`` in its saturation."""

    A = as_integer_matrix(matrix)
    if not A.size:
        return 1
    index = 1
    for d in smith_normal_form(A).invariant_factors:
        index *= d
    return index


def solve_integer(matrix: Iterable, rhs: Iterable, form: Optional[SmithForm] = None) -> Optional[np.ndarray]:
    """An integer solution ``x`` of ``matrix @ x = rhs``, or ``None`` if there is none.

    ``rhs`` may be a vector or a matrix of right-hand sides; free variables are set to 0.
    """

    A = as_integer_matrix(matrix)
    b = np.array(rhs, dtype=object)
    vector = b.ndim == 1
    if vector:
        b = b.reshape(-1, 1)
    if b.shape[0] != A.shape[0]:
        raise ValueError("right-hand side has the wrong length")
    form = form or smith_normal_form(A)
    c = form.U_inv @ b
    w = zeros(A.shape[1], b.shape[1])
    for i, d in enumerate(form.diagonal):
        if d == 0:
            break
        for k in range(b.shape[1]):
            if c[i, k] % d:
                return None
            w[i, k] = c[i, k] // d
    if (c[form.rank:] != 0).any():
        return None
    x = form.V_inv @ w
    return x[:, 0] if vector else x


__all__ = [
    "SmithForm",
    "smith_normal_form",
    "integer_kernel",
    "integer_rank",
    "index_in_saturation",
    "solve_integer",
    "as_integer_matrix",
    "identity",
    "zeros",
    "matrix_power",
    "block_diagonal",
    "exgcd",
]
