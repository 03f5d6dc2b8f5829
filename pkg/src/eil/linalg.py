"""Exact rational matrix arithmetic and its floating-point mirror.

Exact scalars are :class:`fractions.Fraction` values, which are always reduced,
carry a positive denominator and compare canonically.  Square matrices of
fractions are wrapped in the immutable :class:`RationalMatrix`.

Determinants and inverses go through fraction-free (Bareiss) elimination on
an integer matrix obtained by clearing denominators, so every intermediate
stays an integer and the only rational step is the final division.

The float mirror works on plain ``numpy`` arrays, with batch-capable
partial-pivot LU used by the sampling and descent code.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import lcm
from numbers import Rational as _RationalABC
from typing import Iterable, Sequence

import numpy as np

from eil.errors import DimensionMismatch, SingularMatrix

Rational = Fraction

#: pivot threshold for the float path, relative to the pivot row's largest entry
FLOAT_PIVOT_RTOL = 1e-12


def as_rational(x) -> Fraction:
    """Convert ``x`` to an exact Fraction.

    Floats convert exactly (binary expansion), strings accept integer,
    decimal and ``p/q`` literals.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (bool, np.bool_)):
        return Fraction(int(x))
    if isinstance(x, (int, np.integer)):
        return Fraction(int(x))
    if isinstance(x, (float, np.floating)):
        if not np.isfinite(x):
            raise ValueError(f"non-finite entry {x!r}")
        return Fraction(float(x))
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, _RationalABC):
        return Fraction(x.numerator, x.denominator)
    raise TypeError(f"cannot interpret {x!r} as a rational number")


class RationalMatrix:
    """Immutable square matrix with exact rational entries."""

    __slots__ = ("_rows",)

    def __init__(self, rows: Iterable[Iterable]):
        rows = tuple(tuple(as_rational(x) for x in row) for row in rows)
        n = len(rows)
        if n == 0:
            raise DimensionMismatch("matrix must have order >= 1")
        for row in rows:
            if len(row) != n:
                raise DimensionMismatch(f"matrix is not square: row of length {len(row)} in order {n}")
        self._rows = rows

    @classmethod
    def _trusted(cls, rows: tuple[tuple[Fraction, ...], ...]) -> "RationalMatrix":
        m = object.__new__(cls)
        m._rows = rows
        return m

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        one, zero = Fraction(1), Fraction(0)
        return cls._trusted(tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n)))

    @classmethod
    def ones(cls, n: int) -> "RationalMatrix":
        """The all-ones matrix ``J = e e^T``."""
        one = Fraction(1)
        return cls._trusted(tuple((one,) * n for _ in range(n)))

    @classmethod
    def zeros(cls, n: int) -> "RationalMatrix":
        zero = Fraction(0)
        return cls._trusted(tuple((zero,) * n for _ in range(n)))

    @classmethod
    def outer(cls, u: Sequence, v: Sequence) -> "RationalMatrix":
        u = [as_rational(x) for x in u]
        v = [as_rational(x) for x in v]
        if len(u) != len(v):
            raise DimensionMismatch("outer product of vectors of different length")
        return cls._trusted(tuple(tuple(a * b for b in v) for a in u))

    @classmethod
    def from_float(cls, a) -> "RationalMatrix":
        """Exact rational image of a float array (no rounding)."""
        a = np.asarray(a, dtype=float)
        return cls(a.tolist())

    @property
    def n(self) -> int:
        return len(self._rows)

    order = n

    @property
    def rows(self) -> tuple[tuple[Fraction, ...], ...]:
        return self._rows

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        return self._rows[i][j]

    def __iter__(self):
        return iter(self._rows)

    def entries(self) -> Iterable[Fraction]:
        for row in self._rows:
            yield from row

    def __eq__(self, other) -> bool:
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        return self._rows == other._rows

    def __hash__(self) -> int:
        return hash(self._rows)

    def __repr__(self) -> str:
        body = ", ".join("[" + ", ".join(str(x) for x in row) + "]" for row in self._rows)
        return f"RationalMatrix([{body}])"

    @property
    def T(self) -> "RationalMatrix":
        return transpose(self)

    def __matmul__(self, other: "RationalMatrix") -> "RationalMatrix":
        return matmul(self, other)

    def __add__(self, other: "RationalMatrix") -> "RationalMatrix":
        return add(self, other)

    def __sub__(self, other: "RationalMatrix") -> "RationalMatrix":
        return add(self, scalar_mul(-1, other))

    def __neg__(self) -> "RationalMatrix":
        return scalar_mul(-1, self)

    def __mul__(self, c) -> "RationalMatrix":
        if isinstance(c, RationalMatrix):
            return NotImplemented
        return scalar_mul(c, self)

    __rmul__ = __mul__

    def row_sums(self) -> tuple[Fraction, ...]:
        return tuple(sum(row, Fraction(0)) for row in self._rows)

    def col_sums(self) -> tuple[Fraction, ...]:
        return tuple(sum(col, Fraction(0)) for col in zip(*self._rows))

    def trace(self) -> Fraction:
        return sum((self._rows[i][i] for i in range(self.n)), Fraction(0))

    def is_integral(self) -> bool:
        return all(x.denominator == 1 for x in self.entries())

    def in_box(self) -> bool:
        """True when every entry lies in [0, 1]."""
        return all(0 <= x <= 1 for x in self.entries())

    def to_float(self) -> np.ndarray:
        return np.array([[float(x) for x in row] for row in self._rows], dtype=float)

    def to_int_rows(self) -> list[list[int]]:
        if not self.is_integral():
            raise ValueError("matrix has non-integer entries")
        return [[x.numerator for x in row] for row in self._rows]


def _check_same_order(a: RationalMatrix, b: RationalMatrix) -> None:
    if a.n != b.n:
        raise DimensionMismatch(f"order mismatch: {a.n} vs {b.n}")


def transpose(a: RationalMatrix) -> RationalMatrix:
    return RationalMatrix._trusted(tuple(zip(*a.rows)))


def add(a: RationalMatrix, b: RationalMatrix) -> RationalMatrix:
    _check_same_order(a, b)
    return RationalMatrix._trusted(
        tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a.rows, b.rows))
    )


def scalar_mul(c, a: RationalMatrix) -> RationalMatrix:
    c = as_rational(c)
    return RationalMatrix._trusted(tuple(tuple(c * x for x in row) for row in a.rows))


def matmul(a: RationalMatrix, b: RationalMatrix) -> RationalMatrix:
    _check_same_order(a, b)
    cols = tuple(zip(*b.rows))
    zero = Fraction(0)
    return RationalMatrix._trusted(
        tuple(tuple(sum((x * y for x, y in zip(row, col)), zero) for col in cols) for row in a.rows)
    )


def inner_product(a: RationalMatrix, b: RationalMatrix) -> Fraction:
    """Trace inner product ``Tr(A B^T)``, i.e. the entrywise dot product."""
    _check_same_order(a, b)
    return sum((x * y for ra, rb in zip(a.rows, b.rows) for x, y in zip(ra, rb)), Fraction(0))


def frobenius_norm_sq(a: RationalMatrix) -> Fraction:
    return sum((x * x for x in a.entries()), Fraction(0))


# -- fraction-free elimination on integer matrices ---------------------------


def clear_denominators(a: RationalMatrix) -> tuple[list[list[int]], int]:
    """Return ``(B, L)`` with ``B = L * A`` an integer matrix, ``L`` the lcm of denominators."""
    scale = reduce(lcm, (x.denominator for x in a.entries()), 1)
    return [[(x * scale).numerator for x in row] for row in a.rows], scale


def bareiss_det(m: Sequence[Sequence[int]]) -> int:
    """Determinant of an integer matrix by Bareiss elimination."""
    a = [list(row) for row in m]
    n = len(a)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for p in range(k + 1, n):
                if a[p][k] != 0:
                    a[k], a[p] = a[p], a[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = a[k][k]
        rk = a[k]
        for i in range(k + 1, n):
            ri = a[i]
            aik = ri[k]
            for j in range(k + 1, n):
                ri[j] = (akk * ri[j] - aik * rk[j]) // prev
        prev = akk
    return sign * a[n - 1][n - 1]


def fraction_free_inverse(m: Sequence[Sequence[int]]) -> tuple[int, list[list[int]]]:
    """Fraction-free Gauss-Jordan inversion of an integer matrix.

    Returns ``(d, X)`` with integer ``X`` such that ``m^{-1} = X / d``;
    ``d`` is ``±det(m)``.  Raises :class:`SingularMatrix` when ``det(m) = 0``.
    Every division performed is exact (Sylvester's identity).
    """
    n = len(m)
    a = [list(row) + [1 if j == i else 0 for j in range(n)] for i, row in enumerate(m)]
    width = 2 * n
    prev = 1
    for k in range(n):
        if a[k][k] == 0:
            for p in range(k + 1, n):
                if a[p][k] != 0:
                    a[k], a[p] = a[p], a[k]
                    break
            else:
                raise SingularMatrix("matrix is singular")
        rk = a[k]
        akk = rk[k]
        for i in range(n):
            if i == k:
                continue
            ri = a[i]
            aik = ri[k]
            if aik == 0:
                if akk != prev:
                    for j in range(width):
                        ri[j] = (akk * ri[j]) // prev
                continue
            for j in range(width):
                ri[j] = (akk * ri[j] - aik * rk[j]) // prev
        prev = akk
    return prev, [row[n:] for row in a]


def determinant_exact(a: RationalMatrix) -> Fraction:
    b, scale = clear_denominators(a)
    return Fraction(bareiss_det(b), scale ** a.n)


def invert_exact(a: RationalMatrix) -> RationalMatrix:
    """Exact inverse; raises :class:`SingularMatrix` if ``det(A) = 0``."""
    b, scale = clear_denominators(a)
    d, x = fraction_free_inverse(b)
    return RationalMatrix._trusted(tuple(tuple(Fraction(scale * v, d) for v in row) for row in x))


def inverse_norm_sq_int(m: Sequence[Sequence[int]]) -> Fraction:
    """``||m^{-1}||_F^2`` for an integer matrix, via one fraction-free inversion."""
    d, x = fraction_free_inverse(m)
    return Fraction(sum(v * v for row in x for v in row), d * d)


# -- float mirror --------------------------------------------------------------


def float_matrix(data) -> np.ndarray:
    """Validated read-only float64 square matrix."""
    a = np.array(data, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
        raise DimensionMismatch(f"expected a non-empty square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    a.setflags(write=False)
    return a


def batch_lu_inverse(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Invert a stack of matrices with partial-pivot LU.

    ``a`` has shape ``(B, n, n)``.  Returns ``(inv, ok)`` where ``ok[b]`` is
    False when some pivot fell below ``FLOAT_PIVOT_RTOL`` times the largest
    magnitude in its row; ``inv[b]`` is then meaningless.
    """
    lu = np.array(a, dtype=float, copy=True)
    if lu.ndim != 3 or lu.shape[1] != lu.shape[2]:
        raise DimensionMismatch(f"expected shape (B, n, n), got {lu.shape}")
    nb, n, _ = lu.shape
    rows = np.arange(nb)
    perm = np.tile(np.arange(n), (nb, 1))
    scale = np.abs(lu).max(axis=2)
    ok = np.ones(nb, dtype=bool)
    for k in range(n):
        p = np.argmax(np.abs(lu[:, k:, k]), axis=1) + k
        swap = p != k
        if swap.any():
            r = rows[swap]
            pk = p[swap]
            lu[r, k], lu[r, pk] = lu[r, pk], lu[r, k].copy()
            perm[r, k], perm[r, pk] = perm[r, pk], perm[r, k].copy()
            scale[r, k], scale[r, pk] = scale[r, pk], scale[r, k].copy()
        piv = lu[:, k, k]
        bad = np.abs(piv) <= FLOAT_PIVOT_RTOL * scale[:, k]
        ok &= ~bad
        piv = np.where(bad, 1.0, piv)
        lu[:, k, k] = piv
        lu[:, k + 1:, k] /= piv[:, None]
        lu[:, k + 1:, k + 1:] -= lu[:, k + 1:, k, None] * lu[:, k, None, k + 1:]
    x = np.zeros_like(lu)
    x[rows[:, None], np.arange(n)[None, :], perm] = 1.0
    for i in range(1, n):
        x[:, i] -= np.einsum("bj,bjc->bc", lu[:, i, :i], x[:, :i])
    for i in range(n - 1, -1, -1):
        x[:, i] -= np.einsum("bj,bjc->bc", lu[:, i, i + 1:], x[:, i + 1:])
        x[:, i] /= lu[:, i, i, None]
    return x, ok


def float_inverse(a) -> np.ndarray:
    a = float_matrix(a)
    inv, ok = batch_lu_inverse(a[None])
    if not ok[0]:
        raise SingularMatrix("matrix is numerically singular")
    return inv[0]


def float_inv_norm_sq(a) -> float:
    inv = float_inverse(a)
    return float(np.sum(inv * inv))
