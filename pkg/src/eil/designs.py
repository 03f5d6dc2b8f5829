"""Hadamard matrices and S-matrices.

Hadamard constructions available: Sylvester doubling, Paley I (prime
``q = 3 mod 4``, order ``q + 1``), Paley II (prime ``q = 1 mod 4``, order
``2(q + 1)``), and Kronecker products of these with Sylvester matrices.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction

from eil.errors import (
    InvalidParameter,
    NotHadamard,
    NotNormalized,
    OrderTooLarge,
    UnsupportedOrder,
)
from eil.linalg import RationalMatrix, invert_exact, matmul, transpose

DEFAULT_MAX_ORDER = 64


def max_order() -> int:
    """Construction cap, from ``EIL_MAX_ORDER`` (default 64)."""
    raw = os.environ.get("EIL_MAX_ORDER")
    if not raw:
        return DEFAULT_MAX_ORDER
    try:
        value = int(raw)
    except ValueError:
        raise InvalidParameter(f"EIL_MAX_ORDER must be an integer, got {raw!r}") from None
    if value < 1:
        raise InvalidParameter(f"EIL_MAX_ORDER must be positive, got {value}")
    return value


def _check_order(order: int, cap: int | None) -> None:
    cap = max_order() if cap is None else cap
    if order > cap:
        raise OrderTooLarge(f"order {order} exceeds the configured maximum {cap}")


@dataclass(frozen=True)
class HadamardMatrix:
    matrix: RationalMatrix
    normalized: bool = False

    def __post_init__(self):
        if not is_hadamard(self.matrix):
            raise NotHadamard("matrix is not a Hadamard matrix")
        if self.normalized and not _is_normalized(self.matrix):
            raise NotNormalized("first row and column are not all +1")

    @property
    def order(self) -> int:
        return self.matrix.n

    def to_json(self) -> dict:
        from eil.io import matrix_to_json_obj

        return matrix_to_json_obj(self.matrix, kind="hadamard", normalized=self.normalized)


@dataclass(frozen=True)
class SMatrix:
    matrix: RationalMatrix
    k: int

    def __post_init__(self):
        n = self.matrix.n
        if n != 2 * self.k - 1:
            raise InvalidParameter(f"S-matrix of order {n} must have k = {(n + 1) // 2}, got {self.k}")
        if not is_smatrix(self.matrix):
            raise InvalidParameter("matrix is not an S-matrix")

    @property
    def order(self) -> int:
        return self.matrix.n

    def to_json(self) -> dict:
        from eil.io import matrix_to_json_obj

        return matrix_to_json_obj(self.matrix, kind="smatrix", k=self.k)


def _from_ints(rows) -> RationalMatrix:
    return RationalMatrix._trusted(tuple(tuple(Fraction(v) for v in row) for row in rows))


def _is_normalized(h: RationalMatrix) -> bool:
    return all(x == 1 for x in h.rows[0]) and all(row[0] == 1 for row in h.rows)


def is_hadamard(h: RationalMatrix) -> bool:
    """True iff every entry is ±1 and ``H H^T = nI`` exactly."""
    n = h.n
    if any(x != 1 and x != -1 for x in h.entries()):
        return False
    rows = [[int(x) for x in row] for row in h.rows]
    for i in range(n):
        for j in range(i + 1, n):
            if sum(a * b for a, b in zip(rows[i], rows[j])) != 0:
                return False
    return True


def normalize(h: HadamardMatrix) -> HadamardMatrix:
    """Negate rows, then columns, that start with -1."""
    rows = [[int(x) for x in row] for row in h.matrix.rows]
    rows = [row if row[0] == 1 else [-v for v in row] for row in rows]
    flip = [v for v in rows[0]]
    rows = [[v * s for v, s in zip(row, flip)] for row in rows]
    return HadamardMatrix(_from_ints(rows), normalized=True)


def _kron(a: list[list[int]], b: list[list[int]]) -> list[list[int]]:
    return [[x * y for x in ra for y in rb] for ra in a for rb in b]


def _sylvester_rows(m: int) -> list[list[int]]:
    h = [[1]]
    for _ in range(m):
        h = [row + row for row in h] + [row + [-v for v in row] for row in h]
    return h


def sylvester(m: int, cap: int | None = None) -> HadamardMatrix:
    """Normalized Hadamard matrix of order ``2**m`` by recursive doubling."""
    if m < 0:
        raise InvalidParameter(f"m must be nonnegative, got {m}")
    _check_order(2 ** m, cap)
    return HadamardMatrix(_from_ints(_sylvester_rows(m)), normalized=True)


def is_prime(q: int) -> bool:
    if q < 2:
        return False
    if q % 2 == 0:
        return q == 2
    f = 3
    while f * f <= q:
        if q % f == 0:
            return False
        f += 2
    return True


def _legendre(a: int, q: int) -> int:
    a %= q
    if a == 0:
        return 0
    return 1 if pow(a, (q - 1) // 2, q) == 1 else -1


def _jacobsthal(q: int) -> list[list[int]]:
    chi = [_legendre(d, q) for d in range(q)]
    return [[chi[(j - i) % q] for j in range(q)] for i in range(q)]


def paley(q: int, cap: int | None = None) -> HadamardMatrix:
    """Paley I construction of order ``q + 1`` for a prime ``q = 3 (mod 4)``."""
    if not is_prime(q) or q % 4 != 3:
        raise InvalidParameter(f"Paley I needs a prime q = 3 (mod 4), got {q}")
    _check_order(q + 1, cap)
    jac = _jacobsthal(q)
    # skew core S = [[0, e^T], [-e, Q]], H = I + S
    rows = [[1] + [1] * q]
    for i in range(q):
        rows.append([-1] + [jac[i][j] + (1 if i == j else 0) for j in range(q)])
    return normalize(HadamardMatrix(_from_ints(rows)))


def paley_ii(q: int, cap: int | None = None) -> HadamardMatrix:
    """Paley II construction of order ``2(q + 1)`` for a prime ``q = 1 (mod 4)``."""
    if not is_prime(q) or q % 4 != 1:
        raise InvalidParameter(f"Paley II needs a prime q = 1 (mod 4), got {q}")
    _check_order(2 * (q + 1), cap)
    jac = _jacobsthal(q)
    # H = C (x) [[1, -1], [-1, -1]] + I (x) [[1, 1], [1, -1]], C the conference matrix
    conf = [[0] + [1] * q] + [[1] + jac[i] for i in range(q)]
    rows = []
    for i in range(q + 1):
        top, bottom = [], []
        for j in range(q + 1):
            c = conf[i][j]
            if c == 0:
                top += [1, 1]
                bottom += [1, -1]
            else:
                top += [c, -c]
                bottom += [-c, -c]
        rows += [top, bottom]
    return normalize(HadamardMatrix(_from_ints(rows)))


def _base_for(m: int, cap: int | None) -> HadamardMatrix | None:
    if m == 1:
        return sylvester(0, cap)
    if m == 2:
        return sylvester(1, cap)
    if is_prime(m - 1) and (m - 1) % 4 == 3:
        return paley(m - 1, cap)
    if m % 2 == 0 and is_prime(m // 2 - 1) and (m // 2 - 1) % 4 == 1:
        return paley_ii(m // 2 - 1, cap)
    return None


def hadamard(order: int, cap: int | None = None) -> HadamardMatrix:
    """A normalized Hadamard matrix of the given order, if a construction reaches it.

    Powers of two come from Sylvester doubling.  Otherwise tries
    ``order = 2**a * m`` with ``m`` a Paley I or Paley II order, largest base
    first, and takes a Kronecker product with a Sylvester matrix.
    """
    if order < 1:
        raise InvalidParameter(f"order must be positive, got {order}")
    _check_order(order, cap)
    if order > 2 and order % 4 != 0:
        raise UnsupportedOrder(f"no Hadamard matrix of order {order} exists (order > 2 must be divisible by 4)")
    if order & (order - 1) == 0:
        return sylvester(order.bit_length() - 1, cap)
    a = 0
    while order % (2 ** a) == 0:
        a += 1
    for power in range(0, a):
        base = _base_for(order // 2 ** power, cap)
        if base is None:
            continue
        rows = _kron(_sylvester_rows(power), base.matrix.to_int_rows())
        return HadamardMatrix(_from_ints(rows), normalized=True)
    raise UnsupportedOrder(f"no implemented construction reaches Hadamard order {order}")


def smatrix_from_hadamard(h: HadamardMatrix) -> SMatrix:
    """Map 1 -> 0, -1 -> 1 and drop the first row and column."""
    if not _is_normalized(h.matrix):
        raise NotNormalized("Hadamard matrix must be normalized")
    if h.order < 4:
        raise InvalidParameter(f"Hadamard order must be at least 4, got {h.order}")
    rows = [[(1 - int(x)) // 2 for x in row[1:]] for row in h.matrix.rows[1:]]
    return SMatrix(_from_ints(rows), k=h.order // 2)


def smatrix(n: int, cap: int | None = None) -> SMatrix:
    """S-matrix of order ``n`` from the Hadamard matrix of order ``n + 1``."""
    if n < 3 or n % 2 == 0:
        raise UnsupportedOrder(f"S-matrices exist only for odd orders n >= 3, got {n}")
    return smatrix_from_hadamard(hadamard(n + 1, cap))


def hadamard_embedding(a: RationalMatrix) -> RationalMatrix:
    """The bordered matrix ``[[1, e^T], [e, J - 2A]]`` of order ``n + 1``."""
    one = Fraction(1)
    rows = [(one,) * (a.n + 1)]
    rows += [(one,) + tuple(1 - 2 * x for x in row) for row in a.rows]
    return RationalMatrix._trusted(tuple(rows))


def is_smatrix(a: RationalMatrix) -> bool:
    """True iff ``A`` is a {0,1}-matrix of odd order whose embedding is Hadamard."""
    if a.n % 2 == 0:
        return False
    if any(x != 0 and x != 1 for x in a.entries()):
        return False
    return is_hadamard(hadamard_embedding(a))


def smatrix_closed_form_inverse(s: SMatrix) -> RationalMatrix:
    """``(2 S^T - J) / k``; checked against ``S @ result == I``."""
    k = s.k
    inv = RationalMatrix._trusted(
        tuple(tuple(Fraction(2 * x - 1, k) for x in row) for row in transpose(s.matrix).rows)
    )
    if matmul(s.matrix, inv) != RationalMatrix.identity(s.order):
        raise AssertionError("closed-form S-matrix inverse failed S @ inv = I")
    return inv


def smatrix_inverse(s: SMatrix) -> RationalMatrix:
    """Inverse by exact elimination; independent of the closed form."""
    return invert_exact(s.matrix)
