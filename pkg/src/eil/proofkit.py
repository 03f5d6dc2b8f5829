"""Executable checks of every step of the lower-bound argument.

For a nonsingular ``A`` in the unit box, an auxiliary pair ``M, N`` of order
``n + 1`` is built whose trace inner product does not depend on ``A``.
Cauchy-Schwarz then bounds ``||A^{-1}||_F`` from below once ``||N||_F`` is
bounded from above, which reduces to maximizing the quadratic ``f`` (odd
``n``) or ``g`` (even ``n``) over the box.

The even-order pair carries the irrational scale ``k sqrt(k) / sqrt(k - 1)``.
:class:`BorderedMatrix` keeps the rational block and the *squared* scale apart,
so all norms and inner products stay exact rationals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from eil._parallel import block_rng, blocks, run_blocks
from eil.bounds import BoundCase, bound_case, lower_bound_sq
from eil.designs import is_smatrix
from eil.errors import (
    ChainBroken,
    DimensionMismatch,
    EntryOutOfBox,
    IdentityViolated,
    InvalidParameter,
    ParityMismatch,
    SingularMatrix,
)
from eil.linalg import (
    RationalMatrix,
    determinant_exact,
    frobenius_norm_sq,
    inner_product,
    invert_exact,
    matmul,
    scalar_mul,
    transpose,
)


def _exact_sqrt(x: Fraction) -> Fraction:
    if x < 0:
        raise ValueError("negative square")
    p, q = math.isqrt(x.numerator), math.isqrt(x.denominator)
    if p * p != x.numerator or q * q != x.denominator:
        raise ValueError(f"{x} is not the square of a rational")
    return Fraction(p, q)


@dataclass(frozen=True)
class BorderedMatrix:
    """``[[corner, e^T], [e, sqrt(scale_sq) * block]]`` of order ``block.n + 1``."""

    corner: Fraction
    block: RationalMatrix
    scale_sq: Fraction = Fraction(1)

    @property
    def order(self) -> int:
        return self.block.n + 1

    def norm_sq(self) -> Fraction:
        return self.corner ** 2 + 2 * self.block.n + self.scale_sq * frobenius_norm_sq(self.block)

    def materialize(self) -> RationalMatrix:
        """Explicit matrix; only possible when the scale is rational."""
        s = _exact_sqrt(self.scale_sq)
        one = Fraction(1)
        rows = [(self.corner,) + (one,) * self.block.n]
        rows += [(one,) + tuple(s * x for x in row) for row in self.block.rows]
        return RationalMatrix(rows)


def bordered_inner(p: BorderedMatrix, q: BorderedMatrix) -> Fraction:
    """``<P, Q> = Tr(P Q^T)``; requires ``scale_sq(P) * scale_sq(Q)`` to be a rational square."""
    if p.block.n != q.block.n:
        raise DimensionMismatch("bordered matrices of different order")
    s = _exact_sqrt(p.scale_sq * q.scale_sq)
    return p.corner * q.corner + 2 * p.block.n + s * inner_product(p.block, q.block)


def bordered_product_blocks(p: BorderedMatrix, q: BorderedMatrix) -> tuple[Fraction, RationalMatrix]:
    """Top-left entry and lower-right block of ``P Q^T``."""
    n = p.block.n
    s = _exact_sqrt(p.scale_sq * q.scale_sq)
    lower = RationalMatrix.ones(n) + scalar_mul(s, matmul(p.block, transpose(q.block)))
    return p.corner * q.corner + n, lower


@dataclass(frozen=True)
class ProofPair:
    n: int
    case: str
    k: int
    a: RationalMatrix
    a_inv: RationalMatrix
    m: BorderedMatrix
    nn: BorderedMatrix

    @property
    def border_sq(self) -> Fraction:
        """Contribution of the corner and the two ``e`` borders to a squared norm."""
        return self.m.corner ** 2 + 2 * self.n


def _resolve_case(n: int, case) -> BoundCase:
    actual = bound_case(n)
    if case is None:
        wanted = actual.case
    else:
        wanted = case.case if isinstance(case, BoundCase) else str(case)
    if wanted not in ("odd", "even"):
        raise InvalidParameter(f"auxiliary pairs exist for the odd and even cases only, got {wanted!r}")
    if wanted != actual.case:
        raise ParityMismatch(f"order {n} belongs to case {actual.case!r}, not {wanted!r}")
    return actual


def _check_box(a: RationalMatrix) -> None:
    if not a.in_box():
        raise EntryOutOfBox("all entries must lie in [0, 1]")


def odd_weight(n: int, k: int) -> RationalMatrix:
    """``2I - J/k``."""
    return RationalMatrix(
        [[Fraction(2 if i == j else 0) - Fraction(1, k) for j in range(n)] for i in range(n)]
    )


def even_weight(n: int, k: int) -> RationalMatrix:
    """``(k(2k-1)/(k-1)) I - J``."""
    c = Fraction(k * (2 * k - 1), k - 1)
    return RationalMatrix([[(c if i == j else 0) - 1 for j in range(n)] for i in range(n)])


def build_proof_pair(a: RationalMatrix, case=None) -> ProofPair:
    _check_box(a)
    c = _resolve_case(a.n, case)
    n, k = c.n, c.k
    a_inv = invert_exact(a)
    at = transpose(a)
    if c.case == "odd":
        m = BorderedMatrix(Fraction(1), scalar_mul(-k, a_inv))
        nn = BorderedMatrix(Fraction(1), scalar_mul(-1, matmul(odd_weight(n, k), at)))
    else:
        m = BorderedMatrix(Fraction(0), a_inv, Fraction(k ** 3, k - 1))
        nn = BorderedMatrix(Fraction(0), matmul(even_weight(n, k), at), Fraction(k - 1, k ** 3))
    return ProofPair(n=n, case=c.case, k=k, a=a, a_inv=a_inv, m=m, nn=nn)


def expected_inner_product(n: int) -> Fraction:
    c = bound_case(n)
    if c.case == "odd":
        return Fraction((n + 1) ** 2)
    if c.case == "even":
        k = c.k
        return Fraction(2 * k * (2 * k * k - 1), k - 1)
    raise InvalidParameter(f"no auxiliary pair for n = {n}")


def expected_lower_block_scalar(n: int) -> Fraction:
    c = bound_case(n)
    if c.case == "odd":
        return Fraction(n + 1)
    k = c.k
    return Fraction(k * (2 * k - 1), k - 1)


@dataclass(frozen=True)
class ProofTrace:
    n: int
    case: str
    inner_product_value: Fraction
    expected_inner_product: Fraction
    M_norm_sq: Fraction
    N_norm_sq: Fraction
    cauchy_schwarz_holds: bool
    derived_bound_sq_on_inverse: Fraction
    inverse_norm_sq: Fraction
    block_structure_ok: bool
    norm_split_ok: bool
    m_equals_n: bool

    @property
    def ok(self) -> bool:
        return (
            self.inner_product_value == self.expected_inner_product
            and self.cauchy_schwarz_holds
            and self.block_structure_ok
            and self.norm_split_ok
            and self.derived_bound_sq_on_inverse <= self.inverse_norm_sq
        )

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "case": self.case,
            "inner_product_value": self.inner_product_value,
            "expected_inner_product": self.expected_inner_product,
            "M_norm_sq": self.M_norm_sq,
            "N_norm_sq": self.N_norm_sq,
            "cauchy_schwarz_holds": self.cauchy_schwarz_holds,
            "derived_bound_sq_on_inverse": self.derived_bound_sq_on_inverse,
            "inverse_norm_sq": self.inverse_norm_sq,
            "block_structure_ok": self.block_structure_ok,
            "norm_split_ok": self.norm_split_ok,
            "m_equals_n": self.m_equals_n,
        }


def verify_trace_identity(pair: ProofPair) -> ProofTrace:
    """Check ``<M, N>``, the block shape of ``M N^T`` and the Cauchy-Schwarz step.

    Raises :class:`IdentityViolated` if any of the A-independent identities fails.
    """
    n, k = pair.n, pair.k
    ip = bordered_inner(pair.m, pair.nn)
    want = expected_inner_product(n)
    top_left, lower = bordered_product_blocks(pair.m, pair.nn)
    block_ok = top_left == (n + 1 if pair.case == "odd" else 2 * k) and lower == scalar_mul(
        expected_lower_block_scalar(n), RationalMatrix.identity(n)
    )
    m_sq, n_sq = pair.m.norm_sq(), pair.nn.norm_sq()
    cs = ip * ip <= m_sq * n_sq
    inv_sq = frobenius_norm_sq(pair.a_inv)

    border = pair.border_sq
    if pair.case == "odd":
        split_ok = m_sq == border + k * k * inv_sq and n_sq == border + f_value(pair.a, k)
        derived = (ip * ip / n_sq - border) / (k * k)
    else:
        split_ok = m_sq == border + Fraction(k ** 3, k - 1) * inv_sq and n_sq == border + g_value(pair.a, k)
        derived = (ip * ip / n_sq - border) * Fraction(k - 1, k ** 3)
    trace = ProofTrace(
        n=n,
        case=pair.case,
        inner_product_value=ip,
        expected_inner_product=want,
        M_norm_sq=m_sq,
        N_norm_sq=n_sq,
        cauchy_schwarz_holds=cs,
        derived_bound_sq_on_inverse=derived,
        inverse_norm_sq=inv_sq,
        block_structure_ok=block_ok,
        norm_split_ok=split_ok,
        m_equals_n=m_sq + n_sq == 2 * ip,
    )
    if not trace.ok:
        raise IdentityViolated(f"trace identity check failed for n={n}: {trace.to_json()}")
    if trace.derived_bound_sq_on_inverse < lower_bound_sq(n):
        raise IdentityViolated(f"derived bound {derived} below the proven bound for n={n}")
    return trace


# -- the quadratics f (odd) and g (even) ---------------------------------------


def _row_stats(a: RationalMatrix) -> tuple[Fraction, Fraction]:
    """``(sum of squares, sum of squared row sums)``."""
    sq = sum((x * x for x in a.entries()), Fraction(0))
    rs = sum((r * r for r in a.row_sums()), Fraction(0))
    return sq, rs


def f_value(a: RationalMatrix, k: int) -> Fraction:
    """``4 sum a_ij^2 - (2k+1)/k^2 * sum_i (row sum i)^2`` for order ``2k - 1``."""
    if a.n != 2 * k - 1:
        raise ParityMismatch(f"f needs order 2k-1 = {2 * k - 1}, got {a.n}")
    sq, rs = _row_stats(a)
    return 4 * sq - Fraction(2 * k + 1, k * k) * rs


def f_matrix_form(a: RationalMatrix, k: int) -> Fraction:
    """``||(2I - J/k) A^T||_F^2`` evaluated by matrix arithmetic."""
    return frobenius_norm_sq(matmul(odd_weight(a.n, k), transpose(a)))


def g_value(a: RationalMatrix, k: int) -> Fraction:
    """``(2k-1)^2/(k(k-1)) sum a_ij^2 - (2/k) sum_i (row sum i)^2`` for order ``2k``."""
    if a.n != 2 * k or k < 2:
        raise ParityMismatch(f"g needs order 2k = {2 * k} with k >= 2, got {a.n}")
    sq, rs = _row_stats(a)
    return Fraction((2 * k - 1) ** 2, k * (k - 1)) * sq - Fraction(2, k) * rs


def g_matrix_form(a: RationalMatrix, k: int) -> Fraction:
    """``(k-1)/k^3 * ||((k(2k-1)/(k-1)) I - J) A^T||_F^2``."""
    return Fraction(k - 1, k ** 3) * frobenius_norm_sq(matmul(even_weight(a.n, k), transpose(a)))


def f_row(p: int, k: int) -> Fraction:
    return 4 * p - Fraction(2 * k + 1, k * k) * p * p


def g_row(p: int, k: int) -> Fraction:
    return Fraction((2 * k - 1) ** 2, k * (k - 1)) * p - Fraction(2, k) * p * p


def f_second_partial(k: int) -> Fraction:
    return Fraction(2 * (4 * k * k - 2 * k - 1), k * k)


def g_second_partial(k: int) -> Fraction:
    return Fraction(2 * (4 * k * k - 6 * k + 3), k * (k - 1))


def f_float(a: np.ndarray, k: int) -> float:
    return float(4 * np.sum(a * a) - (2 * k + 1) / k ** 2 * np.sum(a.sum(axis=1) ** 2))


def g_float(a: np.ndarray, k: int) -> float:
    return float((2 * k - 1) ** 2 / (k * (k - 1)) * np.sum(a * a) - 2 / k * np.sum(a.sum(axis=1) ** 2))


def second_partial_fd(func, a: np.ndarray, i: int, j: int, h: float = 1e-3) -> float:
    """Central second difference of ``func`` in entry ``(i, j)``."""
    e = np.zeros_like(a)
    e[i, j] = h
    return (func(a + e) - 2 * func(a) + func(a - e)) / (h * h)


@dataclass
class MaxReport:
    """Outcome of a maximization claim for ``f`` or ``g`` over {0,1}-matrices."""

    function: str
    n: int
    k: int
    max_value: Fraction
    expected_max: Fraction
    row_values: dict[int, Fraction]
    row_argmax: list[int]
    second_partial: Fraction
    second_partial_fd_rel_err: float
    enumeration: dict | None = None
    passed: bool = field(default=False)

    @property
    def maximizer_profile(self) -> tuple[int, ...]:
        return tuple(self.row_argmax * self.n) if len(self.row_argmax) == 1 else ()

    def to_json(self) -> dict:
        return {
            "function": self.function,
            "n": self.n,
            "k": self.k,
            "max_value": self.max_value,
            "expected_max": self.expected_max,
            "row_values": {str(p): v for p, v in self.row_values.items()},
            "row_argmax": self.row_argmax,
            "maximizer_profile": list(self.maximizer_profile),
            "second_partial": self.second_partial,
            "second_partial_fd_rel_err": self.second_partial_fd_rel_err,
            "enumeration": self.enumeration,
            "passed": self.passed,
        }


def all_binary_matrices(n: int) -> np.ndarray:
    """All ``2**(n*n)`` {0,1}-matrices, index ``i`` read as row-major bits, MSB first."""
    idx = np.arange(1 << (n * n), dtype=np.int64)
    shifts = np.arange(n * n - 1, -1, -1, dtype=np.int64)
    return ((idx[:, None] >> shifts) & 1).reshape(-1, n, n)


def _enumerate_binary_max(n: int, weight: np.ndarray, denom: int, k: int) -> dict:
    """Brute force ``||W A^T||_F^2 / denom`` over every {0,1}-matrix ``A``.

    Uses the matrix form only (no row-sum expansion), so it is an independent
    route to the maximum found by row separability.
    """
    mats = all_binary_matrices(n)
    prod_ = np.einsum("ij,bkj->bik", weight, mats)
    vals = np.einsum("bij,bij->b", prod_, prod_)
    top = int(vals.max())
    hits = mats[vals == top]
    return {
        "examined": int(mats.shape[0]),
        "max": Fraction(top, denom),
        "maximizers": int(hits.shape[0]),
        "all_rows_sum_to_k": bool(np.all(hits.sum(axis=2) == k)),
    }


def _fd_rel_err(func, n: int, exact: Fraction, seed: int = 0) -> float:
    rng = np.random.default_rng(seed)
    a = rng.uniform(0.2, 0.8, size=(n, n))
    worst = 0.0
    for i, j in [(0, 0), (n - 1, n - 1), (0, n - 1)]:
        fd = second_partial_fd(func, a, i, j)
        worst = max(worst, abs(fd - float(exact)) / float(exact))
    return worst


def _verify_max(
    function: str,
    n: int,
    k: int,
    row_value,
    expected: Fraction,
    second: Fraction,
    ffloat,
    weight_denom: tuple[np.ndarray, int],
    enumerate_up_to: int,
):
    table = {p: row_value(p) for p in range(n + 1)}
    top = max(table.values())
    argmax = [p for p, v in table.items() if v == top]
    max_value = n * top
    fd_err = _fd_rel_err(lambda x: ffloat(x, k), n, second)
    enum = None
    passed = max_value == expected and argmax == [k] and second > 0 and fd_err < 1e-6
    if n <= enumerate_up_to:
        enum = _enumerate_binary_max(n, *weight_denom, k)
        enum["expected_maximizers"] = math.comb(n, k) ** n
        passed = (
            passed
            and enum["max"] == expected
            and enum["all_rows_sum_to_k"]
            and enum["maximizers"] == enum["expected_maximizers"]
        )
    return MaxReport(
        function=function,
        n=n,
        k=k,
        max_value=max_value,
        expected_max=expected,
        row_values=table,
        row_argmax=argmax,
        second_partial=second,
        second_partial_fd_rel_err=fd_err,
        enumeration=enum,
        passed=passed,
    )


def verify_f_max(n: int, enumerate_up_to: int = 3) -> MaxReport:
    """Max of ``f`` over {0,1}-matrices of odd order ``n`` is ``n**2``, only at row sums ``k``.

    Uses row separability; for ``n <= enumerate_up_to`` also brute-forces all matrices.
    """
    if n < 3 or n % 2 == 0:
        raise ParityMismatch(f"f is defined for odd n >= 3, got {n}")
    k = (n + 1) // 2
    # f = ||(2k I - J) A^T||^2 / k^2
    weight = 2 * k * np.eye(n, dtype=np.int64) - 1
    return _verify_max(
        "f", n, k, lambda p: f_row(p, k), Fraction(n * n), f_second_partial(k), f_float, (weight, k * k), enumerate_up_to
    )


def verify_g_max(n: int, enumerate_up_to: int = 4) -> MaxReport:
    """Max of ``g`` over {0,1}-matrices of even order ``n >= 4`` is ``2k(2k^2-2k+1)/(k-1)``."""
    if n < 4 or n % 2:
        raise ParityMismatch(f"g is defined for even n >= 4, got {n}")
    k = n // 2
    expected = Fraction(2 * k * (2 * k * k - 2 * k + 1), k - 1)
    # g = ||(k(2k-1) I - (k-1) J) A^T||^2 / (k^3 (k-1))
    weight = k * (2 * k - 1) * np.eye(n, dtype=np.int64) - (k - 1)
    return _verify_max(
        "g", n, k, lambda p: g_row(p, k), expected, g_second_partial(k), g_float, (weight, k ** 3 * (k - 1)), enumerate_up_to
    )


def box_max_sample(n: int, count: int, seed: int = 0) -> tuple[float, float]:
    """Largest sampled value of ``f``/``g`` on uniform points of the box, and the claimed max."""
    c = bound_case(n)
    rng = np.random.default_rng(seed)
    a = rng.uniform(0.0, 1.0, size=(count, n, n))
    sq = np.sum(a * a, axis=(1, 2))
    rs = np.sum(a.sum(axis=2) ** 2, axis=1)
    k = c.k
    if c.case == "odd":
        vals = 4 * sq - (2 * k + 1) / k ** 2 * rs
        claimed = float(n * n)
    elif c.case == "even":
        vals = (2 * k - 1) ** 2 / (k * (k - 1)) * sq - 2 / k * rs
        claimed = 2 * k * (2 * k * k - 2 * k + 1) / (k - 1)
    else:
        raise InvalidParameter(f"no quadratic for n = {n}")
    return float(vals.max()), claimed


# -- even case: the equality would force a non-integer Gram entry -------------


def check_even_non_attainment(n: int) -> Fraction:
    """Off-diagonal value ``k(k-1)/(2k-1)`` that ``A^T A`` would need under equality.

    Also checks the rank-one inverse ``(I - a J)^{-1} = I + (k-1)/k J`` used to
    derive it (as a scalar identity, plus a matrix check for ``n <= 12``).
    """
    if n < 4 or n % 2:
        raise ParityMismatch(f"non-attainment concerns even n >= 4, got {n}")
    k = n // 2
    alpha = Fraction(k - 1, k * (2 * k - 1))
    beta = alpha / (1 - n * alpha)
    if beta != Fraction(k - 1, k):
        raise IdentityViolated(f"rank-one inverse coefficient {beta} != (k-1)/k for k={k}")
    if n <= 12:
        i = RationalMatrix.identity(n)
        j = RationalMatrix.ones(n)
        if matmul(i - alpha * j, i + beta * j) != i:
            raise IdentityViolated(f"(I - aJ)(I + bJ) != I for k={k}")
    gram = Fraction(k * k, 2 * k - 1) * beta
    value = Fraction(k * (k - 1), 2 * k - 1)
    if gram != value:
        raise IdentityViolated(f"off-diagonal Gram entry {gram} != {value}")
    if value.denominator == 1:
        raise IdentityViolated(f"k(k-1)/(2k-1) is an integer for k={k}")
    return value


# -- n = 2 ----------------------------------------------------------------------


def case2x2_bracket(a, b, c, d):
    """``(a-d)^2 + (b-c)^2 + 2ad(1-ad) + 2bc(1-bc) + 4abcd``."""
    return (a - d) ** 2 + (b - c) ** 2 + 2 * a * d * (1 - a * d) + 2 * b * c * (1 - b * c) + 4 * a * b * c * d


def case2x2_identity_residual(a, b, c, d):
    """``(ad-bc)^2 (||A^{-1}||_F^2 - 2) - bracket``; zero for every nonsingular ``A``.

    Rational inputs take ``||A^{-1}||_F^2`` from exact elimination, float
    inputs from the adjugate formula ``[[d, -b], [-c, a]] / (ad - bc)``.
    """
    det = a * d - b * c
    if det == 0:
        raise SingularMatrix("ad = bc")
    if all(isinstance(x, (int, Fraction)) for x in (a, b, c, d)):
        inv_sq = frobenius_norm_sq(invert_exact(RationalMatrix([[a, b], [c, d]])))
    else:
        inv = np.array([[d, -b], [-c, a]], dtype=float) / det
        inv_sq = float(np.sum(inv * inv))
    return det * det * (inv_sq - 2) - case2x2_bracket(a, b, c, d)


def case2x2_equality(a, b, c, d) -> bool:
    """Conditions under which the bracket vanishes."""
    return a == d and b == c and a * d in (0, 1) and b * c in (0, 1) and a * b * c * d == 0


# -- odd case equality chain --------------------------------------------------------


def verify_equality_case_odd(a: RationalMatrix) -> bool:
    """Whether ``A`` attains the odd-order bound; if so, check the whole equality chain.

    Raises :class:`ChainBroken` if equality holds but a step of the chain fails.
    """
    _check_box(a)
    n = a.n
    if n < 3 or n % 2 == 0:
        raise ParityMismatch(f"the odd-order equality chain needs odd n >= 3, got {n}")
    k = (n + 1) // 2
    a_inv = invert_exact(a)
    if frobenius_norm_sq(a_inv) != lower_bound_sq(n):
        return False
    steps = []
    steps.append(("binary", all(x in (0, 1) for x in a.entries())))
    steps.append(("row sums k", all(r == k for r in a.row_sums())))
    steps.append(("column sums k", all(c == k for c in a.col_sums())))
    steps.append(("f(A) = n^2", f_value(a, k) == n * n))
    pair = build_proof_pair(a, "odd")
    steps.append(("M = N", pair.m == pair.nn))
    two_at_minus_j = scalar_mul(2, transpose(a)) - RationalMatrix.ones(n)
    steps.append(("k A^-1 = 2A^T - J", scalar_mul(k, a_inv) == two_at_minus_j))
    steps.append(("S-matrix embedding", is_smatrix(a)))
    broken = [name for name, ok in steps if not ok]
    if broken:
        raise ChainBroken(f"equality holds but chain steps failed: {', '.join(broken)}")
    return True


# -- seeded batches -----------------------------------------------------------------

TRACE_BLOCK = 50
MAX_DENOMINATOR = 8


def random_box_rational(rng: np.random.Generator, n: int, max_den: int = MAX_DENOMINATOR) -> RationalMatrix:
    """Random matrix with entries ``p/q``, ``1 <= q <= max_den``, ``0 <= p <= q``."""
    q = rng.integers(1, max_den + 1, size=(n, n))
    p = rng.integers(0, q + 1)
    return RationalMatrix([[Fraction(int(p[i, j]), int(q[i, j])) for j in range(n)] for i in range(n)])


def random_invertible_box_rational(rng: np.random.Generator, n: int) -> RationalMatrix:
    while True:
        a = random_box_rational(rng, n)
        if determinant_exact(a) != 0:
            return a


def _trace_block(n: int, seed: int, block: int, start: int, stop: int) -> list[ProofTrace]:
    rng = block_rng(seed, block)
    return [verify_trace_identity(build_proof_pair(random_invertible_box_rational(rng, n))) for _ in range(start, stop)]


def trace_identity_batch(n: int, count: int, seed: int = 0, workers: int = 1) -> list[ProofTrace]:
    """Trace-identity checks on ``count`` seeded random invertible rational matrices.

    Output is identical for any ``workers``.
    """
    tasks = [(n, seed, b, lo, hi) for b, lo, hi in blocks(count, TRACE_BLOCK)]
    out: list[ProofTrace] = []
    for chunk in run_blocks(_trace_block, tasks, workers):
        out.extend(chunk)
    return out


def summarize_traces(n: int, traces: list[ProofTrace]) -> dict:
    return {
        "n": n,
        "case": bound_case(n).case,
        "count": len(traces),
        "expected_inner_product": expected_inner_product(n),
        "failures": sum(not t.ok for t in traces),
        "min_derived_bound_sq": min((t.derived_bound_sq_on_inverse for t in traces), default=None),
        "bound_sq": lower_bound_sq(n),
        "min_inverse_norm_sq": min((t.inverse_norm_sq for t in traces), default=None),
    }


def _two_by_two_block(seed: int, block: int, start: int, stop: int) -> dict:
    rng = block_rng(seed, block)
    exact_bad = 0
    float_worst = 0.0
    done = 0
    while done < stop - start:
        q = rng.integers(1, MAX_DENOMINATOR + 1, size=4)
        p = rng.integers(0, q + 1)
        quad = [Fraction(int(x), int(y)) for x, y in zip(p, q)]
        fl = rng.uniform(0.0, 1.0, size=4)
        if quad[0] * quad[3] == quad[1] * quad[2] or fl[0] * fl[3] == fl[1] * fl[2]:
            continue
        if case2x2_identity_residual(*quad) != 0:
            exact_bad += 1
        float_worst = max(float_worst, abs(case2x2_identity_residual(*(float(x) for x in fl))))
        done += 1
    return {"exact_nonzero": exact_bad, "float_max_abs": float_worst, "count": done}


def two_by_two_batch(count: int, seed: int = 0, workers: int = 1) -> dict:
    """``count`` random rational and ``count`` random float quadruples through the 2x2 identity."""
    tasks = [(seed, b, lo, hi) for b, lo, hi in blocks(count, 1000)]
    parts = run_blocks(_two_by_two_block, tasks, workers)
    return {
        "count": sum(p["count"] for p in parts),
        "exact_nonzero": sum(p["exact_nonzero"] for p in parts),
        "float_max_abs": max((p["float_max_abs"] for p in parts), default=0.0),
    }
