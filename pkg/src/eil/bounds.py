"""Lower bounds on the Frobenius norm of the inverse of a matrix in the unit box.

All comparisons are done on squared norms so they stay exact:

* odd ``n >= 3``: ``||A^{-1}||_F^2 >= 4n^2/(n+1)^2``, equality iff S-matrix;
* even ``n >= 4``: ``||A^{-1}||_F^2 > 4(n^2 - 2n + 2)/n^2`` (strict);
* ``n = 2``: ``||A^{-1}||_F^2 >= 2``, equality iff identity or swap.

``n = 1`` is answered with bound 1 but flagged as outside the proven range.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from eil.errors import EntryOutOfBox, InvalidParameter
from eil.linalg import RationalMatrix, float_inv_norm_sq, frobenius_norm_sq, invert_exact

#: float-path margins below this are re-checked on the exact path
FLOAT_EQUALITY_TOL = 1e-9


@dataclass(frozen=True)
class BoundCase:
    n: int
    case: str  # "odd" | "even" | "two" | "one"
    k: int

    @property
    def paper_scope(self) -> bool:
        return self.n >= 2

    @property
    def strict(self) -> bool:
        """Whether the proven inequality is strict (even n >= 4)."""
        return self.case == "even"


def bound_case(n: int) -> BoundCase:
    if n < 1:
        raise InvalidParameter(f"order must be positive, got {n}")
    if n == 1:
        return BoundCase(1, "one", 1)
    if n == 2:
        return BoundCase(2, "two", 1)
    if n % 2:
        return BoundCase(n, "odd", (n + 1) // 2)
    return BoundCase(n, "even", n // 2)


def lower_bound_sq(n: int) -> Fraction:
    c = bound_case(n)
    if c.case == "one":
        return Fraction(1)
    if c.case == "two":
        return Fraction(2)
    if c.case == "odd":
        return Fraction(4 * n * n, (n + 1) ** 2)
    return Fraction(4 * (n * n - 2 * n + 2), n * n)


def lower_bound(n: int) -> float:
    """Display value of the bound (the square root is irrational in general)."""
    return math.sqrt(lower_bound_sq(n))


@dataclass(frozen=True)
class BoundReport:
    n: int
    case: str
    bound_sq: Fraction
    norm_sq: Fraction | float
    satisfied: bool
    equality: bool
    margin: Fraction | float
    paper_scope: bool
    strict: bool = False
    exact: bool = True

    @property
    def violation(self) -> bool:
        """A counterexample to the proven statement (should never happen)."""
        if not self.paper_scope:
            return not self.satisfied
        return not self.satisfied or (self.strict and self.equality)

    def to_json(self) -> dict:
        out = {
            "n": self.n,
            "case": self.case,
            "bound_sq": self.bound_sq,
            "bound": math.sqrt(self.bound_sq),
            "norm_sq": self.norm_sq,
            "norm": math.sqrt(self.norm_sq),
            "satisfied": self.satisfied,
            "equality": self.equality,
            "margin": self.margin,
            "paper_scope": self.paper_scope,
            "strict": self.strict,
        }
        if self.strict and self.equality:
            out["note"] = "equality contradicts the strict even-order bound"
        return out


def _report(n: int, norm_sq, exact: bool) -> BoundReport:
    c = bound_case(n)
    bsq = lower_bound_sq(n)
    margin = norm_sq - bsq if exact else float(norm_sq) - float(bsq)
    return BoundReport(
        n=n,
        case=c.case,
        bound_sq=bsq,
        norm_sq=norm_sq,
        satisfied=margin >= 0,
        equality=margin == 0,
        margin=margin,
        paper_scope=c.paper_scope,
        strict=c.strict,
        exact=exact,
    )


def check_bound(a: RationalMatrix) -> BoundReport:
    """Exact bound check for a nonsingular matrix with entries in [0, 1]."""
    if not a.in_box():
        raise EntryOutOfBox("all entries must lie in [0, 1]")
    return _report(a.n, frobenius_norm_sq(invert_exact(a)), exact=True)


def check_bound_norm_sq(n: int, norm_sq: Fraction) -> BoundReport:
    """Bound report for an already computed exact ``||A^{-1}||_F^2``."""
    return _report(n, norm_sq, exact=True)


def check_bound_float(a) -> BoundReport:
    """Float-path check; margins under ``FLOAT_EQUALITY_TOL`` escalate to the exact path.

    The escalated check uses the exact rational value of the float entries,
    so its verdict is exact for the matrix actually stored.
    """
    a = np.asarray(a, dtype=float)
    if np.any(a < 0) or np.any(a > 1):
        raise EntryOutOfBox("all entries must lie in [0, 1]")
    nsq = float_inv_norm_sq(a)
    if nsq - float(lower_bound_sq(a.shape[0])) < FLOAT_EQUALITY_TOL:
        return check_bound(RationalMatrix.from_float(a))
    return _report(a.shape[0], nsq, exact=False)
