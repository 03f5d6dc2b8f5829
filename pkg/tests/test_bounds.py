import math
from fractions import Fraction

import numpy as np
import pytest

from eil.bounds import bound_case, check_bound, check_bound_float, lower_bound, lower_bound_sq
from eil.designs import smatrix
from eil.errors import EntryOutOfBox, SingularMatrix
from eil.linalg import RationalMatrix


def test_lower_bound_values():
    assert lower_bound_sq(3) == Fraction(9, 4)
    assert lower_bound_sq(4) == Fraction(5, 2)
    assert math.isclose(lower_bound(4), math.sqrt(10) / 2)
    assert lower_bound_sq(2) == 2
    assert lower_bound_sq(1) == 1


def test_cases():
    assert bound_case(1).case == "one" and not bound_case(1).paper_scope
    assert bound_case(2).case == "two"
    assert bound_case(7) .k == 4 and bound_case(7).case == "odd"
    assert bound_case(6).k == 3 and bound_case(6).strict


def test_odd_bound_strictly_increasing():
    odd = [lower_bound_sq(n) for n in range(3, 200, 2)]
    assert all(a < b for a, b in zip(odd, odd[1:]))


def test_check_bound_examples():
    rep = check_bound(RationalMatrix.identity(2))
    assert rep.satisfied and rep.equality and rep.margin == 0
    rep = check_bound(smatrix(3).matrix)
    assert rep.satisfied and rep.equality and rep.margin == 0 and not rep.violation
    rep = check_bound(RationalMatrix([[1, 0], [0, Fraction(1, 2)]]))
    assert rep.norm_sq == 5 and rep.satisfied and not rep.equality and rep.margin == 3


def test_identity_order4():
    rep = check_bound(RationalMatrix.identity(4))
    assert rep.norm_sq == 4 and rep.bound_sq == Fraction(5, 2) and rep.satisfied and not rep.equality
    assert rep.strict and not rep.violation


@pytest.mark.parametrize("n", [3, 7, 11, 15])
def test_smatrices_hit_equality(n):
    rep = check_bound(smatrix(n).matrix)
    assert rep.equality and rep.margin == 0


def test_check_bound_errors():
    with pytest.raises(SingularMatrix):
        check_bound(RationalMatrix([[1, 1], [1, 1]]))
    with pytest.raises(EntryOutOfBox):
        check_bound(RationalMatrix([[2, 0], [0, 1]]))
    with pytest.raises(EntryOutOfBox):
        check_bound(RationalMatrix([[-1, 0], [0, 1]]))


def test_report_json():
    obj = check_bound(RationalMatrix.identity(3)).to_json()
    for key in ("n", "case", "bound_sq", "norm_sq", "satisfied", "equality", "margin", "paper_scope"):
        assert key in obj
    assert obj["bound_sq"] == Fraction(9, 4)


def test_n1_extension():
    rep = check_bound(RationalMatrix([[Fraction(1, 2)]]))
    assert rep.norm_sq == 4 and rep.satisfied and not rep.paper_scope


def test_float_path_escalates_near_equality():
    rep = check_bound_float(np.eye(2))
    assert rep.exact and rep.equality
    rep = check_bound_float(np.array([[0.9, 0.1], [0.2, 0.7]]))
    assert not rep.exact and rep.satisfied and not rep.equality
