from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from eil.designs import smatrix
from eil.errors import ChainBroken, EntryOutOfBox, ParityMismatch, SingularMatrix
from eil.linalg import RationalMatrix, frobenius_norm_sq, invert_exact
from eil import proofkit as pk

I3 = RationalMatrix.identity(3)
I4 = RationalMatrix.identity(4)


@st.composite
def box_matrices(draw, n):
    return RationalMatrix(
        [[Fraction(draw(st.integers(0, 6)), 6) for _ in range(n)] for _ in range(n)]
    )


def test_pair_at_smatrix_is_equal():
    s = smatrix(3).matrix
    pair = pk.build_proof_pair(s)
    assert pair.m == pair.nn
    assert pair.m.order == 4
    m = pair.m.materialize()
    # M = [[1, e^T], [e, -k S^{-1}]]
    assert m.rows[0] == (1, 1, 1, 1)
    assert all(m[i, 0] == 1 for i in range(4))


def test_pair_at_identity():
    pair = pk.build_proof_pair(I3)
    assert pair.m != pair.nn and pair.m.order == pair.nn.order == 4
    even = pk.build_proof_pair(I4)
    assert even.case == "even" and even.m.order == 5
    assert even.m.scale_sq == 8 and even.nn.scale_sq == Fraction(1, 8)


def test_pair_errors():
    with pytest.raises(SingularMatrix):
        pk.build_proof_pair(RationalMatrix.ones(3))
    with pytest.raises(ParityMismatch):
        pk.build_proof_pair(I3, "even")
    with pytest.raises(EntryOutOfBox):
        pk.build_proof_pair(RationalMatrix([[2, 0, 0], [0, 1, 0], [0, 0, 1]]))


def test_materialized_odd_pair_matches_bordered_algebra():
    a = RationalMatrix([[1, Fraction(1, 2), 0], [0, 1, Fraction(1, 3)], [Fraction(1, 4), 0, 1]])
    pair = pk.build_proof_pair(a)
    m, n = pair.m.materialize(), pair.nn.materialize()
    from eil.linalg import inner_product, matmul, transpose

    assert inner_product(m, n) == pk.bordered_inner(pair.m, pair.nn) == 16
    assert frobenius_norm_sq(m) == pair.m.norm_sq()
    prod = matmul(m, transpose(n))
    assert prod[0, 0] == 4
    assert all(prod[i, j] == (4 if i == j else 0) for i in range(1, 4) for j in range(1, 4))


def test_trace_identity_examples():
    assert pk.verify_trace_identity(pk.build_proof_pair(smatrix(3).matrix)).inner_product_value == 16
    assert pk.verify_trace_identity(pk.build_proof_pair(I4)).inner_product_value == 28
    tr = pk.verify_trace_identity(pk.build_proof_pair(smatrix(7).matrix))
    assert tr.inner_product_value == 64 and tr.m_equals_n


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([3, 4, 5, 6]).flatmap(box_matrices))
def test_trace_identity_property(a):
    try:
        invert_exact(a)
    except SingularMatrix:
        return
    tr = pk.verify_trace_identity(pk.build_proof_pair(a))
    assert tr.inner_product_value == pk.expected_inner_product(a.n)
    assert tr.cauchy_schwarz_holds
    assert pk.lower_bound_sq(a.n) <= tr.derived_bound_sq_on_inverse <= tr.inverse_norm_sq


def test_f_values():
    s = smatrix(3).matrix
    assert pk.f_value(s, 2) == 9
    assert pk.f_value(I3, 2) == Fraction(33, 4) == pk.f_matrix_form(I3, 2)
    assert pk.f_value(RationalMatrix.zeros(3), 2) == 0
    with pytest.raises(ParityMismatch):
        pk.f_value(I4, 2)


def test_g_values():
    a = RationalMatrix([[1, 1, 0, 0], [0, 1, 1, 0], [0, 0, 1, 1], [1, 0, 0, 1]])
    assert pk.g_value(a, 2) == 20
    assert pk.g_value(I4, 2) == 14 == pk.g_matrix_form(I4, 2)
    assert pk.g_value(RationalMatrix.zeros(4), 2) == 0


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([3, 4, 5, 6, 7]).flatmap(box_matrices))
def test_quadratic_two_formulas_agree(a):
    if a.n % 2:
        k = (a.n + 1) // 2
        assert pk.f_value(a, k) == pk.f_matrix_form(a, k) <= a.n ** 2
    else:
        k = a.n // 2
        assert pk.g_value(a, k) == pk.g_matrix_form(a, k) <= Fraction(2 * k * (2 * k * k - 2 * k + 1), k - 1)


def test_f_row_contributions():
    k = 2
    assert pk.f_row(1, k) == Fraction(11, 4)
    assert pk.f_row(2, k) == 3
    assert max(range(4), key=lambda p: pk.f_row(p, k)) == 2


@pytest.mark.parametrize("n,expected", [(3, 9), (5, 25), (7, 49), (31, 961)])
def test_verify_f_max(n, expected):
    rep = pk.verify_f_max(n)
    assert rep.passed and rep.max_value == expected
    assert rep.maximizer_profile == (rep.k,) * n


def test_f_max_enumeration_at_3():
    rep = pk.verify_f_max(3)
    assert rep.enumeration["examined"] == 512
    assert rep.enumeration["max"] == 9 and rep.enumeration["all_rows_sum_to_k"]


@pytest.mark.parametrize("n,expected", [(4, 20), (6, 39), (8, Fraction(2 * 4 * 25, 3))])
def test_verify_g_max(n, expected):
    rep = pk.verify_g_max(n)
    assert rep.passed and rep.max_value == expected
    if n == 4:
        assert rep.enumeration["examined"] == 65536 and rep.enumeration["maximizers"] == 6 ** 4


def test_second_partials():
    assert pk.g_second_partial(3) == 7
    assert pk.f_second_partial(2) == 8 - Fraction(10, 4)
    for k in range(2, 20):
        assert pk.f_second_partial(k) > 0 and pk.g_second_partial(k) > 0


@pytest.mark.parametrize("n", [3, 4, 5, 6, 7, 8])
def test_second_partial_finite_difference(n):
    rng = np.random.default_rng(n)
    a = rng.uniform(size=(n, n))
    if n % 2:
        k = (n + 1) // 2
        func, exact = (lambda x: pk.f_float(x, k)), pk.f_second_partial(k)
    else:
        k = n // 2
        func, exact = (lambda x: pk.g_float(x, k)), pk.g_second_partial(k)
    for i in range(n):
        for j in range(n):
            fd = pk.second_partial_fd(func, a, i, j)
            assert abs(fd - float(exact)) / float(exact) < 1e-6


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_box_samples_below_vertex_max(n):
    best, claimed = pk.box_max_sample(n, 20000, seed=n)
    assert best <= claimed


def test_even_non_attainment_examples():
    assert pk.check_even_non_attainment(4) == Fraction(2, 3)
    assert pk.check_even_non_attainment(6) == Fraction(6, 5)
    assert pk.check_even_non_attainment(20) == Fraction(90, 19)
    with pytest.raises(ParityMismatch):
        pk.check_even_non_attainment(5)


def test_even_non_attainment_denominator():
    for k in range(2, 500):
        assert pk.check_even_non_attainment(2 * k).denominator == 2 * k - 1


def test_case2x2_examples():
    assert pk.case2x2_identity_residual(1, 0, 0, 1) == 0 and pk.case2x2_bracket(1, 0, 0, 1) == 0
    assert pk.case2x2_identity_residual(0, 1, 1, 0) == 0 and pk.case2x2_bracket(0, 1, 1, 0) == 0
    half = Fraction(1, 2)
    assert pk.case2x2_identity_residual(1, half, 0, 1) == 0
    assert pk.case2x2_bracket(1, half, 0, 1) > 0
    with pytest.raises(SingularMatrix):
        pk.case2x2_identity_residual(1, 1, 1, 1)


def test_case2x2_equality_classification():
    hits = []
    for a, b, c, d in np.ndindex(2, 2, 2, 2):
        if a * d != b * c and pk.case2x2_equality(a, b, c, d):
            hits.append((a, b, c, d))
            assert frobenius_norm_sq(invert_exact(RationalMatrix([[a, b], [c, d]]))) == 2
    assert sorted(hits) == [(0, 1, 1, 0), (1, 0, 0, 1)]


def test_equality_chain_odd():
    assert pk.verify_equality_case_odd(smatrix(3).matrix)
    assert pk.verify_equality_case_odd(smatrix(7).matrix)
    assert not pk.verify_equality_case_odd(I3)
    with pytest.raises(ParityMismatch):
        pk.verify_equality_case_odd(I4)


def test_chain_broken_is_raised(monkeypatch):
    monkeypatch.setattr(pk, "is_smatrix", lambda a: False)
    with pytest.raises(ChainBroken):
        pk.verify_equality_case_odd(smatrix(3).matrix)


def test_trace_batch_is_worker_independent():
    one = pk.trace_identity_batch(3, 120, seed=5, workers=1)
    two = pk.trace_identity_batch(3, 120, seed=5, workers=2)
    assert one == two and len(one) == 120


def test_two_by_two_batch():
    res = pk.two_by_two_batch(500, seed=1)
    assert res["count"] == 500 and res["exact_nonzero"] == 0 and res["float_max_abs"] < 1e-12
