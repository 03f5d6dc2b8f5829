"""Acceptance suite.

Each test carries a ``criterion`` marker; the terminal summary prints one
PASS/FAIL line per criterion.  Tolerances and runtime budgets are pinned in
the constants below and are not to be loosened.

Run on its own with ``pytest tests/test_acceptance.py`` or
``python tests/test_acceptance.py``.
"""

import json
import math
import time
from contextlib import contextmanager
from fractions import Fraction

import numpy as np
import pytest

from eil import proofkit as pk
from eil.bounds import check_bound, lower_bound_sq
from eil.cli import main
from eil.designs import is_smatrix, smatrix, smatrix_closed_form_inverse
from eil.linalg import RationalMatrix, frobenius_norm_sq, invert_exact, scalar_mul, transpose
from eil.search import (
    SearchConfig,
    descend,
    enumerate_binary,
    gradient_rel_error,
    index_to_rows,
    rows_to_matrix,
    run_search,
    sample_box,
)

GRAD_FD_STEP = 1e-5
GRAD_REL_TOL = 1e-6
WELL_CONDITIONED = 100.0  # 2-norm condition number below this counts as well conditioned
FLOAT_2X2_TOL = 1e-12
DESCENT_FLOOR_TOL = 1e-6
DESCENT_STAY_TOL = 1e-10


@contextmanager
def budget(seconds):
    start = time.perf_counter()
    yield
    elapsed = time.perf_counter() - start
    assert elapsed < seconds, f"runtime {elapsed:.2f}s exceeds budget {seconds}s"


@pytest.mark.criterion(1, "S-matrices attain the odd bound with the closed-form inverse")
def test_c01_smatrix_equality():
    with budget(5):
        for n in (3, 7, 11, 15, 19, 23, 31):
            s = smatrix(n)
            k = s.k
            inv = invert_exact(s.matrix)
            assert frobenius_norm_sq(inv) == Fraction(4 * n * n, (n + 1) ** 2)
            assert scalar_mul(k, inv) == scalar_mul(2, transpose(s.matrix)) - RationalMatrix.ones(n)
            assert inv == smatrix_closed_form_inverse(s)
            assert check_bound(s.matrix).equality


@pytest.mark.criterion(2, "n=2 exhaustive classification")
def test_c02_two_by_two_classification():
    with budget(1):
        res = enumerate_binary(SearchConfig(n=2))
    assert res.examined == 16
    assert res.min_norm_sq == 2
    assert sorted(res.minimizers) == sorted([[[1, 0], [0, 1]], [[0, 1], [1, 0]]])


@pytest.mark.criterion(3, "n=3 exhaustive oracle")
def test_c03_three_by_three_oracle():
    with budget(1):
        res = enumerate_binary(SearchConfig(n=3))
    assert res.examined == 512
    assert res.min_norm_sq == Fraction(9, 4)
    assert res.minimizer_count == len(res.minimizers) > 0
    assert all(is_smatrix(RationalMatrix(m)) for m in res.minimizers)


@pytest.mark.criterion(4, "n=4 exhaustive strictness")
def test_c04_four_by_four_strict():
    with budget(60):
        res = enumerate_binary(SearchConfig(n=4))
    assert res.examined == 65536
    assert res.min_norm_sq > Fraction(5, 2)
    assert res.violations == 0
    # the achieved minimum is whatever the exhaustive scan found; confirm it is
    # attained by a listed minimizer rather than asserting a number up front
    witness = RationalMatrix(res.minimizers[0])
    assert frobenius_norm_sq(invert_exact(witness)) == res.min_norm_sq
    print(f"\nn=4 achieved minimum norm^2 = {res.min_norm_sq} (~{float(res.min_norm_sq):.6f}), "
          f"bound^2 = 5/2, minimizers = {res.minimizer_count}")


@pytest.mark.criterion(5, "f and g maxima")
def test_c05_quadratic_maxima():
    with budget(5):
        for n in (3, 5, 7, 31):
            rep = pk.verify_f_max(n)
            assert rep.passed and rep.max_value == n * n
            assert rep.maximizer_profile == (rep.k,) * n
        for n in (4, 6, 8):
            k = n // 2
            rep = pk.verify_g_max(n)
            assert rep.passed and rep.max_value == Fraction(2 * k * (2 * k * k - 2 * k + 1), k - 1)
        rep4 = pk.verify_g_max(4)
        assert rep4.enumeration is not None
        assert rep4.enumeration["examined"] == 2 ** 16
        assert rep4.enumeration["max"] == rep4.max_value


@pytest.mark.criterion(6, "trace identity on 1000 random matrices per order")
def test_c06_trace_identity():
    with budget(30):
        for n in (3, 5, 7):
            traces = pk.trace_identity_batch(n, 1000, seed=0)
            assert len(traces) == 1000
            assert all(t.ok for t in traces)
            assert all(t.inner_product_value == (n + 1) ** 2 for t in traces)
        for n in (4, 6):
            k = n // 2
            traces = pk.trace_identity_batch(n, 1000, seed=0)
            assert len(traces) == 1000
            assert all(t.ok for t in traces)
            assert all(t.inner_product_value == Fraction(2 * k * (2 * k * k - 1), k - 1) for t in traces)


@pytest.mark.criterion(7, "even-case Gram entry is never an integer")
def test_c07_even_non_attainment():
    with budget(1):
        for k in range(2, 10 ** 4 + 1):
            assert Fraction(k * (k - 1), 2 * k - 1).denominator > 1
        for n in (4, 6, 8, 20, 200):
            k = n // 2
            assert pk.check_even_non_attainment(n) == Fraction(k * (k - 1), 2 * k - 1)


@pytest.mark.criterion(8, "2x2 identity residual")
def test_c08_two_by_two_identity():
    with budget(5):
        res = pk.two_by_two_batch(10 ** 4, seed=0)
    assert res["count"] == 10 ** 4
    assert res["exact_nonzero"] == 0
    assert res["float_max_abs"] < FLOAT_2X2_TOL


@pytest.mark.criterion(9, "analytic gradient matches central differences")
def test_c09_gradient():
    rng = np.random.default_rng(9)
    worst = 0.0
    with budget(10):
        for n in (3, 4, 5, 6):
            done = 0
            while done < 100:
                a = rng.uniform(0.0, 1.0, size=(n, n))
                if np.linalg.cond(a) >= WELL_CONDITIONED:
                    continue
                worst = max(worst, gradient_rel_error(a, h=GRAD_FD_STEP))
                done += 1
    assert worst < GRAD_REL_TOL, worst


@pytest.mark.criterion(10, "no violations over uniform samples")
def test_c10_statistical():
    with budget(60):
        for n in (3, 4, 5):
            res = sample_box(SearchConfig(n=n, backend="sample", sample_count=10 ** 5, seed=0))
            assert res.examined == 10 ** 5
            assert res.violations == 0
            assert res.min_norm_sq >= float(lower_bound_sq(n))


@pytest.mark.criterion(11, "projected gradient descent respects the bound")
def test_c11_descent():
    with budget(60):
        res = run_search(SearchConfig(n=3, backend="descend", starts=100, seed=0))
        assert res.examined == 100
        assert min(res.details["terminal_values"]) >= 2.25 - DESCENT_FLOOR_TOL
        assert res.details["all_monotone"]
        stay = descend(SearchConfig(n=3, backend="descend"), a0=smatrix(3).matrix.to_float())
        assert abs(stay.min_norm_sq - 2.25) < DESCENT_STAY_TOL


def _cli_stdout(capsys, argv):
    code = main(argv)
    out, _ = capsys.readouterr()
    assert code == 0, argv
    json.loads(out)
    return out


@pytest.mark.criterion(12, "reports are byte-identical across worker counts")
def test_c12_determinism(capsys):
    runs = []
    for n in (2, 3, 4):
        runs.append(["enumerate", "--n", str(n)])
    for n in (3, 4, 5, 6, 7):
        runs.append(["verify-proof", "--n", str(n), "--trace", "--samples", "1000"])
    for n in (3, 4, 5):
        runs.append(["sample", "--n", str(n), "--count", "100000", "--seed", "0"])
    for argv in runs:
        one = _cli_stdout(capsys, argv + ["--workers", "1"])
        four = _cli_stdout(capsys, argv + ["--workers", "4"])
        assert one == four, argv


def test_enumeration_helpers_agree_with_float_minimum():
    """Sanity link between the oracle used in criterion 4 and a plain float scan."""
    best = math.inf
    for idx in range(1 << 16):
        a = np.array(rows_to_matrix(index_to_rows(idx, 4), 4), dtype=float)
        if abs(np.linalg.det(a)) < 0.5:
            continue
        inv = np.linalg.inv(a)
        best = min(best, float(np.sum(inv * inv)))
    assert abs(best - float(enumerate_binary(SearchConfig(n=4)).min_norm_sq)) < 1e-9


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
