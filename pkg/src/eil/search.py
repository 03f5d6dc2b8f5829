"""Extremal search for small ``||A^{-1}||_F`` over the unit box.

Three backends:

``enumerate``
    every {0,1}-matrix of order ``n <= 5``, exact arithmetic;
``sample``
    uniform random matrices, float path with exact escalation near the bound;
``descend``
    projected gradient descent on ``h(A) = ||A^{-1}||_F^2`` with Armijo
    backtracking and clamping to ``[0, 1]``.

Every result is a pure function of its config; the worker count only changes
wall time.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations

import numpy as np

from eil._parallel import PRNG_NAME, block_rng, blocks, run_blocks
from eil.bounds import FLOAT_EQUALITY_TOL, bound_case, check_bound, lower_bound_sq
from eil.errors import InvalidParameter, OrderTooLarge, SingularIterate, SingularMatrix
from eil.linalg import RationalMatrix, batch_lu_inverse, float_inverse, fraction_free_inverse

MAX_ENUM_ORDER = 5
FULL_MINIMIZER_LIST_ORDER = 3
MINIMIZER_SAMPLE = 16
ENUM_BLOCK = 4096
SAMPLE_BLOCK = 4096


@dataclass(frozen=True)
class SearchConfig:
    n: int
    backend: str = "enumerate"
    seed: int = 0
    sample_count: int = 1000
    starts: int = 1
    max_iters: int = 5000
    armijo: float = 1e-4
    pg_tol: float = 1e-8
    jitter: float = 1e-2
    max_restarts: int = 10
    canonical: bool = False
    worker_count: int = 1

    def __post_init__(self):
        if self.n < 2:
            raise InvalidParameter(f"n must be at least 2, got {self.n}")
        if self.backend not in ("enumerate", "sample", "descend"):
            raise InvalidParameter(f"unknown backend {self.backend!r}")
        if self.backend == "enumerate" and self.n > MAX_ENUM_ORDER:
            raise OrderTooLarge(f"enumeration is limited to n <= {MAX_ENUM_ORDER}, got {self.n}")
        if self.seed < 0 or self.seed >= 2 ** 64:
            raise InvalidParameter("seed must be a 64-bit unsigned integer")
        if self.sample_count < 1 or self.starts < 1 or self.max_iters < 0 or self.worker_count < 1:
            raise InvalidParameter("counts must be positive")

    def to_json(self) -> dict:
        """Parameters that determine the result (the worker count does not)."""
        out = asdict(self)
        del out["worker_count"]
        if self.backend == "enumerate":
            for key in ("seed", "sample_count", "starts", "max_iters", "armijo", "pg_tol", "jitter", "max_restarts"):
                del out[key]
        elif self.backend == "sample":
            for key in ("starts", "max_iters", "armijo", "pg_tol", "jitter", "max_restarts", "canonical"):
                del out[key]
        else:
            for key in ("sample_count", "canonical"):
                del out[key]
        out["prng"] = PRNG_NAME
        return out


@dataclass
class SearchResult:
    config: SearchConfig
    min_norm_sq: Fraction | float | None
    minimizers: list
    minimizer_count: int
    examined: int
    singular_skipped: int
    violations: int
    details: dict = field(default_factory=dict)

    @property
    def bound_sq(self) -> Fraction:
        return lower_bound_sq(self.config.n)

    @property
    def all_satisfy_bound(self) -> bool:
        return self.violations == 0

    def to_json(self) -> dict:
        n = self.config.n
        return {
            "backend": self.config.backend,
            "n": n,
            "case": bound_case(n).case,
            "min_norm_sq": self.min_norm_sq,
            "min_norm": None if self.min_norm_sq is None else math.sqrt(self.min_norm_sq),
            "bound_sq": self.bound_sq,
            "bound": math.sqrt(self.bound_sq),
            "all_satisfy_bound": self.all_satisfy_bound,
            "violations": self.violations,
            "examined": self.examined,
            "singular_skipped": self.singular_skipped,
            "minimizer_count": self.minimizer_count,
            "minimizers": self.minimizers,
            "details": self.details,
            "config": self.config.to_json(),
        }


def _below(value, bound: Fraction, strict: bool) -> bool:
    return value <= bound if strict else value < bound


# -- exhaustive enumeration --------------------------------------------------------


def index_to_rows(index: int, n: int) -> list[int]:
    """Row bit patterns of the matrix with row-major bit index ``index`` (MSB first)."""
    mask = (1 << n) - 1
    return [(index >> (n * (n - 1 - r))) & mask for r in range(n)]


def rows_to_matrix(rows: list[int], n: int) -> list[list[int]]:
    return [[(r >> (n - 1 - j)) & 1 for j in range(n)] for r in rows]


def rows_to_index(rows: list[int], n: int) -> int:
    index = 0
    for r in rows:
        index = (index << n) | r
    return index


def _scan(n: int, candidates, bound: Fraction, strict: bool):
    best = None
    hits: list[int] = []
    examined = singular = violations = 0
    for rows in candidates:
        examined += 1
        try:
            d, x = fraction_free_inverse(rows_to_matrix(rows, n))
        except SingularMatrix:
            singular += 1
            continue
        value = Fraction(sum(v * v for row in x for v in row), d * d)
        if _below(value, bound, strict):
            violations += 1
        if best is None or value < best:
            best, hits = value, [rows_to_index(rows, n)]
        elif value == best:
            hits.append(rows_to_index(rows, n))
    return best, hits, examined, singular, violations


def _enum_block(n: int, start: int, stop: int):
    c = bound_case(n)
    return _scan(n, (index_to_rows(i, n) for i in range(start, stop)), lower_bound_sq(n), c.strict)


def _enum_canonical_block(n: int, first: int):
    c = bound_case(n)
    cands = ([first, *rest] for rest in combinations(range(first + 1, 1 << n), n - 1))
    return _scan(n, cands, lower_bound_sq(n), c.strict)


def _merge(parts):
    best = None
    hits: list[int] = []
    examined = singular = violations = 0
    for b, h, e, s, v in parts:
        examined += e
        singular += s
        violations += v
        if b is None:
            continue
        if best is None or b < best:
            best, hits = b, list(h)
        elif b == best:
            hits.extend(h)
    return best, sorted(hits), examined, singular, violations


def enumerate_binary(config: SearchConfig) -> SearchResult:
    """Exact minimum of ``||A^{-1}||_F^2`` over all nonsingular {0,1}-matrices.

    With ``config.canonical`` only matrices whose rows strictly increase (as
    bit patterns) are visited: one representative per row-permutation class
    of nonsingular matrices, which leaves the norm unchanged.  Minimizer
    counts are then scaled back by ``n!``.
    """
    n = config.n
    if n > MAX_ENUM_ORDER:
        raise OrderTooLarge(f"enumeration is limited to n <= {MAX_ENUM_ORDER}, got {n}")
    if config.canonical:
        tasks = [(n, first) for first in range(1 << n)]
        parts = run_blocks(_enum_canonical_block, tasks, config.worker_count)
    else:
        tasks = [(n, lo, hi) for _, lo, hi in blocks(1 << (n * n), ENUM_BLOCK)]
        parts = run_blocks(_enum_block, tasks, config.worker_count)
    best, hits, examined, singular, violations = _merge(parts)
    multiplier = math.factorial(n) if config.canonical else 1
    shown = hits if n <= FULL_MINIMIZER_LIST_ORDER and not config.canonical else hits[:MINIMIZER_SAMPLE]
    return SearchResult(
        config=config,
        min_norm_sq=best,
        minimizers=[rows_to_matrix(index_to_rows(i, n), n) for i in shown],
        minimizer_count=len(hits) * multiplier,
        examined=examined,
        singular_skipped=singular,
        violations=violations,
        details={
            "space": "row-sorted representatives" if config.canonical else "all binary matrices",
            "minimizers_listed": "all" if len(shown) == len(hits) and not config.canonical else "sample",
        },
    )


# -- uniform sampling ----------------------------------------------------------------


def _sample_eval(mats: np.ndarray, bound: Fraction, strict: bool) -> dict:
    inv, ok = batch_lu_inverse(mats)
    nsq = np.einsum("bij,bij->b", inv, inv)
    nsq = np.where(ok, nsq, np.inf)
    bound_f = float(bound)
    escalated = equalities = violations = 0
    witnesses = []
    for b in np.flatnonzero(nsq - bound_f < FLOAT_EQUALITY_TOL):
        escalated += 1
        try:
            rep = check_bound(RationalMatrix.from_float(mats[b]))
        except SingularMatrix:
            continue
        if rep.equality:
            equalities += 1
        if rep.violation:
            violations += 1
            witnesses.append(mats[b].tolist())
    arg = int(np.argmin(nsq)) if ok.any() else -1
    return {
        "min": float(nsq[arg]) if arg >= 0 else None,
        "argmin": mats[arg].tolist() if arg >= 0 else None,
        "examined": int(mats.shape[0]),
        "singular": int((~ok).sum()),
        "escalated": escalated,
        "equalities": equalities,
        "violations": violations,
        "witnesses": witnesses,
    }


def _sample_block(n: int, seed: int, block: int, start: int, stop: int) -> dict:
    rng = block_rng(seed, block)
    mats = rng.uniform(0.0, 1.0, size=(stop - start, n, n))
    c = bound_case(n)
    return _sample_eval(mats, lower_bound_sq(n), c.strict)


def sample_box(config: SearchConfig, planted=None) -> SearchResult:
    """Check the bound on ``config.sample_count`` uniform random matrices.

    ``planted`` matrices (e.g. a known extremal witness) are evaluated first
    and counted with the samples.
    """
    n = config.n
    c = bound_case(n)
    tasks = [(n, config.seed, b, lo, hi) for b, lo, hi in blocks(config.sample_count, SAMPLE_BLOCK)]
    parts = run_blocks(_sample_block, tasks, config.worker_count)
    if planted:
        mats = np.array([np.asarray(p, dtype=float) for p in planted])
        if mats.shape[1:] != (n, n):
            raise InvalidParameter(f"planted matrices must be {n}x{n}")
        parts = [_sample_eval(mats, lower_bound_sq(n), c.strict)] + parts
    best = None
    argmin = None
    for p in parts:
        if p["min"] is not None and (best is None or p["min"] < best):
            best, argmin = p["min"], p["argmin"]
    witnesses = [w for p in parts for w in p["witnesses"]]
    return SearchResult(
        config=config,
        min_norm_sq=best,
        minimizers=[argmin] if argmin is not None else [],
        minimizer_count=1 if argmin is not None else 0,
        examined=sum(p["examined"] for p in parts),
        singular_skipped=sum(p["singular"] for p in parts),
        violations=sum(p["violations"] for p in parts),
        details={
            "planted": len(planted) if planted else 0,
            "escalated_to_exact": sum(p["escalated"] for p in parts),
            "exact_equalities": sum(p["equalities"] for p in parts),
            "violation_witnesses": witnesses[:MINIMIZER_SAMPLE],
        },
    )


# -- projected gradient descent ------------------------------------------------------


def inv_norm_sq(a: np.ndarray) -> float:
    inv = float_inverse(a)
    return float(np.sum(inv * inv))


def gradient_inv_norm_sq(a) -> np.ndarray:
    """Gradient of ``||A^{-1}||_F^2``: ``-2 A^{-T} A^{-1} A^{-T}``."""
    inv = float_inverse(a)
    return -2.0 * inv.T @ inv @ inv.T


def finite_difference_gradient(func, a: np.ndarray, h: float = 1e-5) -> np.ndarray:
    """Central differences of a scalar function of a matrix, entry by entry."""
    a = np.array(a, dtype=float)
    grad = np.empty_like(a)
    for idx in np.ndindex(a.shape):
        orig = a[idx]
        a[idx] = orig + h
        up = func(a)
        a[idx] = orig - h
        down = func(a)
        a[idx] = orig
        grad[idx] = (up - down) / (2 * h)
    return grad


def gradient_rel_error(a: np.ndarray, h: float = 1e-5) -> float:
    analytic = gradient_inv_norm_sq(a)
    numeric = finite_difference_gradient(inv_norm_sq, a, h)
    return float(np.linalg.norm(analytic - numeric) / np.linalg.norm(analytic))


@lru_cache(maxsize=None)
def gradient_self_test() -> float:
    """Finite-difference check of the analytic gradient, run once before any descent."""
    rng = np.random.default_rng(20240601)
    worst = 0.0
    for n in (2, 3, 4):
        while True:
            a = rng.uniform(0.0, 1.0, size=(n, n))
            if np.linalg.cond(a) < 50:
                break
        worst = max(worst, gradient_rel_error(a))
    if not worst < 1e-6:
        raise RuntimeError(f"gradient self-test failed: relative error {worst:.3e}")
    return worst


def _project(a: np.ndarray) -> np.ndarray:
    return np.clip(a, 0.0, 1.0)


def _safe_value(a: np.ndarray) -> float:
    try:
        return inv_norm_sq(a)
    except SingularMatrix:
        return math.inf


def descend_one(a0: np.ndarray, rng: np.random.Generator, config: SearchConfig) -> dict:
    """One projected-gradient run; returns the terminal state and its bookkeeping."""
    a = _project(np.array(a0, dtype=float))
    restarts = 0
    h = _safe_value(a)
    while not math.isfinite(h):
        if restarts >= config.max_restarts:
            raise SingularIterate(f"start still singular after {restarts} jitter restarts")
        restarts += 1
        a = _project(a + rng.uniform(-config.jitter, config.jitter, size=a.shape))
        h = _safe_value(a)
    values = [h]
    step = 1.0
    status = "max_iters"
    iters = 0
    for iters in range(1, config.max_iters + 1):
        g = gradient_inv_norm_sq(a)
        pg = _project(a - g) - a
        if np.linalg.norm(pg) < config.pg_tol:
            status = "converged"
            iters -= 1
            break
        t = step
        while True:
            trial = _project(a - t * g)
            h_trial = _safe_value(trial)
            if h_trial <= h + config.armijo * float(np.sum(g * (trial - a))):
                break
            t *= 0.5
            if t < 1e-30:
                trial = None
                break
        if trial is None:
            status = "line_search_stalled"
            break
        a, h = trial, h_trial
        values.append(h)
        step = min(2.0 * t, 1e6)
    diffs = np.diff(values)
    return {
        "value": h,
        "matrix": a.tolist(),
        "iterations": iters,
        "status": status,
        "restarts": restarts,
        "monotone": bool(np.all(diffs <= 0)),
        "trace_length": len(values),
    }


def _descend_block(config: SearchConfig, start_index: int, a0) -> dict:
    rng = block_rng(config.seed, start_index)
    if a0 is None:
        a0 = rng.uniform(0.0, 1.0, size=(config.n, config.n))
    return descend_one(np.asarray(a0, dtype=float), rng, config)


def descend(config: SearchConfig, a0=None) -> SearchResult:
    """Projected gradient descent from ``a0`` or from ``config.starts`` seeded random starts."""
    n = config.n
    gradient_self_test()
    if a0 is not None:
        a0 = np.asarray(a0, dtype=float)
        if a0.shape != (n, n):
            raise InvalidParameter(f"start matrix must be {n}x{n}")
        if np.any(a0 < 0) or np.any(a0 > 1):
            raise InvalidParameter("start matrix must lie in the box [0, 1]")
        tasks = [(config, 0, a0)]
    else:
        tasks = [(config, s, None) for s in range(config.starts)]
    runs = run_blocks(_descend_block, tasks, config.worker_count)
    c = bound_case(n)
    bound = lower_bound_sq(n)
    violations = 0
    for run in runs:
        if run["value"] - float(bound) < FLOAT_EQUALITY_TOL:
            try:
                rep = check_bound(RationalMatrix.from_float(np.array(run["matrix"])))
            except SingularMatrix:
                continue
            if rep.violation:
                violations += 1
    best = min(runs, key=lambda r: r["value"])
    return SearchResult(
        config=config,
        min_norm_sq=best["value"],
        minimizers=[best["matrix"]],
        minimizer_count=1,
        examined=len(runs),
        singular_skipped=0,
        violations=violations,
        details={
            "terminal_values": [r["value"] for r in runs],
            "iterations": [r["iterations"] for r in runs],
            "statuses": [r["status"] for r in runs],
            "restarts": sum(r["restarts"] for r in runs),
            "all_monotone": all(r["monotone"] for r in runs),
            "strict_bound": c.strict,
        },
    )


def run_search(config: SearchConfig, a0=None, planted=None) -> SearchResult:
    if config.backend == "enumerate":
        return enumerate_binary(config)
    if config.backend == "sample":
        return sample_box(config, planted=planted)
    return descend(config, a0=a0)
