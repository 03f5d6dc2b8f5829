"""Command-line interface.

Structured results go to stdout (or ``--out``) as JSON; a short human summary
and the run manifest go to stderr (or ``--manifest``).

Exit codes: 0 all checks pass, 1 a mathematical finding (bound violation or
a failed identity), 2 usage or data error.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

import numpy as np

from eil import __version__
from eil import designs
from eil.bounds import check_bound
from eil.errors import ChainBroken, EILError, IdentityViolated
from eil.io import dumps, format_matrix_text, read_matrix
from eil.linalg import RationalMatrix
from eil.search import SearchConfig, run_search
from eil import proofkit

EXIT_OK, EXIT_FINDING, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _emit(text: str, out: str | None) -> None:
    if out:
        try:
            Path(out).write_text(text)
        except OSError as exc:
            raise UsageError(f"cannot write {out}: {exc}") from None
    else:
        sys.stdout.write(text)


def _info(msg: str) -> None:
    print(msg, file=sys.stderr)


def _text_summary(obj: dict) -> str:
    lines = []
    for key, value in obj.items():
        if isinstance(value, (dict, list)):
            continue
        lines.append(f"{key}: {dumps(value, indent=None)}")
    return "\n".join(lines) + "\n"


# -- construct ------------------------------------------------------------------


def cmd_construct(args) -> tuple[int, dict]:
    cap = designs.max_order()
    chosen = [x for x in (args.order, args.sylvester, args.paley, args.paley_ii) if x is not None]
    if len(chosen) != 1:
        raise UsageError("give exactly one of --order, --sylvester, --paley, --paley-ii")
    if args.sylvester is not None:
        h = designs.sylvester(args.sylvester, cap)
    elif args.paley is not None:
        h = designs.paley(args.paley, cap)
    elif args.paley_ii is not None:
        h = designs.paley_ii(args.paley_ii, cap)
    elif args.kind == "smatrix":
        h = designs.hadamard(args.order + 1, cap)
    else:
        h = designs.hadamard(args.order, cap)

    if args.kind == "hadamard":
        obj, matrix = h, h.matrix
        valid = designs.is_hadamard(matrix)
    else:
        obj = designs.smatrix_from_hadamard(h)
        matrix = obj.matrix
        valid = designs.is_smatrix(matrix)
    text = dumps(obj) + "\n" if args.format == "json" else format_matrix_text(matrix)
    _emit(text, args.out)
    _info(f"{args.kind} of order {matrix.n}: {'valid' if valid else 'INVALID'}")
    return (EXIT_OK if valid else EXIT_FINDING), {"order": matrix.n, "valid": valid}


# -- check ------------------------------------------------------------------------


def cmd_check(args) -> tuple[int, dict]:
    a = read_matrix(args.matrix)
    report = check_bound(a)
    payload = report.to_json()
    _emit(dumps(payload) + "\n" if args.format == "json" else _text_summary(payload), args.out)
    _info(
        f"n={report.n} case={report.case} norm^2={report.norm_sq} bound^2={report.bound_sq} "
        f"satisfied={report.satisfied} equality={report.equality}"
    )
    return (EXIT_FINDING if report.violation else EXIT_OK), {"satisfied": report.satisfied, "equality": report.equality}


# -- verify-proof --------------------------------------------------------------------


def _suite(name: str, n, fn):
    try:
        passed, detail = fn()
    except (IdentityViolated, ChainBroken) as exc:
        return {"suite": name, "n": n, "passed": False, "error": f"{type(exc).__name__}: {exc}"}
    return {"suite": name, "n": n, "passed": bool(passed), "detail": detail}


def _orders(args) -> list[int]:
    if args.n is not None:
        ns = [args.n]
    else:
        ns = list(range(args.n_min, args.n_max + 1))
    if args.case:
        ns = [n for n in ns if proofkit.bound_case(n).case == args.case]
    return ns


def _equality_suite(n: int):
    detail = {}
    try:
        s = designs.smatrix(n)
    except EILError:
        s = None
    if s is not None:
        detail["smatrix"] = proofkit.verify_equality_case_odd(s.matrix)
        closed = designs.smatrix_closed_form_inverse(s)
        detail["closed_form_matches_elimination"] = closed == designs.smatrix_inverse(s)
    detail["identity"] = proofkit.verify_equality_case_odd(RationalMatrix.identity(n))
    passed = detail.get("smatrix", True) and detail.get("closed_form_matches_elimination", True) and not detail["identity"]
    return passed, detail


def cmd_verify_proof(args) -> tuple[int, dict]:
    selected = {
        "trace": args.trace,
        "f-max": args.f_max,
        "g-max": args.g_max,
        "non-attainment": args.non_attainment,
        "equality": args.equality,
        "two-by-two": args.two_by_two,
    }
    run_all = not any(selected.values())
    want = {k: (run_all or v) for k, v in selected.items()}
    suites = []
    traces = []
    for n in _orders(args):
        case = proofkit.bound_case(n).case
        if case in ("odd", "even") and want["trace"]:
            batch = proofkit.trace_identity_batch(n, args.samples, seed=args.seed, workers=args.workers)
            summary = proofkit.summarize_traces(n, batch)
            suites.append({"suite": "trace", "n": n, "passed": summary["failures"] == 0, "detail": summary})
            traces.extend(batch)
        if case == "odd" and want["f-max"]:
            suites.append(_suite("f-max", n, lambda: ((r := proofkit.verify_f_max(n)).passed, r)))
        if case == "odd" and want["equality"]:
            suites.append(_suite("equality", n, lambda: _equality_suite(n)))
        if case == "even" and want["g-max"]:
            suites.append(_suite("g-max", n, lambda: ((r := proofkit.verify_g_max(n)).passed, r)))
        if case == "even" and want["non-attainment"]:
            suites.append(_suite("non-attainment", n, lambda: (True, {"offdiagonal_gram": proofkit.check_even_non_attainment(n)})))
        if case == "two" and want["two-by-two"]:

            def two():
                res = proofkit.two_by_two_batch(args.samples, seed=args.seed, workers=args.workers)
                cls = {
                    "identity": proofkit.case2x2_equality(1, 0, 0, 1),
                    "swap": proofkit.case2x2_equality(0, 1, 1, 0),
                }
                ok = res["exact_nonzero"] == 0 and res["float_max_abs"] < 1e-12 and all(cls.values())
                return ok, {**res, "equality_cases": cls}

            suites.append(_suite("two-by-two", n, two))
    if not suites:
        raise UsageError("no suites selected for the requested orders")
    passed = all(s["passed"] for s in suites)
    payload = {"suites": suites, "verdict": "pass" if passed else "fail"}
    if not args.summary_only:
        payload["traces"] = traces
    _emit(dumps(payload) + "\n" if args.format == "json" else _text_summary(payload), args.out)
    for s in suites:
        _info(f"{'PASS' if s['passed'] else 'FAIL'} {s['suite']} n={s['n']}")
    return (EXIT_OK if passed else EXIT_FINDING), {"suites": len(suites), "passed": passed}


# -- search backends ------------------------------------------------------------------


def cmd_search(args) -> tuple[int, dict]:
    config = SearchConfig(
        n=args.n,
        backend=args.backend,
        seed=args.seed,
        sample_count=args.count,
        starts=args.starts,
        max_iters=args.max_iters,
        canonical=args.canonical,
        worker_count=args.workers,
    )
    a0 = read_matrix(args.start).to_float() if args.start else None
    planted = [read_matrix(p).to_float() for p in args.plant] if args.plant else None
    result = run_search(config, a0=a0, planted=planted)
    payload = result.to_json()
    _emit(dumps(payload) + "\n" if args.format == "json" else _text_summary(payload), args.out)
    _info(
        f"{args.backend} n={args.n}: min norm^2={payload['min_norm_sq']} bound^2={payload['bound_sq']} "
        f"examined={result.examined} violations={result.violations}"
    )
    if result.violations:
        _info("FINDING: bound violated; see the violation witnesses in the report")
    return (EXIT_FINDING if result.violations else EXIT_OK), {"violations": result.violations}


# -- parser -----------------------------------------------------------------------------


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", help="write the result here instead of stdout")
    p.add_argument("--format", choices=["json", "text"], default="json")
    p.add_argument("--manifest", help="write the run manifest here instead of stderr")


def _search_args(p: argparse.ArgumentParser, backend: str) -> None:
    p.set_defaults(func=cmd_search, backend=backend)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=100000, help="samples (sample backend)")
    p.add_argument("--starts", type=int, default=1, help="random starts (descend backend)")
    p.add_argument("--max-iters", type=int, default=5000)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--canonical", action="store_true", help="visit one matrix per row-permutation class")
    p.add_argument("--start", help="start matrix file (descend backend)")
    p.add_argument("--plant", action="append", help="matrix file evaluated along with the samples")
    _common(p)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="eil", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", help="build a Hadamard matrix or S-matrix")
    p.set_defaults(func=cmd_construct)
    p.add_argument("kind", choices=["hadamard", "smatrix"])
    p.add_argument("--order", type=int)
    p.add_argument("--sylvester", type=int, metavar="M", help="Sylvester matrix of order 2**M")
    p.add_argument("--paley", type=int, metavar="Q", help="Paley I, prime Q = 3 mod 4")
    p.add_argument("--paley-ii", type=int, metavar="Q", help="Paley II, prime Q = 1 mod 4")
    _common(p)

    p = sub.add_parser("check", help="check the lower bound for a matrix file")
    p.set_defaults(func=cmd_check)
    p.add_argument("matrix")
    _common(p)

    p = sub.add_parser("verify-proof", help="run the proof-step verification suites")
    p.set_defaults(func=cmd_verify_proof)
    p.add_argument("--n", type=int)
    p.add_argument("--n-min", type=int, default=2)
    p.add_argument("--n-max", type=int, default=8)
    p.add_argument("--case", choices=["odd", "even", "two"])
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--trace", action="store_true")
    p.add_argument("--f-max", action="store_true")
    p.add_argument("--g-max", action="store_true")
    p.add_argument("--non-attainment", action="store_true")
    p.add_argument("--equality", action="store_true")
    p.add_argument("--two-by-two", action="store_true")
    p.add_argument("--summary-only", action="store_true", help="omit the per-matrix trace array")
    _common(p)

    for backend in ("enumerate", "sample", "descend"):
        _search_args(sub.add_parser(backend, help=f"{backend} search"), backend)

    p = sub.add_parser("search", help="search backends (alias)")
    ssub = p.add_subparsers(dest="backend_cmd", required=True)
    for backend in ("enumerate", "sample", "descend"):
        _search_args(ssub.add_parser(backend), backend)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    started = time.perf_counter()
    try:
        code, verdict = args.func(args)
    except (UsageError, EILError, ValueError, ZeroDivisionError) as exc:
        _info(f"error: {type(exc).__name__}: {exc}")
        code, verdict = EXIT_USAGE, {"error": f"{type(exc).__name__}: {exc}"}
    params = {k: v for k, v in vars(args).items() if k not in ("func", "manifest")}
    manifest = {
        "subcommand": args.command if args.command != "search" else f"search {args.backend}",
        "parameters": params,
        "seed": params.get("seed"),
        "tool_version": __version__,
        "numpy_version": np.__version__,
        "wall_time_s": round(time.perf_counter() - started, 6),
        "exit_code": code,
        "verdict": verdict,
    }
    text = dumps(manifest, indent=None)
    if args.manifest:
        Path(args.manifest).write_text(text + "\n")
    else:
        _info(f"manifest: {text}")
    return code


if __name__ == "__main__":
    sys.exit(main())
