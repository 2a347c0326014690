"""Command-line front end.

Subcommands: ``perm`` (permanent of a matrix file), ``check`` (randomized
conjecture sweep), ``trace`` (full proof trace for one 4x4 matrix),
``lemmas`` (imported-theorem and lemma suites), ``search`` (extremal ratio
hill climb) and ``selftest`` (exact identity suites).

Exit codes: 0 all checks hold, 1 a confirmed violation or failed suite,
2 input or usage error.  Matrix files are JSON::

    {"n": 2, "mode": "float",    "entries": [[[1.0, 0.0], [0.5, 0.0]], ...]}
    {"n": 2, "mode": "rational", "entries": [[["1", "0"], ["1/2", "0"]], ...]}
"""

from __future__ import annotations

import argparse
import json
import sys

from gmpy2 import mpq

from .inequality import recheck_reduced
from .matrices import DimensionError, SquareMatrix
from .matrixlab import CorrelationError, CorrelationMatrix, sample_correlation
from .permanent import permanent, permanent_naive, permanent_ryser
from .proof4x4 import prove_trace
from .runs import (
    selftest,
    sweep_chollet_pair,
    sweep_chollet_reduced,
    sweep_grone_pierce,
    sweep_lemma12,
    sweep_lemma3,
    sweep_lieb,
)
from .scalars import GaussianRational
from .search import SearchConfig, hill_climb

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_USAGE = 2


class MatrixFileError(ValueError):
    pass


def read_matrix_file(path: str) -> SquareMatrix:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise MatrixFileError(f"cannot read {path}: {exc}") from exc
    try:
        n = int(doc["n"])
        mode = doc["mode"]
        rows = doc["entries"]
    except (KeyError, TypeError, ValueError) as exc:
        raise MatrixFileError(f"malformed matrix file {path}: {exc}") from exc
    if mode not in ("float", "rational"):
        raise MatrixFileError(f"unknown mode {mode!r}")
    if len(rows) != n or any(len(r) != n for r in rows):
        raise MatrixFileError("ragged or wrongly sized entry grid")
    flat = []
    for row in rows:
        for cell in row:
            if not isinstance(cell, (list, tuple)) or len(cell) != 2:
                raise MatrixFileError(f"entry {cell!r} is not an [re, im] pair")
            re, im = cell
            if mode == "rational":
                try:
                    flat.append(GaussianRational(mpq(str(re)), mpq(str(im))))
                except (ValueError, ZeroDivisionError) as exc:
                    raise MatrixFileError(f"bad rational entry {cell!r}: {exc}") from exc
            else:
                flat.append(complex(float(re), float(im)))
    try:
        return SquareMatrix(n, tuple(flat))
    except (DimensionError, TypeError) as exc:
        raise MatrixFileError(str(exc)) from exc


def _emit(doc: dict | str, out: str | None) -> None:
    text = doc if isinstance(doc, str) else json.dumps(doc, sort_keys=True, indent=2)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _format_value(p, exact: bool) -> str:
    if exact:
        if p.im == 0:
            return str(p.re)
        sign = "+" if p.im >= 0 else "-"
        return f"{p.re}{sign}{abs(p.im)}i"
    p = complex(p)
    if abs(p.imag) <= 1e-12 * (1.0 + abs(p)):
        return f"{p.real:.17g}"
    return f"{p.real:.17g}{p.imag:+.17g}i"


def cmd_perm(args) -> int:
    try:
        m = read_matrix_file(args.file)
        if args.mode == "float":
            m = m.to_float()
        elif args.mode == "rational" and not m.exact:
            print("error: cannot promote a float matrix to rational mode", file=sys.stderr)
            return EXIT_USAGE
        engine = {"naive": permanent_naive, "ryser": permanent_ryser, "auto": permanent}[
            args.engine
        ]
        value = engine(m)
    except (MatrixFileError, DimensionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(_format_value(value, m.exact))
    return EXIT_OK


def cmd_check(args) -> int:
    if not 2 <= args.n <= 6:
        print(f"error: --n must lie in [2, 6], got {args.n}", file=sys.stderr)
        return EXIT_USAGE
    sweep = sweep_chollet_reduced if args.form == "reduced" else sweep_chollet_pair
    report = sweep(args.n, args.trials, args.seed, args.tol)
    _emit(report.to_dict(), args.out)
    return EXIT_OK if report.clean else EXIT_VIOLATION


def cmd_trace(args) -> int:
    try:
        if args.sample is not None:
            a = sample_correlation(4, args.sample)
        else:
            m = read_matrix_file(args.file)
            if m.n != 4:
                raise MatrixFileError(f"trace needs a 4x4 matrix, got n = {m.n}")
            a = CorrelationMatrix.validate(m)
    except (MatrixFileError, CorrelationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    trace = prove_trace(a, args.tol)
    _emit(trace.to_json(), args.out)
    return EXIT_OK if trace.verdict == "verified" else EXIT_VIOLATION


def cmd_lemmas(args) -> int:
    if not 2 <= args.n <= 6:
        print(f"error: --n must lie in [2, 6], got {args.n}", file=sys.stderr)
        return EXIT_USAGE
    reports = [
        sweep_lieb(args.n, args.trials, args.seed, args.tol),
        sweep_grone_pierce(args.n, args.trials, args.seed, args.tol),
    ]
    if args.n == 4:
        reports.append(sweep_lemma12(args.trials, args.seed, args.tol))
        reports.append(sweep_lemma3(args.trials, args.seed, args.tol))
    doc = {
        "n": args.n,
        "seed": args.seed,
        "trials": args.trials,
        "suites": {r.command: r.to_dict() for r in reports},
    }
    _emit(doc, args.out)
    return EXIT_OK if all(r.clean for r in reports) else EXIT_VIOLATION


def cmd_search(args) -> int:
    if not 2 <= args.n <= 6:
        print(f"error: --n must lie in [2, 6], got {args.n}", file=sys.stderr)
        return EXIT_USAGE
    config = SearchConfig(
        n=args.n,
        iterations=args.iterations,
        restarts=args.restarts,
        seed=args.seed,
        initial_step=args.initial_step,
        shrink=args.shrink,
    )
    result = hill_climb(config)
    _emit(result.to_dict(), args.out)
    if args.n <= 4 and result.best_ratio > 1 + 1e-9:
        # a would-be counterexample; only exact/high-precision confirmation counts
        margin = recheck_reduced(result.best_matrix.matrix)
        if margin < -1e-9:
            print("confirmed ratio > 1 counterexample candidate", file=sys.stderr)
            return EXIT_VIOLATION
    return EXIT_OK


def cmd_selftest(args) -> int:
    results = selftest(trials=args.trials, seed=args.seed, mutate=args.mutate)
    ok = True
    for suite in results:
        status = "OK" if suite.ok else "FAIL"
        print(f"{suite.name}: {suite.passed}/{suite.total} {status}")
        ok = ok and suite.ok
    print("selftest: PASS" if ok else "selftest: FAIL")
    return EXIT_OK if ok else EXIT_VIOLATION


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="permcheck",
        description="Permanent-inequality verification toolkit (n <= 4 proof machinery).",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("perm", help="permanent of a matrix file")
    p.add_argument("file")
    p.add_argument("--engine", choices=("naive", "ryser", "auto"), default="auto")
    p.add_argument("--mode", choices=("float", "rational"), default=None)
    p.set_defaults(func=cmd_perm)

    p = sub.add_parser("check", help="randomized conjecture sweep")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--form", choices=("pair", "reduced"), default="reduced")
    p.add_argument("--out")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("trace", help="proof trace for one 4x4 correlation matrix")
    p.add_argument("file", nargs="?")
    p.add_argument("--sample", type=int, default=None, help="sample a matrix from this seed")
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--out")
    p.set_defaults(func=cmd_trace)

    p = sub.add_parser("lemmas", help="imported-theorem and lemma suites")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--out")
    p.set_defaults(func=cmd_lemmas)

    p = sub.add_parser("search", help="hill-climb the hadamard/permanent ratio")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--iterations", type=int, default=10_000)
    p.add_argument("--restarts", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--initial-step", type=float, default=0.3)
    p.add_argument("--shrink", type=float, default=0.7)
    p.add_argument("--out")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("selftest", help="exact-arithmetic identity suites")
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mutate", choices=("y2-sign",), default=None, help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "trace" and (args.file is None) == (args.sample is None):
        parser.error("trace needs exactly one of FILE or --sample")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
