"""Batch drivers behind the CLI and the acceptance suite: seeded trial
sweeps for every checker, the proof-trace sweep, and the exact-mode identity
self-test.

Trial i of a sweep always uses the derived seed ``seed ^ i``, so the first k
trials of any run are identical across trial counts and worker layouts.
"""

from __future__ import annotations

import dataclasses
import os
import random
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import mpmath
import numpy as np

from .inequality import (
    DEFAULT_TOL,
    check_grone_pierce,
    check_lieb,
    recheck_reduced,
)
from .matrices import SquareMatrix, conjugate, hadamard, principal_submatrix
from .matrixlab import CorrelationMatrix, _sample_gram, random_rational_matrix
from .permanent import permanent_batch, permanent_flat, permanent_naive, permanent_ryser
from .proof4x4 import (
    EntryVector,
    compute_terms,
    expansion_per_hadamard_terms,
    expansion_per_terms,
    lemma2_submatrices,
    lemma3_check,
    verify_case_chain,
)
from .scalars import random_gaussian_rational

SEED_MASK = (1 << 64) - 1


def trial_seed(seed: int, i: int) -> int:
    return (seed ^ i) & SEED_MASK


def worker_count() -> int:
    """Worker cap from PERMCHECK_THREADS (0 or unset means auto)."""
    raw = os.environ.get("PERMCHECK_THREADS", "").strip()
    if not raw:
        return 1
    cap = int(raw)
    if cap < 0:
        raise ValueError("PERMCHECK_THREADS must be >= 0")
    if cap == 0:
        return min(os.cpu_count() or 1, 8)
    return cap


def sample_methods(n: int) -> list:
    """Deterministic method cycle for mixed sampling: full-rank complex and
    real Gram matrices plus rank-deficient ones down to rank 1."""
    methods = [("gram-unit-complex", None), ("gram-unit-real", None)]
    for k in range(1, min(n, 4)):
        methods.append(("rank-deficient", k))
    return methods


@dataclass
class RunReport:
    """Summary of one randomized sweep."""

    command: str
    seed: int
    trials: int
    tol: float
    violations: list = field(default_factory=list)
    min_margin: float = float("inf")
    min_margin_trial: int = -1
    mean_margin: float = 0.0
    wall_time: float = 0.0
    extra: dict = field(default_factory=dict)

    @property
    def clean(self) -> bool:
        return not self.violations

    def note_margin(self, margin: float, trial: int) -> None:
        if margin < self.min_margin:
            self.min_margin = margin
            self.min_margin_trial = trial

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "seed": self.seed,
            "trials": self.trials,
            "tol": self.tol,
            "violations": self.violations,
            "min_margin": self.min_margin,
            "min_margin_trial": self.min_margin_trial,
            "mean_margin": self.mean_margin,
            "wall_time": round(self.wall_time, 3),
            **self.extra,
        }


def _matrix_dump(g: np.ndarray) -> list:
    return [[[v.real, v.imag] for v in row] for row in g.tolist()]


def _sample_trial_gram(n: int, seed: int, trial: int) -> np.ndarray:
    methods = sample_methods(n)
    method, rank = methods[trial % len(methods)]
    rng = np.random.default_rng(trial_seed(seed, trial))
    return _sample_gram(rng, n, method, rank)


def _reduced_chunk(n: int, seed: int, tol: float, start: int, count: int):
    stack = np.empty((count, n, n), dtype=complex)
    for j in range(count):
        stack[j] = _sample_trial_gram(n, seed, start + j)
    per = permanent_batch(stack)
    per_h = permanent_batch(np.abs(stack) ** 2 + 0j).real
    if np.max(np.abs(per.imag)) > 1e-10 * (1.0 + np.max(np.abs(per))):
        raise AssertionError("permanent of Hermitian sample has large imaginary part")
    margins = per.real**2 - per_h
    violations = []
    for j in np.nonzero(margins < -tol)[0]:
        g = stack[int(j)]
        refined = recheck_reduced(SquareMatrix.from_numpy(g))
        violations.append(
            {
                "trial": start + int(j),
                "margin": float(margins[j]),
                "recheck_margin": float(refined),
                "confirmed": bool(refined < -tol),
                "matrix": _matrix_dump(g),
            }
        )
    k = int(np.argmin(margins))
    return float(margins[k]), start + k, float(margins.sum()), violations


def sweep_chollet_reduced(
    n: int,
    trials: int,
    seed: int,
    tol: float = DEFAULT_TOL,
    chunk: int = 4096,
    workers: int | None = None,
) -> RunReport:
    """Reduced-form conjecture sweep over mixed correlation samples.

    Float margins below -tol are re-adjudicated at high precision before
    being recorded as confirmed violations.
    """
    report = RunReport("check-reduced", seed, trials, tol)
    t0 = time.perf_counter()
    spans = [(s, min(chunk, trials - s)) for s in range(0, trials, chunk)]
    workers = worker_count() if workers is None else workers

    def run(span):
        return _reduced_chunk(n, seed, tol, *span)

    if workers > 1 and len(spans) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, spans))
    else:
        results = [run(span) for span in spans]
    total = 0.0
    for mn, mn_trial, msum, violations in results:
        report.note_margin(mn, mn_trial)
        total += msum
        report.violations.extend(v for v in violations if v["confirmed"])
    report.mean_margin = total / trials if trials else 0.0
    report.wall_time = time.perf_counter() - t0
    return report


def _recheck_pair(ga: np.ndarray, gb: np.ndarray, dps: int = 40) -> float:
    n = ga.shape[0]
    with mpmath.workdps(dps):
        ea = [mpmath.mpc(v.real, v.imag) for v in ga.reshape(-1)]
        eb = [mpmath.mpc(v.real, v.imag) for v in gb.reshape(-1)]
        eab = [a * b for a, b in zip(ea, eb)]
        margin = (
            permanent_flat(ea, n).real * permanent_flat(eb, n).real
            - permanent_flat(eab, n).real
        )
        return float(margin)


def sweep_chollet_pair(
    n: int, trials: int, seed: int, tol: float = DEFAULT_TOL, chunk: int = 4096
) -> RunReport:
    """Pair-form conjecture sweep; each trial draws two correlation matrices
    from its own generator."""
    report = RunReport("check-pair", seed, trials, tol)
    t0 = time.perf_counter()
    methods = sample_methods(n)
    total = 0.0
    for start in range(0, trials, chunk):
        count = min(chunk, trials - start)
        sa = np.empty((count, n, n), dtype=complex)
        sb = np.empty((count, n, n), dtype=complex)
        for j in range(count):
            i = start + j
            method, rank = methods[i % len(methods)]
            rng = np.random.default_rng(trial_seed(seed, i))
            sa[j] = _sample_gram(rng, n, method, rank)
            sb[j] = _sample_gram(rng, n, method, rank)
        margins = (
            permanent_batch(sa).real * permanent_batch(sb).real
            - permanent_batch(sa * sb).real
        )
        k = int(np.argmin(margins))
        report.note_margin(float(margins[k]), start + k)
        total += float(margins.sum())
        for j in np.nonzero(margins < -tol)[0]:
            refined = _recheck_pair(sa[int(j)], sb[int(j)])
            if refined < -tol:
                report.violations.append(
                    {
                        "trial": start + int(j),
                        "margin": float(margins[j]),
                        "recheck_margin": refined,
                        "confirmed": True,
                        "matrix_a": _matrix_dump(sa[int(j)]),
                        "matrix_b": _matrix_dump(sb[int(j)]),
                    }
                )
    report.mean_margin = total / trials if trials else 0.0
    report.wall_time = time.perf_counter() - t0
    return report


def _sample_trial_correlation(n: int, seed: int, trial: int) -> CorrelationMatrix:
    return CorrelationMatrix(SquareMatrix.from_numpy(_sample_trial_gram(n, seed, trial)))


def sweep_lieb(n: int, trials: int, seed: int, tol: float = DEFAULT_TOL) -> RunReport:
    """Lieb block inequality at every split, over sampled correlation matrices."""
    report = RunReport("lemmas-lieb", seed, trials, tol)
    t0 = time.perf_counter()
    total = 0.0
    checks = 0
    for i in range(trials):
        a = _sample_trial_correlation(n, seed, i)
        for k in range(1, n):
            res = check_lieb(a, k, tol)
            margin = float(res.dominance.margin)
            report.note_margin(margin, i)
            total += margin
            checks += 1
            if not res.dominance.holds:
                report.violations.append(
                    {"trial": i, "split": k, "margin": margin, "matrix": _matrix_dump(a.matrix.to_numpy())}
                )
    report.mean_margin = total / checks if checks else 0.0
    report.extra["splits_checked"] = checks
    report.wall_time = time.perf_counter() - t0
    return report


def sweep_grone_pierce(n: int, trials: int, seed: int, tol: float = DEFAULT_TOL) -> RunReport:
    """Grone-Pierce lower bound over sampled correlation matrices."""
    report = RunReport("lemmas-grone-pierce", seed, trials, tol)
    t0 = time.perf_counter()
    total = 0.0
    for i in range(trials):
        a = _sample_trial_correlation(n, seed, i)
        res = check_grone_pierce(a, tol)
        margin = float(res.margin)
        report.note_margin(margin, i)
        total += margin
        if not res.holds:
            report.violations.append(
                {"trial": i, "margin": margin, "matrix": _matrix_dump(a.matrix.to_numpy())}
            )
    report.mean_margin = total / trials if trials else 0.0
    report.wall_time = time.perf_counter() - t0
    return report


def sweep_traces(trials: int, seed: int, tol: float = DEFAULT_TOL) -> RunReport:
    """verify_case_chain over sampled 4x4 correlation matrices, tracking the
    worst link margin and the case-label population."""
    report = RunReport("trace-sweep", seed, trials, tol)
    t0 = time.perf_counter()
    counts: dict[str, int] = {}
    total = 0.0
    for i in range(trials):
        a = _sample_trial_correlation(4, seed, i)
        trace = verify_case_chain(a, tol)
        label = trace.case_label.value
        counts[label] = counts.get(label, 0) + 1
        margin = trace.min_link_margin
        report.note_margin(margin, i)
        total += margin
        if trace.verdict != "verified":
            refined = recheck_reduced(a.matrix)
            report.violations.append(
                {
                    "trial": i,
                    "verdict": trace.verdict,
                    "min_link_margin": margin,
                    "recheck_margin": float(refined),
                    "confirmed": bool(refined < -tol),
                    "matrix": _matrix_dump(a.matrix.to_numpy()),
                }
            )
    report.mean_margin = total / trials if trials else 0.0
    report.extra["case_counts"] = counts
    report.wall_time = time.perf_counter() - t0
    return report


def sweep_lemma12(trials: int, seed: int, tol: float = DEFAULT_TOL) -> RunReport:
    """Both 4x4 lemma suites (bounds and backing identities) over sampled
    correlation matrices."""
    from .proof4x4 import verify_lemma1, verify_lemma2

    report = RunReport("lemmas-4x4", seed, trials, tol)
    t0 = time.perf_counter()
    total = 0.0
    for i in range(trials):
        a = _sample_trial_correlation(4, seed, i)
        l1 = verify_lemma1(a, tol)
        l2 = verify_lemma2(a, tol)
        margin = min(float(c.margin) for c in l1.bounds + l2.bounds)
        report.note_margin(margin, i)
        total += margin
        for res, name in ((l1, "lemma1"), (l2, "lemma2")):
            for c in res.bounds + res.identities:
                if not c.holds:
                    report.violations.append(
                        {
                            "trial": i,
                            "lemma": name,
                            "context": c.context,
                            "margin": float(c.margin),
                            "matrix": _matrix_dump(a.matrix.to_numpy()),
                        }
                    )
    report.mean_margin = total / trials if trials else 0.0
    report.wall_time = time.perf_counter() - t0
    return report


def sweep_lemma3(trials: int, seed: int, tol: float = DEFAULT_TOL) -> RunReport:
    """Scalar lemma over uniform samples of the closed unit ball."""
    report = RunReport("lemmas-scalar", seed, trials, tol)
    t0 = time.perf_counter()
    rng = np.random.default_rng(trial_seed(seed, 0xBA11))
    total = 0.0
    done = 0
    while done < trials:
        a, b, c = rng.uniform(-1.0, 1.0, size=3)
        if a * a + b * b + c * c > 1.0:
            continue
        res = lemma3_check(a, b, c, tol)
        margin = float(res.margin)
        report.note_margin(margin, done)
        total += margin
        if not res.holds:
            report.violations.append({"trial": done, "point": [a, b, c], "margin": margin})
        done += 1
    report.mean_margin = total / trials if trials else 0.0
    report.wall_time = time.perf_counter() - t0
    return report


def random_entry_vector(rng: random.Random) -> EntryVector:
    """Random exact entry vector with small Gaussian-rational components."""
    return EntryVector(*(random_gaussian_rational(rng) for _ in range(6)))


@dataclass
class SuiteResult:
    name: str
    passed: int
    total: int

    @property
    def ok(self) -> bool:
        return self.passed == self.total


def selftest(trials: int = 200, seed: int = 0, mutate: str | None = None) -> list:
    """Exact-arithmetic identity suites.

    ``mutate`` flips a sign in a derived term ("y2-sign") to prove the
    suites can catch a transcription bug; a fresh build passes everything.
    """
    if mutate not in (None, "y2-sign"):
        raise ValueError(f"unknown mutation {mutate!r}")
    results = []

    rng = random.Random(seed)
    passed = 0
    for _ in range(trials):
        e = random_entry_vector(rng)
        m = e.assemble()
        terms = compute_terms(e)
        if mutate == "y2-sign":
            terms = dataclasses.replace(terms, y=(terms.y[0], -terms.y[1]) + terms.y[2:])
        per = permanent_naive(m)
        per_h = permanent_naive(hadamard(m, conjugate(m)))
        ok = (
            per.im == 0
            and per_h.im == 0
            and expansion_per_terms(terms) == per.re
            and expansion_per_hadamard_terms(terms) == per_h.re
        )
        passed += ok
    results.append(SuiteResult("expansion-identities", passed, trials))

    rng = random.Random(seed + 1)
    passed = 0
    for _ in range(trials):
        e = random_entry_vector(rng)
        m = e.assemble()
        terms = compute_terms(e)
        ok = True
        for i in range(4):
            sub = principal_submatrix(m, 4 - i)
            det = _exact_det3(sub)
            if det.im != 0 or det.re != 1 + terms.y[i] - terms.s[i]:
                ok = False
        passed += ok
    results.append(SuiteResult("determinant-identities", passed, trials))

    rng = random.Random(seed + 2)
    passed = 0
    for _ in range(trials):
        e = random_entry_vector(rng)
        m = e.assemble()
        terms = compute_terms(e)
        ok = True
        for i, sub in enumerate(lemma2_submatrices(m)):
            p = permanent_naive(sub)
            if p.im != 0 or p.re != 1 + terms.y[i] + terms.s[i]:
                ok = False
        passed += ok
    results.append(SuiteResult("submatrix-permanent-identities", passed, trials))

    rng = random.Random(seed + 3)
    count = max(1, trials // 4)
    passed = 0
    for k in range(count):
        n = 2 + k % 4
        m = random_rational_matrix(rng, n)
        passed += permanent_naive(m) == permanent_ryser(m)
    results.append(SuiteResult("engine-agreement", passed, count))
    return results


def _exact_det3(m: SquareMatrix):
    a, b, c, d, e, f, g, h, i = m.entries
    return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)


__all__ = [
    "RunReport",
    "SuiteResult",
    "random_entry_vector",
    "sample_methods",
    "selftest",
    "sweep_chollet_pair",
    "sweep_chollet_reduced",
    "sweep_grone_pierce",
    "sweep_lemma3",
    "sweep_lieb",
    "sweep_traces",
    "trial_seed",
    "worker_count",
]
