"""Margin-reporting certification of the permanent inequalities: the
conjecture in pair and reduced form, Lieb's block inequality and the
Grone-Pierce lower bound.  Every check returns a CheckResult whose margin is
an exact rational in exact mode."""

from __future__ import annotations

from dataclasses import dataclass

import mpmath
from gmpy2 import mpq

from .matrices import DimensionError, SquareMatrix, conjugate, hadamard
from .matrixlab import (
    CorrelationMatrix,
    NotPsdError,
    PsdMatrix,
    as_square,
    is_psd,
)
from .permanent import permanent, permanent_flat
from .scalars import abs_sq

DEFAULT_TOL = 1e-9
IMAG_RESIDUE_TOL = 1e-10


@dataclass(frozen=True)
class CheckResult:
    """One certified inequality: lhs >= rhs with margin = lhs - rhs."""

    lhs: object
    rhs: object
    margin: object
    holds: bool
    tol: object
    context: str

    @classmethod
    def bound(cls, lhs, rhs, tol, context: str) -> "CheckResult":
        margin = lhs - rhs
        return cls(lhs, rhs, margin, margin >= -tol, tol, context)

    @classmethod
    def equality(cls, lhs, rhs, tol, context: str) -> "CheckResult":
        # equality recorded as the one-sided form margin >= -tol with
        # margin = -|lhs - rhs|, so the holds <-> margin >= -tol invariant stays
        margin = -abs(lhs - rhs)
        return cls(lhs, rhs, margin, margin >= -tol, tol, context)

    def to_dict(self) -> dict:
        def num(v):
            return str(v) if isinstance(v, type(mpq(0))) else float(v)

        return {
            "context": self.context,
            "lhs": num(self.lhs),
            "rhs": num(self.rhs),
            "margin": num(self.margin),
            "tol": num(self.tol),
            "holds": self.holds,
        }


class ImaginaryResidueError(AssertionError):
    """Permanent of a Hermitian matrix came out with a non-negligible
    imaginary part; signals a bug, not a counterexample."""


def permanent_real(m: SquareMatrix):
    """Permanent of a Hermitian matrix, with the imaginary residue asserted
    negligible and dropped."""
    p = permanent(m)
    if m.exact:
        if p.im != 0:
            raise ImaginaryResidueError(f"exact permanent has imaginary part {p.im}")
        return p.re
    if abs(p.imag) > IMAG_RESIDUE_TOL * (1.0 + abs(p)):
        raise ImaginaryResidueError(f"imaginary residue {p.imag:.3e} too large")
    return p.real


def _effective_tol(m: SquareMatrix, tol):
    return mpq(0) if m.exact else tol


def _require_psd(a, tol: float):
    if isinstance(a, (PsdMatrix, CorrelationMatrix)):
        return as_square(a)
    ok, cert = is_psd(a, max(tol, 1e-12))
    if not ok:
        raise NotPsdError(f"input is not PSD (min pivot {cert.min_pivot})")
    return a


def check_chollet_pair(a, b, tol: float = DEFAULT_TOL) -> CheckResult:
    """per(A) * per(B) >= per(A o B) for PSD A, B."""
    ma, mb = _require_psd(a, tol), _require_psd(b, tol)
    if ma.n != mb.n:
        raise DimensionError(f"dimension mismatch: {ma.n} vs {mb.n}")
    lhs = permanent_real(ma) * permanent_real(mb)
    rhs = permanent_real(hadamard(ma, mb))
    return CheckResult.bound(lhs, rhs, _effective_tol(ma, tol), "chollet-pair")


def check_chollet_reduced(a, tol: float = DEFAULT_TOL) -> CheckResult:
    """[per(A)]^2 >= per(A o conj(A)) for a correlation matrix A."""
    if not isinstance(a, CorrelationMatrix):
        a = CorrelationMatrix.validate(as_square(a))
    m = a.matrix
    p = permanent_real(m)
    rhs = permanent_real(hadamard(m, conjugate(m)))
    return CheckResult.bound(p * p, rhs, _effective_tol(m, tol), "chollet-reduced")


@dataclass(frozen=True)
class LiebResult:
    """Lieb's inequality at one block split, plus the chained nonnegativity."""

    split: int
    dominance: CheckResult  # per(A) >= per(B) * per(D)
    nonnegativity: CheckResult  # per(A) >= 0


def _leading_block(m: SquareMatrix, k: int) -> SquareMatrix:
    return SquareMatrix(k, tuple(m[i, j] for i in range(k) for j in range(k)))


def _trailing_block(m: SquareMatrix, k: int) -> SquareMatrix:
    n = m.n
    return SquareMatrix(n - k, tuple(m[i, j] for i in range(k, n) for j in range(k, n)))


def check_lieb(a, k: int, tol: float = DEFAULT_TOL) -> LiebResult:
    """per(A) >= per(B) * per(D) for the k | n-k block split of PSD A."""
    m = _require_psd(a, tol)
    if not 1 <= k < m.n:
        raise DimensionError(f"split index {k} outside 1..{m.n - 1}")
    p = permanent_real(m)
    pb = permanent_real(_leading_block(m, k))
    pd = permanent_real(_trailing_block(m, k))
    etol = _effective_tol(m, tol)
    return LiebResult(
        split=k,
        dominance=CheckResult.bound(p, pb * pd, etol, f"lieb-split-{k}"),
        nonnegativity=CheckResult.bound(p, 0 if m.exact else 0.0, etol, "lieb-nonneg"),
    )


def check_grone_pierce(a, tol: float = DEFAULT_TOL) -> CheckResult:
    """per(A) >= (1/n) * sum of squared entry magnitudes, A a correlation matrix."""
    if not isinstance(a, CorrelationMatrix):
        a = CorrelationMatrix.validate(as_square(a))
    m = a.matrix
    p = permanent_real(m)
    total = sum(abs_sq(e) for e in m.entries)
    rhs = total / m.n if m.exact else float(total) / m.n
    return CheckResult.bound(p, rhs, _effective_tol(m, tol), "grone-pierce")


def recheck_reduced(m: SquareMatrix, dps: int = 40):
    """Adjudicate a near-zero or negative reduced-form margin.

    Exact matrices are re-evaluated in exact arithmetic; float matrices are
    re-evaluated in high-precision arithmetic (default 40 digits, well past
    quad precision).  Returns the margin per(A)^2 - per(A o conj(A)).
    """
    if m.exact:
        p = permanent_real(m)
        return p * p - permanent_real(hadamard(m, conjugate(m)))
    n = m.n
    with mpmath.workdps(dps):
        ent = [mpmath.mpc(e.real, e.imag) for e in m.entries]
        had = [x.real**2 + x.imag**2 for x in ent]
        p = permanent_flat(ent, n).real
        ph = permanent_flat(had, n)
        return float(p * p - ph)


__all__ = [
    "CheckResult",
    "DEFAULT_TOL",
    "ImaginaryResidueError",
    "LiebResult",
    "check_chollet_pair",
    "check_chollet_reduced",
    "check_grone_pierce",
    "check_lieb",
    "permanent_real",
    "recheck_reduced",
]
