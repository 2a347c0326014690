"""PSD and correlation-matrix algebra: validation via pivoted LDL*, scaling
of PSD matrices to correlation form, and seeded samplers (Gram matrices of
unit vectors, including rank-deficient and exact rational fixtures)."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Optional

import numpy as np
from gmpy2 import mpq

from .matrices import DimensionError, SquareMatrix, hadamard, permute_similarity, principal_submatrix
from .scalars import GaussianRational, abs_sq, rational_sqrt

DEFAULT_PSD_TOL = 1e-10
UNIT_DIAG_TOL = 1e-12
ENTRY_BOUND_TOL = 1e-12

SAMPLE_METHODS = ("gram-unit-complex", "gram-unit-real", "rank-deficient")


class NonHermitianError(ValueError):
    """Input matrix is not Hermitian within tolerance."""


class NotPsdError(ValueError):
    """Input matrix failed the positive-semidefiniteness check."""


class CorrelationError(ValueError):
    """Input matrix is not a valid correlation matrix."""


@dataclass(frozen=True)
class PsdCertificate:
    """Record of the LDL* run that certified (or refuted) semidefiniteness."""

    kind: str  # "ldl-float" | "ldl-exact"
    pivots: tuple
    min_pivot: object
    accepted: bool


def _scale_of(m: SquareMatrix) -> float:
    if m.n == 0:
        return 1.0
    return max(1.0, max(math.sqrt(float(abs_sq(e))) for e in m.entries))


def _check_hermitian(m: SquareMatrix, tol: float) -> None:
    n = m.n
    if m.exact:
        for i in range(n):
            if m[i, i].im != 0:
                raise NonHermitianError(f"diagonal entry ({i},{i}) not real")
            for j in range(i + 1, n):
                if m[j, i] != m[i, j].conjugate():
                    raise NonHermitianError(f"entries ({i},{j})/({j},{i}) not conjugate")
        return
    bound = tol * max(1, n) * _scale_of(m)
    for i in range(n):
        for j in range(i, n):
            dev = m[j, i] - m[i, j].conjugate()
            if abs(dev) > bound:
                raise NonHermitianError(
                    f"entries ({i},{j})/({j},{i}) differ from conjugates by {abs(dev):.3e}"
                )


def _ldl_pivots_float(m: SquareMatrix, tol: float) -> PsdCertificate:
    n = m.n
    if n == 0:
        return PsdCertificate("ldl-float", (), 0.0, True)
    b = m.to_numpy()
    scale = _scale_of(m)
    thresh = tol * n * scale
    col_tol = math.sqrt(max(thresh, 0.0) * scale) + thresh
    pivots = []
    ok = True
    for k in range(n):
        i = k + int(np.argmax(b.diagonal().real[k:]))
        if i != k:
            b[[k, i], :] = b[[i, k], :]
            b[:, [k, i]] = b[:, [i, k]]
        d = b[k, k].real
        pivots.append(float(d))
        if d > thresh:
            col = b[k + 1 :, k].copy()
            b[k + 1 :, k + 1 :] -= np.outer(col, col.conj()) / d
        else:
            if d < -thresh:
                ok = False
                break
            # near-zero pivot: PSD forces the rest of the pivot column ~ 0
            if k + 1 < n and np.max(np.abs(b[k + 1 :, k])) > col_tol:
                ok = False
                break
            b[k + 1 :, k] = 0
            b[k, k + 1 :] = 0
    min_pivot = min(pivots) if pivots else 0.0
    return PsdCertificate("ldl-float", tuple(pivots), min_pivot, ok)


def _ldl_pivots_exact(m: SquareMatrix) -> PsdCertificate:
    n = m.n
    if n == 0:
        return PsdCertificate("ldl-exact", (), mpq(0), True)
    b = m.rows()
    active = list(range(n))
    pivots = []
    ok = True
    while active:
        diag = [(b[i][i].re, i) for i in active]
        d, piv = max(diag)
        if d > 0:
            pivots.append(d)
            active.remove(piv)
            col = {i: b[i][piv] for i in active}
            for i in active:
                ci = col[i]
                if not ci:
                    continue
                for j in active:
                    b[i][j] = b[i][j] - ci * col[j].conjugate() / d
        else:
            # all remaining diagonal entries <= 0: PSD iff the block is zero
            for i in active:
                pivots.append(b[i][i].re)
                for j in active:
                    if b[i][j]:
                        ok = False
            break
    min_pivot = min(pivots) if pivots else mpq(0)
    return PsdCertificate("ldl-exact", tuple(pivots), min_pivot, ok)


def is_psd(m: SquareMatrix, tol: float = DEFAULT_PSD_TOL) -> tuple[bool, PsdCertificate]:
    """Positive-semidefiniteness via pivoted LDL*, with the certificate used.

    Float mode accepts pivots down to -tol * n * max|entry|; exact mode
    requires all rational pivots >= 0 (zero rows are skipped).
    """
    _check_hermitian(m, tol)
    cert = _ldl_pivots_exact(m) if m.exact else _ldl_pivots_float(m, tol)
    return cert.accepted, cert


@dataclass(frozen=True)
class PsdMatrix:
    """Hermitian PSD matrix with real nonnegative diagonal."""

    matrix: SquareMatrix
    certificate: Optional[PsdCertificate] = None

    @property
    def n(self) -> int:
        return self.matrix.n

    @property
    def exact(self) -> bool:
        return self.matrix.exact

    @classmethod
    def validate(cls, m: SquareMatrix, tol: float = DEFAULT_PSD_TOL) -> "PsdMatrix":
        ok, cert = is_psd(m, tol)
        if not ok:
            raise NotPsdError(f"matrix is not PSD (min pivot {cert.min_pivot})")
        return cls(m, cert)


@dataclass(frozen=True)
class CorrelationMatrix:
    """Hermitian PSD matrix with unit diagonal (hence all |entries| <= 1)."""

    matrix: SquareMatrix
    certificate: Optional[PsdCertificate] = None

    @property
    def n(self) -> int:
        return self.matrix.n

    @property
    def exact(self) -> bool:
        return self.matrix.exact

    @classmethod
    def validate(cls, m: SquareMatrix, tol: float = DEFAULT_PSD_TOL) -> "CorrelationMatrix":
        for i in range(m.n):
            d = m[i, i]
            if m.exact:
                if d != GaussianRational(1):
                    raise CorrelationError(f"diagonal entry ({i},{i}) = {d!r}, expected 1")
            elif abs(d - 1) > UNIT_DIAG_TOL:
                raise CorrelationError(f"diagonal entry ({i},{i}) = {d}, expected 1")
        try:
            ok, cert = is_psd(m, tol)
        except NonHermitianError as exc:
            raise CorrelationError(str(exc)) from exc
        if not ok:
            raise CorrelationError(f"matrix is not PSD (min pivot {cert.min_pivot})")
        for e in m.entries:
            if float(abs_sq(e)) > (1.0 + ENTRY_BOUND_TOL) ** 2:
                raise CorrelationError(f"entry magnitude {math.sqrt(float(abs_sq(e)))} > 1")
        return cls(m, cert)


def as_square(m) -> SquareMatrix:
    """Unwrap a CorrelationMatrix/PsdMatrix down to its SquareMatrix."""
    return m.matrix if hasattr(m, "matrix") else m


@dataclass(frozen=True)
class ScalingResult:
    """Outcome of scaling a PSD matrix to correlation form.

    ``diagonal`` keeps the original diagonal values exactly; the permanent
    scaling law is per(A) = per(C) * prod(diagonal) and
    per(A o conj(A)) = per(C o conj(C)) * prod(diagonal)^2.  When a diagonal
    entry is zero, PSD forces its whole row to zero, both permanents vanish,
    and the inequality holds with equality: ``trivial`` is set instead of a
    correlation matrix.
    """

    correlation: Optional[CorrelationMatrix]
    diagonal: tuple
    diagonal_product: object
    trivial: bool
    zero_index: Optional[int] = None


def scale_to_correlation(a: PsdMatrix, tol: float = DEFAULT_PSD_TOL) -> ScalingResult:
    m = as_square(a)
    if not isinstance(a, (PsdMatrix, CorrelationMatrix)):
        a = PsdMatrix.validate(m, tol)
        m = a.matrix
    n = m.n
    diag = tuple(m[i, i].real for i in range(n))
    if m.exact:
        prod = mpq(1)
        for d in diag:
            prod *= d
        for i, d in enumerate(diag):
            if d == 0:
                return ScalingResult(None, diag, mpq(0), True, i)
        inv = [GaussianRational(1 / rational_sqrt(d)) for d in diag]
        rows = [
            [GaussianRational(1) if i == j else m[i, j] * inv[i] * inv[j] for j in range(n)]
            for i in range(n)
        ]
        c = SquareMatrix.from_rows(rows, exact=True)
    else:
        scale = _scale_of(m)
        prod = 1.0
        for d in diag:
            prod *= d
        for i, d in enumerate(diag):
            if d <= tol * max(1, n) * scale:
                return ScalingResult(None, diag, 0.0, True, i)
        inv = [1.0 / math.sqrt(d) for d in diag]
        rows = [
            [1 + 0j if i == j else m[i, j] * inv[i] * inv[j] for j in range(n)]
            for i in range(n)
        ]
        c = SquareMatrix.from_rows(rows, exact=False)
    return ScalingResult(CorrelationMatrix.validate(c, tol), diag, prod, False)


def _sample_gram(rng: np.random.Generator, n: int, method: str, rank: Optional[int]) -> np.ndarray:
    if method == "gram-unit-complex":
        v = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    elif method == "gram-unit-real":
        v = rng.standard_normal((n, n)).astype(complex)
    elif method == "rank-deficient":
        if rank is None or not 1 <= rank < n:
            raise ValueError(f"rank-deficient sampling needs 1 <= rank < n, got {rank}")
        v = rng.standard_normal((n, rank)) + 1j * rng.standard_normal((n, rank))
    else:
        raise ValueError(f"unknown sampling method {method!r}")
    norms = np.linalg.norm(v, axis=1, keepdims=True)
    while np.any(norms < 1e-12):  # pragma: no cover - probability ~ 0
        bad = norms[:, 0] < 1e-12
        v[bad] = rng.standard_normal((int(bad.sum()), v.shape[1])) + 1j * rng.standard_normal(
            (int(bad.sum()), v.shape[1])
        )
        norms = np.linalg.norm(v, axis=1, keepdims=True)
    v /= norms
    g = v @ v.conj().T
    g = (g + g.conj().T) / 2
    np.fill_diagonal(g, 1.0)
    return g


def sample_correlation(
    n: int,
    seed: int,
    method: str = "gram-unit-complex",
    rank: Optional[int] = None,
) -> CorrelationMatrix:
    """Seeded correlation-matrix sampler: Gram matrix of n unit vectors.

    Deterministic given (n, seed, method, rank); PSD and unit-diagonal by
    construction, so no validation pass is run here (the test suite checks
    the invariants on sampled outputs).
    """
    if n < 1:
        raise DimensionError(f"dimension must be >= 1, got {n}")
    rng = np.random.default_rng(seed)
    g = _sample_gram(rng, n, method, rank)
    return CorrelationMatrix(SquareMatrix.from_numpy(g))


# Unit-modulus Gaussian rationals and rational unit vectors for exact fixtures.
_UNIT_PHASES = (
    GaussianRational(1, 0),
    GaussianRational(-1, 0),
    GaussianRational(0, 1),
    GaussianRational(0, -1),
    GaussianRational(mpq(3, 5), mpq(4, 5)),
    GaussianRational(mpq(3, 5), mpq(-4, 5)),
    GaussianRational(mpq(-4, 5), mpq(3, 5)),
    GaussianRational(mpq(5, 13), mpq(12, 13)),
    GaussianRational(mpq(-12, 13), mpq(5, 13)),
    GaussianRational(mpq(8, 17), mpq(-15, 17)),
)

_TRIPLES = ((3, 4, 5), (5, 12, 13), (8, 15, 17), (7, 24, 25), (20, 21, 29), (1, 0, 1))


def rational_correlation_fixture(n: int, seed: int) -> CorrelationMatrix:
    """Exact correlation matrix: Gram matrix of rational unit vectors.

    Unit vectors are built from Pythagorean triples spread over random
    coordinate pairs with unit-modulus Gaussian-rational phases, so every
    Gram entry is an exact Gaussian rational and every norm is exactly 1.
    """
    if n < 1:
        raise DimensionError(f"dimension must be >= 1, got {n}")
    rng = random.Random(seed)
    zero = GaussianRational(0)
    vectors = []
    for _ in range(n):
        v = [zero] * n
        p, q, r = rng.choice(_TRIPLES)
        if n == 1:
            a, b = 0, 0
            v[0] = rng.choice(_UNIT_PHASES)
        else:
            a, b = rng.sample(range(n), 2)
            v[a] = rng.choice(_UNIT_PHASES) * mpq(p, r)
            v[b] = rng.choice(_UNIT_PHASES) * mpq(q, r)
        vectors.append(v)
    rows = [
        [sum((vectors[i][k] * vectors[j][k].conjugate() for k in range(n)), zero) for j in range(n)]
        for i in range(n)
    ]
    return CorrelationMatrix.validate(SquareMatrix.from_rows(rows, exact=True))


def random_rational_matrix(rng: random.Random, n: int, num_bound: int = 9, den_bound: int = 9) -> SquareMatrix:
    """Random exact matrix with small Gaussian-rational entries (not Hermitian)."""
    from .scalars import random_gaussian_rational

    return SquareMatrix(
        n, tuple(random_gaussian_rational(rng, num_bound, den_bound) for _ in range(n * n))
    )


__all__ = [
    "CorrelationError",
    "CorrelationMatrix",
    "DEFAULT_PSD_TOL",
    "NonHermitianError",
    "NotPsdError",
    "PsdCertificate",
    "PsdMatrix",
    "ScalingResult",
    "as_square",
    "hadamard",
    "is_psd",
    "permute_similarity",
    "principal_submatrix",
    "rational_correlation_fixture",
    "random_rational_matrix",
    "sample_correlation",
    "scale_to_correlation",
]
