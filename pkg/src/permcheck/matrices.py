"""Dense square matrices over either scalar realization, plus the structural
operations the proof machinery needs: Hadamard product, conjugation, principal
submatrices and permutation similarity."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np
from gmpy2 import mpq

from .scalars import GaussianRational

MAX_DIM = 16

_MPQ_TYPE = type(mpq(0))


class DimensionError(ValueError):
    """Matrix dimension outside an operation's guard, or shape mismatch."""


def _coerce_float(v) -> complex:
    if isinstance(v, GaussianRational):
        return complex(v)
    return complex(v)


def _coerce_exact(v) -> GaussianRational:
    if isinstance(v, GaussianRational):
        return v
    if isinstance(v, (int, Fraction, _MPQ_TYPE)):
        return GaussianRational(v)
    if isinstance(v, complex):
        raise TypeError("cannot build an exact matrix from floats")
    raise TypeError(f"cannot coerce {v!r} to a Gaussian rational")


@dataclass(frozen=True)
class SquareMatrix:
    """n x n dense matrix, row-major flat entries, one realization throughout."""

    n: int
    entries: tuple

    def __post_init__(self):
        if self.n < 0 or self.n > MAX_DIM:
            raise DimensionError(f"dimension {self.n} outside [0, {MAX_DIM}]")
        if len(self.entries) != self.n * self.n:
            raise DimensionError(
                f"expected {self.n * self.n} entries, got {len(self.entries)}"
            )
        if self.entries:
            exact = isinstance(self.entries[0], GaussianRational)
            for e in self.entries:
                if isinstance(e, GaussianRational) != exact:
                    raise TypeError("mixed scalar realizations in one matrix")

    @property
    def exact(self) -> bool:
        return bool(self.entries) and isinstance(self.entries[0], GaussianRational)

    @property
    def mode(self) -> str:
        return "rational" if self.exact else "float"

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.n + j]

    def row(self, i: int) -> tuple:
        return self.entries[i * self.n : (i + 1) * self.n]

    def rows(self):
        return [list(self.row(i)) for i in range(self.n)]

    def to_numpy(self) -> np.ndarray:
        return np.array(
            [[_coerce_float(self[i, j]) for j in range(self.n)] for i in range(self.n)],
            dtype=complex,
        )

    def to_float(self) -> "SquareMatrix":
        if not self.exact:
            return self
        return SquareMatrix(self.n, tuple(_coerce_float(e) for e in self.entries))

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], exact: bool | None = None) -> "SquareMatrix":
        n = len(rows)
        flat = [e for row in rows for e in row]
        if any(len(row) != n for row in rows):
            raise DimensionError("ragged rows")
        if exact is None:
            exact = any(isinstance(e, (GaussianRational, Fraction, _MPQ_TYPE)) for e in flat) and not any(
                isinstance(e, (float, complex)) for e in flat
            )
        coerce = _coerce_exact if exact else _coerce_float
        return cls(n, tuple(coerce(e) for e in flat))

    @classmethod
    def from_numpy(cls, arr: np.ndarray) -> "SquareMatrix":
        n = arr.shape[0]
        if arr.shape != (n, n):
            raise DimensionError(f"not square: {arr.shape}")
        return cls(n, tuple(complex(v) for v in arr.reshape(-1)))

    @classmethod
    def identity(cls, n: int, exact: bool = False) -> "SquareMatrix":
        one = GaussianRational(1) if exact else 1 + 0j
        zero = GaussianRational(0) if exact else 0j
        return cls(n, tuple(one if i == j else zero for i in range(n) for j in range(n)))

    @classmethod
    def ones(cls, n: int, exact: bool = False) -> "SquareMatrix":
        one = GaussianRational(1) if exact else 1 + 0j
        return cls(n, (one,) * (n * n))


def hadamard(a: SquareMatrix, b: SquareMatrix) -> SquareMatrix:
    """Entrywise (Schur) product."""
    if a.n != b.n:
        raise DimensionError(f"dimension mismatch: {a.n} vs {b.n}")
    return SquareMatrix(a.n, tuple(x * y for x, y in zip(a.entries, b.entries)))


def conjugate(a: SquareMatrix) -> SquareMatrix:
    """Entrywise complex conjugate."""
    return SquareMatrix(a.n, tuple(e.conjugate() for e in a.entries))


def principal_submatrix(a: SquareMatrix, i: int) -> SquareMatrix:
    """Delete row and column ``i`` (1-based, matching the usual A(i) notation)."""
    if not 1 <= i <= a.n:
        raise IndexError(f"index {i} out of range 1..{a.n}")
    keep = [k for k in range(a.n) if k != i - 1]
    return SquareMatrix(
        a.n - 1, tuple(a[r, c] for r in keep for c in keep)
    )


def permute_similarity(a: SquareMatrix, sigma: Sequence[int]) -> SquareMatrix:
    """Simultaneous row/column permutation: B[i][j] = A[sigma(i)][sigma(j)].

    ``sigma`` is given 1-based, e.g. the transposition (3 4) on a 4x4 matrix
    is ``(1, 2, 4, 3)``.
    """
    if sorted(sigma) != list(range(1, a.n + 1)):
        raise ValueError(f"not a permutation of 1..{a.n}: {sigma}")
    s = [k - 1 for k in sigma]
    return SquareMatrix(
        a.n, tuple(a[s[i], s[j]] for i in range(a.n) for j in range(a.n))
    )
