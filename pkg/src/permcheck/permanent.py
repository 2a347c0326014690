"""Permanent engines: a factorial-time oracle straight from the Leibniz sum,
a Ryser inclusion-exclusion engine with Gray-code row-sum updates, and a
dispatcher.  All engines work in both scalar realizations."""

from __future__ import annotations

from itertools import permutations

import numpy as np

from .matrices import DimensionError, SquareMatrix
from .scalars import GaussianRational

NAIVE_MAX = 8
RYSER_MAX_FLOAT = 16
RYSER_MAX_EXACT = 12

_PERMS_CACHE: dict[int, tuple] = {}


def _perms(n: int) -> tuple:
    try:
        return _PERMS_CACHE[n]
    except KeyError:
        _PERMS_CACHE[n] = tuple(permutations(range(n)))
        return _PERMS_CACHE[n]


def permanent_flat(entries, n: int):
    """Leibniz sum over a flat row-major entry sequence (no guards)."""
    if n == 0:
        return 1
    total = None
    for p in _perms(n):
        prod = entries[p[0]]
        for i in range(1, n):
            prod = prod * entries[i * n + p[i]]
        total = prod if total is None else total + prod
    return total


def permanent_naive(m: SquareMatrix):
    """Oracle engine: sum over all n! permutations of the diagonal products.

    Guarded at n <= 8; the cost is n! and this engine exists to check the
    fast one, not to be fast.
    """
    if m.n > NAIVE_MAX:
        raise DimensionError(f"naive engine guarded at n <= {NAIVE_MAX}, got {m.n}")
    return permanent_flat(m.entries, m.n)


def permanent_ryser(m: SquareMatrix):
    """Ryser's inclusion-exclusion formula.

    Proper subsets are visited in Gray-code order so each step touches the n
    row sums with a single column add/subtract: O(2^n * n) overall.
    """
    n = m.n
    limit = RYSER_MAX_EXACT if m.exact else RYSER_MAX_FLOAT
    if n > limit:
        raise DimensionError(f"ryser engine guarded at n <= {limit} in {m.mode} mode")
    if n == 0:
        return 1
    entries = m.entries
    zero = GaussianRational(0) if m.exact else 0j
    row = [zero] * n
    total = zero
    gray_prev = 0
    odd = False  # parity of |S|
    for k in range(1, 1 << n):
        gray = k ^ (k >> 1)
        bit = gray ^ gray_prev
        j = bit.bit_length() - 1
        if gray & bit:
            for i in range(n):
                row[i] = row[i] + entries[i * n + j]
        else:
            for i in range(n):
                row[i] = row[i] - entries[i * n + j]
        gray_prev = gray
        odd = not odd
        prod = row[0]
        for i in range(1, n):
            prod = prod * row[i]
        total = total - prod if odd else total + prod
    if n % 2:
        total = -total
    return total


def permanent(m: SquareMatrix):
    """Dispatcher: naive for small exact matrices, Ryser otherwise."""
    if m.exact and m.n <= 4:
        return permanent_naive(m)
    return permanent_ryser(m)


def permanent_batch(mats: np.ndarray) -> np.ndarray:
    """Vectorized Leibniz permanent over a stack of matrices, shape (B, n, n).

    Intended for the large float sweeps (n <= 6); agrees with the scalar
    engines up to rounding.
    """
    n = mats.shape[-1]
    if mats.shape[-2] != n:
        raise DimensionError(f"not square: {mats.shape}")
    if n > 6:
        raise DimensionError("batch engine guarded at n <= 6")
    if n == 0:
        return np.ones(mats.shape[0], dtype=mats.dtype)
    total = np.zeros(mats.shape[0], dtype=mats.dtype)
    for p in _perms(n):
        prod = mats[:, 0, p[0]].copy()
        for i in range(1, n):
            prod *= mats[:, i, p[i]]
        total += prod
    return total
