"""Gradient-free extremal exploration of per(A o conj(A)) / per(A)^2 over
correlation matrices.  The climber walks on the Gram parameterization (n unit
vectors), so every candidate is a correlation matrix by construction."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .matrices import SquareMatrix
from .matrixlab import CorrelationMatrix, as_square
from .permanent import permanent_flat

ACCEPT_EPS = 1e-15
SEED_MASK = (1 << 64) - 1


@dataclass(frozen=True)
class SearchConfig:
    n: int
    iterations: int = 10_000
    restarts: int = 1
    seed: int = 0
    initial_step: float = 0.3
    shrink: float = 0.7
    target_ratio: float = 1.0

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"n must be >= 2, got {self.n}")
        if self.iterations < 1:
            raise ValueError("iterations must be >= 1")
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        if not 0 < self.shrink < 1:
            raise ValueError(f"shrink must lie in (0, 1), got {self.shrink}")


@dataclass(frozen=True)
class SearchResult:
    best_matrix: CorrelationMatrix
    best_ratio: float
    history: tuple  # per-restart best ratios
    evaluations: int

    def to_dict(self) -> dict:
        m = self.best_matrix.matrix
        return {
            "best_ratio": self.best_ratio,
            "history": list(self.history),
            "evaluations": self.evaluations,
            "best_matrix": {
                "n": m.n,
                "mode": "float",
                "entries": [
                    [[m[i, j].real, m[i, j].imag] for j in range(m.n)] for i in range(m.n)
                ],
            },
        }


def _ratio_of_gram(g: np.ndarray, n: int) -> float:
    ent = [complex(v) for v in g.reshape(-1)]
    had = [(v.real * v.real + v.imag * v.imag) for v in ent]
    p = permanent_flat(ent, n).real
    ph = permanent_flat(had, n)
    return ph / (p * p)


def ratio(a) -> float:
    """per(A o conj(A)) / per(A)^2; at most 1 for every n <= 4 input."""
    m = as_square(a)
    return _ratio_of_gram(m.to_numpy(), m.n)


def _gram(v: np.ndarray) -> np.ndarray:
    g = v @ v.conj().T
    g = (g + g.conj().T) / 2
    np.fill_diagonal(g, 1.0)
    return g


def hill_climb(config: SearchConfig) -> SearchResult:
    """Seeded stochastic ascent: perturb one unit vector at a time along a
    random tangent direction, renormalize, keep strict improvements; the step
    shrinks after a full round of rejections.  Deterministic given the seed."""
    n = config.n
    best_ratio = -1.0
    best_gram = None
    history = []
    evaluations = 0
    for r in range(config.restarts):
        rng = np.random.default_rng((config.seed ^ r) & SEED_MASK)
        v = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        v /= np.linalg.norm(v, axis=1, keepdims=True)
        g = _gram(v)
        current = _ratio_of_gram(g, n)
        evaluations += 1
        step = config.initial_step
        rejects = 0
        local_best = current
        local_best_gram = g
        for it in range(config.iterations):
            idx = it % n
            d = rng.standard_normal(n) + 1j * rng.standard_normal(n)
            d -= v[idx] * np.vdot(v[idx], d)
            norm = np.linalg.norm(d)
            if norm < 1e-12:
                continue
            cand = v[idx] + step * d / norm
            cand /= np.linalg.norm(cand)
            old = v[idx].copy()
            v[idx] = cand
            g_cand = _gram(v)
            cand_ratio = _ratio_of_gram(g_cand, n)
            evaluations += 1
            if cand_ratio > current + ACCEPT_EPS:
                current = cand_ratio
                rejects = 0
                if current > local_best:
                    local_best = current
                    local_best_gram = g_cand
            else:
                v[idx] = old
                rejects += 1
                if rejects >= n:
                    step *= config.shrink
                    rejects = 0
            if current > config.target_ratio:
                break
        history.append(local_best)
        if local_best > best_ratio:
            best_ratio = local_best
            best_gram = local_best_gram
    best = CorrelationMatrix(SquareMatrix.from_numpy(best_gram))
    return SearchResult(best, best_ratio, tuple(history), evaluations)


__all__ = ["SearchConfig", "SearchResult", "hill_climb", "ratio"]
