"""Scalar arithmetic in two realizations: complex floats and exact Gaussian rationals.

Float-mode matrices hold plain Python ``complex``; exact-mode matrices hold
:class:`GaussianRational` (rational real part + rational imaginary part,
backed by ``gmpy2.mpq``).  Both realizations expose ``.real``, ``.imag`` and
``.conjugate()``, so generic code can treat them uniformly.
"""

from __future__ import annotations

from fractions import Fraction

from gmpy2 import isqrt, mpq

_RATIONAL_TYPES = (int, Fraction, type(mpq(0)))


def _coerce_rational(v):
    if isinstance(v, _RATIONAL_TYPES):
        return mpq(v)
    if isinstance(v, str):
        return mpq(v)
    raise TypeError(f"not a rational value: {v!r}")


class GaussianRational:
    """Complex number with exact rational real and imaginary parts.

    Arithmetic is closed and exact: no rounding ever occurs.  Instances are
    immutable by convention; no method mutates ``re``/``im``.
    """

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = _coerce_rational(re)
        self.im = _coerce_rational(im)

    # internal fast constructor, skips coercion
    @staticmethod
    def _make(re, im):
        g = GaussianRational.__new__(GaussianRational)
        g.re = re
        g.im = im
        return g

    @property
    def real(self):
        return self.re

    @property
    def imag(self):
        return self.im

    def conjugate(self):
        return GaussianRational._make(self.re, -self.im)

    def abs_sq(self):
        """Squared magnitude, an exact rational."""
        return self.re * self.re + self.im * self.im

    def __add__(self, other):
        if isinstance(other, GaussianRational):
            return GaussianRational._make(self.re + other.re, self.im + other.im)
        if isinstance(other, _RATIONAL_TYPES):
            return GaussianRational._make(self.re + other, self.im)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, GaussianRational):
            return GaussianRational._make(self.re - other.re, self.im - other.im)
        if isinstance(other, _RATIONAL_TYPES):
            return GaussianRational._make(self.re - other, self.im)
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, _RATIONAL_TYPES):
            return GaussianRational._make(other - self.re, -self.im)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, GaussianRational):
            a, b, c, d = self.re, self.im, other.re, other.im
            return GaussianRational._make(a * c - b * d, a * d + b * c)
        if isinstance(other, _RATIONAL_TYPES):
            return GaussianRational._make(self.re * other, self.im * other)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, _RATIONAL_TYPES):
            return GaussianRational._make(self.re / other, self.im / other)
        if isinstance(other, GaussianRational):
            d = other.abs_sq()
            if d == 0:
                raise ZeroDivisionError("division by zero Gaussian rational")
            return (self * other.conjugate()) / d
        return NotImplemented

    def __neg__(self):
        return GaussianRational._make(-self.re, -self.im)

    def __pos__(self):
        return self

    def __eq__(self, other):
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, _RATIONAL_TYPES):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self):
        if self.im == 0:
            return hash(Fraction(self.re.numerator, self.re.denominator))
        return hash((self.re, self.im))

    def __bool__(self):
        return self.re != 0 or self.im != 0

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"GaussianRational({str(self.re)!r}, {str(self.im)!r})"


def is_exact(v) -> bool:
    """True for the exact realization (Gaussian rationals / plain rationals)."""
    return isinstance(v, (GaussianRational,) + _RATIONAL_TYPES)


def abs_sq(v):
    """Squared magnitude of a scalar in either realization."""
    if isinstance(v, GaussianRational):
        return v.abs_sq()
    v = complex(v)
    return v.real * v.real + v.imag * v.imag


def two_re(v):
    """2 * Re(v), in the arithmetic of v's realization."""
    return v.real + v.real


def rational_sqrt(q):
    """Exact square root of a nonnegative rational, or ValueError.

    Only perfect rational squares have exact roots; anything else raises.
    """
    q = mpq(q)
    if q < 0:
        raise ValueError("negative input")
    num, den = q.numerator, q.denominator
    rn, rd = isqrt(num), isqrt(den)
    if rn * rn != num or rd * rd != den:
        raise ValueError(f"{q} is not a perfect rational square")
    return mpq(rn, rd)


def random_gaussian_rational(rng, num_bound: int = 9, den_bound: int = 9) -> GaussianRational:
    """Random Gaussian rational with small numerators/denominators.

    ``rng`` is a ``random.Random``; numerators are uniform in
    [-num_bound, num_bound], denominators in [1, den_bound].
    """
    re = mpq(rng.randint(-num_bound, num_bound), rng.randint(1, den_bound))
    im = mpq(rng.randint(-num_bound, num_bound), rng.randint(1, den_bound))
    return GaussianRational(re, im)
