"""Executable form of the 4x4 case analysis: entry extraction for the fixed
layout

    1  x  y  z
    x' 1  t  u
    y' t' 1  w
    z' u' w' 1

(primes denoting conjugates), the closed-form expansions of per(A) and
per(A o conj(A)), the three supporting lemmas, case classification and the
full margin-reported inequality chain of each case."""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, replace
from typing import Optional

from gmpy2 import mpq

from .inequality import DEFAULT_TOL, CheckResult, permanent_real
from .matrices import DimensionError, SquareMatrix, conjugate, hadamard, permute_similarity, principal_submatrix
from .matrixlab import as_square
from .permanent import permanent_naive
from .scalars import GaussianRational, abs_sq, is_exact, two_re

EXPANSION_TOL = 1e-9
IDENTITY_TOL = 1e-12


class PreconditionError(ValueError):
    """A lemma was invoked outside its hypothesis."""


@dataclass(frozen=True)
class EntryVector:
    """The six independent off-diagonal entries of the fixed 4x4 layout:
    positions (1,2), (1,3), (1,4), (2,3), (2,4), (3,4)."""

    x: object
    y: object
    z: object
    t: object
    u: object
    w: object

    @property
    def exact(self) -> bool:
        return isinstance(self.x, GaussianRational)

    def as_tuple(self) -> tuple:
        return (self.x, self.y, self.z, self.t, self.u, self.w)

    def assemble(self) -> SquareMatrix:
        """Build the patterned Hermitian 4x4 matrix with unit diagonal."""
        x, y, z, t, u, w = self.as_tuple()
        one = GaussianRational(1) if self.exact else 1 + 0j
        rows = [
            [one, x, y, z],
            [x.conjugate(), one, t, u],
            [y.conjugate(), t.conjugate(), one, w],
            [z.conjugate(), u.conjugate(), w.conjugate(), one],
        ]
        return SquareMatrix(4, tuple(e for row in rows for e in row))

    def to_dict(self) -> dict:
        def pair(v):
            if isinstance(v, GaussianRational):
                return [str(v.re), str(v.im)]
            return [v.real, v.imag]

        return {k: pair(v) for k, v in zip("xyztuw", self.as_tuple())}


def extract_entries(a) -> EntryVector:
    """Read the six upper-triangle entries of a 4x4 matrix per the layout."""
    m = as_square(a)
    if m.n != 4:
        raise DimensionError(f"entry extraction needs n = 4, got {m.n}")
    return EntryVector(m[0, 1], m[0, 2], m[0, 3], m[1, 2], m[1, 3], m[2, 3])


@dataclass(frozen=True)
class YZTerms:
    """The derived real quantities of the two expansions.

    y1..y7 are the cross terms of per(A); z1..z7 the (nonnegative) cross
    terms of per(A o conj(A)).  s1..s4 are the magnitude sums paired with
    y1..y4; ``abs_sq`` holds (|x|^2, |y|^2, |z|^2, |t|^2, |u|^2, |w|^2);
    ``sq_total`` their sum; ``pair_sq`` = |xw|^2 + |yu|^2 + |zt|^2 with
    ``pair_quartic`` and ``quartic_total`` the matching fourth-power sums.
    """

    y: tuple  # y1..y7
    z: tuple  # z1..z7
    s: tuple  # s1..s4
    abs_sq: tuple
    sq_total: object
    quartic_total: object
    pair_sq: object
    pair_quartic: object

    def to_dict(self) -> dict:
        def num(v):
            return str(v) if isinstance(v, type(mpq(0))) else float(v)

        return {
            "y": [num(v) for v in self.y],
            "z": [num(v) for v in self.z],
            "s": [num(v) for v in self.s],
            "abs_sq": [num(v) for v in self.abs_sq],
            "sq_total": num(self.sq_total),
            "quartic_total": num(self.quartic_total),
            "pair_sq": num(self.pair_sq),
            "pair_quartic": num(self.pair_quartic),
        }


def compute_terms(e: EntryVector) -> YZTerms:
    x, y, z, t, u, w = e.as_tuple()
    ys = (
        two_re(x * y.conjugate() * t),
        two_re(x * u * z.conjugate()),
        two_re(y * w * z.conjugate()),
        two_re(t * w * u.conjugate()),
        two_re(x * t * w * z.conjugate()),
        two_re(y * t.conjugate() * u * z.conjugate()),
        two_re(x * u * y.conjugate() * w.conjugate()),
    )
    zs = (
        abs_sq(x * y * t) * 2,
        abs_sq(x * u * z) * 2,
        abs_sq(y * w * z) * 2,
        abs_sq(t * w * u) * 2,
        abs_sq(x * w * z * t) * 2,
        abs_sq(y * u * z * t) * 2,
        abs_sq(x * w * y * u) * 2,
    )
    mags = tuple(abs_sq(v) for v in (x, y, z, t, u, w))
    mx, my, mz, mt, mu, mw = mags
    ss = (mx + my + mt, mx + mz + mu, my + mz + mw, mt + mu + mw)
    pair_sq = abs_sq(x * w) + abs_sq(y * u) + abs_sq(z * t)
    pair_quartic = abs_sq(x * w) ** 2 + abs_sq(y * u) ** 2 + abs_sq(z * t) ** 2
    return YZTerms(
        y=ys,
        z=zs,
        s=ss,
        abs_sq=mags,
        sq_total=sum(mags),
        quartic_total=sum(m * m for m in mags),
        pair_sq=pair_sq,
        pair_quartic=pair_quartic,
    )


def expansion_per_terms(terms: YZTerms):
    """per(A) from its derived terms: 1 + sum|.|^2 + pair squares + sum y_i."""
    return 1 + terms.sq_total + terms.pair_sq + sum(terms.y)


def expansion_per(e: EntryVector):
    """Closed-form per(A) for the patterned matrix."""
    return expansion_per_terms(compute_terms(e))


def expansion_per_hadamard_terms(terms: YZTerms):
    """per(A o conj(A)) from its derived terms."""
    return 1 + terms.quartic_total + terms.pair_quartic + sum(terms.z)


def expansion_per_hadamard(e: EntryVector):
    """Closed-form per(A o conj(A)) for the patterned matrix."""
    return expansion_per_hadamard_terms(compute_terms(e))


# The s-triple of index i lists which entries (by position in abs_sq order
# x, y, z, t, u, w) enter s_i; also used for the quartic triples.
_S_TRIPLES = ((0, 1, 3), (0, 2, 4), (1, 2, 5), (3, 4, 5))


def _det3(m: SquareMatrix):
    a, b, c, d, e, f, g, h, i = m.entries
    return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)


def _real_of(v, exact: bool):
    if exact:
        if v.im != 0:
            raise AssertionError(f"expected real value, got imaginary part {v.im}")
        return v.re
    if abs(v.imag) > 1e-10 * (1.0 + abs(v)):
        raise AssertionError(f"expected real value, got imaginary part {v.imag}")
    return v.real


@dataclass(frozen=True)
class Lemma1Result:
    """1 + y_i >= s_i for i = 1..4, each backed by the determinant identity
    det(A(5-i)) = 1 + y_i - s_i on the 3x3 principal submatrices."""

    bounds: tuple
    identities: tuple

    @property
    def holds(self) -> bool:
        return all(c.holds for c in self.bounds + self.identities)


def verify_lemma1(a, tol: float = DEFAULT_TOL) -> Lemma1Result:
    m = as_square(a)
    e = extract_entries(m)
    terms = compute_terms(e)
    exact = m.exact
    etol = mpq(0) if exact else tol
    itol = mpq(0) if exact else IDENTITY_TOL
    bounds = []
    identities = []
    for i in range(4):
        yi, si = terms.y[i], terms.s[i]
        bounds.append(CheckResult.bound(1 + yi, si, etol, f"lemma1-bound-{i + 1}"))
        det = _real_of(_det3(principal_submatrix(m, 4 - i)), exact)
        identities.append(
            CheckResult.equality(det, 1 + yi - si, itol, f"lemma1-identity-{i + 1}")
        )
    return Lemma1Result(tuple(bounds), tuple(identities))


@dataclass(frozen=True)
class Lemma2Result:
    """per(A) >= 1 + y_i + s_i for i = 1..4, backed by the four permanent
    identities on 3x3 principal submatrices of A and its (3 4)-, (1 2)-
    permuted similars."""

    bounds: tuple
    identities: tuple

    @property
    def holds(self) -> bool:
        return all(c.holds for c in self.bounds + self.identities)


def lemma2_submatrices(m: SquareMatrix) -> tuple:
    """The four 3x3 matrices whose permanents are 1 + y_i + s_i."""
    a2 = permute_similarity(m, (1, 2, 4, 3))
    a3 = permute_similarity(m, (2, 1, 3, 4))
    return (
        principal_submatrix(m, 4),
        principal_submatrix(a2, 4),
        principal_submatrix(a3, 1),
        principal_submatrix(m, 1),
    )


def verify_lemma2(a, tol: float = DEFAULT_TOL) -> Lemma2Result:
    m = as_square(a)
    e = extract_entries(m)
    terms = compute_terms(e)
    exact = m.exact
    etol = mpq(0) if exact else tol
    itol = mpq(0) if exact else IDENTITY_TOL
    p = permanent_real(m)
    bounds = []
    identities = []
    for i, sub in enumerate(lemma2_submatrices(m)):
        rhs = 1 + terms.y[i] + terms.s[i]
        bounds.append(CheckResult.bound(p, rhs, etol, f"lemma2-bound-{i + 1}"))
        sub_per = _real_of(permanent_naive(sub), exact)
        identities.append(
            CheckResult.equality(sub_per, rhs, itol, f"lemma2-identity-{i + 1}")
        )
    return Lemma2Result(tuple(bounds), tuple(identities))


def lemma3_check(a, b, c, tol: float = DEFAULT_TOL) -> CheckResult:
    """For a^2 + b^2 + c^2 <= 1: the sum of squares dominates the expanded
    fourth-power form (which equals its own square)."""
    exact = is_exact(a) and is_exact(b) and is_exact(c)
    a2, b2, c2 = a * a, b * b, c * c
    lhs = a2 + b2 + c2
    pre_tol = 0 if exact else tol
    if lhs > 1 + pre_tol:
        raise PreconditionError(f"a^2 + b^2 + c^2 = {lhs} > 1")
    rhs = a2 * a2 + b2 * b2 + c2 * c2 + 2 * (a2 * b2 + a2 * c2 + b2 * c2)
    square = lhs * lhs
    dev = abs(rhs - square)
    if dev > (0 if exact else 1e-14 * (1.0 + float(square))):
        raise AssertionError(f"expanded form deviates from squared form by {dev}")
    return CheckResult.bound(lhs, rhs, mpq(0) if exact else tol, "lemma3")


class CaseLabel(enum.Enum):
    CASE1 = "Case1"
    CASE2 = "Case2"
    CASE3_TO_1 = "Case3->1"
    CASE3_TO_2 = "Case3->2"


def classify_case(terms: YZTerms) -> tuple[CaseLabel, Optional[int]]:
    """Dispatch on the signs of y1..y4 (zero counts as non-negative).

    Returns the case label and the 1-based governing index m: the argmax of
    s over all four indices (Case 1) or over the non-negative-y indices
    (Case 3), ties broken by smallest index.  Case 2 has no governing index.
    """
    y, s = terms.y[:4], terms.s
    nonneg = [i for i in range(4) if y[i] >= 0]
    if len(nonneg) == 4:
        m = max(range(4), key=lambda i: (s[i], -i))
        return CaseLabel.CASE1, m + 1
    if not nonneg:
        return CaseLabel.CASE2, None
    m = max(nonneg, key=lambda i: (s[i], -i))
    if s[m] >= 1:
        return CaseLabel.CASE3_TO_1, m + 1
    return CaseLabel.CASE3_TO_2, m + 1


@dataclass(frozen=True)
class ProofTrace:
    """Full record of one matrix's walk through the case analysis."""

    entries: EntryVector
    terms: YZTerms
    case_label: CaseLabel
    max_index: Optional[int]
    links: tuple
    expansion_checks: tuple
    verdict: str  # "verified" | "violated" | "degenerate"
    lemma1: Optional[Lemma1Result] = None
    lemma2: Optional[Lemma2Result] = None

    @property
    def min_link_margin(self):
        return min(float(c.margin) for c in self.links)

    def to_dict(self) -> dict:
        d = {
            "entries": self.entries.to_dict(),
            "terms": self.terms.to_dict(),
            "case": self.case_label.value,
            "max_index": self.max_index,
            "links": [c.to_dict() for c in self.links],
            "expansion_checks": [c.to_dict() for c in self.expansion_checks],
            "verdict": self.verdict,
        }
        if self.lemma1 is not None:
            d["lemma1"] = {
                "bounds": [c.to_dict() for c in self.lemma1.bounds],
                "identities": [c.to_dict() for c in self.lemma1.identities],
            }
        if self.lemma2 is not None:
            d["lemma2"] = {
                "bounds": [c.to_dict() for c in self.lemma2.bounds],
                "identities": [c.to_dict() for c in self.lemma2.identities],
            }
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)


def _case1_links(p, terms: YZTerms, m: int, exp_had, half, etol, ident_tol) -> list:
    y, s = terms.y, terms.s
    ym, sm = y[m - 1], s[m - 1]
    links = [
        CheckResult.bound(p, 1 + ym + sm, etol, f"lemma2-bound[{m}]"),
        CheckResult.bound(1 + ym, sm, etol, f"lemma1-bound[{m}]"),
        CheckResult.bound((1 + ym) * (1 + ym), 1, etol, "unit-floor"),
    ]
    for i in range(4):
        links.append(CheckResult.bound(sm, s[i], etol, f"s-dominance[{i + 1}]"))
    links.append(CheckResult.bound(sm, terms.pair_sq, etol, "pair-dominance"))
    for i in range(4):
        triple = sum(terms.abs_sq[j] ** 2 for j in _S_TRIPLES[i])
        links.append(
            CheckResult.bound(
                half * s[i] * s[i],
                half * triple + terms.z[i],
                etol,
                f"half-square[{i + 1}]",
            )
        )
    links.append(
        CheckResult.equality(
            terms.pair_sq * terms.pair_sq,
            terms.pair_quartic + terms.z[4] + terms.z[5] + terms.z[6],
            ident_tol,
            "pair-square-identity",
        )
    )
    bound = 1 + half * sum(si * si for si in s) + terms.pair_sq * terms.pair_sq
    links.append(CheckResult.bound(p * p, bound, etol, "case1-bound"))
    links.append(CheckResult.bound(bound, exp_had, etol, "bound-dominates-hadamard"))
    return links


def _case2_links(p, terms: YZTerms, exp_had, half, three_halves, etol) -> list:
    big_t = terms.sq_total
    quarter_sq = half * half * big_t * big_t
    links = [
        CheckResult.bound(p, 1 + half * big_t, etol, "grone-pierce-bound"),
        CheckResult.bound(
            quarter_sq,
            half * half * terms.quartic_total + half * terms.pair_sq,
            etol,
            "quarter-square",
        ),
        CheckResult.bound(
            half * half * terms.quartic_total, half * terms.pair_sq, etol, "amgm-pair"
        ),
        CheckResult.bound(1, max(terms.s), etol, "s-below-one"),
        CheckResult.bound(1, terms.pair_sq, etol, "pair-below-one"),
        CheckResult.bound(
            terms.pair_sq,
            terms.pair_quartic + terms.z[4] + terms.z[5] + terms.z[6],
            etol,
            "lemma3-pair",
        ),
        CheckResult.bound(
            big_t,
            terms.quartic_total + three_halves * (terms.z[0] + terms.z[1] + terms.z[2] + terms.z[3]),
            etol,
            "quartic-z-bound",
        ),
    ]
    bound = 1 + big_t + quarter_sq
    links.append(CheckResult.bound(p * p, bound, etol, "case2-bound"))
    links.append(CheckResult.bound(bound, exp_had, etol, "bound-dominates-hadamard"))
    return links


def verify_case_chain(a, tol: float = DEFAULT_TOL) -> ProofTrace:
    """Classify a 4x4 correlation matrix and check every inequality of its
    case's chain, each with a signed margin."""
    m = as_square(a)
    if m.n != 4:
        raise DimensionError(f"case chain needs n = 4, got {m.n}")
    exact = m.exact
    e = extract_entries(m)
    terms = compute_terms(e)
    etol = mpq(0) if exact else tol
    if exact:
        half, three_halves = mpq(1, 2), mpq(3, 2)
    else:
        half, three_halves = 0.5, 1.5

    p = permanent_real(m)
    p_had = permanent_real(hadamard(m, conjugate(m)))
    exp_p = expansion_per_terms(terms)
    exp_had = expansion_per_hadamard_terms(terms)
    expansion_tol = mpq(0) if exact else EXPANSION_TOL
    expansion_checks = (
        CheckResult.equality(exp_p, p, expansion_tol, "expansion-per"),
        CheckResult.equality(exp_had, p_had, expansion_tol, "expansion-per-hadamard"),
    )

    label, max_index = classify_case(terms)
    degenerate = False
    ident_tol = mpq(0) if exact else IDENTITY_TOL
    if label in (CaseLabel.CASE1, CaseLabel.CASE3_TO_1):
        links = _case1_links(p, terms, max_index, exp_had, half, etol, ident_tol)
    else:
        if terms.pair_sq > 1 + (0 if exact else tol):
            # lemma3 precondition failed; cannot happen for a valid input
            degenerate = True
            links = []
        else:
            links = _case2_links(p, terms, exp_had, half, three_halves, etol)
    links = links + [CheckResult.bound(p * p, p_had, etol, "reduced-inequality")]

    if degenerate:
        verdict = "degenerate"
    elif all(c.holds for c in links) and all(c.holds for c in expansion_checks):
        verdict = "verified"
    else:
        verdict = "violated"
    return ProofTrace(e, terms, label, max_index, tuple(links), expansion_checks, verdict)


def prove_trace(a, tol: float = DEFAULT_TOL) -> ProofTrace:
    """Full verification bundle: case chain plus both lemma suites."""
    trace = verify_case_chain(a, tol)
    l1 = verify_lemma1(a, tol)
    l2 = verify_lemma2(a, tol)
    verdict = trace.verdict
    if verdict == "verified" and not (l1.holds and l2.holds):
        verdict = "violated"
    return replace(trace, lemma1=l1, lemma2=l2, verdict=verdict)


__all__ = [
    "CaseLabel",
    "EntryVector",
    "Lemma1Result",
    "Lemma2Result",
    "PreconditionError",
    "ProofTrace",
    "YZTerms",
    "classify_case",
    "compute_terms",
    "expansion_per",
    "expansion_per_hadamard",
    "expansion_per_hadamard_terms",
    "expansion_per_terms",
    "extract_entries",
    "lemma2_submatrices",
    "lemma3_check",
    "prove_trace",
    "verify_case_chain",
    "verify_lemma1",
    "verify_lemma2",
]
