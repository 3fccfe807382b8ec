"""Exact decompositions of the MZ polynomial over dilated Riemann generators.

A certificate for order ``n`` is a finite list of terms ``(k, s, coeff)``
asserting

    r_n(t) = sum( coeff * t**(-s*k) * (t**s - 1)**n )

with ``r_n`` the dyadic MZ polynomial.  Back through the scheme/Laurent
isomorphism this says the MZ difference ``R_n(h)`` is the same linear
combination of dilated generalized Riemann differences ``Delta_k(s*h)`` --
an identity a machine can check term by term, with no tolerance.

Two admissible index ranges are supported:

* ``Case.GGR``: ``k = 1..n-1``, with ``k = 0`` allowed only for even ``n``
  (and, as the one deliberate extension, for ``n = 1``, where the range would
  otherwise be empty although ``r_1 = t - 1`` is itself a generator).
* ``Case.VARIANT``: ``k = -(n-2)..0`` for ``n >= 2``.

Two independent construction strategies are provided.

``certify_inductive`` mechanizes the inductive existence proof.  It carries a
representation of ``r_m`` in an intermediate basis and pushes it through the
recursion ``r_{m+1}(t) = r_m(t**2) - 2**m * r_m(t)``:

* variant: basis ``(t**s - 1)**(m+k)`` for ``k = 0..m-2``.  The recursion
  maps the ``k = 0`` element to ``(t**s - 1)**m * ((t**s + 1)**m - 2**m)``,
  and the second factor is divisible by ``t**s - 1`` exactly; re-expanding
  the quotient in powers of ``t - 1`` restores basis form.
* ggr: basis split by parity into a centered element ``t**(-e) * (t-1)**m``
  (``e = m/2`` or ``(m-1)/2``) plus widened elements ``t**(-k) * (t-1)**(m+1)``.
  The centered element maps to ``t**(-2e) * (t-1)**m * ((t+1)**m - 2**m * t**e)``
  and the second factor is again exactly divisible by ``t - 1``; widened
  elements map straight to generators of the next level, one kept at ``s``
  and one dilated to ``2s``.

``certify_solver`` ignores the proof and solves the exact linear system that
matches exponent coordinates of the truncated generator set against ``r_n``,
as an independent oracle for the same existence statement.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Iterable, NamedTuple, Optional, Sequence

from .differences import (
    DifferenceScheme,
    ggr_difference,
    linear_combination,
    mz_difference,
    mz_polynomial,
)
from .laurent import LaurentPoly, as_fraction
from .linalg import solve_sparse_exact

GENERATOR_CONVENTION = "t^(-s*k)*(t^s-1)^n"
TARGET_NAME = "r_n"


class InfeasibleError(Exception):
    """The truncated generator set cannot express the target polynomial."""


class InvariantViolationError(RuntimeError):
    """An internal construction step broke a guaranteed exact identity."""


class CertificateFormatError(ValueError):
    """Certificate JSON violating the interchange contract; names the field."""

    def __init__(self, field: str, reason: str):
        super().__init__(f"certificate field {field!r}: {reason}")
        self.field = field


class Case(enum.Enum):
    """Which admissible ``k`` range the certificate claims."""

    GGR = "ggr"
    VARIANT = "variant"

    @classmethod
    def parse(cls, text: str) -> "Case":
        for case in cls:
            if case.value == text:
                return case
        raise ValueError(f"unknown case {text!r} (expected 'ggr' or 'variant')")


class Term(NamedTuple):
    k: int
    s: int
    coeff: Fraction


@dataclass(frozen=True)
class Certificate:
    """A claimed decomposition of ``r_n``; run :func:`verify` to check it."""

    n: int
    case: Case
    terms: tuple[Term, ...]

    def __post_init__(self) -> None:
        if not isinstance(self.n, int) or self.n < 1:
            raise ValueError(f"certificate order must be a positive integer, got {self.n!r}")
        if not isinstance(self.case, Case):
            raise TypeError(f"case must be a Case, got {self.case!r}")
        seen: set[tuple[int, int]] = set()
        cleaned: list[Term] = []
        for term in self.terms:
            k, s, coeff = term
            if not isinstance(k, int):
                raise TypeError(f"term index k must be an integer, got {k!r}")
            if not isinstance(s, int) or s < 1:
                raise ValueError(f"term dilation s must be a positive integer, got {s!r}")
            c = as_fraction(coeff)
            if c == 0:
                raise ValueError(f"zero coefficient on term (k={k}, s={s})")
            if (k, s) in seen:
                raise ValueError(f"duplicate term (k={k}, s={s})")
            seen.add((k, s))
            cleaned.append(Term(k, s, c))
        cleaned.sort(key=lambda t: (t.s, t.k))
        object.__setattr__(self, "terms", tuple(cleaned))

    def expansion(self) -> LaurentPoly:
        """The exact polynomial the term list sums to."""
        total = LaurentPoly.zero()
        for k, s, coeff in self.terms:
            total = total + generator_poly(self.n, k, s).scale(coeff)
        return total


# -- generator enumeration ---------------------------------------------------


def admissible_k(n: int, case: Case) -> tuple[int, ...]:
    """Index range of the case, ordered by increasing ``abs(k)``."""
    if case is Case.GGR:
        if n < 1:
            raise ValueError(f"ggr case needs n >= 1, got {n}")
        if n == 1:
            return (0,)
        start = 0 if n % 2 == 0 else 1
        return tuple(range(start, n))
    if n < 2:
        raise ValueError(f"variant case needs n >= 2, got {n}")
    return tuple(range(0, -(n - 1), -1))


def generator_poly(n: int, k: int, s: int) -> LaurentPoly:
    """The dilated generator ``t**(-s*k) * (t**s - 1)**n``."""
    if not isinstance(s, int) or s < 1:
        raise ValueError(f"dilation must be a positive integer, got {s!r}")
    return ((LaurentPoly.monomial(s) - 1) ** n) * LaurentPoly.monomial(-s * k)


def generators(n: int, case: Case, s_max: int) -> list[tuple[int, int, LaurentPoly]]:
    """All ``(k, s, poly)`` generators for admissible ``k`` and ``1 <= s <= s_max``."""
    if not isinstance(s_max, int) or s_max < 1:
        raise ValueError(f"s_max must be a positive integer, got {s_max!r}")
    ks = admissible_k(n, case)
    return [(k, s, generator_poly(n, k, s)) for s in range(1, s_max + 1) for k in ks]


# -- verification ------------------------------------------------------------


@dataclass(frozen=True)
class VerifyResult:
    ok: bool
    difference: Optional[LaurentPoly]
    message: str

    def __bool__(self) -> bool:
        return self.ok


def verify(cert: Certificate) -> VerifyResult:
    """Exact check of the claimed identity, plus the case's range discipline.

    Never raises on a bad certificate: returns ``ok=False`` with the
    difference polynomial (expansion minus ``r_n``) or a range diagnostic.
    """
    try:
        allowed = set(admissible_k(cert.n, cert.case))
    except ValueError as exc:
        return VerifyResult(False, None, str(exc))
    out_of_range = sorted({t.k for t in cert.terms} - allowed)
    if out_of_range:
        return VerifyResult(
            False,
            None,
            f"k values {out_of_range} outside the {cert.case.value} range for n={cert.n}",
        )
    difference = cert.expansion() - mz_polynomial(cert.n)
    if difference.is_zero():
        return VerifyResult(True, None, f"certificate expands exactly to r_{cert.n}")
    return VerifyResult(
        False, difference, f"expansion differs from r_{cert.n} by {difference}"
    )


# -- inductive strategy ------------------------------------------------------


def _divide_by_t_minus_one(poly: LaurentPoly) -> LaurentPoly:
    """Exact synthetic division by ``t - 1``; a remainder is a hard error."""
    if poly.is_zero():
        return poly
    lo, hi = poly.min_exponent(), poly.max_exponent()
    quotient: dict[int, Fraction] = {}
    running = Fraction(0)
    for e in range(hi, lo, -1):
        running += poly.coeff(e)
        if running:
            quotient[e - 1] = running
    remainder = poly.coeff(lo) + quotient.get(lo, Fraction(0))
    if remainder:
        raise InvariantViolationError(
            f"{poly} is not divisible by t - 1 (remainder {remainder})"
        )
    return LaurentPoly(quotient)


def _to_power_basis(poly: LaurentPoly) -> dict[int, Fraction]:
    """Coefficients of ``poly`` in the basis ``(t - 1)**i`` (exponents >= 0 only)."""
    if not poly.is_zero() and poly.min_exponent() < 0:
        raise ValueError("power-basis conversion needs nonnegative exponents")
    shifted = LaurentPoly.zero()
    u_plus_one = LaurentPoly({1: 1, 0: 1})
    for e, c in poly.terms.items():
        shifted = shifted + (u_plus_one ** e).scale(c)
    return shifted.terms


def _variant_kernel(m: int) -> dict[int, Fraction]:
    """``((t+1)**m - 2**m) / (t-1)`` expanded in powers of ``t - 1``."""
    numerator = (LaurentPoly({1: 1, 0: 1}) ** m) - LaurentPoly.monomial(0, 2 ** m)
    return _to_power_basis(_divide_by_t_minus_one(numerator))


def _certify_inductive_variant(n: int) -> Certificate:
    # rep: (k, s) -> coeff on (t**s - 1)**(m+k), k = 0..m-2, starting at r_2.
    rep: dict[tuple[int, int], Fraction] = {(0, 1): Fraction(1)}
    for m in range(2, n):
        kernel = _variant_kernel(m)
        new: dict[tuple[int, int], Fraction] = {}

        def bump(key: tuple[int, int], value: Fraction) -> None:
            v = new.get(key, Fraction(0)) + value
            if v:
                new[key] = v
            else:
                new.pop(key, None)

        for (k, s), a in rep.items():
            if k >= 1:
                # both the dilated and the scaled image are already basis elements
                bump((k - 1, 2 * s), a)
                bump((k - 1, s), -a * 2 ** m)
            else:
                # (t**2s - 1)**m - 2**m (t**s - 1)**m = (t**s - 1)**(m+1) * p(t**s)
                for i, b in kernel.items():
                    bump((i, s), a * b)
        rep = new

    # (t**s - 1)**(n+k) = sum_j (-1)**(k-j) C(k, j) * t**(s*j) * (t**s - 1)**n
    acc: dict[tuple[int, int], Fraction] = {}
    for (k, s), a in rep.items():
        for j in range(k + 1):
            key = (-j, s)
            v = acc.get(key, Fraction(0)) + a * (-1) ** (k - j) * comb(k, j)
            if v:
                acc[key] = v
            else:
                acc.pop(key, None)
    terms = tuple(Term(k, s, c) for (k, s), c in acc.items())
    return Certificate(n, Case.VARIANT, terms)


def _ggr_kernel(m: int) -> dict[int, Fraction]:
    """``((t+1)**m - 2**m * t**e) / (t-1)`` with ``e`` the centered exponent."""
    e = m // 2 if m % 2 == 0 else (m - 1) // 2
    numerator = (LaurentPoly({1: 1, 0: 1}) ** m) - LaurentPoly.monomial(e, 2 ** m)
    return _divide_by_t_minus_one(numerator).terms


def _ggr_step(m: int, rep: dict[tuple, Fraction]) -> dict[tuple[int, int], Fraction]:
    """Push a parity-basis representation of ``r_m`` through the recursion.

    Returns the generator-coordinate representation of ``r_{m+1}``:
    a map ``(k, s) -> coeff`` on ``t**(-s*k) * (t**s - 1)**(m+1)``.
    """
    shift = m if m % 2 == 0 else m - 1
    kernel = _ggr_kernel(m)
    out: dict[tuple[int, int], Fraction] = {}

    def bump(key: tuple[int, int], value: Fraction) -> None:
        v = out.get(key, Fraction(0)) + value
        if v:
            out[key] = v
        else:
            out.pop(key, None)

    for key, a in rep.items():
        if key[0] == "C":
            _, s = key
            # centered element: divide out t - 1 once and fan out the quotient
            for i, p in kernel.items():
                bump((shift - i, s), a * p)
        else:
            _, k, s = key
            bump((k, 2 * s), a)
            bump((k, s), -a * 2 ** m)
    return out


def _ggr_rebase(coords: dict[tuple[int, int], Fraction], m: int) -> dict[tuple, Fraction]:
    """Rewrite generator coordinates of ``r_m`` in the parity basis of level ``m``.

    Uses the telescoping identity
    ``t**(-k) * (t-1)**(m+1) = t**(-(k-1)) * (t-1)**m - t**(-k) * (t-1)**m``:
    walking from the centered index to ``k`` expresses each generator as the
    centered element plus a signed run of widened elements.
    """
    center = m // 2 if m % 2 == 0 else (m - 1) // 2
    rep: dict[tuple, Fraction] = {}

    def bump(key: tuple, value: Fraction) -> None:
        v = rep.get(key, Fraction(0)) + value
        if v:
            rep[key] = v
        else:
            rep.pop(key, None)

    for (k, s), a in coords.items():
        bump(("C", s), a)
        if k < center:
            for j in range(k + 1, center + 1):
                bump(("E", j, s), a)
        elif k > center:
            for j in range(center + 1, k + 1):
                bump(("E", j, s), -a)
    return rep


def _certify_inductive_ggr(n: int) -> Certificate:
    if n == 1:
        return Certificate(1, Case.GGR, (Term(0, 1, Fraction(1)),))
    # r_1 = t - 1 is the centered element of the (odd) level-1 parity basis.
    rep: dict[tuple, Fraction] = {("C", 1): Fraction(1)}
    coords: dict[tuple[int, int], Fraction] = {}
    for m in range(1, n):
        coords = _ggr_step(m, rep)
        if m + 1 < n:
            rep = _ggr_rebase(coords, m + 1)
    terms = tuple(Term(k, s, c) for (k, s), c in coords.items())
    return Certificate(n, Case.GGR, terms)


def certify_inductive(n: int, case: Case) -> Certificate:
    """Certificate from the constructive induction; always verified before return."""
    if not isinstance(n, int):
        raise ValueError(f"order must be an integer, got {n!r}")
    if case is Case.GGR:
        if n < 1:
            raise ValueError(f"ggr case needs n >= 1, got {n}")
        cert = _certify_inductive_ggr(n)
    elif case is Case.VARIANT:
        if n < 2:
            raise ValueError(f"variant case needs n >= 2, got {n}")
        cert = _certify_inductive_variant(n)
    else:
        raise TypeError(f"case must be a Case, got {case!r}")
    result = verify(cert)
    if not result.ok:
        raise InvariantViolationError(f"inductive construction failed: {result.message}")
    return cert


# -- solver strategy ---------------------------------------------------------


def certify_solver(
    n: int, case: Case, s_candidates: Sequence[int]
) -> Certificate:
    """Certificate from exact elimination over the truncated generator set.

    Unknowns are coefficients on ``generators(n, case, .)`` restricted to the
    given dilations; each distinct exponent contributes one equation.  Free
    columns are zeroed, ordered by increasing ``s`` then increasing
    ``abs(k)``, which keeps the returned term list small.  Raises
    :class:`InfeasibleError` when the truncation cannot span ``r_n``.
    """
    candidates = sorted(set(s_candidates))
    if not candidates:
        raise ValueError("s_candidates must be nonempty")
    if any(not isinstance(s, int) or s < 1 for s in candidates):
        raise ValueError(f"s_candidates must be positive integers, got {s_candidates!r}")
    ks = admissible_k(n, case)
    columns = [(k, s, generator_poly(n, k, s)) for s in candidates for k in ks]
    target = mz_polynomial(n)

    exponents: set[int] = set(target.terms)
    for _, _, poly in columns:
        exponents.update(poly.terms)
    rows = []
    for e in sorted(exponents):
        coeffs = {
            j: poly.coeff(e) for j, (_, _, poly) in enumerate(columns) if poly.coeff(e)
        }
        rows.append((coeffs, target.coeff(e)))
    solution = solve_sparse_exact(rows, len(columns))
    if solution is None:
        raise InfeasibleError(
            f"generators with s in {candidates} do not span r_{n} ({case.value});"
            " widen s_candidates"
        )
    terms = tuple(
        Term(k, s, c) for (k, s, _), c in zip(columns, solution) if c
    )
    cert = Certificate(n, case, terms)
    result = verify(cert)
    if not result.ok:
        raise InvariantViolationError(f"solver produced a bad certificate: {result.message}")
    return cert


def default_s_candidates(n: int) -> tuple[int, ...]:
    """Dyadic dilations ``1, 2, 4, ..., 2**(n-1)``: all the induction ever uses."""
    return tuple(2 ** i for i in range(max(n, 1)))


def certify(
    n: int,
    case: Case,
    strategy: str = "inductive",
    s_candidates: Optional[Sequence[int]] = None,
) -> Certificate:
    """Front door over both strategies.

    The solver defaults to the dyadic dilations and, should those ever fail
    to span, retries once with every integer dilation up to ``2**(n-1)``.
    """
    if strategy == "inductive":
        return certify_inductive(n, case)
    if strategy != "solver":
        raise ValueError(f"unknown strategy {strategy!r} (expected 'inductive' or 'solver')")
    if s_candidates is not None:
        return certify_solver(n, case, s_candidates)
    try:
        return certify_solver(n, case, default_s_candidates(n))
    except InfeasibleError:
        return certify_solver(n, case, range(1, 2 ** (n - 1) + 1))


# -- scheme-level identity ----------------------------------------------------


@dataclass(frozen=True)
class SchemeIdentity:
    """Both sides of ``R_n(h) = sum coeff * Delta_k(s*h)`` as schemes."""

    n: int
    case: Case
    terms: tuple[Term, ...]
    lhs: DifferenceScheme
    rhs: DifferenceScheme
    equal: bool

    def render(self) -> str:
        parts: list[str] = []
        for k, s, coeff in self.terms:
            mag = abs(coeff)
            body = f"Delta_{k}(h)" if s == 1 else f"Delta_{k}({s}h)"
            if mag != 1:
                body = f"{mag}*{body}"
            if not parts:
                parts.append(body if coeff > 0 else f"-{body}")
            else:
                parts.append(f" + {body}" if coeff > 0 else f" - {body}")
        return f"R_{self.n}(h) = " + "".join(parts)


def certificate_identity(cert: Certificate) -> SchemeIdentity:
    """Scheme-level restatement of a verified certificate.

    Rejects unverified certificates: the difference-scheme identity is only
    meaningful once the polynomial identity holds.
    """
    result = verify(cert)
    if not result.ok:
        raise ValueError(f"certificate does not verify: {result.message}")
    lhs = mz_difference(cert.n)
    rhs = linear_combination(
        (coeff, s, ggr_difference(cert.n, k)) for k, s, coeff in cert.terms
    )
    return SchemeIdentity(cert.n, cert.case, cert.terms, lhs, rhs, lhs == rhs)


# -- JSON interchange ---------------------------------------------------------


def certificate_to_json_dict(cert: Certificate) -> dict:
    return {
        "n": cert.n,
        "case": cert.case.value,
        "terms": [{"k": t.k, "s": t.s, "coeff": str(t.coeff)} for t in cert.terms],
        "generator_convention": GENERATOR_CONVENTION,
        "target": TARGET_NAME,
    }


def dumps_certificate(cert: Certificate) -> str:
    """Canonical JSON: fixed key order, terms sorted by (s, k), lowest terms."""
    return json.dumps(certificate_to_json_dict(cert), indent=2) + "\n"


def _expect_int(value: object, field: str) -> int:
    if not isinstance(value, int) or isinstance(value, bool):
        raise CertificateFormatError(field, f"expected an integer, got {value!r}")
    return value


def parse_certificate(source: str | dict) -> Certificate:
    """Strict reader for the interchange format; errors name the bad field."""
    if isinstance(source, str):
        try:
            payload = json.loads(source)
        except json.JSONDecodeError as exc:
            raise CertificateFormatError("(document)", f"invalid JSON: {exc}") from exc
    else:
        payload = source
    if not isinstance(payload, dict):
        raise CertificateFormatError("(document)", "expected a JSON object")
    expected_keys = {"n", "case", "terms", "generator_convention", "target"}
    unknown = sorted(set(payload) - expected_keys)
    if unknown:
        raise CertificateFormatError(unknown[0], "unknown field")
    missing = sorted(expected_keys - set(payload))
    if missing:
        raise CertificateFormatError(missing[0], "missing field")

    n = _expect_int(payload["n"], "n")
    if n < 1:
        raise CertificateFormatError("n", f"must be >= 1, got {n}")
    if not isinstance(payload["case"], str):
        raise CertificateFormatError("case", f"expected a string, got {payload['case']!r}")
    try:
        case = Case.parse(payload["case"])
    except ValueError as exc:
        raise CertificateFormatError("case", str(exc)) from exc
    if payload["generator_convention"] != GENERATOR_CONVENTION:
        raise CertificateFormatError(
            "generator_convention", f"expected {GENERATOR_CONVENTION!r}"
        )
    if payload["target"] != TARGET_NAME:
        raise CertificateFormatError("target", f"expected {TARGET_NAME!r}")
    raw_terms = payload["terms"]
    if not isinstance(raw_terms, list):
        raise CertificateFormatError("terms", "expected a list")

    terms: list[Term] = []
    for i, entry in enumerate(raw_terms):
        where = f"terms[{i}]"
        if not isinstance(entry, dict):
            raise CertificateFormatError(where, "expected an object")
        unknown = sorted(set(entry) - {"k", "s", "coeff"})
        if unknown:
            raise CertificateFormatError(f"{where}.{unknown[0]}", "unknown field")
        for key in ("k", "s", "coeff"):
            if key not in entry:
                raise CertificateFormatError(f"{where}.{key}", "missing field")
        k = _expect_int(entry["k"], f"{where}.k")
        s = _expect_int(entry["s"], f"{where}.s")
        if s < 1:
            raise CertificateFormatError(f"{where}.s", f"must be >= 1, got {s}")
        raw_coeff = entry["coeff"]
        if not isinstance(raw_coeff, str):
            raise CertificateFormatError(
                f"{where}.coeff", f"expected a fraction string, got {raw_coeff!r}"
            )
        try:
            coeff = Fraction(raw_coeff)
        except (ValueError, ZeroDivisionError) as exc:
            raise CertificateFormatError(f"{where}.coeff", str(exc)) from exc
        if coeff == 0:
            raise CertificateFormatError(f"{where}.coeff", "must be nonzero")
        terms.append(Term(k, s, coeff))

    try:
        return Certificate(n, case, tuple(terms))
    except ValueError as exc:
        raise CertificateFormatError("terms", str(exc)) from exc
