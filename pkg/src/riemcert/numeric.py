"""Difference quotients on concrete test functions.

Evaluates ``sum(c_j * f(c + b_j*h)) / h**n`` for a scheme of order ``n`` and
watches it as ``h`` shrinks.  Two channels:

* exact: polynomial test functions with rational center and step evaluate in
  ``Fraction`` arithmetic with zero rounding error;
* float: everything else runs in double precision, and the reports say so --
  quotients divide by ``h**n``, so float results for deep ``h`` and large
  ``n`` carry an amplified rounding error and get flagged rather than trusted.

For a scheme whose image has moment ``theta_n``, the quotient on a smooth
function tends to ``theta_n / n!`` times the ``n``-th derivative at the
center; the demo normalizes by that factor so every table estimates the same
derivative and the tables can be compared.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from .certificates import Case, Certificate, admissible_k, certify_inductive
from .differences import (
    DifferenceScheme,
    ggr_difference,
    linear_combination,
    mz_difference,
    mz_polynomial,
)

Number = Union[Fraction, int, float]

# float-channel guard: below this step, schemes of order >= 6 lose too many
# bits to cancellation for the quotient to mean anything
UNRELIABLE_ORDER = 6
UNRELIABLE_STEP = 1e-3


@dataclass(frozen=True)
class TestFunction:
    """A tagged test function: poly | exp | sin | abs_pow | osc.

    Only ``poly`` evaluates exactly; its coefficients are rational, lowest
    degree first.  ``abs_pow`` is ``abs(x)**alpha`` (alpha > 0); ``osc`` is
    ``x**m * sin(x**-p)`` with the value 0 pinned at ``x = 0``.
    """

    kind: str
    coeffs: tuple[Fraction, ...] = ()
    alpha: float = 0.0
    m: int = 0
    p: int = 1

    @classmethod
    def poly(cls, coeffs: Sequence[Union[Fraction, int, str]]) -> "TestFunction":
        if any(isinstance(c, float) for c in coeffs):
            raise ValueError("poly coefficients must be exact rationals")
        return cls("poly", coeffs=tuple(Fraction(c) for c in coeffs))

    @classmethod
    def exp(cls) -> "TestFunction":
        return cls("exp")

    @classmethod
    def sin(cls) -> "TestFunction":
        return cls("sin")

    @classmethod
    def abs_pow(cls, alpha: float) -> "TestFunction":
        alpha = float(alpha)
        if not alpha > 0:
            raise ValueError(f"abs_pow exponent must be positive, got {alpha}")
        return cls("abs_pow", alpha=alpha)

    @classmethod
    def osc(cls, m: int, p: int) -> "TestFunction":
        if not (isinstance(m, int) and m >= 1 and isinstance(p, int) and p >= 1):
            raise ValueError(f"osc parameters must be positive integers, got m={m!r}, p={p!r}")
        return cls("osc", m=m, p=p)

    @classmethod
    def parse(cls, spec: str) -> "TestFunction":
        """Parse a CLI spec: poly:c0,c1,... | exp | sin | abs_pow:alpha | osc:m,p."""
        name, _, args = spec.partition(":")
        try:
            if name == "poly":
                if not args:
                    raise ValueError("poly needs a coefficient list")
                return cls.poly([Fraction(c) for c in args.split(",")])
            if name == "exp":
                return cls.exp()
            if name == "sin":
                return cls.sin()
            if name == "abs_pow":
                return cls.abs_pow(float(args))
            if name == "osc":
                m_text, _, p_text = args.partition(",")
                return cls.osc(int(m_text), int(p_text))
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"bad function spec {spec!r}: {exc}") from exc
        raise ValueError(f"unknown function {name!r} (poly|exp|sin|abs_pow|osc)")

    @property
    def is_exact(self) -> bool:
        return self.kind == "poly"

    def describe(self) -> str:
        if self.kind == "poly":
            return "poly:" + ",".join(str(c) for c in self.coeffs)
        if self.kind == "abs_pow":
            return f"abs_pow:{self.alpha}"
        if self.kind == "osc":
            return f"osc:{self.m},{self.p}"
        return self.kind

    def __call__(self, x: Number) -> Union[Fraction, float]:
        if self.kind == "poly":
            if isinstance(x, float):
                total_f = 0.0
                for c in reversed(self.coeffs):
                    total_f = total_f * x + float(c)
                return total_f
            total = Fraction(0)
            point = Fraction(x)
            for c in reversed(self.coeffs):
                total = total * point + c
            return total
        xf = float(x)
        if self.kind == "exp":
            return math.exp(xf)
        if self.kind == "sin":
            return math.sin(xf)
        if self.kind == "abs_pow":
            return abs(xf) ** self.alpha
        # osc: x**m * sin(x**-p), pinned to 0 at the origin
        if xf == 0.0:
            return 0.0
        return xf ** self.m * math.sin(xf ** -self.p)


def _is_exact_number(x: Number) -> bool:
    return isinstance(x, (int, Fraction)) and not isinstance(x, bool)


def scheme_apply(
    scheme: DifferenceScheme, fn: TestFunction, center: Number, h: Number
) -> Union[Fraction, float]:
    """The quotient numerator ``sum(c_j * f(center + b_j*h))``, channel-aware."""
    exact = fn.is_exact and _is_exact_number(center) and _is_exact_number(h)
    if exact:
        c0 = Fraction(center)
        step = Fraction(h)
        total = Fraction(0)
        for node, coeff in scheme.terms:
            total += coeff * fn(c0 + node * step)
        return total
    c0f = float(center)
    hf = float(h)
    total_f = 0.0
    for node, coeff in scheme.terms:
        total_f += float(coeff) * fn(c0f + node * hf)
    return total_f


def quotient(
    scheme: DifferenceScheme, fn: TestFunction, center: Number, h: Number
) -> Union[Fraction, float]:
    """The difference quotient ``scheme_apply(...) / h**order``.

    Exact ``Fraction`` when the function is polynomial and center/step are
    rational; double-precision float otherwise.
    """
    if scheme.order < 1:
        raise ValueError("quotients need a scheme of order >= 1")
    if h == 0:
        raise ValueError("step h must be nonzero")
    numerator = scheme_apply(scheme, fn, center, h)
    if isinstance(numerator, Fraction):
        return numerator / Fraction(h) ** scheme.order
    return numerator / float(h) ** scheme.order


def float_error_bound(
    scheme: DifferenceScheme, fn: TestFunction, center: Number, h: Number
) -> float:
    """Crude rounding bound for a float-channel quotient.

    One ulp per sampled term, summed in magnitude, then amplified by the
    ``h**-order`` division the quotient performs.
    """
    c0 = float(center)
    hf = float(h)
    magnitude = sum(
        abs(float(coeff) * fn(c0 + node * hf)) for node, coeff in scheme.terms
    )
    return magnitude * sys.float_info.epsilon / abs(hf) ** scheme.order


@dataclass(frozen=True)
class QuotientTable:
    """Rows of (h, quotient) for one scheme, h strictly decreasing."""

    scheme: DifferenceScheme
    center: Number
    rows: tuple[tuple[Number, Union[Fraction, float]], ...]
    exact: bool
    label: str = ""
    unreliable: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        steps = [row[0] for row in self.rows]
        if any(s <= 0 for s in steps):
            raise ValueError("steps must be positive")
        if any(b <= a for a, b in zip(steps, steps[1:])):
            raise ValueError("steps must be strictly decreasing")

    def last_quotient(self) -> Union[Fraction, float]:
        return self.rows[-1][1]

    def to_json_dict(self) -> dict:
        def num(x: Number) -> Union[str, float]:
            return str(x) if self.exact else float(x)

        payload = {
            "scheme": str(self.scheme),
            "rows": [{"h": num(h), "q": num(q)} for h, q in self.rows],
            "exact": self.exact,
        }
        if self.label:
            payload["label"] = self.label
        if self.unreliable:
            payload["unreliable_rows"] = list(self.unreliable)
        return payload

    def render_text(self) -> str:
        title = self.label or str(self.scheme)
        lines = [f"{title}  [{'exact' if self.exact else 'float'}]"]
        for i, (h, q) in enumerate(self.rows):
            flag = "  (unreliable)" if i in self.unreliable else ""
            if self.exact:
                lines.append(f"  h = {h!s:<14} q = {q}{flag}")
            else:
                lines.append(f"  h = {float(h):<14.8g} q = {float(q):.12g}{flag}")
        return "\n".join(lines)


def quotient_table(
    scheme: DifferenceScheme,
    fn: TestFunction,
    center: Number,
    h0: Number,
    ratio: Number,
    steps: int,
    label: str = "",
) -> QuotientTable:
    """Quotients at ``h0 * ratio**i`` for ``i = 0..steps-1``."""
    if not isinstance(steps, int) or steps < 1:
        raise ValueError(f"steps must be a positive integer, got {steps!r}")
    if not h0 > 0:
        raise ValueError(f"h0 must be positive, got {h0!r}")
    if not 0 < ratio < 1:
        raise ValueError(f"ratio must lie strictly between 0 and 1, got {ratio!r}")
    exact = fn.is_exact and all(_is_exact_number(x) for x in (center, h0, ratio))
    rows: list[tuple[Number, Union[Fraction, float]]] = []
    flagged: list[int] = []
    h: Number = Fraction(h0) if exact else float(h0)
    r: Number = Fraction(ratio) if exact else float(ratio)
    for i in range(steps):
        rows.append((h, quotient(scheme, fn, center, h)))
        if not exact and scheme.order >= UNRELIABLE_ORDER and h < UNRELIABLE_STEP:
            flagged.append(i)
        h = h * r
    return QuotientTable(scheme, center, tuple(rows), exact, label, tuple(flagged))


@dataclass(frozen=True)
class DemoReport:
    """Convergence tables for every Riemann difference in the case's range,
    the MZ difference, and the certificate-combined scheme, all normalized to
    estimate the same derivative."""

    n: int
    case: Case
    function: TestFunction
    center: Number
    certificate: Certificate
    tables: tuple[QuotientTable, ...]
    estimates: tuple[tuple[str, float], ...]
    agree: bool
    tolerance: float

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "case": self.case.value,
            "function": self.function.describe(),
            "center": str(self.center),
            "tables": [t.to_json_dict() for t in self.tables],
            "estimates": {label: value for label, value in self.estimates},
            "agree": self.agree,
            "tolerance": self.tolerance,
        }

    def render_text(self) -> str:
        lines = [
            f"demo: n={self.n}, case={self.case.value}, "
            f"f={self.function.describe()}, c={self.center}",
        ]
        for table in self.tables:
            lines.append("")
            lines.append(table.render_text())
        lines.append("")
        lines.append("normalized derivative estimates (last row of each table):")
        for label, value in self.estimates:
            lines.append(f"  {label:<10} {value:.12g}")
        verdict = "agree" if self.agree else "DISAGREE"
        lines.append(f"tables {verdict} within tolerance {self.tolerance}")
        return "\n".join(lines)


def demo_ggr(
    n: int,
    fn: TestFunction,
    center: Number,
    h0: Number = Fraction(1, 10),
    ratio: Number = Fraction(1, 2),
    steps: int = 8,
    case: Case = Case.GGR,
    tolerance: float = 1e-2,
) -> DemoReport:
    """Tables for every ``Delta_k`` in the case's range, ``R_n``, and the
    certificate-combined scheme, with an agreement flag.

    Each table's last quotient is divided by its scheme's ``theta_n / n!``
    so all estimates target the plain ``n``-th derivative; agreement means
    every estimate sits within ``tolerance`` (relative to the MZ estimate)
    of the MZ table's estimate.
    """
    if not isinstance(n, int) or n < 2:
        raise ValueError(f"demo needs n >= 2, got {n!r}")
    cert = certify_inductive(n, case)
    combined = linear_combination(
        (coeff, s, ggr_difference(n, k)) for k, s, coeff in cert.terms
    )
    mz_norm = Fraction(mz_polynomial(n).theta_moment(n), math.factorial(n))

    tables: list[QuotientTable] = []
    for k in admissible_k(n, case):
        tables.append(
            quotient_table(ggr_difference(n, k), fn, center, h0, ratio, steps, f"Delta_{k}")
        )
    tables.append(quotient_table(mz_difference(n), fn, center, h0, ratio, steps, f"R_{n}"))
    tables.append(quotient_table(combined, fn, center, h0, ratio, steps, "combined"))

    estimates: list[tuple[str, float]] = []
    for table in tables:
        norm = mz_norm if table.label in (f"R_{n}", "combined") else Fraction(1)
        estimates.append((table.label, float(table.last_quotient()) / float(norm)))
    reference = dict(estimates)[f"R_{n}"]
    span = max(1.0, abs(reference))
    agree = all(abs(value - reference) <= tolerance * span for _, value in estimates)
    return DemoReport(
        n, case, fn, center, cert, tuple(tables), tuple(estimates), agree, tolerance
    )
