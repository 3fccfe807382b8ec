"""Exact sparse arithmetic on Laurent polynomials with rational coefficients.

A Laurent polynomial is stored as a map from integer exponents (of either
sign) to nonzero ``fractions.Fraction`` coefficients; the empty map is the
zero polynomial.  Everything here is exact: floats are rejected outright,
and two polynomials are equal exactly when their canonical term maps agree.

The moment functional :meth:`LaurentPoly.theta_moment` computes
``sum(coeff * exponent**m)`` over the terms.  For the polynomial image of a
difference scheme this is the classical order condition: the scheme measures
an ``n``-th derivative exactly when the moments vanish below ``m = n`` and
the ``n``-th one does not.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Union

Coeff = Union[Fraction, int, str]

_ZERO = Fraction(0)


def as_fraction(value: Coeff) -> Fraction:
    """Coerce an exact value to Fraction. Floats are rejected, never rounded."""
    if isinstance(value, float):
        raise TypeError("exact coefficient expected (int, str or Fraction), got float")
    return Fraction(value)


class LaurentPoly:
    """A Laurent polynomial in one indeterminate ``t`` over the rationals.

    >>> p = LaurentPoly({1: 1, 0: -1})      # t - 1
    >>> str(p * p)
    't^2 - 2*t + 1'
    >>> str(p.substitute_power(2))
    't^2 - 1'
    >>> (p * p).theta_moment(2)
    Fraction(2, 1)
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[int, Coeff] | Iterable[tuple[int, Coeff]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[int, Fraction] = {}
        for exponent, coeff in items:
            if not isinstance(exponent, int):
                raise TypeError(f"exponent must be an integer, got {exponent!r}")
            c = acc.get(exponent, _ZERO) + as_fraction(coeff)
            if c:
                acc[exponent] = c
            else:
                acc.pop(exponent, None)
        self._terms = acc

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls) -> "LaurentPoly":
        return cls()

    @classmethod
    def one(cls) -> "LaurentPoly":
        return cls({0: 1})

    @classmethod
    def monomial(cls, exponent: int, coeff: Coeff = 1) -> "LaurentPoly":
        """The single term ``coeff * t**exponent``."""
        return cls({exponent: coeff})

    # -- basic queries -----------------------------------------------------

    @property
    def terms(self) -> dict[int, Fraction]:
        """Copy of the canonical exponent -> coefficient map."""
        return dict(self._terms)

    def coeff(self, exponent: int) -> Fraction:
        return self._terms.get(exponent, _ZERO)

    def is_zero(self) -> bool:
        return not self._terms

    def support(self) -> tuple[int, ...]:
        """Exponents with nonzero coefficient, ascending."""
        return tuple(sorted(self._terms))

    def min_exponent(self) -> int:
        if not self._terms:
            raise ValueError("zero polynomial has no exponents")
        return min(self._terms)

    def max_exponent(self) -> int:
        if not self._terms:
            raise ValueError("zero polynomial has no exponents")
        return max(self._terms)

    # -- ring operations ---------------------------------------------------

    def __add__(self, other: "LaurentPoly | int | Fraction") -> "LaurentPoly":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        acc = dict(self._terms)
        for e, c in other._terms.items():
            v = acc.get(e, _ZERO) + c
            if v:
                acc[e] = v
            else:
                acc.pop(e, None)
        return _raw(acc)

    __radd__ = __add__

    def __neg__(self) -> "LaurentPoly":
        return _raw({e: -c for e, c in self._terms.items()})

    def __sub__(self, other: "LaurentPoly | int | Fraction") -> "LaurentPoly":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: "LaurentPoly | int | Fraction") -> "LaurentPoly":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other: "LaurentPoly | int | Fraction") -> "LaurentPoly":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        acc: dict[int, Fraction] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = e1 + e2
                v = acc.get(e, _ZERO) + c1 * c2
                if v:
                    acc[e] = v
                else:
                    acc.pop(e, None)
        return _raw(acc)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "LaurentPoly":
        if not isinstance(n, int) or n < 0:
            raise ValueError("only nonnegative integer powers are defined")
        result = LaurentPoly.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def scale(self, coeff: Coeff) -> "LaurentPoly":
        """Multiply every coefficient by an exact scalar."""
        c = as_fraction(coeff)
        if not c:
            return LaurentPoly.zero()
        return _raw({e: v * c for e, v in self._terms.items()})

    def substitute_power(self, s: int) -> "LaurentPoly":
        """Replace ``t`` by ``t**s`` (every exponent scaled by ``s``), ``s >= 1``."""
        if not isinstance(s, int) or s < 1:
            raise ValueError(f"substitution power must be a positive integer, got {s!r}")
        if s == 1:
            return self
        return _raw({e * s: c for e, c in self._terms.items()})

    # -- functionals -------------------------------------------------------

    def theta_moment(self, m: int) -> Fraction:
        """The order-``m`` moment ``sum(coeff * exponent**m)``, with ``0**0 == 1``."""
        if not isinstance(m, int) or m < 0:
            raise ValueError(f"moment order must be a nonnegative integer, got {m!r}")
        total = _ZERO
        for e, c in self._terms.items():
            total += c * (e ** m)
        return total

    def evaluate(self, x: Coeff) -> Fraction:
        """Exact value at a rational point; ``x = 0`` needs nonnegative exponents."""
        point = as_fraction(x)
        if point == 0 and self._terms and self.min_exponent() < 0:
            raise ZeroDivisionError("cannot evaluate negative exponents at 0")
        total = _ZERO
        for e, c in self._terms.items():
            if point == 0:
                if e == 0:
                    total += c
                continue
            total += c * point ** e
        return total

    # -- comparisons and rendering -----------------------------------------

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = _coerce(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts: list[str] = []
        for e in sorted(self._terms, reverse=True):
            c = self._terms[e]
            mag = abs(c)
            if e == 0:
                body = str(mag)
            else:
                power = "t" if e == 1 else f"t^{e}"
                body = power if mag == 1 else f"{mag}*{power}"
            if not parts:
                parts.append(body if c > 0 else f"-{body}")
            else:
                parts.append(f" + {body}" if c > 0 else f" - {body}")
        return "".join(parts)

    def __repr__(self) -> str:
        return f"LaurentPoly('{self}')"


def _raw(terms: dict[int, Fraction]) -> LaurentPoly:
    """Wrap an already-canonical term map without re-validation."""
    p = LaurentPoly.__new__(LaurentPoly)
    p._terms = terms
    return p


def _coerce(value: object) -> "LaurentPoly":
    if isinstance(value, LaurentPoly):
        return value
    if isinstance(value, (int, Fraction)):
        return LaurentPoly({0: value}) if value else LaurentPoly.zero()
    return NotImplemented
