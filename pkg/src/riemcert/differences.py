"""Generalized differences with integer nodes and their Laurent images.

A difference scheme is the finite data ``sum(c_j * f(c + b_j*h))``: a list of
(node, coefficient) pairs with pairwise-distinct integer nodes ``b_j`` and
nonzero rational coefficients ``c_j``, plus the order of the quotient it is
meant to feed (the power of ``h`` to divide by).

Sending a scheme to ``sum(c_j * t**b_j)`` is a linear isomorphism onto the
Laurent polynomials, under which dilating the step (``h -> s*h``) becomes the
exponent substitution ``t -> t**s``.  That image is where all identities in
this package are checked, exactly.

Two families matter here:

* ``ggr_difference(n, k)``: the generalized Riemann difference with nodes
  ``j - k`` and binomial coefficients, whose image is ``t**(-k) * (t-1)**n``.
* ``mz_difference(n)``: the dyadic Marcinkiewicz-Zygmund difference built by
  ``R_1(h) = f(c+h) - f(c)`` and ``R_n(h) = R_{n-1}(2h) - 2**(n-1) * R_{n-1}(h)``,
  whose image ``mz_polynomial(n)`` follows the same recursion in ``t``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Iterable, Sequence

from .laurent import Coeff, LaurentPoly, as_fraction


@dataclass(frozen=True)
class DifferenceScheme:
    """Immutable (node, coefficient) data with the intended quotient order.

    Terms are normalized to descending node order, so structurally equal
    schemes compare equal.
    """

    terms: tuple[tuple[int, Fraction], ...]
    order: int

    def __post_init__(self) -> None:
        if not isinstance(self.order, int) or self.order < 0:
            raise ValueError(f"order must be a nonnegative integer, got {self.order!r}")
        seen: set[int] = set()
        cleaned: list[tuple[int, Fraction]] = []
        for node, coeff in self.terms:
            if not isinstance(node, int):
                raise TypeError(f"node must be an integer, got {node!r}")
            c = as_fraction(coeff)
            if c == 0:
                raise ValueError(f"zero coefficient at node {node}")
            if node in seen:
                raise ValueError(f"duplicate node {node}")
            seen.add(node)
            cleaned.append((node, c))
        cleaned.sort(key=lambda term: -term[0])
        object.__setattr__(self, "terms", tuple(cleaned))

    def nodes(self) -> tuple[int, ...]:
        return tuple(node for node, _ in self.terms)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts: list[str] = []
        for node, coeff in self.terms:
            mag = abs(coeff)
            if node == 0:
                point = "c"
            elif node > 0:
                point = "c + h" if node == 1 else f"c + {node}h"
            else:
                point = "c - h" if node == -1 else f"c - {-node}h"
            body = f"f({point})" if mag == 1 else f"{mag}*f({point})"
            if not parts:
                parts.append(body if coeff > 0 else f"-{body}")
            else:
                parts.append(f" + {body}" if coeff > 0 else f" - {body}")
        return "".join(parts)


def ggr_difference(n: int, k: int) -> DifferenceScheme:
    """The order-``n`` generalized Riemann difference with node offset ``k``.

    Terms are ``((-1)**(n-j) * C(n, j), node j - k)`` for ``j = 0..n``; the
    Laurent image is ``t**(-k) * (t - 1)**n``.
    """
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"difference order must be a positive integer, got {n!r}")
    terms = tuple((j - k, Fraction((-1) ** (n - j) * comb(n, j))) for j in range(n + 1))
    return DifferenceScheme(terms, n)


def to_laurent(scheme: DifferenceScheme) -> LaurentPoly:
    """Image of the scheme under the node -> exponent isomorphism."""
    return LaurentPoly(scheme.terms)


def from_laurent(poly: LaurentPoly, order: int) -> DifferenceScheme:
    """Inverse of :func:`to_laurent`; the order is extra data the poly lacks."""
    return DifferenceScheme(tuple(poly.terms.items()), order)


def dilate(scheme: DifferenceScheme, s: int) -> DifferenceScheme:
    """Scale every node by ``s >= 1``; mirrors ``substitute_power`` on the image."""
    if not isinstance(s, int) or s < 1:
        raise ValueError(f"dilation factor must be a positive integer, got {s!r}")
    if s == 1:
        return scheme
    return DifferenceScheme(tuple((node * s, c) for node, c in scheme.terms), scheme.order)


@lru_cache(maxsize=None)
def mz_polynomial(n: int) -> LaurentPoly:
    """The Laurent image of the dyadic MZ difference, by the exact recursion.

    ``r_1 = t - 1`` and ``r_n(t) = r_{n-1}(t**2) - 2**(n-1) * r_{n-1}(t)``;
    the support stays inside ``{0, 1, 2, 4, ..., 2**(n-1)}``.
    """
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"order must be a positive integer, got {n!r}")
    if n == 1:
        return LaurentPoly({1: 1, 0: -1})
    prev = mz_polynomial(n - 1)
    return prev.substitute_power(2) - prev.scale(2 ** (n - 1))


def mz_difference(n: int) -> DifferenceScheme:
    """The dyadic MZ difference itself: ``from_laurent(mz_polynomial(n), n)``."""
    return from_laurent(mz_polynomial(n), n)


def linear_combination(
    parts: Iterable[tuple[Coeff, int, DifferenceScheme]],
) -> DifferenceScheme:
    """Combine ``sum(coeff * d(s*h))`` into one scheme.

    Each part is (coeff, dilation s, scheme); colliding nodes are merged
    exactly and zero results dropped, so equality stays structural.  The
    combined order is the largest order among the parts.
    """
    acc: dict[int, Fraction] = {}
    order = 0
    for coeff, s, scheme in parts:
        if not isinstance(s, int) or s < 1:
            raise ValueError(f"dilation factor must be a positive integer, got {s!r}")
        c = as_fraction(coeff)
        order = max(order, scheme.order)
        for node, weight in scheme.terms:
            key = node * s
            v = acc.get(key, Fraction(0)) + c * weight
            if v:
                acc[key] = v
            else:
                acc.pop(key, None)
    return DifferenceScheme(tuple(acc.items()), order)
