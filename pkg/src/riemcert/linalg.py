"""Exact linear solving over the rationals.

One-pass sparse Gaussian elimination: rows arrive as {column: coefficient}
dicts, each is reduced against the pivot rows collected so far, and either
becomes a new pivot (normalized to leading coefficient 1) or must reduce to
``0 = 0`` for the system to stay consistent.  Free (non-pivot) variables are
set to zero, so with columns ordered by preference the solution concentrates
on the earliest columns that can carry it.

Everything is a ``fractions.Fraction``; there is no pivoting heuristic beyond
the deterministic smallest-column rule, and no rounding anywhere.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Optional

SparseRow = dict[int, Fraction]

_ZERO = Fraction(0)


def solve_sparse_exact(
    rows: Iterable[tuple[SparseRow, Fraction]], n_cols: int
) -> Optional[list[Fraction]]:
    """Solve the system given as (coefficients, rhs) rows.

    Returns one exact solution with all free variables at zero, or None if
    the system is inconsistent.  Deterministic for a fixed row order.
    """
    pivots: dict[int, tuple[SparseRow, Fraction]] = {}
    for coeffs, rhs in rows:
        row = {c: Fraction(v) for c, v in coeffs.items() if v}
        b = Fraction(rhs)
        while row:
            lead = min(row)
            hit = pivots.get(lead)
            if hit is None:
                break
            prow, prhs = hit
            factor = row.pop(lead)
            for c, v in prow.items():
                if c == lead:
                    continue
                nv = row.get(c, _ZERO) - factor * v
                if nv:
                    row[c] = nv
                else:
                    row.pop(c, None)
            b -= factor * prhs
        if not row:
            if b:
                return None
            continue
        lead = min(row)
        inv = row[lead]
        pivots[lead] = ({c: v / inv for c, v in row.items()}, b / inv)

    solution = [_ZERO] * n_cols
    for lead in sorted(pivots, reverse=True):
        prow, prhs = pivots[lead]
        value = prhs
        for c, v in prow.items():
            if c != lead:
                value -= v * solution[c]
        solution[lead] = value
    return solution
