from __future__ import annotations

from fractions import Fraction


def solve_unique(rows: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction] | None:
    """Exact Gauss-Jordan elimination; None unless the system has exactly one solution."""
    m = len(rows)
    ncols = len(rows[0]) if rows else 0
    a = [list(r) + [b] for r, b in zip(rows, rhs)]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, m) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        lead = a[r][c]
        if lead != 1:
            a[r] = [x / lead for x in a[r]]
        for i in range(m):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                ai, ar = a[i], a[r]
                a[i] = [x - f * y for x, y in zip(ai, ar)]
        pivots.append(c)
        r += 1
        if r == m:
            break
    if len(pivots) < ncols:
        return None
    for i in range(r, m):
        if a[i][ncols] != 0:
            return None
    sol = [Fraction(0)] * ncols
    for i, c in enumerate(pivots):
        sol[c] = a[i][ncols]
    return sol
