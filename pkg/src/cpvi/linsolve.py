"""Exact kernel computation for sparse homogeneous linear systems over Q.

Rows are sparse dicts {column: coefficient}.  Elimination is fraction
free: rows are scaled to integers up front and updates use the
cross-multiplication  r' = p*r - q*r_p  followed by content removal, so
no rational arithmetic happens until back-substitution.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm


def _integerize(row: dict[int, Fraction | int]) -> dict[int, int]:
    denoms = 1
    for c in row.values():
        f = Fraction(c)
        denoms = lcm(denoms, f.denominator)
    out = {}
    for col, c in row.items():
        f = Fraction(c) * denoms
        if f:
            out[col] = int(f)
    g = 0
    for v in out.values():
        g = gcd(g, v)
    if g > 1:
        out = {col: v // g for col, v in out.items()}
    return out


def _eliminate(row: dict[int, int], pivots: dict[int, dict[int, int]]) -> dict[int, int]:
    # elimination against one pivot can fill in later pivot columns, so
    # keep sweeping until the row is clear of all of them
    while True:
        hits = set(row) & set(pivots)
        if not hits:
            break
        pcol = min(hits)
        q = row[pcol]
        prow = pivots[pcol]
        p = prow[pcol]
        new = {}
        for col in set(row) | set(prow):
            v = p * row.get(col, 0) - q * prow.get(col, 0)
            if v:
                new[col] = v
        row = new
    if row:
        g = 0
        for v in row.values():
            g = gcd(g, v)
        if g > 1:
            row = {col: v // g for col, v in row.items()}
    return row


def kernel_basis(rows, ncols: int) -> list[list[Fraction]]:
    """Basis of {v : A v = 0} for the sparse row collection A.

    Returns one vector per free column, normalized to primitive integer
    entries with the free coordinate positive.
    """
    pivots: dict[int, dict[int, int]] = {}
    for raw in rows:
        row = _integerize(raw)
        row = _eliminate(row, pivots)
        if row:
            pivots[min(row)] = row

    free_cols = [c for c in range(ncols) if c not in pivots]
    basis: list[list[Fraction]] = []
    for fc in free_cols:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for pcol in sorted(pivots, reverse=True):
            prow = pivots[pcol]
            s = sum((Fraction(c) * v[col] for col, c in prow.items() if col != pcol),
                    start=Fraction(0))
            v[pcol] = -s / prow[pcol]
        # scale to primitive integer form
        denoms = 1
        for entry in v:
            denoms = lcm(denoms, entry.denominator)
        ints = [int(entry * denoms) for entry in v]
        g = 0
        for entry in ints:
            g = gcd(g, entry)
        if g > 1:
            ints = [entry // g for entry in ints]
        if ints[fc] < 0:
            ints = [-entry for entry in ints]
        basis.append([Fraction(entry) for entry in ints])
    return basis


def rank(rows, ncols: int) -> int:
    pivots: dict[int, dict[int, int]] = {}
    for raw in rows:
        row = _integerize(raw)
        row = _eliminate(row, pivots)
        if row:
            pivots[min(row)] = row
    return len(pivots)
