"""Exact integer/rational linear algebra for small dense matrices.

Everything here works on lists of lists of ``int`` or ``Fraction`` and never
rounds. Elimination is fraction-free (Bareiss) so intermediate entries stay
integers when the input is integral.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import List, Sequence

Matrix = List[List[int]]


def _integral(rows: Sequence[Sequence]) -> Matrix:
    """Scale each row to integers (rows of Fractions are cleared by the lcm)."""
    out = []
    for row in rows:
        den = 1
        for v in row:
            if isinstance(v, Fraction):
                den = den * v.denominator // gcd(den, v.denominator)
        out.append([int(Fraction(v) * den) for v in row])
    return out


def bareiss_echelon(rows: Sequence[Sequence]) -> tuple[Matrix, list[int]]:
    """Fraction-free row echelon form.

    Returns the echelon matrix (integer entries) and the list of pivot
    columns. Row scaling does not change the row space, so the echelon form
    spans the same space as ``rows``.
    """
    m = _integral(rows)
    n_rows = len(m)
    n_cols = len(m[0]) if m else 0
    pivots: list[int] = []
    prev = 1
    r = 0
    for c in range(n_cols):
        if r == n_rows:
            break
        piv = next((i for i in range(r, n_rows) if m[i][c] != 0), None)
        if piv is None:
            continue
        if piv != r:
            m[r], m[piv] = m[piv], m[r]
        p = m[r][c]
        for i in range(r + 1, n_rows):
            a = m[i][c]
            row_i = m[i]
            row_r = m[r]
            for j in range(c, n_cols):
                # exact division is guaranteed by Sylvester's identity
                row_i[j] = (p * row_i[j] - a * row_r[j]) // prev
            for j in range(c):
                row_i[j] = 0
        prev = p
        pivots.append(c)
        r += 1
    return m, pivots


def rank(rows: Sequence[Sequence]) -> int:
    if not rows or not rows[0]:
        return 0
    return len(bareiss_echelon(rows)[1])


def nullspace(rows: Sequence[Sequence], n_cols: int | None = None) -> list[list[Fraction]]:
    """Basis of the right kernel, one vector per free column.

    Each basis vector has a 1 in its free column and zeros in the other free
    columns (reduced-row-echelon convention).
    """
    if n_cols is None:
        n_cols = len(rows[0])
    if not rows:
        return [[Fraction(int(i == j)) for i in range(n_cols)] for j in range(n_cols)]
    ech, pivots = bareiss_echelon(rows)
    # reduce to RREF over the rationals
    red = [[Fraction(v) for v in row] for row in ech[: len(pivots)]]
    for k in range(len(pivots) - 1, -1, -1):
        c = pivots[k]
        p = red[k][c]
        red[k] = [v / p for v in red[k]]
        for i in range(k):
            a = red[i][c]
            if a:
                red[i] = [vi - a * vk for vi, vk in zip(red[i], red[k])]
    free = [c for c in range(n_cols) if c not in pivots]
    basis = []
    for fc in free:
        vec = [Fraction(0)] * n_cols
        vec[fc] = Fraction(1)
        for k, c in enumerate(pivots):
            vec[c] = -red[k][fc]
        basis.append(vec)
    return basis


def primitive_integer_vector(vec: Sequence[Fraction]) -> list[int]:
    """Scale a rational vector to coprime integers, keeping its direction."""
    den = 1
    for v in vec:
        v = Fraction(v)
        den = den * v.denominator // gcd(den, v.denominator)
    ints = [int(Fraction(v) * den) for v in vec]
    g = 0
    for v in ints:
        g = gcd(g, v)
    if g == 0:
        return ints
    return [v // g for v in ints]


def same_row_space(a: Sequence[Sequence], b: Sequence[Sequence]) -> bool:
    """True iff the two matrices (same column count) span the same row space."""
    ra, rb = rank(a), rank(b)
    return ra == rb == rank(list(a) + list(b))
