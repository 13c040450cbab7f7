"""Exact linear algebra over the rationals.

Dense matrices as lists of Fraction rows.  Elimination is plain
division-based Gauss-Jordan with a fixed pivoting rule (first row with a
nonzero entry, columns left to right), so every result is deterministic;
at the sizes appearing here (a few hundred rows, entries of tiny height)
fraction growth is a non-issue.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm


def rref(rows):
    """Reduced row echelon form.

    Returns (reduced, pivots): the nonzero rows of the reduced matrix and
    the pivot column of each.  Input rows are not modified.
    """
    mat = [[Fraction(x) for x in row] for row in rows]
    if not mat:
        return [], []
    ncols = len(mat[0])
    assert all(len(row) == ncols for row in mat)
    pivots = []
    rank_so_far = 0
    for col in range(ncols):
        pivot_row = None
        for i in range(rank_so_far, len(mat)):
            if mat[i][col]:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        mat[rank_so_far], mat[pivot_row] = mat[pivot_row], mat[rank_so_far]
        inv = mat[rank_so_far][col]
        if inv != 1:
            mat[rank_so_far] = [x / inv for x in mat[rank_so_far]]
        lead = mat[rank_so_far]
        for i in range(len(mat)):
            if i != rank_so_far and mat[i][col]:
                factor = mat[i][col]
                mat[i] = [a - factor * b for a, b in zip(mat[i], lead)]
        pivots.append(col)
        rank_so_far += 1
        if rank_so_far == len(mat):
            break
    return mat[:rank_so_far], pivots


def rank(rows) -> int:
    return len(rref(rows)[0])


def nullspace(rows, ncols: int):
    """Deterministic kernel basis of the linear map given by the rows.

    One basis vector per free column, carrying 1 there; vectors are
    ordered by their free column.
    """
    reduced, pivots = rref(rows)
    assert all(len(row) == ncols for row in rows)
    pivot_set = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        vec = [Fraction(0)] * ncols
        vec[free] = Fraction(1)
        for row, p in zip(reduced, pivots):
            vec[p] = -row[free]
        basis.append(vec)
    return basis


def reduce_vector(vec, reduced, pivots):
    """Remainder of vec after clearing its pivot coordinates with the
    given reduced rows; the remainder is supported on free columns."""
    out = [Fraction(x) for x in vec]
    for row, p in zip(reduced, pivots):
        if out[p]:
            factor = out[p]
            out = [a - factor * b for a, b in zip(out, row)]
    return out


def in_span(vec, reduced, pivots) -> bool:
    return not any(reduce_vector(vec, reduced, pivots))


def same_row_space(rows_a, rows_b, ncols: int) -> bool:
    if not rows_a and not rows_b:
        return True
    pad = [[Fraction(0)] * ncols]
    ra = rref(list(rows_a) or pad)
    rb = rref(list(rows_b) or pad)
    return ra == rb


def primitive_integer_vector(vec):
    """Scale a rational vector to coprime integers with the first nonzero
    entry positive."""
    fracs = [Fraction(x) for x in vec]
    denominator = lcm(*(f.denominator for f in fracs)) if fracs else 1
    ints = [int(f * denominator) for f in fracs]
    g = gcd(*(abs(x) for x in ints)) if any(ints) else 1
    if g > 1:
        ints = [x // g for x in ints]
    first = next((x for x in ints if x), 0)
    if first < 0:
        ints = [-x for x in ints]
    return ints
