"""Exact linear algebra over the rationals.

Gaussian elimination with exact Fraction pivoting.  The right-hand side
may carry Scalar entries (tau-Laurent values); only the matrix entries
are pivoted on, so no Scalar division is ever needed.  Pivoting order is
fixed (first nonzero in column order), which makes every solution
deterministic: free variables are set to zero.
"""

from __future__ import annotations

from fractions import Fraction

from .scalars import Scalar


def rank(matrix):
    """Rank of a list-of-rows Fraction matrix."""
    rows = [list(map(Fraction, r)) for r in matrix]
    if not rows:
        return 0
    ncols = len(rows[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        pv = rows[r][c]
        rows[r] = [x / pv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        r += 1
        if r == len(rows):
            break
    return r


def nullity(matrix, ncols):
    if not matrix:
        return ncols
    return ncols - rank(matrix)


def solve_or_certify(matrix, rhs):
    """Solve A x = b exactly, or certify unsolvability.

    A is a list of Fraction rows, b a list of Scalar (or Fraction)
    entries.  Returns ("solved", x) with x a list of Scalars (free
    variables zero), or ("certificate", y) where y is a list of
    Fractions with y^T A = 0 and y^T b != 0.
    """
    m = len(matrix)
    n = len(matrix[0]) if m else 0
    rows = [list(map(Fraction, r)) for r in matrix]
    b = [Scalar.coerce(x) for x in rhs]
    # track row operations: trans[i] expresses current row i in original rows
    trans = [[Fraction(1) if j == i else Fraction(0) for j in range(m)] for i in range(m)]

    pivots = []  # (row, col)
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        b[r], b[piv] = b[piv], b[r]
        trans[r], trans[piv] = trans[piv], trans[r]
        pv = rows[r][c]
        rows[r] = [x / pv for x in rows[r]]
        b[r] = b[r] / pv
        trans[r] = [x / pv for x in trans[r]]
        for i in range(m):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * bb for a, bb in zip(rows[i], rows[r])]
                b[i] = b[i] - b[r] * f
                trans[i] = [a - f * bb for a, bb in zip(trans[i], trans[r])]
        pivots.append((r, c))
        r += 1
        if r == m:
            break

    for i in range(r, m):
        if not b[i].is_zero():
            return "certificate", trans[i]

    x = [Scalar.zero() for _ in range(n)]
    for (ri, ci) in pivots:
        x[ci] = b[ri]
    return "solved", x


def matvec(matrix, vec):
    out = []
    for row in matrix:
        s = Scalar.zero()
        for a, v in zip(row, vec):
            if a:
                s = s + Scalar.coerce(v) * Fraction(a)
        out.append(s)
    return out


class PrecomputedSolver:
    """Row-reduce a rational matrix once, then solve for many RHS vectors.

    Equivalent to solve_or_certify for every b, but the elimination runs
    a single time; solving costs one transform-times-vector product.
    """

    def __init__(self, matrix):
        m = len(matrix)
        n = len(matrix[0]) if m else 0
        rows = [list(map(Fraction, r)) for r in matrix]
        trans = [[Fraction(1) if j == i else Fraction(0) for j in range(m)] for i in range(m)]
        pivots = []
        r = 0
        for c in range(n):
            piv = next((i for i in range(r, m) if rows[i][c] != 0), None)
            if piv is None:
                continue
            rows[r], rows[piv] = rows[piv], rows[r]
            trans[r], trans[piv] = trans[piv], trans[r]
            pv = rows[r][c]
            rows[r] = [x / pv for x in rows[r]]
            trans[r] = [x / pv for x in trans[r]]
            for i in range(m):
                if i != r and rows[i][c] != 0:
                    f = rows[i][c]
                    rows[i] = [a - f * bb for a, bb in zip(rows[i], rows[r])]
                    trans[i] = [a - f * bb for a, bb in zip(trans[i], trans[r])]
            pivots.append((r, c))
            r += 1
            if r == m:
                break
        self.m, self.n = m, n
        self.rank = r
        self.pivots = pivots
        self.trans = trans

    def solve(self, rhs):
        b = [Scalar.coerce(x) for x in rhs]
        y = []
        for i in range(self.m):
            s = Scalar.zero()
            for j, t in enumerate(self.trans[i]):
                if t:
                    s = s + b[j] * t
            y.append(s)
        for i in range(self.rank, self.m):
            if not y[i].is_zero():
                return "certificate", self.trans[i]
        x = [Scalar.zero() for _ in range(self.n)]
        for (ri, ci) in self.pivots:
            x[ci] = y[ri]
        return "solved", x
