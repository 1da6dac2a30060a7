"""Dense Gaussian elimination over any field's raw API."""

from __future__ import annotations

from itertools import combinations
from typing import List, Optional, Sequence, Tuple


def row_echelon(F, rows: Sequence[Sequence]) -> Tuple[List[list], List[int]]:
    """Reduced row echelon form and the pivot columns."""
    M = [list(r) for r in rows]
    if not M:
        return M, []
    ncols = len(M[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(M)) if not F.is_zero(M[i][c])), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = F.inv(M[r][c])
        M[r] = [F.mul(x, inv) for x in M[r]]
        for i in range(len(M)):
            if i != r and not F.is_zero(M[i][c]):
                f = M[i][c]
                M[i] = [F.sub(a, F.mul(f, b)) for a, b in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == len(M):
            break
    return M, pivots


def rank(F, rows) -> int:
    return len(row_echelon(F, rows)[1])


def det(F, rows):
    M = [list(r) for r in rows]
    n = len(M)
    result = F.one
    for c in range(n):
        piv = next((i for i in range(c, n) if not F.is_zero(M[i][c])), None)
        if piv is None:
            return F.zero
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            result = F.neg(result)
        result = F.mul(result, M[c][c])
        inv = F.inv(M[c][c])
        for i in range(c + 1, n):
            if not F.is_zero(M[i][c]):
                f = F.mul(M[i][c], inv)
                M[i] = [F.sub(a, F.mul(f, b)) for a, b in zip(M[i], M[c])]
    return result


def inverse(F, rows):
    n = len(rows)
    aug = [list(r) + [F.one if i == j else F.zero for j in range(n)] for i, r in enumerate(rows)]
    M, piv = row_echelon(F, aug)
    if piv[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in M]


def nonzero_minor(F, rows) -> Optional[Tuple[Tuple[int, ...], object]]:
    """Columns and value of the first nonvanishing maximal (s x s) minor."""
    s = len(rows)
    ncols = len(rows[0]) if rows else 0
    for cols in combinations(range(ncols), s):
        d = det(F, [[r[c] for c in cols] for r in rows])
        if not F.is_zero(d):
            return cols, d
    return None


def complete_to_basis(F, rows) -> List[list]:
    """Append unit rows so that the (full row rank) matrix becomes invertible."""
    M = [list(r) for r in rows]
    n = len(M[0])
    for j in range(n):
        if len(M) == n:
            break
        e = [F.one if k == j else F.zero for k in range(n)]
        if rank(F, M + [e]) > len(M):
            M.append(e)
    return M
