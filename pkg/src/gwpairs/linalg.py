"""Exact dense linear algebra over any field-like coefficient type.

Elements must support +, -, *, ``.inverse()`` and ``.is_zero()``.  Both
GaussianRational and RationalFunction qualify, so the same elimination
code serves scalar systems and systems over Q[i](u).
"""

from .errors import SingularSystemError

__all__ = ["nullspace", "solve_square", "invert_matrix"]


def _eliminate(rows, ncols):
    """Row-reduce in place; returns list of pivot column indices."""
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = None
        for k in range(r, len(rows)):
            if not rows[k][c].is_zero():
                pivot = k
                break
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = rows[r][c].inverse()
        rows[r] = [v * inv for v in rows[r]]
        for k in range(len(rows)):
            if k != r and not rows[k][c].is_zero():
                f = rows[k][c]
                rows[k] = [a - f * b for a, b in zip(rows[k], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return pivots


def nullspace(rows, ncols, zero, one):
    """Basis of the right nullspace of the matrix given as a list of rows."""
    work = [list(row) for row in rows]
    pivots = _eliminate(work, ncols)
    pivot_set = set(pivots)
    free = [c for c in range(ncols) if c not in pivot_set]
    basis = []
    for fc in free:
        vec = [zero] * ncols
        vec[fc] = one
        for r, pc in enumerate(pivots):
            vec[pc] = zero - work[r][fc]
        basis.append(vec)
    return basis


def solve_square(matrix, rhs, zero):
    """Solve M x = b exactly; raises SingularSystemError when M is singular.

    ``rhs`` entries may be any values supporting + and scalar
    multiplication from the left by matrix elements (series included).
    """
    n = len(matrix)
    if any(len(row) != n for row in matrix):
        raise SingularSystemError("matrix is not square")
    work = [list(row) + [rhs[i]] for i, row in enumerate(matrix)]
    for c in range(n):
        pivot = None
        for k in range(c, n):
            if not work[k][c].is_zero():
                pivot = k
                break
        if pivot is None:
            raise SingularSystemError("singular system (free column %d)" % c)
        work[c], work[pivot] = work[pivot], work[c]
        inv = work[c][c].inverse()
        work[c] = [inv * v for v in work[c][:n]] + [work[c][n] * inv]
        for k in range(n):
            if k != c and not work[k][c].is_zero():
                f = work[k][c]
                work[k] = [a - f * b for a, b in zip(work[k][:n], work[c][:n])] + [
                    work[k][n] - work[c][n] * f
                ]
    return [work[i][n] for i in range(n)]


def invert_matrix(matrix, zero, one):
    """Exact inverse of a square matrix; raises SingularSystemError."""
    n = len(matrix)
    cols = []
    for j in range(n):
        e = [one if i == j else zero for i in range(n)]
        cols.append(solve_square(matrix, e, zero))
    # cols[j] is the j-th column of the inverse
    return [[cols[j][i] for j in range(n)] for i in range(n)]
