"""Exact linear algebra over Q(q) and over Q^pi(q) (componentwise)."""

from .scalars import QPiScalar, RF_ONE, RF_ZERO


def rf_solve(matrix, rhs):
    """Solve a linear system over Q(q) by Gaussian elimination.

    matrix: list of rows of RationalFunction; rhs: list of RationalFunction.
    Returns (solution, unique) where solution is None when inconsistent,
    and unique is False when the system is underdetermined (the returned
    solution sets free variables to zero).
    """
    rows = [list(r) + [v] for r, v in zip(matrix, rhs)]
    ncols = len(matrix[0]) if matrix else 0
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = None
        for k in range(r, len(rows)):
            if rows[k][c]:
                pivot = k
                break
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        pv = rows[r][c]
        rows[r] = [x / pv for x in rows[r]]
        for k in range(len(rows)):
            if k != r and rows[k][c]:
                f = rows[k][c]
                rows[k] = [x - f * y for x, y in zip(rows[k], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    for k in range(r, len(rows)):
        if rows[k][ncols]:
            return None, True
    sol = [RF_ZERO] * ncols
    for row_idx, c in enumerate(pivots):
        sol[c] = rows[row_idx][ncols]
    return sol, len(pivots) == ncols


def rf_rank(matrix):
    """Rank of a matrix over Q(q)."""
    rows = [list(r) for r in matrix]
    ncols = len(rows[0]) if rows else 0
    rank = 0
    for c in range(ncols):
        pivot = None
        for k in range(rank, len(rows)):
            if rows[k][c]:
                pivot = k
                break
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        pv = rows[rank][c]
        rows[rank] = [x / pv for x in rows[rank]]
        for k in range(len(rows)):
            if k != rank and rows[k][c]:
                f = rows[k][c]
                rows[k] = [x - f * y for x, y in zip(rows[k], rows[rank])]
        rank += 1
        if rank == len(rows):
            break
    return rank


def qpi_solve(matrix, rhs):
    """Solve over Q^pi(q) by solving each idempotent component.

    Returns None when either component is inconsistent or non-unique.
    """
    n = len(matrix)
    if n == 0:
        return []
    plus, _ = rf_solve(
        [[x.plus for x in row] for row in matrix], [v.plus for v in rhs]
    )
    minus, _ = rf_solve(
        [[x.minus for x in row] for row in matrix], [v.minus for v in rhs]
    )
    if plus is None or minus is None:
        return None
    return [QPiScalar(p, m) for p, m in zip(plus, minus)]


def qpi_matrix_invertible(matrix):
    """True iff the square matrix is invertible in both components."""
    n = len(matrix)
    if n == 0:
        return True
    return (
        rf_rank([[x.plus for x in row] for row in matrix]) == n
        and rf_rank([[x.minus for x in row] for row in matrix]) == n
    )


def rf_nullspace(matrix):
    """(pivot columns, nullspace basis) of a matrix over Q(q).

    One basis vector per free column, in free-column order, built from
    the reduced row echelon form.
    """
    rows = [list(r) for r in matrix]
    ncols = len(rows[0]) if rows else 0
    pivots = []
    rank = 0
    for c in range(ncols):
        pivot = None
        for k in range(rank, len(rows)):
            if rows[k][c]:
                pivot = k
                break
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        pv = rows[rank][c]
        rows[rank] = [x / pv for x in rows[rank]]
        for k in range(len(rows)):
            if k != rank and rows[k][c]:
                f = rows[k][c]
                rows[k] = [x - f * y for x, y in zip(rows[k], rows[rank])]
        pivots.append(c)
        rank += 1
        if rank == len(rows):
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        vec = [RF_ZERO] * ncols
        vec[fc] = RF_ONE
        for ridx, pc in enumerate(pivots):
            vec[pc] = -rows[ridx][fc]
        basis.append(vec)
    return pivots, basis


def qpi_nullspace(matrix):
    """Nullspace basis over Q^pi(q); needs matching pivots per component."""
    ncols = len(matrix[0]) if matrix else 0
    if ncols == 0:
        return []
    piv_p, basis_p = rf_nullspace([[x.plus for x in row] for row in matrix])
    piv_m, basis_m = rf_nullspace([[x.minus for x in row] for row in matrix])
    assert piv_p == piv_m, "pi-free kernel expected: component pivots differ"
    return [
        [QPiScalar(a, b) for a, b in zip(vp, vm)]
        for vp, vm in zip(basis_p, basis_m)
    ]


def qpi_solve_overdetermined(matrix, rhs):
    """Exact solve of a (possibly overdetermined) consistent system.

    Returns (solution, unique) with solution None when inconsistent.
    """
    plus, up = rf_solve([[x.plus for x in row] for row in matrix], [v.plus for v in rhs])
    minus, um = rf_solve([[x.minus for x in row] for row in matrix], [v.minus for v in rhs])
    if plus is None or minus is None:
        return None, True
    return [QPiScalar(p, m) for p, m in zip(plus, minus)], (up and um)
