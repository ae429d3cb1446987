"""Small exact linear algebra: Smith normal form over Z and Gaussian elimination mod ell.

Matrices are lists of lists of python ints.  Sizes here stay in the hundreds,
so simple pivot-by-smallest-entry SNF is adequate.
"""


def _swap_rows(mat, i, j):
    mat[i], mat[j] = mat[j], mat[i]


def _swap_cols(mat, i, j):
    for row in mat:
        row[i], row[j] = row[j], row[i]


def smith_normal_form(matrix):
    """Diagonal invariants d_1 | d_2 | ... of an integer matrix (non-negative, zeros trimmed)."""
    mat = [list(map(int, row)) for row in matrix]
    rows = len(mat)
    cols = len(mat[0]) if rows else 0
    diag = []
    top = 0
    while top < rows and top < cols:
        # find the nonzero pivot of least absolute value
        piv = None
        for i in range(top, rows):
            for j in range(top, cols):
                v = mat[i][j]
                if v and (piv is None or abs(v) < abs(mat[piv[0]][piv[1]])):
                    piv = (i, j)
        if piv is None:
            break
        _swap_rows(mat, top, piv[0])
        _swap_cols(mat, top, piv[1])
        while True:
            # clear the pivot row and column
            p = mat[top][top]
            done = True
            for i in range(top + 1, rows):
                if mat[i][top]:
                    q = mat[i][top] // p
                    for j in range(top, cols):
                        mat[i][j] -= q * mat[top][j]
                    if mat[i][top]:
                        _swap_rows(mat, top, i)
                        done = False
            if not done:
                continue
            for j in range(top + 1, cols):
                if mat[top][j]:
                    q = mat[top][j] // p
                    for i in range(top, rows):
                        mat[i][j] -= q * mat[i][top]
                    if mat[top][j]:
                        _swap_cols(mat, top, j)
                        done = False
            if done:
                break
        # enforce divisibility d_top | everything below
        p = abs(mat[top][top])
        bad = None
        for i in range(top + 1, rows):
            for j in range(top + 1, cols):
                if mat[i][j] % p:
                    bad = i
                    break
            if bad is not None:
                break
        if bad is not None:
            for j in range(top, cols):
                mat[top][j] += mat[bad][j]
            continue
        diag.append(p)
        top += 1
    return diag


def homology_of_pair(d_out, d_in, rank_middle):
    """Invariants (free_rank, torsion list) of ker(d_out)/im(d_in).

    d_out: matrix mapping the middle group out (may be []), d_in: matrix mapping in.
    rank_middle: rank of the middle free module.
    """
    rank_out = len(smith_normal_form(d_out)) if d_out and d_out[0] else 0
    ker = rank_middle - rank_out
    if d_in and d_in[0]:
        inv = smith_normal_form(d_in)
    else:
        inv = []
    free = ker - len(inv)
    torsion = sorted(d for d in inv if d > 1)
    return free, torsion


def rank_mod(matrix, ell):
    """Rank of an integer matrix over F_ell."""
    mat = [[v % ell for v in row] for row in matrix]
    rows = len(mat)
    cols = len(mat[0]) if rows else 0
    rank = 0
    col = 0
    for col in range(cols):
        piv = None
        for i in range(rank, rows):
            if mat[i][col]:
                piv = i
                break
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        inv = pow(mat[rank][col], ell - 2, ell) if ell > 2 else 1
        prow = mat[rank]
        if inv != 1:
            mat[rank] = prow = [(v * inv) % ell for v in prow]
        for i in range(rows):
            if i != rank and mat[i][col]:
                c = mat[i][col]
                mat[i] = [(a - c * b) % ell for a, b in zip(mat[i], prow)]
        rank += 1
        if rank == rows:
            break
    return rank


def kernel_dim_mod(matrix, ell, cols):
    return cols - rank_mod(matrix, ell)


def solve_integer(matrix, rhs):
    """One integer solution x of matrix @ x = rhs, or None.

    Works by tracking column operations while reducing to column-style HNF.
    """
    rows = len(matrix)
    cols = len(matrix[0]) if rows else 0
    mat = [list(map(int, row)) for row in matrix]
    # transform records the column ops: solution = transform @ y for reduced system
    trans = [[1 if i == j else 0 for j in range(cols)] for i in range(cols)]

    def col_addmul(j, k, q):
        # col_j += q * col_k
        for i in range(rows):
            mat[i][j] += q * mat[i][k]
        for i in range(cols):
            trans[i][j] += q * trans[i][k]

    def col_swap(j, k):
        for i in range(rows):
            mat[i][j], mat[i][k] = mat[i][k], mat[i][j]
        for i in range(cols):
            trans[i][j], trans[i][k] = trans[i][k], trans[i][j]

    r = 0
    pivots = []
    for i in range(rows):
        # gcd-sweep row i over columns >= r
        j = r
        while True:
            nz = [k for k in range(r, cols) if mat[i][k]]
            if not nz:
                break
            k0 = min(nz, key=lambda k: abs(mat[i][k]))
            col_swap(r, k0)
            done = True
            for k in range(r + 1, cols):
                if mat[i][k]:
                    q = mat[i][k] // mat[i][r]
                    col_addmul(k, r, -q)
                    if mat[i][k]:
                        done = False
            if done:
                break
        if r < cols and mat[i][r]:
            pivots.append((i, r))
            r += 1
    # back-substitute
    y = [0] * cols
    resid = list(map(int, rhs))
    for (i, j) in pivots:
        val = resid[i]
        for k in range(cols):
            if k != j:
                val -= mat[i][k] * y[k]
        if val % mat[i][j]:
            return None
        y[j] = val // mat[i][j]
    # verify (catches inconsistent rows without pivots)
    for i in range(rows):
        s = sum(mat[i][k] * y[k] for k in range(cols))
        if s != rhs[i]:
            return None
    return [sum(trans[i][k] * y[k] for k in range(cols)) for i in range(cols)]
