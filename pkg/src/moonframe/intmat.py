"""Exact integer and rational matrix routines.

Everything here works on lists of lists of Python ints (or Fractions where
stated), so results are exact at any size.  Matrices are small throughout
the pipeline (at most a few dozen rows), so the classical algorithms are
the right tool: Hermite normal form with transform, Smith normal form,
Bareiss determinants, fraction-free solves, and GF(2) rank.
"""

from fractions import Fraction

from .errors import MoonframeError


def mat_copy(a):
    return [list(row) for row in a]


def mat_mul(a, b):
    n, k = len(a), len(b)
    m = len(b[0]) if k else 0
    out = [[0] * m for _ in range(n)]
    for i in range(n):
        ai = a[i]
        oi = out[i]
        for t in range(k):
            x = ai[t]
            if x:
                bt = b[t]
                for j in range(m):
                    oi[j] += x * bt[j]
    return out


def mat_vec(a, v):
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def transpose(a):
    return [list(col) for col in zip(*a)]


def identity(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def gram_matrix(basis):
    """basis . basis^T with exact integers."""
    n = len(basis)
    g = [[0] * n for _ in range(n)]
    for i in range(n):
        bi = basis[i]
        for j in range(i, n):
            s = sum(x * y for x, y in zip(bi, basis[j]))
            g[i][j] = s
            g[j][i] = s
    return g


def det_bareiss(mat):
    """Exact determinant by fraction-free Gaussian elimination."""
    a = mat_copy(mat)
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def hnf_with_transform(mat):
    """Row-style Hermite normal form.

    Returns (H, U) with U unimodular, U*mat == H, H in row echelon form with
    positive pivots and entries above each pivot reduced into [0, pivot).
    Zero rows of H sink to the bottom.
    """
    h = mat_copy(mat)
    n = len(h)
    m = len(h[0]) if n else 0
    u = identity(n)
    row = 0
    for col in range(m):
        # gcd-reduce all entries below `row` in this column onto one row
        piv = None
        for i in range(row, n):
            if h[i][col] != 0:
                piv = i
                break
        if piv is None:
            continue
        h[row], h[piv] = h[piv], h[row]
        u[row], u[piv] = u[piv], u[row]
        for i in range(row + 1, n):
            while h[i][col] != 0:
                q = h[row][col] // h[i][col]
                if q:
                    h[row] = [x - q * y for x, y in zip(h[row], h[i])]
                    u[row] = [x - q * y for x, y in zip(u[row], u[i])]
                h[row], h[i] = h[i], h[row]
                u[row], u[i] = u[i], u[row]
        if h[row][col] < 0:
            h[row] = [-x for x in h[row]]
            u[row] = [-x for x in u[row]]
        p = h[row][col]
        for i in range(row):
            q = h[i][col] // p
            if q:
                h[i] = [x - q * y for x, y in zip(h[i], h[row])]
                u[i] = [x - q * y for x, y in zip(u[i], u[row])]
        row += 1
        if row == n:
            break
    return h, u


def hnf(mat):
    h, _ = hnf_with_transform(mat)
    return [row for row in h if any(row)]


def left_kernel(mat):
    """Basis (list of rows) of {x integer row : x * mat = 0}."""
    h, u = hnf_with_transform(mat)
    return [u[i] for i in range(len(h)) if not any(h[i])]


def snf_diagonal(mat):
    """Diagonal of the Smith normal form (nonnegative, d1 | d2 | ...).

    Only the invariant factors are computed; transforms are not tracked.
    The pivot is always the entry of minimal absolute value in the working
    block, which keeps intermediate entries small.
    """
    a = mat_copy(mat)
    n = len(a)
    m = len(a[0]) if n else 0
    diag = []
    t = 0
    while t < min(n, m):
        piv = None
        best = None
        for i in range(t, n):
            for j in range(t, m):
                v = abs(a[i][j])
                if v and (best is None or v < best):
                    best = v
                    piv = (i, j)
        if piv is None:
            break
        while True:
            i0, j0 = piv
            a[t], a[i0] = a[i0], a[t]
            for row in a:
                row[t], row[j0] = row[j0], row[t]
            if a[t][t] < 0:
                a[t] = [-x for x in a[t]]
            p = a[t][t]
            # one sweep of row/column reductions by the pivot
            dirty = False
            for i in range(t + 1, n):
                q = a[i][t] // p
                if q:
                    a[i] = [x - q * y for x, y in zip(a[i], a[t])]
                if a[i][t]:
                    dirty = True
            for j in range(t + 1, m):
                q = a[t][j] // p
                if q:
                    for row in a:
                        row[j] -= q * row[t]
                if a[t][j]:
                    dirty = True
            if dirty:
                # a smaller remainder appeared somewhere in row/col t
                piv = None
                best = None
                for i in range(t, n):
                    for j in range(t, m):
                        v = abs(a[i][j])
                        if v and (best is None or v < best):
                            best = v
                            piv = (i, j)
                continue
            # pivot must divide every remaining entry for the SNF chain
            bad = None
            for i in range(t + 1, n):
                for j in range(t + 1, m):
                    if a[i][j] % p != 0:
                        bad = (i, j)
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            a[t] = [x + y for x, y in zip(a[t], a[bad[0]])]
            piv = None
            best = None
            for i in range(t, n):
                for j in range(t, m):
                    v = abs(a[i][j])
                    if v and (best is None or v < best):
                        best = v
                        piv = (i, j)
        diag.append(abs(a[t][t]))
        t += 1
    diag.extend([0] * (min(n, m) - len(diag)))
    return diag


def rank_mod2(rows):
    """GF(2) rank of rows given as Python int bitmasks."""
    basis = []
    for r in rows:
        for b in basis:
            r = min(r, r ^ b)
        if r:
            basis.append(r)
            basis.sort(reverse=True)
    return len(basis)


def rational_inverse(mat):
    """Exact inverse of a square integer/Fraction matrix, as Fractions."""
    n = len(mat)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(mat)]
    for col in range(n):
        piv = None
        for i in range(col, n):
            if a[i][col] != 0:
                piv = i
                break
        if piv is None:
            raise MoonframeError("matrix is singular")
        a[col], a[piv] = a[piv], a[col]
        p = a[col][col]
        a[col] = [x / p for x in a[col]]
        for i in range(n):
            if i != col and a[i][col] != 0:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[col])]
    return [row[n:] for row in a]


def solve_right_rational(a_inv, v):
    """v * A^{-1} given a precomputed rational inverse."""
    n = len(a_inv)
    return [sum(Fraction(v[i]) * a_inv[i][j] for i in range(n)) for j in range(n)]
