"""Exact linear algebra over Z and Q.

Everything here works on plain lists of Python ints or Fractions, so results
are exact at any size.  Matrices are lists of row lists.  These routines back
the lattice constructions; nothing in this module touches floating point.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, isqrt


# ---------------------------------------------------------------------------
# basic matrix helpers

def mat_copy(a):
    return [list(row) for row in a]


def identity(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def mat_mul(a, b):
    n, k = len(a), len(b)
    m = len(b[0]) if b else 0
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
    return [sum(a[i][j] * v[j] for j in range(len(v))) for i in range(len(a))]


def transpose(a):
    return [list(col) for col in zip(*a)] if a else []


def bareiss_det(a):
    """Determinant of an integer matrix by fraction-free Bareiss elimination."""
    n = len(a)
    if n == 0:
        return 1
    m = mat_copy(a)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def frac_mat_inv(a):
    """Inverse of a square matrix with Fraction entries (Gauss-Jordan)."""
    n = len(a)
    m = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(a)]
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        m[col], m[piv] = m[piv], m[col]
        inv = Fraction(1) / m[col][col]
        m[col] = [x * inv for x in m[col]]
        for r in range(n):
            if r != col and m[r][col]:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return [row[n:] for row in m]


def unimodular_inverse(a):
    """Integer inverse of a unimodular integer matrix."""
    inv = frac_mat_inv(a)
    out = [[int(x) for x in row] for row in inv]
    if any(Fraction(x) != y for row, orow in zip(inv, out)
           for x, y in zip(row, orow)):
        raise ValueError("matrix is not unimodular")
    return out


def solve_fraction(a, b):
    """Solve a x = b over Q for square or full-column-rank a; exact."""
    rows = len(a)
    cols = len(a[0]) if rows else 0
    m = [[Fraction(x) for x in row] + [Fraction(bb)] for row, bb in zip(a, b)]
    pivots = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = Fraction(1) / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    for i in range(r, rows):
        if m[i][cols] != 0:
            raise ValueError("inconsistent system")
    x = [Fraction(0)] * cols
    for i, c in enumerate(pivots):
        x[c] = m[i][cols]
    return x


# ---------------------------------------------------------------------------
# Smith normal form with transforms

def smith_normal_form(a):
    """Return (d, u, v) with u*a*v = d, u, v unimodular, d in Smith form.

    d has nonnegative diagonal entries d[0] | d[1] | ... and zeros elsewhere.
    """
    rows = len(a)
    cols = len(a[0]) if rows else 0
    m = mat_copy(a)
    u = identity(rows)
    v = identity(cols)

    def row_op(i, j, q):  # row_i -= q * row_j
        m[i] = [x - q * y for x, y in zip(m[i], m[j])]
        u[i] = [x - q * y for x, y in zip(u[i], u[j])]

    def col_op(i, j, q):  # col_i -= q * col_j
        for r in range(rows):
            m[r][i] -= q * m[r][j]
        for r in range(cols):
            v[r][i] -= q * v[r][j]

    def swap_rows(i, j):
        m[i], m[j] = m[j], m[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for r in range(rows):
            m[r][i], m[r][j] = m[r][j], m[r][i]
        for r in range(cols):
            v[r][i], v[r][j] = v[r][j], v[r][i]

    t = 0
    while t < min(rows, cols):
        # find a nonzero pivot of smallest absolute value
        piv = None
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                x = abs(m[i][j])
                if x and (best is None or x < best):
                    best, piv = x, (i, j)
        if piv is None:
            break
        swap_rows(t, piv[0])
        swap_cols(t, piv[1])
        dirty = False
        for i in range(t + 1, rows):
            if m[i][t]:
                q = m[i][t] // m[t][t]
                row_op(i, t, q)
                if m[i][t]:
                    dirty = True
        for j in range(t + 1, cols):
            if m[t][j]:
                q = m[t][j] // m[t][t]
                col_op(j, t, q)
                if m[t][j]:
                    dirty = True
        if dirty:
            continue
        # pivot must divide the remaining block
        stuck = False
        for i in range(t + 1, rows):
            for j in range(t + 1, cols):
                if m[i][j] % m[t][t]:
                    row_op(t, i, -1)  # add row i to row t, restart pivot step
                    stuck = True
                    break
            if stuck:
                break
        if stuck:
            continue
        if m[t][t] < 0:
            m[t] = [-x for x in m[t]]
            u[t] = [-x for x in u[t]]
        t += 1
    return m, u, v


def invariant_factors(a):
    d, _, _ = smith_normal_form(a)
    return [d[i][i] for i in range(min(len(d), len(d[0]) if d else 0)) if d[i][i] != 0]


def kernel_basis(a):
    """Basis rows of the integer (right) kernel {x : a x = 0}; saturated."""
    rows = len(a)
    cols = len(a[0]) if rows else 0
    if rows == 0:
        return identity(cols)
    d, _, v = smith_normal_form(a)
    rank = sum(1 for i in range(min(rows, cols)) if d[i][i] != 0)
    # kernel is spanned by the trailing columns of v
    return [[v[r][j] for r in range(cols)] for j in range(rank, cols)]


def solve_integer(a, b):
    """One integer solution x of a x = b, or None if unsolvable over Z."""
    rows = len(a)
    cols = len(a[0]) if rows else 0
    d, u, v = smith_normal_form(a)
    c = mat_vec(u, b)
    y = [0] * cols
    for i in range(min(rows, cols)):
        di = d[i][i]
        if di == 0:
            if c[i] != 0:
                return None
        else:
            if c[i] % di:
                return None
            y[i] = c[i] // di
    for i in range(cols, rows):
        if c[i] != 0:
            return None
    return mat_vec(v, y)


def hnf(a):
    """Row-style Hermite normal form of an integer matrix (zero rows dropped).

    Pivots are positive, entries above a pivot reduced into [0, pivot).
    """
    m = [list(row) for row in a if any(row)]
    if not m:
        return []
    rows, cols = len(m), len(m[0])
    r = 0
    for c in range(cols):
        piv = None
        for i in range(r, rows):
            if m[i][c]:
                piv = i
                break
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        # clear below by gcd steps
        for i in range(r + 1, rows):
            while m[i][c]:
                q = m[r][c] // m[i][c]
                m[r] = [x - q * y for x, y in zip(m[r], m[i])]
                m[r], m[i] = m[i], m[r]
        if m[r][c] < 0:
            m[r] = [-x for x in m[r]]
        for i in range(r):
            q = m[i][c] // m[r][c]
            if q:
                m[i] = [x - q * y for x, y in zip(m[i], m[r])]
        r += 1
        if r == rows:
            break
    return [row for row in m[:r]]


def hnf_rational(rows):
    """HNF basis of the lattice generated by rational row vectors.

    Returns rows of Fractions spanning the same Z-module.
    """
    if not rows:
        return []
    den = 1
    for row in rows:
        for x in row:
            den = den * Fraction(x).denominator // gcd(den, Fraction(x).denominator)
    ints = [[int(Fraction(x) * den) for x in row] for row in rows]
    h = hnf(ints)
    return [[Fraction(x, den) for x in row] for row in h]


# ---------------------------------------------------------------------------
# symmetric forms

def rational_congruent_diagonal(g):
    """Diagonalize a symmetric matrix over Q: returns (t, d) with t^T g t diag(d).

    t is a list of Fraction columns (t[i][j] = entry i of column j); d the
    diagonal values.  Classic symmetric Gaussian elimination; exact.
    """
    n = len(g)
    a = [[Fraction(g[i][j]) for j in range(n)] for i in range(n)]
    t = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]

    def col_axpy(dst, src, f):
        # column dst += f * column src, congruently
        for r in range(n):
            a[r][dst] += f * a[r][src]
        for r in range(n):
            a[dst][r] += f * a[src][r]
        for r in range(n):
            t[r][dst] += f * t[r][src]

    def col_swap(i, j):
        for r in range(n):
            a[r][i], a[r][j] = a[r][j], a[r][i]
        for r in range(n):
            a[i][r], a[j][r] = a[j][r], a[i][r]
        for r in range(n):
            t[r][i], t[r][j] = t[r][j], t[r][i]

    for k in range(n):
        if a[k][k] == 0:
            piv = next((i for i in range(k + 1, n) if a[i][i] != 0), None)
            if piv is not None:
                col_swap(k, piv)
            else:
                # all diagonal zero: bring in an off-diagonal entry
                found = None
                for i in range(k, n):
                    for j in range(i + 1, n):
                        if a[i][j] != 0:
                            found = (i, j)
                            break
                    if found:
                        break
                if not found:
                    break  # zero block, done
                i, j = found
                col_axpy(i, j, Fraction(1))  # makes a[i][i] = 2*a[i][j] != 0
                if i != k:
                    col_swap(k, i)
        pk = a[k][k]
        if pk == 0:
            continue
        for j in range(k + 1, n):
            if a[k][j]:
                col_axpy(j, k, -a[k][j] / pk)
    return t, [a[i][i] for i in range(n)]


def floor_sqrt_fraction(x: Fraction) -> int:
    """floor(sqrt(x)) for a nonnegative Fraction, exact."""
    if x < 0:
        raise ValueError("negative argument")
    return isqrt(x.numerator * x.denominator) // x.denominator


def int_range_of_quadratic(center: Fraction, radius_sq: Fraction):
    """Integers z with (z - center)^2 <= radius_sq, as an inclusive range.

    Returns (lo, hi) with lo > hi when the interval holds no integer.
    """
    if radius_sq < 0:
        return 0, -1
    center = Fraction(center)
    r = floor_sqrt_fraction(radius_sq)
    lo = center.numerator // center.denominator - r - 2
    hi = -((-center.numerator) // center.denominator) + r + 2
    while lo <= hi and (lo - center) ** 2 > radius_sq:
        lo += 1
    while hi >= lo and (hi - center) ** 2 > radius_sq:
        hi -= 1
    return lo, hi


def gram_schmidt_ldl(g):
    """Exact LDL data for a symmetric positive definite Fraction matrix.

    Returns (mu, d): d[i] the diagonal of D, mu lower-triangular coefficients
    with mu[i][j] for j < i.  g = L D L^T with L unit lower triangular.
    """
    n = len(g)
    mu = [[Fraction(0)] * n for _ in range(n)]
    d = [Fraction(0)] * n
    for i in range(n):
        for j in range(i):
            s = Fraction(g[i][j])
            for k in range(j):
                s -= mu[i][k] * mu[j][k] * d[k]
            mu[i][j] = s / d[j]
        s = Fraction(g[i][i])
        for k in range(i):
            s -= mu[i][k] * mu[i][k] * d[k]
        d[i] = s
        if d[i] <= 0:
            raise ValueError("matrix is not positive definite")
    return mu, d


def lll_reduce_gram(g, delta=Fraction(3, 4)):
    """LLL-reduce a positive definite Gram matrix given exactly.

    Returns (u, g2) with u unimodular (rows are the new basis in the old
    coordinates) and g2 = u g u^T the reduced Gram.  Pure Lovasz condition
    bookkeeping with Fractions; fine at desk scale.
    """
    n = len(g)
    u = identity(n)
    gg = [[Fraction(x) for x in row] for row in g]

    def gram():
        return mat_mul(mat_mul(u, gg), transpose(u))

    def project_coeffs(cur):
        return gram_schmidt_ldl(cur)

    cur = gram()
    mu, d = project_coeffs(cur)
    k = 1
    while k < n:
        # size reduction
        for j in range(k - 1, -1, -1):
            q = mu[k][j]
            r = int(q) if q == int(q) else round(float(q))
            # exact nearest integer
            r = (q.numerator * 2 + q.denominator) // (2 * q.denominator)
            if r:
                u[k] = [x - r * y for x, y in zip(u[k], u[j])]
                cur = gram()
                mu, d = project_coeffs(cur)
        if d[k] >= (delta - mu[k][k - 1] ** 2) * d[k - 1]:
            k += 1
        else:
            u[k], u[k - 1] = u[k - 1], u[k]
            cur = gram()
            mu, d = project_coeffs(cur)
            k = max(k - 1, 1)
    return u, gram()
