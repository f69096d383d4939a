import random
from fractions import Fraction

from hyperlat.exactla import (
    bareiss_det,
    floor_sqrt_fraction,
    frac_mat_inv,
    gram_schmidt_ldl,
    hnf,
    int_range_of_quadratic,
    invariant_factors,
    kernel_basis,
    lll_reduce_gram,
    mat_mul,
    rational_congruent_diagonal,
    smith_normal_form,
    solve_fraction,
    solve_integer,
    transpose,
    unimodular_inverse,
)


def random_int_matrix(rng, rows, cols, lo=-6, hi=6):
    return [[rng.randint(lo, hi) for _ in range(cols)] for _ in range(rows)]


def test_smith_transforms_are_consistent():
    rng = random.Random(11)
    for _ in range(60):
        rows = rng.randint(1, 5)
        cols = rng.randint(1, 5)
        a = random_int_matrix(rng, rows, cols)
        d, u, v = smith_normal_form(a)
        assert mat_mul(mat_mul(u, a), v) == d
        assert abs(bareiss_det(u)) == 1
        assert abs(bareiss_det(v)) == 1
        diag = [d[i][i] for i in range(min(rows, cols))]
        for x, y in zip(diag, diag[1:]):
            if y != 0:
                assert x != 0 and y % x == 0


def test_kernel_and_solve():
    rng = random.Random(5)
    for _ in range(40):
        rows = rng.randint(1, 4)
        cols = rng.randint(1, 5)
        a = random_int_matrix(rng, rows, cols)
        for k in kernel_basis(a):
            assert all(sum(a[i][j] * k[j] for j in range(cols)) == 0
                       for i in range(rows))
        x = [rng.randint(-3, 3) for _ in range(cols)]
        b = [sum(a[i][j] * x[j] for j in range(cols)) for i in range(rows)]
        sol = solve_integer(a, b)
        assert sol is not None
        assert [sum(a[i][j] * sol[j] for j in range(cols))
                for i in range(rows)] == b


def test_hnf_spans_same_lattice():
    a = [[2, 4, 4], [-6, 6, 12], [10, 4, 16]]
    h = hnf(a)
    assert invariant_factors(a) == invariant_factors(h)
    # pivots positive, below-pivot zeros
    assert all(row[next(i for i, x in enumerate(row) if x)] > 0 for row in h)


def test_congruent_diagonalization():
    rng = random.Random(3)
    for _ in range(30):
        n = rng.randint(1, 5)
        g = [[0] * n for _ in range(n)]
        for i in range(n):
            g[i][i] = 2 * rng.randint(-4, 4)
            for j in range(i + 1, n):
                g[i][j] = g[j][i] = rng.randint(-3, 3)
        t, diag = rational_congruent_diagonal(g)
        n_ = len(g)
        lhs = [[sum(Fraction(t[a][i]) * g[a][b] * t[b][j]
                    for a in range(n_) for b in range(n_))
                for j in range(n_)] for i in range(n_)]
        for i in range(n_):
            for j in range(n_):
                assert lhs[i][j] == (diag[i] if i == j else 0)


def test_fraction_solvers():
    a = [[1, 2], [3, 4]]
    inv = frac_mat_inv(a)
    assert mat_mul(a, inv) == [[1, 0], [0, 1]]
    assert unimodular_inverse([[1, 1], [0, 1]]) == [[1, -1], [0, 1]]
    x = solve_fraction([[2, 0], [0, 3], [2, 3]], [4, 9, 13])
    assert x == [Fraction(2), Fraction(3)]


def test_int_range_of_quadratic():
    lo, hi = int_range_of_quadratic(Fraction(1, 2), Fraction(1, 10))
    assert lo > hi  # no integer within sqrt(0.1) of 0.5
    lo, hi = int_range_of_quadratic(Fraction(0), Fraction(9))
    assert (lo, hi) == (-3, 3)
    lo, hi = int_range_of_quadratic(Fraction(-7, 3), Fraction(4))
    vals = [z for z in range(-10, 10) if (Fraction(z) + Fraction(7, 3)) ** 2 <= 4]
    assert list(range(lo, hi + 1)) == vals


def test_floor_sqrt_fraction():
    assert floor_sqrt_fraction(Fraction(35, 1)) == 5
    assert floor_sqrt_fraction(Fraction(36, 1)) == 6
    assert floor_sqrt_fraction(Fraction(1, 2)) == 0
    assert floor_sqrt_fraction(Fraction(50, 2)) == 5


def test_ldl_and_lll():
    g = [[Fraction(4), Fraction(1)], [Fraction(1), Fraction(3)]]
    mu, d = gram_schmidt_ldl(g)
    assert d[0] == 4 and d[1] == Fraction(3) - Fraction(1, 4)
    # LLL on a skew basis of Z^2
    skew = [[2, 9], [9, 41]]  # gram of basis (v, w) with huge mu
    u, reduced = lll_reduce_gram(skew)
    assert abs(bareiss_det([[int(x) for x in row] for row in u])) == 1
    assert reduced[0][0] <= skew[0][0]
    got = mat_mul(mat_mul(u, [[Fraction(x) for x in r] for r in skew]),
                  transpose(u))
    assert got == reduced
