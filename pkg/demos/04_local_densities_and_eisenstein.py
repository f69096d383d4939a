#!/usr/bin/env python3
"""Siegel local densities, stabilization witnesses, and coefficient sums.

Counts congruence solutions two independent ways, watches the normalized
counts stabilize, assembles the truncated singular series and the Fourier
coefficients built from it, and closes with the gluing identity: summing
coefficients over an isotropic subgroup reproduces the glued lattice's
coefficient (here exactly, since the relevant space of corrections is
trivial at this size).
"""

from fractions import Fraction

from hyperlat import (
    count_solutions_naive,
    count_solutions_split,
    direct_sum,
    discriminant_group,
    eisenstein_coefficient,
    hyperbolic_plane,
    isotropic_subgroups,
    local_density,
    quotient_with_projection,
    rank1,
    singular_series,
)

U = hyperbolic_plane()
V = direct_sum(U, U, rank1(-2))

print("--- two exact counters, one answer ---")
for (p, s, n) in [(5, 1, 1), (3, 2, 4), (2, 3, 7)]:
    naive = count_solutions_naive(None, n, V, p ** s)
    split = count_solutions_split(None, n, V, p, s)
    print(f"  N(0, {n}, V, {p}^{s}): naive {naive} = split {split}")

print()
print("--- stabilization of the normalized counts ---")
rep = local_density(None, 1, V, 5)
print("p=5, n=1: raw counts", rep.raw_counts)
print("normalized:", [str(Fraction(c, 5 ** (4 * (i + 1))))
                      for i, c in enumerate(rep.raw_counts)])
print("density mu_5 =", rep.density, "witnessed at s0 =",
      rep.stabilization_exponent)

print()
print("--- singular series and Fourier coefficients ---")
ss = singular_series(None, 1, V, 50)
print("truncated product over p <= 50:", float(ss.truncated_product))
for p in (2, 3, 5, 7):
    print(f"  mu_{p} =", ss.factors[p].density)
c = eisenstein_coefficient(None, 1, V, 50)
print("c(0, 1) =", float(c), "(flagged approximate:", c.approximate, ")")
print("c(0, 0) =", eisenstein_coefficient(None, 0, V, 50).exact, "exactly")

print()
print("--- coefficient sums across the Z/8 -> Z/2 gluing ---")
V8 = direct_sum(U, U, rank1(-8))
D8 = discriminant_group(V8)
H = [h for h in isotropic_subgroups(D8) if h.order == 2][0]
_, proj = quotient_with_projection(D8, H)
print(" n     sum over H       glued side      ratio")
for n in (100, 181, 250, 399):
    lhs = sum(float(eisenstein_coefficient(t, n, V8, 100)) for t in H.elements)
    rhs = float(eisenstein_coefficient(proj[(0,)], n, V, 100))
    print(f"{n:4d}  {lhs:14.6f}  {rhs:14.6f}  {lhs / rhs:.12f}")
