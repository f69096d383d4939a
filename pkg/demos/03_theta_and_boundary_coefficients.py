#!/usr/bin/env python3
"""Theta series, the weight-2 quasi-modular series, and cusp coefficients.

Enumerates short vectors of definite lattices exactly to build vector-valued
theta expansions, multiplies by the quasi-modular series, and assembles the
boundary coefficients attached to an isotropic plane: a(gamma, n, F) and the
correction u(gamma, n, F) = (c/2) a(0,0,F) - a(gamma,n,F), which vanishes
exactly at (0,0).
"""

from fractions import Fraction

from hyperlat import (
    a_coeff,
    cusp_datum,
    direct_sum,
    e2_series,
    e8,
    eisenstein_coefficient,
    find_isotropic_planes,
    hyperbolic_plane,
    multiply,
    rank1,
    theta_series,
    u_coeff,
)

print("--- theta of E8(-1): coefficient = number of vectors of each norm ---")
th8 = theta_series(e8(-1), 2)
for (cls, e), c in sorted(th8.coefficients.items()):
    print(f"  exponent {e}: {c}")

print()
print("--- theta of rank1(-2): two classes, shifted exponents ---")
th = theta_series(rank1(-2), 4)
print(th.dump_csv())

print()
e2 = e2_series(4)
print("weight-2 series coefficients:",
      [int(e2.coefficient((), k)) for k in range(5)])
prod = multiply(e2, th)
print("(E2 . theta) coefficient at exponent 1:",
      prod.coefficient((0,), 1))

print()
print("--- cusp data and boundary coefficients ---")
U = hyperbolic_plane()
V = direct_sum(U, U, rank1(-2))
planes = find_isotropic_planes(V, 1)
print(f"{len(planes)} primitive isotropic planes at coefficient bound 1")
F = cusp_datum(V, [[1, 0, 0, 0, 0], [0, 0, 1, 0, 0]])
print("canonical plane: imprimitivity", F.imprimitivity,
      "| complement lattice", F.kf_lattice.gram,
      "| strongly primitive:", F.strongly_primitive)

print("a(0, 0, F) =", a_coeff((0,), 0, F), "  (= N_F / 24)")
print("a(0, 1, F) =", a_coeff((0,), 1, F))
c00 = eisenstein_coefficient(None, 0, V, 10)
print("u(0, 0, F) =", u_coeff((0,), 0, F, c00).exact, " (exact cancellation)")
c5 = eisenstein_coefficient(None, 5, V, 60)
u5 = u_coeff((0,), 5, F, c5)
print("u(0, 5, F) =", float(u5), " approximate:", u5.approximate)
