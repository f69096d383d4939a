#!/usr/bin/env python3
"""Predictions specialized to the rank-22 unimodular lattice.

A primitive Lorentzian anisotropic sublattice P of small rank plays the role
of a generic Picard lattice; its orthogonal complement V carries the counting
problem.  The demo checks the discriminant-form mirror symmetry between P
and V, evaluates the predicted growth of norm-n classes, decides exactly
which norms are represented on cosets of P (squares for rank one, a
Pell-bounded search in rank two), and accumulates the census prediction.
"""

from fractions import Fraction

from hyperlat import (
    direct_sum,
    discriminant_group,
    elliptic_census_prediction,
    k3_predict,
    k3_sublattice,
    rank1,
    represents_on_coset,
)

print("--- rank-one P of square 2 (the degree-2 family) ---")
for n in (1, 4, 5, 9):
    res = k3_predict((0,), n, mu_s=1.0, two_d=2, prime_bound=50)
    rep = res.coset_representable
    print(f"n = {n}: prediction {float(res.prediction):.6g}"
          f"  exponent n^{res.exponent}"
          f"  2n represented on P: {rep.representable} (exact: {rep.exact})")

res = k3_predict((0,), 4, mu_s=1.0, two_d=2, prime_bound=50)
print("complement lattice: rank", res.v_lattice.rank,
      "det", res.v_lattice.det,
      "disc", discriminant_group(res.v_lattice).invariant_factors,
      "| mirror symmetry of Q-values:", res.disc_match)

print()
print("--- representability on a rank-two Lorentzian coset ---")
P2 = direct_sum(rank1(2), rank1(-4))   # x^2 - 2 y^2
for n in (1, 2, 7, 3, 5):
    r = represents_on_coset(P2, None, 2 * n)
    wit = f" witness {tuple(map(int, r.witness))}" if r.witness else ""
    print(f"  x^2 - 2y^2 = {n}: {r.representable}{wit}")

print()
print("--- cumulative census prediction, P of square 2 ---")
total, rows = elliptic_census_prediction(6, mu_s=1.0, two_d=2, prime_bound=50)
print("  class      norm    prediction")
for r in rows:
    print(f"  {r.gamma}   {str(r.s):>6}    {r.prediction:.6g}")
print(f"cumulative: {float(total):.6g}")
