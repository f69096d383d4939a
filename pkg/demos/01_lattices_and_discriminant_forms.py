#!/usr/bin/env python3
"""Even lattices and their discriminant forms, start to finish.

Builds the standard blocks (hyperbolic plane, E8 at both signs, rank-one
lattices, the rank-22 unimodular lattice), reads off signatures and
determinants, and then walks the finite quadratic module machinery:
Q-values mod 1, isotropic subgroups, orthogonals, quotients, and the
overlattice glued from an isotropic subgroup.
"""

from fractions import Fraction

from hyperlat import (
    direct_sum,
    discriminant_group,
    e8,
    hyperbolic_plane,
    isotropic_subgroups,
    k3_lattice,
    orthogonal_complement,
    orthogonal_subgroup,
    overlattice,
    quotient_module,
    rank1,
)

U = hyperbolic_plane()
print("U:", U.gram, "signature", U.signature())
print("E8(-1): det", e8(-1).det, "signature", e8(-1).signature())

k3 = k3_lattice()
print("rank-22 unimodular lattice: rank", k3.rank, "det", k3.det,
      "signature", k3.signature())

# orthogonal complement of the primitive vector e + f in the first block
comp = orthogonal_complement(k3, [[1, 1] + [0] * 20])
print("complement of e+f: rank", comp.rank, "signature", comp.signature(),
      "discriminant group", discriminant_group(comp).invariant_factors)

print()
print("--- discriminant form of U + U + rank1(-8) ---")
V8 = direct_sum(U, U, rank1(-8))
D8 = discriminant_group(V8)
print(D8.dump_text())
print("level:", D8.level)

print()
print("isotropic subgroups:")
for H in isotropic_subgroups(D8):
    tag = "maximal" if H.is_maximal_isotropic else "      "
    print("  ", [e[0] for e in H.elements], tag)

H = [h for h in isotropic_subgroups(D8) if h.order == 2][0]
perp = orthogonal_subgroup(D8, H)
print("orthogonal of H:", [e[0] for e in perp.elements])

K = quotient_module(D8, H)
print("quotient module H-perp/H:", K.invariant_factors,
      "Q(gen) =", K.q_value((1,)))

VL = overlattice(V8, H)
print()
print("overlattice glued from H (gram):")
for row in VL.gram:
    print("   ", row)
print("det dropped from", V8.det, "to", VL.det, "= det /|H|^2")
