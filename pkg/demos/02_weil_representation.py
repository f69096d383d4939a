#!/usr/bin/env python3
"""Weil representation matrices and the gluing intertwiner.

Prints the action of the two metaplectic generators on the group algebra of
a discriminant form, checks the defining relations numerically, and shows
that the pullback along an isotropic gluing commutes with both generators.
"""

import numpy as np

from hyperlat import (
    WeilAction,
    direct_sum,
    discriminant_group,
    hyperbolic_plane,
    intertwining_defect,
    isotropic_subgroups,
    overlattice,
    pullback_matrix,
    pushforward_matrix,
    quotient_with_projection,
    rank1,
    rho_S,
    rho_T,
    verify_relations,
)

U = hyperbolic_plane()
V = direct_sum(U, U, rank1(-2))
D = discriminant_group(V)
w = WeilAction(D, V.signature())

print("discriminant group of order", D.order, "and level", D.level)
print("T acts by:")
print(np.round(rho_T(w), 6))
print("S acts by:")
print(np.round(rho_S(w), 6))
print("relations:", verify_relations(w))

print()
print("--- gluing Z/8 down to Z/2 ---")
V8 = direct_sum(U, U, rank1(-8))
D8 = discriminant_group(V8)
H = [h for h in isotropic_subgroups(D8) if h.order == 2][0]
K, proj = quotient_with_projection(D8, H)
Vbar = overlattice(V8, H)

w8 = WeilAction(D8, V8.signature())
wK = WeilAction(K, Vbar.signature())
p = pullback_matrix(w8, wK, proj)
print("pullback matrix (columns indexed by the small module):")
print(p.astype(int))
print("pushforward . pullback = |H| identity:")
print((pushforward_matrix(w8, wK, proj) @ p).astype(int))
print("intertwining defect over both generators:",
      intertwining_defect(w8, wK, proj))
