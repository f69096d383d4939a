"""Primitive isotropic planes of a signature (2,b) lattice and their cusp data.

For a plane I the datum packages: the lattice I_Q intersect the dual (whose
index over I is the imprimitivity), the negative definite quotient I-perp/I
with a deterministic integral transversal, and the induced projection from
the orthogonal of I^#/I inside the discriminant group onto the quotient's
discriminant group.  Every identity that the construction promises (the
determinant relation, Q-preservation, fiber sizes) is checked on the spot.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from .exactla import (
    hnf,
    kernel_basis,
    mat_mul,
    mat_vec,
    smith_normal_form,
    solve_fraction,
    solve_integer,
    transpose,
    unimodular_inverse,
)
from .fqm import FiniteQuadraticModule, Subgroup, discriminant_group, orthogonal_subgroup, subgroup_generated
from .lattices import IntegerLattice

_PLANE_SEARCH_GUARD = 10 ** 7


class CuspError(ValueError):
    pass


@dataclass(frozen=True)
class CuspDatum:
    ambient: IntegerLattice
    plane_basis: tuple[tuple[int, ...], ...]          # 2 x r, HNF-canonical
    sharp_basis: tuple[tuple[Fraction, ...], ...]     # basis of I_Q cap dual
    imprimitivity: int                                # N_F = |I^# / I|
    kf_lattice: IntegerLattice                        # induced form on I-perp/I
    kf_basis: tuple[tuple[int, ...], ...]             # transversal rows in V
    strongly_primitive: bool
    ambient_disc: FiniteQuadraticModule = field(compare=False)
    kf_disc: FiniteQuadraticModule = field(compare=False)
    h_subgroup: Subgroup = field(compare=False)       # I^#/I inside D(V)
    h_perp: Subgroup = field(compare=False)
    projection_to_kf: dict = field(compare=False)     # elt of H-perp -> K residues


def _is_isotropic_pair(L: IntegerLattice, rows) -> bool:
    b0, b1 = rows
    return (L.q_of(b0) == 0 and L.q_of(b1) == 0 and L.pairing(b0, b1) == 0)


def cusp_datum(V: IntegerLattice, plane_rows) -> CuspDatum:
    """Full cusp datum for a primitive totally isotropic plane of V."""
    rows = [list(map(int, r)) for r in plane_rows]
    if len(rows) != 2:
        raise CuspError("a plane needs exactly two basis rows")
    if not _is_isotropic_pair(V, rows):
        raise CuspError("plane is not totally isotropic")
    canon = hnf(rows)
    if len(canon) != 2:
        raise CuspError("rows are linearly dependent")
    from .lattices import saturation_index
    if saturation_index(canon) != 1:
        raise CuspError("plane is not primitive (saturation index > 1)")
    b = canon
    g = [list(r) for r in V.gram]
    r = V.rank

    # I^# = I_Q cap V-dual: c.B with c.(B G) integral
    m = mat_mul(b, g)
    d, u, _ = smith_normal_form(m)
    d1, d2 = d[0][0], d[1][1]
    sharp = []
    for i, di in enumerate((d1, d2)):
        row = [Fraction(sum(u[i][k] * b[k][j] for k in range(2)), di)
               for j in range(r)]
        sharp.append(tuple(row))
    n_f = d1 * d2

    disc = discriminant_group(V)
    h_gens = [disc.class_of(y) for y in sharp]
    h_sub = subgroup_generated(disc, h_gens)
    if h_sub.order != n_f:
        raise CuspError("internal error: |I^#/I| != product of elementary divisors")
    if not h_sub.is_isotropic():
        raise CuspError("internal error: I^#/I is not isotropic")

    # I-perp and a transversal completing I
    perp_rows = kernel_basis(m)
    coords = []
    for row in b:
        c = solve_integer(transpose(perp_rows), row)
        if c is None:
            raise CuspError("internal error: plane not inside its own orthogonal")
        coords.append(c)
    d2m, _, v2 = smith_normal_form(coords)
    if d2m[0][0] != 1 or d2m[1][1] != 1:
        raise CuspError("internal error: plane not saturated in its orthogonal")
    v2_inv = unimodular_inverse(v2)
    adapted = mat_mul(v2_inv, perp_rows)
    transversal = adapted[2:]
    kf_gram = mat_mul(mat_mul(transversal, g), transpose(transversal))
    kf = IntegerLattice(tuple(tuple(int(x) for x in row) for row in kf_gram),
                        name="KF")
    sig = kf.signature()
    if sig.positive != 0:
        raise CuspError("induced form on I-perp/I is not negative definite")
    if abs(V.det) != abs(kf.det) * n_f ** 2:
        raise CuspError("determinant identity |det V| = |det K| N^2 fails")

    kf_disc = discriminant_group(kf)
    h_perp = orthogonal_subgroup(disc, h_sub)
    if h_perp.order * n_f != disc.order:
        raise CuspError("|H perp| != |D| / N")

    # project every element of H-perp into K's discriminant group
    pairing_rows = [[int(x) for x in mat_vec(g, list(y))] for y in sharp]
    proj = {}
    for elt in h_perp.elements:
        x = list(disc.lift(elt))
        target = []
        for prow in pairing_rows:
            val = sum(Fraction(pc) * xc for pc, xc in zip(prow, x))
            if val.denominator != 1:
                raise CuspError("element is not orthogonal to I^#")
            target.append(int(val))
        v = solve_integer(pairing_rows, target)
        if v is None:
            raise CuspError("internal error: cannot correct the lift along V")
        x2 = [xc - vc for xc, vc in zip(x, v)]
        # x2 is orthogonal to I, hence a rational combination of I-perp rows
        c = solve_fraction(transpose(adapted), x2)
        cls = kf_disc.class_of(c[2:])
        if kf_disc.q_value(cls) != disc.q_value(elt):
            raise CuspError("projection does not preserve Q")
        proj[elt] = cls
    if set(proj.values()) != set(kf_disc.elements()):
        raise CuspError("projection is not onto the quotient discriminant group")
    counts = {}
    for cls in proj.values():
        counts[cls] = counts.get(cls, 0) + 1
    if any(c != n_f for c in counts.values()):
        raise CuspError("projection fibers do not all have size N")

    return CuspDatum(
        ambient=V,
        plane_basis=tuple(tuple(row) for row in b),
        sharp_basis=tuple(sharp),
        imprimitivity=n_f,
        kf_lattice=kf,
        kf_basis=tuple(tuple(int(x) for x in row) for row in transversal),
        strongly_primitive=(n_f == 1),
        ambient_disc=disc,
        kf_disc=kf_disc,
        h_subgroup=h_sub,
        h_perp=h_perp,
        projection_to_kf=proj,
    )


def project_class(F: CuspDatum, elt):
    """Class in K's discriminant group of an element of the orthogonal of H."""
    elt = F.ambient_disc.reduce(elt)
    if elt not in F.projection_to_kf:
        raise CuspError("element is not in the orthogonal of I^#/I")
    return F.projection_to_kf[elt]


def _primitive_null_vectors(V: IntegerLattice, bound: int):
    r = V.rank
    if (2 * bound + 1) ** r > _PLANE_SEARCH_GUARD:
        raise CuspError("search box too large; lower the bound")
    out = []
    for coords in itertools.product(range(-bound, bound + 1), repeat=r):
        if not any(coords):
            continue
        first = next(c for c in coords if c)
        if first < 0:
            continue
        g = 0
        for c in coords:
            g = gcd(g, c)
        if g != 1:
            continue
        if V.q_of(coords) == 0:
            out.append(coords)
    return out


def _saturate_plane(rows):
    """Saturation of the span of two integer rows (double kernel), as HNF."""
    ker = kernel_basis(rows)
    sat = kernel_basis(ker) if ker else hnf(rows)
    return hnf(sat)


def find_isotropic_planes(V: IntegerLattice, search_bound: int):
    """All primitive totally isotropic planes with coefficients up to the bound.

    Planes are deduplicated by equality of the saturated sublattice they
    span (not by any group orbit).  Returns the corresponding cusp data,
    sorted by the canonical plane basis.
    """
    sig = V.signature()
    if sig.positive != 2:
        raise CuspError("isotropic plane search wants signature (2, b)")
    nulls = _primitive_null_vectors(V, search_bound)
    seen = set()
    data = []
    for i in range(len(nulls)):
        vi = nulls[i]
        for j in range(i + 1, len(nulls)):
            vj = nulls[j]
            if V.pairing(vi, vj) != 0:
                continue
            plane = _saturate_plane([list(vi), list(vj)])
            if len(plane) != 2:
                continue
            key = tuple(tuple(row) for row in plane)
            if key in seen:
                continue
            seen.add(key)
            if not _is_isotropic_pair(V, plane):
                continue  # saturation can only extend within the rational span
            data.append(cusp_datum(V, plane))
    data.sort(key=lambda d: d.plane_basis)
    return data
