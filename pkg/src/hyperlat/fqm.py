"""Finite quadratic modules: discriminant groups with Q/Z-valued forms.

A module is presented by invariant factors d_1 | d_2 | ... (all > 1) together
with the Q-values of the generators and the bilinear pairings between them,
all as Fractions reduced mod 1.  Elements are residue tuples.  Modules built
from a lattice carry generator lifts in the dual lattice, so classes of dual
vectors can be computed; abstract modules (quotients) do not.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm

from .exactla import (
    hnf_rational,
    mat_mul,
    mat_vec,
    smith_normal_form,
    transpose,
)
from .lattices import IntegerLattice

ENUMERATION_GUARD = 10 ** 4


def _mod1(x: Fraction) -> Fraction:
    return Fraction(x) % 1


class FqmError(ValueError):
    pass


@dataclass(frozen=True)
class FiniteQuadraticModule:
    invariant_factors: tuple[int, ...]
    q_diag: tuple[Fraction, ...]
    b_matrix: tuple[tuple[Fraction, ...], ...]
    lattice: IntegerLattice | None = field(default=None, compare=False)
    generator_lifts: tuple[tuple[Fraction, ...], ...] | None = field(default=None, compare=False)
    _class_data: tuple | None = field(default=None, compare=False, repr=False)

    # -- group structure ----------------------------------------------------

    @property
    def order(self) -> int:
        out = 1
        for d in self.invariant_factors:
            out *= d
        return out

    @property
    def ngens(self) -> int:
        return len(self.invariant_factors)

    @property
    def zero(self) -> tuple[int, ...]:
        return (0,) * self.ngens

    @property
    def level(self) -> int:
        """Smallest N with N*Q(x) integral for every x."""
        n = 1
        for q in self.q_diag:
            n = lcm(n, q.denominator)
        for row in self.b_matrix:
            for b in row:
                n = lcm(n, b.denominator)
        return n

    def elements(self):
        """All elements in lexicographic residue order."""
        if self.order > ENUMERATION_GUARD:
            raise FqmError(f"module order {self.order} exceeds enumeration guard")
        return [tuple(r) for r in itertools.product(*(range(d) for d in self.invariant_factors))]

    def reduce(self, elt) -> tuple[int, ...]:
        if len(elt) != self.ngens:
            raise FqmError("wrong number of residues")
        return tuple(int(r) % d for r, d in zip(elt, self.invariant_factors))

    def add(self, x, y):
        return tuple((a + b) % d for a, b, d in zip(x, y, self.invariant_factors))

    def neg(self, x):
        return tuple((-a) % d for a, d in zip(x, self.invariant_factors))

    # -- quadratic structure --------------------------------------------------

    def q_value(self, elt) -> Fraction:
        """Q(elt) as a Fraction in [0, 1)."""
        r = self.reduce(elt)
        total = Fraction(0)
        for i, ri in enumerate(r):
            if ri:
                total += ri * ri * self.q_diag[i]
                for j in range(i + 1, self.ngens):
                    if r[j]:
                        total += ri * r[j] * self.b_matrix[i][j]
        return _mod1(total)

    def bilinear(self, x, y) -> Fraction:
        """b(x, y) = Q(x+y) - Q(x) - Q(y) mod 1, via the stored pairings."""
        x = self.reduce(x)
        y = self.reduce(y)
        total = Fraction(0)
        for i, xi in enumerate(x):
            if xi:
                for j, yj in enumerate(y):
                    if yj:
                        total += xi * yj * self.b_matrix[i][j]
        return _mod1(total)

    # -- lattice provenance ---------------------------------------------------

    def lift(self, elt) -> tuple[Fraction, ...]:
        """A dual vector representing elt (requires lattice provenance)."""
        if self.generator_lifts is None:
            raise FqmError("module has no lattice backing")
        r = self.reduce(elt)
        n = self.lattice.rank
        out = [Fraction(0)] * n
        for ri, g in zip(r, self.generator_lifts):
            if ri:
                for k in range(n):
                    out[k] += ri * g[k]
        return tuple(out)

    def class_of(self, dual_vector) -> tuple[int, ...]:
        """Residues of a dual vector's class (requires lattice provenance)."""
        if self._class_data is None:
            raise FqmError("module has no lattice backing")
        u, kept = self._class_data
        g = [list(r) for r in self.lattice.gram]
        m = mat_vec(g, [Fraction(x) for x in dual_vector])
        if any(x.denominator != 1 for x in m):
            raise FqmError("vector is not in the dual lattice")
        um = mat_vec(u, [int(x) for x in m])
        return tuple(um[i] % self.invariant_factors[idx]
                     for idx, i in enumerate(kept))

    def q_value_of_lift(self, dual_vector) -> Fraction:
        if self.lattice is None:
            raise FqmError("module has no lattice backing")
        return _mod1(self.lattice.q_of(dual_vector))

    def dump_text(self) -> str:
        lines = ["invariant factors: " +
                 (" ".join(str(d) for d in self.invariant_factors) or "(trivial)")]
        for elt in self.elements():
            q = self.q_value(elt)
            lines.append(",".join(str(r) for r in elt) + f" : Q={q.numerator}/{q.denominator}")
        return "\n".join(lines)


def discriminant_group(L: IntegerLattice) -> FiniteQuadraticModule:
    """The finite quadratic module of a lattice, via Smith normal form."""
    g = [list(r) for r in L.gram]
    n = L.rank
    if n == 0:
        return FiniteQuadraticModule((), (), (), lattice=L, generator_lifts=(),
                                     _class_data=([], []))
    d, u, v = smith_normal_form(g)
    kept = [i for i in range(n) if d[i][i] > 1]
    lifts = []
    for i in kept:
        di = d[i][i]
        lifts.append(tuple(Fraction(v[r][i], di) for r in range(n)))
    q_diag = tuple(_mod1(L.q_of(x)) for x in lifts)
    b_mat = tuple(tuple(_mod1(L.pairing(x, y)) for y in lifts) for x in lifts)
    facs = tuple(d[i][i] for i in kept)
    mod = FiniteQuadraticModule(facs, q_diag, b_mat, lattice=L,
                                generator_lifts=tuple(lifts),
                                _class_data=(u, kept))
    if mod.order != abs(L.det):
        raise FqmError("internal error: |discriminant group| != |det|")
    return mod


# ---------------------------------------------------------------------------
# subgroups

@dataclass(frozen=True)
class Subgroup:
    module: FiniteQuadraticModule
    elements: tuple[tuple[int, ...], ...]  # sorted
    generators: tuple[tuple[int, ...], ...] = ()
    is_maximal_isotropic: bool | None = field(default=None, compare=False)

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, elt):
        return tuple(elt) in set(self.elements)

    def is_isotropic(self) -> bool:
        return all(self.module.q_value(e) == 0 for e in self.elements)


def subgroup_generated(D: FiniteQuadraticModule, gens) -> Subgroup:
    gens = [D.reduce(g) for g in gens]
    seen = {D.zero}
    frontier = [D.zero]
    while frontier:
        new = []
        for x in frontier:
            for g in gens:
                y = D.add(x, g)
                if y not in seen:
                    seen.add(y)
                    new.append(y)
        frontier = new
    return Subgroup(D, tuple(sorted(seen)), generators=tuple(gens))


def isotropic_subgroups(D: FiniteQuadraticModule):
    """All isotropic subgroups, with maximal ones flagged.

    Exhaustive: grows subgroups one isotropic generator at a time, so every
    isotropic subgroup is found.  Guarded by the module enumeration bound.
    """
    iso_elts = [e for e in D.elements() if D.q_value(e) == 0]
    found = {}
    trivial = subgroup_generated(D, [])
    found[trivial.elements] = trivial
    frontier = [trivial]
    while frontier:
        nxt = []
        for H in frontier:
            have = set(H.elements)
            for x in iso_elts:
                if x in have:
                    continue
                H2 = subgroup_generated(D, list(H.generators) + [x])
                if H2.elements in found:
                    continue
                if H2.is_isotropic():
                    found[H2.elements] = H2
                    nxt.append(H2)
        frontier = nxt
    groups = sorted(found.values(), key=lambda h: (h.order, h.elements))
    out = []
    for H in groups:
        have = set(H.elements)
        maximal = True
        for x in iso_elts:
            if x in have:
                continue
            if subgroup_generated(D, list(H.generators) + [x]).is_isotropic():
                maximal = False
                break
        out.append(Subgroup(D, H.elements, H.generators, is_maximal_isotropic=maximal))
    return out


def orthogonal_subgroup(D: FiniteQuadraticModule, H: Subgroup) -> Subgroup:
    """{x in D : b(x, h) = 0 mod 1 for all h in H}."""
    gens = H.generators if H.generators else H.elements
    elts = [x for x in D.elements()
            if all(D.bilinear(x, h) == 0 for h in gens)]
    return Subgroup(D, tuple(sorted(elts)), generators=tuple(sorted(elts)))


def _verify_isotropic(D, H):
    if not H.is_isotropic():
        raise FqmError("subgroup is not isotropic")


def quotient_with_projection(D: FiniteQuadraticModule, H: Subgroup):
    """The induced module on (orthogonal of H)/H plus the projection table.

    Returns (K, proj) where proj maps every element of the orthogonal of H to
    its residue tuple in K.  H is re-verified to be isotropic.
    """
    _verify_isotropic(D, H)
    perp = orthogonal_subgroup(D, H)
    if H.order * perp.order != D.order:
        raise FqmError("internal error: |H| * |H perp| != |D|")
    # generating set of the orthogonal subgroup
    gens = []
    spanned = {D.zero}
    for x in perp.elements:
        if x not in spanned:
            gens.append(x)
            spanned = set(subgroup_generated(D, gens).elements)
    k = len(gens)
    hset = set(H.elements)
    if k == 0:
        K = FiniteQuadraticModule((), (), ())
        return K, {D.zero: ()}
    # relation lattice {c in Z^k : sum c_i g_i in H}
    orders = []
    for g in gens:
        m = 1
        cur = g
        while cur != D.zero:
            cur = D.add(cur, g)
            m += 1
        orders.append(m)
    relations = [[orders[i] if j == i else 0 for j in range(k)] for i in range(k)]
    for combo in itertools.product(*(range(o) for o in orders)):
        elt = D.zero
        for c, g in zip(combo, gens):
            for _ in range(c):
                elt = D.add(elt, g)
        if elt in hset and any(combo):
            relations.append(list(combo))
    d, _, v = smith_normal_form(relations)
    diag = [d[i][i] for i in range(k)]
    new_gens = []
    facs = []
    for i, di in enumerate(diag):
        if di > 1:
            elt = D.zero
            for t in range(k):
                c = v[t][i] % orders[t]
                for _ in range(c):
                    elt = D.add(elt, gens[t])
            new_gens.append(elt)
            facs.append(di)
    q_diag = tuple(D.q_value(g) for g in new_gens)
    b_mat = tuple(tuple(D.bilinear(x, y) for y in new_gens) for x in new_gens)
    K = FiniteQuadraticModule(tuple(facs), q_diag, b_mat)
    proj = {}
    for res in itertools.product(*(range(f) for f in facs)):
        base = D.zero
        for r, g in zip(res, new_gens):
            for _ in range(r):
                base = D.add(base, g)
        for h in H.elements:
            proj[D.add(base, h)] = tuple(res)
    if set(proj) != set(perp.elements):
        raise FqmError("internal error: projection does not cover the orthogonal")
    return K, proj


def quotient_module(D: FiniteQuadraticModule, H: Subgroup) -> FiniteQuadraticModule:
    K, _ = quotient_with_projection(D, H)
    return K


def overlattice_with_basis(L: IntegerLattice, H: Subgroup):
    """Even lattice generated by L and dual lifts of an isotropic subgroup.

    Returns (lattice, basis) where basis rows are the new lattice's basis
    written in L's coordinates (Fractions).
    """
    D = H.module
    if D.lattice is not L and D.lattice != L:
        raise FqmError("subgroup does not live in the discriminant group of L")
    _verify_isotropic(D, H)
    n = L.rank
    rows = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for g in (H.generators or H.elements):
        rows.append(list(D.lift(g)))
    basis = hnf_rational(rows)
    if len(basis) != n:
        raise FqmError("internal error: overlattice basis is not full rank")
    gram = mat_mul(mat_mul(basis, [list(r) for r in L.gram]), transpose(basis))
    for i in range(n):
        for j in range(n):
            if gram[i][j].denominator != 1:
                raise FqmError("overlattice form is not integral; subgroup not isotropic?")
        if gram[i][i].numerator % 2:
            raise FqmError("overlattice form is odd; subgroup not isotropic?")
    g2 = tuple(tuple(int(x) for x in row) for row in gram)
    out = IntegerLattice(g2, name=(L.name or "L") + "^H")
    if abs(out.det) * H.order ** 2 != abs(L.det):
        raise FqmError("internal error: overlattice determinant mismatch")
    return out, basis


def overlattice(L: IntegerLattice, H: Subgroup) -> IntegerLattice:
    out, _ = overlattice_with_basis(L, H)
    return out
