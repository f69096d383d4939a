"""Even integral lattices: construction, signatures, complements, file format.

A lattice is its Gram matrix.  All arithmetic is exact: Python ints and
Fractions throughout, no floating point.  Vectors are coordinate tuples in
the lattice basis; dual vectors are Fraction tuples in the same basis.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from .exactla import (
    bareiss_det,
    hnf,
    invariant_factors,
    kernel_basis,
    mat_mul,
    rational_congruent_diagonal,
    transpose,
)


class LatticeError(ValueError):
    pass


@dataclass(frozen=True)
class Signature:
    positive: int
    negative: int

    def __add__(self, other: "Signature") -> "Signature":
        return Signature(self.positive + other.positive, self.negative + other.negative)

    @property
    def rank(self) -> int:
        return self.positive + self.negative


@dataclass(frozen=True)
class IntegerLattice:
    """An even nondegenerate integral lattice given by its Gram matrix.

    ``blocks`` marks an orthogonal block structure (start, size) used by the
    fast local-density counters; ``hyperbolic_split`` marks basis rows (i, j)
    spanning a unimodular hyperbolic plane used by the fast point enumerator.
    Both are bookkeeping only and do not affect equality.
    """

    gram: tuple[tuple[int, ...], ...]
    name: str | None = field(default=None, compare=False)
    blocks: tuple[tuple[int, int], ...] | None = field(default=None, compare=False)
    hyperbolic_split: tuple[int, int] | None = field(default=None, compare=False)

    def __post_init__(self):
        g = tuple(tuple(int(x) for x in row) for row in self.gram)
        object.__setattr__(self, "gram", g)
        n = len(g)
        if any(len(row) != n for row in g):
            raise LatticeError("gram matrix must be square")
        for i in range(n):
            if g[i][i] % 2:
                raise LatticeError("gram diagonal must be even (even lattice)")
            for j in range(n):
                if g[i][j] != g[j][i]:
                    raise LatticeError("gram matrix must be symmetric")
        det = bareiss_det([list(r) for r in g]) if n else 1
        if det == 0:
            raise LatticeError("gram matrix is degenerate")
        object.__setattr__(self, "_det", det)

    # -- basic data --------------------------------------------------------

    @property
    def rank(self) -> int:
        return len(self.gram)

    @property
    def det(self) -> int:
        return self._det

    def pairing(self, x, y) -> Fraction:
        g = self.gram
        n = self.rank
        return sum(Fraction(x[i]) * g[i][j] * Fraction(y[j])
                   for i in range(n) for j in range(n) if g[i][j])

    def q_of(self, x) -> Fraction:
        return self.pairing(x, x) / 2

    def signature(self) -> Signature:
        _, diag = rational_congruent_diagonal([list(r) for r in self.gram])
        if any(d == 0 for d in diag):
            raise LatticeError("gram matrix is degenerate")
        pos = sum(1 for d in diag if d > 0)
        return Signature(pos, self.rank - pos)

    def discriminant_group(self):
        from .fqm import discriminant_group
        return discriminant_group(self)

    # -- serialization -----------------------------------------------------

    def to_json(self) -> str:
        obj = {"gram": [list(r) for r in self.gram]}
        if self.name:
            obj["name"] = self.name
        if self.hyperbolic_split is not None:
            obj["hyperbolic_split"] = {"rows": list(self.hyperbolic_split)}
        if self.blocks is not None:
            obj["blocks"] = [list(b) for b in self.blocks]
        return json.dumps(obj, indent=1)


# ---------------------------------------------------------------------------
# constructors

_E8_GRAM = (
    (2, 0, -1, 0, 0, 0, 0, 0),
    (0, 2, 0, -1, 0, 0, 0, 0),
    (-1, 0, 2, -1, 0, 0, 0, 0),
    (0, -1, -1, 2, -1, 0, 0, 0),
    (0, 0, 0, -1, 2, -1, 0, 0),
    (0, 0, 0, 0, -1, 2, -1, 0),
    (0, 0, 0, 0, 0, -1, 2, -1),
    (0, 0, 0, 0, 0, 0, -1, 2),
)


def hyperbolic_plane() -> IntegerLattice:
    return IntegerLattice(((0, 1), (1, 0)), name="U",
                          blocks=((0, 2),), hyperbolic_split=(0, 1))


def rank1(two_m: int) -> IntegerLattice:
    if two_m == 0 or two_m % 2:
        raise LatticeError("rank1 parameter must be a nonzero even integer")
    return IntegerLattice(((two_m,),), name=f"rank1({two_m})", blocks=((0, 1),))


def e8(scale: int = 1) -> IntegerLattice:
    if scale == 0:
        raise LatticeError("rescale by zero")
    g = tuple(tuple(scale * x for x in row) for row in _E8_GRAM)
    return IntegerLattice(g, name="E8" if scale == 1 else f"E8({scale})",
                          blocks=((0, 8),))


def direct_sum(*lats: IntegerLattice) -> IntegerLattice:
    n = sum(L.rank for L in lats)
    g = [[0] * n for _ in range(n)]
    blocks = []
    split = None
    off = 0
    for L in lats:
        for i in range(L.rank):
            for j in range(L.rank):
                g[off + i][off + j] = L.gram[i][j]
        if L.blocks is not None:
            blocks.extend((off + s, sz) for s, sz in L.blocks)
        else:
            blocks.append((off, L.rank))
        if split is None and L.hyperbolic_split is not None:
            split = (off + L.hyperbolic_split[0], off + L.hyperbolic_split[1])
        off += L.rank
    name = "+".join(L.name or "?" for L in lats)
    return IntegerLattice(tuple(tuple(r) for r in g), name=name,
                          blocks=tuple(blocks), hyperbolic_split=split)


def rescale(L: IntegerLattice, m: int) -> IntegerLattice:
    if m == 0:
        raise LatticeError("rescale by zero")
    g = tuple(tuple(m * x for x in row) for row in L.gram)
    split = L.hyperbolic_split if m == 1 else None
    return IntegerLattice(g, name=f"{L.name}({m})" if L.name else None,
                          blocks=L.blocks, hyperbolic_split=split)


def k3_lattice() -> IntegerLattice:
    """U + U + U + E8(-1) + E8(-1), the even unimodular lattice of signature (3,19)."""
    U = hyperbolic_plane()
    return direct_sum(U, U, U, e8(-1), e8(-1))


def make_named(name: str, params=()) -> IntegerLattice:
    params = list(params)
    if name == "U":
        return hyperbolic_plane()
    if name == "rank1":
        if len(params) != 1:
            raise LatticeError("rank1 takes one parameter 2m")
        return rank1(params[0])
    if name == "E8":
        return e8(1)
    if name == "E8(-1)":
        return e8(-1)
    if name == "K3":
        return k3_lattice()
    raise LatticeError(f"unknown lattice name {name!r}")


# ---------------------------------------------------------------------------
# sublattices and complements

def saturation_index(rows) -> int:
    """Index of the span of integer rows inside its saturation (1 = primitive)."""
    facs = invariant_factors([list(r) for r in rows])
    if len(facs) != len(rows):
        raise LatticeError("rows are linearly dependent")
    out = 1
    for f in facs:
        out *= f
    return out


def orthogonal_complement_basis(L: IntegerLattice, sub_rows):
    """Basis rows (in L's coordinates) of {x in L : (x, s) = 0 for rows s}.

    Requires the rows to span a primitive sublattice.  The basis is put in
    Hermite normal form, so the result is deterministic.
    """
    rows = [list(map(int, r)) for r in sub_rows]
    if rows and saturation_index(rows) != 1:
        raise LatticeError("sublattice is not primitive (saturation index > 1)")
    if not rows:
        return [list(r) for r in hnf([[int(i == j) for j in range(L.rank)]
                                      for i in range(L.rank)])]
    pair = mat_mul(rows, [list(r) for r in L.gram])
    ker = kernel_basis(pair)
    return hnf(ker)


def orthogonal_complement(L: IntegerLattice, sub_rows) -> IntegerLattice:
    basis = orthogonal_complement_basis(L, sub_rows)
    if not basis:
        return IntegerLattice(())
    g = mat_mul(mat_mul(basis, [list(r) for r in L.gram]), transpose(basis))
    return IntegerLattice(tuple(tuple(r) for r in g))


# ---------------------------------------------------------------------------
# rational isotropy (Hasse-Minkowski for rank <= 4)

def _square_free_part(x: Fraction) -> int:
    n = x.numerator * x.denominator
    out = 1
    d = 2
    m = abs(n)
    while d * d <= m:
        while m % (d * d) == 0:
            m //= d * d
        if m % d == 0:
            m //= d
            out *= d
        d += 1
    out *= m
    return out if n > 0 else -out


def _prime_factors(n: int):
    n = abs(n)
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out.append(n)
    return out


def hilbert_symbol(a: int, b: int, p) -> int:
    """Hilbert symbol (a, b)_p for nonzero integers; p a prime or 'oo'."""
    if a == 0 or b == 0:
        raise ValueError("hilbert symbol needs nonzero arguments")
    if p == "oo":
        return -1 if (a < 0 and b < 0) else 1

    def split(x):
        v = 0
        while x % p == 0:
            x //= p
            v += 1
        return v, x

    alpha, u = split(a)
    beta, v = split(b)
    if p == 2:
        def eps(x):
            return ((x - 1) // 2) % 2

        def omega(x):
            return ((x * x - 1) // 8) % 2

        e = eps(u) * eps(v) + alpha * omega(v) + beta * omega(u)
        return -1 if e % 2 else 1
    legendre_u = pow(u % p, (p - 1) // 2, p)
    legendre_v = pow(v % p, (p - 1) // 2, p)
    lu = -1 if legendre_u == p - 1 else 1
    lv = -1 if legendre_v == p - 1 else 1
    sign = 1
    if (alpha * beta) % 2 and (p - 1) // 2 % 2:
        sign = -sign
    if beta % 2 and lu == -1:
        sign = -sign
    if alpha % 2 and lv == -1:
        sign = -sign
    return sign


def _is_padic_square(d: int, p) -> bool:
    if p == "oo":
        return d > 0
    v = 0
    while d % p == 0:
        d //= p
        v += 1
    if v % 2:
        return False
    if p == 2:
        return d % 8 == 1
    return pow(d % p, (p - 1) // 2, p) == 1


def _isotropic_over_qp(diag: list[int], p) -> bool:
    n = len(diag)
    if p == "oo":
        return any(d > 0 for d in diag) and any(d < 0 for d in diag)
    d = 1
    for x in diag:
        d *= x
    hasse = 1
    for i in range(n):
        for j in range(i + 1, n):
            hasse *= hilbert_symbol(diag[i], diag[j], p)
    if n == 2:
        return _is_padic_square(-d, p)
    if n == 3:
        return hilbert_symbol(-1, -d, p) == hasse
    if n == 4:
        if not _is_padic_square(d, p):
            return True
        return hasse == hilbert_symbol(-1, -1, p)
    raise ValueError("rank must be <= 4")


def is_anisotropic_over_q(L: IntegerLattice) -> bool:
    """True iff Q(x) = 0 has no nonzero rational solution (rank <= 4 only).

    Indefinite forms of rank >= 5 are always isotropic; asking is a caller
    bug, so that case raises.
    """
    if L.rank >= 5:
        raise LatticeError("rank >= 5: isotropy test not supported "
                           "(indefinite forms of rank >= 5 are always isotropic)")
    if L.rank == 0:
        return True
    _, diag = rational_congruent_diagonal([list(r) for r in L.gram])
    sq = [_square_free_part(d) for d in diag]
    if L.rank == 1:
        return True
    if L.rank == 2:
        prod = -sq[0] * sq[1]
        if prod < 0:
            return True
        from math import isqrt
        return isqrt(prod) ** 2 != prod
    places = ["oo", 2]
    support = 1
    for x in sq:
        support *= x
    for p in _prime_factors(support):
        if p != 2:
            places.append(p)
    # isotropic over Q iff isotropic at every place (Hasse-Minkowski);
    # places away from 2*det are automatic for rank >= 3
    return not all(_isotropic_over_qp(sq, p) for p in places)


# ---------------------------------------------------------------------------
# lattice file format

def lattice_from_json(text: str) -> IntegerLattice:
    obj = json.loads(text)
    if not isinstance(obj, dict) or "gram" not in obj:
        raise LatticeError("lattice file needs a 'gram' field")
    gram = obj["gram"]
    n = len(gram)
    for row in gram:
        if len(row) != n or any(not isinstance(x, int) for x in row):
            raise LatticeError("gram must be a square array of integers")
    split = None
    if "hyperbolic_split" in obj:
        rows = obj["hyperbolic_split"]["rows"]
        i, j = int(rows[0]), int(rows[1])
        if not (gram[i][i] == 0 and gram[j][j] == 0 and gram[i][j] == 1):
            raise LatticeError("hyperbolic_split rows do not span a unimodular "
                               "hyperbolic plane")
        split = (i, j)
    blocks = None
    if "blocks" in obj:
        blocks = tuple((int(s), int(sz)) for s, sz in obj["blocks"])
        cover = []
        for s, sz in blocks:
            cover.extend(range(s, s + sz))
        if sorted(cover) != list(range(n)):
            raise LatticeError("blocks must partition the basis")
        for s, sz in blocks:
            for i in range(n):
                for j in range(s, s + sz):
                    if not (s <= i < s + sz) and gram[i][j]:
                        raise LatticeError("blocks must be orthogonal")
    return IntegerLattice(tuple(tuple(r) for r in gram), name=obj.get("name"),
                          blocks=blocks, hyperbolic_split=split)


def load_lattice(path) -> IntegerLattice:
    with open(path) as fh:
        return lattice_from_json(fh.read())
