"""Prediction calculators: expected point counts, boundary-corrected degrees,
and the K3-lattice specializations.

The main term is mu(S) (2 pi)^(1+b/2) n^(b/2) / (sqrt|D| Gamma(1+b/2)) times
the truncated singular series; geometric inputs (the mass mu(S), boundary
degrees) are user-supplied scalars.  Representability of a norm on a coset
of a Lorentzian sublattice is exact in ranks 1 and 2 (Pell-bounded search)
and a flagged local heuristic above that.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

import mpmath

from .densities import (
    eisenstein_coefficient,
    gamma_half_integer,
    is_representable,
    singular_series,
    _mpf_frac,
)
from .fqm import discriminant_group, isotropic_subgroups
from .lattices import (
    IntegerLattice,
    LatticeError,
    direct_sum,
    e8,
    hyperbolic_plane,
    is_anisotropic_over_q,
    k3_lattice,
    orthogonal_complement,
    rank1,
    saturation_index,
)
from .qseries import u_coeff


class PredictError(ValueError):
    pass


@dataclass(frozen=True)
class PredictionInput:
    lattice: IntegerLattice
    gamma: tuple
    n: Fraction
    mu_s: float
    boundary_degrees: tuple = ()          # pairs (CuspDatum, degree)
    prime_bound: int = 100

    def __post_init__(self):
        object.__setattr__(self, "n", Fraction(self.n))
        b = self.lattice.rank - 2
        if b < 3:
            raise PredictError("predictions want signature (2,b) with b >= 3")


@dataclass(frozen=True)
class PredictionResult:
    value: object                  # mpmath mpf
    error_order: str
    representable: bool
    series: object
    prime_bound: int

    def __float__(self):
        return float(self.value)


def main_term(V: IntegerLattice, gamma, n, mu_s: float, prime_bound: int,
              guard=None) -> PredictionResult:
    """mu(S) (2 pi)^(1+b/2) n^(b/2) / (sqrt|D| Gamma(1+b/2)) * product mu_p."""
    n = Fraction(n)
    b = V.rank - 2
    error_order = f"O(n^((2+b)/4+eps)) = O(n^({Fraction(2 + b, 4)}+eps)) for projective bases"
    kwargs = {} if guard is None else {"guard": guard}
    if n <= 0 or not is_representable(gamma, n, V, **kwargs):
        return PredictionResult(mpmath.mpf(0), error_order, False, None, prime_bound)
    ss = singular_series(gamma, n, V, prime_bound, **kwargs)
    gamma_rat, sqrt_pi = gamma_half_integer(b + 2)
    with mpmath.workdps(50):
        pi_exp = mpmath.mpf(2 + b - sqrt_pi) / 2
        val = mpmath.mpf(2) ** (1 + mpmath.mpf(b) / 2)
        val *= mpmath.pi ** pi_exp
        val *= _mpf_frac(n) ** (mpmath.mpf(b) / 2)
        val /= mpmath.sqrt(abs(V.det))
        val /= _mpf_frac(gamma_rat)
        val *= _mpf_frac(ss.truncated_product)
        val *= mpmath.mpf(mu_s)
    return PredictionResult(val, error_order, ss.truncated_product > 0,
                            ss, prime_bound)


def predict_count(inp: PredictionInput, guard=None) -> PredictionResult:
    return main_term(inp.lattice, inp.gamma, inp.n, inp.mu_s, inp.prime_bound,
                     guard=guard)


def degree_prediction(inp: PredictionInput, guard=None):
    """Main term plus the boundary corrections sum_F u(gamma, n, F) deg_F.

    Strongly primitive cusps are annotated with the sharper error order
    n^(b/2 - 1 + eps).  Returns (PredictionResult, list of per-cusp rows).
    """
    base = predict_count(inp, guard=guard)
    total = base.value
    rows = []
    c = eisenstein_coefficient(inp.gamma, inp.n, inp.lattice, inp.prime_bound,
                               **({} if guard is None else {"guard": guard}))
    b = inp.lattice.rank - 2
    for datum, degree in inp.boundary_degrees:
        u = u_coeff(inp.gamma, inp.n, datum, c)
        contrib = mpmath.mpf(float(u)) * degree
        total = total + contrib
        order = (f"O(n^({Fraction(b, 2) - 1}+eps))" if datum.strongly_primitive
                 else f"O(n^({Fraction(b, 2)}))")
        rows.append({"cusp": datum, "degree": degree, "u": u,
                     "sharper_order": order})
    return PredictionResult(total, base.error_order, base.representable,
                            base.series, inp.prime_bound), rows


# ---------------------------------------------------------------------------
# exact representability on Lorentzian cosets

def _pell_fundamental(d: int):
    """Smallest (x, y), x, y > 0 with x^2 - d y^2 = 1; d > 0 not a square.

    Continued fraction expansion of sqrt(d).
    """
    a0 = isqrt(d)
    if a0 * a0 == d:
        raise ValueError("d is a square")
    m, den, a = 0, 1, a0
    num1, num = 1, a0
    den1, den2 = 0, 1
    while num * num - d * den2 * den2 != 1:
        m = den * a - m
        den = (d - m * m) // den
        a = (a0 + m) // den
        num1, num = num, a * num + num1
        den1, den2 = den2, a * den2 + den1
    return num, den2


@dataclass(frozen=True)
class RepresentabilityResult:
    representable: bool
    exact: bool                   # False means local-solvability heuristic
    witness: tuple | None = None


def represents_on_coset(P: IntegerLattice, gamma, two_n,
                        box_guard: int = 10 ** 7) -> RepresentabilityResult:
    """Does some t in gamma + P have (t.t) = two_n?

    Exact for rank 1 (square condition) and rank 2 (search bounded through
    the stable automorph of the Pell equation); for higher rank, or when the
    bounded search would exceed the guard, local solvability is reported
    with exact=False.
    """
    two_n = Fraction(two_n)
    D = discriminant_group(P)
    if gamma is None:
        gamma = D.zero
    lift = D.lift(D.reduce(gamma)) if D.ngens else tuple(Fraction(0) for _ in range(P.rank))
    if (P.q_of(lift) - two_n / 2).denominator != 1:
        return RepresentabilityResult(False, True)
    if P.rank == 1:
        d = Fraction(P.gram[0][0], 2)
        target = two_n / (2 * d)
        if target < 0:
            return RepresentabilityResult(False, True)
        root_num = isqrt(target.numerator)
        root_den = isqrt(target.denominator)
        if root_num ** 2 != target.numerator or root_den ** 2 != target.denominator:
            return RepresentabilityResult(False, True)
        root = Fraction(root_num, root_den)
        for sgn in (root, -root):
            if (sgn - lift[0]).denominator == 1:
                return RepresentabilityResult(True, True, (sgn,))
        return RepresentabilityResult(False, True)
    if P.rank == 2:
        return _represents_rank2(P, lift, two_n, box_guard)
    # higher rank: local solvability of the shifted form (heuristic)
    return RepresentabilityResult(_locally_plausible(P, lift, two_n), False)


def _stable_automorph(P: IntegerLattice):
    """An isometry of P acting trivially on the discriminant group.

    Built from the Pell automorph of the binary form; raised to a power so
    all generator lifts are fixed modulo P.
    """
    a = Fraction(P.gram[0][0], 2)
    b = Fraction(P.gram[0][1])
    c = Fraction(P.gram[1][1], 2)
    disc = b * b - 4 * a * c
    if disc <= 0 or floor_is_square(disc):
        raise PredictError("form is not anisotropic Lorentzian of rank 2")
    dd = int(disc)
    x, y = _pell_fundamental(dd)
    t, u = 2 * x, 2 * y
    # automorph of a X^2 + b XY + c Y^2 with t^2 - disc u^2 = 4, transposed
    # for the row-vector action used throughout
    m = [[Fraction(t - b * u, 2), a * u],
         [-c * u, Fraction(t + b * u, 2)]]
    if any(x.denominator != 1 for row in m for x in row):
        m = _mat2_mul(m, m)
    m = [[int(x) for x in row] for row in m]
    D = discriminant_group(P)
    power = [[1, 0], [0, 1]]
    for _ in range(1, 2 * D.order * 4 + 2):
        power = _mat2_mul(power, m)
        if _acts_trivially(P, D, power):
            return power
    raise PredictError("no stable power of the automorph found")


def _mat2_mul(a, b):
    return [[a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]],
            [a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]]]


def _acts_trivially(P, D, m) -> bool:
    for g in (D.generator_lifts or ()):
        img = (m[0][0] * g[0] + m[1][0] * g[1], m[0][1] * g[0] + m[1][1] * g[1])
        diff = (img[0] - g[0], img[1] - g[1])
        if any(x.denominator != 1 for x in diff):
            return False
    # must also be an isometry: t -> t M preserves the Gram
    g = P.gram
    mt_g_m = [[sum(m[i][k] * g[k][l] * m[j][l] for k in range(2) for l in range(2))
               for j in range(2)] for i in range(2)]
    return all(mt_g_m[i][j] == g[i][j] for i in range(2) for j in range(2))


def floor_is_square(x: Fraction) -> bool:
    if x < 0 or x.denominator != 1:
        return False
    r = isqrt(x.numerator)
    return r * r == x.numerator


def _represents_rank2(P: IntegerLattice, lift, two_n, box_guard):
    """Bounded exact search: in eigencoordinates of the stable automorph the
    quantity u^2 + disc v^2 scales by the eigenvalue squared along an orbit,
    and its product structure pins some orbit representative inside a window
    of size (eigenvalue^2 + 1) |4 a n|; searching that window is complete."""
    mm = _stable_automorph(P)
    a = Fraction(P.gram[0][0], 2)
    b = Fraction(P.gram[0][1])
    c = Fraction(P.gram[1][1], 2)
    disc = b * b - 4 * a * c
    n = two_n / 2
    trace = abs(mm[0][0] + mm[1][1])
    mu2 = Fraction(trace * trace + 1)  # safe overestimate of eigenvalue^2
    bound = (mu2 + 2) * (abs(n) + 1)
    # majorant: R = (|2aX + bY|^2 + disc Y^2) / (4a') style; use coordinates
    # through u = 2aX + bY, v = Y: Q = (u^2 - disc v^2)/(4a): R = (u^2 + disc v^2)/(4|a|)
    scale = 4 * abs(a)
    rmax = bound * scale
    vmax = floor_sqrt_frac(rmax / disc)
    searched = 0
    for yz in range(-int(vmax) - 2, int(vmax) + 3):
        yy = yz + lift[1]
        rem = rmax - disc * yy * yy
        if rem < 0:
            continue
        umax = floor_sqrt_frac(rem)
        # u = 2 a X + b Y with X = xz + lift[0]
        # X range from |u| <= umax
        lo = (-umax - b * yy) / (2 * a) - lift[0]
        hi = (umax - b * yy) / (2 * a) - lift[0]
        if lo > hi:
            lo, hi = hi, lo
        xz = int(lo) - 2
        while xz <= int(hi) + 2:
            searched += 1
            if searched > box_guard:
                return RepresentabilityResult(
                    _locally_plausible(P, lift, two_n), False)
            xx = xz + lift[0]
            if a * xx * xx + b * xx * yy + c * yy * yy == n:
                return RepresentabilityResult(True, True, (xx, yy))
            xz += 1
    return RepresentabilityResult(False, True)


def floor_sqrt_int(x: int) -> int:
    return isqrt(x) if x >= 0 else 0


def floor_sqrt_frac(x: Fraction) -> int:
    if x < 0:
        return 0
    return isqrt(x.numerator * x.denominator) // x.denominator


def _locally_plausible(P: IntegerLattice, lift, two_n) -> bool:
    """Necessary congruence conditions at small moduli (heuristic)."""
    n = Fraction(two_n) / 2
    moduli = (4, 9, 25, 49, 8, 27, 16) if P.rank <= 2 else (4, 8, 9, 5, 7)
    for a in moduli:
        found = False
        for z in itertools.product(range(a), repeat=P.rank):
            vec = tuple(Fraction(zz) + lift[k] for k, zz in enumerate(z))
            if (P.q_of(vec) - n) % a == 0:
                found = True
                break
        if not found:
            return False
    return True


# ---------------------------------------------------------------------------
# K3 specializations

_K3_RANK = 22


def k3_sublattice(two_d: int | None = None, rows=None) -> tuple[IntegerLattice, tuple]:
    """A primitive Lorentzian sublattice of the rank-22 unimodular lattice.

    Either the canonical rank-1 member of square 2d, embedded as e + d f in
    the first hyperbolic block, or explicit coordinate rows.  Returns
    (P, rows in ambient coordinates).
    """
    if rows is None:
        if two_d is None or two_d <= 0 or two_d % 2:
            raise PredictError("canonical sublattice wants a positive even square")
        d = two_d // 2
        row = [1, d] + [0] * (_K3_RANK - 2)
        return rank1(two_d), (tuple(row),)
    rows = tuple(tuple(int(x) for x in r) for r in rows)
    amb = k3_lattice()
    if any(len(r) != _K3_RANK for r in rows):
        raise PredictError("sublattice rows must have 22 coordinates")
    gram = [[int(amb.pairing(x, y)) for y in rows] for x in rows]
    try:
        return IntegerLattice(tuple(tuple(r) for r in gram)), rows
    except LatticeError as exc:
        raise PredictError(f"sublattice rows are degenerate: {exc}") from exc


@dataclass(frozen=True)
class K3Prediction:
    p_lattice: IntegerLattice
    v_lattice: IntegerLattice
    rho: int
    exponent: Fraction                 # n-exponent 10 - rho/2
    prediction: PredictionResult
    coset_representable: RepresentabilityResult
    disc_match: bool


def _complement_of(rows) -> IntegerLattice:
    amb = k3_lattice()
    comp = orthogonal_complement(amb, [list(r) for r in rows])
    return comp


def _canonical_k3_complement(two_d: int) -> IntegerLattice:
    """Complement of e + d f in the first block: rank1(-2d) + U + U + 2 E8(-1)."""
    U = hyperbolic_plane()
    return direct_sum(rank1(-two_d), U, U, e8(-1), e8(-1))


def k3_predict(gamma, n, mu_s: float, two_d: int | None = None, rows=None,
               prime_bound: int = 100, guard=None) -> K3Prediction:
    """Prediction for norm-n classes in a family with generic Picard lattice P.

    Builds V as the orthogonal complement of P inside the rank-22 unimodular
    lattice, checks the hypotheses (primitive, Lorentzian, anisotropic,
    rank <= 4), evaluates the main term on V, and reports whether the coset
    gamma + P represents 2n (needed for the class to be parabolic).
    """
    n = Fraction(n)
    P, prows = k3_sublattice(two_d, rows)
    rho = P.rank
    if rho > 4:
        raise PredictError("sublattice rank must be <= 4")
    sig = P.signature()
    if sig.positive != 1:
        raise PredictError("sublattice is not Lorentzian")
    if saturation_index([list(r) for r in prows]) != 1:
        raise PredictError("sublattice is not primitively embedded")
    if not is_anisotropic_over_q(P):
        raise PredictError("sublattice is isotropic over Q")
    if rows is None:
        V = _canonical_k3_complement(two_d)
        check = _complement_of(prows)
        if abs(check.det) != abs(V.det):
            raise PredictError("internal error: complement determinant mismatch")
    else:
        V = _complement_of(prows)
    DP = discriminant_group(P)
    DV = discriminant_group(V)
    disc_match = (DP.invariant_factors == DV.invariant_factors and
                  sorted(DP.q_value(e) for e in DP.elements()) ==
                  sorted((-DV.q_value(e)) % 1 for e in DV.elements()))
    b = V.rank - 2
    exponent = Fraction(10) - Fraction(rho, 2)
    assert exponent == Fraction(b, 2)
    if gamma is None:
        gamma = DV.zero
    pred = main_term(V, gamma, n, mu_s, prime_bound, guard=guard)
    # gamma residues are read in both discriminant groups through their
    # matching invariant factors (checked by disc_match)
    rep = represents_on_coset(P, DP.reduce(gamma) if DP.ngens else (), 2 * n)
    return K3Prediction(P, V, rho, exponent, pred, rep, disc_match)


@dataclass(frozen=True)
class CensusRow:
    gamma: tuple
    s: Fraction
    prediction: float
    representable_exact: bool


def elliptic_census_prediction(n_max, mu_s: float, two_d: int | None = None,
                               rows=None, prime_bound: int = 100,
                               guard=None):
    """Cumulative prediction over all classes of norm up to n_max.

    Requires the sublattice's discriminant group to have no nontrivial
    isotropic subgroup; sums the main terms over gamma and admissible s.
    """
    P, prows = k3_sublattice(two_d, rows)
    DP = discriminant_group(P)
    for H in isotropic_subgroups(DP):
        if H.order > 1:
            raise PredictError("discriminant group has a nontrivial isotropic "
                               "subgroup; the census hypothesis fails")
    out_rows = []
    total = mpmath.mpf(0)
    n_max = Fraction(n_max)
    for gamma in DP.elements():
        qg = DP.q_value(gamma)
        s = qg if qg > 0 else qg + 1
        while s <= n_max:
            rep = represents_on_coset(P, gamma, 2 * s)
            if rep.representable:
                k3p = k3_predict(gamma, s, mu_s, two_d=two_d, rows=rows,
                                 prime_bound=prime_bound, guard=guard)
                out_rows.append(CensusRow(gamma, s, float(k3p.prediction.value),
                                          rep.exact))
                total += k3p.prediction.value
            s += 1
    out_rows.sort(key=lambda r: (r.s, r.gamma))
    return total, out_rows