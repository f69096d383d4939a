"""Vector-valued q-expansions with rational exponents and coefficients.

Theta series of negative definite lattices (exact short-vector enumeration),
the quasi-modular weight-2 Eisenstein series, Cauchy products, and the cusp
boundary coefficients built from them.  Exponents live in (1/N)Z with N the
level of the underlying finite quadratic module; coefficients are Fractions.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .exactla import (
    frac_mat_inv,
    gram_schmidt_ldl,
    int_range_of_quadratic,
    lll_reduce_gram,
)
from .fqm import FiniteQuadraticModule, discriminant_group
from .lattices import IntegerLattice


class QSeriesError(ValueError):
    pass


_TRIVIAL_MODULE = FiniteQuadraticModule((), (), ())


@dataclass(frozen=True)
class VectorQSeries:
    """A finite table of q-coefficients, complete up to truncation_order.

    ``coefficients`` maps (element residues, exponent) to a Fraction; the
    support convention is exponent = -Q(element) mod 1 (theta and Eisenstein
    side).  Scalar series live over the trivial module.
    """

    module: FiniteQuadraticModule
    denominator: int
    coefficients: dict
    truncation_order: Fraction
    support_sign: int = -1

    def __post_init__(self):
        for (elt, e), c in self.coefficients.items():
            if e > self.truncation_order:
                raise QSeriesError("coefficient beyond the truncation order")
            if (Fraction(e) * self.denominator).denominator != 1:
                raise QSeriesError("exponent denominator does not divide N")

    def coefficient(self, elt, exponent) -> Fraction:
        e = Fraction(exponent)
        if e > self.truncation_order:
            raise QSeriesError(
                f"series truncated at {self.truncation_order}; asked for {e}")
        return self.coefficients.get((self.module.reduce(elt), e), Fraction(0))

    def is_scalar(self) -> bool:
        return self.module.ngens == 0

    def dump_csv(self) -> str:
        elements = self.module.elements()
        index = {e: i for i, e in enumerate(elements)}
        rows = ["gamma_index,exp_num,exp_den,coeff_num,coeff_den"]
        items = sorted(self.coefficients.items(),
                       key=lambda kv: (kv[0][1], index[kv[0][0]]))
        for (elt, e), c in items:
            rows.append(f"{index[elt]},{e.numerator},{e.denominator},"
                        f"{c.numerator},{c.denominator}")
        return "\n".join(rows)


# ---------------------------------------------------------------------------
# theta series

def _fincke_pohst(a, bound: Fraction):
    """All integer vectors m != sweep with m^T a m <= bound, a posdef Fractions.

    Yields (m, value).  Exact interval pruning from the LDL decomposition.
    """
    n = len(a)
    if n == 0:
        yield (), Fraction(0)
        return
    mu, d = gram_schmidt_ldl(a)
    m = [0] * n
    # value decomposition: F(m) = sum_j d[j] (m_j + sum_{i>j} mu[i][j] m_i)^2
    def rec(j, remaining):
        center = -sum(mu[i][j] * m[i] for i in range(j + 1, n))
        lo, hi = int_range_of_quadratic(center, remaining / d[j])
        for mj in range(lo, hi + 1):
            m[j] = mj
            used = d[j] * (mj - center) ** 2
            if j == 0:
                yield tuple(m), None
            else:
                yield from rec(j - 1, remaining - used)
        m[j] = 0

    yield from rec(n - 1, Fraction(bound))


def theta_series(K: IntegerLattice, order, lll: bool = True) -> VectorQSeries:
    """Theta series of a negative definite lattice up to the given order.

    The coefficient at (gamma, m) counts dual vectors x in gamma + K with
    -Q(x) = m; complete for m <= order.  Enumeration is exact (Fincke-Pohst
    on an LLL-reduced positive form); coefficients are nonnegative integers.
    """
    order = Fraction(order)
    if order < 0:
        raise QSeriesError("order must be >= 0")
    D = discriminant_group(K)
    if K.rank and K.signature().positive > 0:
        raise QSeriesError("theta series wants a negative definite lattice")
    coeffs = {}
    if K.rank == 0:
        coeffs[((), Fraction(0))] = Fraction(1)
        return VectorQSeries(D, 1, coeffs, order)
    # dual vectors: y = G^{-1} m; -2 Q(y) = m^T (-G^{-1}) m
    g = [list(r) for r in K.gram]
    ginv = frac_mat_inv(g)
    a = [[-x for x in row] for row in ginv]  # positive definite
    if lll:
        u, a_red = lll_reduce_gram(a)
    else:
        u, a_red = [[int(i == j) for j in range(K.rank)] for i in range(K.rank)], a
    for m_red, _ in _fincke_pohst(a_red, 2 * order):
        m = [sum(m_red[i] * u[i][j] for i in range(K.rank)) for j in range(K.rank)]
        y = [sum(Fraction(ginv[i][j]) * m[j] for j in range(K.rank))
             for i in range(K.rank)]
        value = -K.q_of(y)
        if value > order:
            continue
        cls = D.class_of(y)
        key = (cls, value)
        coeffs[key] = coeffs.get(key, Fraction(0)) + 1
    return VectorQSeries(D, D.level if D.level else 1, coeffs, order)


def e2_series(order: int) -> VectorQSeries:
    """The quasi-modular series 1 - 24 sum sigma_1(k) q^k up to q^order."""
    if order < 0:
        raise QSeriesError("order must be >= 0")
    coeffs = {((), Fraction(0)): Fraction(1)}
    for k in range(1, order + 1):
        sigma = sum(d for d in range(1, k + 1) if k % d == 0)
        coeffs[((), Fraction(k))] = Fraction(-24 * sigma)
    return VectorQSeries(_TRIVIAL_MODULE, 1, coeffs, Fraction(order))


def multiply(f, g: VectorQSeries) -> VectorQSeries:
    """Cauchy product; f may be a rational scalar or a scalar series."""
    if isinstance(f, (int, Fraction)):
        coeffs = {k: Fraction(f) * c for k, c in g.coefficients.items()}
        return VectorQSeries(g.module, g.denominator, coeffs,
                             g.truncation_order, g.support_sign)
    if not isinstance(f, VectorQSeries):
        raise QSeriesError("left factor must be scalar or a scalar series")
    if not f.is_scalar():
        if g.is_scalar():
            return multiply(g, f)
        raise QSeriesError("one factor must live over the trivial module")
    order = min(f.truncation_order, g.truncation_order)
    coeffs = {}
    for (_, ef), cf in f.coefficients.items():
        if cf == 0:
            continue
        for (elt, eg), cg in g.coefficients.items():
            e = ef + eg
            if e > order:
                continue
            key = (elt, e)
            coeffs[key] = coeffs.get(key, Fraction(0)) + cf * cg
    coeffs = {k: c for k, c in coeffs.items() if c != 0}
    return VectorQSeries(g.module, g.denominator, coeffs, order, g.support_sign)


def pullback_series(f: VectorQSeries, big_module: FiniteQuadraticModule,
                    projection: dict) -> VectorQSeries:
    """Reindex a series over K along p: coefficients (delta, e) = f(p(delta), e).

    ``projection`` maps elements of the glued subgroup's orthogonal inside
    big_module to elements of f's module; other elements get coefficient 0.
    """
    coeffs = {}
    for delta, img in projection.items():
        for (elt, e), c in f.coefficients.items():
            if elt == img:
                coeffs[(delta, e)] = c
    level = big_module.level
    return VectorQSeries(big_module, level if level else 1, coeffs,
                         f.truncation_order, f.support_sign)


# ---------------------------------------------------------------------------
# boundary coefficients

@dataclass(frozen=True)
class BoundaryCoefficient:
    value: object                # mpmath mpf (or Fraction when exact)
    exact: Fraction | None
    prime_bound: int | None

    @property
    def approximate(self) -> bool:
        return self.exact is None

    def __float__(self):
        return float(self.value)


def _cusp_pullback_theta(F, order) -> VectorQSeries:
    theta = theta_series(F.kf_lattice, order)
    return pullback_series(theta, F.ambient_disc, F.projection_to_kf)


def a_coeff(gamma, n, F, order=None) -> Fraction:
    """Boundary theta coefficient: (N_F / 24) (E2 . p* Theta_F)(gamma, n)."""
    n = Fraction(n)
    if n < 0:
        return Fraction(0)
    D = F.ambient_disc
    gamma = D.reduce(gamma)
    if order is None:
        order = n
    order = max(Fraction(order), n)
    if gamma not in F.projection_to_kf:
        return Fraction(0)
    if (n + D.q_value(gamma)).denominator != 1:
        return Fraction(0)
    theta_v = _cusp_pullback_theta(F, order)
    e2 = e2_series(int(order) + 1)
    total = Fraction(0)
    k = 0
    while k <= n:
        te = theta_v.coefficients.get((gamma, n - k))
        if te:
            total += e2.coefficient((), k) * te
        k += 1
    return Fraction(F.imprimitivity, 24) * total


def u_coeff(gamma, n, F, c) -> BoundaryCoefficient:
    """Cusp correction coefficient (c(gamma,n)/2) a(0,0,F) - a(gamma,n,F).

    ``c`` is an EisensteinCoefficient; when it is exact the result is an
    exact rational, otherwise it inherits the truncated-product flag.
    """
    a00 = a_coeff(F.ambient_disc.zero, 0, F)
    agn = a_coeff(gamma, n, F)
    if c.exact is not None:
        val = Fraction(c.exact, 2) * a00 - agn
        return BoundaryCoefficient(val, val, getattr(c, "prime_bound", None))
    half_c = c.value / 2
    a00_f = mpmath.mpf(a00.numerator) / a00.denominator
    agn_f = mpmath.mpf(agn.numerator) / agn.denominator
    return BoundaryCoefficient(half_c * a00_f - agn_f, None,
                               getattr(c, "prime_bound", None))
