import math
from fractions import Fraction

import mpmath
import pytest

from hyperlat.cusps import cusp_datum
from hyperlat.densities import eisenstein_coefficient
from hyperlat.lattices import direct_sum, hyperbolic_plane, rank1
from hyperlat.predict import (
    PredictError,
    PredictionInput,
    degree_prediction,
    elliptic_census_prediction,
    k3_predict,
    k3_sublattice,
    predict_count,
    represents_on_coset,
    _pell_fundamental,
)


def test_predict_equals_minus_half_c(v_lattice):
    for n, gamma in [(1, (0,)), (2, (0,)), (Fraction(9, 4), (1,))]:
        inp = PredictionInput(v_lattice, gamma, n, 1.0, prime_bound=40)
        pred = predict_count(inp)
        c = eisenstein_coefficient(gamma, n, v_lattice, 40)
        assert abs(float(pred) + float(c) / 2) < 1e-20 * max(1, abs(float(c)))


def test_predict_formula_value(v_lattice):
    # mu_S = 1, n = 1: (2 pi)^{5/2} / (sqrt(2) Gamma(5/2)) times the product
    inp = PredictionInput(v_lattice, (0,), 1, 1.0, prime_bound=40)
    pred = predict_count(inp)
    g52 = 3 * math.sqrt(math.pi) / 4
    manual = (2 * math.pi) ** 2.5 / (math.sqrt(2) * g52) \
        * float(pred.series.truncated_product)
    assert float(pred) == pytest.approx(manual, rel=1e-12)


def test_predict_not_representable(v_lattice):
    inp = PredictionInput(v_lattice, (1,), 1, 1.0)  # 1 not in 1/4 + Z
    pred = predict_count(inp)
    assert float(pred) == 0 and not pred.representable


def test_predict_scales_with_mass(v_lattice):
    one = predict_count(PredictionInput(v_lattice, (0,), 2, 1.0, prime_bound=30))
    three = predict_count(PredictionInput(v_lattice, (0,), 2, 3.0, prime_bound=30))
    assert float(three) == pytest.approx(3 * float(one), rel=1e-12)


def test_degree_prediction_reduces_to_main_term(v_lattice):
    inp = PredictionInput(v_lattice, (0,), 1, 1.0, prime_bound=30)
    base = predict_count(inp)
    full, rows = degree_prediction(inp)
    assert rows == []
    assert float(full) == float(base)


def test_degree_prediction_boundary(v_lattice):
    F = cusp_datum(v_lattice, [[1, 0, 0, 0, 0], [0, 0, 1, 0, 0]])
    inp = PredictionInput(v_lattice, (0,), 1, 1.0,
                          boundary_degrees=((F, 1),), prime_bound=30)
    base = predict_count(inp)
    full, rows = degree_prediction(inp)
    assert len(rows) == 1
    u = rows[0]["u"]
    assert float(full) == pytest.approx(float(base) + float(u), rel=1e-12)
    # u(0,0,F) = 0 means degree corrections vanish at (0,0)
    c00 = eisenstein_coefficient(None, 0, v_lattice, 10)
    from hyperlat.qseries import u_coeff
    assert u_coeff((0,), 0, F, c00).exact == 0


def test_pell():
    assert _pell_fundamental(2) == (3, 2)
    assert _pell_fundamental(3) == (2, 1)
    assert _pell_fundamental(61)[0] == 1766319049


def test_rank1_representability():
    P = rank1(2)
    got = [represents_on_coset(P, (0,), 2 * n).representable
           for n in (1, 2, 3, 4, 5, 9, 16)]
    assert got == [True, False, False, True, False, True, True]
    # coset: gamma = gen of Z/2: t = (k + 1/2) e: norm 2(k+1/2)^2 = 2n
    r = represents_on_coset(P, (1,), Fraction(1, 2))
    assert r.representable and r.exact
    r = represents_on_coset(P, (1,), 2)
    assert not r.representable


def test_rank2_representability_vs_brute():
    P = direct_sum(rank1(2), rank1(-4))  # x^2 - 2 y^2

    def brute(n, box=60):
        return any(x * x - 2 * y * y == n
                   for x in range(-box, box + 1) for y in range(-box, box + 1))

    for n in range(-15, 16):
        if n == 0:
            continue
        r = represents_on_coset(P, None, 2 * n)
        assert r.exact
        assert r.representable == brute(n), n
        if r.witness is not None:
            x, y = r.witness
            assert x * x - 2 * y * y == n


def test_k3_sublattice_canonical():
    P, rows = k3_sublattice(two_d=2)
    assert P.gram == ((2,),)
    assert rows[0][:2] == (1, 1)
    with pytest.raises(PredictError):
        k3_sublattice(two_d=3)


def test_k3_predict(v_lattice):
    k = k3_predict((0,), 5, 1.0, two_d=2, prime_bound=20)
    assert k.rho == 1
    assert k.exponent == Fraction(19, 2)
    assert k.disc_match
    assert k.v_lattice.rank == 21
    assert k.v_lattice.discriminant_group().invariant_factors == (2,)
    assert float(k.prediction) > 0
    assert not k.coset_representable.representable  # 5 is not a square
    k4 = k3_predict((0,), 4, 1.0, two_d=2, prime_bound=20)
    assert k4.coset_representable.representable


def test_k3_predict_rejects_bad_sublattices():
    with pytest.raises(PredictError):
        k3_predict((0,), 1, 1.0, rows=[[1] + [0] * 21, [0, 1] + [0] * 20])  # U
    with pytest.raises(PredictError):
        k3_predict((0,), 1, 1.0, rows=[[2, 2] + [0] * 20])  # imprimitive
    neg = [0] * 22
    neg[6] = 1
    with pytest.raises(PredictError):
        k3_predict((0,), 1, 1.0, rows=[neg])  # negative definite, not Lorentzian


def test_elliptic_census():
    total, rows = elliptic_census_prediction(4, 1.0, two_d=2, prime_bound=10)
    zero_gamma = [float(r.s) for r in rows if r.gamma == (0,)]
    assert zero_gamma == [1.0, 4.0]  # perfect squares only
    assert float(total) > 0
    assert all(r.representable_exact for r in rows)
    # growth: cumulative prediction is nondecreasing in n_max
    t2, _ = elliptic_census_prediction(2, 1.0, two_d=2, prime_bound=10)
    assert float(total) >= float(t2)


def test_census_rejects_isotropic_disc():
    # two_d = 8: disc group Z/8 with Q(k) = k^2/16, so k = 4 is isotropic
    with pytest.raises(PredictError):
        elliptic_census_prediction(2, 1.0, two_d=8, prime_bound=10)
