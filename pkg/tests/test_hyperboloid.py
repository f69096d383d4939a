import math
import random
from fractions import Fraction

import pytest

from hyperlat.hyperboloid import (
    EnumGuardExceeded,
    HyperboloidError,
    Window,
    admissible_values,
    box_scan_count,
    enumerate_points,
    equidistribution_run,
    mu_a0,
    mu_infty,
    splitting_frame,
    unit_sphere_area,
    _count_generic,
)
from hyperlat.lattices import direct_sum, hyperbolic_plane, rank1


def _window(V, rho=1):
    return Window(splitting_frame(V), Fraction(rho))


def test_unit_sphere_area():
    # area of S^(b-1) = b pi^(b/2) / Gamma(1 + b/2); at b = 3 this is 4 pi
    assert abs(unit_sphere_area(2) - 4 * math.pi) < 1e-12
    assert abs(unit_sphere_area(1) - 2 * math.pi) < 1e-12
    assert abs(unit_sphere_area(0) - 2.0) < 1e-12
    b = 5
    assert abs(unit_sphere_area(b - 1) -
               b * math.pi ** (b / 2) / math.gamma(1 + b / 2)) < 1e-12


def test_frame_construction(v_lattice):
    fr = splitting_frame(v_lattice)
    assert len(fr.positive) == 2
    assert len(fr.negative) == 3
    assert fr.lattice_jacobian() == pytest.approx(2 ** 2.5 / math.sqrt(2))
    # canonical hyperbolic split: e + f and e - f
    assert fr.positive[0] == (1, 1, 0, 0, 0)


def test_frame_requires_two_positive():
    with pytest.raises(HyperboloidError):
        splitting_frame(direct_sum(hyperbolic_plane(), rank1(-2)))


def test_degenerate_window(v_lattice):
    win = Window(splitting_frame(v_lattice), Fraction(0))
    assert mu_a0(win, 1000, seed=1) == (0.0, 0.0)
    assert mu_infty(win, 1000, seed=1) == (0.0, 0.0)


def test_measure_ratio(v_lattice):
    win = _window(v_lattice)
    ma, ea = mu_a0(win, 200000, seed=3)
    mi, ei = mu_infty(win, 200000, seed=3)
    target = 2 ** 1.5 / math.sqrt(2)
    assert mi / ma == pytest.approx(target, rel=0.02)
    # closed form of the chart integral for b = 3, rho = 1 (both sheets):
    # mu_a0 = 8 pi^2 (2 sqrt2 - 1)/3
    exact = 8 * math.pi ** 2 * (2 * math.sqrt(2) - 1) / 3
    assert ma == pytest.approx(exact, rel=0.01)


def test_mc_error_scaling(v_lattice):
    win = _window(v_lattice)
    _, e1 = mu_a0(win, 50000, seed=5)
    _, e2 = mu_a0(win, 200000, seed=5)
    assert e2 < e1  # quadrupling samples should halve the error
    assert e2 == pytest.approx(e1 / 2, rel=0.15)


def test_counts_match_box_scan(v_lattice):
    win = _window(v_lattice)
    zero = tuple(Fraction(0) for _ in range(5))
    for n in (1, 2, 5, 9):
        fast = enumerate_points(None, n, win)
        gen = _count_generic(zero, Fraction(n), win, False, 10 ** 9)
        box = box_scan_count(None, n, win)
        assert fast.count == gen.count == box.count
        assert fast.grazing == gen.grazing == box.grazing


def test_counts_match_box_scan_nonzero_gamma(v_lattice):
    win = _window(v_lattice)
    for n in (Fraction(5, 4), Fraction(13, 4)):
        fast = enumerate_points((1,), n, win)
        box = box_scan_count((1,), n, win)
        assert fast.count == box.count
        assert fast.grazing == box.grazing


def test_counts_match_randomized(v8_lattice):
    rng = random.Random(31)
    win = Window(splitting_frame(v8_lattice), Fraction(3, 2))
    for _ in range(6):
        n = rng.randint(1, 8)
        fast = enumerate_points(None, n, win)
        box = box_scan_count(None, n, win)
        assert fast.count == box.count and fast.grazing == box.grazing


def test_count_parity(v_lattice):
    # gamma = 0: points come in +-lambda pairs and n > 0 excludes zero
    win = _window(v_lattice)
    for n in (1, 2, 3, 7):
        pc = enumerate_points(None, n, win)
        assert pc.count % 2 == 0


def test_point_list_exactness(v_lattice):
    win = _window(v_lattice)
    pc = enumerate_points(None, 2, win, keep_points=True)
    assert pc.points and len(pc.points) == pc.count
    rho2n = win.rho ** 2 * 2
    for vec in pc.points:
        assert v_lattice.q_of(vec) == -2
        assert win.frame.radial_sq(vec) <= rho2n


def test_window_depends_only_on_plane(v_lattice):
    # scaling the positive frame vectors leaves the cap, hence counts, alone
    fr = splitting_frame(v_lattice)
    from hyperlat.hyperboloid import SplittingFrame
    scaled = SplittingFrame(
        v_lattice,
        tuple(tuple(3 * x for x in t) for t in fr.positive),
        fr.negative)
    w1 = Window(fr, Fraction(1))
    w2 = Window(scaled, Fraction(1))
    for n in (1, 5):
        assert enumerate_points(None, n, w1).count == \
            enumerate_points(None, n, w2).count


def test_coset_support_empty(v_lattice):
    win = _window(v_lattice)
    pc = enumerate_points((1,), 1, win)   # 1 not in 1/4 + Z
    assert pc.count == 0


def test_admissible_values(v_lattice):
    assert admissible_values(v_lattice, None, 3, 6) == [3, 4, 5, 6]
    vals = admissible_values(v_lattice, (1,), 1, 4)
    assert vals == [Fraction(5, 4), Fraction(9, 4), Fraction(13, 4)]


def test_equidistribution_smoke(v_lattice):
    win = _window(v_lattice)
    summary = equidistribution_run(v_lattice, None, win, 40, 50,
                                   prime_bound=30, samples=200000, seed=2)
    assert len(summary.reports) == 11
    assert 0.8 < summary.mean_ratio < 1.2
    for r in summary.reports:
        assert r.empirical >= 0 and r.predicted > 0


def test_truncation_stability(v_lattice):
    # ratios with prime bound P and 2P differ by < 2%
    from hyperlat.densities import singular_series
    for n in (40, 47, 50):
        a = float(singular_series(None, n, v_lattice, 50).truncated_product)
        b = float(singular_series(None, n, v_lattice, 100).truncated_product)
        assert abs(a / b - 1) < 0.02
