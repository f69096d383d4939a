import pytest

from hyperlat.lattices import direct_sum, e8, hyperbolic_plane, k3_lattice, rank1


@pytest.fixture
def u_lattice():
    return hyperbolic_plane()


@pytest.fixture
def v_lattice():
    """U + U + rank1(-2): the signature (2,3) workhorse."""
    U = hyperbolic_plane()
    return direct_sum(U, U, rank1(-2))


@pytest.fixture
def v8_lattice():
    """U + U + rank1(-8): discriminant group Z/8."""
    U = hyperbolic_plane()
    return direct_sum(U, U, rank1(-8))


@pytest.fixture
def e8_neg():
    return e8(-1)


@pytest.fixture
def k3():
    return k3_lattice()


def small_test_lattices():
    """The lattices whose discriminant modules the relation tests sweep."""
    U = hyperbolic_plane()
    return [
        U,
        direct_sum(U, U),
        rank1(2),
        rank1(-2),
        rank1(4),
        rank1(-6),
        direct_sum(U, rank1(-2)),
        direct_sum(U, U, rank1(-2)),
        direct_sum(U, U, rank1(-8)),
        direct_sum(rank1(2), rank1(-4)),
        direct_sum(U, rank1(2), rank1(-6)),
        e8(-1),
    ]
