import numpy as np
import pytest

from stcutfem.quadrature1d import QuadRule1D, gauss_legendre, gauss_lobatto, map_to_interval


def test_legendre_n1_is_midpoint():
    r = gauss_legendre(1)
    assert r.nodes == pytest.approx([0.0])
    assert r.weights == pytest.approx([2.0])


def test_legendre_n2_closed_form():
    r = gauss_legendre(2)
    assert r.nodes == pytest.approx([-1 / np.sqrt(3), 1 / np.sqrt(3)], abs=1e-15)
    assert r.weights == pytest.approx([1.0, 1.0], abs=1e-15)


def test_legendre_n5_monomial_oracle():
    # independent oracle: int_{-1}^{1} x^8 dx = 2/9
    r = gauss_legendre(5)
    assert r.integrate(lambda x: x**8) == pytest.approx(2.0 / 9.0, abs=1e-14)


def test_lobatto_n2_trapezoid():
    r = gauss_lobatto(2)
    assert r.nodes == pytest.approx([-1.0, 1.0])
    assert r.weights == pytest.approx([1.0, 1.0])


def test_lobatto_n3_simpson():
    r = gauss_lobatto(3)
    assert r.nodes == pytest.approx([-1.0, 0.0, 1.0], abs=1e-15)
    assert r.weights == pytest.approx([1 / 3, 4 / 3, 1 / 3], abs=1e-15)


def test_lobatto_n5_monomial_oracle():
    # int_{-1}^{1} x^6 dx = 2/7, within Lobatto-5 exactness degree 7
    r = gauss_lobatto(5)
    assert r.integrate(lambda x: x**6) == pytest.approx(2.0 / 7.0, abs=1e-14)


def test_lobatto_endpoints_exact():
    for n in range(2, 21):
        r = gauss_lobatto(n)
        assert r.nodes[0] == -1.0
        assert r.nodes[-1] == 1.0


def test_map_lobatto3_to_slab():
    dt = 0.37
    r = map_to_interval(gauss_lobatto(3), 0.0, dt)
    assert r.nodes == pytest.approx([0.0, dt / 2, dt], abs=1e-16)
    assert r.weights == pytest.approx([dt / 6, 2 * dt / 3, dt / 6], abs=1e-15)


def test_map_weight_sum():
    r = map_to_interval(gauss_legendre(7), 0.0, 2.0)
    assert r.weights.sum() == pytest.approx(2.0, abs=1e-14)


def test_map_lobatto4_interior_nodes():
    # interior Lobatto-4 nodes are the roots of P_3' = (15 x^2 - 3)/2,
    # i.e. +-1/sqrt(5); mapped to [0,1] they are (1 -+ 1/sqrt(5))/2
    r = map_to_interval(gauss_lobatto(4), 0.0, 1.0)
    assert r.nodes[1] == pytest.approx((1 - 1 / np.sqrt(5)) / 2, abs=1e-14)
    assert r.nodes[2] == pytest.approx((1 + 1 / np.sqrt(5)) / 2, abs=1e-14)


@pytest.mark.parametrize("n", range(1, 21))
def test_legendre_exactness_random_polynomials(n):
    rng = np.random.default_rng(100 + n)
    r = gauss_legendre(n)
    deg = 2 * n - 1
    coeffs = rng.uniform(-1, 1, deg + 1)
    p = np.polynomial.Polynomial(coeffs)
    exact = p.integ()(1.0) - p.integ()(-1.0)
    approx = r.integrate(p)
    assert approx == pytest.approx(exact, rel=1e-13, abs=1e-13)


@pytest.mark.parametrize("n", range(2, 21))
def test_lobatto_exactness_random_polynomials(n):
    rng = np.random.default_rng(200 + n)
    r = gauss_lobatto(n)
    deg = max(2 * n - 3, 0)
    coeffs = rng.uniform(-1, 1, deg + 1)
    p = np.polynomial.Polynomial(coeffs)
    exact = p.integ()(1.0) - p.integ()(-1.0)
    assert r.integrate(p) == pytest.approx(exact, rel=1e-13, abs=1e-13)


@pytest.mark.parametrize("n", range(1, 21))
def test_weights_positive_and_nodes_increasing(n):
    rules = [gauss_legendre(n)]
    if n >= 2:
        rules.append(gauss_lobatto(n))
    for r in rules:
        assert np.all(r.weights > 0)
        assert np.all(np.diff(r.nodes) > 0)
        assert r.weights.sum() == pytest.approx(2.0, abs=1e-13)


def test_out_of_range_errors():
    with pytest.raises(ValueError):
        gauss_legendre(0)
    with pytest.raises(ValueError):
        gauss_legendre(21)
    with pytest.raises(ValueError):
        gauss_lobatto(1)
    with pytest.raises(ValueError):
        map_to_interval(gauss_legendre(2), 1.0, 1.0)
