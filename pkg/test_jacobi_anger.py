import math

import numpy as np
import pytest

from approximation.jacobi_anger import (analytic_degree_bound, bessel_j, build_hs_laurent, linf_circle_error,
                                        numeric_degree, tail_bound)
from approximation.laurent import LaurentPolynomial, circle_grid
from core.errors import RangeError


# --- Laurent polynomials ---
def test_laurent_evaluation_and_symmetry():
    p = LaurentPolynomial.from_dict({-1: 0.5, 1: 0.5})
    theta = circle_grid(11)
    assert np.allclose(p.on_circle(theta), np.cos(theta))
    assert p.symmetry == "reciprocal"
    assert p.parity == "odd"
    q = LaurentPolynomial.from_dict({-2: -1.0, 2: 1.0})
    assert q.symmetry == "anti-reciprocal"
    assert q.parity == "even"


def test_laurent_arithmetic():
    p = LaurentPolynomial.from_dict({-1: 1.0, 0: 2.0})
    q = LaurentPolynomial.from_dict({1: 3.0})
    prod = p * q
    assert prod.min_degree == 0
    assert prod.coefficient(0) == 3.0 and prod.coefficient(1) == 6.0
    assert (p + q).centered(1).tolist() == [1.0, 2.0, 3.0]
    assert (p - p).centered(1).tolist() == [0.0, 0.0, 0.0]
    assert (2 * q).coefficient(1) == 6.0


# --- Bessel coefficients & degrees ---
def test_bessel_values():
    assert bessel_j(0, 0.0) == 1.0
    assert bessel_j(1, 1.0) == pytest.approx(0.44005058574, rel=1e-10)
    with pytest.raises(RangeError):
        bessel_j(0, 600.0)


@pytest.mark.parametrize("tau,eps,degree", [(0.1, 1e-5, 5), (20.0, 1e-5, 31), (20.0, 1e-3, 25), (0.1, 1e-3, 5)])
def test_numeric_degree_spot_values(tau, eps, degree):
    assert numeric_degree(tau, eps, rule="order").n == degree


@pytest.mark.parametrize("tau,eps", [(0.1, 1e-5), (1.0, 1e-3), (5.0, 1e-2), (20.0, 1e-5)])
def test_strict_rule_meets_eps(tau, eps):
    strict = numeric_degree(tau, eps)
    assert strict.linf_error <= eps
    assert strict.n % 2 == 1 and strict.n >= 5
    assert strict.n >= numeric_degree(tau, eps, rule="order").n
    assert strict.n <= 2 * analytic_degree_bound(tau, eps) + 1


def test_analytic_bound_regimes():
    # long time: r~ = ceil(e tau)
    assert analytic_degree_bound(20.0, 1e-5) == math.ceil(math.e * 20)
    assert analytic_degree_bound(0.1, 1e-5) >= 2
    # short time: 4 ln(1/eps) / ln(e + ln(1/eps)/tau)
    assert analytic_degree_bound(1.0, 1e-5) == 18


def test_eps_outside_range():
    with pytest.raises(RangeError):
        numeric_degree(1.0, 1e-9)
    with pytest.raises(RangeError):
        numeric_degree(1.0, 1.0)


def test_hs_laurent_structure():
    a, b = build_hs_laurent(3.0, 4)
    assert a.symmetry == "reciprocal" and a.parity == "even"
    assert b.symmetry == "reciprocal" and b.parity == "odd"
    assert a.coefficient(9) == 0.0 and a.coefficient(8) != 0.0 and b.coefficient(9) != 0.0
    theta = circle_grid(201)
    assert np.allclose(a.on_circle(theta).imag, 0) and np.allclose(b.on_circle(theta).imag, 0)


def test_report_error_matches_circle_evaluation():
    report = numeric_degree(5.0, 1e-4)
    a, b = build_hs_laurent(5.0, report.R)
    assert linf_circle_error(a, b, 5.0) == pytest.approx(report.linf_error, abs=1e-12)
    assert report.linf_error <= tail_bound(5.0, report.R)


def test_error_shrinks_with_degree():
    errors = [linf_circle_error(*build_hs_laurent(10.0, r), 10.0) for r in (8, 10, 12, 14)]
    assert all(later < earlier for earlier, later in zip(errors, errors[1:]))


def test_tiny_time_still_reaches_minimum_degree():
    report = numeric_degree(1e-8, 1e-2)
    assert report.n == 5 and report.linf_error <= 1e-2


@pytest.mark.parametrize("tau,eps", [(0.1, 1e-5), (1.0, 1e-3), (5.0, 1e-4), (20.0, 1e-5)])
def test_pair_stays_inside_unit_disk(tau, eps):
    a, b = build_hs_laurent(tau, numeric_degree(tau, eps).R)
    theta = circle_grid(2001)
    total = a.on_circle(theta).real ** 2 + b.on_circle(theta).real ** 2
    assert total.max() <= 1 + 1e-12
