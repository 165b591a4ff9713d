import cmath
import math

import pytest
from hypothesis import given, settings, strategies as st

from hopfx.qpoly import QuasiPolynomial, qp_combine, qp_eval, qp_integrate

from conftest import quad_complex

OMEGA = 0.7


def qp(terms):
    return QuasiPolynomial(OMEGA, terms)


@st.composite
def qpolys(draw):
    n_terms = draw(st.integers(1, 5))
    terms = {}
    for _ in range(n_terms):
        p = draw(st.integers(0, 3))
        m = draw(st.integers(-3, 3))
        c = complex(draw(st.floats(-5, 5)), draw(st.floats(-5, 5)))
        terms[(p, m)] = terms.get((p, m), 0.0) + c
    return qp(terms)


def test_constructors_evaluate():
    assert qp({}).is_zero()
    c = QuasiPolynomial.constant(OMEGA, 2.0 - 1.0j)
    assert c(3.7) == 2.0 - 1.0j
    e = QuasiPolynomial.exponential(OMEGA, mult=2, coeff=1.5, power=1)
    s = 0.9
    assert e(s) == pytest.approx(1.5 * s * cmath.exp(2j * OMEGA * s))


def test_omega_mismatch_rejected():
    with pytest.raises(ValueError):
        qp({(0, 0): 1.0}) + QuasiPolynomial(0.9, {(0, 0): 1.0})
    with pytest.raises(ValueError):
        QuasiPolynomial(-1.0, {})
    with pytest.raises(ValueError):
        qp({(-1, 0): 1.0})


@settings(max_examples=80, deadline=None)
@given(a=qpolys(), b=qpolys(), s=st.floats(-4, 4),
       ca=st.floats(-3, 3), cb=st.floats(-3, 3))
def test_algebra_matches_pointwise(a, b, s, ca, cb):
    tol = 1e-9 * (1 + a.max_abs_coeff()) * (1 + b.max_abs_coeff()) * 100
    assert abs((a + b)(s) - (a(s) + b(s))) < tol
    assert abs((a * b)(s) - a(s) * b(s)) < tol
    assert abs(qp_combine(a, b, ca, cb)(s) - (ca * a(s) + cb * b(s))) < tol


@settings(max_examples=60, deadline=None)
@given(a=qpolys(), s=st.floats(-4, 4), d=st.integers(-2, 2),
       dt=st.floats(-2, 2))
def test_structure_maps_match_pointwise(a, s, d, dt):
    tol = 1e-8 * (1 + a.max_abs_coeff()) * 100
    assert abs(a.shift_rate(d)(s)
               - a(s) * cmath.exp(1j * d * OMEGA * s)) < tol
    assert abs(a.shift_arg(dt)(s) - a(s + dt)) < tol
    assert abs(a.conjugate()(s) - a(s).conjugate()) < tol


@settings(max_examples=60, deadline=None)
@given(a=qpolys())
def test_fundamental_theorem(a):
    """d/ds integrate(a) == a, and integrate(a)(0) == 0."""
    P = a.integrate()
    assert abs(P(0.0)) < 1e-12 * (1 + a.max_abs_coeff())
    diff = P.derivative() - a
    assert diff.is_zero(tol=1e-10 * (1 + a.max_abs_coeff()))


def test_resonant_integration_is_polynomial():
    a = qp({(2, 0): 3.0})  # 3 s^2
    P = qp_integrate(a)
    assert P.terms == {(3, 0): pytest.approx(1.0)}


@pytest.mark.parametrize("terms", [
    {(0, 1): 1.0 + 0.5j},
    {(2, -1): -0.7j, (1, 2): 2.0},
    {(3, 3): 1.0, (0, 0): -2.0, (1, 0): 0.25},
])
def test_integrate_against_quadrature(terms):
    a = qp(terms)
    P = a.integrate()
    for s in (-3.0, -1.2, 0.5, 2.4):
        ref = quad_complex(a, 0.0, s)
        assert P(s) == pytest.approx(ref, rel=1e-10, abs=1e-10)


def test_derivative_known():
    a = qp({(2, 1): 1.0})  # s^2 e^{i w s}
    d = a.derivative()
    s = 1.3
    expect = (2 * s + 1j * OMEGA * s**2) * cmath.exp(1j * OMEGA * s)
    assert d(s) == pytest.approx(expect, rel=1e-12)


def test_json_round_trip():
    a = qp({(2, -3): 1.5 - 0.25j, (0, 1): -2.0j})
    b = QuasiPolynomial.from_json(OMEGA, a.to_json())
    assert b.terms == a.terms
    assert qp_eval(b, 0.77) == qp_eval(a, 0.77)


def test_tiny_coefficients_pruned():
    a = qp({(0, 0): 1e-320})
    assert a.is_zero()
    assert (qp({(1, 1): 2.0}) - qp({(1, 1): 2.0})).is_zero()
