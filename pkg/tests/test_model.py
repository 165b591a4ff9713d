import math

import pytest
from hypothesis import given, settings, strategies as st

from hopfx.errors import DomainError
from hopfx.model import (Parameters, b1_closed_form, beta, beta_derivatives,
                         derivative_set, equilibria)

from conftest import REF_B1, REF_DELTA_STAR, REF_X2, fd_derivative


def test_parameter_validation():
    with pytest.raises(ValueError):
        Parameters(beta0=-1.0, n=2.0, delta=0.1, k=1.5)
    with pytest.raises(ValueError):
        Parameters(beta0=1.0, n=0.5, delta=0.1, k=1.5)
    with pytest.raises(ValueError):
        Parameters(beta0=1.0, n=2.0, delta=0.0, k=1.5)
    with pytest.raises(ValueError):
        Parameters(beta0=1.0, n=2.0, delta=0.1, k=1.5, r=-3.0)


def test_k_range_gate():
    Parameters(beta0=1.0, n=2.0, delta=0.1, k=1.5).require_k_range()
    for bad_k in (0.9, 1.0, 2.5):
        with pytest.raises(DomainError):
            Parameters(beta0=1.0, n=2.0, delta=0.1, k=bad_k).require_k_range()


def test_equilibria_existence():
    p = Parameters(beta0=1.0, n=2.0, delta=REF_DELTA_STAR, k=1.5)
    eq = equilibria(p)
    assert eq.x1 == 0.0
    assert eq.x2 == pytest.approx(REF_X2, rel=1e-12)
    # x2 disappears when delta >= beta0 (k - 1)
    assert equilibria(Parameters(beta0=1.0, n=2.0, delta=0.6, k=1.5)).x2 is None
    # exactly on the boundary: degenerate flag, no x2
    boundary = Parameters(beta0=1.0, n=2.0, delta=0.5, k=1.5)
    eq = equilibria(boundary)
    assert eq.x2 is None and eq.degenerate_boundary


def test_x2_satisfies_fixed_point_equation():
    p = Parameters(beta0=1.3, n=3.5, delta=0.07, k=1.7)
    x2 = equilibria(p).x2
    # stationarity: (beta(x2) + delta) x2 = k beta(x2) x2
    lhs = (beta(x2, p) + p.delta) * x2
    rhs = p.k * beta(x2, p) * x2
    assert lhs == pytest.approx(rhs, rel=1e-12)


@pytest.mark.parametrize("n,x", [(2.0, 3.2), (1.5, 0.8), (4.0, 1.1),
                                 (7.0, 2.3)])
def test_beta_derivatives_against_finite_differences(n, x):
    p = Parameters(beta0=1.0, n=n, delta=0.05, k=1.5)
    closed = beta_derivatives(x, p, order=5)
    f = lambda y: beta(y, p)
    h = 0.02 * x  # keeps the 11-point stencil inside x > 0
    for m in range(1, 6):
        est = fd_derivative(f, x, m, h, npts=11)
        rel = 1e-6 if m <= 3 else 1e-4
        assert closed[m] == pytest.approx(est, rel=rel, abs=1e-10)


def test_b1_two_paths_agree():
    for (b0, n, d, k) in [(1.0, 2.0, REF_DELTA_STAR, 1.5),
                          (0.5, 3.0, 0.02, 1.2),
                          (2.5, 1.5, 0.11, 1.9)]:
        p = Parameters(beta0=b0, n=n, delta=d, k=k)
        x2 = equilibria(p).x2
        B = derivative_set(p, x2)
        assert b1_closed_form(p) == pytest.approx(B[1], rel=1e-12)
    assert b1_closed_form(
        Parameters(beta0=1.0, n=2.0, delta=REF_DELTA_STAR, k=1.5)
    ) == pytest.approx(REF_B1, rel=1e-10)


@settings(max_examples=100, deadline=None)
@given(beta0=st.floats(0.2, 3.0), n=st.floats(1.0, 10.0),
       k=st.floats(1.05, 2.0), frac=st.floats(0.05, 0.95),
       c=st.floats(0.1, 10.0))
def test_scaling_symmetry(beta0, n, k, frac, c):
    """(beta0, delta) -> (c beta0, c delta) leaves x2 fixed and scales B1."""
    delta = frac * beta0 * (k - 1.0)
    p = Parameters(beta0=beta0, n=n, delta=delta, k=k)
    ps = Parameters(beta0=c * beta0, n=n, delta=c * delta, k=k)
    x2 = equilibria(p).x2
    if x2 is None:
        return
    assert equilibria(ps).x2 == pytest.approx(x2, rel=1e-12)
    assert b1_closed_form(ps) == pytest.approx(c * b1_closed_form(p),
                                               rel=1e-12)


def test_derivative_set_known_values(ref_hopf):
    B = derivative_set(ref_hopf.params, ref_hopf.x2)
    assert B[1] == pytest.approx(-0.07253022406585624, rel=1e-12)
    assert B[2] == pytest.approx(0.03231859712766917, rel=1e-12)
    assert B[5] == pytest.approx(0.019185572633632297, rel=1e-12)
