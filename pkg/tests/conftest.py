import cmath
import math

import numpy as np
import pytest

from hopfx.center_manifold import projection_data
from hopfx.model import Parameters, derivative_set
from hopfx.stability import hopf_delay

# reference degenerate-Hopf cell: n = 2, beta0 = 1, k = 1.5
REF_DELTA_STAR = 0.0440140630
REF_R_STAR = 12.435176154726422
REF_OMEGA_STAR = 0.10499168402742001
REF_X2 = 3.21869625018471
REF_B1 = -0.07253022406585626


@pytest.fixture(scope="session")
def ref_params():
    return Parameters(beta0=1.0, n=2.0, delta=REF_DELTA_STAR, k=1.5)


@pytest.fixture(scope="session")
def ref_hopf(ref_params):
    return hopf_delay(ref_params)


@pytest.fixture(scope="session")
def ref_pd(ref_hopf):
    B = derivative_set(ref_hopf.params, ref_hopf.x2)
    return projection_data(ref_hopf, B)


def fd_derivative(f, x, order, h, npts=9):
    """order-th derivative of f at x from an npts-point central stencil.

    Stencil weights come from solving the Vandermonde moment system, so
    the truncation error is O(h^(npts - order))."""
    offsets = np.arange(npts) - (npts - 1) / 2.0
    V = np.vander(offsets, npts, increasing=True).T
    rhs = np.zeros(npts)
    rhs[order] = math.factorial(order)
    w = np.linalg.solve(V, rhs)
    vals = np.array([f(x + o * h) for o in offsets])
    return float(vals @ w) / h**order


def quad_complex(f, a, b):
    """Complex-valued quadrature of f over [a, b]."""
    from scipy.integrate import quad
    re = quad(lambda s: f(s).real, a, b, limit=200)[0]
    im = quad(lambda s: f(s).imag, a, b, limit=200)[0]
    return complex(re, im)


def char_root_near(params, B1, lam0, tol=1e-13):
    """Newton-polish a characteristic root starting from lam0."""
    lam = lam0
    for _ in range(100):
        e = params.k * B1 * cmath.exp(-lam * params.r)
        val = lam + params.delta + B1 - e
        dval = 1.0 + params.r * e
        step = val / dval
        lam -= step
        if abs(step) < tol:
            return lam
    raise RuntimeError("characteristic-root Newton did not converge")
