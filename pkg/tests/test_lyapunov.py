import pytest

from hopfx.lyapunov import lyapunov_at
from hopfx.model import Parameters

from conftest import REF_DELTA_STAR


def test_l1_vanishes_at_degenerate_point(ref_params):
    rep = lyapunov_at(ref_params)
    assert abs(rep.l1) < 1e-8
    assert rep.criticality == ("supercritical" if rep.l1 < 0
                               else "subcritical")


def test_l1_sign_structure():
    """Subcritical below the degenerate delta, supercritical above."""
    lo = lyapunov_at(Parameters(beta0=1.0, n=2.0,
                                delta=0.8 * REF_DELTA_STAR, k=1.5))
    hi = lyapunov_at(Parameters(beta0=1.0, n=2.0,
                                delta=1.2 * REF_DELTA_STAR, k=1.5))
    assert lo.l1 > 0 and lo.criticality == "subcritical"
    assert hi.l1 < 0 and hi.criticality == "supercritical"


def test_l2_reference_value(ref_params):
    rep = lyapunov_at(ref_params, want_l2=True)
    assert rep.l2 == pytest.approx(-0.008109801, abs=2e-6)
    assert rep.l2 < 0


def test_l2_not_computed_by_default(ref_params):
    assert lyapunov_at(ref_params).l2 is None


def test_coefficients_scale_invariant():
    """l1 and l2 are invariant under (beta0, delta) -> (c beta0, c delta)."""
    base = lyapunov_at(Parameters(beta0=1.0, n=2.0, delta=0.05, k=1.4),
                       want_l2=True)
    for c in (0.5, 1.5, 2.5):
        scaled = lyapunov_at(
            Parameters(beta0=c, n=2.0, delta=0.05 * c, k=1.4), want_l2=True)
        assert scaled.l1 == pytest.approx(base.l1, rel=1e-10)
        assert scaled.l2 == pytest.approx(base.l2, rel=1e-9)


def test_g_table_complete_for_l2(ref_params):
    rep = lyapunov_at(ref_params, want_l2=True)
    needed = [(2, 0), (1, 1), (0, 2), (3, 0), (2, 1), (1, 2), (0, 3),
              (4, 0), (3, 1), (2, 2), (1, 3), (0, 4), (3, 2)]
    for key in needed:
        assert key in rep.g.g
