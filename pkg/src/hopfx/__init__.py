"""Hopf and degenerate-Hopf analysis of a delayed hematopoiesis model.

The equation under study is

    x'(t) = -[beta0/(1 + x(t)**n) + delta] x(t)
            + k beta0 x(t-r)/(1 + x(t-r)**n),

with production rate beta0, loss rate delta, amplification k and
maturation delay r.  The package locates the Hopf frontier of the
positive equilibrium, computes first and second Lyapunov coefficients
by center-manifold reduction, searches for codimension-two (l1 = 0)
points, and cross-checks criticality by direct integration.
"""

from .errors import DomainError, HopfxError, NumericalError
from .model import (DerivativeSet, EquilibriumSet, Parameters,
                    b1_closed_form, beta, beta_derivatives, derivative_set,
                    equilibria)
from .qpoly import QuasiPolynomial
from .stability import (HopfPoint, StabilityVerdict, characteristic_residual,
                        classify, hopf_delay, hopf_surface_mesh,
                        omega0_closed, omega0_transcendental, transversality)
from .center_manifold import (CoefficientTable, ProjectionData, WTable,
                              bilinear_form, build_wtable, projection_data)
from .lyapunov import LyapunovReport, l1, l2, lyapunov_at
from .search import (Codim2Record, GridSpec, PAPER_GRID,
                     PUBLISHED_CODIM2_N2, bisect_codim2,
                     bracket_l1_sign_change, check_against_published,
                     reproduce_tables)
from .ddesim import (AttractorReport, DirectionReport, Trajectory,
                     detect_attractor, integrate, verify_direction)

__version__ = "0.1.0"

__all__ = [
    "HopfxError", "DomainError", "NumericalError",
    "Parameters", "EquilibriumSet", "DerivativeSet",
    "beta", "beta_derivatives", "equilibria", "b1_closed_form",
    "derivative_set",
    "QuasiPolynomial",
    "StabilityVerdict", "HopfPoint", "classify", "omega0_closed",
    "omega0_transcendental", "hopf_delay", "hopf_surface_mesh",
    "transversality", "characteristic_residual",
    "ProjectionData", "CoefficientTable", "WTable", "projection_data",
    "build_wtable", "bilinear_form",
    "LyapunovReport", "l1", "l2", "lyapunov_at",
    "Codim2Record", "GridSpec", "PAPER_GRID", "PUBLISHED_CODIM2_N2",
    "bracket_l1_sign_change", "bisect_codim2", "reproduce_tables",
    "check_against_published",
    "Trajectory", "AttractorReport", "DirectionReport", "integrate",
    "detect_attractor", "verify_direction",
    "__version__",
]
