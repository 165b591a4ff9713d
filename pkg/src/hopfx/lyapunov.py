"""First and second Lyapunov coefficients at a Hopf point."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .center_manifold import (CoefficientTable, build_wtable,
                              projection_data)
from .model import Parameters, derivative_set, equilibria
from .stability import HopfPoint, hopf_delay

__all__ = ["LyapunovReport", "l1", "l2", "lyapunov_at"]


@dataclass(frozen=True)
class LyapunovReport:
    l1: float
    l2: Optional[float]
    hopf: HopfPoint
    g: CoefficientTable

    @property
    def criticality(self) -> str:
        if self.l1 < 0:
            return "supercritical"
        if self.l1 > 0:
            return "subcritical"
        return "degenerate"


def l1(g: CoefficientTable, omega: float) -> float:
    """l1 = Re(i g20 g11 + omega g21) / (2 omega^2)."""
    g20 = g.g[(2, 0)]
    g11 = g.g[(1, 1)]
    g21 = g.g[(2, 1)]
    return (1j * g20 * g11 + omega * g21).real / (2.0 * omega**2)


def l2(g: CoefficientTable, omega: float) -> float:
    """Second Lyapunov coefficient; 1/12 of the printed four-bracket
    expression (groups in 1/omega .. 1/omega^4)."""
    G = g.g
    g20, g11, g02 = G[(2, 0)], G[(1, 1)], G[(0, 2)]
    g30, g21, g12, g03 = G[(3, 0)], G[(2, 1)], G[(1, 2)], G[(0, 3)]
    g40, g31, g22, g13 = G[(4, 0)], G[(3, 1)], G[(2, 2)], G[(1, 3)]
    g32 = G[(3, 2)]

    t1 = g32.real / omega

    t2 = (g20 * g31.conjugate()
          - g11 * (4.0 * g31 + 3.0 * g22.conjugate())
          - (1.0 / 3.0) * g02 * (g40 + g13.conjugate())
          - g30 * g12).imag / omega**2

    re_part = (g20 * (g11.conjugate() * (3.0 * g12 - g30.conjugate())
                      + g02 * (g12.conjugate() - g30 / 3.0)
                      + g02.conjugate() * g03 / 3.0)
               + g11 * (g02.conjugate() * ((5.0 / 3.0) * g30.conjugate()
                                           + 3.0 * g12)
                        + g02 * g03.conjugate() / 3.0
                        - 4.0 * g11 * g30)).real
    t3 = (re_part + 3.0 * (g20 * g11).imag * g21.imag) / omega**3

    im_part = (g11 * g02.conjugate()
               * (g20.conjugate()**2
                  - 3.0 * g20.conjugate() * g11
                  - 4.0 * g11**2)).imag
    s = (g20 * g11).imag * (3.0 * (g20 * g11).real - 2.0 * abs(g02)**2)
    t4 = (im_part + s) / omega**4

    return (t1 + t2 + t3 + t4) / 12.0


def lyapunov_at(params: Parameters, want_l2: bool = False) -> LyapunovReport:
    """Full pipeline at the Hopf point of a parameter set without r:
    critical delay, derivative constants, projection, center-manifold
    tables, then l1 (and l2 on request)."""
    h = hopf_delay(params)
    B = derivative_set(h.params, h.x2)
    pd = projection_data(h, B)
    _, gtab = build_wtable(pd, max_order=5 if want_l2 else 3)
    val1 = l1(gtab, pd.omega)
    val2 = l2(gtab, pd.omega) if want_l2 else None
    return LyapunovReport(l1=val1, l2=val2, hopf=h, g=gtab)
