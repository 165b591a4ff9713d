"""Linear stability of the positive equilibrium and the Hopf frontier.

The linearization around x2 is z'(t) = -(B1 + delta) z(t) + k B1 z(t-r)
with characteristic equation

    lambda + delta + B1 = k B1 exp(-lambda r).

Writing p = delta + B1 and q = k B1, a conjugate pair +/- i*omega sits on
the imaginary axis exactly when omega = sqrt(q**2 - p**2) and
r = arccos(p/q) / omega.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from scipy.optimize import brentq

from .errors import DomainError
from .model import Parameters, b1_closed_form, equilibria

__all__ = [
    "StabilityVerdict",
    "HopfPoint",
    "classify",
    "omega0_closed",
    "omega0_transcendental",
    "hopf_delay",
    "hopf_surface_mesh",
    "transversality",
    "characteristic_residual",
]

CASE_NO_X2 = "NO_X2"
CASE_I_A = "I_A"
CASE_I_B = "I_B"
CASE_II = "II"


@dataclass(frozen=True)
class StabilityVerdict:
    case_label: str
    asymptotically_stable: bool
    stable_r_window: Optional[tuple[float, float]]
    omega0: Optional[float]
    B1: float
    p: float
    q: float
    flag: Optional[str] = None


@dataclass(frozen=True)
class HopfPoint:
    """A point on the Hopf frontier: params carries the critical delay."""

    params: Parameters
    omega_star: float
    x2: float

    @property
    def B1(self) -> float:
        return b1_closed_form(self.params)

    @property
    def p(self) -> float:
        return self.params.delta + self.B1

    @property
    def q(self) -> float:
        return self.params.k * self.B1


def characteristic_residual(params: Parameters, lam: complex, B1: float) -> complex:
    """lambda + delta + B1 - k B1 exp(-lambda r)."""
    return lam + params.delta + B1 - params.k * B1 * cmath.exp(-lam * params.r)


def omega0_closed(p: float, q: float) -> float:
    """Hopf frequency sqrt(q**2 - p**2); requires |q| > |p|."""
    if not abs(q) > abs(p):
        raise DomainError(
            f"no Hopf frequency: |q| = {abs(q)} <= |p| = {abs(p)}")
    return math.sqrt(q * q - p * p)


def omega0_transcendental(p: float, r: float) -> float:
    """Root of omega*cot(omega*r) = -p in (0, pi/r), by bracketed Brent.

    omega*cot(omega*r) decreases monotonically from 1/r to -inf on the
    interval, so a root exists iff p > -1/r.
    """

    def fun(w: float) -> float:
        return w / math.tan(w * r) + p

    hi = math.pi / r
    eps = 1e-9 * hi
    lo = eps
    a, b = lo, hi - eps
    fa, fb = fun(a), fun(b)
    if fa <= 0 or fb >= 0:
        # fa -> 1/r + p at 0+, fb -> -inf at pi/r-
        if not (fa > 0 > fb):
            raise DomainError(
                f"omega*cot(omega*r) = {-p} has no root in (0, pi/r)")
    root = brentq(fun, a, b, xtol=1e-14, rtol=8.881784197001252e-16,
                  maxiter=200)
    # polish toward |fun| ~ 0 at 1e-12 absolute in the defining relation
    return float(root)


def classify(params: Parameters) -> StabilityVerdict:
    """Stability of x2 for a fully specified parameter point (r given)."""
    if params.r is None:
        raise ValueError("classify needs the delay r")
    params.require_k_range()
    eq = equilibria(params)
    if eq.x2 is None:
        return StabilityVerdict(
            case_label=CASE_NO_X2, asymptotically_stable=False,
            stable_r_window=None, omega0=None,
            B1=float("nan"), p=float("nan"), q=float("nan"),
            flag="degenerate-boundary" if eq.degenerate_boundary else None)

    B1 = b1_closed_form(params)
    p = params.delta + B1
    q = params.k * B1
    r = params.r

    omega0 = None
    if p > -1.0 / r:
        try:
            omega0 = omega0_transcendental(p, r)
        except DomainError:
            omega0 = None

    if B1 > 0:
        # case II: always stable when x2 exists
        return StabilityVerdict(CASE_II, True, (0.0, math.inf), omega0,
                                B1, p, q)

    if p < 0:
        # case I.A: stable iff arccos(p/q)/omega0 < r < 1/|p|, with
        # omega0 the transcendental root at this r.  The lower endpoint
        # moves with r and crosses the diagonal exactly at the first
        # imaginary-axis crossing arccos(p/q)/sqrt(q**2 - p**2), so the
        # inequality selects delays below that crossing.
        if abs(q) <= abs(p):
            return StabilityVerdict(
                CASE_I_A, False, None, omega0, B1, p, q,
                flag="stability condition inapplicable: |q| <= |p|")
        r_hi = 1.0 / abs(p)
        if omega0 is None:
            # no root of omega*cot(omega*r) = -p: condition fails
            return StabilityVerdict(CASE_I_A, False, None, None, B1, p, q)
        r_lo = math.acos(p / q) / omega0
        stable = r_lo < r < r_hi
        return StabilityVerdict(CASE_I_A, stable, (r_lo, r_hi), omega0,
                                B1, p, q)

    # case I.B: B1 < 0, p > 0
    if p > abs(q):
        return StabilityVerdict(CASE_I_B, True, (0.0, math.inf), omega0,
                                B1, p, q)
    if omega0 is None:
        return StabilityVerdict(CASE_I_B, False, None, None, B1, p, q,
                                flag="no omega0 root in (0, pi/r)")
    r_hi = math.acos(p / q) / omega0
    stable = r < r_hi
    return StabilityVerdict(CASE_I_B, stable, (0.0, r_hi), omega0,
                            B1, p, q)


def hopf_delay(params: Parameters) -> HopfPoint:
    """Critical delay and frequency for a parameter point without r.

    omega* = sqrt(q**2 - p**2), r* = arccos(p/q)/omega*.
    """
    params.require_k_range()
    eq = equilibria(params)
    if eq.x2 is None:
        raise DomainError("no positive equilibrium: Hopf analysis undefined")
    B1 = b1_closed_form(params)
    if B1 > 0:
        raise DomainError("case II (B1 > 0): equilibrium stable, no Hopf point")
    if B1 == 0:
        raise DomainError("B1 = 0: linearization degenerate")
    p = params.delta + B1
    q = params.k * B1
    omega = omega0_closed(p, q)  # raises DomainError when |q| <= |p|
    r = math.acos(p / q) / omega
    return HopfPoint(params=params.with_r(r), omega_star=omega, x2=eq.x2)


def transversality(h: HopfPoint) -> float:
    """d(Re lambda)/dr at the imaginary-axis crossing, from implicit
    differentiation of the characteristic equation at lambda = i*omega*."""
    params = h.params
    B1 = h.B1
    lam = 1j * h.omega_star
    e = params.k * B1 * cmath.exp(-lam * params.r)
    denom = 1.0 + params.r * e
    if abs(denom) < 1e-12:
        raise DomainError("degenerate crossing: implicit-function denominator ~ 0")
    dlam = -lam * e / denom
    return dlam.real


def hopf_surface_mesh(
    n: float,
    beta0: float,
    k_grid: Sequence[float],
    delta_grid: Sequence[float],
) -> list[tuple[float, float, float, float]]:
    """(k, delta, r, omega) records over the grid, Hopf-domain points only.

    Grid points where x2 is absent or no Hopf frequency exists are
    omitted, which reproduces the truncated bifurcation surface.
    """
    records = []
    for k in k_grid:
        for delta in delta_grid:
            try:
                params = Parameters(beta0=beta0, n=n, delta=delta, k=k)
                h = hopf_delay(params)
            except (DomainError, ValueError):
                continue
            records.append((float(k), float(delta), h.params.r, h.omega_star))
    records.sort(key=lambda rec: (rec[0], rec[1]))
    return records
