"""Direct integration of the delay equation, used to cross-check the
stability verdicts and the criticality predicted by sign(l1).

Classical RK4 by the method of steps on a delay-aligned uniform grid:
with h = r/steps_per_delay every delayed lookup x(t - r) falls on a
stored node, and the half-step stage lookups are filled by cubic Hermite
interpolation of the stored history (value + slope), which preserves the
fourth order of the scheme.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import NumericalError
from .model import Parameters, equilibria
from .stability import hopf_delay, transversality

__all__ = [
    "Trajectory",
    "AttractorReport",
    "integrate",
    "detect_attractor",
    "verify_direction",
]

KIND_EQUILIBRIUM = "EQUILIBRIUM"
KIND_LIMIT_CYCLE = "LIMIT_CYCLE"
KIND_UNDETERMINED = "UNDETERMINED"


@dataclass(frozen=True)
class Trajectory:
    t: np.ndarray
    x: np.ndarray
    params: Parameters
    history_offset: float

    def csv_lines(self):
        yield "t,x"
        for ti, xi in zip(self.t, self.x):
            yield f"{ti:.17g},{xi:.17g}"


@dataclass(frozen=True)
class AttractorReport:
    kind: str
    amplitude: Optional[float] = None
    period: Optional[float] = None

    def to_dict(self) -> dict:
        return {"kind": self.kind, "amplitude": self.amplitude,
                "period": self.period}


def _rhs(x: float, xd: float, beta0: float, n: float, delta: float,
         k: float) -> float:
    return (-(beta0 / (1.0 + x**n) + delta) * x
            + k * beta0 * xd / (1.0 + xd**n))


def integrate(params: Parameters, history_offset: float, t_max: float,
              steps_per_delay: int = 200) -> Trajectory:
    """Integrate with constant history x2 + history_offset on [-r, 0]."""
    if params.r is None:
        raise ValueError("integration needs the delay r")
    if t_max <= 0:
        raise ValueError("t_max must be positive")
    if steps_per_delay < 100:
        raise ValueError("steps_per_delay must be >= 100")
    eq = equilibria(params)
    if eq.x2 is None:
        raise ValueError("no positive equilibrium to offset from")

    beta0, n, delta, k, r = (params.beta0, params.n, params.delta,
                             params.k, params.r)
    N = steps_per_delay
    h = r / N
    steps = int(math.ceil(t_max / h))
    x0 = eq.x2 + history_offset

    # index i corresponds to t = -r + i*h; history occupies 0..N.
    # d holds node slopes for the Hermite interpolant; at t = 0 the
    # slope jumps, so the array keeps the left (history) limit and the
    # right limit is carried separately.
    x = np.empty(steps + N + 1)
    d = np.empty(steps + N + 1)
    x[: N + 1] = x0
    d[: N + 1] = 0.0  # constant history
    d_right0 = _rhs(x0, x0, beta0, n, delta, k)

    for i in range(N, N + steps):
        xi = x[i]
        di = d_right0 if i == N else d[i]
        xd0 = x[i - N]
        xd1 = x[i - N + 1]
        # cubic Hermite midpoint of the delayed interval
        d0 = d_right0 if i - N == N else d[i - N]
        xdm = 0.5 * (xd0 + xd1) + 0.125 * h * (d0 - d[i - N + 1])
        k1 = di
        k2 = _rhs(xi + 0.5 * h * k1, xdm, beta0, n, delta, k)
        k3 = _rhs(xi + 0.5 * h * k2, xdm, beta0, n, delta, k)
        k4 = _rhs(xi + h * k3, xd1, beta0, n, delta, k)
        xn = xi + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if not math.isfinite(xn):
            raise NumericalError(
                f"state became non-finite at t = {(i + 1 - N) * h}")
        x[i + 1] = xn
        d[i + 1] = _rhs(xn, xd1, beta0, n, delta, k)

    t = np.arange(-N, steps + 1) * h
    return Trajectory(t=t, x=x, params=params, history_offset=history_offset)


def detect_attractor(traj: Trajectory, window: float) -> AttractorReport:
    """Classify the trailing window of a trajectory.

    Near-constant -> EQUILIBRIUM; regular oscillation (peak heights and
    spacings repeat to 1%) -> LIMIT_CYCLE; anything else UNDETERMINED.
    """
    t, x = traj.t, traj.x
    if t[-1] - t[0] < 3.0 * window:
        raise ValueError("trajectory must cover at least 3 windows")
    mask = t >= t[-1] - window
    tw, xw = t[mask], x[mask]
    x2 = equilibria(traj.params).x2
    span = xw.max() - xw.min()
    if span < 1e-8 * (1.0 + x2):
        return AttractorReport(kind=KIND_EQUILIBRIUM)

    # interior local maxima
    interior = (xw[1:-1] >= xw[:-2]) & (xw[1:-1] > xw[2:])
    idx = np.nonzero(interior)[0] + 1
    if len(idx) < 3:
        return AttractorReport(kind=KIND_UNDETERMINED)
    heights = xw[idx] - x2
    spacing = np.diff(tw[idx])
    h_ref = np.mean(heights)
    s_ref = np.mean(spacing)
    if (np.max(np.abs(heights - h_ref)) <= 0.01 * max(abs(h_ref), 1e-12)
            and np.max(np.abs(spacing - s_ref)) <= 0.01 * s_ref):
        return AttractorReport(kind=KIND_LIMIT_CYCLE,
                               amplitude=float(0.5 * span),
                               period=float(s_ref))
    return AttractorReport(kind=KIND_UNDETERMINED)


def _settle(params: Parameters, offset: float, steps_per_delay: int,
            horizon_delays: float) -> AttractorReport:
    traj = integrate(params, offset,
                     t_max=horizon_delays * params.r,
                     steps_per_delay=steps_per_delay)
    # window long enough for several periods of the slow Hopf cycle
    window = min(8.0 * 2.0 * math.pi / _hopf_omega(params),
                 0.3 * horizon_delays * params.r)
    return detect_attractor(traj, window)


def _hopf_omega(params: Parameters) -> float:
    from .model import b1_closed_form
    B1 = b1_closed_form(params)
    p = params.delta + B1
    q = params.k * B1
    if abs(q) > abs(p):
        return math.sqrt(q * q - p * p)
    return 2.0 * math.pi / params.r


@dataclass(frozen=True)
class DirectionProbe:
    delta_r: float
    offset: float
    report: AttractorReport


@dataclass(frozen=True)
class DirectionReport:
    l1_sign: int
    probes: list[DirectionProbe]
    consistent: Optional[bool]
    note: str

    def to_dict(self) -> dict:
        return {
            "l1_sign": self.l1_sign,
            "consistent": self.consistent,
            "note": self.note,
            "probes": [
                {"delta_r": p.delta_r, "offset": p.offset,
                 **p.report.to_dict()}
                for p in self.probes
            ],
        }


def verify_direction(hopf_params: Parameters, r_hopf: float, l1_sign: int,
                     offsets: Sequence[float],
                     steps_per_delay: int = 150,
                     horizon_delays: float = 1500.0) -> DirectionReport:
    """Simulation cross-check of the criticality predicted by sign(l1).

    Supercritical (l1 < 0): on the unstable side of r_hopf (chosen by
    the transversality sign) a small stable cycle exists; amplitudes at
    offsets interpreted as delay increments Delta should grow like
    sqrt(Delta).  Subcritical (l1 > 0): on the stable side small offsets
    decay while a large one escapes the local basin within the horizon.
    """
    # which side of r_hopf destabilizes the equilibrium
    side = 1.0 if transversality(hopf_delay(hopf_params)) > 0 else -1.0
    probes: list[DirectionProbe] = []
    if l1_sign < 0:
        amps = []
        for dr in offsets:
            params = hopf_params.with_r(r_hopf + side * dr)
            rep = _settle(params, 0.01, steps_per_delay, horizon_delays)
            probes.append(DirectionProbe(delta_r=dr, offset=0.01, report=rep))
            amps.append(rep.amplitude if rep.kind == KIND_LIMIT_CYCLE
                        else None)
        if any(a is None for a in amps):
            return DirectionReport(l1_sign, probes, None,
                                   "inconclusive: no settled limit cycle")
        ratios_ok = True
        for a1, a2, d1, d2 in zip(amps, amps[1:], offsets, offsets[1:]):
            expected = math.sqrt(d2 / d1)
            if not (0.8 * expected <= a2 / a1 <= 1.2 * expected):
                ratios_ok = False
        return DirectionReport(l1_sign, probes, ratios_ok,
                               "sqrt-law amplitude scaling"
                               if ratios_ok else "amplitude scaling off")

    # subcritical: probe the stable side just off the frontier
    dr = -side * 0.02 * r_hopf
    params = hopf_params.with_r(r_hopf + dr)
    x2 = equilibria(params).x2
    small = _settle(params, 0.01 * x2, steps_per_delay, horizon_delays)
    probes.append(DirectionProbe(delta_r=dr, offset=0.01 * x2,
                                 report=small))
    big = _settle(params, -0.75 * x2, steps_per_delay, horizon_delays)
    probes.append(DirectionProbe(delta_r=dr, offset=-0.75 * x2,
                                 report=big))
    consistent = (small.kind == KIND_EQUILIBRIUM
                  and big.kind != KIND_EQUILIBRIUM)
    return DirectionReport(l1_sign, probes, consistent,
                           "bistability signature" if consistent
                           else "no bistability signature")
