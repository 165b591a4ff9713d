"""Center-manifold reduction at a Hopf point of the delayed model.

The flow restricted to the center manifold reads

    du/dt = i*omega*u + sum_{j+k>=2} g_jk u**j conj(u)**k / (j! k!),

with g_jk = psi10 * f_jk.  The f_jk are Taylor coefficients of the
nonlinearity evaluated on the manifold; the w_jk are the manifold's
coefficient functions on [-r, 0].  Matching powers of (u, conj(u)) in the
invariance relation yields, for each (j, k),

    w_jk'(s) = (j-k) i omega w_jk(s) + g_jk e^{i omega s}
               + conj(g_kj) e^{-i omega s} + cross terms,

plus one scalar boundary condition; cross terms couple lower-order w's
with lower-order g's.  Both right-hand sides are generated here from the
matching rule itself rather than transcribed term by term, so a single
solver covers every index.

The resonant index (2,1) is handled by a bordered solve: the two
endpoint relations are rank-deficient there, and the system is closed by
requiring the solution to have no component along the critical
eigenfunction under the adjoint pairing (the limit of the
epsilon-perturbed nonresonant problem).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

from .errors import DomainError, NumericalError
from .model import DerivativeSet
from .qpoly import QuasiPolynomial
from .stability import HopfPoint

__all__ = [
    "ProjectionData",
    "CoefficientTable",
    "WEntry",
    "WTable",
    "projection_data",
    "expand_fjk",
    "closed_form_fjk",
    "solve_wjk",
    "solve_w21",
    "bilinear_form",
    "build_wtable",
    "ode_rhs",
    "boundary_rhs",
]

# f indices produced per total order
ORDER_INDICES = {
    2: [(2, 0), (1, 1), (0, 2)],
    3: [(3, 0), (2, 1), (1, 2), (0, 3)],
    4: [(4, 0), (3, 1), (2, 2), (1, 3), (0, 4)],
    5: [(3, 2)],
}

# w indices solved directly per stage; (k, j) partners come by conjugation
SOLVE_STAGES = {
    2: [(2, 0), (1, 1)],
    3: [(3, 0), (2, 1)],
    4: [(4, 0), (3, 1), (2, 2)],
}


@dataclass(frozen=True)
class ProjectionData:
    """Everything the reduction needs at one Hopf point."""

    omega: float
    r: float
    delta: float
    k: float
    B: DerivativeSet
    psi10: complex

    @property
    def B1(self) -> float:
        return self.B[1]

    @property
    def kB1(self) -> float:
        return self.k * self.B[1]


@dataclass
class CoefficientTable:
    """Complex Taylor coefficients f_jk and g_jk = psi10 * f_jk."""

    f: dict[tuple[int, int], complex]
    g: dict[tuple[int, int], complex]

    @classmethod
    def empty(cls) -> "CoefficientTable":
        return cls(f={}, g={})

    def absorb(self, f_part: dict[tuple[int, int], complex],
               psi10: complex) -> None:
        for key, val in f_part.items():
            self.f[key] = val
            self.g[key] = psi10 * val

    def to_json_dict(self) -> dict:
        out = {}
        for (j, k), v in sorted(self.f.items()):
            out[f"f_{j}{k}"] = {"re": v.real, "im": v.imag}
        for (j, k), v in sorted(self.g.items()):
            out[f"g_{j}{k}"] = {"re": v.real, "im": v.imag}
        return out


@dataclass(frozen=True)
class WEntry:
    fn: QuasiPolynomial
    at0: complex
    at_mr: complex


class WTable(dict):
    """Mapping (j, k) -> WEntry for the solved coefficient functions."""

    def value0(self, j: int, k: int) -> complex:
        return self[(j, k)].at0

    def value_mr(self, j: int, k: int) -> complex:
        return self[(j, k)].at_mr

    def add_conjugate(self, j: int, k: int) -> None:
        src = self[(j, k)]
        self[(k, j)] = WEntry(
            fn=src.fn.conjugate(),
            at0=src.at0.conjugate(),
            at_mr=src.at_mr.conjugate(),
        )

    def to_json_dict(self) -> dict:
        out = {}
        for (j, k), entry in sorted(self.items()):
            out[f"w_{j}{k}_0"] = {"re": entry.at0.real, "im": entry.at0.imag}
            out[f"w_{j}{k}_mr"] = {"re": entry.at_mr.real,
                                   "im": entry.at_mr.imag}
        return out


def projection_data(h: HopfPoint, B: DerivativeSet) -> ProjectionData:
    """psi10 = [1 + (p - i*omega) r] / ([1 + p r]^2 + omega^2 r^2)."""
    params = h.params
    omega, r = h.omega_star, params.r
    p = params.delta + B[1]
    num = 1.0 + (p - 1j * omega) * r
    den = (1.0 + p * r) ** 2 + omega**2 * r**2
    return ProjectionData(omega=omega, r=r, delta=params.delta, k=params.k,
                          B=B, psi10=num / den)


# ----------------------------------------------------------------------
# Taylor coefficients of the restricted nonlinearity
# ----------------------------------------------------------------------

def _poly_mul(a: dict, b: dict, max_deg: int) -> dict:
    out: dict[tuple[int, int], complex] = {}
    for (j1, k1), c1 in a.items():
        for (j2, k2), c2 in b.items():
            j, k = j1 + j2, k1 + k2
            if j + k > max_deg:
                continue
            out[(j, k)] = out.get((j, k), 0.0) + c1 * c2
    return out


def _argument_poly(pd: ProjectionData, W: WTable, at_zero: bool,
                   max_deg: int) -> dict:
    """Series of the manifold point evaluated at s = 0 or s = -r:
    u e^{i omega s} + conj(u) e^{-i omega s} + sum w_jk(s) u^j ub^k/(j!k!)."""
    if at_zero:
        e_plus = 1.0 + 0.0j
    else:
        e_plus = cmath.exp(-1j * pd.omega * pd.r)
    poly = {(1, 0): e_plus, (0, 1): e_plus.conjugate()}
    for (j, k), entry in W.items():
        if j + k > max_deg:
            continue
        val = entry.at0 if at_zero else entry.at_mr
        poly[(j, k)] = poly.get((j, k), 0.0) + \
            val / (math.factorial(j) * math.factorial(k))
    return poly


def expand_fjk(order: int, W: WTable, pd: ProjectionData) -> dict:
    """f_jk for j+k == order by formal multinomial expansion of
    -sum_m (B_m/m!) A(0)^m + k sum_m (B_m/m!) A(-r)^m."""
    if order not in (2, 3, 4, 5):
        raise ValueError("order must be in 2..5")
    for (j, k) in _required_w(order):
        if (j, k) not in W:
            raise ValueError(f"w_{j}{k} required for order {order} is missing")
    total: dict[tuple[int, int], complex] = {}
    for at_zero, sign in ((True, -1.0), (False, pd.k)):
        a1 = _argument_poly(pd, W, at_zero, order)
        power = dict(a1)
        for m in range(2, order + 1):
            power = _poly_mul(power, a1, order)
            coef = sign * pd.B[m] / math.factorial(m)
            for key, c in power.items():
                total[key] = total.get(key, 0.0) + coef * c
    out = {}
    for (j, k) in ORDER_INDICES[order]:
        c = total.get((j, k), 0.0)
        out[(j, k)] = c * math.factorial(j) * math.factorial(k)
    return out


def _required_w(order: int) -> list[tuple[int, int]]:
    need = []
    for total in range(2, order - 1 + 1):
        for j in range(total + 1):
            need.append((j, total - j))
    return need


def closed_form_fjk(order: int, W: WTable, pd: ProjectionData) -> dict:
    """Hand-transcribed closed forms, the cross-check oracle for
    :func:`expand_fjk`.

    Three published sign slips are corrected here (each flips the sign
    of a single bracket relative to the multinomial expansion, which is
    the arbiter): the B3 bracket of f31, the B3 bracket of f22 and the
    B4 bracket of f32 all carry a minus sign.
    """
    o, r, k = pd.omega, pd.r, pd.k
    B2, B3, B4, B5 = pd.B[2], pd.B[3], pd.B[4], pd.B[5]
    E = lambda mult: cmath.exp(1j * mult * o * r)

    def w0(j, kk):
        return W.value0(j, kk)

    def wr(j, kk):
        return W.value_mr(j, kk)

    if order == 2:
        f20 = -B2 * (1.0 - k * E(-2))
        f11 = B2 * (k - 1.0)
        return {(2, 0): f20, (1, 1): f11, (0, 2): f20.conjugate()}

    if order == 3:
        f21 = (-B2 * w0(2, 0) - 2.0 * B2 * w0(1, 1)
               + 2.0 * k * B2 * E(-1) * wr(1, 1)
               + k * B2 * E(1) * wr(2, 0)
               - B3 * (1.0 - k * E(-1)))
        f30 = (-3.0 * B2 * w0(2, 0) - B3
               + 3.0 * k * B2 * E(-1) * wr(2, 0) + k * B3 * E(-3))
        return {(3, 0): f30, (2, 1): f21,
                (1, 2): f21.conjugate(), (0, 3): f30.conjugate()}

    if order == 4:
        f40 = (-B2 * (3.0 * w0(2, 0) ** 2 + 4.0 * w0(3, 0))
               - 6.0 * B3 * w0(2, 0) - B4
               + k * B2 * (3.0 * wr(2, 0) ** 2 + 4.0 * E(-1) * wr(3, 0))
               + 6.0 * k * B3 * E(-2) * wr(2, 0) + k * B4 * E(-4))
        f31 = (-B2 * (3.0 * w0(1, 1) * w0(2, 0) + 3.0 * w0(2, 1) + w0(3, 0))
               - B3 * (3.0 * w0(1, 1) + 3.0 * w0(2, 0))
               - B4
               + k * B2 * (3.0 * wr(1, 1) * wr(2, 0)
                           + 3.0 * E(-1) * wr(2, 1) + E(1) * wr(3, 0))
               + k * B3 * (3.0 * E(-2) * wr(1, 1) + 3.0 * wr(2, 0))
               + k * B4 * E(-2))
        f22 = (-B2 * (2.0 * w0(1, 1) ** 2 + 2.0 * w0(1, 2)
                      + w0(0, 2) * w0(2, 0) + 2.0 * w0(2, 1))
               - B3 * (w0(0, 2) + 4.0 * w0(1, 1) + w0(2, 0))
               - B4
               + k * B2 * (2.0 * wr(1, 1) ** 2 + 2.0 * E(-1) * wr(1, 2)
                           + wr(0, 2) * wr(2, 0) + 2.0 * E(1) * wr(2, 1))
               + k * B3 * (wr(0, 2) * E(-2) + 4.0 * wr(1, 1)
                           + E(2) * wr(2, 0))
               + k * B4)
        # the published f13 line is a typo for f13 = conj(f31)
        return {(4, 0): f40, (3, 1): f31, (2, 2): f22,
                (1, 3): f31.conjugate(), (0, 4): f40.conjugate()}

    if order == 5:
        f32 = (-B2 * (w0(0, 2) * w0(3, 0) + 6.0 * w0(1, 1) * w0(2, 1)
                      + 3.0 * w0(2, 2) + 3.0 * w0(1, 2) * w0(2, 0)
                      + 2.0 * w0(3, 1))
               - B3 * (6.0 * w0(1, 1) ** 2 + 3.0 * w0(1, 2)
                       + 3.0 * w0(0, 2) * w0(2, 0) + w0(3, 0)
                       + 6.0 * w0(1, 1) * w0(2, 0) + 6.0 * w0(2, 1))
               - B4 * (3.0 * w0(2, 0) + 6.0 * w0(1, 1) + w0(0, 2))
               - B5
               + k * B2 * (6.0 * wr(1, 1) * wr(2, 1)
                           + 3.0 * wr(1, 2) * wr(2, 0)
                           + 3.0 * E(-1) * wr(2, 2)
                           + wr(0, 2) * wr(3, 0)
                           + 2.0 * E(1) * wr(3, 1))
               + k * B3 * (3.0 * wr(0, 2) * E(-1) * wr(2, 0)
                           + 6.0 * E(-1) * wr(1, 1) ** 2
                           + 3.0 * E(-2) * wr(1, 2)
                           + E(2) * wr(3, 0)
                           + 6.0 * E(1) * wr(1, 1) * wr(2, 0)
                           + 6.0 * wr(2, 1))
               + k * B4 * (3.0 * E(1) * wr(2, 0)
                           + 6.0 * E(-1) * wr(1, 1)
                           + wr(0, 2) * E(-3))
               + k * B5 * E(-1))
        return {(3, 2): f32}

    raise ValueError(order)


# ----------------------------------------------------------------------
# Machine-generated right-hand sides
# ----------------------------------------------------------------------

def _cross_terms(j: int, k: int, g: dict) -> list[tuple[complex, tuple[int, int]]]:
    """Coupling coefficients c_ab such that the (j,k) invariance equation
    contains  sum c_ab * w_ab(s)  beyond the two pure exponentials.

    Derived from matching u^j conj(u)^k in
    d/dt sum w_ab u^a ub^b / (a! b!)  with
    du/dt = i omega u + sum g_cd u^c ub^d / (c! d!).
    """
    jk = math.factorial(j) * math.factorial(k)
    out: dict[tuple[int, int], complex] = {}

    def add(a, b, coeff):
        if a + b < 2 or a + b >= j + k:
            return
        out[(a, b)] = out.get((a, b), 0.0) + coeff

    for (c, d), gcd in g.items():
        if c + d < 2:
            continue
        cd = math.factorial(c) * math.factorial(d)
        # a * u^{a-1} ub^b * g_cd u^c ub^d
        a = j - c + 1
        b = k - d
        if a >= 1 and b >= 0:
            add(a, b, jk * a * gcd / (math.factorial(a) * math.factorial(b) * cd))
        # b * u^a ub^{b-1} * conj(g_cd) ub^c u^d
        a = j - d
        b = k - c + 1
        if a >= 0 and b >= 1:
            add(a, b, jk * b * gcd.conjugate()
                / (math.factorial(a) * math.factorial(b) * cd))
    return [(coeff, ab) for ab, coeff in out.items()]


def ode_rhs(j: int, k: int, gtab: CoefficientTable, W: WTable,
            pd: ProjectionData) -> QuasiPolynomial:
    """Inhomogeneous part of w_jk' = (j-k) i omega w_jk + rhs(s)."""
    omega = pd.omega
    rhs = QuasiPolynomial(omega, {
        (0, 1): gtab.g[(j, k)],
        (0, -1): gtab.g[(k, j)].conjugate(),
    })
    for coeff, (a, b) in _cross_terms(j, k, gtab.g):
        rhs = rhs + W[(a, b)].fn.scale(coeff)
    return rhs


def boundary_rhs(j: int, k: int, gtab: CoefficientTable, W: WTable,
                 pd: ProjectionData) -> complex:
    """Right-hand side of
    ((j-k) i omega + B1 + delta) w_jk(0) - k B1 w_jk(-r) = ..."""
    val = gtab.f[(j, k)] - gtab.g[(j, k)] - gtab.g[(k, j)].conjugate()
    for coeff, (a, b) in _cross_terms(j, k, gtab.g):
        val -= coeff * W[(a, b)].at0
    return val


# ----------------------------------------------------------------------
# Solvers
# ----------------------------------------------------------------------

def _resonance_multiplier(mult: int, pd: ProjectionData) -> complex:
    return (mult * 1j * pd.omega + pd.B1 + pd.delta
            - pd.kB1 * cmath.exp(-1j * mult * pd.omega * pd.r))


def solve_wjk(j: int, k: int, rhs: QuasiPolynomial, cond_rhs: complex,
              pd: ProjectionData) -> WEntry:
    """Solve the nonresonant (|j-k| != 1) coefficient function.

    w(s) = e^{(j-k) i omega s} (C + P(s)) with P the integral of the
    rate-shifted right-hand side; C follows from the scalar boundary
    condition.
    """
    mult = j - k
    if abs(mult) == 1:
        raise ValueError("index (j,k) with |j-k| == 1 is resonant; "
                         "use solve_w21")
    D = _resonance_multiplier(mult, pd)
    scale = abs(pd.B1 + pd.delta) + abs(pd.kB1) + abs(mult) * pd.omega
    if abs(D) < 1e-10 * max(1.0, scale):
        raise DomainError(
            f"near-resonant configuration at (j,k)=({j},{k}): |D|={abs(D)}")
    P = rhs.shift_rate(-mult).integrate()
    phase = cmath.exp(-1j * mult * pd.omega * pd.r)
    C = (cond_rhs + pd.kB1 * phase * P(-pd.r)) / D
    fn = (P + QuasiPolynomial.constant(pd.omega, C)).shift_rate(mult)
    return WEntry(fn=fn, at0=fn(0.0), at_mr=fn(-pd.r))


def solve_w21(rhs: QuasiPolynomial, cond_rhs: complex,
              pd: ProjectionData) -> WEntry:
    """Resonant (2,1) solve via a bordered system.

    The endpoint map of the ODE and the boundary condition are linearly
    dependent at exact resonance; the system is closed with the
    requirement that the solution carries no component along the
    critical eigenfunction under the adjoint pairing.  This equals the
    epsilon -> 0 limit of the perturbed nonresonant problem.
    """
    omega, r = pd.omega, pd.r
    P = rhs.shift_rate(-1).integrate()
    P_mr = P(-r)
    Pint = P.integrate()
    Q = Pint(0.0) - Pint(-r)          # integral of P over [-r, 0]
    phase = cmath.exp(-1j * omega * r)

    # unknowns (w(0), w(-r))
    A = np.array([
        [-phase, 1.0],
        [1j * omega + pd.B1 + pd.delta, -pd.kB1],
        [1.0, 0.0],
    ], dtype=complex)
    b = np.array([
        phase * P_mr,
        cond_rhs,
        -pd.psi10 * pd.kB1 * phase * Q,
    ], dtype=complex)
    cond = np.linalg.cond(A)
    if cond > 1e12:
        raise NumericalError(
            f"bordered system ill-conditioned (cond = {cond:.3e})")
    sol, *_ = np.linalg.lstsq(A, b, rcond=None)
    w0 = complex(sol[0])
    fn = (P + QuasiPolynomial.constant(omega, w0)).shift_rate(1)
    return WEntry(fn=fn, at0=w0, at_mr=fn(-r))


def bilinear_form(psi: QuasiPolynomial, phi: QuasiPolynomial,
                  pd: ProjectionData) -> complex:
    """<psi, phi> = psi(0) phi(0) + k B1 int_{-r}^0 psi(z+r) phi(z) dz,
    evaluated in closed form."""
    prod = psi.shift_arg(pd.r) * phi
    anti = prod.integrate()
    integral = anti(0.0) - anti(-pd.r)
    return psi(0.0) * phi(0.0) + pd.kB1 * integral


# ----------------------------------------------------------------------
# Full pipeline
# ----------------------------------------------------------------------

def build_wtable(pd: ProjectionData, max_order: int = 5
                 ) -> tuple[WTable, CoefficientTable]:
    """Staged construction of all w_jk and f_jk/g_jk tables.

    With max_order = 3 the build stops once g21 is available (enough for
    the first Lyapunov coefficient); max_order = 5 carries the expansion
    through g32 for the second.
    """
    if max_order not in (3, 5):
        raise ValueError("max_order must be 3 or 5")
    W = WTable()
    gtab = CoefficientTable.empty()

    gtab.absorb(expand_fjk(2, W, pd), pd.psi10)
    for (j, k) in SOLVE_STAGES[2]:
        W[(j, k)] = solve_wjk(j, k, ode_rhs(j, k, gtab, W, pd),
                              boundary_rhs(j, k, gtab, W, pd), pd)
        if j != k:
            W.add_conjugate(j, k)

    gtab.absorb(expand_fjk(3, W, pd), pd.psi10)
    if max_order == 3:
        return W, gtab

    for (j, k) in SOLVE_STAGES[3]:
        r = ode_rhs(j, k, gtab, W, pd)
        c = boundary_rhs(j, k, gtab, W, pd)
        if (j, k) == (2, 1):
            W[(j, k)] = solve_w21(r, c, pd)
        else:
            W[(j, k)] = solve_wjk(j, k, r, c, pd)
        W.add_conjugate(j, k)

    gtab.absorb(expand_fjk(4, W, pd), pd.psi10)
    for (j, k) in SOLVE_STAGES[4]:
        W[(j, k)] = solve_wjk(j, k, ode_rhs(j, k, gtab, W, pd),
                              boundary_rhs(j, k, gtab, W, pd), pd)
        if j != k:
            W.add_conjugate(j, k)

    gtab.absorb(expand_fjk(5, W, pd), pd.psi10)
    return W, gtab
