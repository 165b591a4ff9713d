"""The delayed hematopoiesis model: parameters, equilibria and the
derivatives of the production nonlinearity at the positive equilibrium.

The state equation is

    x'(t) = -[beta0/(1 + x(t)**n) + delta] * x(t)
            + k * beta0 * x(t-r) / (1 + x(t-r)**n)

with beta0, delta, r > 0, n >= 1 and 1 < k <= 2 wherever the positive
equilibrium is involved.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional

from .errors import DomainError

__all__ = [
    "Parameters",
    "EquilibriumSet",
    "DerivativeSet",
    "beta",
    "beta_derivatives",
    "equilibria",
    "derivative_set",
    "b1_closed_form",
]


@dataclass(frozen=True)
class Parameters:
    """The five model constants.  ``r`` may be None for operations that
    solve for the delay themselves."""

    beta0: float
    n: float
    delta: float
    k: float
    r: Optional[float] = None

    def __post_init__(self):
        if not self.beta0 > 0:
            raise ValueError(f"beta0 must be positive, got {self.beta0}")
        if not self.delta > 0:
            raise ValueError(f"delta must be positive, got {self.delta}")
        if not self.n >= 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if self.r is not None and not self.r > 0:
            raise ValueError(f"r must be positive, got {self.r}")

    def with_r(self, r: float) -> "Parameters":
        return replace(self, r=r)

    def require_k_range(self) -> None:
        """k in (1, 2] is required by anything touching the positive
        equilibrium (k > 1 for existence, k <= 2 structurally)."""
        if not (1.0 < self.k <= 2.0):
            raise DomainError(
                f"k must lie in (1, 2] for the positive equilibrium, got {self.k}"
            )


@dataclass(frozen=True)
class EquilibriumSet:
    """x1 = 0 always; x2 present iff (beta0/delta)(k-1) - 1 > 0."""

    x1: float
    x2: Optional[float]
    degenerate_boundary: bool = False


@dataclass(frozen=True)
class DerivativeSet:
    """B[m] = q^(m)(x2) for q(x) = beta(x) * x, m = 1..5."""

    B: dict[int, float]

    def __getitem__(self, m: int) -> float:
        return self.B[m]


def beta(x: float, params: Parameters) -> float:
    """Hill-type production rate beta0 / (1 + x**n)."""
    if x < 0:
        raise ValueError("beta is only defined for x >= 0")
    return params.beta0 / (1.0 + x**params.n)


def _falling(n: float, i: int) -> float:
    """Falling factorial n (n-1) ... (n-i+1)."""
    out = 1.0
    for t in range(i):
        out *= n - t
    return out


def beta_derivatives(x: float, params: Parameters, order: int = 5) -> list[float]:
    """[beta(x), beta'(x), ..., beta^(order)(x)] in closed form.

    beta = g(h(x)) with g(u) = beta0/(1+u), h(x) = x**n; the chain rule
    terms below are the order-m Bell polynomials in h', ..., h^(m).
    """
    if order > 5:
        raise ValueError("closed forms are generated up to order 5 only")
    n = params.n
    D = 1.0 + x**n
    # g^(j)(u) = beta0 * (-1)^j * j! / D^(j+1)
    g = [params.beta0 * (-1.0) ** j * math.factorial(j) / D ** (j + 1)
         for j in range(order + 1)]
    # h^(i)(x); x > 0 is guaranteed at the positive equilibrium
    t = [None] + [_falling(n, i) * x ** (n - i) for i in range(1, order + 1)]
    out = [g[0]]
    if order >= 1:
        out.append(g[1] * t[1])
    if order >= 2:
        out.append(g[2] * t[1] ** 2 + g[1] * t[2])
    if order >= 3:
        out.append(g[3] * t[1] ** 3 + 3.0 * g[2] * t[1] * t[2] + g[1] * t[3])
    if order >= 4:
        out.append(
            g[4] * t[1] ** 4
            + 6.0 * g[3] * t[1] ** 2 * t[2]
            + g[2] * (3.0 * t[2] ** 2 + 4.0 * t[1] * t[3])
            + g[1] * t[4]
        )
    if order >= 5:
        out.append(
            g[5] * t[1] ** 5
            + 10.0 * g[4] * t[1] ** 3 * t[2]
            + g[3] * (15.0 * t[1] * t[2] ** 2 + 10.0 * t[1] ** 2 * t[3])
            + g[2] * (10.0 * t[2] * t[3] + 5.0 * t[1] * t[4])
            + g[1] * t[5]
        )
    return out


_BOUNDARY_RTOL = 1e-14


def equilibria(params: Parameters) -> EquilibriumSet:
    """Equilibria of the model: x1 = 0 and, when it exists,
    x2 = ((beta0/delta)(k-1) - 1)**(1/n)."""
    disc = (params.beta0 / params.delta) * (params.k - 1.0) - 1.0
    scale = (params.beta0 / params.delta) * abs(params.k - 1.0) + 1.0
    if abs(disc) <= _BOUNDARY_RTOL * scale:
        return EquilibriumSet(x1=0.0, x2=None, degenerate_boundary=True)
    if disc < 0:
        return EquilibriumSet(x1=0.0, x2=None)
    return EquilibriumSet(x1=0.0, x2=disc ** (1.0 / params.n))


def b1_closed_form(params: Parameters) -> float:
    """B1 at the positive equilibrium,
    delta/(k-1) * [n*delta/(beta0*(k-1)) - n + 1]."""
    k, d, b0, n = params.k, params.delta, params.beta0, params.n
    return d / (k - 1.0) * (n * d / (b0 * (k - 1.0)) - n + 1.0)


def derivative_set(params: Parameters, x2: float) -> DerivativeSet:
    """B_m = q^(m)(x2) = beta^(m)(x2) x2 + m beta^(m-1)(x2), m = 1..5."""
    bd = beta_derivatives(x2, params, order=5)
    B = {m: bd[m] * x2 + m * bd[m - 1] for m in range(1, 6)}
    return DerivativeSet(B=B)
