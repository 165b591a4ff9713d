"""Exact algebra for quasipolynomials  sum c * s**m * exp(i*mult*omega*s).

Every coefficient function of the center-manifold expansion solves a
linear ODE whose right-hand side lives in this class, and the class is
closed under the operations needed there: linear combination,
multiplication by exp(i*d*omega*s), integration from 0, differentiation,
argument shift and term-wise product.  Exponential rates are keyed by the
integer multiple of i*omega, so resonance is decided exactly, never by a
floating-point comparison.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping

__all__ = [
    "QuasiPolynomial",
    "qp_combine",
    "qp_shift_rate",
    "qp_integrate",
    "qp_eval",
]

_PRUNE = 1e-300


def _normalized(terms: Mapping[tuple[int, int], complex]) -> dict:
    out = {}
    for key, c in terms.items():
        power, mult = key
        if power < 0:
            raise ValueError("polynomial power must be >= 0")
        c = complex(c)
        if abs(c) > _PRUNE:
            out[(int(power), int(mult))] = c
    return out


@dataclass(frozen=True)
class QuasiPolynomial:
    """Finite sum of terms c * s**power * exp(i*mult*omega*s)."""

    omega: float
    terms: dict[tuple[int, int], complex] = field(default_factory=dict)

    def __post_init__(self):
        if not self.omega > 0:
            raise ValueError("omega must be positive")
        object.__setattr__(self, "terms", _normalized(self.terms))

    # -- constructors ------------------------------------------------

    @classmethod
    def zero(cls, omega: float) -> "QuasiPolynomial":
        return cls(omega, {})

    @classmethod
    def constant(cls, omega: float, c: complex) -> "QuasiPolynomial":
        return cls(omega, {(0, 0): c})

    @classmethod
    def exponential(cls, omega: float, mult: int, coeff: complex = 1.0,
                    power: int = 0) -> "QuasiPolynomial":
        """coeff * s**power * exp(i*mult*omega*s)."""
        return cls(omega, {(power, mult): coeff})

    # -- algebra -----------------------------------------------------

    def __add__(self, other: "QuasiPolynomial") -> "QuasiPolynomial":
        self._check(other)
        terms = dict(self.terms)
        for key, c in other.terms.items():
            terms[key] = terms.get(key, 0.0) + c
        return QuasiPolynomial(self.omega, terms)

    def __sub__(self, other: "QuasiPolynomial") -> "QuasiPolynomial":
        return self + other.scale(-1.0)

    def scale(self, c: complex) -> "QuasiPolynomial":
        return QuasiPolynomial(self.omega,
                               {key: c * v for key, v in self.terms.items()})

    def __mul__(self, other: "QuasiPolynomial") -> "QuasiPolynomial":
        """Term-wise product: powers add, rate multiples add (exact)."""
        self._check(other)
        terms: dict[tuple[int, int], complex] = {}
        for (p1, m1), c1 in self.terms.items():
            for (p2, m2), c2 in other.terms.items():
                key = (p1 + p2, m1 + m2)
                terms[key] = terms.get(key, 0.0) + c1 * c2
        return QuasiPolynomial(self.omega, terms)

    def shift_rate(self, dmult: int) -> "QuasiPolynomial":
        """Multiply by exp(i*dmult*omega*s)."""
        return QuasiPolynomial(
            self.omega,
            {(p, m + dmult): c for (p, m), c in self.terms.items()})

    def shift_arg(self, dt: float) -> "QuasiPolynomial":
        """Return q(s + dt) as a quasipolynomial in s."""
        terms: dict[tuple[int, int], complex] = {}
        for (p, m), c in self.terms.items():
            phase = c * _cis(m * self.omega * dt)
            for t in range(p + 1):
                key = (t, m)
                terms[key] = terms.get(key, 0.0) + \
                    phase * math.comb(p, t) * dt ** (p - t)
        return QuasiPolynomial(self.omega, terms)

    def conjugate(self) -> "QuasiPolynomial":
        """Complex conjugate as a function of real s."""
        return QuasiPolynomial(
            self.omega,
            {(p, -m): c.conjugate() for (p, m), c in self.terms.items()})

    def derivative(self) -> "QuasiPolynomial":
        terms: dict[tuple[int, int], complex] = {}
        for (p, m), c in self.terms.items():
            if p > 0:
                key = (p - 1, m)
                terms[key] = terms.get(key, 0.0) + p * c
            if m != 0:
                key = (p, m)
                terms[key] = terms.get(key, 0.0) + 1j * m * self.omega * c
        return QuasiPolynomial(self.omega, terms)

    def integrate(self) -> "QuasiPolynomial":
        """Antiderivative P with P(s) = integral_0^s q(theta) dtheta,
        P(0) = 0.

        Terms with mult == 0 integrate to s**(p+1)/(p+1); terms with a
        nonzero rate integrate by repeated parts and pick up the
        constant making P(0) = 0.
        """
        terms: dict[tuple[int, int], complex] = {}

        def add(key, c):
            terms[key] = terms.get(key, 0.0) + c

        for (p, m), c in self.terms.items():
            if m == 0:
                add((p + 1, 0), c / (p + 1))
            else:
                a = 1j * m * self.omega
                # int_0^s th^p e^{a th} dth =
                #   e^{a s} sum_t (-1)^t p!/(p-t)! s^{p-t} / a^{t+1}
                #   - (-1)^p p! / a^{p+1}
                for t in range(p + 1):
                    coeff = c * (-1.0) ** t * _ff(p, t) / a ** (t + 1)
                    add((p - t, m), coeff)
                add((0, 0), -c * (-1.0) ** p * math.factorial(p) / a ** (p + 1))
        return QuasiPolynomial(self.omega, terms)

    # -- evaluation --------------------------------------------------

    def __call__(self, s: float) -> complex:
        total = 0.0 + 0.0j
        for (p, m), c in self.terms.items():
            total += c * s**p * _cis(m * self.omega * s)
        return total

    def is_zero(self, tol: float = 0.0) -> bool:
        return all(abs(c) <= tol for c in self.terms.values())

    def max_abs_coeff(self) -> float:
        return max((abs(c) for c in self.terms.values()), default=0.0)

    # -- serialization ----------------------------------------------

    def to_json(self) -> str:
        items = [
            {"re": c.real, "im": c.imag, "power": p, "mult": m}
            for (p, m), c in sorted(self.terms.items())
        ]
        return json.dumps(items)

    @classmethod
    def from_json(cls, omega: float, payload: str) -> "QuasiPolynomial":
        items = json.loads(payload)
        terms = {(it["power"], it["mult"]): complex(it["re"], it["im"])
                 for it in items}
        return cls(omega, terms)

    def _check(self, other: "QuasiPolynomial") -> None:
        if self.omega != other.omega:
            raise ValueError(
                f"frequency mismatch: {self.omega} vs {other.omega}")


def _cis(x: float) -> complex:
    return complex(math.cos(x), math.sin(x))


def _ff(p: int, t: int) -> float:
    """Falling factorial p (p-1) ... (p-t+1)."""
    return math.factorial(p) / math.factorial(p - t)


def qp_combine(a: QuasiPolynomial, b: QuasiPolynomial,
               ca: complex, cb: complex) -> QuasiPolynomial:
    """ca*a + cb*b, term-merged."""
    return a.scale(ca) + b.scale(cb)


def qp_shift_rate(a: QuasiPolynomial, dmult: int) -> QuasiPolynomial:
    return a.shift_rate(dmult)


def qp_integrate(a: QuasiPolynomial) -> QuasiPolynomial:
    return a.integrate()


def qp_eval(a: QuasiPolynomial, s: float) -> complex:
    return a(s)
