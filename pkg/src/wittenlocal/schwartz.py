"""Schwartz test functions on the Lie-algebra line, given by their transform.

A test function sigma is specified through its transform
``sigma_hat(u) = p(u) * exp(-u^2 / (2 tau^2))`` with a rational-coefficient
polynomial ``p``.  The transform convention is

    sigma_hat(u) = int e^{-i u x} sigma(x) dx,
    sigma(x)     = (1 / 2 pi) int sigma_hat(u) e^{i u x} du,

so that ``int sigma_hat(u) u^j du = 2 pi (-i)^j sigma^(j)(0)``.  The paper-side
functionals are

    sigma^(j)(0)      = (i^j / 2 pi) int_R sigma_hat(u) u^j du,
    sigma^[j]_pm(0)   = ((pm i)^j / 2 pi) int_0^inf sigma_hat(pm xi) xi^j dxi,

with the sum rule ``sigma^[j]_+ + sigma^[j]_- = sigma^(j)(0)``.  All moments of
``u^m exp(-u^2/(2 tau^2))`` are evaluated with the exact half-integer Gamma
ladder, so the functionals carry no quadrature error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np


def _double_factorial(n: int) -> int:
    """(n)!! with the convention (-1)!! = 0!! = 1."""
    if n <= 0:
        return 1
    out = 1
    while n > 0:
        out *= n
        n -= 2
    return out


def gamma_half_integer(twice: int) -> float:
    """Gamma(twice / 2) via the exact ladder; ``twice`` is a positive integer.

    Gamma(n) = (n-1)! and Gamma(n + 1/2) = (2n-1)!! / 2^n * sqrt(pi).
    """
    if twice <= 0:
        raise ValueError("argument must be positive")
    if twice % 2 == 0:
        return float(math.factorial(twice // 2 - 1))
    n = (twice - 1) // 2
    return _double_factorial(2 * n - 1) / 2.0**n * math.sqrt(math.pi)


@dataclass(frozen=True)
class SchwartzSpec:
    """sigma_hat(u) = p(u) exp(-u^2 / (2 tau^2)) with rational p."""

    poly: tuple[Fraction, ...]
    tau: float

    def __post_init__(self):
        if self.tau <= 0:
            raise ValueError("tau must be positive")
        object.__setattr__(self, "poly", tuple(Fraction(c) for c in self.poly))
        object.__setattr__(self, "_poly_floats", tuple(float(c) for c in self.poly))

    @property
    def degree(self) -> int:
        return len(self.poly) - 1

    def hat(self, u: np.ndarray) -> np.ndarray:
        """sigma_hat(u); scalar floats stay scalar, arrays stay vectorized."""
        if isinstance(u, float):
            p = 0.0
            for c in reversed(self._poly_floats):
                p = p * u + c
            return p * math.exp(-(u * u) / (2.0 * self.tau**2))
        u = np.asarray(u, dtype=float)
        p = np.zeros_like(u)
        for c in reversed(self._poly_floats):
            p = p * u + c
        return p * np.exp(-(u * u) / (2.0 * self.tau**2))

    def hat_truncation_radius(self, tiny: float = 1e-18) -> float:
        """A radius R with |sigma_hat| <= tiny for |u| >= R."""
        tau = self.tau
        bound = sum(abs(float(c)) for c in self.poly)
        r = 1.0
        for _ in range(60):
            poly_mag = bound * max(1.0, r) ** self.degree
            r_new = tau * math.sqrt(2.0 * math.log(max(poly_mag / tiny, math.e)))
            if abs(r_new - r) < 1e-9:
                break
            r = r_new
        return max(r, 8.0 * tau)


def gaussian_full_moment(m: int, tau: float) -> float:
    """int_R u^m exp(-u^2/(2 tau^2)) du; zero for odd m."""
    if m % 2:
        return 0.0
    return _double_factorial(m - 1) * tau ** (m + 1) * math.sqrt(2.0 * math.pi)


def gaussian_half_moment(m: int, tau: float) -> float:
    """int_0^inf u^m exp(-u^2/(2 tau^2)) du = 2^{(m-1)/2} tau^{m+1} Gamma((m+1)/2)."""
    return 2.0 ** ((m - 1) / 2.0) * tau ** (m + 1) * gamma_half_integer(m + 1)


def sigma_deriv_at_zero(spec: SchwartzSpec, j: int) -> complex:
    """sigma^(j)(0), exactly through Gaussian moments."""
    total = 0.0
    for k, c in enumerate(spec.poly):
        if c:
            total += float(c) * gaussian_full_moment(k + j, spec.tau)
    return (1j**j) * total / (2.0 * math.pi)


def sigma_bracket(spec: SchwartzSpec, j: int, sign: int) -> complex:
    """sigma^[j]_pm(0) = ((pm i)^j / 2 pi) int_0^inf sigma_hat(pm xi) xi^j dxi."""
    if sign not in (+1, -1):
        raise ValueError("sign must be +1 or -1")
    total = 0.0
    for k, c in enumerate(spec.poly):
        if c:
            total += float(c) * sign**k * gaussian_half_moment(k + j, spec.tau)
    return ((sign * 1j) ** j) * total / (2.0 * math.pi)


def sigma_eval(spec: SchwartzSpec, x: float) -> complex:
    """sigma(x) in closed form.

    Uses ``M_k(x) = int u^k e^{-u^2/(2 tau^2)} e^{iux} du = q_k(x) G(x)`` with
    ``G(x) = tau sqrt(2 pi) exp(-tau^2 x^2 / 2)`` and the recursion
    ``q_0 = 1``, ``q_k = -i (q_{k-1}' - tau^2 x q_{k-1})``.
    """
    tau2 = spec.tau**2
    # Represent q_k as a list of complex coefficients in x.
    q: list[complex] = [1.0 + 0j]
    moments: list[complex] = []
    g = spec.tau * math.sqrt(2.0 * math.pi) * math.exp(-tau2 * x * x / 2.0)

    def eval_poly(coeffs: Sequence[complex], x0: float) -> complex:
        acc = 0j
        for c in reversed(coeffs):
            acc = acc * x0 + c
        return acc

    for k in range(len(spec.poly)):
        moments.append(eval_poly(q, x) * g)
        # q_{k+1} = -i (q' - tau^2 x q)
        deriv = [q[i] * i for i in range(1, len(q))]
        shifted = [0j] + [-tau2 * c for c in q]
        new = [0j] * max(len(deriv), len(shifted))
        for i, c in enumerate(deriv):
            new[i] += c
        for i, c in enumerate(shifted):
            new[i] += c
        q = [-1j * c for c in new]
    total = 0j
    for c, mom in zip(spec.poly, moments):
        total += float(c) * mom
    return total / (2.0 * math.pi)
