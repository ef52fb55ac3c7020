"""Closed-form asymptotic expansions of the model oscillatory integrals.

For a local model with weight signature (n+, n-) and amplitude f, the model
integral has an expansion ``I(eps) ~ eps * sum_j eps^j A_j``.  This module
evaluates the coefficients A_j directly from the closed formulas:

* indefinite models at the critical value (zeta_F = 0): regular terms carry
  the point functional ``sigma^(j)(0)`` against half-line t-integrals of
  alternating derivatives of the spherical mean, and singular terms (j >=
  L+1) carry the one-sided functionals ``sigma^[j]_pm(0)`` against exact
  derivative data of the mean at the origin;
* indefinite models at regular values (zeta_F != 0): the pre-collection
  display with signed powers of zeta and boundary constants C_{N,m,p,q};
  only ``sigma^(j)(0)`` functionals remain;
* definite models: the one-sided formula (matching sign), an identically
  vanishing partial sum (wrong sign), or the bracket-functional series at
  the critical value.

Normalization: the model integral equals 1/Lambda times the standard-form
integral at doubled arguments, so A_j = 2^{1+j}/Lambda times the
standard-form coefficient at (2 zeta_F, 2 eps).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from scipy.integrate import quad

from .amplitude import (
    AmplitudeSpec,
    SphericalMean,
    alternating_derivative,
    alternating_origin_deriv,
    make_scaled_mean,
)
from .coeffs import C_Nmpq, c_def_jk, c_jkl, c_pm_j0pq
from .exactscalar import ExactScalar
from .model import LocalModel
from .schwartz import SchwartzSpec, sigma_bracket, sigma_deriv_at_zero

BRACKET_PLUS = "bracket_plus"
BRACKET_MINUS = "bracket_minus"
SIGMA_DERIV = "sigma_deriv"

_QUAD_LIMIT = 300


@dataclass(frozen=True)
class SingularTerm:
    """One ``sigma^[j]_pm(0)``-weighted contribution to a coefficient."""

    functional: str
    weight: complex
    functional_value: complex
    weight_exact: ExactScalar | None = None

    @property
    def contribution(self) -> complex:
        return self.weight * self.functional_value


@dataclass(frozen=True)
class CoefficientEntry:
    """The order-j coefficient A_j, split into functional channels.

    ``regular_part = regular_weight * sigma^(j)(0)`` collects everything
    carried by the point functional; ``singular_part`` lists the one-sided
    bracket terms (empty away from the critical value and below the
    threshold order).
    """

    j: int
    regular_weight: complex
    regular_part: complex
    singular_part: tuple[SingularTerm, ...] = ()
    quadrature_error: float = 0.0

    @property
    def value(self) -> complex:
        return self.regular_part + sum(t.contribution for t in self.singular_part)

    def bracket_weight(self, functional: str) -> complex:
        return sum(t.weight for t in self.singular_part if t.functional == functional)

    def bracket_weight_exact(self, functional: str) -> ExactScalar:
        total = ExactScalar()
        for t in self.singular_part:
            if t.functional == functional and t.weight_exact is not None:
                total = total + t.weight_exact
        return total


@dataclass(frozen=True)
class ExpansionResult:
    """Coefficients of ``I(eps) ~ eps * sum_j eps^j A_j`` up to order M."""

    epsilon_prefactor_order: int
    coefficients: tuple[CoefficientEntry, ...]
    leading_order: int | None
    zeta_F: float
    M: int

    def coefficient(self, j: int) -> CoefficientEntry:
        if not (0 <= j <= self.M):
            raise ValueError("coefficient order out of range")
        return self.coefficients[j]

    def coefficient_values(self) -> list[complex]:
        return [entry.value for entry in self.coefficients]

    def partial_sum(self, epsilon: float) -> complex:
        acc = 0j
        for entry in self.coefficients:
            acc += epsilon**entry.j * entry.value
        return epsilon**self.epsilon_prefactor_order * acc

    def to_csv(self) -> str:
        lines = ["j,functional,real,imag"]
        for entry in self.coefficients:
            lines.append(
                f"{entry.j},{SIGMA_DERIV},{entry.regular_part.real:.17e},{entry.regular_part.imag:.17e}"
            )
            for term in entry.singular_part:
                c = term.contribution
                lines.append(f"{entry.j},{term.functional},{c.real:.17e},{c.imag:.17e}")
        return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# t-integrals
# ---------------------------------------------------------------------------

def _t_integral(mean: SphericalMean, power: int, n_alt: int, zeta_t: float,
                tol: float) -> tuple[float, float]:
    """int_{|zeta_t|}^inf t^power (d_- - d_+)^{n_alt} scriptS((t+zeta_t)/2, (t-zeta_t)/2) dt."""
    lo = abs(zeta_t)
    hi = mean.t_integral_upper(zeta_t)
    if hi <= lo:
        return 0.0, 0.0

    def integrand(t: float) -> float:
        return t**power * alternating_derivative(
            mean, 0.5 * (t + zeta_t), 0.5 * (t - zeta_t), n_alt)

    val, err = quad(integrand, lo, hi, epsabs=tol, epsrel=tol, limit=_QUAD_LIMIT)
    return val, err


# ---------------------------------------------------------------------------
# indefinite models
# ---------------------------------------------------------------------------

def expand_indefinite(model: LocalModel, f: AmplitudeSpec, sigma: SchwartzSpec,
                      zeta_F: float, M: int, quad_tol: float = 1e-10) -> ExpansionResult:
    """Expansion coefficients A_0..A_M of an indefinite local model."""
    if model.is_definite:
        raise ValueError("model must be indefinite")
    if M < 0:
        raise ValueError("M must be nonnegative")
    mean = make_scaled_mean(f, model)
    L_plus, L_minus = model.n_plus // 2, model.n_minus // 2
    L = L_plus + L_minus - 2
    zeta_t = 2.0 * zeta_F
    lam_inv = Fraction(1, model.Lambda)

    entries = []
    for j in range(0, M + 1):
        scale = 2 ** (1 + j) * lam_inv
        if zeta_t == 0.0:
            entry = _indefinite_entry_critical(
                mean, sigma, j, L, L_plus, L_minus, scale, quad_tol)
        else:
            entry = _indefinite_entry_regular(
                mean, sigma, j, L, L_plus, L_minus, zeta_t, scale, quad_tol)
        entries.append(entry)
    return ExpansionResult(1, tuple(entries), 1, zeta_F, M)


def _indefinite_entry_critical(mean: SphericalMean, sigma: SchwartzSpec, j: int,
                               L: int, L_plus: int, L_minus: int,
                               scale: Fraction, tol: float) -> CoefficientEntry:
    reg_weight = 0j
    quad_err = 0.0
    for l in range(0, min(j, L) + 1):
        coeff = c_jkl(L_plus, L_minus, j, 0, l).to_complex()
        val, err = _t_integral(mean, L - l, j - l, 0.0, tol)
        reg_weight += coeff * val
        quad_err += abs(coeff) * err
    reg_weight *= float(scale)
    quad_err *= float(scale)

    singular = []
    if j >= L + 1:
        for sign, functional in ((+1, BRACKET_PLUS), (-1, BRACKET_MINUS)):
            weight_exact = ExactScalar()
            for p in range(0, j - L):
                q = j - L - 1 - p
                coeff = c_pm_j0pq(L_plus, L_minus, sign, j, p, q)
                if sign > 0:
                    mixed = alternating_origin_deriv(mean, q, dminus=p)
                else:
                    mixed = alternating_origin_deriv(mean, q, dplus=p) * ((-1) ** p)
                weight_exact = weight_exact + coeff * mixed
            weight_exact = weight_exact * scale
            singular.append(SingularTerm(
                functional=functional,
                weight=weight_exact.to_complex(),
                functional_value=sigma_bracket(sigma, j, sign),
                weight_exact=weight_exact,
            ))
    sigma_j = sigma_deriv_at_zero(sigma, j)
    return CoefficientEntry(j, reg_weight, reg_weight * sigma_j,
                            tuple(singular), quad_err)


def _indefinite_entry_regular(mean: SphericalMean, sigma: SchwartzSpec, j: int,
                              L: int, L_plus: int, L_minus: int, zeta_t: float,
                              scale: Fraction, tol: float) -> CoefficientEntry:
    s = 1 if zeta_t > 0 else -1
    az = abs(zeta_t)
    reg_weight = 0j
    quad_err = 0.0
    for k in range(0, L + 1):
        for l in range(k, min(k + j, L) + 1):
            front = (c_jkl(L_plus, L_minus, j, k, l)
                     * Fraction(2 ** (j - l + k))).to_complex()
            if front == 0:
                continue
            integral, err = _t_integral(mean, L - l, j - l + k, zeta_t, tol)
            bracket = zeta_t**k / 2 ** (j - l + k) * integral
            quad_err += abs(front) * abs(zeta_t) ** k / 2 ** (j - l + k) * err
            for m in range(L - j + 1, L - l + k + 1):
                inner = 0.0
                for p in range(0, m + j - L):
                    q = m + j - L - 1 - p
                    c = C_Nmpq(L - l, j + k - l, p, q)
                    if not c:
                        continue
                    if s > 0:
                        mixed = (-1) ** p * alternating_derivative(
                            mean, az, 0.0, q, dplus=p)
                    else:
                        mixed = alternating_derivative(mean, 0.0, az, q, dminus=p)
                    inner += float(c) * mixed
                bracket += s ** (L - l - m + k + 1) * az ** max(k, m) * inner
            reg_weight += front * bracket
    reg_weight *= float(scale)
    quad_err *= float(scale)
    sigma_j = sigma_deriv_at_zero(sigma, j)
    return CoefficientEntry(j, reg_weight, reg_weight * sigma_j, (), quad_err)


# ---------------------------------------------------------------------------
# definite models
# ---------------------------------------------------------------------------

def expand_definite(model: LocalModel, f: AmplitudeSpec, sigma: SchwartzSpec,
                    zeta_F: float, M: int, quad_tol: float = 1e-10) -> ExpansionResult:
    """Expansion coefficients A_0..A_M of a definite local model.

    The partial sum is identically zero when zeta_F has the sign opposite to
    the model (the integral is smaller than any power of eps there).
    """
    if not model.is_definite:
        raise ValueError("model must be definite")
    if M < 0:
        raise ValueError("M must be nonnegative")
    mean = make_scaled_mean(f, model)
    s = model.sign
    L = model.dim // 2
    zeta_t = 2.0 * zeta_F
    lam_inv = Fraction(1, model.Lambda)

    entries = []
    leading: int | None
    if zeta_t == 0.0:
        leading = L
        for j in range(0, M + 1):
            scale = 2 ** (1 + j) * lam_inv
            singular = ()
            if j >= L - 1:
                weight_exact = (c_def_jk(L, j, 0) * mean.exact_origin_deriv(j + 1 - L)
                                * (scale * s**j))
                functional = BRACKET_MINUS if s > 0 else BRACKET_PLUS
                singular = (SingularTerm(
                    functional=functional,
                    weight=weight_exact.to_complex(),
                    functional_value=sigma_bracket(sigma, j, -s),
                    weight_exact=weight_exact,
                ),)
            entries.append(CoefficientEntry(j, 0j, 0j, singular, 0.0))
    elif s * zeta_t > 0.0:
        leading = 1
        az = abs(zeta_t)
        for j in range(0, M + 1):
            scale = 2 ** (1 + j) * lam_inv
            weight = 0j
            for k in range(max(0, L - 1 - j), L):
                coeff = c_def_jk(L, j, k).to_complex()
                weight += (zeta_t**k * s ** (j + k) * coeff
                           * mean.deriv(az, 0.0, j + k + 1 - L, 0))
            weight *= float(scale)
            sigma_j = sigma_deriv_at_zero(sigma, j)
            entries.append(CoefficientEntry(j, weight, weight * sigma_j, (), 0.0))
    else:
        leading = None
        for j in range(0, M + 1):
            entries.append(CoefficientEntry(j, 0j, 0j, (), 0.0))
    return ExpansionResult(1, tuple(entries), leading, zeta_F, M)


def expand(model: LocalModel, f: AmplitudeSpec, sigma: SchwartzSpec,
           zeta_F: float, M: int, quad_tol: float = 1e-10) -> ExpansionResult:
    """Dispatch on the model signature."""
    if model.is_definite:
        return expand_definite(model, f, sigma, zeta_F, M, quad_tol)
    return expand_indefinite(model, f, sigma, zeta_F, M, quad_tol)


# ---------------------------------------------------------------------------
# one-sided limits at the critical value
# ---------------------------------------------------------------------------

def one_sided_limits(model: LocalModel, f: AmplitudeSpec, sigma: SchwartzSpec,
                     j: int, side: int, quad_tol: float = 1e-10) -> complex:
    """lim_{zeta_F -> 0 from the given side} A_j(zeta_F).

    The limit keeps the regular part (continuously extended to the critical
    value) and converts exactly one bracket channel into the point
    functional ``sigma^(j)(0)``: approaching from above keeps the minus
    bracket, approaching from below the plus bracket.  For a definite model
    this reproduces the rule that the model contributes only on its own
    side.
    """
    if side not in (+1, -1):
        raise ValueError("side must be +1 or -1")
    result = expand(model, f, sigma, 0.0, max(j, 0), quad_tol)
    entry = result.coefficient(j)
    kept = BRACKET_MINUS if side > 0 else BRACKET_PLUS
    sigma_j = sigma_deriv_at_zero(sigma, j)
    return (entry.regular_weight + entry.bracket_weight(kept)) * sigma_j
