"""Quadric hypersurfaces of the local model and their natural measure.

The level set {<Q w, w> = 2 zeta} carries the measure characterized by
``dw = Theta wedge d(q)``; in inertial polar coordinates (after the weight
rescaling T that divides each coordinate pair by sqrt|weight|) the integral
of a compactly supported g reduces to a one-dimensional integral over the
slice parameterization r = sqrt(s^2 + 2 zeta) (zeta >= 0; mirrored in r for
zeta < 0).

The module also evaluates the weighted-derivative integrands

    W_k (D_- - D_+)^l f

directly in w-space: the operators D_pm are applied symbolically to the
amplitude (a small closed term algebra over monomials, bump derivatives, and
inverse powers of u_pm := ||T^{-1} w^pm||^2), the double sphere average is
taken by tensor quadrature, and the slice integral by adaptive quadrature.
Where every quadrature point lies on the bump plateau the sphere averages
collapse to an exact Laurent polynomial in (r^2, s^2) whose negative powers
cancel identically; this exact polynomial path avoids the floating-point
cancellation the raw term sum would suffer near the cone tip.  The whole
route shares nothing with the simplex-reduction evaluator of the spherical
mean, so agreement of the two sides of the slice/t-integral identity is a
genuine cross-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.integrate import quad

from .amplitude import AmplitudeSpec, make_scaled_mean
from .exactscalar import ExactScalar
from .model import LocalModel
from .spheres import (
    sphere_monomial_moment_exact,
    sphere_quadrature,
    sphere_trace_identity_check,
)

__all__ = [
    "QuadricSlice",
    "hypersurface_integral",
    "W_Dpm_integral",
    "sphere_trace_identity_check",
]

_QUAD_KW = dict(epsabs=1e-11, epsrel=1e-11, limit=300)


@dataclass(frozen=True)
class QuadricSlice:
    """The level set {<Q w, w> = 2 zeta} of an indefinite local model."""

    model: LocalModel
    zeta: float

    def __post_init__(self):
        if self.model.is_definite:
            raise ValueError(
                "quadric slices require an indefinite model (the definite "
                "level set is a point or empty)")


# ---------------------------------------------------------------------------
# hypersurface integrals of plain amplitudes
# ---------------------------------------------------------------------------

def hypersurface_integral(slc: QuadricSlice, g: AmplitudeSpec) -> float:
    """Integral of g over the pointed quadric with its natural measure.

    Reduces to ``1/Lambda * int (s^2+2 zeta)^{n+/2-1} s^{n--1}
    S_{g o T}(sqrt(s^2+2 zeta), s) ds`` for zeta >= 0 and the mirrored form
    for zeta < 0, evaluated with the exact spherical-mean machinery.
    """
    model, zeta = slc.model, slc.zeta
    mean = make_scaled_mean(g, model)
    n_plus, n_minus = model.n_plus, model.n_minus
    lam_inv = 1.0 / model.Lambda

    if zeta >= 0:
        offset, p_out, p_in = 2.0 * zeta, n_plus // 2 - 1, n_minus - 1

        def integrand(x: float) -> float:
            t, u = x * x + offset, x * x
            return (t**p_out) * x**p_in * mean.eval(t, u)
    else:
        offset, p_out, p_in = -2.0 * zeta, n_minus // 2 - 1, n_plus - 1

        def integrand(x: float) -> float:
            t, u = x * x, x * x + offset
            return (u**p_out) * x**p_in * mean.eval(t, u)

    x_hi = math.sqrt(max(mean.t_integral_upper(offset), offset))
    val, _ = quad(integrand, 0.0, x_hi, **_QUAD_KW)
    return lam_inv * val


# ---------------------------------------------------------------------------
# the w-space term algebra for W_k (D_- - D_+)^l f
# ---------------------------------------------------------------------------

_TermKey = tuple[tuple[int, ...], int, int, int]  # (alpha, bump_order, a, b)


def _apply_D(terms: dict[_TermKey, Fraction], block: range, slot: int) -> dict[_TermKey, Fraction]:
    """One application of D_(block): (1/2) <grad ., w_block> / u_block.

    ``slot`` is 2 for the u_+ exponent, 3 for the u_- exponent.
    """
    out: dict[_TermKey, Fraction] = {}

    def add(key: _TermKey, val: Fraction) -> None:
        acc = out.get(key, Fraction(0)) + val
        if acc:
            out[key] = acc
        else:
            out.pop(key, None)

    for (alpha, m, a, b), c in terms.items():
        inv_pow = (a, b)[slot - 2]
        block_deg = sum(alpha[i] for i in block)
        new_ab = (a + 1, b) if slot == 2 else (a, b + 1)
        lead = c * (Fraction(block_deg, 2) - inv_pow)
        if lead:
            add((alpha, m, *new_ab), lead)
        for i in block:
            bumped = list(alpha)
            bumped[i] += 2
            add((tuple(bumped), m + 1, *new_ab), c)
    return out


def _alternating_terms(f: AmplitudeSpec, l: int) -> dict[_TermKey, Fraction]:
    """Symbolic (D_- - D_+)^l f, keeping only all-even monomials of f.

    Odd-parity monomials average to zero on the spheres at every stage
    (the operators preserve per-coordinate parity), so they are dropped up
    front.
    """
    d = f.dim
    plus_block = range(0, f.dim_plus)
    minus_block = range(f.dim_plus, d)
    terms: dict[_TermKey, Fraction] = {}
    for alpha, c in f.poly.coeffs.items():
        if all(e % 2 == 0 for e in alpha):
            terms[(alpha, 0, 0, 0)] = Fraction(c)
    for _ in range(l):
        minus_applied = _apply_D(terms, minus_block, 3)
        plus_applied = _apply_D(terms, plus_block, 2)
        for key, val in plus_applied.items():
            acc = minus_applied.get(key, Fraction(0)) - val
            if acc:
                minus_applied[key] = acc
            else:
                minus_applied.pop(key, None)
        terms = minus_applied
    return terms


class _SliceIntegrator:
    """Evaluator of the double sphere average of (D_- - D_+)^l f."""

    def __init__(self, model: LocalModel, f: AmplitudeSpec, l: int):
        if 2 * len(model.mu) != f.dim_plus or 2 * len(model.nu) != f.dim_minus:
            raise ValueError("model blocks must match the amplitude blocks")
        self.bump = f.bump
        self.l = l
        degree = f.poly.total_degree() + 2 * l + 6
        nodes_p, wp = sphere_quadrature(f.dim_plus, degree)
        nodes_m, wm = sphere_quadrature(f.dim_minus, degree)
        scale_p = np.sqrt(np.array(model.abs_weight_per_coordinate[: f.dim_plus], dtype=float))
        scale_m = np.sqrt(np.array(model.abs_weight_per_coordinate[f.dim_plus:], dtype=float))
        self._Np = nodes_p / scale_p
        self._Nm = nodes_m / scale_m
        self._wp = wp.astype(np.longdouble)
        self._wm = wm.astype(np.longdouble)
        self._An = np.sum(self._Np * self._Np, axis=1).astype(np.longdouble)
        self._Bn = np.sum(self._Nm * self._Nm, axis=1).astype(np.longdouble)
        self._An_min, self._An_max = float(self._An.min()), float(self._An.max())
        self._Bn_min, self._Bn_max = float(self._Bn.min()), float(self._Bn.max())

        terms = _alternating_terms(f, l)
        self._max_bump_order = max((m for (_, m, _, _) in terms), default=0)
        self._rows = []
        for (alpha, m, a, b), c in terms.items():
            ap, am = alpha[: f.dim_plus], alpha[f.dim_plus:]
            vec_p = (self._wp * np.prod(self._Np ** np.array(ap, dtype=np.int64), axis=1)
                     ).astype(np.longdouble)
            vec_m = (self._wm * np.prod(self._Nm ** np.array(am, dtype=np.int64), axis=1)
                     ).astype(np.longdouble)
            t_pow = sum(ap) // 2 - a
            u_pow = sum(am) // 2 - b
            self._rows.append((float(c), t_pow, u_pow, m, vec_p, vec_m))
        self._plateau_poly = self._build_plateau_poly(model, f, terms)

    def _build_plateau_poly(self, model: LocalModel, f: AmplitudeSpec,
                            terms: dict[_TermKey, Fraction]) -> dict[tuple[int, int], float]:
        """Exact sphere average where the bump is identically 1.

        Only bump-order-zero terms survive; the inverse powers of u_pm
        cancel identically against the monomial moments, which is asserted.
        """
        weights = model.abs_weight_per_coordinate
        acc: dict[tuple[int, int], ExactScalar] = {}
        for (alpha, m, a, b), c in terms.items():
            if m != 0:
                continue
            ap, am = alpha[: f.dim_plus], alpha[f.dim_plus:]
            scale = Fraction(1)
            for i, e in enumerate(alpha):
                scale *= Fraction(1, weights[i] ** (e // 2))
            val = (sphere_monomial_moment_exact(ap, f.dim_plus)
                   * sphere_monomial_moment_exact(am, f.dim_minus)
                   * (c * scale))
            if val.is_zero():
                continue
            key = (sum(ap) // 2 - a, sum(am) // 2 - b)
            total = acc.get(key, ExactScalar()) + val
            if total.is_zero():
                acc.pop(key, None)
            else:
                acc[key] = total
        assert all(pt >= 0 and pu >= 0 for (pt, pu) in acc), \
            "inverse powers of u_pm must cancel in the plateau average"
        return {key: val.to_complex().real for key, val in acc.items()}

    def plateau_radius_sq(self, offset: float, mirrored: bool) -> float:
        """Largest x^2 with every quadrature point still on the plateau."""
        if mirrored:
            num = self.bump.x0 - offset * self._Bn_max
        else:
            num = self.bump.x0 - offset * self._An_max
        return num / (self._An_max + self._Bn_max)

    def support_radius_sq(self, offset: float, mirrored: bool) -> float:
        """Smallest x^2 beyond which every quadrature point left the support."""
        if mirrored:
            num = self.bump.x1 - offset * self._Bn_min
        else:
            num = self.bump.x1 - offset * self._An_min
        denom = self._An_min + self._Bn_min
        return max(num, 0.0) / denom

    def plateau_average(self, t: float, u: float) -> float:
        total = 0.0
        for (pt, pu), coeff in self._plateau_poly.items():
            total += coeff * t**pt * u**pu
        return total

    def node_average(self, t: float, u: float) -> float:
        radius_sq = (t * self._An[:, None] + u * self._Bn[None, :]).astype(np.longdouble)
        betas = self.bump.derivatives_upto(
            np.asarray(radius_sq, dtype=float), self._max_bump_order, np.longdouble)
        total = np.longdouble(0.0)
        for coeff, t_pow, u_pow, m, vec_p, vec_m in self._rows:
            total += (coeff * t ** float(t_pow) * u ** float(u_pow)
                      * (vec_p @ betas[m] @ vec_m))
        return float(total)


def W_Dpm_integral(slc: QuadricSlice, f: AmplitudeSpec, k: int, l: int) -> float:
    """int over the slit quadric of ``W_k (D_- - D_+)^l f`` d(Sigma).

    Computed entirely in w-space via the polar form of the integrand: the
    measure factor and the weight function combine to ``4 x (t + u)^k`` times
    the plain double sphere average of the derivative terms, with
    t = x^2 + 2 zeta, u = x^2 on the slice (zeta >= 0; mirrored otherwise).
    """
    if k < 0 or l < 0:
        raise ValueError("k and l must be nonnegative")
    model, zeta = slc.model, slc.zeta
    integrator = _SliceIntegrator(model, f, l)
    mirrored = zeta < 0
    offset = 2.0 * abs(zeta)

    def t_u(x_sq: float) -> tuple[float, float]:
        if mirrored:
            return x_sq, x_sq + offset
        return x_sq + offset, x_sq

    x_support_sq = integrator.support_radius_sq(offset, mirrored)
    if x_support_sq <= 0.0:
        return 0.0
    x_plateau_sq = min(max(integrator.plateau_radius_sq(offset, mirrored), 0.0),
                       x_support_sq)

    def integrand_plateau(x: float) -> float:
        t, u = t_u(x * x)
        return 4.0 * x * (t + u) ** k * integrator.plateau_average(t, u)

    def integrand_nodes(x: float) -> float:
        t, u = t_u(x * x)
        return 4.0 * x * (t + u) ** k * integrator.node_average(t, u)

    total = 0.0
    x_p = math.sqrt(x_plateau_sq)
    if x_p > 0.0:
        val, _ = quad(integrand_plateau, 0.0, x_p, **_QUAD_KW)
        total += val
    x_s = math.sqrt(x_support_sq)
    if x_s > x_p:
        val, _ = quad(integrand_nodes, x_p, x_s, **_QUAD_KW)
        total += val
    return total
