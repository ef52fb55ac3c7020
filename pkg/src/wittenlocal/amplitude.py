"""Amplitudes on the model space and their spherical means.

An amplitude is ``f(w) = p(w) * beta(||w||^2)`` with ``p`` a rational
polynomial and ``beta`` a radial plateau bump, so ``f`` agrees with ``p``
exactly on the ball ``||w|| <= r0``.

The double spherical mean

    S_f(r, s) = int_{S^{n+-1}} int_{S^{n--1}} f(r theta+, s theta-) dtheta+ dtheta-

is an even function of each variable and therefore a smooth function
``scriptS(t, u)`` of the squared arguments ``t = r^2, u = s^2``.  The engine
needs scriptS and its (t, u)-partials everywhere, including boundary and
(extension-region) negative arguments.  Both come from an exact reduction:
writing each sphere in pair-modulus/phase coordinates, the torus phases
integrate in closed form, leaving for every surviving monomial a term

    const * t^T u^U * x^e y^g * beta^{(m)}(t <x, 1/mu> + u <y, 1/nu>)

per node (x, y) of a Gauss rule on the simplex of squared pair moduli.  All
(t, u)-derivatives follow by Leibniz with integer falling factorials; the
formula is globally smooth in (t, u) and provides the canonical smooth
extension of scriptS beyond the closed quadrant.  Inside the bump plateau the
same reduction collapses to an exact polynomial with coefficients that are
rational multiples of pi powers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from .bump import PlateauBump
from .exactscalar import ExactScalar
from .model import LocalModel
from .polynomials import RatPoly
from .spheres import (
    pair_phase_moment,
    simplex_rule,
    sphere_monomial_moment_exact,
    sphere_quadrature,
    sphere_volume_exact,
)


@dataclass(frozen=True)
class AmplitudeSpec:
    """Polynomial times radial plateau bump on R^{dim_plus + dim_minus}.

    Coordinates 0..dim_plus-1 belong to the positive block, the rest to the
    negative block; coordinate pairs (2k, 2k+1) share a weight.
    """

    dim_plus: int
    dim_minus: int
    poly: RatPoly
    r0: float = 2.0
    r1: float = 3.0

    def __post_init__(self):
        if self.dim_plus % 2 or self.dim_minus % 2 or self.dim_plus < 0 or self.dim_minus < 0:
            raise ValueError("block dimensions must be even and nonnegative")
        if self.dim & 1 or self.dim == 0:
            raise ValueError("total dimension must be positive and even")
        if self.poly.nvars != self.dim:
            raise ValueError("polynomial variable count must equal the total dimension")
        if not (0 < self.r0 < self.r1):
            raise ValueError("bump radii must satisfy 0 < r0 < r1")

    @property
    def dim(self) -> int:
        return self.dim_plus + self.dim_minus

    @property
    def bump(self) -> PlateauBump:
        return PlateauBump(self.r0, self.r1)

    def eval_points(self, points: np.ndarray) -> np.ndarray:
        """f at an array of points with shape (..., dim)."""
        points = np.asarray(points, dtype=float)
        radius_sq = np.sum(points * points, axis=-1)
        return self.poly.eval_float(points) * self.bump.value(radius_sq)

    @classmethod
    def constant_one(cls, dim_plus: int, dim_minus: int, r0: float = 2.0, r1: float = 3.0) -> "AmplitudeSpec":
        poly = RatPoly.constant(dim_plus + dim_minus, 1)
        return cls(dim_plus, dim_minus, poly, r0, r1)


def _pair_exponents(expo: tuple, offset: int, npairs: int) -> list[tuple[int, int]]:
    return [(expo[offset + 2 * k], expo[offset + 2 * k + 1]) for k in range(npairs)]


def _monomial_block_reduction(pairs: list[tuple[int, int]], weights: tuple[int, ...]):
    """Exact phase reduction of one block of a monomial.

    Returns ``None`` when the torus average vanishes (odd exponent), else
    ``(half_degree, scalar, pair_half_exponents)`` where ``scalar`` collects
    the phase moments and the 1/sqrt(weight) rescaling (a Fraction since all
    exponents are even).
    """
    scalar = Fraction(1)
    half_expos = []
    half_degree = 0
    for (a, b), wgt in zip(pairs, weights):
        if a % 2 or b % 2:
            return None
        mom = pair_phase_moment(a, b)
        if mom == 0:
            return None
        e = (a + b) // 2
        scalar *= mom * Fraction(1, wgt**e)
        half_expos.append(e)
        half_degree += e
    return half_degree, scalar, tuple(half_expos)


class SphericalMean:
    """scriptS for ``f composed with the weight rescaling T`` (T divides each
    coordinate pair by sqrt(weight); identity weights give the plain mean).

    ``kind`` is "indefinite" (two blocks, function of (t, u)) or "definite"
    (one block, function of t).
    """

    def __init__(self, amplitude: AmplitudeSpec, mu: tuple[int, ...], nu: tuple[int, ...],
                 simplex_order: int = 48):
        if 2 * len(mu) != amplitude.dim_plus or 2 * len(nu) != amplitude.dim_minus:
            raise ValueError("weight count must match block dimensions")
        self.amplitude = amplitude
        self.mu = mu
        self.nu = nu
        self.kind = "indefinite" if (amplitude.dim_plus > 0 and amplitude.dim_minus > 0) else "definite"
        self._bump = amplitude.bump
        self._build_reduction(simplex_order)
        self._build_exact_polynomial()

    # -- construction --------------------------------------------------------

    def _build_reduction(self, simplex_order: int) -> None:
        amp = self.amplitude
        groups: list[tuple[int, int, np.ndarray, np.ndarray]] = []
        if self.kind == "indefinite":
            p_pairs, q_pairs = len(self.mu), len(self.nu)
            xn, wx = simplex_rule(p_pairs, simplex_order)
            yn, wy = simplex_rule(q_pairs, simplex_order)
            self._A = xn @ (1.0 / np.array(self.mu, dtype=float))
            self._B = yn @ (1.0 / np.array(self.nu, dtype=float))
            self._const = 4.0 * math.pi ** (p_pairs + q_pairs)
            for expo, coeff in amp.poly.coeffs.items():
                plus = _monomial_block_reduction(_pair_exponents(expo, 0, p_pairs), self.mu)
                if plus is None:
                    continue
                minus = _monomial_block_reduction(
                    _pair_exponents(expo, amp.dim_plus, q_pairs), self.nu)
                if minus is None:
                    continue
                tpow, sx, ex = plus
                upow, sy, ey = minus
                scalar = float(coeff * sx * sy)
                vx = wx * np.prod(xn ** np.array(ex, dtype=float), axis=1)
                vy = wy * np.prod(yn ** np.array(ey, dtype=float), axis=1)
                groups.append((tpow, upow, scalar * vx, vy))
        else:
            pairs = self.mu if amp.dim_minus == 0 else self.nu
            xn, wx = simplex_rule(len(pairs), simplex_order)
            self._A = xn @ (1.0 / np.array(pairs, dtype=float))
            self._B = np.zeros(1)
            self._const = 2.0 * math.pi ** len(pairs)
            for expo, coeff in amp.poly.coeffs.items():
                block = _monomial_block_reduction(
                    _pair_exponents(expo, 0, len(pairs)), pairs)
                if block is None:
                    continue
                tpow, sx, ex = block
                scalar = float(coeff * sx)
                vx = wx * np.prod(xn ** np.array(ex, dtype=float), axis=1)
                groups.append((tpow, 0, scalar * vx, np.array([1.0])))
        self._groups = groups
        self._A_min, self._A_max = float(self._A.min()), float(self._A.max())
        self._B_min, self._B_max = (float(self._B.min()), float(self._B.max())) if self.kind == "indefinite" else (0.0, 0.0)

    def _build_exact_polynomial(self) -> None:
        amp = self.amplitude
        exact: dict[tuple[int, int], ExactScalar] = {}
        for expo, coeff in amp.poly.coeffs.items():
            if any(e % 2 for e in expo):
                continue
            plus_expo = expo[: amp.dim_plus]
            minus_expo = expo[amp.dim_plus:]
            scale = Fraction(1)
            for k, wgt in enumerate(self.mu):
                scale *= Fraction(1, wgt ** ((expo[2 * k] + expo[2 * k + 1]) // 2))
            for k, wgt in enumerate(self.nu):
                base = amp.dim_plus
                scale *= Fraction(1, wgt ** ((expo[base + 2 * k] + expo[base + 2 * k + 1]) // 2))
            if amp.dim_plus:
                m_plus = sphere_monomial_moment_exact(plus_expo, amp.dim_plus)
            else:
                m_plus = ExactScalar.from_rational(1)
            if amp.dim_minus:
                m_minus = sphere_monomial_moment_exact(minus_expo, amp.dim_minus)
            else:
                m_minus = ExactScalar.from_rational(1)
            term = (coeff * scale) * m_plus * m_minus
            if term.is_zero():
                continue
            if self.kind == "definite":
                key = (sum(expo) // 2, 0)
            else:
                key = (sum(plus_expo) // 2, sum(minus_expo) // 2)
            acc = exact.get(key, ExactScalar()) + term
            if acc.is_zero():
                exact.pop(key, None)
            else:
                exact[key] = acc
        self._exact_poly = exact
        self._float_poly = {key: val.to_complex().real for key, val in exact.items()}

    # -- regions ---------------------------------------------------------------

    def plateau_contains(self, t: float, u: float = 0.0) -> bool:
        """True when every reduced node argument stays on the bump plateau."""
        return abs(t) * self._A_max + abs(u) * self._B_max <= self._bump.x0

    def vanishes_at(self, t: float, u: float = 0.0) -> bool:
        return t >= 0.0 and u >= 0.0 and t * self._A_min + u * self._B_min >= self._bump.x1

    def t_integral_upper(self, zeta_t: float = 0.0) -> float:
        """Upper limit beyond which scriptS((t+zeta_t)/2, (t-zeta_t)/2) = 0."""
        if self.kind == "definite":
            return self._bump.x1 / self._A_min + abs(zeta_t)
        lo = 0.5 * (self._A_min + self._B_min)
        spread = 0.5 * max(abs(self._A_max - self._B_min), abs(self._B_max - self._A_min))
        return (self._bump.x1 + abs(zeta_t) * spread) / lo

    # -- evaluation --------------------------------------------------------------

    def eval(self, t: float, u: float = 0.0) -> float:
        return self.deriv(t, u, 0, 0)

    def deriv(self, t: float, u: float = 0.0, dplus: int = 0, dminus: int = 0) -> float:
        """(d/dt)^dplus (d/du)^dminus scriptS(t, u).

        Defined for all real (t, u) through the canonical smooth extension;
        for the definite kind ``u`` and ``dminus`` must stay 0.
        """
        if self.kind == "definite" and (u != 0.0 or dminus != 0):
            raise ValueError("definite means are functions of t alone")
        if self.vanishes_at(t, u):
            return 0.0
        if self.plateau_contains(t, u):
            return self._poly_deriv(t, u, dplus, dminus)
        return self._node_deriv(t, u, dplus, dminus)

    def deriv_batch(self, t: np.ndarray, u: np.ndarray | None = None,
                    dplus: int = 0, dminus: int = 0) -> np.ndarray:
        """Vectorized ``deriv`` over matched point arrays of equal shape."""
        return self.deriv_multi_batch(t, u, [(1.0, dplus, dminus)])

    def deriv_multi_batch(self, t: np.ndarray, u: np.ndarray | None,
                          terms: list[tuple[float, int, int]]) -> np.ndarray:
        """sum of coef * (d/dt)^a (d/du)^b scriptS over ``(coef, a, b)`` terms.

        All terms share one bump-derivative evaluation per point, which is
        what makes the alternating sums in the kernel integrands cheap.
        """
        t = np.asarray(t, dtype=float)
        u = np.zeros_like(t) if u is None else np.asarray(u, dtype=float)
        if self.kind == "definite" and (u.any() or any(b for _, _, b in terms)):
            raise ValueError("definite means are functions of t alone")
        out = np.zeros_like(t)
        vanish = (t >= 0.0) & (u >= 0.0) & (t * self._A_min + u * self._B_min >= self._bump.x1)
        plateau = ~vanish & (np.abs(t) * self._A_max + np.abs(u) * self._B_max <= self._bump.x0)
        band = ~(vanish | plateau)
        if plateau.any():
            tp, up = t[plateau], u[plateau]
            acc = np.zeros_like(tp)
            for coef, a, b in terms:
                acc += coef * self._poly_deriv_batch(tp, up, a, b)
            out[plateau] = acc
        if band.any():
            out[band] = self._node_multi_batch(t[band], u[band], terms)
        return out

    def _poly_deriv(self, t: float, u: float, a: int, b: int) -> float:
        total = 0.0
        for (tp, up), coeff in self._float_poly.items():
            if tp < a or up < b:
                continue
            term = coeff * _falling(tp, a) * _falling(up, b)
            term *= t ** (tp - a) * u ** (up - b)
            total += term
        return total

    def _poly_deriv_batch(self, t: np.ndarray, u: np.ndarray, a: int, b: int) -> np.ndarray:
        total = np.zeros_like(t)
        for (tp, up), coeff in self._float_poly.items():
            if tp < a or up < b:
                continue
            scale = coeff * _falling(tp, a) * _falling(up, b)
            total += scale * t ** (tp - a) * u ** (up - b)
        return total

    def _node_multi_batch(self, t: np.ndarray, u: np.ndarray,
                          terms: list[tuple[float, int, int]]) -> np.ndarray:
        args = t[:, None, None] * self._A[None, :, None] + u[:, None, None] * self._B[None, None, :]
        kmax = max(a + b for _, a, b in terms)
        betas = self._bump.derivatives_upto(args, kmax)
        total = np.zeros_like(t)
        for coef, a, b in terms:
            for tp, up, vx, vy in self._groups:
                for i in range(a + 1):
                    if a - i > tp:
                        continue
                    ti = coef * _falling(tp, a - i) * t ** (tp - (a - i)) * math.comb(a, i)
                    for j in range(b + 1):
                        if b - j > up:
                            continue
                        uj = _falling(up, b - j) * u ** (up - (b - j)) * math.comb(b, j)
                        left = vx * self._A**i if i else vx
                        right = vy * self._B**j if j else vy
                        total += ti * uj * np.einsum("nij,i,j->n", betas[i + j], left, right)
        return self._const * total

    def _node_deriv(self, t: float, u: float, a: int, b: int) -> float:
        args = t * self._A[:, None] + u * self._B[None, :]
        betas = self._bump.derivatives_upto(args, a + b)
        total = 0.0
        for tp, up, vx, vy in self._groups:
            acc = 0.0
            for i in range(a + 1):
                if a - i > tp:
                    continue
                ti = _falling(tp, a - i) * t ** (tp - (a - i)) * math.comb(a, i)
                for j in range(b + 1):
                    if b - j > up:
                        continue
                    uj = _falling(up, b - j) * u ** (up - (b - j)) * math.comb(b, j)
                    mat = betas[i + j]
                    left = vx * self._A**i if i else vx
                    right = vy * self._B**j if j else vy
                    acc += ti * uj * float(left @ mat @ right)
            total += acc
        return self._const * total

    # -- exact origin data ---------------------------------------------------

    def exact_origin_deriv(self, dplus: int = 0, dminus: int = 0) -> ExactScalar:
        """Exact (d/dt)^dplus (d/du)^dminus scriptS(0, 0) as a pi-rational."""
        coeff = self._exact_poly.get((dplus, dminus))
        if coeff is None:
            return ExactScalar()
        return coeff * (math.factorial(dplus) * math.factorial(dminus))

    def exact_plateau_polynomial(self) -> dict[tuple[int, int], ExactScalar]:
        return dict(self._exact_poly)


def _falling(n: int, k: int) -> int:
    """n (n-1) ... (n-k+1); zero when k > n."""
    if k > n:
        return 0
    out = 1
    for i in range(k):
        out *= n - i
    return out


def make_scaled_mean(amplitude: AmplitudeSpec, model: LocalModel, simplex_order: int = 48) -> SphericalMean:
    """scriptS of ``f`` after the model's weight rescaling."""
    if 2 * len(model.mu) != amplitude.dim_plus or 2 * len(model.nu) != amplitude.dim_minus:
        raise ValueError("model blocks must match the amplitude blocks")
    return SphericalMean(amplitude, model.mu, model.nu, simplex_order)


def make_unscaled_mean(amplitude: AmplitudeSpec, simplex_order: int = 48) -> SphericalMean:
    """scriptS of ``f`` itself (identity weights)."""
    mu = (1,) * (amplitude.dim_plus // 2)
    nu = (1,) * (amplitude.dim_minus // 2)
    return SphericalMean(amplitude, mu, nu, simplex_order)


def spherical_mean(amplitude: AmplitudeSpec, r: float, s: float = 0.0) -> float:
    """S_f(r, s), the unscaled double spherical mean.

    Inside the plateau (r^2 + s^2 <= r0^2) the value is the exact moment
    polynomial; outside, a tensor-product sphere quadrature of f.  Negative
    radii are a domain error (callers rely on evenness instead).
    """
    if r < 0 or s < 0:
        raise ValueError("radii must be nonnegative")
    mean = make_unscaled_mean(amplitude)
    if mean.kind == "definite":
        if s != 0.0:
            raise ValueError("definite amplitudes take a single radius")
        t = r * r
        if mean.plateau_contains(t) or mean.vanishes_at(t):
            return mean.eval(t)
        nodes, w = sphere_quadrature(amplitude.dim, amplitude.poly.total_degree() + 24)
        return float(np.sum(w * amplitude.eval_points(r * nodes)))
    t, u = r * r, s * s
    if mean.plateau_contains(t, u) or mean.vanishes_at(t, u):
        return mean.eval(t, u)
    degree = amplitude.poly.total_degree() + 24
    nodes_p, w_p = sphere_quadrature(amplitude.dim_plus, degree)
    nodes_m, w_m = sphere_quadrature(amplitude.dim_minus, degree)
    pts = np.concatenate(
        [
            np.repeat(r * nodes_p, len(nodes_m), axis=0),
            np.tile(s * nodes_m, (len(nodes_p), 1)),
        ],
        axis=1,
    )
    vals = amplitude.eval_points(pts)
    return float(np.sum((w_p[:, None] * w_m[None, :]).ravel() * vals))


def script_S_eval(mean: SphericalMean, t: float, u: float = 0.0,
                  d_minus_pow: int = 0, d_plus_pow: int = 0) -> float:
    """(d_-)^{d_minus_pow} (d_+)^{d_plus_pow} scriptS(t, u) for t, u >= 0."""
    if t < 0 or u < 0:
        raise ValueError("squared arguments must be nonnegative")
    return mean.deriv(t, u, d_plus_pow, d_minus_pow)


def alternating_derivative(mean: SphericalMean, t: float, u: float, n: int,
                           dplus: int = 0, dminus: int = 0) -> float:
    """(d_- - d_+)^n d_+^dplus d_-^dminus scriptS(t, u) (smooth extension)."""
    total = 0.0
    for a in range(n + 1):
        total += ((-1) ** a * math.comb(n, a)
                  * mean.deriv(t, u, a + dplus, n - a + dminus))
    return total


def alternating_derivative_batch(mean: SphericalMean, t: np.ndarray, u: np.ndarray,
                                 n: int, dplus: int = 0, dminus: int = 0) -> np.ndarray:
    """Vectorized ``alternating_derivative`` over matched point arrays."""
    terms = [(float((-1) ** a * math.comb(n, a)), a + dplus, n - a + dminus)
             for a in range(n + 1)]
    return mean.deriv_multi_batch(t, u, terms)


def alternating_origin_deriv(mean: SphericalMean, n: int,
                             dplus: int = 0, dminus: int = 0) -> ExactScalar:
    """Exact (d_- - d_+)^n d_+^dplus d_-^dminus scriptS(0, 0)."""
    total = ExactScalar()
    for a in range(n + 1):
        term = mean.exact_origin_deriv(a + dplus, n - a + dminus)
        total = total + term * ((-1) ** a * math.comb(n, a))
    return total


def _hessian_weights(model: Optional[LocalModel], dim: int, offset: int, block_dim: int) -> dict[int, Fraction]:
    """1/|weight| per coordinate of one block (identity weights when no model)."""
    weights: dict[int, Fraction] = {}
    for i in range(block_dim):
        coord = offset + i
        if model is None:
            weights[coord] = Fraction(1)
        else:
            weights[coord] = Fraction(1, model.abs_weight_per_coordinate[coord])
    return weights


def _radial_moment_denominator(n: int, k: int) -> int:
    """2^k n (n+2) ... (n+2k-2), the k-th Laplacian power of |x|^{2k} at 0
    divided by k!; the sphere average of a degree-2k polynomial P is
    Delta^k P(0) / (2^k k! n (n+2) ... (n+2k-2)) times vol(S^{n-1})."""
    out = 2 ** k
    for i in range(k):
        out *= n + 2 * i
    return out


def script_S_derivatives_at_origin(amplitude: AmplitudeSpec, k: int, sign: int,
                                   model: Optional[LocalModel] = None) -> ExactScalar:
    """Exact ``(d_±)^k scriptS(0, 0)`` of the (rescaled) mean via the origin
    Hessian-power identity

        (d_±)^k scriptS(0,0) = vol(S^{n+-1}) vol(S^{n--1}) (Delta_±)^k p(0)
                               / (2^k n_± (n_± + 2) ... (n_± + 2k - 2)),

    where ``Delta_± = sum over the ± block of |weight|^{-1} d^2/dw_i^2``.
    For k = 1 the denominator is ``2 n_±`` (the trace formula for sphere
    averages of quadratic forms); higher powers pick up the rising product
    because only the fully radial part of the degree-2k Taylor term survives
    the spherical average.
    """
    if amplitude.dim_plus == 0 or amplitude.dim_minus == 0:
        raise ValueError("origin quadrant derivatives require an indefinite amplitude")
    if sign not in (+1, -1):
        raise ValueError("sign must be +1 or -1")
    n_pm = amplitude.dim_plus if sign > 0 else amplitude.dim_minus
    offset = 0 if sign > 0 else amplitude.dim_plus
    weights = _hessian_weights(model, amplitude.dim, offset, n_pm)
    poly = amplitude.poly
    for _ in range(k):
        poly = poly.weighted_second_derivative(weights)
    value_at_zero = poly.coeffs.get((0,) * amplitude.dim, Fraction(0))
    scale = Fraction(1, _radial_moment_denominator(n_pm, k)) * value_at_zero
    return (sphere_volume_exact(amplitude.dim_plus)
            * sphere_volume_exact(amplitude.dim_minus) * scale)


def script_S_definite_derivatives(amplitude: AmplitudeSpec, k: int,
                                  model: Optional[LocalModel] = None) -> ExactScalar:
    """Exact ``scriptS^{(k)}(0)`` of a definite (rescaled) mean:

        scriptS^{(k)}(0) = vol(S^{d-1}) (Delta)^k p(0)
                           / (2^k d (d+2) ... (d + 2k - 2)),

    with ``Delta = sum over all coordinates of |weight|^{-1} d^2/dw_i^2``.
    """
    if amplitude.dim_plus and amplitude.dim_minus:
        raise ValueError("definite derivative formula requires a definite amplitude")
    d = amplitude.dim
    weights = _hessian_weights(model, d, 0, d)
    poly = amplitude.poly
    for _ in range(k):
        poly = poly.weighted_second_derivative(weights)
    value_at_zero = poly.coeffs.get((0,) * d, Fraction(0))
    return sphere_volume_exact(d) * (
        Fraction(1, _radial_moment_denominator(d, k)) * value_at_zero)
