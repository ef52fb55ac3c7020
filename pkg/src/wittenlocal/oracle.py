"""Ground-truth evaluation of the localized oscillatory integrals.

The x-integral over the Lie-algebra line is always eliminated in closed form
through the transform of the test function, so nothing oscillatory is ever
integrated numerically: the model integral collapses to

    reduced-2d   1/Lambda * int int r^{n+-1} s^{n--1} S(r^2, s^2)
                     sigma_hat((zeta_t + s^2 - r^2) / eps_t) dr ds

for indefinite models (one radial variable per definiteness block; the
definite analogue has a single radial integral), with zeta_t = 2 zeta_F and
eps_t = 2 epsilon.  The inner variable is then substituted so that the
transform factor is sampled on its own O(1) scale, which keeps the quadrature
cost independent of epsilon.

A second, genuinely independent route (``split-1d``) evaluates the same
integral through the exact one-variable representation obtained by
integrating the quadric fibers first: half-line kernels F^pm for indefinite
models, and the binomially expanded shifted representation for definite ones.
Agreement of the two routes is a primary verification target.

Coefficient extraction fits I(eps) ~ sum_j eps^{j+1} A_j on a geometric grid
by scaled least squares, and remainder slopes are measured against the
partial sums of the closed-form expansion.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.integrate import quad

from .amplitude import AmplitudeSpec, SphericalMean, make_scaled_mean
from .coeffs import c_l as coeff_c_l
from .expansion import ExpansionResult, expand
from .kernels import FKernel, F_eval
from .model import LocalModel
from .schwartz import SchwartzSpec

__all__ = [
    "OracleConfig",
    "default_oracle_config",
    "eval_integral",
    "eval_integral_indefinite",
    "eval_integral_definite",
    "eval_grid",
    "extract_coefficients",
    "FitDiagnostics",
    "IllConditionedFitError",
    "SlopeFit",
    "remainder_slope",
]

_METHODS = ("reduced-2d", "split-1d")

_DEFAULT_GRID = tuple(2.0**-k for k in range(3, 13))


@dataclass(frozen=True)
class OracleConfig:
    """Grid and quadrature budget for ground-truth runs.

    Attributes:
        epsilon_grid: decreasing geometric grid of epsilon values.
        quadrature_tol: absolute tolerance passed to the adaptive quadrature.
        truncation_radius: radius beyond which the amplitude support is gone
            (in each radial variable of the reduced integral).
        method: "reduced-2d" or "split-1d".
    """

    epsilon_grid: tuple[float, ...] = _DEFAULT_GRID
    quadrature_tol: float = 1e-11
    truncation_radius: float = 4.0
    method: str = "reduced-2d"

    def __post_init__(self):
        grid = tuple(float(e) for e in self.epsilon_grid)
        if len(grid) < 2:
            raise ValueError("epsilon grid needs at least two points")
        if any(e <= 0 for e in grid):
            raise ValueError("epsilon values must be positive")
        ratios = [b / a for a, b in zip(grid, grid[1:])]
        if any(not 0.0 < r < 1.0 for r in ratios):
            raise ValueError("epsilon grid must decrease geometrically")
        if any(abs(r - ratios[0]) > 1e-9 * ratios[0] for r in ratios):
            raise ValueError("epsilon grid must be geometric (constant ratio)")
        if self.quadrature_tol <= 0 or self.truncation_radius <= 0:
            raise ValueError("tolerances and radii must be positive")
        if self.method not in _METHODS:
            raise ValueError(f"method must be one of {_METHODS}")
        object.__setattr__(self, "epsilon_grid", grid)


def default_oracle_config(f: AmplitudeSpec, method: str = "reduced-2d",
                          quadrature_tol: float = 1e-11) -> OracleConfig:
    """Config with the truncation radius read off the amplitude support."""
    return OracleConfig(truncation_radius=float(f.r1) * math.sqrt(f.dim) + 1.0,
                        quadrature_tol=quadrature_tol, method=method)


# ---------------------------------------------------------------------------
# reduced (non-oscillatory) evaluation
# ---------------------------------------------------------------------------

def _band_quad(outer: Callable[[float], float], lo: float, hi: float,
               tol: float) -> float:
    val, _ = quad(outer, lo, hi, epsabs=tol, epsrel=tol * 10, limit=400)
    return val


def eval_integral_indefinite(model: LocalModel, f: AmplitudeSpec,
                             sigma: SchwartzSpec, zeta_F: float,
                             epsilon: float, *,
                             quadrature_tol: float = 1e-11) -> complex:
    """The normalized local integral for an indefinite model.

    After eliminating x through the transform, substitutes
    y = (r^2 - s^2 - zeta_t)/eps_t in the inner radial variable so the
    transform factor is resolved on an epsilon-independent scale.
    """
    if model.is_definite:
        raise ValueError("model must be indefinite")
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    mean = make_scaled_mean(f, model)
    zeta_t, eps_t = 2.0 * zeta_F, 2.0 * epsilon
    n_plus, n_minus = model.n_plus, model.n_minus
    radius = sigma.hat_truncation_radius(1e-18)
    # bound for s^2: amplitude support plus the width of the transform band
    u_max = mean.t_integral_upper(abs(zeta_t)) + abs(zeta_t) + eps_t * radius

    def outer(s: float) -> float:
        u = s * s
        # inner variable y = (t - u - zeta_t)/eps_t, t = r^2
        y_lo = max(-radius, -(u + zeta_t) / eps_t)
        if y_lo >= radius:
            return 0.0

        def inner(y: float) -> float:
            t = u + zeta_t + eps_t * y
            if t < 0.0:
                return 0.0
            return (t ** ((n_plus - 2) // 2)
                    * mean.eval(t, u) * float(sigma.hat(-y)))

        val, _ = quad(inner, y_lo, radius,
                      epsabs=quadrature_tol, epsrel=quadrature_tol * 10,
                      limit=200)
        return 0.5 * eps_t * s ** (n_minus - 1) * val

    s_hi = math.sqrt(u_max)
    total = _band_quad(outer, 0.0, s_hi, quadrature_tol)
    return complex(total / model.Lambda)


def eval_integral_definite(model: LocalModel, f: AmplitudeSpec,
                           sigma: SchwartzSpec, zeta_F: float,
                           epsilon: float, *,
                           quadrature_tol: float = 1e-11) -> complex:
    """The normalized local integral for a definite model (single radius).

    Integrates directly in the radial variable; the transform factor lives in
    a band |s_F r^2 - zeta_t| <= eps_t * radius whose endpoints are passed to
    the quadrature as breakpoints so it is never stepped over.
    """
    if not model.is_definite:
        raise ValueError("model must be definite")
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    mean = make_scaled_mean(f, model)
    zeta_t, eps_t = 2.0 * zeta_F, 2.0 * epsilon
    s_F = model.sign
    L = model.dim // 2
    radius = sigma.hat_truncation_radius(1e-18)
    r_hi = math.sqrt(mean.t_integral_upper(0.0))

    def integrand(r: float) -> float:
        v = r * r
        return r ** (2 * L - 1) * mean.eval(v) * float(
            sigma.hat((zeta_t - s_F * v) / eps_t))

    band = [s_F * (zeta_t - eps_t * radius), s_F * zeta_t,
            s_F * (zeta_t + eps_t * radius)]
    breakpoints = sorted(math.sqrt(v) for v in band if 0.0 < v < r_hi**2)
    val, _ = quad(integrand, 0.0, r_hi, points=breakpoints or None,
                  epsabs=quadrature_tol, epsrel=quadrature_tol * 10, limit=400)
    return complex(val / model.Lambda)


# ---------------------------------------------------------------------------
# split one-variable evaluation (independent route)
# ---------------------------------------------------------------------------

def _split_indefinite(model: LocalModel, f: AmplitudeSpec, sigma: SchwartzSpec,
                      zeta_F: float, epsilon: float,
                      quadrature_tol: float) -> complex:
    """Exact one-variable representation via the half-line kernels F^pm."""
    mean = make_scaled_mean(f, model)
    zeta_t, eps_t = 2.0 * zeta_F, 2.0 * epsilon
    L_plus, L_minus = model.n_plus // 2, model.n_minus // 2
    L = L_plus + L_minus - 2
    radius = sigma.hat_truncation_radius(1e-18)
    split = zeta_t / eps_t

    total = 0.0
    for l in range(L + 1):
        cl = float(coeff_c_l(L_plus, L_minus, l).to_complex().real)
        if cl == 0.0:
            continue
        for sign in (+1, -1):
            kernel = FKernel(sign, L - l, zeta_t, mean)
            if sign > 0:
                y_lo, y_hi = max(split, -radius), radius
            else:
                y_lo, y_hi = -radius, min(split, radius)
            if y_lo >= y_hi:
                continue

            def integrand(y: float, kernel=kernel, l=l) -> float:
                return (float(sigma.hat(y)) * (eps_t * y - zeta_t) ** l
                        * F_eval(kernel, eps_t * y))

            val, _ = quad(integrand, y_lo, y_hi,
                          epsabs=quadrature_tol, epsrel=quadrature_tol * 10,
                          limit=400)
            total += cl * val
    return complex(2.0 ** (-3 - L) * eps_t * total / model.Lambda)


def _split_definite(model: LocalModel, f: AmplitudeSpec, sigma: SchwartzSpec,
                    zeta_F: float, epsilon: float,
                    quadrature_tol: float) -> complex:
    """Binomially expanded shifted representation for definite models."""
    mean = make_scaled_mean(f, model)
    zeta_t, eps_t = 2.0 * zeta_F, 2.0 * epsilon
    s_F = model.sign
    L = model.dim // 2
    radius = sigma.hat_truncation_radius(1e-18)
    v_max = mean.t_integral_upper(0.0)
    y_lo = max(-s_F * zeta_t / eps_t, -radius)
    if y_lo >= radius:
        return 0.0 + 0.0j

    total = 0.0
    for j in range(L):
        coeff = math.comb(L - 1, j) * (s_F * zeta_t) ** (L - 1 - j) * eps_t**j

        def integrand(y: float, j: int = j) -> float:
            v = eps_t * y + s_F * zeta_t
            if v < 0.0 or v > v_max:
                return 0.0
            return y**j * mean.eval(v) * float(sigma.hat(-s_F * y))

        val, _ = quad(integrand, y_lo, radius,
                      epsabs=quadrature_tol, epsrel=quadrature_tol * 10,
                      limit=400)
        total += coeff * val
    return complex(0.5 * eps_t * total / model.Lambda)


def eval_integral(model: LocalModel, f: AmplitudeSpec, sigma: SchwartzSpec,
                  zeta_F: float, epsilon: float, *,
                  method: str = "reduced-2d",
                  quadrature_tol: float = 1e-11) -> complex:
    """Ground-truth I(epsilon) by the requested method."""
    if method not in _METHODS:
        raise ValueError(f"method must be one of {_METHODS}")
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    if method == "reduced-2d":
        if model.is_definite:
            return eval_integral_definite(model, f, sigma, zeta_F, epsilon,
                                          quadrature_tol=quadrature_tol)
        return eval_integral_indefinite(model, f, sigma, zeta_F, epsilon,
                                        quadrature_tol=quadrature_tol)
    if model.is_definite:
        return _split_definite(model, f, sigma, zeta_F, epsilon, quadrature_tol)
    return _split_indefinite(model, f, sigma, zeta_F, epsilon, quadrature_tol)


def eval_grid(model: LocalModel, f: AmplitudeSpec, sigma: SchwartzSpec,
              zeta_F: float, config: OracleConfig, *,
              jobs: int = 1) -> list[tuple[float, complex]]:
    """I(epsilon) on the config grid, merged deterministically by grid order."""

    def one(eps: float) -> complex:
        return eval_integral(model, f, sigma, zeta_F, eps,
                             method=config.method,
                             quadrature_tol=config.quadrature_tol)

    grid = config.epsilon_grid
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            values = list(pool.map(one, grid))
    else:
        values = [one(eps) for eps in grid]
    return list(zip(grid, values))


# ---------------------------------------------------------------------------
# coefficient extraction and remainder slopes
# ---------------------------------------------------------------------------

class IllConditionedFitError(RuntimeError):
    """The Vandermonde fit is too ill-conditioned to trust."""

    def __init__(self, condition: float):
        super().__init__(f"coefficient fit condition number {condition:.3e} "
                         "exceeds the trust threshold")
        self.condition = condition


@dataclass(frozen=True)
class FitDiagnostics:
    condition: float
    residual: float
    points: int


def extract_coefficients(values: Sequence[tuple[float, complex]], j_max: int,
                         *, condition_limit: float = 1e12,
                         return_diagnostics: bool = False):
    """Least-squares A_0..A_{j_max} from I(eps) ~ sum eps^{j+1} A_j.

    Columns are scaled to unit norm before solving; the condition number of
    the scaled system and the relative residual are reported.
    """
    if j_max < 0:
        raise ValueError("j_max must be nonnegative")
    if len(values) < j_max + 3:
        raise ValueError("need at least j_max + 3 grid points")
    eps = np.array([e for e, _ in values], dtype=float)
    data = np.array([v for _, v in values], dtype=complex)
    powers = np.arange(1, j_max + 2)
    design = eps[:, None] ** powers[None, :]
    scale = np.linalg.norm(design, axis=0)
    design_scaled = design / scale
    condition = float(np.linalg.cond(design_scaled))
    if condition > condition_limit:
        raise IllConditionedFitError(condition)
    sol, _, _, _ = np.linalg.lstsq(design_scaled, data, rcond=None)
    coeffs = sol / scale
    residual = float(np.linalg.norm(design @ coeffs - data))
    denom = float(np.linalg.norm(data))
    diag = FitDiagnostics(condition=condition,
                          residual=residual / denom if denom else residual,
                          points=len(values))
    out = [complex(c) for c in coeffs]
    if return_diagnostics:
        return out, diag
    return out


@dataclass(frozen=True)
class SlopeFit:
    """Log-log remainder fit; ``floor_limited`` means too little signal."""

    slope: float | None
    floor_limited: bool
    points_used: int
    residual: float
    noise_floor: float
    remainders: tuple[tuple[float, float], ...] = field(repr=False, default=())

    def __float__(self) -> float:
        if self.slope is None:
            raise ValueError("no slope: remainder is below the noise floor")
        return self.slope


def _fit_loglog(points: Sequence[tuple[float, float]]) -> tuple[float, float]:
    logs_e = np.log([e for e, _ in points])
    logs_r = np.log([r for _, r in points])
    design = np.stack([logs_e, np.ones_like(logs_e)], axis=1)
    sol, _, _, _ = np.linalg.lstsq(design, logs_r, rcond=None)
    fitted = design @ sol
    return float(sol[0]), float(np.linalg.norm(fitted - logs_r))


def remainder_slope(model: LocalModel, f: AmplitudeSpec, sigma: SchwartzSpec,
                    zeta_F: float, M: int, *,
                    config: OracleConfig | None = None,
                    expansion: ExpansionResult | None = None,
                    grid_values: Sequence[tuple[float, complex]] | None = None,
                    fit_points: int = 6) -> SlopeFit:
    """Slope of log |I(eps) - PartialSum_M(eps)| vs log eps.

    Uses the smallest ``fit_points`` grid points whose remainder is above the
    noise floor; if fewer than three qualify the result is floor-limited.
    """
    if config is None:
        config = default_oracle_config(f)
    if expansion is None:
        expansion = expand(model, f, sigma, zeta_F, M,
                           quad_tol=min(1e-10, config.quadrature_tol * 10))
    if grid_values is None:
        grid_values = eval_grid(model, f, sigma, zeta_F, config)

    scale = max((abs(v) / e for e, v in grid_values), default=1.0)
    floor = 50.0 * config.quadrature_tol * max(1.0, scale)
    remainders = [(e, abs(v - expansion.partial_sum(e))) for e, v in grid_values]
    usable = [(e, r) for e, r in remainders if r > floor]
    usable.sort(key=lambda p: p[0])
    chosen = usable[:fit_points]
    if len(chosen) < 3:
        return SlopeFit(slope=None, floor_limited=True, points_used=len(chosen),
                        residual=math.inf, noise_floor=floor,
                        remainders=tuple(remainders))
    slope, resid = _fit_loglog(chosen)
    return SlopeFit(slope=slope, floor_limited=False, points_used=len(chosen),
                    residual=resid, noise_floor=floor,
                    remainders=tuple(remainders))
