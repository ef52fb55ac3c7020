"""Radial plateau bump with closed-form derivatives of every order.

The bump is ``beta(x) = 1 - psi((x - r0^2) / (r1^2 - r0^2))`` acting on the
squared radius ``x = ||w||^2``, where ``psi`` is the integrated normalized
mollifier

    psi(y) = int_0^y eta(s) ds / int_0^1 eta(s) ds,
    eta(s) = exp(-1 / (s (1 - s))).

``psi`` has no elementary antiderivative, so values are served from a one-time
high-degree Chebyshev interpolant (accurate to ~1e-14, verified in tests),
while derivatives of any order come from exact Taylor-mode recurrences:
``eta = exp(g)`` with ``g(s) = -1/s - 1/(1-s)`` has Taylor coefficients in
closed form, and the exponential transfers them through the convolution
recurrence ``e_k = (1/k) sum_j j g_j e_{k-j}``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.integrate import quad
from scipy.interpolate import CubicSpline

_CHEB_DEGREE = 220
_SPLINE_NODES = 4097


def _eta(s: np.ndarray) -> np.ndarray:
    s = np.asarray(s, dtype=float)
    out = np.zeros_like(s)
    inside = (s > 0.0) & (s < 1.0)
    si = s[inside]
    out[inside] = np.exp(-1.0 / (si * (1.0 - si)))
    return out


@lru_cache(maxsize=1)
def _mollifier_mass() -> float:
    """Z = int_0^1 exp(-1/(s(1-s))) ds."""
    val, _ = quad(lambda s: math.exp(-1.0 / (s * (1.0 - s))), 0.0, 1.0, epsabs=1e-16, epsrel=1e-13, limit=200)
    return val


@lru_cache(maxsize=1)
def _psi_chebyshev() -> np.polynomial.chebyshev.Chebyshev:
    """Chebyshev interpolant of psi on [0, 1], built once per process."""
    n = _CHEB_DEGREE + 1
    # Chebyshev points of the first kind on [0, 1], sorted ascending.
    k = np.arange(n)
    nodes = 0.5 * (1.0 - np.cos((2 * k + 1) * np.pi / (2 * n)))
    nodes.sort()
    z = _mollifier_mass()
    values = np.empty(n)
    acc = 0.0
    prev = 0.0
    for idx, y in enumerate(nodes):
        seg, _ = quad(lambda s: math.exp(-1.0 / (s * (1.0 - s))) if 0.0 < s < 1.0 else 0.0,
                      prev, y, epsabs=1e-16, epsrel=1e-13, limit=200)
        acc += seg
        prev = y
        values[idx] = acc / z
    return np.polynomial.chebyshev.Chebyshev.fit(nodes, values, deg=_CHEB_DEGREE, domain=[0.0, 1.0])


@lru_cache(maxsize=1)
def _psi_coefficients() -> tuple[float, ...]:
    """The interpolant's coefficients as plain floats, for the scalar path."""
    return tuple(float(c) for c in _psi_chebyshev().coef)


@lru_cache(maxsize=1)
def _psi_spline() -> CubicSpline:
    """Dense cubic resampling of the interpolant; fast array evaluation.

    Node spacing 1/4096 keeps the resampling error below ~1e-13, far under
    the interpolant's own accuracy budget.
    """
    y = np.linspace(0.0, 1.0, _SPLINE_NODES)
    return CubicSpline(y, _psi_chebyshev()(y))


def _psi_scalar(y: float) -> float:
    """Clenshaw evaluation in native floats; much faster than array dispatch."""
    coefs = _psi_coefficients()
    t = 2.0 * y - 1.0  # map [0, 1] to the Chebyshev domain [-1, 1]
    t2 = 2.0 * t
    b1 = 0.0
    b2 = 0.0
    for c in reversed(coefs[1:]):
        b1, b2 = c + t2 * b1 - b2, b1
    val = coefs[0] + t * b1 - b2
    return min(max(val, 0.0), 1.0)


def smooth_step(y: np.ndarray) -> np.ndarray:
    """psi(y): 0 for y <= 0, 1 for y >= 1, smoothly monotone in between."""
    if isinstance(y, float):
        if y <= 0.0:
            return 0.0
        if y >= 1.0:
            return 1.0
        return _psi_scalar(y)
    y = np.asarray(y, dtype=float)
    scalar = y.ndim == 0
    y = np.atleast_1d(y)
    out = np.empty_like(y)
    out[y <= 0.0] = 0.0
    out[y >= 1.0] = 1.0
    inside = (y > 0.0) & (y < 1.0)
    n_inside = int(inside.sum())
    if 0 < n_inside <= 16:
        out[inside] = [_psi_scalar(float(v)) for v in y[inside]]
    elif n_inside:
        out[inside] = np.clip(_psi_spline()(y[inside]), 0.0, 1.0)
    return out[0] if scalar else out


def smooth_step_quad(y: float) -> float:
    """Direct quadrature evaluation of psi, for accuracy cross-checks."""
    if y <= 0.0:
        return 0.0
    if y >= 1.0:
        return 1.0
    val, _ = quad(lambda s: math.exp(-1.0 / (s * (1.0 - s))), 0.0, y, epsabs=1e-16, epsrel=1e-13, limit=200)
    return val / _mollifier_mass()


def _eta_derivatives(y: np.ndarray, kmax: int, dtype=float) -> np.ndarray:
    """eta^(k)(y) for k = 0..kmax at interior points y in (0, 1).

    Uses the exact Taylor-mode exponential recurrence; vectorized over y.
    Returns an array of shape (kmax + 1,) + y.shape.
    """
    y = np.asarray(y, dtype=dtype)
    one = np.asarray(1.0, dtype=dtype)
    # Taylor coefficients g_j of g(s) = -1/s - 1/(1-s) at each point.
    g = np.empty((kmax + 1,) + y.shape, dtype=dtype)
    inv_y = one / y
    inv_1my = one / (one - y)
    py = inv_y.copy()
    pm = inv_1my.copy()
    for j in range(kmax + 1):
        sign = -1.0 if j % 2 == 0 else 1.0
        g[j] = sign * py - pm
        py = py * inv_y
        pm = pm * inv_1my
    e = np.empty_like(g)
    e[0] = np.exp(g[0])
    for k in range(1, kmax + 1):
        acc = np.zeros_like(y)
        for j in range(1, k + 1):
            acc = acc + j * g[j] * e[k - j]
        e[k] = acc / k
    # eta^(k) = k! * e_k
    fact = np.ones(kmax + 1, dtype=dtype)
    for k in range(1, kmax + 1):
        fact[k] = fact[k - 1] * k
    return e * fact.reshape((kmax + 1,) + (1,) * y.ndim)


@dataclass(frozen=True)
class PlateauBump:
    """beta(x): identically 1 for x <= r0^2, identically 0 for x >= r1^2.

    The argument x is a squared radius.  ``value`` and ``derivative`` are
    vectorized over numpy arrays; derivatives of every order vanish outside
    the open transition interval (r0^2, r1^2).
    """

    r0: float
    r1: float

    def __post_init__(self):
        if not (0 < self.r0 < self.r1):
            raise ValueError("bump radii must satisfy 0 < r0 < r1")

    @property
    def x0(self) -> float:
        return self.r0 * self.r0

    @property
    def x1(self) -> float:
        return self.r1 * self.r1

    def value(self, x: np.ndarray) -> np.ndarray:
        if isinstance(x, float):
            return 1.0 - smooth_step((x - self.x0) / (self.x1 - self.x0))
        x = np.asarray(x, dtype=float)
        y = (x - self.x0) / (self.x1 - self.x0)
        return 1.0 - smooth_step(y)

    def derivative(self, x: np.ndarray, k: int, dtype=float) -> np.ndarray:
        """beta^(k)(x) for k >= 0, vectorized over x."""
        if k == 0:
            out = self.value(x).astype(dtype)
            return out
        x = np.asarray(x, dtype=dtype)
        scalar = x.ndim == 0
        x = np.atleast_1d(x)
        delta = np.asarray(self.x1 - self.x0, dtype=dtype)
        y = (x - np.asarray(self.x0, dtype=dtype)) / delta
        out = np.zeros_like(y)
        inside = (y > 0.0) & (y < 1.0)
        if inside.any():
            eta_k = _eta_derivatives(y[inside], k - 1, dtype=dtype)[k - 1]
            z = np.asarray(_mollifier_mass(), dtype=dtype)
            # psi^(k)(y) = eta^(k-1)(y) / Z; chain rule brings delta^-k.
            out[inside] = -(eta_k / z) / delta**k
        return out[0] if scalar else out

    def derivatives_upto(self, x: np.ndarray, kmax: int, dtype=float) -> np.ndarray:
        """beta^(k)(x) for all k = 0..kmax; shape (kmax+1,) + x.shape."""
        x = np.asarray(x, dtype=dtype)
        scalar = x.ndim == 0
        x = np.atleast_1d(x)
        out = np.zeros((kmax + 1,) + x.shape, dtype=dtype)
        out[0] = np.asarray(self.value(x), dtype=dtype)
        if kmax == 0:
            return out[:, 0] if scalar else out
        delta = np.asarray(self.x1 - self.x0, dtype=dtype)
        y = (x - np.asarray(self.x0, dtype=dtype)) / delta
        inside = (y > 0.0) & (y < 1.0)
        if inside.any():
            etas = _eta_derivatives(y[inside], kmax - 1, dtype=dtype)
            z = np.asarray(_mollifier_mass(), dtype=dtype)
            scale = delta.copy()
            for k in range(1, kmax + 1):
                out[k][inside] = -(etas[k - 1] / z) / scale
                scale = scale * delta
        return out[:, 0] if scalar else out
