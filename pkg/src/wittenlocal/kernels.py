"""Half-line kernels bridging the split integral and the expansion.

For an indefinite spherical mean ``scriptS`` the kernels are

    F^pm(v) = int_{pm(v - zeta)}^infty t^N scriptS((t - v + zeta)/2, (t + v - zeta)/2) dt.

Their derivatives obey a closed formula: an interior integral against
``(d_- - d_+)^m scriptS`` plus boundary terms at the axis points
``(0, v - zeta)`` (plus kernel) or ``(zeta - v, 0)`` (minus kernel) with the
exact boundary constants ``C_{N,m,p,q}``.  The expansion engine consumes the
derivatives at v = 0; the finite-difference cross-check in the test-suite
exercises arbitrary v.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import roots_legendre

from .amplitude import SphericalMean, alternating_derivative, alternating_derivative_batch
from .coeffs import C_Nmpq

_DERIVATIVE_CAP = 12
_EPSABS = 1e-12
_EPSREL = 1e-11
_GL_NODES, _GL_WEIGHTS = roots_legendre(16)


@dataclass(frozen=True)
class FKernel:
    """One half-line kernel: sign, moment power N, offset zeta, and the mean."""

    sign: int
    N: int
    zeta: float
    mean: SphericalMean

    def __post_init__(self):
        if self.sign not in (+1, -1):
            raise ValueError("sign must be +1 or -1")
        if self.N < 0:
            raise ValueError("N must be nonnegative")
        if self.mean.kind != "indefinite":
            raise ValueError("half-line kernels require an indefinite mean")


def _ray_region_edges(mean: SphericalMean, w: float, lo: float, hi: float) -> list[float]:
    """Initial panel edges where t -> ((t-w)/2, (t+w)/2) changes bump region."""
    ts = np.linspace(lo, hi, 257)
    tt, uu = 0.5 * (ts - w), 0.5 * (ts + w)
    vanish = (tt >= 0.0) & (uu >= 0.0) & (tt * mean._A_min + uu * mean._B_min >= mean._bump.x1)
    plateau = ~vanish & (np.abs(tt) * mean._A_max + np.abs(uu) * mean._B_max <= mean._bump.x0)
    region = np.where(vanish, 0, np.where(plateau, 1, 2))
    cuts = np.nonzero(np.diff(region))[0]
    return [lo] + [float(ts[k + 1]) for k in cuts] + [hi]


def _panel_values(f, panels: np.ndarray) -> np.ndarray:
    """Gauss-Legendre value of ``f`` on each (lo, hi) row of ``panels``."""
    mid = 0.5 * (panels[:, 0] + panels[:, 1])
    half = 0.5 * (panels[:, 1] - panels[:, 0])
    pts = mid[:, None] + half[:, None] * _GL_NODES[None, :]
    vals = f(pts.ravel()).reshape(pts.shape)
    return half * (vals @ _GL_WEIGHTS)


def _adaptive_gl(f, edges: list[float], epsabs: float, epsrel: float) -> float:
    """Adaptive panel integration of a vectorized integrand over [edges]."""
    panels = np.array([[a, b] for a, b in zip(edges[:-1], edges[1:]) if b > a])
    if panels.size == 0:
        return 0.0
    width = float(panels[-1, 1] - panels[0, 0])
    vals = _panel_values(f, panels)
    total = float(vals.sum())
    accepted = 0.0
    for _ in range(40):
        mid = 0.5 * (panels[:, 0] + panels[:, 1])
        children = np.empty((2 * len(panels), 2))
        children[0::2, 0], children[0::2, 1] = panels[:, 0], mid
        children[1::2, 0], children[1::2, 1] = mid, panels[:, 1]
        child_vals = _panel_values(f, children)
        refined = child_vals[0::2] + child_vals[1::2]
        total = accepted + float(refined.sum())
        budget = max(epsabs, epsrel * abs(total)) / width
        err = np.abs(refined - vals)
        span = panels[:, 1] - panels[:, 0]
        done = (err <= budget * span) | (span < 1e-10 * width)
        accepted += float(refined[done].sum())
        if done.all():
            return accepted
        keep = ~done
        idx = np.repeat(keep, 2)
        panels, vals = children[idx], child_vals[idx]
    return accepted + float(vals.sum())


def _interior_integral(kernel: FKernel, m: int, v: float) -> float:
    """2^{-m} int_{sign(v-zeta)}^infty t^N (d_- - d_+)^m scriptS(...) dt."""
    w = v - kernel.zeta
    lo = kernel.sign * w
    hi = kernel.mean.t_integral_upper(abs(w)) + abs(w) + 1.0
    if hi <= lo:
        return 0.0

    mean, N = kernel.mean, kernel.N

    def integrand(ts: np.ndarray) -> np.ndarray:
        acc = alternating_derivative_batch(mean, 0.5 * (ts - w), 0.5 * (ts + w), m)
        return ts**N * acc if N else acc

    edges = _ray_region_edges(mean, w, lo, hi)
    val = _adaptive_gl(integrand, edges, _EPSABS, _EPSREL)
    return val / 2**m


def _boundary_sum(kernel: FKernel, m: int, v: float) -> float:
    """The boundary terms of the m-th derivative at the axis point."""
    w = v - kernel.zeta
    sign, N, mean = kernel.sign, kernel.N, kernel.mean
    if sign > 0:
        point = (0.0, w)
    else:
        point = (-w, 0.0)
    total = 0.0
    for i in range(0, m):
        power = max(0, N + 1 - m + i)
        outer = (-sign) ** (m + i) * (sign * w) ** power
        if outer == 0.0:
            continue
        inner = 0.0
        for p in range(0, i + 1):
            q = i - p
            c = C_Nmpq(N, m, p, q)
            if not c:
                continue
            if sign > 0:
                # operator (+d_-)^p
                term = alternating_derivative(mean, *point, q, dminus=p)
            else:
                # operator (-d_+)^p
                term = (-1) ** p * alternating_derivative(mean, *point, q, dplus=p)
            inner += float(c) * term
        total += outer * inner
    return total


def F_eval(kernel: FKernel, v: float) -> float:
    """The kernel value (the defining half-line integral)."""
    return _interior_integral(kernel, 0, v)


def F_derivative(kernel: FKernel, m: int, v: float) -> float:
    """The m-th derivative via the closed interior-plus-boundary formula."""
    if m < 0:
        raise ValueError("derivative order must be nonnegative")
    if m > _DERIVATIVE_CAP:
        raise ValueError(f"derivative order capped at {_DERIVATIVE_CAP}")
    if m == 0:
        return F_eval(kernel, v)
    return _interior_integral(kernel, m, v) + _boundary_sum(kernel, m, v)
