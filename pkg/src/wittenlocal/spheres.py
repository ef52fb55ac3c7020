"""Sphere moments and quadrature rules.

Three layers:

* exact monomial moments over round spheres of even dimension count
  (values are rational multiples of integer powers of pi, kept exact),
* tensor-product quadrature nodes on S^{n-1} built recursively from
  Gauss-Jacobi rules (used for brute-force cross-checks),
* torus-phase reduction data for spheres of even coordinate count: exact
  phase moments per coordinate pair and Gauss rules on the simplex of
  squared pair moduli (used by the fast spherical-mean evaluator).
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Iterable

import numpy as np
from scipy.special import roots_jacobi, roots_legendre

from .exactscalar import ExactScalar


def _double_factorial(n: int) -> int:
    if n <= 0:
        return 1
    out = 1
    while n > 0:
        out *= n
        n -= 2
    return out


def sphere_volume_exact(n: int) -> ExactScalar:
    """vol(S^{n-1}) = 2 pi^{n/2} / (n/2 - 1)! for even n >= 2, exactly."""
    if n < 2 or n % 2:
        raise ValueError("exact volume requires even n >= 2")
    half = n // 2
    return ExactScalar.pi_power(half, Fraction(2, math.factorial(half - 1)))


def sphere_monomial_moment_exact(alpha: Iterable[int], n: int) -> ExactScalar:
    """int_{S^{n-1}} theta^alpha dtheta for even n, exactly.

    Zero when any exponent is odd; otherwise with beta_i = alpha_i / 2,

        moment = 2 pi^{n/2} * prod[(2 beta_i)! / (4^{beta_i} beta_i!)]
                 / (|beta| + n/2 - 1)!.
    """
    alpha = tuple(int(a) for a in alpha)
    if len(alpha) != n:
        raise ValueError("exponent tuple length must equal n")
    if n < 2 or n % 2:
        raise ValueError("exact moment requires even n >= 2")
    if any(a < 0 for a in alpha):
        raise ValueError("negative exponent")
    if any(a % 2 for a in alpha):
        return ExactScalar()
    beta = [a // 2 for a in alpha]
    num = Fraction(2)
    for b in beta:
        num *= Fraction(math.factorial(2 * b), 4**b * math.factorial(b))
    num /= math.factorial(sum(beta) + n // 2 - 1)
    return ExactScalar.pi_power(n // 2, num)


def sphere_monomial_moment_float(alpha: Iterable[int], n: int) -> float:
    """Float moment for any n >= 2 (Gamma-function formula)."""
    alpha = tuple(int(a) for a in alpha)
    if len(alpha) != n:
        raise ValueError("exponent tuple length must equal n")
    if any(a % 2 for a in alpha):
        return 0.0
    log_num = 0.0
    for a in alpha:
        log_num += math.lgamma((a + 1) / 2.0)
    total = sum(alpha)
    return 2.0 * math.exp(log_num - math.lgamma((total + n) / 2.0))


@lru_cache(maxsize=64)
def sphere_quadrature(n: int, degree: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes/weights on S^{n-1} integrating all polynomials of total degree
    <= ``degree`` exactly (and smooth functions with spectral accuracy).

    Returns (nodes, weights) with nodes of shape (K, n); sum of weights is
    vol(S^{n-1}).
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if n == 1:
        nodes = np.array([[1.0], [-1.0]])
        weights = np.array([1.0, 1.0])
        return nodes, weights
    if n == 2:
        m = max(degree + 1, 4)
        angles = 2.0 * np.pi * np.arange(m) / m
        nodes = np.stack([np.cos(angles), np.sin(angles)], axis=1)
        weights = np.full(m, 2.0 * np.pi / m)
        return nodes, weights
    # Recursive: theta = (c, sqrt(1-c^2) * theta') with c Gauss-Jacobi
    # distributed for the weight (1-c^2)^{(n-3)/2}.
    k1 = max((degree + 2) // 2, 3)
    alpha = (n - 3) / 2.0
    c_nodes, c_weights = roots_jacobi(k1, alpha, alpha)
    sub_nodes, sub_weights = sphere_quadrature(n - 1, degree)
    s = np.sqrt(np.maximum(1.0 - c_nodes**2, 0.0))
    nodes = np.empty((k1 * len(sub_nodes), n))
    weights = np.empty(k1 * len(sub_nodes))
    idx = 0
    for ci, si, wi in zip(c_nodes, s, c_weights):
        block = slice(idx, idx + len(sub_nodes))
        nodes[block, 0] = ci
        nodes[block, 1:] = si * sub_nodes
        weights[block] = wi * sub_weights
        idx += len(sub_nodes)
    return nodes, weights


def pair_phase_moment(a: int, b: int) -> Fraction:
    """(1/2 pi) int_0^{2 pi} cos^a(phi) sin^b(phi) dphi, exactly.

    Zero unless both exponents are even, in which case the value is
    (a-1)!! (b-1)!! / (a+b)!!.
    """
    if a < 0 or b < 0:
        raise ValueError("negative exponent")
    if a % 2 or b % 2:
        return Fraction(0)
    return Fraction(_double_factorial(a - 1) * _double_factorial(b - 1), _double_factorial(a + b))


@lru_cache(maxsize=32)
def simplex_rule(npairs: int, order: int = 48) -> tuple[np.ndarray, np.ndarray]:
    """Quadrature for ``int_{Delta_{P-1}} h(x) dx`` over the simplex of pair
    fractions x (x_k >= 0, sum x = 1), with dx the Lebesgue measure of the
    projection onto the first P-1 coordinates.

    For P = 1 the integral is the point evaluation h(1).  Returns
    (nodes, weights) with nodes of shape (K, P).
    """
    if npairs < 1:
        raise ValueError("npairs must be >= 1")
    if npairs == 1:
        return np.array([[1.0]]), np.array([1.0])
    xi, wi = roots_legendre(order)
    xi = 0.5 * (xi + 1.0)
    wi = 0.5 * wi
    if npairs == 2:
        nodes = np.stack([xi, 1.0 - xi], axis=1)
        return nodes, wi.copy()
    if npairs == 3:
        # Duffy map: x1 = u, x2 = (1-u) v, x3 = (1-u)(1-v); Jacobian (1-u).
        u = xi[:, None]
        v = xi[None, :]
        x1 = np.broadcast_to(u, (order, order))
        x2 = (1.0 - u) * v
        x3 = (1.0 - u) * (1.0 - v)
        nodes = np.stack([x1.ravel(), x2.ravel(), x3.ravel()], axis=1)
        weights = (wi[:, None] * wi[None, :] * (1.0 - u)).ravel()
        return nodes, weights
    raise NotImplementedError("simplex rules implemented for up to 3 pairs per block")


def block_mean_constant(npairs: int) -> ExactScalar:
    """(2 pi)^P * 2^{1-P} = 2 pi^P: the factor relating the simplex integral
    to the sphere integral,
    int_{S^{2P-1}} h dtheta = const * int_Delta [phase-averaged h](x) dx,
    where the phase average uses the normalized pair moments of
    :func:`pair_phase_moment`.
    """
    return ExactScalar.pi_power(npairs, 2)


def sphere_trace_identity_check(bilinear: np.ndarray, n: int, tol: float = 1e-9) -> bool:
    """Check int_{S^{n-1}} <B theta, theta> dtheta = vol(S^{n-1}) tr(B) / n.

    Both sides by quadrature/closed form; returns True when they agree to
    ``tol`` (absolute, relative to the sphere volume scale).
    """
    b = np.asarray(bilinear, dtype=float)
    if b.shape != (n, n):
        raise ValueError("bilinear form must be n x n")
    if not np.allclose(b, b.T, atol=1e-12):
        raise ValueError("bilinear form must be symmetric")
    nodes, weights = sphere_quadrature(n, degree=6)
    lhs = float(np.sum(weights * np.einsum("ki,ij,kj->k", nodes, b, nodes)))
    vol = float(np.sum(weights))
    rhs = vol * float(np.trace(b)) / n
    return abs(lhs - rhs) <= tol * max(1.0, vol)
