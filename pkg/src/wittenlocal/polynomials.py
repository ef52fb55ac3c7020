"""Multivariate polynomials with rational coefficients.

The amplitude machinery keeps polynomial data exact (``fractions.Fraction``)
until the final numeric evaluation so that sphere-moment identities can be
checked with exact equality.  Monomials are stored sparsely as
``exponent tuple -> Fraction``.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Iterable, Mapping, Union

import numpy as np

_RationalLike = Union[int, Fraction, Rational]
_Expo = tuple


class RatPoly:
    """A sparse multivariate polynomial over the rationals.

    Attributes:
        nvars: number of variables.
        coeffs: dict mapping exponent tuples (length ``nvars``) to Fraction.
    """

    __slots__ = ("nvars", "coeffs")

    def __init__(self, nvars: int, coeffs: Mapping[_Expo, _RationalLike] | Iterable[tuple[_Expo, _RationalLike]] = ()):
        self.nvars = int(nvars)
        data: dict[_Expo, Fraction] = {}
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        for expo, q in items:
            expo = tuple(int(e) for e in expo)
            if len(expo) != self.nvars:
                raise ValueError(f"exponent tuple {expo} has wrong length (nvars={self.nvars})")
            if any(e < 0 for e in expo):
                raise ValueError(f"negative exponent in {expo}")
            qf = Fraction(q) + data.get(expo, Fraction(0))
            if qf:
                data[expo] = qf
            else:
                data.pop(expo, None)
        self.coeffs = data

    # -- constructors ------------------------------------------------------

    @classmethod
    def constant(cls, nvars: int, q: _RationalLike) -> "RatPoly":
        return cls(nvars, {(0,) * nvars: Fraction(q)})

    @classmethod
    def monomial(cls, nvars: int, expo: Iterable[int], q: _RationalLike = 1) -> "RatPoly":
        return cls(nvars, {tuple(expo): Fraction(q)})

    # -- ring operations ---------------------------------------------------

    def __add__(self, other: "RatPoly") -> "RatPoly":
        if self.nvars != other.nvars:
            raise ValueError("variable count mismatch")
        out = dict(self.coeffs)
        for expo, q in other.coeffs.items():
            s = out.get(expo, Fraction(0)) + q
            if s:
                out[expo] = s
            else:
                out.pop(expo, None)
        return RatPoly(self.nvars, out)

    def __neg__(self) -> "RatPoly":
        return RatPoly(self.nvars, {e: -q for e, q in self.coeffs.items()})

    def __sub__(self, other: "RatPoly") -> "RatPoly":
        return self + (-other)

    def __mul__(self, other: "RatPoly | _RationalLike") -> "RatPoly":
        if isinstance(other, (int, Rational)):
            q0 = Fraction(other)
            return RatPoly(self.nvars, {e: q * q0 for e, q in self.coeffs.items()})
        if self.nvars != other.nvars:
            raise ValueError("variable count mismatch")
        out: dict[_Expo, Fraction] = {}
        for e1, q1 in self.coeffs.items():
            for e2, q2 in other.coeffs.items():
                expo = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(expo, Fraction(0)) + q1 * q2
                if s:
                    out[expo] = s
                else:
                    out.pop(expo, None)
        return RatPoly(self.nvars, out)

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        return isinstance(other, RatPoly) and self.nvars == other.nvars and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.nvars, frozenset(self.coeffs.items())))

    # -- calculus ----------------------------------------------------------

    def diff(self, var: int) -> "RatPoly":
        out: dict[_Expo, Fraction] = {}
        for expo, q in self.coeffs.items():
            e = expo[var]
            if e == 0:
                continue
            new = list(expo)
            new[var] = e - 1
            key = tuple(new)
            s = out.get(key, Fraction(0)) + q * e
            if s:
                out[key] = s
            else:
                out.pop(key, None)
        return RatPoly(self.nvars, out)

    def weighted_second_derivative(self, weights: Mapping[int, _RationalLike]) -> "RatPoly":
        """Return ``sum_i weights[i] * d^2/dw_i^2`` applied to the polynomial."""
        out = RatPoly(self.nvars)
        for var, wgt in weights.items():
            out = out + Fraction(wgt) * self.diff(var).diff(var)
        return out

    # -- evaluation --------------------------------------------------------

    def total_degree(self) -> int:
        return max((sum(e) for e in self.coeffs), default=0)

    def eval_rational(self, point: Iterable[_RationalLike]) -> Fraction:
        pt = [Fraction(x) for x in point]
        total = Fraction(0)
        for expo, q in self.coeffs.items():
            term = q
            for x, e in zip(pt, expo):
                term *= x**e
            total += term
        return total

    def eval_float(self, points: np.ndarray) -> np.ndarray:
        """Evaluate at an array of points with shape (..., nvars)."""
        points = np.asarray(points, dtype=float)
        if points.shape[-1] != self.nvars:
            raise ValueError("point dimensionality mismatch")
        out = np.zeros(points.shape[:-1])
        for expo, q in self.coeffs.items():
            term = np.full(points.shape[:-1], float(q))
            for var, e in enumerate(expo):
                if e:
                    term = term * points[..., var] ** e
            out += term
        return out

    def __repr__(self) -> str:
        if not self.coeffs:
            return "RatPoly(0)"
        parts = [f"{q}*w^{expo}" for expo, q in sorted(self.coeffs.items())]
        return "RatPoly(" + " + ".join(parts) + ")"
