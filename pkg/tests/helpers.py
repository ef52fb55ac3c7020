"""Shared builders used across the test suite."""

from fractions import Fraction

from wittenlocal import AmplitudeSpec, SchwartzSpec
from wittenlocal.polynomials import RatPoly


def poly_from(dim, monomials):
    """Build a rational polynomial on ``dim`` variables from {exponents: coeff}."""
    return RatPoly(dim, {tuple(expo): Fraction(c) for expo, c in monomials.items()})


def amplitude_from(dim_plus, dim_minus, monomials, r0=2.0, r1=3.0):
    """An amplitude whose polynomial profile is given as {exponents: coeff}."""
    return AmplitudeSpec(dim_plus, dim_minus,
                         poly_from(dim_plus + dim_minus, monomials), r0=r0, r1=r1)


def gaussian_sigma(tau=1.0):
    """Plain Gaussian transform profile: sigma_hat(u) = exp(-u^2 / (2 tau^2))."""
    return SchwartzSpec((Fraction(1),), tau)
