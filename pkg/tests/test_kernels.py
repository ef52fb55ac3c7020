"""Half-line kernels: analytic values, derivative formula, dual-route guard."""

import math
from fractions import Fraction

import numpy as np
import pytest
from scipy.integrate import quad

from helpers import amplitude_from
from wittenlocal import AmplitudeSpec, make_model, make_scaled_mean
from wittenlocal.amplitude import make_unscaled_mean
from wittenlocal.bump import PlateauBump
from wittenlocal.kernels import FKernel, F_derivative, F_eval

C2 = (2 * math.pi) ** 2


def _constant_kernel(sign=+1, N=0, zeta=0.0):
    mean = make_unscaled_mean(AmplitudeSpec.constant_one(2, 2))
    return FKernel(sign, N, zeta, mean)


def test_kernel_validation():
    mean = make_unscaled_mean(AmplitudeSpec.constant_one(2, 2))
    with pytest.raises(ValueError):
        FKernel(2, 0, 0.0, mean)
    with pytest.raises(ValueError):
        FKernel(+1, -1, 0.0, mean)
    with pytest.raises(ValueError):
        FKernel(+1, 0, 0.0, make_unscaled_mean(AmplitudeSpec.constant_one(2, 0)))
    kernel = _constant_kernel()
    with pytest.raises(ValueError):
        F_derivative(kernel, -1, 0.0)
    with pytest.raises(ValueError):
        F_derivative(kernel, 13, 0.0)


def test_constant_amplitude_analytic_value():
    # for f == 1 on blocks (2, 2) the mean is (2 pi)^2 b(t + u), so the plus
    # kernel is (2 pi)^2 int_v^infty b(t) dt = (2 pi)^2 (6.5 - v) for v <= 4
    kernel = _constant_kernel()
    for v in [0.0, 1.0, 3.5]:
        assert F_eval(kernel, v) == pytest.approx(C2 * (6.5 - v), rel=1e-11)


def test_vanishes_beyond_support():
    kernel = _constant_kernel()
    assert F_eval(kernel, 12.0) == 0.0
    assert F_derivative(kernel, 1, 12.0) == 0.0


def test_order_zero_is_value():
    kernel = _constant_kernel(N=2, zeta=0.25)
    for v in [0.0, 1.0, 5.0]:
        assert F_derivative(kernel, 0, v) == F_eval(kernel, v)


def test_constant_amplitude_derivative_profile():
    # F' = -(2 pi)^2 b(v) and F'' = -(2 pi)^2 b'(v), across plateau and band
    kernel = _constant_kernel()
    bump = PlateauBump(2.0, 3.0)
    for v in [0.5, 3.0, 5.0, 6.5, 8.0]:
        assert F_derivative(kernel, 1, v) == pytest.approx(-C2 * bump.value(v),
                                                           rel=1e-10, abs=1e-10)
        assert F_derivative(kernel, 2, v) \
            == pytest.approx(-C2 * bump.derivative(v, 1), rel=1e-9, abs=1e-9)


def test_moment_weight_derivative_profile():
    # with N = 1 the first derivative picks up the boundary moment: -(2pi)^2 v b(v)
    kernel = _constant_kernel(N=1)
    bump = PlateauBump(2.0, 3.0)
    for v in [0.5, 2.0, 5.0]:
        assert F_derivative(kernel, 1, v) \
            == pytest.approx(-C2 * v * bump.value(v), rel=1e-10)


def _symmetric_kernel_pair(N, zeta):
    amp = amplitude_from(2, 2, {(2, 0, 0, 0): 1, (0, 0, 2, 0): 1,
                                (2, 0, 2, 0): Fraction(1, 3),
                                (4, 0, 0, 0): Fraction(1, 5),
                                (0, 0, 4, 0): Fraction(1, 5),
                                (0, 0, 0, 0): 1})
    mean = make_scaled_mean(amp, make_model((1, -1)))
    return FKernel(+1, N, zeta, mean), FKernel(-1, N, zeta, mean)


@pytest.mark.parametrize("N", [0, 2])
def test_block_swap_symmetry(N):
    # block-swap-symmetric mean: F^-(2 zeta - v) == F^+(v)
    zeta = 0.4
    plus, minus = _symmetric_kernel_pair(N, zeta)
    for v in [0.0, 0.7, 2.5, 5.0]:
        assert F_eval(minus, 2 * zeta - v) == pytest.approx(F_eval(plus, v),
                                                            rel=1e-10, abs=1e-10)
        assert F_derivative(minus, 1, 2 * zeta - v) \
            == pytest.approx(-F_derivative(plus, 1, v), rel=1e-9, abs=1e-9)


ASYM_AMP = amplitude_from(2, 2, {(0, 0, 0, 0): 1,
                                 (2, 0, 2, 0): Fraction(1, 7),
                                 (4, 0, 0, 2): Fraction(1, 19),
                                 (0, 2, 0, 0): Fraction(1, 3)})


def _fd5(f, x, h):
    return (f(x - 2 * h) - 8 * f(x - h) + 8 * f(x + h) - f(x + 2 * h)) / (12 * h)


@pytest.mark.parametrize("sign", [+1, -1])
@pytest.mark.parametrize("N", [0, 2])
def test_derivative_formula_vs_finite_differences(sign, N):
    mean = make_scaled_mean(ASYM_AMP, make_model((1, -2)))
    kernel = FKernel(sign, N, 0.3, mean)
    h = 1e-2
    for v in [0.0, 0.9, 3.6]:
        fd1 = _fd5(lambda x: F_eval(kernel, x), v, h)
        got1 = F_derivative(kernel, 1, v)
        assert abs(got1 - fd1) <= 1e-6 * max(1.0, abs(fd1))
        fd2 = _fd5(lambda x: F_derivative(kernel, 1, x), v, h)
        got2 = F_derivative(kernel, 2, v)
        assert abs(got2 - fd2) <= 1e-6 * max(1.0, abs(fd2))


@pytest.mark.parametrize("sign", [+1, -1])
@pytest.mark.parametrize("N,v", [(0, 0.0), (0, 0.7), (2, 0.0), (2, 2.5)])
def test_value_against_scipy_quadrature(sign, N, v):
    # independent route: the defining integral via scipy's adaptive quadrature
    zeta = 0.3
    mean = make_scaled_mean(ASYM_AMP, make_model((1, -2)))
    kernel = FKernel(sign, N, zeta, mean)
    w = v - zeta
    lo = sign * w
    hi = mean.t_integral_upper(abs(w)) + abs(w) + 1.0

    def integrand(t):
        return t ** N * mean.eval(0.5 * (t - w), 0.5 * (t + w))

    breaks = list(np.linspace(lo, hi, 25)[1:-1])
    reference, err = quad(integrand, lo, hi, limit=400, epsabs=1e-12, epsrel=1e-12,
                          points=breaks)
    assert err < 1e-9 * max(1.0, abs(reference))
    assert F_eval(kernel, v) == pytest.approx(reference, rel=1e-9, abs=1e-10)


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
