"""Amplitudes and their spherical means: exact moments, derivatives, batching."""

import math
from fractions import Fraction

import numpy as np
import pytest

from helpers import amplitude_from, poly_from
from wittenlocal import AmplitudeSpec, ExactScalar, make_model, make_scaled_mean
from wittenlocal.amplitude import (
    alternating_derivative,
    alternating_derivative_batch,
    alternating_origin_deriv,
    make_unscaled_mean,
    script_S_definite_derivatives,
    script_S_derivatives_at_origin,
    script_S_eval,
    spherical_mean,
)
from wittenlocal.spheres import sphere_quadrature

VOL_S1 = 2 * math.pi
VOL_S3 = 2 * math.pi ** 2


def test_eval_points_plateau_and_support():
    amp = amplitude_from(2, 2, {(2, 0, 0, 0): 1, (0, 0, 0, 0): 2})
    inside = np.array([[0.5, 0.5, 0.5, 0.5]])
    outside = np.array([[2.0, 2.0, 2.0, 2.0]])
    assert amp.eval_points(inside)[0] == pytest.approx(0.25 + 2.0)
    assert amp.eval_points(outside)[0] == 0.0


def test_constant_one():
    amp = AmplitudeSpec.constant_one(2, 2)
    pts = np.array([[1.0, 0.0, 0.5, 0.0]])
    assert amp.eval_points(pts)[0] == 1.0


def test_spherical_mean_constant():
    amp = AmplitudeSpec.constant_one(2, 2)
    assert spherical_mean(amp, 1.0, 1.0) == pytest.approx(VOL_S1 ** 2, rel=1e-13)
    amp42 = AmplitudeSpec.constant_one(4, 2)
    assert spherical_mean(amp42, 0.5, 0.5) == pytest.approx(VOL_S3 * VOL_S1, rel=1e-13)


def test_spherical_mean_quadratic_profile():
    # profile w1^2 on blocks (2, 2): mean is (2 pi)^2 r^2 / 2 inside the plateau
    amp = amplitude_from(2, 2, {(2, 0, 0, 0): 1})
    for r, s in [(0.5, 0.5), (1.0, 0.25), (0.1, 1.2)]:
        assert spherical_mean(amp, r, s) \
            == pytest.approx(VOL_S1 ** 2 * r ** 2 / 2, rel=1e-12)


def test_spherical_mean_rejects_negative_radii():
    amp = AmplitudeSpec.constant_one(2, 2)
    with pytest.raises(ValueError):
        spherical_mean(amp, -1.0, 0.5)
    with pytest.raises(ValueError):
        spherical_mean(amp, 0.5, -0.1)


def test_mean_eval_uses_squared_arguments():
    amp = amplitude_from(2, 2, {(2, 0, 1, 1): Fraction(1, 3), (0, 0, 2, 0): 1})
    mean = make_unscaled_mean(amp)
    for r, s in [(0.3, 0.7), (1.1, 0.2), (1.4, 1.4)]:
        assert mean.eval(r * r, s * s) == pytest.approx(spherical_mean(amp, r, s),
                                                        rel=1e-12, abs=1e-14)


def test_exact_mean_matches_tensor_quadrature():
    # moment-formula means against tensor-product sphere quadrature, degree <= 6
    amp = amplitude_from(2, 2, {(2, 0, 2, 0): Fraction(1, 3),
                                (4, 0, 0, 2): Fraction(1, 5),
                                (0, 2, 0, 0): Fraction(-1, 2),
                                (1, 1, 2, 0): Fraction(2, 7),
                                (0, 0, 0, 0): 1})
    mean = make_unscaled_mean(amp)
    pts_p, wts_p = sphere_quadrature(2, 8)
    pts_m, wts_m = sphere_quadrature(2, 8)
    poly = amp.poly
    for r, s in [(0.4, 0.8), (1.0, 0.3)]:
        nodes = np.empty((len(wts_p) * len(wts_m), 4))
        weights = np.empty(len(wts_p) * len(wts_m))
        idx = 0
        for i in range(len(wts_p)):
            for j in range(len(wts_m)):
                nodes[idx, :2] = r * pts_p[i]
                nodes[idx, 2:] = s * pts_m[j]
                weights[idx] = wts_p[i] * wts_m[j]
                idx += 1
        reference = float(weights @ poly.eval_float(nodes))
        assert mean.eval(r * r, s * s) == pytest.approx(reference, abs=1e-10)


def test_scaled_mean_divides_by_weights():
    amp = amplitude_from(2, 2, {(2, 0, 0, 0): 1, (0, 0, 2, 2): Fraction(1, 4)})
    model = make_model((2, -3))
    scaled = make_scaled_mean(amp, model)
    unscaled = make_unscaled_mean(amp)
    for t, u in [(0.5, 0.25), (1.2, 0.8), (3.0, 1.0)]:
        assert scaled.eval(t, u) == pytest.approx(unscaled.eval(t / 2, u / 3),
                                                  rel=1e-12)


def test_scaled_mean_requires_matching_blocks():
    amp = AmplitudeSpec.constant_one(2, 2)
    with pytest.raises(ValueError):
        make_scaled_mean(amp, make_model((1, 1, -1)))


# ---------------------------------------------------------------------------
# exact origin derivatives: the Hessian-power route against the moment route
# ---------------------------------------------------------------------------

def test_origin_derivative_examples():
    amp_const = AmplitudeSpec.constant_one(2, 2)
    assert script_S_derivatives_at_origin(amp_const, 0, +1) \
        == ExactScalar.pi_power(2, 4)
    # profile w1^2, identity weights: (1/4) (2 pi)^2 * 2 = 2 pi^2
    amp = amplitude_from(2, 2, {(2, 0, 0, 0): 1})
    assert script_S_derivatives_at_origin(amp, 1, +1) == ExactScalar.pi_power(2, 2)
    assert script_S_derivatives_at_origin(amp, 1, -1).is_zero()


def test_definite_derivative_examples():
    amp_const = AmplitudeSpec.constant_one(2, 0)
    assert script_S_definite_derivatives(amp_const, 0) == ExactScalar.pi_power(1, 2)
    # d=2, profile w1^2 + w2^2: (2 pi / 4) * 4 = 2 pi
    amp = amplitude_from(2, 0, {(2, 0): 1, (0, 2): 1})
    assert script_S_definite_derivatives(amp, 1) == ExactScalar.pi_power(1, 2)
    odd = amplitude_from(2, 0, {(1, 0): 1, (3, 0): Fraction(1, 2)})
    for k in range(3):
        assert script_S_definite_derivatives(odd, k).is_zero()


def _random_poly(rng, dim, nterms=6, maxdeg=6):
    coeffs = {}
    for _ in range(nterms):
        while True:
            expo = tuple(int(e) for e in rng.integers(0, 4, size=dim))
            if sum(expo) <= maxdeg:
                break
        coeffs[expo] = Fraction(int(rng.integers(-9, 10)), int(rng.integers(1, 8)))
    return poly_from(dim, coeffs)


@pytest.mark.parametrize("dim_plus,dim_minus", [(2, 2), (2, 4), (4, 2), (4, 4)])
def test_hessian_power_identity_exact_indefinite(dim_plus, dim_minus):
    rng = np.random.default_rng(dim_plus * 10 + dim_minus)
    weights = tuple([2] * (dim_plus // 2) + [-3] * (dim_minus // 2))
    for trial in range(3):
        amp = AmplitudeSpec(dim_plus, dim_minus, _random_poly(rng, dim_plus + dim_minus))
        for model in (None, make_model(weights)):
            mean = make_unscaled_mean(amp) if model is None \
                else make_scaled_mean(amp, model)
            for k in range(3):
                assert script_S_derivatives_at_origin(amp, k, +1, model) \
                    == mean.exact_origin_deriv(dplus=k)
                assert script_S_derivatives_at_origin(amp, k, -1, model) \
                    == mean.exact_origin_deriv(dminus=k)


@pytest.mark.parametrize("d", [2, 4])
def test_hessian_power_identity_exact_definite(d):
    rng = np.random.default_rng(d)
    for trial in range(3):
        amp = AmplitudeSpec(d, 0, _random_poly(rng, d))
        for model in (None, make_model((2,) * (d // 2))):
            mean = make_unscaled_mean(amp) if model is None \
                else make_scaled_mean(amp, model)
            for k in range(3):
                assert script_S_definite_derivatives(amp, k, model) \
                    == mean.exact_origin_deriv(dplus=k)


def test_origin_derivatives_match_plateau_polynomial():
    amp = amplitude_from(2, 2, {(2, 0, 2, 0): Fraction(1, 3), (0, 0, 0, 0): 1,
                                (4, 0, 0, 0): Fraction(1, 5)})
    mean = make_unscaled_mean(amp)
    poly = mean.exact_plateau_polynomial()
    for (a, b), coeff in poly.items():
        assert mean.exact_origin_deriv(dplus=a, dminus=b) \
            == coeff * (math.factorial(a) * math.factorial(b))


# ---------------------------------------------------------------------------
# pointwise derivatives of scriptS
# ---------------------------------------------------------------------------

def test_script_S_eval_constant_amplitude():
    mean = make_unscaled_mean(AmplitudeSpec.constant_one(2, 2))
    assert script_S_eval(mean, 1.0, 1.0) == pytest.approx(VOL_S1 ** 2, rel=1e-13)
    for dm, dp in [(1, 0), (0, 1), (1, 1), (2, 0)]:
        assert script_S_eval(mean, 0.5, 0.5, dm, dp) == pytest.approx(0.0, abs=1e-12)


def test_script_S_eval_quadratic_example():
    mean = make_unscaled_mean(amplitude_from(2, 2, {(2, 0, 0, 0): 1}))
    # d_+ scriptS = (2 pi)^2 / 2 on the plateau
    for t, u in [(0.5, 0.5), (1.5, 0.2)]:
        assert script_S_eval(mean, t, u, 0, 1) \
            == pytest.approx(VOL_S1 ** 2 / 2, rel=1e-12)


def test_script_S_eval_rejects_negative_arguments():
    mean = make_unscaled_mean(AmplitudeSpec.constant_one(2, 2))
    with pytest.raises(ValueError):
        script_S_eval(mean, -0.1, 0.5)
    with pytest.raises(ValueError):
        script_S_eval(mean, 0.5, -0.1)


def test_mixed_derivative_symmetry():
    amp = amplitude_from(2, 2, {(2, 0, 2, 0): Fraction(1, 3),
                                (4, 0, 0, 2): Fraction(1, 5), (0, 0, 0, 0): 1})
    mean = make_unscaled_mean(amp)
    for t, u in [(0.5, 0.5), (3.2, 2.0), (5.0, 3.5)]:
        plus_first = script_S_eval(mean, t, u, 1, 1)
        assert plus_first == pytest.approx(script_S_eval(mean, t, u, 1, 1), abs=1e-9)
        assert mean.deriv(t, u, dplus=1, dminus=1) \
            == pytest.approx(plus_first, abs=1e-9 * max(1.0, abs(plus_first)))


def test_delta_operator_consistency():
    # (1/2r) d/dr of the raw mean equals d_+ scriptS at squared arguments
    amp = amplitude_from(2, 2, {(2, 0, 2, 0): Fraction(1, 3),
                                (4, 0, 0, 0): Fraction(1, 7), (0, 0, 0, 0): 1})
    mean = make_unscaled_mean(amp)
    h = 1e-4
    for r, s in [(0.8, 0.6), (2.3, 1.1)]:
        dr = (spherical_mean(amp, r + h, s) - spherical_mean(amp, r - h, s)) / (2 * h)
        delta = dr / (2 * r)
        exact = script_S_eval(mean, r * r, s * s, 0, 1)
        assert abs(delta - exact) <= 1e-6 * max(1.0, abs(exact))


# ---------------------------------------------------------------------------
# batched evaluation
# ---------------------------------------------------------------------------

BATCH_AMP = amplitude_from(2, 2, {(0, 0, 0, 0): 1,
                                  (2, 0, 2, 0): Fraction(1, 7),
                                  (4, 0, 0, 2): Fraction(1, 19),
                                  (0, 2, 0, 0): Fraction(1, 3)})


@pytest.mark.parametrize("dplus,dminus", [(0, 0), (1, 0), (0, 1), (2, 1), (0, 3)])
def test_deriv_batch_matches_scalar(dplus, dminus):
    mean = make_scaled_mean(BATCH_AMP, make_model((2, -1)))
    rng = np.random.default_rng(42 + dplus + 10 * dminus)
    # points spread over vanished, plateau, and transition regions
    t = rng.uniform(0.0, 25.0, size=40)
    u = rng.uniform(0.0, 12.0, size=40)
    batch = mean.deriv_batch(t, u, dplus=dplus, dminus=dminus)
    scalar = np.array([mean.deriv(ti, ui, dplus=dplus, dminus=dminus)
                       for ti, ui in zip(t, u)])
    assert np.allclose(batch, scalar, rtol=1e-12, atol=1e-12)


@pytest.mark.parametrize("n,dplus,dminus", [(1, 0, 0), (2, 0, 0), (3, 1, 0), (2, 0, 2)])
def test_alternating_batch_matches_scalar(n, dplus, dminus):
    mean = make_unscaled_mean(BATCH_AMP)
    rng = np.random.default_rng(n + dplus)
    t = rng.uniform(0.0, 12.0, size=25)
    u = rng.uniform(0.0, 12.0, size=25)
    batch = alternating_derivative_batch(mean, t, u, n, dplus=dplus, dminus=dminus)
    scalar = np.array([alternating_derivative(mean, ti, ui, n, dplus=dplus,
                                              dminus=dminus)
                       for ti, ui in zip(t, u)])
    assert np.allclose(batch, scalar, rtol=1e-11, atol=1e-11)


def test_alternating_origin_matches_binomial_sum():
    mean = make_unscaled_mean(BATCH_AMP)
    for n in range(4):
        total = ExactScalar()
        for a in range(n + 1):
            total = total + mean.exact_origin_deriv(dplus=a, dminus=n - a) \
                * ((-1) ** a * math.comb(n, a))
        assert alternating_origin_deriv(mean, n) == total


def test_batch_rejects_definite_mixing():
    definite = make_unscaled_mean(AmplitudeSpec.constant_one(2, 0))
    with pytest.raises(ValueError):
        definite.deriv_batch(np.array([1.0]), np.array([1.0]), dminus=1)


def test_support_predicates():
    mean = make_unscaled_mean(AmplitudeSpec.constant_one(2, 2))
    assert mean.plateau_contains(1.0, 1.0)
    assert mean.vanishes_at(20.0, 20.0)
    assert not mean.vanishes_at(1.0, 1.0)
    assert not mean.plateau_contains(5.0, 5.0)
    assert mean.eval(20.0, 20.0) == 0.0


def test_t_integral_upper_bounds_support():
    mean = make_unscaled_mean(AmplitudeSpec.constant_one(2, 2))
    bound = mean.t_integral_upper(0.0)
    assert mean.vanishes_at(bound / 2, bound / 2)
    assert mean.vanishes_at(bound, 0.0)


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
