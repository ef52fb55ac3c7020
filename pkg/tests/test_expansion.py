"""Closed-form expansion: leading term, singular weights, one-sided limits."""

import math
from fractions import Fraction

import numpy as np
import pytest

from helpers import amplitude_from, gaussian_sigma
from wittenlocal import AmplitudeSpec, ExactScalar, make_model
from wittenlocal.bump import PlateauBump
from wittenlocal.expansion import expand, one_sided_limits
from wittenlocal.quadric import QuadricSlice, hypersurface_integral
from wittenlocal.schwartz import SchwartzSpec, sigma_eval

GAUSS = gaussian_sigma(1.0)
SKEW = SchwartzSpec((Fraction(1), Fraction(1, 2)), 1.0)
AMP22 = amplitude_from(2, 2, {(0, 0, 0, 0): 1, (2, 0, 0, 0): Fraction(1, 3)})


def test_epsilon_prefactor_and_bookkeeping():
    res = expand(make_model((1, -2)), AMP22, GAUSS, 0.3, 2)
    assert res.epsilon_prefactor_order == 1
    assert res.M == 2
    assert res.zeta_F == 0.3
    assert [e.j for e in res.coefficients] == [0, 1, 2]
    with pytest.raises(ValueError):
        res.coefficient(3)


@pytest.mark.parametrize("zeta_F", [0.3, -0.45, 1.1])
def test_leading_term_is_slice_integral(zeta_F):
    # A_0 = 2 pi sigma(0) times the quadric-slice integral of the amplitude
    model = make_model((1, -2))
    res = expand(model, AMP22, GAUSS, zeta_F, 0)
    predicted = (2 * math.pi * sigma_eval(GAUSS, 0.0)
                 * hypersurface_integral(QuadricSlice(model, zeta_F), AMP22))
    assert res.coefficient(0).value == pytest.approx(predicted, rel=1e-10)
    assert res.leading_order == 1


def test_partial_sum_assembles_prefactor():
    res = expand(make_model((1, -2)), AMP22, GAUSS, 0.3, 2)
    a = res.coefficient_values()
    eps = 0.01
    expected = eps * (a[0] + eps * a[1] + eps ** 2 * a[2])
    assert res.partial_sum(eps) == pytest.approx(expected, rel=1e-14)


def test_no_singular_terms_off_the_singular_value():
    res = expand(make_model((1, -2)), AMP22, GAUSS, 0.3, 3)
    assert all(e.singular_part == () for e in res.coefficients)


def test_no_singular_terms_below_threshold_order():
    # brackets cannot enter before j = d/2 - 1
    res = expand(make_model((1, 1, -2)), AmplitudeSpec.constant_one(4, 2),
                 GAUSS, 0.0, 2)
    assert res.coefficient(0).singular_part == ()
    assert res.coefficient(1).singular_part == ()
    assert res.coefficient(2).singular_part != ()


def test_moment_shift_lives_upstream():
    # the expansion works in standardized coordinates: a J_F-carrying model
    # expands identically, and the shift is applied by model_parameters
    shifted = make_model((1, -2), J_F=1.5)
    plain = make_model((1, -2))
    res_s = expand(shifted, AMP22, GAUSS, 0.0, 1)
    res_p = expand(plain, AMP22, GAUSS, 0.0, 1)
    assert res_s.coefficient_values() == res_p.coefficient_values()
    assert res_s.coefficient(1).singular_part != ()
    assert shifted.model_parameters(1.5, 0.01) == (0.0, 0.02)


# ---------------------------------------------------------------------------
# singular bracket weights (exact)
# ---------------------------------------------------------------------------

WEIGHT_TABLE = [
    ((1, -1), "bracket_plus", {(3, 1): 4}),
    ((1, -1), "bracket_minus", {(3, 1): -4}),
    ((1, -2), "bracket_plus", {(3, 1): 2}),
    ((1, -2), "bracket_minus", {(3, 1): -2}),
    ((1, 1, -2), "bracket_plus", {(4, 0): -1}),
    ((1, 1, -2), "bracket_minus", {(4, 0): 3}),
    ((1, 2), "bracket_minus", {(3, 1): 4}),
    ((-1, -2), "bracket_plus", {(3, 1): -4}),
    ((1, 1, 1), "bracket_minus", {(4, 0): -8}),
    ((-1, -1, -1), "bracket_plus", {(4, 0): -8}),
    ((1,), "bracket_minus", {(2, 0): 4}),
    ((-1,), "bracket_plus", {(2, 0): 4}),
]


@pytest.mark.parametrize("weights,channel,terms", WEIGHT_TABLE)
def test_singular_weight_table(weights, channel, terms):
    model = make_model(weights)
    n_plus = 2 * sum(1 for w in weights if w > 0)
    amp = AmplitudeSpec.constant_one(n_plus, 2 * len(weights) - n_plus)
    j_F = len(weights) - 1
    res = expand(model, amp, GAUSS, 0.0, max(j_F, 1))
    assert res.coefficient(j_F).bracket_weight_exact(channel) == ExactScalar(terms)


def test_definite_channel_matches_compression_side():
    # positive definite compresses onto the minus bracket, negative definite
    # onto the plus bracket
    res_pos = expand(make_model((1, 2)), AmplitudeSpec.constant_one(4, 0),
                     GAUSS, 0.0, 1)
    assert res_pos.coefficient(1).bracket_weight("bracket_plus") == 0
    res_neg = expand(make_model((-1, -2)), AmplitudeSpec.constant_one(0, 4),
                     GAUSS, 0.0, 1)
    assert res_neg.coefficient(1).bracket_weight("bracket_minus") == 0


# ---------------------------------------------------------------------------
# definite models
# ---------------------------------------------------------------------------

def test_wrong_sign_definite_vanishes():
    fd = AmplitudeSpec.constant_one(4, 0)
    res = expand(make_model((1, 2)), fd, GAUSS, -1.0, 2)
    assert res.leading_order is None
    assert all(v == 0 for v in res.coefficient_values())
    res_neg = expand(make_model((-1, -2)), AmplitudeSpec.constant_one(0, 4),
                     GAUSS, 0.5, 2)
    assert res_neg.leading_order is None


def test_definite_leading_order_at_singular_value():
    fd = AmplitudeSpec.constant_one(4, 0)
    res = expand(make_model((1, 2)), fd, GAUSS, 0.0, 2)
    assert res.leading_order == 2  # d/2
    assert res.coefficient(0).value == 0
    assert res.coefficient(1).value != 0


def test_definite_leading_term_scaling_laws():
    # on the bump plateau the leading coefficient for unit weights is exactly
    # linear in zeta, follows the bump profile, and halves under (1,1)->(2,2)
    # with the matching level-set reparameterization
    fd = AmplitudeSpec.constant_one(4, 0)
    m11, m22 = make_model((1, 1)), make_model((2, 2))

    def a0(model, zeta):
        return expand(model, fd, GAUSS, zeta, 0).coefficient(0).value

    base = a0(m11, 0.5) / 0.5
    bump = PlateauBump(2.0, 3.0)
    for zeta in [0.3, 1.0, 2.2, 2.75, 3.3, 4.6]:
        assert a0(m11, zeta) == pytest.approx(base * zeta * bump.value(2 * zeta),
                                              rel=1e-8, abs=1e-12)
    assert a0(m22, 0.25) == pytest.approx(a0(m11, 0.125) / 2, rel=1e-10)


# ---------------------------------------------------------------------------
# one-sided limits and the jump
# ---------------------------------------------------------------------------

def test_regular_coefficient_is_continuous():
    model = make_model((1, -2))
    lim_plus = one_sided_limits(model, AMP22, SKEW, 0, +1)
    lim_minus = one_sided_limits(model, AMP22, SKEW, 0, -1)
    assert lim_plus == pytest.approx(lim_minus, rel=1e-12)
    for zeta in [1e-3, -1e-3]:
        near = expand(model, AMP22, SKEW, zeta, 0).coefficient(0).value
        assert near == pytest.approx(lim_plus, rel=1e-3)


def test_one_sided_limits_match_extraction():
    model = make_model((1, -2))
    for side in (+1, -1):
        limit = one_sided_limits(model, AMP22, SKEW, 1, side)
        prev = None
        for k in [6, 8, 10]:
            a1 = expand(model, AMP22, SKEW, side * 2.0 ** -k, 1).coefficient(1).value
            err = abs(a1 - limit)
            if prev is not None:
                assert err < prev * 0.7
            prev = err
        assert err <= 0.01 * max(1.0, abs(limit))


def test_jump_requires_odd_spectral_content():
    model = make_model((1, -2))
    even_jump = (one_sided_limits(model, AMP22, GAUSS, 1, +1)
                 - one_sided_limits(model, AMP22, GAUSS, 1, -1))
    assert even_jump == pytest.approx(0.0, abs=1e-12)
    skew_jump = (one_sided_limits(model, AMP22, SKEW, 1, +1)
                 - one_sided_limits(model, AMP22, SKEW, 1, -1))
    assert abs(skew_jump) > 1.0


def test_csv_round_trip_format():
    res = expand(make_model((1, -2)), AMP22, GAUSS, 0.0, 2)
    lines = res.to_csv().strip().split("\n")
    assert lines[0] == "j,functional,real,imag"
    rows = [line.split(",") for line in lines[1:]]
    assert all(len(r) == 4 for r in rows)
    total = {}
    for j_str, functional, re_str, im_str in rows:
        total.setdefault(int(j_str), []).append(functional)
        complex(float(re_str), float(im_str))  # parses
    assert sorted(total) == [0, 1, 2]
    assert total[0] == ["sigma_deriv"]
    assert "bracket_plus" in total[1] and "bracket_minus" in total[1]


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
