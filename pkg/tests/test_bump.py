"""Plateau cutoff in the squared radius: values, smooth step, derivatives."""

import numpy as np
import pytest

from wittenlocal.bump import PlateauBump, smooth_step, smooth_step_quad


def test_plateau_and_support():
    pb = PlateauBump(2.0, 3.0)
    assert (pb.x0, pb.x1) == (4.0, 9.0)
    assert pb.value(0.0) == 1.0
    assert pb.value(4.0) == 1.0
    assert pb.value(9.0) == 0.0
    assert pb.value(12.0) == 0.0
    assert 0.0 < pb.value(6.0) < 1.0


def test_transition_midpoint():
    pb = PlateauBump(2.0, 3.0)
    assert pb.value(6.5) == pytest.approx(0.5, abs=1e-12)


def test_step_symmetry():
    y = np.linspace(0.0, 1.0, 101)
    vals = smooth_step(y)
    assert vals[0] == 0.0
    assert vals[-1] == 1.0
    assert np.all(np.diff(vals) >= -1e-13)
    assert np.allclose(vals + vals[::-1], 1.0, atol=1e-12)


def test_step_against_quadrature():
    # the array fast path must agree with the direct quadrature definition
    for y in np.linspace(0.0, 1.0, 41):
        assert smooth_step(np.array([y]))[0] == pytest.approx(
            smooth_step_quad(float(y)), abs=1e-10)


def test_scalar_and_array_paths_agree():
    y = np.linspace(0.05, 0.95, 37)
    one_by_one = np.array([float(smooth_step(np.array([v]))) for v in y])
    batched = smooth_step(y)
    assert np.allclose(one_by_one, batched, atol=1e-12)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_derivative_matches_finite_differences(k):
    import math

    pb = PlateauBump(2.0, 3.0)
    xs = np.array([4.5, 5.5, 6.5, 7.5, 8.5])
    h = 1e-3
    offsets = np.arange(-4, 5)
    nodes = xs[:, None] + h * offsets[None, :]
    vals = pb.value(nodes)
    # k-th derivative from a local degree-8 polynomial fit on the 9-point stencil
    deriv = np.array([
        np.polynomial.polynomial.polyfit(offsets * h, vals[row], 8)[k]
        * math.factorial(k) for row in range(len(xs))])
    exact = pb.derivative(xs, k)
    assert np.allclose(deriv, exact, rtol=1e-6, atol=1e-8)


def test_derivatives_upto_consistency():
    pb = PlateauBump(2.0, 3.0)
    xs = np.linspace(3.0, 10.0, 23)
    stacked = pb.derivatives_upto(xs, 4)
    assert stacked.shape == (5, 23)
    assert np.allclose(stacked[0], pb.value(xs), atol=0)
    for k in range(1, 5):
        assert np.allclose(stacked[k], pb.derivative(xs, k), atol=0)


def test_derivatives_vanish_off_transition():
    pb = PlateauBump(2.0, 3.0)
    xs = np.array([0.0, 2.0, 3.9, 9.1, 25.0])
    for k in range(1, 5):
        assert np.all(pb.derivative(xs, k) == 0.0)


def test_multidimensional_input_shape():
    pb = PlateauBump(2.0, 3.0)
    grid = np.linspace(3.5, 9.5, 12).reshape(3, 4)
    out = pb.derivatives_upto(grid, 2)
    assert out.shape == (3, 3, 4)
    assert np.allclose(out[1], pb.derivative(grid, 1), atol=0)


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
