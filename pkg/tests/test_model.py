"""Local model bookkeeping: weights, inertia split, rescaling constants."""

import pytest

from wittenlocal import make_model


def test_weight_bookkeeping():
    m = make_model((2, -3))
    assert m.n_plus == 2
    assert m.n_minus == 2
    assert m.dim == 4
    assert m.codim == 4
    assert not m.is_definite
    assert m.Lambda == 6
    assert m.mu == (2,)
    assert m.nu == (3,)
    assert m.abs_weight_per_coordinate == (2, 2, 3, 3)


def test_model_parameters_rescaling():
    m = make_model((2, -3))
    zt, et = m.model_parameters(0.3, 0.01)
    assert zt == pytest.approx(0.6)
    assert et == pytest.approx(0.02)


def test_model_parameters_shift_by_critical_value():
    m = make_model((2, -3), J_F=1.5)
    zt, et = m.model_parameters(2.0, 0.01)
    assert zt == pytest.approx(2 * (2.0 - 1.5))
    assert et == pytest.approx(0.02)


def test_definite_models():
    pos = make_model((5,))
    assert pos.is_definite
    assert pos.sign == +1
    assert (pos.n_plus, pos.n_minus) == (2, 0)
    assert pos.mu == (5,)
    assert pos.nu == ()
    assert pos.abs_weight_per_coordinate == (5, 5)

    neg = make_model((-2, -3))
    assert neg.is_definite
    assert neg.sign == -1
    assert (neg.n_plus, neg.n_minus) == (0, 4)
    assert neg.Lambda == 6


def test_sign_requires_definite():
    with pytest.raises(ValueError):
        make_model((1, -1)).sign


def test_validation():
    with pytest.raises(ValueError):
        make_model(())
    with pytest.raises(ValueError):
        make_model((0,))
    with pytest.raises(ValueError):
        make_model((1, 0))


def test_each_weight_occupies_a_coordinate_pair():
    m = make_model((1, 1, -2))
    assert m.dim == 6
    assert (m.n_plus, m.n_minus) == (4, 2)
    assert m.Lambda == 2
    assert m.abs_weight_per_coordinate == (1, 1, 1, 1, 2, 2)


if __name__ == "__main__":
    import pytest as _pytest

    _pytest.main([__file__, "-v"])
