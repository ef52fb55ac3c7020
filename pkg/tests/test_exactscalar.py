"""Exact scalars of the shape q * pi^a * i^b: construction, ring laws, conversion."""

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wittenlocal import ExactScalar
from wittenlocal.exactscalar import i_power, minus_i_power

fractions = st.builds(Fraction, st.integers(-9, 9), st.integers(1, 9))
scalars = st.builds(
    ExactScalar,
    st.dictionaries(st.tuples(st.integers(0, 3), st.integers(0, 1)),
                    fractions, max_size=4),
)


def test_from_rational():
    x = ExactScalar.from_rational(Fraction(5, 3))
    assert dict(x.terms) == {(0, 0): Fraction(5, 3)}
    assert x.rational_part() == Fraction(5, 3)
    assert x.to_complex() == pytest.approx(5 / 3)


def test_pi_power():
    x = ExactScalar.pi_power(2, Fraction(1, 2))
    assert dict(x.terms) == {(2, 0): Fraction(1, 2)}
    assert x.to_complex() == pytest.approx(math.pi ** 2 / 2)
    assert x.rational_part() == 0


def test_unit_folds_i_squared():
    assert ExactScalar.unit(Fraction(1), 0, 2) == ExactScalar.from_rational(-1)
    assert ExactScalar.unit(Fraction(1), 0, 3) == -i_power(1)
    x = ExactScalar.unit(Fraction(3, 4), 2, 1)
    assert x.single_term() == (Fraction(3, 4), 2, 1)
    assert x.to_complex() == pytest.approx(0.75 * math.pi ** 2 * 1j)


def test_single_term_rejects_sums():
    x = ExactScalar.from_rational(2) + ExactScalar.pi_power(1, 1)
    assert not x.is_single_term()
    with pytest.raises(ValueError):
        x.single_term()


@pytest.mark.parametrize("n", range(9))
def test_i_power_cycle(n):
    assert i_power(n) == i_power(n % 4)
    assert i_power(n) * i_power(4 - n % 4) == ExactScalar.from_rational(1)
    assert i_power(n).to_complex() == pytest.approx(1j ** n)
    assert minus_i_power(n).to_complex() == pytest.approx((-1j) ** n)


def test_minus_i_is_conjugate():
    for n in range(8):
        assert i_power(n) * minus_i_power(n) == ExactScalar.from_rational(1)


@given(scalars, scalars, scalars)
@settings(max_examples=200)
def test_ring_laws(x, y, z):
    assert (x + y) + z == x + (y + z)
    assert x + y == y + x
    assert x * y == y * x
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z


@given(scalars)
def test_additive_inverse(x):
    assert (x - x).is_zero()
    assert (x + (-x)).is_zero()
    assert x * ExactScalar.from_rational(1) == x
    assert (x * ExactScalar.from_rational(0)).is_zero()


@given(scalars, fractions)
def test_rational_division(x, q):
    if q != 0:
        assert (x / q) * q == x


@given(scalars)
@settings(max_examples=50)
def test_small_powers(x):
    assert x ** 0 == ExactScalar.from_rational(1)
    assert x ** 1 == x
    assert x ** 3 == x * x * x


@given(scalars, scalars)
@settings(max_examples=100)
def test_to_complex_homomorphism(x, y):
    scale = max(abs(x.to_complex()), abs(y.to_complex()), 1.0)
    assert abs((x * y).to_complex() - x.to_complex() * y.to_complex()) \
        <= 1e-12 * scale * scale
    assert abs((x + y).to_complex() - (x.to_complex() + y.to_complex())) \
        <= 1e-12 * scale


@given(scalars, scalars)
def test_hash_consistency(x, y):
    if x == y:
        assert hash(x) == hash(y)
    assert x == x + ExactScalar.from_rational(0)
    assert hash(x) == hash(x + ExactScalar.from_rational(0))


def test_integer_multiplication():
    x = ExactScalar.unit(Fraction(3, 4), 2, 1)
    assert x * 2 == ExactScalar.unit(Fraction(3, 2), 2, 1)


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
