"""Exact complex scalars of the form sum of q * pi**a * i**b with rational q.

Every closed-form constant produced by the coefficient machinery is a finite
sum of terms ``q * pi**a * i**b`` with ``q`` rational, ``a >= 0`` an integer
power of pi and ``b in {0, 1}`` after folding ``i**2 = -1`` into the rational
part.  Keeping these exact (no floats) lets downstream identities be tested
with ``==`` instead of tolerances.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Iterable, Mapping, Tuple, Union

_RationalLike = Union[int, Fraction, Rational]

# Internal representation: mapping (pi_power, i_power) -> Fraction with
# pi_power >= 0 and i_power in {0, 1}; zero coefficients are dropped.
_Key = Tuple[int, int]


def _fold_i_power(q: Fraction, b: int) -> Tuple[Fraction, int]:
    """Reduce ``q * i**b`` to ``q' * i**b'`` with ``b'`` in {0, 1}."""
    b %= 4
    if b == 0:
        return q, 0
    if b == 1:
        return q, 1
    if b == 2:
        return -q, 0
    return -q, 1


class ExactScalar:
    """An exact element of the ring Q[pi, i] (with i**2 = -1).

    Instances are immutable and hashable; arithmetic never leaves the ring.
    Use :meth:`to_complex` only at the final numeric boundary.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[_Key, _RationalLike] | Iterable[tuple[_Key, _RationalLike]] = ()):
        folded: dict[_Key, Fraction] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for (a, b), q in items:
            if a < 0:
                raise ValueError(f"negative pi power: {a}")
            qf, bf = _fold_i_power(Fraction(q), b)
            key = (a, bf)
            qf += folded.get(key, Fraction(0))
            if qf:
                folded[key] = qf
            else:
                folded.pop(key, None)
        object.__setattr__(self, "_terms", folded)

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_rational(cls, q: _RationalLike) -> "ExactScalar":
        return cls({(0, 0): Fraction(q)})

    @classmethod
    def pi_power(cls, a: int, q: _RationalLike = 1) -> "ExactScalar":
        return cls({(a, 0): Fraction(q)})

    @classmethod
    def unit(cls, q: _RationalLike = 1, pi: int = 0, i: int = 0) -> "ExactScalar":
        """The term ``q * pi**pi * i**i`` (i folded modulo 4)."""
        return cls({(pi, i): Fraction(q)})

    # -- inspection --------------------------------------------------------

    @property
    def terms(self) -> dict[_Key, Fraction]:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_single_term(self) -> bool:
        return len(self._terms) <= 1

    def single_term(self) -> tuple[Fraction, int, int]:
        """Return (rational, pi_power, i_power); zero is (0, 0, 0).

        Raises:
            ValueError: if the scalar genuinely mixes distinct (pi, i) keys.
        """
        if not self._terms:
            return Fraction(0), 0, 0
        if len(self._terms) > 1:
            raise ValueError(f"not a single-term scalar: {self!r}")
        (a, b), q = next(iter(self._terms.items()))
        return q, a, b

    def rational_part(self) -> Fraction:
        """The coefficient of pi**0 * i**0."""
        return self._terms.get((0, 0), Fraction(0))

    # -- ring operations ---------------------------------------------------

    def __add__(self, other: "ExactScalar | _RationalLike") -> "ExactScalar":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        merged = dict(self._terms)
        for key, q in other._terms.items():
            s = merged.get(key, Fraction(0)) + q
            if s:
                merged[key] = s
            else:
                merged.pop(key, None)
        return _raw(merged)

    __radd__ = __add__

    def __neg__(self) -> "ExactScalar":
        return _raw({k: -q for k, q in self._terms.items()})

    def __sub__(self, other: "ExactScalar | _RationalLike") -> "ExactScalar":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: "ExactScalar | _RationalLike") -> "ExactScalar":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other: "ExactScalar | _RationalLike") -> "ExactScalar":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out: dict[_Key, Fraction] = {}
        for (a1, b1), q1 in self._terms.items():
            for (a2, b2), q2 in other._terms.items():
                q, b = _fold_i_power(q1 * q2, b1 + b2)
                key = (a1 + a2, b)
                s = out.get(key, Fraction(0)) + q
                if s:
                    out[key] = s
                else:
                    out.pop(key, None)
        return _raw(out)

    __rmul__ = __mul__

    def __truediv__(self, other: _RationalLike) -> "ExactScalar":
        if isinstance(other, ExactScalar):
            q, a, b = other.single_term()
            if q == 0:
                raise ZeroDivisionError("division by exact zero")
            # 1 / (q pi^a i^b) = (1/q) pi^-a i^-b; only legal if every term of
            # self carries at least pi^a so powers stay nonnegative.
            inv_q = 1 / q
            out: dict[_Key, Fraction] = {}
            for (a1, b1), q1 in self._terms.items():
                if a1 < a:
                    raise ValueError("division would produce a negative pi power")
                qq, bb = _fold_i_power(q1 * inv_q, b1 - b)
                out[(a1 - a, bb)] = qq
            return _raw(out)
        if isinstance(other, (int, Rational)):
            q = Fraction(other)
            if q == 0:
                raise ZeroDivisionError
            return _raw({k: v / q for k, v in self._terms.items()})
        return NotImplemented

    def __pow__(self, n: int) -> "ExactScalar":
        if not isinstance(n, int) or n < 0:
            raise ValueError("only nonnegative integer powers are exact")
        out = ONE
        base = self
        for _ in range(n):
            out = out * base
        return out

    # -- comparison / hashing ---------------------------------------------

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Rational)):
            other = ExactScalar.from_rational(other)
        if not isinstance(other, ExactScalar):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    # -- conversion --------------------------------------------------------

    def to_complex(self) -> complex:
        import math

        z = 0j
        for (a, b), q in self._terms.items():
            val = float(q) * math.pi**a
            z += val * (1j if b else 1)
        return z

    def __repr__(self) -> str:
        if not self._terms:
            return "ExactScalar(0)"
        parts = []
        for (a, b) in sorted(self._terms):
            q = self._terms[(a, b)]
            s = str(q)
            if a:
                s += f"*pi^{a}"
            if b:
                s += "*i"
            parts.append(s)
        return "ExactScalar(" + " + ".join(parts) + ")"


def _raw(folded: dict[_Key, Fraction]) -> ExactScalar:
    out = ExactScalar.__new__(ExactScalar)
    object.__setattr__(out, "_terms", folded)
    return out


def _coerce(value: "ExactScalar | _RationalLike"):
    if isinstance(value, ExactScalar):
        return value
    if isinstance(value, (int, Rational)):
        return ExactScalar.from_rational(value)
    return NotImplemented


ZERO = ExactScalar()
ONE = ExactScalar.from_rational(1)
PI = ExactScalar.pi_power(1)
I = ExactScalar.unit(1, pi=0, i=1)


def i_power(n: int) -> ExactScalar:
    """The exact value of i**n (n may be negative)."""
    return ExactScalar.unit(1, pi=0, i=n % 4)


def minus_i_power(n: int) -> ExactScalar:
    """The exact value of (-i)**n."""
    return ExactScalar.unit((-1) ** (n % 2), pi=0, i=n % 4)
