"""Exact combinatorial coefficient families for the expansion engine.

Every coefficient is a single term ``rational * pi^a * i^b`` and is kept in
exact arithmetic (:class:`~wittenlocal.exactscalar.ExactScalar`); no floating
point enters this module.  The families:

* ``c_l`` — signed binomial sums attached to the two half-line factors,
* ``C_{N,m,p,q}`` — boundary-term constants of the half-line kernel
  derivatives, generated by a six-case recursion with closed-form anchors,
* ``c_{j,k,l}`` — regular-term coefficients of the expansion,
* ``c^pm_{j,0,p,q}`` — singular-term coefficients at the critical value,
* ``c^def_{j,k}`` — their analogue for definite models,
* ``N^pm`` — the integer corner counts entering the leading jump constants.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .exactscalar import ExactScalar, minus_i_power, i_power
from .model import LocalModel
from .spheres import sphere_volume_exact


# ---------------------------------------------------------------------------
# c_l: signed binomial sums
# ---------------------------------------------------------------------------

def c_l(L_plus: int, L_minus: int, l: int) -> ExactScalar:
    """Sum of (-1)^{l+} C(L+-1, l+) C(L--1, l-) over l+ + l- = l.

    Out-of-range ``l`` gives 0; ``c_0 = 1`` always.
    """
    if L_plus < 1 or L_minus < 1:
        raise ValueError("both half-line multiplicities must be positive")
    total = 0
    for lp in range(0, min(l, L_plus - 1) + 1):
        lm = l - lp
        if lm < 0 or lm > L_minus - 1:
            continue
        total += (-1) ** lp * math.comb(L_plus - 1, lp) * math.comb(L_minus - 1, lm)
    return ExactScalar.from_rational(total)


def _c_l_int(L_plus: int, L_minus: int, l: int) -> Fraction:
    return c_l(L_plus, L_minus, l).rational_part()


# ---------------------------------------------------------------------------
# C_{N,m,p,q}: boundary constants of half-line kernel derivatives
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _C_table(N: int, m_max: int) -> dict[tuple[int, int, int], Fraction]:
    """All C_{N,m,p,q} for 1 <= m <= m_max as a dict keyed by (m, p, q).

    Missing keys are zero.  Seed: the first derivative has the single
    boundary term with unit constant, C_{N,1,0,0} = 1; level m+1 follows
    from level m by the six-case recursion.
    """
    table: dict[tuple[int, int, int], Fraction] = {}
    if m_max >= 1:
        table[(1, 0, 0)] = Fraction(1)
    for m in range(1, m_max):
        prev = lambda p, q: table.get((m, p, q), Fraction(0))
        for p in range(0, m + 1):
            for q in range(0, m - p + 1):
                if p == 0 and q == m:
                    val = Fraction(1, 2**m)
                elif p + q == m and p >= 1:
                    val = prev(p - 1, q)
                elif m - 1 >= p + q >= max(0, m - N) and p >= 1:
                    val = prev(p - 1, q) - (N + 1 - m + p + q) * prev(p, q)
                elif m - 1 >= q >= max(0, m - N) and p == 0:
                    val = -(N + 1 - m + q) * prev(0, q)
                elif 1 <= p + q <= max(0, m - N) - 1 and p >= 1:
                    val = prev(p - 1, q)
                else:
                    val = Fraction(0)
                if val:
                    table[(m + 1, p, q)] = val
    return table


def C_recursion(N: int, m_max: int) -> dict[tuple[int, int, int], Fraction]:
    """Table of all C_{N,m,p,q}, keys (m, p, q), for 1 <= m <= m_max."""
    if N < 0 or m_max < 0:
        raise ValueError("N and m_max must be nonnegative")
    return dict(_C_table(N, m_max))


def C_Nmpq(N: int, m: int, p: int, q: int) -> Fraction:
    """Single boundary constant C_{N,m,p,q} (zero outside the table)."""
    if m < 1 or p < 0 or q < 0 or p + q > m - 1:
        return Fraction(0)
    return _C_table(N, m).get((m, p, q), Fraction(0))


def C_closed_form(N: int, m: int, p: int, q: int) -> Fraction | None:
    """The four anchor identities; None when no closed form applies."""
    if p + q < max(0, m - 1 - N):
        return Fraction(0)
    if p == m - 1 and q == 0:
        return Fraction(1)
    if m == N + 1 and p == 0 and q == 0:
        return Fraction((-1) ** N * math.factorial(N))
    if p == 0 and q == m - 1:
        return Fraction(1, 2 ** (m - 1))
    return None


# ---------------------------------------------------------------------------
# expansion coefficients
# ---------------------------------------------------------------------------

def c_jkl(L_plus: int, L_minus: int, j: int, k: int, l: int) -> ExactScalar:
    """Regular-term coefficient 2^{-2-L} pi (-i)^j (-1)^k C(l,k) c_l / (2^{j-l+k}(j-l+k)!)."""
    L = L_plus + L_minus - 2
    if not (0 <= k <= l <= min(k + j, L)):
        raise ValueError("need k <= l <= min(k + j, L)")
    cl = _c_l_int(L_plus, L_minus, l)
    rat = (Fraction(1, 2 ** (2 + L)) * (-1) ** k * math.comb(l, k) * cl
           / (2 ** (j - l + k) * math.factorial(j - l + k)))
    return ExactScalar.pi_power(1, rat) * minus_i_power(j)


def c_pm_j0pq(L_plus: int, L_minus: int, sign: int, j: int, p: int, q: int) -> ExactScalar:
    """Singular-term coefficient at the critical value,

        c^pm_{j,0,p,q} = 2^{-2-L} pi (-i)^j sum_l (mp 1)^{L-l+1} c_l C_{L-l,j-l,p,q} / (j-l)!

    for j >= L+1 (mp = -sign).
    """
    if sign not in (+1, -1):
        raise ValueError("sign must be +1 or -1")
    L = L_plus + L_minus - 2
    if j <= L:
        raise ValueError("singular coefficients require j >= L + 1")
    acc = Fraction(0)
    for l in range(0, L + 1):
        cl = _c_l_int(L_plus, L_minus, l)
        if not cl:
            continue
        acc += ((-sign) ** (L - l + 1) * cl * C_Nmpq(L - l, j - l, p, q)
                / math.factorial(j - l))
    rat = Fraction(1, 2 ** (2 + L)) * acc
    return ExactScalar.pi_power(1, rat) * minus_i_power(j)


def c_pm_leading_closed_form(L_plus: int, L_minus: int, sign: int) -> ExactScalar:
    """Closed form of c^pm_{L+1,0,0,0}:

        2^{-2-L} pi (-i)^{L-1} sum_l (pm 1)^{L-l+1} c_l / (L-l+1).
    """
    if sign not in (+1, -1):
        raise ValueError("sign must be +1 or -1")
    L = L_plus + L_minus - 2
    acc = Fraction(0)
    for l in range(0, L + 1):
        acc += Fraction(sign ** (L - l + 1), L - l + 1) * _c_l_int(L_plus, L_minus, l)
    return ExactScalar.pi_power(1, Fraction(1, 2 ** (2 + L)) * acc) * minus_i_power(L - 1)


def c_def_jk(L: int, j: int, k: int) -> ExactScalar:
    """Definite-model coefficient ``pi C(L-1,k) i^j / (j+k+1-L)!`` (L = dim/2)."""
    if L < 1:
        raise ValueError("definite multiplicity L must be positive")
    if not (0 <= k <= L - 1):
        raise ValueError("need 0 <= k <= L - 1")
    if j + k + 1 - L < 0:
        raise ValueError("need j + k + 1 >= L")
    rat = Fraction(math.comb(L - 1, k), math.factorial(j + k + 1 - L))
    return ExactScalar.pi_power(1, rat) * i_power(j)


# ---------------------------------------------------------------------------
# corner counts and leading constants
# ---------------------------------------------------------------------------

def N_pm(n_plus: int, n_minus: int, sign: int) -> int:
    """Corner count N^pm = pm (-1)^{n^-/2-1} sum_{j<=n^mp/2-1} C(d/2-1, j)."""
    _check_blocks(n_plus, n_minus, sign)
    d = n_plus + n_minus
    n_opp = n_minus if sign > 0 else n_plus
    return sign * (-1) ** (n_minus // 2 - 1) * sum(
        math.comb(d // 2 - 1, j) for j in range(0, n_opp // 2)
    )


def N_pm_raw(n_plus: int, n_minus: int, sign: int) -> ExactScalar:
    """Unsimplified corner count: the double signed-binomial sum

        (-1)^{d/2} (d/2-1)! / ((n+/2-1)!(n-/2-1)!)
            * sum_l (pm 1)^{d/2-l-1}/(d/2-l-1) c_l(n+/2, n-/2).
    """
    _check_blocks(n_plus, n_minus, sign)
    d = n_plus + n_minus
    L_plus, L_minus = n_plus // 2, n_minus // 2
    acc = Fraction(0)
    for l in range(0, d // 2 - 1):
        acc += (Fraction(sign ** (d // 2 - l - 1), d // 2 - l - 1)
                * _c_l_int(L_plus, L_minus, l))
    front = Fraction((-1) ** (d // 2) * math.factorial(d // 2 - 1),
                     math.factorial(L_plus - 1) * math.factorial(L_minus - 1))
    return ExactScalar.from_rational(front * acc)


def _check_blocks(n_plus: int, n_minus: int, sign: int) -> None:
    if sign not in (+1, -1):
        raise ValueError("sign must be +1 or -1")
    if n_plus < 2 or n_minus < 2 or n_plus % 2 or n_minus % 2:
        raise ValueError("block dimensions must be even and at least 2")


def universal_constant(model: LocalModel) -> ExactScalar:
    """C_F = (2 pi)^2 (pi i)^{d/2-1} / (Lambda (d/2-1)!)."""
    half = model.dim // 2
    rat = Fraction(4, model.Lambda * math.factorial(half - 1))
    return (ExactScalar.pi_power(2, rat)
            * ExactScalar.pi_power(half - 1) * i_power(half - 1))


def leading_constants(model: LocalModel) -> dict[str, ExactScalar]:
    """Constants of the lowest-order singular operators at the critical value.

    Returns ``{"C_F": ..., "D_def": 2^{d/2-1} C_F}`` for definite models and
    ``{"C_F": ..., "D_plus": N^+ C_F, "D_minus": N^- C_F}`` for indefinite
    ones.
    """
    C_F = universal_constant(model)
    if model.is_definite:
        return {"C_F": C_F, "D_def": C_F * Fraction(2 ** (model.dim // 2 - 1))}
    np_, nm_ = model.n_plus, model.n_minus
    return {
        "C_F": C_F,
        "D_plus": C_F * Fraction(N_pm(np_, nm_, +1)),
        "D_minus": C_F * Fraction(N_pm(np_, nm_, -1)),
    }


def corner_count_from_assembly(n_plus: int, n_minus: int, sign: int) -> ExactScalar:
    """N^pm recovered from the module assembly: the singular weight

        vol(S^{n+-1}) vol(S^{n--1}) 2^{d/2} c^pm_{d/2-1,0,0,0}

    divided by (2 pi)^2 (pi i)^{d/2-1} / (d/2-1)!; must be the integer N^pm.
    """
    _check_blocks(n_plus, n_minus, sign)
    d = n_plus + n_minus
    weight = (sphere_volume_exact(n_plus) * sphere_volume_exact(n_minus)
              * Fraction(2 ** (d // 2))
              * c_pm_j0pq(n_plus // 2, n_minus // 2, sign, d // 2 - 1, 0, 0))
    denom = (ExactScalar.pi_power(2, 4)
             * ExactScalar.pi_power(d // 2 - 1) * i_power(d // 2 - 1)
             * Fraction(1, math.factorial(d // 2 - 1)))
    return weight / denom


# ---------------------------------------------------------------------------
# the Pinelis summation identity
# ---------------------------------------------------------------------------

def pinelis_lhs(p: int, q: int) -> Fraction:
    total = Fraction(0)
    for l in range(0, p + q + 1):
        inner = sum((-1) ** j * math.comb(p, j) * math.comb(q, l - j)
                    for j in range(0, l + 1))
        total += Fraction(inner, p + q - l + 1)
    return total


def pinelis_rhs(p: int, q: int) -> Fraction:
    front = Fraction((-1) ** p * math.factorial(p) * math.factorial(q),
                     math.factorial(p + q + 1))
    return front * sum(math.comb(p + q + 1, j) for j in range(0, q + 1))


def pinelis_identity_check(p: int, q: int) -> bool:
    """Exact check of the signed-binomial summation identity used to
    simplify the corner counts."""
    if p < 0 or q < 0:
        raise ValueError("p, q must be nonnegative")
    return pinelis_lhs(p, q) == pinelis_rhs(p, q)


# ---------------------------------------------------------------------------
# coefficient tables with plain-text serialization
# ---------------------------------------------------------------------------

@dataclass
class CoeffTable:
    """All named coefficients of one model type up to cutoff order M.

    Indefinite tables carry ``c_l``, ``C``, ``c_jkl`` and ``c_pm`` rows;
    definite tables (L_minus = 0) carry ``c_def`` rows.  Each row is a single
    exact term, serialized as ``name i1,i2,... num/den pi_power i_power``.
    """

    L_plus: int
    L_minus: int
    M: int
    entries: dict[tuple[str, tuple[int, ...]], ExactScalar] = field(default_factory=dict)

    @property
    def L(self) -> int:
        if self.L_minus == 0:
            return self.L_plus
        return self.L_plus + self.L_minus - 2

    @classmethod
    def build(cls, L_plus: int, L_minus: int, M: int) -> "CoeffTable":
        table = cls(L_plus, L_minus, M)
        ent = table.entries
        L = table.L
        for l in range(0, L + 1):
            ent[("c_l", (l,))] = c_l(L_plus, L_minus, l)
        for N in range(0, L + 1):
            for (m, p, q), val in C_recursion(N, M + 1).items():
                ent[("C", (N, m, p, q))] = ExactScalar.from_rational(val)
        for j in range(0, M + 1):
            for l in range(0, min(j, L) + 1):
                for k in range(0, l + 1):
                    if l <= min(k + j, L):
                        ent[("c_jkl", (j, k, l))] = c_jkl(L_plus, L_minus, j, k, l)
        for j in range(L + 1, M + 1):
            for p in range(0, j - L):
                q = j - L - 1 - p
                for sign in (+1, -1):
                    ent[("c_pm", (sign, j, p, q))] = c_pm_j0pq(L_plus, L_minus, sign, j, p, q)
        return table

    @classmethod
    def build_definite(cls, L: int, M: int) -> "CoeffTable":
        table = cls(L, 0, M)
        for j in range(0, M + 1):
            for k in range(0, L):
                if j + k + 1 - L >= 0:
                    table.entries[("c_def", (j, k))] = c_def_jk(L, j, k)
        return table

    def to_text(self) -> str:
        lines = [f"table {self.L_plus} {self.L_minus} {self.M}"]
        for (name, idx), value in sorted(self.entries.items()):
            q, a, b = value.single_term()
            idx_s = ",".join(str(i) for i in idx)
            lines.append(f"{name} {idx_s} {q.numerator}/{q.denominator} {a} {b}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "CoeffTable":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        head = lines[0].split()
        if head[0] != "table":
            raise ValueError("missing table header line")
        table = cls(int(head[1]), int(head[2]), int(head[3]))
        for ln in lines[1:]:
            name, idx_s, rat, a, b = ln.split()
            idx = tuple(int(t) for t in idx_s.split(",")) if idx_s else ()
            table.entries[(name, idx)] = ExactScalar.unit(Fraction(rat), pi=int(a), i=int(b))
        return table
