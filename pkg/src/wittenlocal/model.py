"""The local normal form of a Hamiltonian circle action near a fixed component.

A fixed-point component contributes a model on R^d, d even, where the momentum
map is ``J(w) = J_F + (1/2) <Q w, w>`` with ``Q = diag`` of the integer weights
(each weight acting on a coordinate pair).  Weights are ordered positive-first.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence


@dataclass(frozen=True)
class LocalModel:
    """Weights of the circle action on the normal space, plus the momentum
    value at the fixed component.

    Attributes:
        weights: nonzero integers, positive ones first; weight k acts on the
            coordinate pair (w_{2k}, w_{2k+1}).
        J_F: momentum value at the fixed component.
    """

    weights: tuple[int, ...]
    J_F: float = 0.0

    def __post_init__(self):
        w = tuple(int(x) for x in self.weights)
        if not w:
            raise ValueError("at least one weight is required")
        if any(x == 0 for x in w):
            raise ValueError("weights must be nonzero")
        first_negative = next((i for i, x in enumerate(w) if x < 0), len(w))
        if any(x > 0 for x in w[first_negative:]):
            raise ValueError("weights must be ordered positive-first")
        object.__setattr__(self, "weights", w)

    # -- block structure -----------------------------------------------------

    @property
    def n_plus(self) -> int:
        return 2 * sum(1 for x in self.weights if x > 0)

    @property
    def n_minus(self) -> int:
        return 2 * sum(1 for x in self.weights if x < 0)

    @property
    def dim(self) -> int:
        return 2 * len(self.weights)

    @property
    def codim(self) -> int:
        return self.dim

    @property
    def is_definite(self) -> bool:
        return self.n_plus == 0 or self.n_minus == 0

    @property
    def sign(self) -> int:
        """s_F for definite models (+1 or -1); raises otherwise."""
        if not self.is_definite:
            raise ValueError("sign is defined for definite models only")
        return 1 if self.n_minus == 0 else -1

    @property
    def Lambda(self) -> int:
        """Product of |weights|."""
        return math.prod(abs(x) for x in self.weights)

    @property
    def mu(self) -> tuple[int, ...]:
        """|weights| of the positive block."""
        return tuple(x for x in self.weights if x > 0)

    @property
    def nu(self) -> tuple[int, ...]:
        """|weights| of the negative block."""
        return tuple(-x for x in self.weights if x < 0)

    @property
    def abs_weight_per_coordinate(self) -> tuple[int, ...]:
        """|weight of the pair containing coordinate i|, for i = 0..dim-1."""
        out: list[int] = []
        for x in self.weights:
            out.extend([abs(x), abs(x)])
        return tuple(out)

    def model_parameters(self, zeta: float, epsilon: float) -> tuple[float, float]:
        """Map ambient (zeta, epsilon) to model-level (zeta_tilde, epsilon_tilde).

        The localized integral reduces to the model integral evaluated at
        ``zeta_tilde = 2 (zeta - J_F)`` and ``epsilon_tilde = 2 epsilon``, with
        an overall factor 1/Lambda.
        """
        return 2.0 * (zeta - self.J_F), 2.0 * epsilon


def make_model(weights: Sequence[int], J_F: float = 0.0) -> LocalModel:
    return LocalModel(tuple(weights), float(J_F))
