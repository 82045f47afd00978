"""Pointwise preorder on tail dependence functions.

L1 precedes L2 when L1 <= L2 everywhere on the simplex.  The order is partial:
functions can cross, in which case ``compare`` returns witnesses for both
directions.  It is a preorder on the grid representation, not an order, since
two distinct grids can agree within tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import ParameterError
from .tdf import TailDependenceFunction

DEFAULT_ORDER_TOL = 1e-9


class OrderRelation(Enum):
    EQUAL = "equal"
    LESS = "less"
    GREATER = "greater"
    INCOMPARABLE = "incomparable"


@dataclass(frozen=True)
class OrderResult:
    """Outcome of a pointwise comparison.

    A witness is a grid point where one function exceeds the other by more
    than the tolerance, located at the largest excess.  Strict one-sided
    relations carry the witness for the dominating side; INCOMPARABLE
    results carry both.
    """

    relation: OrderRelation
    witness_first_exceeds: float | None = None
    witness_second_exceeds: float | None = None

    def to_dict(self) -> dict:
        return {
            "relation": self.relation.value,
            "witness_first_exceeds": self.witness_first_exceeds,
            "witness_second_exceeds": self.witness_second_exceeds,
        }


def compare(
    first: TailDependenceFunction,
    second: TailDependenceFunction,
    tol: float = DEFAULT_ORDER_TOL,
) -> OrderResult:
    """Classify the pointwise relation between two functions.

    Mixed grid sizes are handled by resampling the coarser function onto the
    finer grid (piecewise-linear functions lose nothing under refinement when
    the grids nest; otherwise the resampling is the documented convention).
    """
    if tol < 0.0 or not np.isfinite(tol):
        raise ParameterError("tolerance must be finite and >= 0")
    m = max(first.grid_size, second.grid_size)
    s = np.arange(m + 1) / m
    v1 = first.values if first.grid_size == m else first.eval(s)
    v2 = second.values if second.grid_size == m else second.eval(s)

    diff = v1 - v2
    first_over = float(np.max(diff))
    second_over = float(np.max(-diff))

    at_first = float(s[int(np.argmax(diff))])
    at_second = float(s[int(np.argmax(-diff))])

    if first_over <= tol and second_over <= tol:
        return OrderResult(OrderRelation.EQUAL)
    if first_over <= tol:
        return OrderResult(OrderRelation.LESS, witness_second_exceeds=at_second)
    if second_over <= tol:
        return OrderResult(OrderRelation.GREATER, witness_first_exceeds=at_first)
    return OrderResult(
        OrderRelation.INCOMPARABLE,
        witness_first_exceeds=at_first,
        witness_second_exceeds=at_second,
    )
