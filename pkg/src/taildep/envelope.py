"""Feasible ranges of measures over the admissible class, given pinned values.

The admissible functions on an m-grid form a polytope: zero endpoints, the
pointwise bounds 0 <= L_i <= min(s_i, 1 - s_i), concavity as second
differences <= 0, and any pinned values as equalities.  Measure ranges over
that polytope are exact linear programs; ``linf_range_given_tdc`` is the
closed form for the sup-measure when the only pin is the midpoint (i.e. the
coefficient is known), and the test suite verifies the two routes against
each other.  Grid ranges inherit a +-2/grid_size resolution, reported on the
result.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InfeasibleError, ParameterError
from .lp import SimplexSolver
from .measures import RAW, scale_factor
from .rng import SplitMix64
from .tdf import DEFAULT_GRID_SIZE, TailDependenceFunction, ValidationReport, from_grid

MAX_TD = "max_td"
AVG_TD = "avg_td"
POINT_EVAL = "point_eval"

PinPair = tuple[float, float]


@dataclass(frozen=True)
class FeasiblePolytope:
    """Constraint system for admissible grid functions with pins applied.

    Rows of ``A x <= b`` are the concavity constraints; bounds carry the
    pointwise constraints, the zero endpoints, and the pins (as equalities).
    """

    grid_size: int
    A: np.ndarray
    b: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    pins: tuple[PinPair, ...]


@dataclass(frozen=True)
class EnvelopeResult:
    """Exact range of one measure over the pinned polytope."""

    measure: str
    normalization: str
    grid_size: int
    pins: tuple[PinPair, ...]
    min_value: float
    max_value: float
    argmin: TailDependenceFunction
    argmax: TailDependenceFunction
    resolution: float

    def to_dict(self) -> dict:
        return {
            "measure": self.measure,
            "normalization": self.normalization,
            "grid_size": self.grid_size,
            "pins": [list(p) for p in self.pins],
            "min": self.min_value,
            "max": self.max_value,
            "resolution": self.resolution,
            "argmin": {"m": self.grid_size, "values": [float(v) for v in self.argmin.values]},
            "argmax": {"m": self.grid_size, "values": [float(v) for v in self.argmax.values]},
        }


def _grid_index(s: float, m: int) -> int:
    idx = s * m
    i = int(round(idx))
    if abs(idx - i) > 1e-9 or not 0 <= i <= m:
        raise ParameterError(f"location {s} is not a grid point for grid_size {m}")
    return i


def _pin_indices(pins, m: int) -> list[tuple[int, float]]:
    out = []
    seen = set()
    for s, value in pins:
        i = _grid_index(s, m)
        bound = min(i, m - i) / m
        if not 0.0 <= value <= bound + 1e-12:
            raise InfeasibleError(
                f"pin ({s}, {value}) violates the admissible bound {bound:.6g}"
            )
        if i in seen:
            raise ParameterError(f"duplicate pin at grid point {s}")
        seen.add(i)
        out.append((i, float(value)))
    return out


def feasible_polytope(pins=(), grid_size: int = DEFAULT_GRID_SIZE) -> FeasiblePolytope:
    """Assemble the constraint system for the admissible class with pins."""
    m = grid_size
    if m < 2:
        raise ParameterError("grid_size must be >= 2")
    s = np.arange(m + 1) / m
    lower = np.zeros(m + 1)
    upper = np.minimum(s, 1.0 - s)
    for i, value in _pin_indices(pins, m):
        lower[i] = upper[i] = value

    A = np.zeros((m - 1, m + 1))
    rows = np.arange(m - 1)
    A[rows, rows] = 1.0
    A[rows, rows + 1] = -2.0
    A[rows, rows + 2] = 1.0
    return FeasiblePolytope(m, A, np.zeros(m - 1), lower, upper, tuple((float(a), float(b)) for a, b in pins))


def _as_tdf(x: np.ndarray, m: int) -> TailDependenceFunction:
    s = np.arange(m + 1) / m
    cleaned = np.clip(x, 0.0, np.minimum(s, 1.0 - s))
    out = from_grid(cleaned, enforce_concavity=True)
    if isinstance(out, ValidationReport):  # pragma: no cover - vertices are concave
        worst = out.worst()
        raise RuntimeError(f"LP vertex failed validation: {worst}")
    return out


def measure_range(
    pins=(),
    measure: str = MAX_TD,
    grid_size: int = DEFAULT_GRID_SIZE,
    s0: float | None = None,
    normalization: str = RAW,
) -> EnvelopeResult:
    """Exact min and max of a measure over the pinned admissible polytope.

    ``max_td`` maximization decomposes into one LP per grid coordinate (the
    solver's basis is reused across the sweep); its minimization introduces an
    epigraph variable.  ``avg_td`` and ``point_eval`` are single LPs each way.
    """
    poly = feasible_polytope(pins, grid_size)
    m = poly.grid_size
    scale = scale_factor(normalization)
    if measure == POINT_EVAL:
        if normalization != RAW:
            raise ParameterError("point_eval has no doubled form")
        if s0 is None:
            raise ParameterError("point_eval needs s0")

    if measure == AVG_TD or measure == POINT_EVAL:
        if measure == AVG_TD:
            c = np.full(m + 1, 1.0 / m)
            c[0] = c[-1] = 0.5 / m
        else:
            c = np.zeros(m + 1)
            c[_grid_index(s0, m)] = 1.0
        solver = SimplexSolver(poly.A, poly.b, poly.lower, poly.upper)
        hi = solver.solve(c)
        lo = solver.solve(-c)
        min_value, max_value = -lo.value, hi.value
        argmin, argmax = _as_tdf(lo.x, m), _as_tdf(hi.x, m)
    elif measure == MAX_TD:
        solver = SimplexSolver(poly.A, poly.b, poly.lower, poly.upper)
        best_value, best_x = 0.0, np.zeros(m + 1)
        for i, value in _pin_indices(pins, m):
            if value > best_value:
                best_value, best_x = value, None
        for i in range(1, m):
            if poly.upper[i] <= best_value:  # cannot beat the incumbent
                continue
            c = np.zeros(m + 1)
            c[i] = 1.0
            sol = solver.solve(c)
            if sol.value > best_value:
                best_value, best_x = sol.value, sol.x
        if best_x is None:
            # A pin is itself the global maximum; realize any feasible point.
            c = np.zeros(m + 1)
            best_x = solver.solve(c).x
        max_value = best_value

        lo_solver, t_col = _epigraph_solver(poly)
        c = np.zeros(m + 2)
        c[t_col] = -1.0
        lo = lo_solver.solve(c)
        min_value = -lo.value
        argmin, argmax = _as_tdf(lo.x[: m + 1], m), _as_tdf(best_x, m)
    else:
        raise ParameterError(f"unknown envelope measure {measure!r}")

    return EnvelopeResult(
        measure,
        normalization,
        m,
        poly.pins,
        scale * min_value,
        scale * max_value,
        argmin,
        argmax,
        resolution=2.0 / m,
    )


def _epigraph_solver(poly: FeasiblePolytope) -> tuple[SimplexSolver, int]:
    """Constraints of ``poly`` plus t with L_i - t <= 0, for min-max problems."""
    m = poly.grid_size
    t_col = m + 1
    A_top = np.hstack([poly.A, np.zeros((m - 1, 1))])
    A_cap = np.zeros((m - 1, m + 2))
    rows = np.arange(m - 1)
    A_cap[rows, rows + 1] = 1.0
    A_cap[rows, t_col] = -1.0
    A = np.vstack([A_top, A_cap])
    b = np.zeros(2 * (m - 1))
    lower = np.concatenate([poly.lower, [0.0]])
    upper = np.concatenate([poly.upper, [0.5]])
    return SimplexSolver(A, b, lower, upper), t_col


def linf_range_given_tdc(lam: float, normalization: str = RAW) -> tuple[float, float]:
    """Closed-form sup-measure range when only the coefficient is known.

    Raw scale: [lam/2, lam/(1+lam)].  The lower end is the peak of the least
    concave function through the midpoint pin; the upper end comes from the
    chords joining the pin to the boundary zeros.  Verified against the LP
    route in the acceptance tests before anything relies on it.
    """
    if not 0.0 <= lam <= 1.0:
        raise ParameterError("tail dependence coefficient must lie in [0, 1]")
    scale = scale_factor(normalization)
    return scale * lam / 2.0, scale * lam / (1.0 + lam)


def random_feasible(
    pins=(),
    grid_size: int = DEFAULT_GRID_SIZE,
    seed: int = 0,
    n_mix: int = 3,
) -> TailDependenceFunction:
    """Random point of the pinned polytope: a convex mixture of LP vertices.

    Vertices come from maximizing seeded random objectives, so the draw is
    deterministic in (pins, grid_size, seed) and satisfies every pin exactly.
    """
    if n_mix < 1:
        raise ParameterError("n_mix must be >= 1")
    poly = feasible_polytope(pins, grid_size)
    solver = SimplexSolver(poly.A, poly.b, poly.lower, poly.upper)
    rng = SplitMix64(seed)
    m = poly.grid_size
    vertices = []
    for _ in range(n_mix):
        c = np.array([2.0 * rng.uniform() - 1.0 for _ in range(m + 1)])
        vertices.append(solver.solve(c).x)
    weights = np.array([rng.uniform() for _ in range(n_mix)])
    weights /= weights.sum()
    mix = np.einsum("i,ij->j", weights, np.asarray(vertices))
    return _as_tdf(mix, m)
