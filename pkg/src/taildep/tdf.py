"""Tail dependence functions on the unit simplex.

A (lower) tail dependence function, restricted to the simplex direction
``(s, 1 - s)``, is a concave function ``L : [0, 1] -> R`` with ``L(0) = L(1) = 0``
and ``0 <= L(s) <= min(s, 1 - s)``.  The two-argument form on the positive
quadrant is recovered by homogeneity:

    L(x, y) = (x + y) * L(x / (x + y)),    L(0, 0) = 0.

This module holds the grid representation (uniform grid, piecewise-linear
interpolation), constructors for the standard parametric shapes, validation,
the concave projection, and JSON serialization.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import DomainError, ParameterError

DEFAULT_GRID_SIZE = 200

# Constraint slack accepted at construction; violations beyond these are reported.
BOUND_TOL = 1e-9
CONCAVITY_TOL = 1e-9


class TDFKind(Enum):
    """Whether concavity was enforced (VALIDATED) or only bounds (EMPIRICAL)."""

    VALIDATED = "validated"
    EMPIRICAL = "empirical"


@dataclass(frozen=True)
class Violation:
    """One constraint violation found by ``from_grid``."""

    constraint: str  # "nonnegative" | "upper_bound" | "concavity"
    index: int
    magnitude: float


@dataclass(frozen=True)
class ValidationReport:
    """Returned by ``from_grid`` instead of a function when constraints fail."""

    violations: tuple[Violation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations

    def worst(self) -> Violation:
        return max(self.violations, key=lambda v: v.magnitude)


@dataclass(frozen=True)
class TailDependenceFunction:
    """Piecewise-linear tail dependence function on a uniform grid.

    ``values[i]`` is the function value at ``s = i / grid_size``; endpoints are
    exactly zero.  Instances are immutable; construct through ``from_grid`` or
    the parametric constructors, which establish the invariants.
    """

    grid_size: int
    values: np.ndarray = field(repr=False)
    kind: TDFKind = TDFKind.VALIDATED

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def grid(self) -> np.ndarray:
        """Grid abscissae ``i / grid_size`` for ``i = 0..grid_size``."""
        return np.arange(self.grid_size + 1) / self.grid_size

    def eval(self, s):
        """Evaluate at ``s`` in [0, 1] (scalar or array) by linear interpolation."""
        s_arr = np.asarray(s, dtype=float)
        if np.any(s_arr < 0.0) or np.any(s_arr > 1.0) or not np.all(np.isfinite(s_arr)):
            raise DomainError("evaluation point must lie in [0, 1]")
        out = np.interp(s_arr, self.grid, self.values)
        return float(out) if np.isscalar(s) or s_arr.ndim == 0 else out

    def extend_2d(self, x, y):
        """Homogeneous extension to the quadrant: (x + y) * eval(x / (x + y))."""
        x_arr = np.asarray(x, dtype=float)
        y_arr = np.asarray(y, dtype=float)
        if (
            np.any(x_arr < 0.0)
            or np.any(y_arr < 0.0)
            or not (np.all(np.isfinite(x_arr)) and np.all(np.isfinite(y_arr)))
        ):
            raise DomainError("extension requires finite x >= 0 and y >= 0")
        total = x_arr + y_arr
        with np.errstate(invalid="ignore"):
            ratio = np.where(total > 0.0, x_arr / np.where(total > 0.0, total, 1.0), 0.0)
        out = total * np.interp(ratio, self.grid, self.values)
        scalar = np.isscalar(x) and np.isscalar(y)
        return float(out) if scalar or out.ndim == 0 else out

    def to_json(self) -> str:
        """Serialize; round-trips bit-exactly for finite doubles."""
        return json.dumps(
            {
                "m": self.grid_size,
                "values": [float(v) for v in self.values],
                "kind": self.kind.value,
            }
        )

    @classmethod
    def from_json(cls, text: str) -> "TailDependenceFunction":
        data = json.loads(text)
        values = np.asarray(data["values"], dtype=float)
        if len(values) != data["m"] + 1:
            raise ParameterError("values length must be m + 1")
        kind = TDFKind(data["kind"])
        out = from_grid(values, enforce_concavity=(kind is TDFKind.VALIDATED))
        if isinstance(out, ValidationReport):
            worst = out.worst()
            raise ParameterError(
                f"serialized grid violates {worst.constraint} at index {worst.index} "
                f"by {worst.magnitude:.3e}"
            )
        return out


def _upper_bound(m: int) -> np.ndarray:
    s = np.arange(m + 1) / m
    return np.minimum(s, 1.0 - s)


def from_grid(values, enforce_concavity: bool = True):
    """Build a function from grid values, or report why the grid is inadmissible.

    Returns a VALIDATED function when bounds, boundary zeros, and concavity all
    hold within tolerance; with ``enforce_concavity=False`` concavity is skipped
    and the result is EMPIRICAL.  Admissible-within-tolerance values are snapped
    onto the exact constraint set, so invariants hold exactly afterwards.
    Constraint violations come back as a ``ValidationReport``.
    """
    v = np.asarray(values, dtype=float)
    if v.ndim != 1 or v.size < 3:
        raise ParameterError("grid needs at least 3 values on one axis")
    if not np.all(np.isfinite(v)):
        raise ParameterError("grid values must be finite")
    m = v.size - 1
    bound = _upper_bound(m)

    violations = []
    for i in np.flatnonzero(v < -BOUND_TOL):
        violations.append(Violation("nonnegative", int(i), float(-v[i])))
    for i in np.flatnonzero(v > bound + BOUND_TOL):
        violations.append(Violation("upper_bound", int(i), float(v[i] - bound[i])))
    if enforce_concavity:
        second = v[2:] - 2.0 * v[1:-1] + v[:-2]
        for j in np.flatnonzero(second > CONCAVITY_TOL):
            violations.append(Violation("concavity", int(j + 1), float(second[j])))
    if violations:
        return ValidationReport(tuple(violations))

    clipped = np.clip(v, 0.0, bound)
    clipped[0] = 0.0
    clipped[m] = 0.0
    kind = TDFKind.VALIDATED if enforce_concavity else TDFKind.EMPIRICAL
    return TailDependenceFunction(m, clipped, kind)


def _build(values: np.ndarray, what: str) -> TailDependenceFunction:
    out = from_grid(values, enforce_concavity=True)
    if isinstance(out, ValidationReport):  # pragma: no cover - constructors are exact
        worst = out.worst()
        raise ParameterError(f"{what}: {worst.constraint} violated by {worst.magnitude:.3e}")
    return out


def comonotone(grid_size: int = DEFAULT_GRID_SIZE) -> TailDependenceFunction:
    """Strongest admissible function, min(s, 1 - s)."""
    _check_grid_size(grid_size)
    return _build(_upper_bound(grid_size), "comonotone")


def independence(grid_size: int = DEFAULT_GRID_SIZE) -> TailDependenceFunction:
    """Identically zero (asymptotic tail independence)."""
    _check_grid_size(grid_size)
    return _build(np.zeros(grid_size + 1), "independence")


def clayton(theta: float, grid_size: int = DEFAULT_GRID_SIZE) -> TailDependenceFunction:
    """Clayton family, (s^-theta + (1-s)^-theta)^(-1/theta), theta > 0."""
    _check_grid_size(grid_size)
    if not (theta > 0.0) or not np.isfinite(theta):
        raise ParameterError("clayton requires theta > 0")
    s = np.arange(1, grid_size) / grid_size
    interior = (s ** -theta + (1.0 - s) ** -theta) ** (-1.0 / theta)
    values = np.zeros(grid_size + 1)
    values[1:-1] = interior
    return _build(values, "clayton")


def tent(a: float, b: float, grid_size: int = DEFAULT_GRID_SIZE) -> TailDependenceFunction:
    """min(a*s, b*(1-s)) clipped at the admissible bound; a, b >= 0."""
    _check_grid_size(grid_size)
    if a < 0.0 or b < 0.0 or not np.isfinite(a) or not np.isfinite(b):
        raise ParameterError("tent requires a >= 0 and b >= 0")
    s = np.arange(grid_size + 1) / grid_size
    values = np.minimum(np.minimum(a * s, b * (1.0 - s)), _upper_bound(grid_size))
    return _build(values, "tent")


def parabola(c: float = 1.0, grid_size: int = DEFAULT_GRID_SIZE) -> TailDependenceFunction:
    """c * s * (1 - s) with 0 < c <= 1, the bound that keeps it admissible."""
    _check_grid_size(grid_size)
    if not (0.0 < c <= 1.0):
        raise ParameterError("parabola requires c in (0, 1]")
    s = np.arange(grid_size + 1) / grid_size
    return _build(c * s * (1.0 - s), "parabola")


_FAMILIES = {
    "comonotone": (comonotone, ()),
    "independence": (independence, ()),
    "clayton": (clayton, ("theta",)),
    "tent": (tent, ("a", "b")),
    "parabola": (parabola, ("c",)),
}


def from_parametric(family: str, grid_size: int = DEFAULT_GRID_SIZE, **params) -> TailDependenceFunction:
    """Dispatch to a parametric constructor by family name."""
    try:
        ctor, names = _FAMILIES[family]
    except KeyError:
        raise ParameterError(f"unknown family {family!r}; known: {sorted(_FAMILIES)}") from None
    missing = [n for n in names if n not in params]
    extra = [n for n in params if n not in names]
    if missing or extra:
        raise ParameterError(f"family {family!r} takes parameters {list(names)}")
    return ctor(*[params[n] for n in names], grid_size=grid_size)


def least_concave_majorant(tdf: TailDependenceFunction) -> TailDependenceFunction:
    """Project onto the admissible class: smallest concave function above the grid.

    The result is the upper convex hull of the grid points, clipped at
    min(s, 1 - s); it is VALIDATED, idempotent on validated inputs, and
    monotone in the pointwise order.
    """
    m = tdf.grid_size
    s = tdf.grid
    v = tdf.values
    # Upper hull, left to right: keep the chain turning clockwise.
    hull: list[int] = []
    for i in range(m + 1):
        while len(hull) >= 2:
            i0, i1 = hull[-2], hull[-1]
            # Drop i1 when it lies on or below the chord i0 -> i.
            if (v[i1] - v[i0]) * (s[i] - s[i0]) <= (v[i] - v[i0]) * (s[i1] - s[i0]):
                hull.pop()
            else:
                break
        hull.append(i)
    majorant = np.interp(s, s[hull], v[hull])
    majorant = np.minimum(majorant, _upper_bound(m))
    return _build(majorant, "least_concave_majorant")


def _check_grid_size(grid_size: int):
    if not isinstance(grid_size, (int, np.integer)) or grid_size < 2:
        raise ParameterError("grid_size must be an integer >= 2")
