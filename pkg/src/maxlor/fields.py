"""Grids, field states, and assembled space-time solutions.

A state carries the triple ``(E, u, sigma)`` on a uniform grid: electric
field, momentum, and charge density.  Solutions are stacks of saved states
plus a metadata dictionary rich enough to rebuild the operator that
produced them.

Fields are treated as compactly supported well inside the grid; the margin
check quantifies how badly a run violates that convention.  Runs whose
outermost grid values are not negligible are flagged boundary-contaminated,
since zero padding then feeds artificial jumps into the convolution.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy.integrate import trapezoid

from .nonlinearity import sqrt1p_sq

__all__ = [
    "Grid",
    "FieldState",
    "SpacetimeSolution",
    "ModelParams",
    "total_charge",
    "restrict_velocity_norm",
    "margin_ratio",
    "solution_margin_ratio",
    "MARGIN_FRACTION",
    "CONTAMINATION_TOL",
]

MARGIN_FRACTION = 0.05
CONTAMINATION_TOL = 1e-8

FIELD_NAMES = ("E", "u", "sigma")


@dataclass(eq=False)
class Grid:
    """Uniform grid with n points on [x_min, x_max]; immutable by convention."""

    x_min: float
    x_max: float
    n: int

    def __post_init__(self):
        if self.n < 16:
            raise ValueError(f"grid: need at least 16 points, got n={self.n}")
        if not self.x_min < self.x_max:
            raise ValueError(f"grid: empty interval [{self.x_min}, {self.x_max}]")

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / (self.n - 1)

    @cached_property
    def xs(self) -> np.ndarray:
        xs = np.linspace(self.x_min, self.x_max, self.n)
        xs.setflags(write=False)
        return xs

    def spec_dict(self) -> dict:
        return {"x_min": self.x_min, "x_max": self.x_max, "n": self.n}


@dataclass
class FieldState:
    t: float
    E: np.ndarray
    u: np.ndarray
    sigma: np.ndarray

    def __post_init__(self):
        if not (len(self.E) == len(self.u) == len(self.sigma)):
            raise ValueError("field state: component length mismatch")

    def copy(self) -> "FieldState":
        return FieldState(self.t, self.E.copy(), self.u.copy(), self.sigma.copy())

    def max_abs(self) -> float:
        return float(
            max(np.max(np.abs(self.E)), np.max(np.abs(self.u)), np.max(np.abs(self.sigma)))
        )

    def component(self, name: str) -> np.ndarray:
        if name not in FIELD_NAMES:
            raise KeyError(f"unknown field component {name!r}")
        return getattr(self, name)


@dataclass(frozen=True)
class ModelParams:
    """Physical parameters: induction constant, horizon, net parameter, charge."""

    B0: float
    T: float
    eps: float
    q: float = 1.0

    def __post_init__(self):
        if not self.T > 0.0:
            raise ValueError(f"params: horizon T must be positive, got {self.T}")
        if not self.eps > 0.0:
            raise ValueError(f"params: eps must be positive, got {self.eps}")


@dataclass
class SpacetimeSolution:
    grid: Grid
    times: np.ndarray
    states: list[FieldState]
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if len(self.times) != len(self.states):
            raise ValueError("solution: times and states length mismatch")
        if len(self.times) >= 2 and not np.all(np.diff(self.times) > 0):
            raise ValueError("solution: times must be strictly increasing")

    def field_stack(self, name: str) -> np.ndarray:
        """All saved values of one component as a (n_times, n_x) array."""
        return np.stack([s.component(name) for s in self.states])

    @property
    def status(self) -> str:
        return self.meta.get("status", "ok")


def total_charge(grid: Grid, state: FieldState) -> float:
    """Trapezoidal integral of sigma over the grid."""
    return float(trapezoid(state.sigma, dx=grid.dx))


def restrict_velocity_norm(state: FieldState) -> float:
    """Round-trip defect of the root used by the solver.

    Returns ``max |(1 + u^2) - sqrt1p_sq(u)^2|`` over the grid; a direct
    probe that the velocity stays strictly below light speed numerically.
    """
    s = sqrt1p_sq(state.u)
    return float(np.max(np.abs((1.0 + state.u * state.u) - s * s)))


def _edge_mask(n: int) -> np.ndarray:
    k = max(1, int(round(MARGIN_FRACTION * (n - 1))))
    mask = np.zeros(n, dtype=bool)
    mask[: k + 1] = True
    mask[-(k + 1):] = True
    return mask


def margin_ratio(grid: Grid, state: FieldState) -> float:
    """Outermost-5% magnitude relative to the interior maximum.

    The magnitude is ``|E| + |u| + |sigma|`` pointwise.  A zero state gives
    ratio 0.  Ratios above ``CONTAMINATION_TOL`` mean the compact-support
    margin convention is violated.
    """
    edge = _edge_mask(grid.n)
    tot = np.abs(state.E) + np.abs(state.u) + np.abs(state.sigma)
    interior_max = float(np.max(tot[~edge]))
    if interior_max == 0.0:
        return 0.0
    return float(np.max(tot[edge]) / interior_max)


def solution_margin_ratio(sol: SpacetimeSolution) -> float:
    return max((margin_ratio(sol.grid, s) for s in sol.states), default=0.0)
