"""Charge world lines through a solved field.

A world line follows ``dw/dt = a(u(t, w))`` where ``a`` is the velocity
map; since ``|a| < 1`` the path is always subluminal regardless of how
large the momentum field gets.  The field is read off the saved states by
bilinear interpolation (linear in time between saves, linear in space on
the grid).

The proper-time variant integrates ``dz0/ds = sqrt(1 + u^2)``,
``dz1/ds = u`` instead and resamples onto coordinate time, which gives an
independent consistency check on the same path.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fields import SpacetimeSolution
from .nonlinearity import a, sqrt1p_sq

__all__ = [
    "Trajectory",
    "integrate_world_line",
    "integrate_world_lines",
    "proper_time_world_line",
    "reparametrization_gap",
]


@dataclass(frozen=True)
class Trajectory:
    start: float
    times: np.ndarray
    positions: np.ndarray
    velocities: np.ndarray
    exited: bool

    @property
    def max_speed(self) -> float:
        return float(np.max(np.abs(self.velocities))) if len(self.velocities) else 0.0


class _FieldSampler:
    """Bilinear sampler for one saved field component."""

    def __init__(self, sol: SpacetimeSolution, name: str = "u"):
        self.times = sol.times
        self.xs = sol.grid.xs
        self.stack = sol.field_stack(name)

    def __call__(self, t: float, x: float) -> float:
        ts = self.times
        if t <= ts[0]:
            row = self.stack[0]
        elif t >= ts[-1]:
            row = self.stack[-1]
        else:
            i = int(np.searchsorted(ts, t, side="right")) - 1
            i = min(i, len(ts) - 2)
            lam = (t - ts[i]) / (ts[i + 1] - ts[i])
            row = (1.0 - lam) * self.stack[i] + lam * self.stack[i + 1]
        return float(np.interp(x, self.xs, row))


def _window(sol: SpacetimeSolution, t_start, t_end):
    lo, hi = float(sol.times[0]), float(sol.times[-1])
    t_start = lo if t_start is None else float(t_start)
    t_end = hi if t_end is None else float(t_end)
    tiny = 1e-12
    if t_start < lo - tiny or t_end > hi + tiny or t_start >= t_end:
        raise ValueError(
            f"world line: time window [{t_start:g}, {t_end:g}] must sit inside "
            f"the solved window [{lo:g}, {hi:g}]"
        )
    return t_start, t_end


def integrate_world_line(sol: SpacetimeSolution, start: float,
                         t_start: float | None = None, t_end: float | None = None,
                         n_steps: int | None = None) -> Trajectory:
    """RK4 integration of ``dw/dt = a(u(t, w))`` from ``w(t_start) = start``.

    Stops early (with ``exited=True``) if the path leaves the grid, so the
    returned arrays may cover less than the requested window.  The saved
    field must be at least as fine in time as the path step, otherwise the
    interpolated samples would be coarser than the integrator pretends.
    """
    t_start, t_end = _window(sol, t_start, t_end)
    if n_steps is None:
        n_steps = max(1, len(sol.times) - 1)
    if n_steps < 1:
        raise ValueError("world line: n_steps must be positive")
    save_dt = float(np.min(np.diff(sol.times))) if len(sol.times) > 1 else 0.0
    dr = (t_end - t_start) / n_steps
    if save_dt > dr * (1.0 + 1e-9):
        raise ValueError(
            f"world line: saved spacing {save_dt:.6g} exceeds the path step "
            f"{dr:.6g}; save more often or take fewer steps"
        )
    u_at = _FieldSampler(sol, "u")
    x_min, x_max = sol.grid.x_min, sol.grid.x_max
    if not (x_min <= start <= x_max):
        raise ValueError("world line: start position outside the grid")
    h = (t_end - t_start) / n_steps
    times = [t_start]
    positions = [float(start)]
    velocities = [a(u_at(t_start, start))]
    w = float(start)
    exited = False
    for i in range(n_steps):
        t = t_start + i * h
        k1 = a(u_at(t, w))
        k2 = a(u_at(t + 0.5 * h, w + 0.5 * h * k1))
        k3 = a(u_at(t + 0.5 * h, w + 0.5 * h * k2))
        k4 = a(u_at(t + h, w + h * k3))
        w = w + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        t_next = t_start + (i + 1) * h
        times.append(t_next)
        positions.append(w)
        velocities.append(a(u_at(t_next, w)))
        if not (x_min <= w <= x_max):
            exited = True
            break
    return Trajectory(
        start=float(start),
        times=np.asarray(times),
        positions=np.asarray(positions),
        velocities=np.asarray(velocities),
        exited=exited,
    )


def integrate_world_lines(sol: SpacetimeSolution, starts,
                          t_start: float | None = None, t_end: float | None = None,
                          n_steps: int | None = None) -> list:
    return [
        integrate_world_line(sol, s, t_start=t_start, t_end=t_end, n_steps=n_steps)
        for s in starts
    ]


def proper_time_world_line(sol: SpacetimeSolution, start: float,
                           t_start: float | None = None, t_end: float | None = None,
                           ds: float | None = None):
    """Integrate the proper-time form and resample onto coordinate time.

    Returns ``(z0, z1)`` arrays: coordinate times reached and positions.
    The time component advances at rate ``sqrt(1 + u^2) >= 1``, so a step
    budget based on the window length always suffices.
    """
    t_start, t_end = _window(sol, t_start, t_end)
    u_at = _FieldSampler(sol, "u")
    if ds is None:
        ds = (t_end - t_start) / max(1, len(sol.times) - 1)
    z0, z1 = t_start, float(start)
    out_t, out_x = [z0], [z1]
    max_steps = int(np.ceil((t_end - t_start) / ds)) + 2
    for _ in range(max_steps):
        if z0 >= t_end:
            break

        def f(v0, v1):
            uu = u_at(v0, v1)
            return sqrt1p_sq(uu), uu

        k1 = f(z0, z1)
        k2 = f(z0 + 0.5 * ds * k1[0], z1 + 0.5 * ds * k1[1])
        k3 = f(z0 + 0.5 * ds * k2[0], z1 + 0.5 * ds * k2[1])
        k4 = f(z0 + ds * k3[0], z1 + ds * k3[1])
        z0 = z0 + (ds / 6.0) * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0])
        z1 = z1 + (ds / 6.0) * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1])
        out_t.append(z0)
        out_x.append(z1)
    return np.asarray(out_t), np.asarray(out_x)


def reparametrization_gap(sol: SpacetimeSolution, start: float,
                          t_start: float | None = None, t_end: float | None = None,
                          n_steps: int | None = None) -> float:
    """Max distance between the two parametrizations of the same world line."""
    traj = integrate_world_line(sol, start, t_start=t_start, t_end=t_end, n_steps=n_steps)
    if traj.exited:
        raise ValueError("reparametrization gap: path left the grid; widen the domain")
    z0, z1 = proper_time_world_line(sol, start, t_start=t_start, t_end=traj.times[-1])
    resampled = np.interp(traj.times, z0, z1)
    return float(np.max(np.abs(resampled - traj.positions)))
