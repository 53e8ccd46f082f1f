"""Time integration of the regularized field system.

The evolved system for ``V = (E, u, sigma)`` on the grid is

    dE/dt     = -D E + sigma (1 - a(u))
    du/dt     = -D (sqrt(1+u^2) - 1) + E + B0 a(u)
    dsigma/dt = -D (sigma a(u))

with ``D`` the regularized derivative.  The constant 1 is subtracted inside
the second convolution so its argument vanishes where u does; zero padding
would otherwise see an artificial jump at the grid ends.

Two integrators are provided: a method-of-lines RK4 march and a chained
Picard iteration on the integral form of the equations.  They discretize
time differently, so their agreement on matching grids is a meaningful
consistency check rather than a tautology.

Every march is protected by a growth guard derived from the a-priori
estimate for the continuum system: solutions wandering past a multiple of
that bound indicate a numerical problem and abort the run, preserving the
states saved so far.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import cumulative_trapezoid

from .fields import (
    FieldState,
    Grid,
    ModelParams,
    SpacetimeSolution,
    solution_margin_ratio,
    CONTAMINATION_TOL,
)
from .nonlinearity import a, sqrt1p_sq
from .regops import RegDerivOperator

__all__ = [
    "SolverConfig",
    "rhs",
    "solve",
    "solve_lines",
    "solve_picard",
    "a_priori_bound",
    "step_bound",
    "contraction_horizon",
    "STATUS_OK",
    "STATUS_OVERFLOW",
    "STATUS_GUARD",
    "STATUS_PICARD_STALL",
]

STATUS_OK = "ok"
STATUS_OVERFLOW = "overflow"
STATUS_GUARD = "guard"
STATUS_PICARD_STALL = "picard-stall"

# consecutive growing Picard updates before declaring non-contraction
_STALL_PATIENCE = 5


@dataclass(frozen=True)
class SolverConfig:
    dt: float
    method: str = "rk4"
    save_every: int = 1
    picard_tol: float = 1e-10
    picard_max_iter: int = 200
    picard_subinterval: float | None = None
    guard_factor: float = 10.0

    def __post_init__(self):
        if not self.dt > 0.0:
            raise ValueError(f"solver: dt must be positive, got {self.dt}")
        if self.method not in ("rk4", "picard"):
            raise ValueError(f"solver: unknown method {self.method!r}")
        if self.save_every < 1:
            raise ValueError("solver: save_every must be >= 1")
        if not self.picard_tol > 0.0:
            raise ValueError("solver: picard_tol must be positive")
        if self.picard_max_iter < 1:
            raise ValueError("solver: picard_max_iter must be >= 1")
        if self.guard_factor < 1.0:
            raise ValueError("solver: guard_factor must be >= 1")


def step_bound(op_norm: float) -> float:
    """Largest admissible dt for the explicit march: 0.5 / ||D||."""
    return 0.5 / op_norm


def contraction_horizon(op_norm: float, B0: float) -> float:
    """Subinterval length on which the Picard map is safely contracting."""
    return 0.25 / (op_norm + 2.0 + abs(B0))


def a_priori_bound(initial_norm: float, params: ModelParams, op_norm: float) -> float:
    """Growth estimate for sup-norms over the horizon.

    Mirrors the Gronwall estimate for the continuum system with the
    realized operator norm in place of the kernel constant:

        (||V0|| + T (||D|| + |B0|)) * exp(3 T (||D|| + 1)).

    Deliberately loose; its role is to catch numerical blow-up, not to be
    sharp.
    """
    T = params.T
    growth = math.exp(min(3.0 * T * (op_norm + 1.0), 700.0))
    return (initial_norm + T * (op_norm + abs(params.B0))) * growth


def rhs(E, u, sigma, op: RegDerivOperator, B0: float):
    """Right-hand side of the evolved system for one state."""
    au = a(u)
    dE = -op.apply(E) + sigma * (1.0 - au)
    du = -op.apply(sqrt1p_sq(u) - 1.0) + E + B0 * au
    dsigma = -op.apply(sigma * au)
    return dE, du, dsigma


def _base_meta(cfg: SolverConfig, op: RegDerivOperator, params: ModelParams, dt_eff: float,
               bound: float, method: str) -> dict:
    return {
        "solver": method,
        "dt": dt_eff,
        "n_steps": int(round(params.T / dt_eff)),
        "save_every": cfg.save_every,
        "eps": params.eps,
        "nu": op.nu,
        "mollifier": op.mollifier.spec_dict(),
        "B0": params.B0,
        "T": params.T,
        "q": params.q,
        "op_norm": op.op_norm,
        "a_priori_bound": bound,
        "guard_factor": cfg.guard_factor,
        "status": STATUS_OK,
    }


def _check_setup(initial: FieldState, cfg: SolverConfig, op: RegDerivOperator,
                 params: ModelParams):
    if len(initial.E) != op.grid.n:
        raise ValueError("solver: initial state does not match operator grid")
    for name in ("E", "u", "sigma"):
        if not np.all(np.isfinite(initial.component(name))):
            raise ValueError(f"solver: non-finite initial data in {name}")
    limit = step_bound(op.op_norm)
    if cfg.dt > limit * (1.0 + 1e-12):
        raise ValueError(
            f"solver: dt={cfg.dt:.6g} violates the step bound 0.5/||D|| = {limit:.6g}"
        )


def _finalize(grid: Grid, times: list, states: list, meta: dict, backward: bool) -> SpacetimeSolution:
    if backward:
        times = times[::-1]
        states = states[::-1]
    sol = SpacetimeSolution(grid=grid, times=np.asarray(times), states=states, meta=meta)
    ratio = solution_margin_ratio(sol)
    meta["margin_ratio"] = ratio
    meta["boundary_contaminated"] = bool(ratio > CONTAMINATION_TOL)
    return sol


def solve_lines(initial: FieldState, cfg: SolverConfig, op: RegDerivOperator,
                params: ModelParams, backward: bool = False) -> SpacetimeSolution:
    """Classical RK4 march of the semi-discrete system.

    Covers ``[t0, t0+T]``, or ``[t0-T, t0]`` when ``backward`` is set (the
    model is time-reversible, so backward runs are just a negated step).
    Saved states land every ``save_every`` steps plus the final time.
    """
    _check_setup(initial, cfg, op, params)
    n_steps = max(1, int(math.ceil(params.T / cfg.dt - 1e-12)))
    dt_eff = params.T / n_steps
    h = -dt_eff if backward else dt_eff
    bound = a_priori_bound(initial.max_abs(), params, op.op_norm)
    meta = _base_meta(cfg, op, params, dt_eff, bound, "rk4")
    B0 = params.B0

    t0 = initial.t
    E, u, sig = initial.E.copy(), initial.u.copy(), initial.sigma.copy()
    times = [t0]
    states = [FieldState(t0, E.copy(), u.copy(), sig.copy())]
    for i in range(1, n_steps + 1):
        t = t0 + i * h
        try:
            with np.errstate(over="ignore", invalid="ignore"):
                k1 = rhs(E, u, sig, op, B0)
                k2 = rhs(E + 0.5 * h * k1[0], u + 0.5 * h * k1[1], sig + 0.5 * h * k1[2], op, B0)
                k3 = rhs(E + 0.5 * h * k2[0], u + 0.5 * h * k2[1], sig + 0.5 * h * k2[2], op, B0)
                k4 = rhs(E + h * k3[0], u + h * k3[1], sig + h * k3[2], op, B0)
        except ValueError:
            meta["status"] = STATUS_OVERFLOW
            meta["abort"] = {"reason": "overflow", "t": t, "message": f"overflow at t={t:.6g}"}
            break
        # overflow is caught by the finiteness check below, not by warnings
        with np.errstate(over="ignore", invalid="ignore"):
            E = E + (h / 6.0) * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0])
            u = u + (h / 6.0) * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1])
            sig = sig + (h / 6.0) * (k1[2] + 2.0 * k2[2] + 2.0 * k3[2] + k4[2])
        if not (np.all(np.isfinite(E)) and np.all(np.isfinite(u)) and np.all(np.isfinite(sig))):
            meta["status"] = STATUS_OVERFLOW
            meta["abort"] = {"reason": "overflow", "t": t, "message": f"overflow at t={t:.6g}"}
            break
        peak = max(np.max(np.abs(E)), np.max(np.abs(u)), np.max(np.abs(sig)))
        if peak > cfg.guard_factor * bound:
            meta["status"] = STATUS_GUARD
            meta["abort"] = {
                "reason": "guard",
                "t": t,
                "message": (
                    f"growth guard tripped at t={t:.6g}: max|V|={peak:.6g} exceeds "
                    f"{cfg.guard_factor:g} x a-priori bound {bound:.6g}"
                ),
            }
            break
        if i % cfg.save_every == 0 or i == n_steps:
            times.append(t)
            states.append(FieldState(t, E.copy(), u.copy(), sig.copy()))
    return _finalize(op.grid, times, states, meta, backward)


def solve_picard(initial: FieldState, cfg: SolverConfig, op: RegDerivOperator,
                 params: ModelParams, backward: bool = False) -> SpacetimeSolution:
    """Fixed-point iteration on the integral form, chained over subintervals.

    Each subinterval is short enough for the integral map to contract; the
    converged endpoint seeds the next subinterval.  Non-contraction is
    detected (updates growing several times in a row) rather than assumed
    away, and stalls abort the run with the subinterval length in the
    diagnostic.
    """
    _check_setup(initial, cfg, op, params)
    n_steps = max(1, int(math.ceil(params.T / cfg.dt - 1e-12)))
    dt_eff = params.T / n_steps
    h = -dt_eff if backward else dt_eff
    bound = a_priori_bound(initial.max_abs(), params, op.op_norm)
    meta = _base_meta(cfg, op, params, dt_eff, bound, "picard")
    B0 = params.B0

    chunk = cfg.picard_subinterval
    if chunk is None:
        chunk = contraction_horizon(op.op_norm, B0)
    m = max(1, int(math.floor(chunk / dt_eff + 1e-12)))

    t0 = initial.t
    V = np.stack([initial.E, initial.u, initial.sigma]).astype(float)
    times = [t0]
    states = [FieldState(t0, V[0].copy(), V[1].copy(), V[2].copy())]
    total_iters = 0
    max_chunk_iters = 0
    max_residual = 0.0
    chunks = 0
    i = 0
    aborted = False
    while i < n_steps and not aborted:
        k = min(m, n_steps - i)
        Vk = np.repeat(V[None, :, :], k + 1, axis=0)
        F = np.empty_like(Vk)
        prev_delta = math.inf
        grow = 0
        converged = False
        for it in range(1, cfg.picard_max_iter + 1):
            for j in range(k + 1):
                F[j] = rhs(Vk[j, 0], Vk[j, 1], Vk[j, 2], op, B0)
            Vn = V[None, :, :] + cumulative_trapezoid(F, dx=h, axis=0, initial=0.0)
            delta = float(np.max(np.abs(Vn - Vk)))
            Vk = Vn
            if not math.isfinite(delta):
                meta["status"] = STATUS_OVERFLOW
                meta["abort"] = {
                    "reason": "overflow",
                    "t": t0 + i * h,
                    "message": f"overflow in Picard sweep starting at t={t0 + i * h:.6g}",
                }
                aborted = True
                break
            if delta < cfg.picard_tol:
                converged = True
            grow = grow + 1 if delta > prev_delta else 0
            prev_delta = delta
            if converged:
                break
            if grow >= _STALL_PATIENCE:
                meta["status"] = STATUS_PICARD_STALL
                meta["abort"] = {
                    "reason": "no-contraction",
                    "t": t0 + i * h,
                    "message": (
                        f"Picard updates grew {_STALL_PATIENCE} times in a row on "
                        f"subinterval of length {k * dt_eff:.6g}; reduce "
                        f"picard_subinterval"
                    ),
                }
                aborted = True
                break
        if aborted:
            break
        total_iters += it
        max_chunk_iters = max(max_chunk_iters, it)
        chunks += 1
        max_residual = max(max_residual, delta)
        if not converged:
            meta["status"] = STATUS_PICARD_STALL
            meta["abort"] = {
                "reason": "no-convergence",
                "t": t0 + i * h,
                "message": (
                    f"Picard did not reach tol={cfg.picard_tol:g} in "
                    f"{cfg.picard_max_iter} iterations (last update {delta:.3g})"
                ),
            }
            break
        for j in range(1, k + 1):
            g = i + j
            if g % cfg.save_every == 0 or g == n_steps:
                t = t0 + g * h
                times.append(t)
                states.append(FieldState(t, Vk[j, 0].copy(), Vk[j, 1].copy(), Vk[j, 2].copy()))
        V = Vk[k]
        i += k
    meta["picard"] = {
        "iterations": total_iters,
        "max_chunk_iterations": max_chunk_iters,
        "chunks": chunks,
        "max_final_residual": max_residual,
        "subinterval_steps": m,
        "subinterval": m * dt_eff,
    }
    return _finalize(op.grid, times, states, meta, backward)


def solve(initial: FieldState, cfg: SolverConfig, op: RegDerivOperator,
          params: ModelParams, backward: bool = False) -> SpacetimeSolution:
    """Dispatch on ``cfg.method``."""
    if cfg.method == "picard":
        return solve_picard(initial, cfg, op, params, backward=backward)
    return solve_lines(initial, cfg, op, params, backward=backward)
