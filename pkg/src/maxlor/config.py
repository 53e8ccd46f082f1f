"""Run configuration: JSON schema, validation, and assembly into run pieces.

A config is a plain JSON object with sections ``grid``, ``mollifier``,
``scaling``, ``model``, ``solver``, ``initial``, ``delta_net`` and a
free-form ``experiment`` block, plus a top-level ``eps`` (or
``eps_schedule`` for sweeps) and ``seed``.  Every section has defaults
chosen so that an empty config describes the basic point-charge release
experiment with the causal left kernel.

``validate_config`` collects every violation instead of stopping at the
first, with messages prefixed by the section they concern, so one
round-trip fixes a broken file.  The checks are a dry rehearsal of every
module precondition a run would hit (kernel resolvability, profile
resolvability, the stable step bound), evaluated across the whole eps
schedule.  ``assemble_run`` turns a config plus a concrete eps into
ready-to-solve pieces.
"""

from __future__ import annotations

import copy
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .deltanet import DeltaNet, net_from_spec, sample
from .fields import FieldState, Grid, ModelParams
from .mollifier import DEFAULT_SUPPORTS, Mollifier, make_mollifier
from .regops import MIN_CELLS_PER_WIDTH, RegDerivOperator, make_operator
from .scaling import LOGLOG_EPS_MAX, ScalingFunction, h_eval, make_scaling
from .solver import SolverConfig, step_bound

__all__ = [
    "RunConfig",
    "RunPieces",
    "config_from_dict",
    "load_config",
    "config_to_dict",
    "validate_config",
    "build_grid",
    "build_mollifier",
    "build_scaling",
    "build_delta_net",
    "build_solver_config",
    "build_initial_state",
    "assemble_run",
    "MAX_GRID_POINTS",
]

# refinement safety valve: needing more than this is a config mistake
MAX_GRID_POINTS = 600_000

_DEFAULTS = {
    "grid": {"x_min": -4.0, "x_max": 1.0, "n": 1001},
    "mollifier": {"kind": "left"},
    "scaling": {"kind": "powerlaw", "c": 1.0, "exponent": 1.0},
    "model": {"B0": 0.0, "T": 0.5, "q": 1.0},
    "solver": {
        "dt": "auto",
        "method": "rk4",
        "save_every": 1,
        "picard_tol": 1e-10,
        "picard_max_iter": 200,
        "picard_subinterval": None,
        "guard_factor": 10.0,
    },
    "initial": {
        "E": {"kind": "zero"},
        "u": {"kind": "zero"},
        "sigma": {"kind": "delta-net"},
    },
    "delta_net": {
        "profile": {"kind": "left"},
        "center": 0.0,
        "mass": 1.0,
        "width_scale": 1.0,
        "width_power": 1.0,
    },
    "experiment": {},
}

_KNOWN_TOP = set(_DEFAULTS) | {"eps", "eps_schedule", "seed"}

_PROFILE_KINDS = ("zero", "gaussian", "bump", "delta-net")


@dataclass
class RunConfig:
    grid: dict = field(default_factory=dict)
    mollifier: dict = field(default_factory=dict)
    scaling: dict = field(default_factory=dict)
    model: dict = field(default_factory=dict)
    solver: dict = field(default_factory=dict)
    initial: dict = field(default_factory=dict)
    delta_net: dict = field(default_factory=dict)
    experiment: dict = field(default_factory=dict)
    eps: float | None = 0.1
    eps_schedule: list | None = None
    seed: int = 0
    unknown_keys: tuple = ()


def _merged(section: str, given: dict) -> dict:
    out = copy.deepcopy(_DEFAULTS[section])
    for k, v in (given or {}).items():
        out[k] = v
    return out


def config_from_dict(d: dict) -> RunConfig:
    if not isinstance(d, dict):
        raise ValueError("config: top level must be a JSON object")
    unknown = tuple(sorted(k for k in d if k not in _KNOWN_TOP))
    return RunConfig(
        grid=_merged("grid", d.get("grid", {})),
        mollifier=_merged("mollifier", d.get("mollifier", {})),
        scaling=_merged("scaling", d.get("scaling", {})),
        model=_merged("model", d.get("model", {})),
        solver=_merged("solver", d.get("solver", {})),
        initial=_merged("initial", d.get("initial", {})),
        delta_net=_merged("delta_net", d.get("delta_net", {})),
        experiment=copy.deepcopy(d.get("experiment", {})),
        eps=(d["eps"] if "eps" in d else 0.1),
        eps_schedule=list(d["eps_schedule"]) if d.get("eps_schedule") else None,
        seed=d.get("seed", 0),
        unknown_keys=unknown,
    )


def load_config(path) -> RunConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return config_from_dict(json.load(fh))


def config_to_dict(cfg: RunConfig) -> dict:
    return {
        "grid": dict(cfg.grid),
        "mollifier": dict(cfg.mollifier),
        "scaling": dict(cfg.scaling),
        "model": dict(cfg.model),
        "solver": dict(cfg.solver),
        "initial": copy.deepcopy(cfg.initial),
        "delta_net": copy.deepcopy(cfg.delta_net),
        "experiment": copy.deepcopy(cfg.experiment),
        "eps": cfg.eps,
        "eps_schedule": cfg.eps_schedule,
        "seed": cfg.seed,
    }


# ---------------------------------------------------------------------------
# validation


def _is_num(v) -> bool:
    return isinstance(v, (int, float)) and not isinstance(v, bool) and math.isfinite(v)


def _check_profile(name: str, prof, errors: list, has_net: bool):
    if not isinstance(prof, dict):
        errors.append(f"initial.{name}: must be an object")
        return
    kind = prof.get("kind")
    if kind not in _PROFILE_KINDS:
        errors.append(
            f"initial.{name}: unknown kind {kind!r}; choose from {', '.join(_PROFILE_KINDS)}"
        )
        return
    if kind in ("gaussian", "bump"):
        if not _is_num(prof.get("width")) or prof.get("width", 0) <= 0:
            errors.append(f"initial.{name}: {kind} profile needs a positive width")
        if not _is_num(prof.get("amplitude", 1.0)):
            errors.append(f"initial.{name}: amplitude must be a finite number")
        if not _is_num(prof.get("center", 0.0)):
            errors.append(f"initial.{name}: center must be a finite number")
    if kind == "delta-net" and not has_net:
        errors.append(f"initial.{name}: kind 'delta-net' needs a delta_net section")


def validate_config(cfg: RunConfig) -> list:
    """All violations as section-prefixed messages; empty means valid."""
    errors: list = []
    for key in cfg.unknown_keys:
        errors.append(f"config: unknown top-level key {key!r}")

    g = cfg.grid
    grid_ok = True
    if not _is_num(g.get("x_min")) or not _is_num(g.get("x_max")):
        errors.append("grid: x_min and x_max must be finite numbers")
        grid_ok = False
    elif g["x_min"] >= g["x_max"]:
        errors.append("grid: x_min must be below x_max")
        grid_ok = False
    n = g.get("n")
    if not isinstance(n, int) or isinstance(n, bool) or n < 16:
        errors.append("grid: n must be an integer of at least 16")
        grid_ok = False

    m = cfg.mollifier
    moll_ok = True
    if m.get("kind") not in DEFAULT_SUPPORTS:
        errors.append(
            f"mollifier: unknown kind {m.get('kind')!r}; choose from "
            f"{', '.join(sorted(DEFAULT_SUPPORTS))}"
        )
        moll_ok = False
    sup = m.get("support")
    if sup is not None:
        if (not isinstance(sup, (list, tuple)) or len(sup) != 2
                or not all(_is_num(v) for v in sup) or sup[0] >= sup[1]):
            errors.append("mollifier: support must be a pair [lo, hi] with lo < hi")
            moll_ok = False
        elif moll_ok:
            if m["kind"] == "left" and sup[1] > 0:
                errors.append("mollifier: a left kernel needs support with hi <= 0")
                moll_ok = False
            if m["kind"] == "right" and sup[0] < 0:
                errors.append("mollifier: a right kernel needs support with lo >= 0")
                moll_ok = False

    s = cfg.scaling
    scaling_ok = True
    if s.get("kind") not in ("loglog", "powerlaw", "constant"):
        errors.append(
            f"scaling: unknown kind {s.get('kind')!r}; choose loglog, powerlaw or constant"
        )
        scaling_ok = False
    if not _is_num(s.get("c")) or s.get("c", 0) <= 0:
        errors.append("scaling: c must be a positive number")
        scaling_ok = False
    if s.get("kind") == "powerlaw":
        exp = s.get("exponent", 1.0)
        if not _is_num(exp) or not (0.0 < exp <= 1.0):
            errors.append("scaling: powerlaw exponent must lie in (0, 1]")
            scaling_ok = False

    eps_values = []
    if cfg.eps is not None:
        if not _is_num(cfg.eps) or cfg.eps <= 0:
            errors.append("eps: must be a positive number")
        else:
            eps_values.append(float(cfg.eps))
    if cfg.eps_schedule is not None:
        sched = cfg.eps_schedule
        if (not isinstance(sched, (list, tuple)) or len(sched) < 2
                or not all(_is_num(e) and e > 0 for e in sched)):
            errors.append("eps_schedule: must list at least 2 positive numbers")
        elif any(b >= a for a, b in zip(sched, sched[1:])):
            errors.append("eps_schedule: values must be strictly decreasing")
        else:
            eps_values.extend(float(e) for e in sched)
    if scaling_ok and s.get("kind") == "loglog":
        for e in eps_values:
            if e >= LOGLOG_EPS_MAX:
                errors.append(
                    f"scaling: loglog is only defined for eps < exp(-e) ~ "
                    f"{LOGLOG_EPS_MAX:.6g}; got eps={e:g}"
                )

    md = cfg.model
    if not _is_num(md.get("B0")):
        errors.append("model: B0 must be a finite number")
    if not _is_num(md.get("T")) or md.get("T", 0) <= 0:
        errors.append("model: T must be a positive number")
    if not _is_num(md.get("q")):
        errors.append("model: q must be a finite number")

    sv = cfg.solver
    dt = sv.get("dt")
    if dt != "auto" and (not _is_num(dt) or dt <= 0):
        errors.append("solver: dt must be a positive number or 'auto'")
    if sv.get("method") not in ("rk4", "picard"):
        errors.append(f"solver: unknown method {sv.get('method')!r}; choose rk4 or picard")
    se = sv.get("save_every")
    if not isinstance(se, int) or isinstance(se, bool) or se < 1:
        errors.append("solver: save_every must be a positive integer")
    if not _is_num(sv.get("picard_tol")) or sv.get("picard_tol", 0) <= 0:
        errors.append("solver: picard_tol must be a positive number")
    mi = sv.get("picard_max_iter")
    if not isinstance(mi, int) or isinstance(mi, bool) or mi < 1:
        errors.append("solver: picard_max_iter must be a positive integer")
    psi_ = sv.get("picard_subinterval")
    if psi_ is not None and (not _is_num(psi_) or psi_ <= 0):
        errors.append("solver: picard_subinterval must be positive when given")
    gf = sv.get("guard_factor")
    if not _is_num(gf) or gf <= 1.0:
        errors.append("solver: guard_factor must exceed 1")

    has_net = bool(cfg.delta_net)
    if has_net:
        dn = cfg.delta_net
        prof = dn.get("profile", {})
        if not isinstance(prof, dict) or prof.get("kind") not in DEFAULT_SUPPORTS:
            errors.append("delta_net: profile.kind must name a mollifier kind")
        for key in ("center", "mass", "width_scale", "width_power"):
            if not _is_num(dn.get(key)):
                errors.append(f"delta_net: {key} must be a finite number")
        if _is_num(dn.get("width_scale")) and dn["width_scale"] <= 0:
            errors.append("delta_net: width_scale must be positive")
        if _is_num(dn.get("width_power")) and dn["width_power"] <= 0:
            errors.append("delta_net: width_power must be positive")

    for name in ("E", "u", "sigma"):
        _check_profile(name, cfg.initial.get(name, {"kind": "zero"}), errors, has_net)
    for name in cfg.initial:
        if name not in ("E", "u", "sigma"):
            errors.append(f"initial: unknown field {name!r}; expected E, u, sigma")

    # dry checks across the eps values: every module precondition that a
    # run would hit is reported here, before anything is solved.  Grid
    # resolution is only checked for the single-run eps; schedule members
    # go through the family harnesses, which refine the grid themselves.
    if moll_ok and scaling_ok and grid_ok and eps_values:
        try:
            moll = build_mollifier(cfg)
            scl = build_scaling(cfg)
            grid = build_grid(cfg)
            net = build_delta_net(cfg) if (has_net and _uses_net(cfg)) else None
            single = float(cfg.eps) if _is_num(cfg.eps) else None
            for e in eps_values:
                nu = h_eval(scl, e)
                if e == single:
                    if nu < MIN_CELLS_PER_WIDTH * grid.dx:
                        errors.append(
                            f"regops: kernel width nu={nu:.6g} at eps={e:g} is below "
                            f"{MIN_CELLS_PER_WIDTH}*dx={MIN_CELLS_PER_WIDTH * grid.dx:.6g}; "
                            "the derivative stencil cannot resolve it (refine the grid)"
                        )
                    if net is not None:
                        w = net.half_width(e)
                        if w < MIN_CELLS_PER_WIDTH * grid.dx:
                            errors.append(
                                f"delta_net: width {w:.6g} at eps={e:g} is below "
                                f"{MIN_CELLS_PER_WIDTH}*dx={MIN_CELLS_PER_WIDTH * grid.dx:.6g}; "
                                "refine the grid or stop the schedule earlier"
                            )
                if net is not None:
                    lo, hi = net.support(e)
                    if lo < grid.x_min or hi > grid.x_max:
                        errors.append(
                            f"delta_net: support [{lo:g}, {hi:g}] at eps={e:g} "
                            "sticks out of the grid"
                        )
                if _is_num(dt) and dt > 0:
                    bound = step_bound(moll.l1_norm_deriv() / nu)
                    if dt > bound * (1.0 + 1e-12):
                        errors.append(
                            f"solver: dt={dt:g} exceeds the stable step bound "
                            f"{bound:.6g} at eps={e:g}; lower dt or use 'auto'"
                        )
        except ValueError as exc:
            errors.append(f"config: {exc}")

    if not isinstance(cfg.seed, int) or isinstance(cfg.seed, bool):
        errors.append("seed: must be an integer")
    return errors


# ---------------------------------------------------------------------------
# builders


def build_grid(cfg: RunConfig) -> Grid:
    g = cfg.grid
    return Grid(x_min=float(g["x_min"]), x_max=float(g["x_max"]), n=int(g["n"]))


def build_mollifier(cfg: RunConfig) -> Mollifier:
    m = cfg.mollifier
    sup = m.get("support")
    return make_mollifier(kind=m["kind"], support=tuple(sup) if sup else None)


def build_scaling(cfg: RunConfig) -> ScalingFunction:
    s = cfg.scaling
    return make_scaling(kind=s["kind"], c=float(s["c"]), exponent=float(s.get("exponent", 1.0)))


def build_delta_net(cfg: RunConfig) -> DeltaNet | None:
    if not cfg.delta_net:
        return None
    return net_from_spec(cfg.delta_net)


def build_solver_config(cfg: RunConfig, op_norm: float | None = None) -> SolverConfig:
    sv = cfg.solver
    dt = sv["dt"]
    if dt == "auto":
        if op_norm is None:
            raise ValueError("solver: dt 'auto' needs the operator norm to resolve")
        dt = 0.4 * step_bound(op_norm)
    return SolverConfig(
        dt=float(dt),
        method=sv["method"],
        save_every=int(sv["save_every"]),
        picard_tol=float(sv["picard_tol"]),
        picard_max_iter=int(sv["picard_max_iter"]),
        picard_subinterval=(
            None if sv["picard_subinterval"] is None else float(sv["picard_subinterval"])
        ),
        guard_factor=float(sv["guard_factor"]),
    )


def _profile_values(prof: dict, grid: Grid, eps: float, net: DeltaNet | None) -> np.ndarray:
    kind = prof["kind"]
    xs = grid.xs
    if kind == "zero":
        return np.zeros(grid.n)
    if kind == "gaussian":
        amp = float(prof.get("amplitude", 1.0))
        c = float(prof.get("center", 0.0))
        w = float(prof["width"])
        return amp * np.exp(-(((xs - c) / w) ** 2))
    if kind == "bump":
        amp = float(prof.get("amplitude", 1.0))
        c = float(prof.get("center", 0.0))
        w = float(prof["width"])
        s = (xs - c) / w
        out = np.zeros(grid.n)
        inside = np.abs(s) < 1.0
        out[inside] = amp * np.exp(1.0 - 1.0 / (1.0 - s[inside] ** 2))
        return out
    if kind == "delta-net":
        if net is None:
            raise ValueError("initial: delta-net profile without a delta_net section")
        return sample(net, eps, grid)
    raise ValueError(f"initial: unknown profile kind {kind!r}")


def build_initial_state(cfg: RunConfig, grid: Grid, eps: float,
                        net: DeltaNet | None = None) -> FieldState:
    if net is None:
        net = build_delta_net(cfg)
    fields = {
        name: _profile_values(cfg.initial[name], grid, eps, net)
        for name in ("E", "u", "sigma")
    }
    return FieldState(t=0.0, E=fields["E"], u=fields["u"], sigma=fields["sigma"])


@dataclass
class RunPieces:
    grid: Grid
    mollifier: Mollifier
    scaling: ScalingFunction
    eps: float
    nu: float
    net: DeltaNet | None
    operator: RegDerivOperator
    params: ModelParams
    initial: FieldState
    solver: SolverConfig


def _uses_net(cfg: RunConfig) -> bool:
    return any(cfg.initial[name]["kind"] == "delta-net" for name in ("E", "u", "sigma"))


def assemble_run(cfg: RunConfig, eps: float | None = None,
                 refine: bool = False) -> RunPieces:
    """Build every piece needed to solve one member of the family.

    With ``refine=False`` (single runs) no silent fixups happen: if the
    configured grid cannot resolve the kernel or the charge profile at
    this eps, the corresponding builder raises the same message
    ``validate_config`` would report.  The eps-family harnesses pass
    ``refine=True``, which treats the configured grid as a floor and
    halves the spacing until both widths span enough cells.
    """
    if eps is None:
        eps = cfg.eps
    if eps is None:
        raise ValueError("config: no eps given and none set in the config")
    eps = float(eps)
    moll = build_mollifier(cfg)
    scl = build_scaling(cfg)
    nu = h_eval(scl, eps)
    net = build_delta_net(cfg) if _uses_net(cfg) else None
    grid = build_grid(cfg)
    if refine:
        finest = nu if net is None else min(nu, net.half_width(eps))
        n = grid.n
        span = grid.x_max - grid.x_min
        while span / (n - 1) > finest / MIN_CELLS_PER_WIDTH:
            n = 2 * (n - 1) + 1
            if n > MAX_GRID_POINTS:
                raise ValueError(
                    f"grid: resolving width {finest:g} on [{grid.x_min:g}, "
                    f"{grid.x_max:g}] needs more than {MAX_GRID_POINTS} points; "
                    "shrink the domain or stop the eps schedule earlier"
                )
        if n != grid.n:
            grid = Grid(x_min=grid.x_min, x_max=grid.x_max, n=n)
    op = make_operator(moll, nu, grid)
    solver_cfg = build_solver_config(cfg, op_norm=op.op_norm)
    q = float(cfg.model["q"])
    if net is not None and cfg.initial["sigma"]["kind"] == "delta-net":
        q = net.mass
    params = ModelParams(B0=float(cfg.model["B0"]), T=float(cfg.model["T"]), eps=eps, q=q)
    initial = build_initial_state(cfg, grid, eps, net=net)
    return RunPieces(
        grid=grid, mollifier=moll, scaling=scl, eps=eps, nu=nu, net=net,
        operator=op, params=params, initial=initial, solver=solver_cfg,
    )
