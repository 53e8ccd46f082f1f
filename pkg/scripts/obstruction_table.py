#!/usr/bin/env python3
"""Why the point-charge family cannot converge distributionally.

Runs the release down an eps schedule and pairs Q = sigma - D_h E against
a test function centered on the diagonal x = t inside the vacuum
half-plane.  Confinement forces every pairing to vanish, yet any
distributional limit would have to produce the transported initial mass
there, a strictly positive number the table prints as the target.  The
two cannot be reconciled, which is the verdict the sweep reports.

Usage:
    python scripts/obstruction_table.py [--schedule 0.2 0.1 0.05] [--workers 3]
"""

import argparse
import sys

from maxlor.analysis import TestFunction2D, limit_sweep
from maxlor.config import config_from_dict


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--schedule", type=float, nargs="+", default=[0.2, 0.1, 0.05])
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--t0", type=float, default=0.3)
    ap.add_argument("--radius", type=float, default=0.1)
    args = ap.parse_args(argv)

    cfg = config_from_dict({
        "grid": {"x_min": -4.0, "x_max": 1.0, "n": 1001},
        "mollifier": {"kind": "left"},
        "scaling": {"kind": "constant", "c": 0.1},
        "model": {"B0": 0.0, "T": 0.5},
        "solver": {"save_every": 4},
        "delta_net": {"profile": {"kind": "left"}},
        "initial": {"E": {"kind": "zero"}, "u": {"kind": "zero"},
                    "sigma": {"kind": "delta-net"}},
    })
    psi = TestFunction2D(t0=args.t0, x0=args.t0, r_t=args.radius, r_x=args.radius)
    res = limit_sweep(cfg, args.schedule, [("Q", psi)], workers=args.workers)

    label = res.labels[0]
    print(f"observable {label}")
    print(f"{'eps':>8} {'pairing <Q, psi>':>18} {'status':>10}")
    for eps, val, status in zip(res.eps_schedule, res.pairings[label], res.statuses):
        shown = "aborted" if val is None else f"{val:18.6e}"
        print(f"{eps:8.4g} {shown:>18} {status:>10}")
    target = res.targets[label]
    if target is not None:
        print(f"required limit of a transported point charge: {target:.6e}")
    print(f"verdict: {res.verdicts[label]}")
    return 0 if not res.partial else 1


if __name__ == "__main__":
    sys.exit(main())
