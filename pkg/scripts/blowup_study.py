#!/usr/bin/env python3
"""Growth of the peak interaction density sigma*a(u) as eps shrinks.

Usage:
    python scripts/blowup_study.py [--schedule 0.2 0.1 0.05 0.025] [--t-final 0.25]
"""

import argparse
import sys

from maxlor.analysis import blow_up_probe
from maxlor.config import assemble_run, config_from_dict
from maxlor.solver import solve


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--schedule", type=float, nargs="+",
                    default=[0.2, 0.1, 0.05, 0.025])
    ap.add_argument("--t-final", type=float, default=0.25)
    ap.add_argument("--window", type=float, default=0.25)
    args = ap.parse_args(argv)

    cfg = config_from_dict({
        "grid": {"x_min": -4.0, "x_max": 1.0, "n": 1001},
        "mollifier": {"kind": "left"},
        "scaling": {"kind": "constant", "c": 0.1},
        "model": {"B0": 0.0, "T": args.t_final},
        "solver": {"save_every": 4},
        "delta_net": {"profile": {"kind": "left"}},
        "initial": {"E": {"kind": "zero"}, "u": {"kind": "zero"},
                    "sigma": {"kind": "delta-net"}},
    })
    sols = []
    for eps in args.schedule:
        pieces = assemble_run(cfg, eps=eps, refine=True)
        sol = solve(pieces.initial, pieces.solver, pieces.operator, pieces.params)
        if sol.status != "ok":
            print(f"eps={eps:g}: aborted ({sol.status})", file=sys.stderr)
            return 1
        sols.append(sol)

    rep = blow_up_probe(sols, window=args.window)
    print(f"{'eps':>8} {'peak sigma*a(u)':>16}")
    for eps, peak in zip(rep.eps_values, rep.peaks):
        print(f"{eps:8.4g} {peak:16.6e}")
    print(f"fitted growth exponent (peak ~ eps^-p): p = {rep.exponent:.4g}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
