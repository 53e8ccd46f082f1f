#!/usr/bin/env python3
"""Convergence orders of the regularized derivative on a smooth wave.

Applies the kernel derivative to sin(x) over a halving sequence of widths
and reports max-norm errors against cos(x) away from the boundary fringe.
Symmetric kernels come out second order in the width, one-sided causal
kernels first order.

Usage:
    python scripts/operator_orders.py [--widths 0.2 0.1 0.05] [--dx 0.005]
"""

import argparse
import sys

import numpy as np

from maxlor.fields import Grid
from maxlor.mollifier import make_mollifier
from maxlor.regops import make_operator


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--widths", type=float, nargs="+", default=[0.2, 0.1, 0.05],
                    help="kernel widths, largest first")
    ap.add_argument("--dx", type=float, default=0.005, help="grid spacing")
    ap.add_argument("--half-span", type=float, default=10.0,
                    help="grid covers [-half_span, half_span]")
    ap.add_argument("--kinds", nargs="+", default=["symmetric", "left", "right"])
    args = ap.parse_args(argv)

    widths = sorted(args.widths, reverse=True)
    n = int(round(2.0 * args.half_span / args.dx)) + 1
    grid = Grid(-args.half_span, args.half_span, n)
    f = np.sin(grid.xs)
    exact = np.cos(grid.xs)

    print(f"{'kernel':<10} {'width':>8} {'max error':>12} {'order':>7}")
    for kind in args.kinds:
        moll = make_mollifier(kind)
        prev = None
        for nu in widths:
            op = make_operator(moll, nu, grid)
            fringe = int(np.ceil(2.0 * nu / grid.dx)) + 2
            sl = slice(fringe, grid.n - fringe)
            err = float(np.max(np.abs(op.apply(f)[sl] - exact[sl])))
            order = "" if prev is None else f"{np.log2(prev / err):7.3f}"
            print(f"{kind:<10} {nu:8.4g} {err:12.4e} {order:>7}")
            prev = err
    return 0


if __name__ == "__main__":
    sys.exit(main())
