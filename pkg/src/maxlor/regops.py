"""Regularized spatial derivative: convolution with a scaled kernel derivative.

The operator ``D f = phi'_nu * f`` with ``phi'_nu(x) = phi'(x/nu) / nu^2``
replaces the spatial derivative everywhere in the model.  On a grid it is a
short stencil applied by direct summation with zero padding.

Stencil weights are the exact per-cell integrals of ``phi'_nu``; by the
fundamental theorem of calculus these are differences of ``phi_nu`` sampled
at the midpoints between grid offsets:

    w_j = phi_nu((j + 1/2) dx) - phi_nu((j - 1/2) dx).

The weight sum then telescopes to zero exactly, so constants are
annihilated and charge sums are conserved to rounding.  Point-sampling
``phi'_nu`` instead would alias the kernel derivative and stall the
convergence of the operator in nu once ``nu/dx`` is modest.

Orientation: ``apply(op, f)(x) = sum_j w_j f(x - y_j)``, so a kernel
supported on ``[-nu, 0]`` reads f only on ``[x, x + nu]``.  One-sided
support confinement in the solver relies on this exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fields import Grid
from .mollifier import Mollifier, make_mollifier

__all__ = ["RegDerivOperator", "make_operator", "operator_for_meta"]

MIN_CELLS_PER_WIDTH = 4


@dataclass(eq=False)
class RegDerivOperator:
    mollifier: Mollifier
    nu: float
    grid: Grid
    offsets: np.ndarray       # integer grid offsets j with nonzero weight
    weights: np.ndarray       # derivative-kernel weights, sum exactly ~0
    smooth_weights: np.ndarray  # mollify weights on the same offsets, sum 1
    op_norm: float            # cached bound ||phi'||_L1 / nu

    def apply(self, f: np.ndarray) -> np.ndarray:
        """Regularized derivative of f with zero padding outside the grid."""
        return self._convolve(f, self.weights)

    def mollify(self, f: np.ndarray) -> np.ndarray:
        """Smoothing ``phi_nu * f``; preserves the discrete mass of f."""
        return self._convolve(f, self.smooth_weights)

    def _convolve(self, f: np.ndarray, kernel: np.ndarray) -> np.ndarray:
        f = np.asarray(f, dtype=float)
        if f.shape != (self.grid.n,):
            raise ValueError(
                f"regops: field length {f.shape} does not match grid n={self.grid.n}"
            )
        full = np.convolve(f, kernel)
        j_min = int(self.offsets[0])
        out = np.zeros_like(f)
        idx = np.arange(self.grid.n) - j_min
        valid = (idx >= 0) & (idx < len(full))
        out[valid] = full[idx[valid]]
        return out


def _trim_zeros(offsets: np.ndarray, *weight_arrays: np.ndarray):
    keep = np.zeros(len(offsets), dtype=bool)
    for w in weight_arrays:
        keep |= w != 0.0
    nz = np.nonzero(keep)[0]
    if len(nz) == 0:
        raise ValueError("regops: kernel sampled to an empty stencil")
    sl = slice(nz[0], nz[-1] + 1)
    return (offsets[sl],) + tuple(w[sl] for w in weight_arrays)


def make_operator(m: Mollifier, nu: float, grid: Grid) -> RegDerivOperator:
    """Precompute the stencil for kernel width nu on the given grid.

    Fails when the kernel is not resolved by at least four grid cells; an
    under-resolved kernel silently degrades every downstream experiment, so
    this is checked here rather than at use sites.
    """
    dx = grid.dx
    if not nu > 0.0:
        raise ValueError(f"regops: kernel width nu must be positive, got {nu}")
    if nu < MIN_CELLS_PER_WIDTH * dx:
        raise ValueError(
            f"regops: kernel width nu={nu:.6g} under-resolved on grid spacing "
            f"dx={dx:.6g}; need nu >= {MIN_CELLS_PER_WIDTH}*dx = {MIN_CELLS_PER_WIDTH * dx:.6g}"
        )
    j_min = int(np.floor(nu * m.s_lo / dx - 0.5))
    j_max = int(np.ceil(nu * m.s_hi / dx + 0.5))
    js = np.arange(j_min, j_max + 1)
    edges_hi = m.eval((js + 0.5) * dx / nu) / nu
    edges_lo = m.eval((js - 0.5) * dx / nu) / nu
    deriv_w = edges_hi - edges_lo
    smooth_w = m.eval(js * dx / nu) / nu * dx
    js, deriv_w, smooth_w = _trim_zeros(js, deriv_w, smooth_w)
    # project to exact zero sum (derivative kernel) and exact unit sum (smoother)
    deriv_w = deriv_w - deriv_w.sum() / len(deriv_w)
    deriv_w = deriv_w - deriv_w.sum() / len(deriv_w)
    smooth_w = smooth_w / smooth_w.sum()
    return RegDerivOperator(
        mollifier=m,
        nu=float(nu),
        grid=grid,
        offsets=js,
        weights=deriv_w,
        smooth_weights=smooth_w,
        op_norm=m.l1_norm_deriv() / nu,
    )


def operator_for_meta(meta: dict, grid: Grid) -> RegDerivOperator:
    """Rebuild the operator a solution was produced with from its metadata."""
    ms = meta["mollifier"]
    m = make_mollifier(ms["kind"], (ms["s_lo"], ms["s_hi"]))
    return make_operator(m, meta["nu"], grid)
