"""Vectorized safeguarded Newton iteration for monotone scalar equations."""

from __future__ import annotations

import numpy as np

EPS = np.finfo(float).eps


class RootFindingError(RuntimeError):
    """Bracketing or convergence failure; carries the offending brackets."""

    def __init__(self, message, lo=None, hi=None):
        super().__init__(message)
        self.lo = lo
        self.hi = hi


def solve_increasing(f, df, target, lo, hi, x0=None, xtol=1e-15, maxiter=200):
    """Solve ``f(y) = target`` elementwise for ``y`` in ``[lo, hi]``.

    ``f`` must be increasing on every bracket with ``f(lo) <= target <= f(hi)``.
    Newton steps are taken from ``x0`` (default: bracket midpoint) and
    replaced by bisection whenever they leave the current bracket, so the
    iteration always terminates inside the bracket.
    """
    target = np.asarray(target, dtype=float)
    lo = np.broadcast_to(np.asarray(lo, dtype=float), target.shape).copy()
    hi = np.broadcast_to(np.asarray(hi, dtype=float), target.shape).copy()
    if x0 is None:
        y = 0.5 * (lo + hi)
    else:
        y = np.clip(np.broadcast_to(np.asarray(x0, dtype=float), target.shape), lo, hi).copy()
    active = np.ones(target.shape, dtype=bool)
    for _ in range(maxiter):
        idx = np.nonzero(active)
        if idx[0].size == 0:
            return y
        ya = y[idx]
        with np.errstate(all="ignore"):
            r = f(ya) - target[idx]
            d = df(ya)
        la, ha = lo[idx], hi[idx]
        la = np.where(r < 0, ya, la)
        ha = np.where(r > 0, ya, ha)
        with np.errstate(all="ignore"):
            yn = ya - r / d
        bad = ~np.isfinite(yn) | (yn <= la) | (yn >= ha)
        yn = np.where(bad, 0.5 * (la + ha), yn)
        yn = np.where(r == 0, ya, yn)
        step = np.abs(yn - ya)
        done = (r == 0) | (step <= xtol * np.abs(yn) + 1e-300) | (ha - la <= 2 * EPS * np.abs(yn))
        lo[idx], hi[idx], y[idx] = la, ha, yn
        active[idx] = ~done
    if active.any():
        raise RootFindingError(
            f"no convergence after {maxiter} iterations for {int(active.sum())} point(s)",
            lo=lo[active], hi=hi[active],
        )
    return y
