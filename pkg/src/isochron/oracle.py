"""Period measured by direct integration of ``x' = y, y' = -g(x)``.

This path shares nothing with the quadrature engine except the turning point
used as initial condition: the orbit is integrated with an explicit
Dormand-Prince 8(5,3) scheme and the return to ``{y = 0, x > 0}`` is located
by root finding on the dense output.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .period import turning_points
from .potentials import Potential


class OracleError(RuntimeError):
    pass


@dataclass(frozen=True)
class SimConfig:
    step: float = 1e-3
    tol: float = 1e-12
    max_time: float = 100 * 2 * math.pi

    def __post_init__(self):
        if not self.tol > 0 or not self.step > 0:
            raise ValueError("step and tol must be positive")


@dataclass(frozen=True)
class SimResult:
    T: float
    half: float
    energy_drift: float
    drift_warning: bool


def _leg(P: Potential, y0, t0, direction, cfg: SimConfig):
    def rhs(t, z):
        return [z[1], -float(P.g(z[0]))]

    def section(t, z):
        return z[1]

    section.terminal = True
    section.direction = direction
    sol = solve_ivp(
        rhs, (t0, cfg.max_time), y0, method="DOP853", rtol=cfg.tol, atol=cfg.tol * 1e-2,
        first_step=cfg.step, events=section, dense_output=True,
    )
    if sol.status != 1 or not len(sol.t_events[0]):
        raise OracleError(f"no return to the section before t = {cfg.max_time}")
    return sol.t_events[0][0], sol.y_events[0][0]


def simulate_period(P: Potential, c: float, cfg: SimConfig | None = None) -> SimResult:
    """Integrate from ``(b(c), 0)`` until the orbit re-crosses ``y = 0`` at ``x > 0``.

    The first leg stops where ``y`` crosses zero upwards (the left turning
    point, half a period); the second stops where ``y`` crosses zero
    downwards, back at ``x = b``.  Starting each leg on the section with the
    opposite crossing direction keeps the start point from registering.
    """
    cfg = cfg or SimConfig()
    b = turning_points(P, c).b
    # leaving (b, 0), y becomes negative; it returns to 0 from below at x = a
    t_half, z_half = _leg(P, [b, 0.0], 0.0, +1, cfg)
    T, z_end = _leg(P, [z_half[0], 0.0], t_half, -1, cfg)
    energy = 0.5 * z_end[1] ** 2 + float(P.G(z_end[0]))
    drift = abs(energy - c) / c
    flag = drift > 100 * cfg.tol
    if flag:
        warnings.warn(f"energy drift {drift:.3e} exceeds 100*tol", RuntimeWarning, stacklevel=2)
    return SimResult(T=float(T), half=float(t_half), energy_drift=float(drift), drift_warning=bool(flag))
