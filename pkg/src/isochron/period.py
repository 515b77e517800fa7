"""Turning points, the involution ``A``, the period ``T(c)`` and its derivative.

All integrals use the substitution ``G(x) = c sin^2(theta)`` (``x`` on the
side of ``sign(theta)``), which turns

    T(c)  = sqrt(2) \\int_a^b dx / sqrt(c - G(x))
    T'(c) = 1/(c sqrt 2) \\int_a^b (g^2 - 2 G g') / (g^2 sqrt(c - G)) dx

into integrals of analytic functions over ``[-pi/2, pi/2]``:

    T(c)  = 2 \\int u(x)/g(x) dtheta,              u = sign(x) sqrt(2 G(x)),
    T'(c) = sqrt(2/c) \\int phi(x) sin(theta) dtheta,   phi = d/dx (G/g^2).

Gauss-Legendre in ``theta`` is then spectrally accurate.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .potentials import DomainError, Potential
from .roots import solve_increasing
from .series import Series

DEFAULT_NODES = 256
DEFAULT_C_CAP = 2.0
NEAR_ZERO = 1e-3
SURROGATE_ORDER = 8
SPREAD_TOL = 1e-7


@dataclass(frozen=True)
class Orbit:
    c: float
    a: float
    b: float


@dataclass(frozen=True)
class PeriodSample:
    c: float
    T: float
    T_prime: float


def default_c_max(P: Potential) -> float:
    """``0.9 c_bar`` for finite ``c_bar``, otherwise :data:`DEFAULT_C_CAP`."""
    return 0.9 * P.cbar if math.isfinite(P.cbar) else DEFAULT_C_CAP


def _check_energy(P: Potential, c) -> None:
    c = np.asarray(c, dtype=float)
    if np.any(c <= 0) or np.any(c >= P.cbar):
        raise DomainError(f"energy must lie in (0, {P.cbar}) for {P.name}")


def _u(P: Potential, x):
    x = np.asarray(x, dtype=float)
    return np.sign(x) * np.sqrt(2.0 * np.maximum(P.G(x), 0.0))


def invert_u(P: Potential, s):
    """Solve ``sign(x) sqrt(2 G(x)) = s`` elementwise (``s = 0`` gives 0)."""
    s = np.asarray(s, dtype=float)
    out = np.zeros_like(s)
    lo_edge, hi_edge = P.domain
    for side, edge in ((1.0, hi_edge), (-1.0, lo_edge)):
        m = side * s > 0
        if not m.any():
            continue
        t = side * s[m]
        if math.isfinite(edge):
            hi = np.full_like(t, abs(edge))
            x0 = np.where(t < 0.5 * abs(edge), t, 0.5 * abs(edge))
        else:
            hi = np.maximum(2.0 * t, 1.0)
            for _ in range(1100):
                short = side * _u(P, side * hi) < t
                if not short.any():
                    break
                hi = np.where(short, 2.0 * hi, hi)
            x0 = np.minimum(t, hi)

        def f(y, side=side):
            return side * _u(P, side * y)

        def df(y, side=side):
            x = side * y
            return P.g(x) / _u(P, x)

        out[m] = side * solve_increasing(f, df, t, np.zeros_like(t), hi, x0=x0)
    return out if out.ndim else float(out)


def turning_points(P: Potential, c: float) -> Orbit:
    """The orbit at energy ``c``: ``G(a) = G(b) = c`` with ``a < 0 < b``."""
    _check_energy(P, c)
    r = math.sqrt(2.0 * c)
    a, b = invert_u(P, np.array([-r, r]))
    return Orbit(c=float(c), a=float(a), b=float(b))


@lru_cache(maxsize=256)
def _phi_series(P: Potential) -> Series | None:
    if P.taylor_fn is None:
        return None
    n = SURROGATE_ORDER + 2
    g = P.taylor(n)
    G = g.integrate()
    ratio = G.shift_down(2) * (g.shift_down(1) * g.shift_down(1)).reciprocal()
    return ratio.derive().truncate(SURROGATE_ORDER).to_float()


def _phi_near_zero(P: Potential, x):
    s = _phi_series(P)
    if s is not None:
        return s(x)
    if P.d2g is None:
        raise ValueError(f"{P.name}: no Taylor data or g'' to evaluate phi near 0")
    return -P.d2g(np.zeros_like(x)) / 3.0


def phi(P: Potential, x):
    """``d/dx (G/g^2) = (g^2 - 2 G g') / g^3``, with a Taylor surrogate near 0."""
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    near = np.abs(x) < NEAR_ZERO
    if near.any():
        out[near] = _phi_near_zero(P, x[near])
    far = ~near
    if far.any():
        xf = x[far]
        g, G, dg = P.g(xf), P.G(xf), P.dg(xf)
        out[far] = (g * g - 2.0 * G * dg) / g**3
    return out if out.ndim else float(out)


def involution_at(P: Potential, x):
    """``A(x)`` with ``G(A) = G(x)``, ``A x < 0``, and its first two derivatives."""
    x = np.asarray(x, dtype=float)
    if np.any(~P.contains(x)):
        raise DomainError(f"x outside the domain {P.domain} of {P.name}")
    A = np.asarray(invert_u(P, -_u(P, x)), dtype=float)
    zero = x == 0
    xs = np.where(zero, 1.0, x)
    As = np.where(zero, -1.0, A)
    with np.errstate(all="ignore"):
        gA = P.g(As)
        A1 = P.g(xs) / gA
        A2 = (P.dg(xs) - P.dg(As) * A1 * A1) / gA
    if zero.any():
        d2 = _phi_series(P)
        g2 = -3.0 * float(d2[0]) if d2 is not None else float(P.d2g(0.0))
        A1 = np.where(zero, -1.0, A1)
        A2 = np.where(zero, -2.0 * g2 / 3.0, A2)
    if A.ndim == 0:
        return float(A), float(A1), float(A2)
    return A, A1, A2


@lru_cache(maxsize=16)
def _gl(nodes: int):
    t, w = np.polynomial.legendre.leggauss(nodes)
    return 0.5 * math.pi * t, 0.5 * math.pi * w


def _orbit_points(P: Potential, c: float, nodes: int):
    theta, w = _gl(nodes)
    s = math.sqrt(2.0 * c) * np.sin(theta)
    return theta, w, s, invert_u(P, s)


def period(P: Potential, c: float, nodes: int = DEFAULT_NODES) -> float:
    """Minimal period ``T(c)`` of the orbit at energy ``c``."""
    _check_energy(P, c)
    theta, w, s, x = _orbit_points(P, float(c), nodes)
    with np.errstate(all="ignore"):
        ratio = np.where(s == 0, 1.0, s / P.g(x))
    return float(2.0 * (ratio @ w))


def period_derivative(P: Potential, c: float, nodes: int = DEFAULT_NODES) -> float:
    """``dT/dc`` at energy ``c``."""
    _check_energy(P, c)
    theta, w, s, x = _orbit_points(P, float(c), nodes)
    return float(math.sqrt(2.0 / c) * ((phi(P, x) * np.sin(theta)) @ w))


@dataclass
class ScanTable:
    samples: list
    spread_tol: float = SPREAD_TOL

    @property
    def c(self) -> np.ndarray:
        return np.array([s.c for s in self.samples])

    @property
    def T(self) -> np.ndarray:
        return np.array([s.T for s in self.samples])

    @property
    def T_prime(self) -> np.ndarray:
        return np.array([s.T_prime for s in self.samples])

    @property
    def spread(self) -> float:
        T = self.T
        return float(T.max() - T.min())

    @property
    def max_deviation_from_2pi(self) -> float:
        return float(np.max(np.abs(self.T - 2.0 * math.pi)))

    def monotonicity(self) -> str:
        """``constant`` (spread within tolerance), ``increasing``, ``decreasing`` or ``mixed``."""
        if self.spread <= self.spread_tol:
            return "constant"
        d = np.diff(self.T)
        if np.all(d > 0):
            return "increasing"
        if np.all(d < 0):
            return "decreasing"
        return "mixed"

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["c", "T", "Tprime"])
        for s in self.samples:
            w.writerow([format(s.c, ".17g"), format(s.T, ".17g"), format(s.T_prime, ".17g")])
        return buf.getvalue()

    def to_records(self) -> list:
        return [{"c": s.c, "T": s.T, "Tprime": s.T_prime} for s in self.samples]

    def to_json(self, manifest: dict | None = None) -> str:
        doc = {
            "manifest": manifest or {},
            "monotonicity": self.monotonicity(),
            "spread": self.spread,
            "samples": self.to_records(),
        }
        return json.dumps(doc, indent=2, sort_keys=True)


def energy_grid(P: Potential, count: int, c_min: float | None = None, c_max: float | None = None) -> np.ndarray:
    """``count`` equally spaced energies in ``(0, c_max]``."""
    c_max = default_c_max(P) if c_max is None else c_max
    c_min = c_max / count if c_min is None else c_min
    if not 0 < c_min <= c_max < P.cbar:
        raise DomainError(f"need 0 < c_min <= c_max < {P.cbar}")
    return np.linspace(c_min, c_max, count)


def period_scan(P: Potential, c_grid, nodes: int = DEFAULT_NODES, derivative: bool = True) -> ScanTable:
    grid = np.asarray(c_grid, dtype=float)
    if grid.size > 1 and np.any(np.diff(grid) <= 0):
        raise ValueError("energy grid must be strictly increasing")
    samples = [
        PeriodSample(float(c), period(P, c, nodes), period_derivative(P, c, nodes) if derivative else math.nan)
        for c in grid
    ]
    return ScanTable(samples)


def abel_turning_distance(P: Potential, c: float, nodes: int = DEFAULT_NODES, abel_nodes: int = 64):
    """``(b - a, (1/(pi sqrt 2)) \\int_0^c T(y)/sqrt(c - y) dy)``.

    The second integral uses ``y = c sin^2(psi)``, which leaves the smooth
    integrand ``2 sqrt(c) T(c sin^2 psi) sin psi`` on ``[0, pi/2]``.
    """
    orb = turning_points(P, c)
    t, w = np.polynomial.legendre.leggauss(abel_nodes)
    psi, w = 0.25 * math.pi * (t + 1.0), 0.25 * math.pi * w
    Ts = np.array([period(P, c * math.sin(p) ** 2, nodes) for p in psi])
    rhs = (2.0 * math.sqrt(c) * (Ts * np.sin(psi)) @ w) / (math.pi * math.sqrt(2.0))
    return orb.b - orb.a, float(rhs)


def distance_identity_check(P: Potential, x):
    """``x - A(x) - 2 sqrt(2 G(x))``; vanishes identically for isochronous wells."""
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise DomainError("distance identity is evaluated at x > 0")
    A = involution_at(P, x)[0]
    r = x - A - 2.0 * np.sqrt(2.0 * P.G(x))
    return r if np.ndim(r) else float(r)
