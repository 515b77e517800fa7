"""Monotonicity and isochronicity tests for the period function.

``phi = d/dx (G/g^2)`` carries everything: the period derivative is the
integral over ``[0, b]`` of ``phi(x) - phi(A(x))`` against a positive weight,
so comparing ``phi`` on the two sides of the well with a polynomial ``f_n(G)``
certifies the sign of ``T'``, and ``phi(x) = phi(A(x))`` everywhere is
isochronicity.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Callable, Optional

import numpy as np

from .isochrone_series import DEFAULT_ORDER, b_from_g, odd_from_even
from .period import (
    DEFAULT_NODES,
    default_c_max,
    distance_identity_check,
    energy_grid,
    involution_at,
    period_scan,
    phi,
    turning_points,
)
from .potentials import Potential

RESIDUAL_TOL = 1e-9
SPREAD_TOL = 1e-7
STRICT_MARGIN = 1e-12
SERIES_FLOAT_TOL = 1e-9
GRID_SIZE = 200

__all__ = [
    "FnPolynomial",
    "IsochronyReport",
    "phi",
    "fn_polynomial",
    "f_constants_from_derivatives",
    "cn_monotonicity",
    "theorem_b_residual",
    "corollary_33_residual",
    "corollary_34_solution",
    "corollary_36_residual",
    "chebyshev_grid",
    "isochrony_verdict",
]


@dataclass(frozen=True)
class FnPolynomial:
    """``f_n(G) = sum_k coeffs[k] G^k`` with ``coeffs[k] = f^(k)(0) / k!``."""

    n: int
    coeffs: tuple

    def __call__(self, G):
        G = np.asarray(G, dtype=float)
        acc = np.zeros_like(G)
        for c in reversed(self.coeffs):
            acc = acc * G + float(c)
        return acc if acc.ndim else float(acc)

    def derivatives(self) -> tuple:
        """``f(0), f'(0), ..., f^(n)(0)``."""
        return tuple(c * math.factorial(k) for k, c in enumerate(self.coeffs))

    def antiderivative(self) -> Callable:
        """``F(G) = \\int_0^G f_n``."""
        cs = [c / (k + 1) for k, c in enumerate(self.coeffs)]

        def F(G):
            G = np.asarray(G, dtype=float)
            acc = np.zeros_like(G)
            for c in reversed(cs):
                acc = acc * G + float(c)
            return acc * G

        return F


def fn_polynomial(P: Potential, n: int) -> FnPolynomial:
    """Taylor polynomial of ``f`` of degree ``n`` from the even derivatives of ``g`` at 0.

    The coefficients are those of the isochronous completion of ``g``'s even
    part, which is how ``f^(k)(0)`` depends on ``g``.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    order = max(2 * n + 2, 3)
    t = P.taylor(order)
    if t is None:
        raise ValueError(f"{P.name}: Taylor data through x^{order} required")
    evens = {k: t[k] for k in range(2, order + 1, 2)}
    b = odd_from_even(evens, order).b_coeffs
    return FnPolynomial(n=n, coeffs=tuple(b[: n + 1]))


def f_constants_from_derivatives(g2, g4, g6=0):
    """``f(0), f'(0), f''(0)`` in terms of ``g''(0), g''''(0), g^(6)(0)``.

    ``f(0) = -g''/3``, ``f'(0) = (7/9) g''^3 - g''''/5`` and
    ``f''(0) = -g^(6)/21 - (155/27) g''^5 + 2 g''^2 g''''``.
    """
    g2, g4, g6 = (v if isinstance(v, float) else Fraction(v) for v in (g2, g4, g6))
    f0 = -g2 / 3
    f1 = Fraction(7, 9) * g2**3 - g4 / 5
    f2 = -g6 / 21 - Fraction(155, 27) * g2**5 + 2 * g2**2 * g4
    return f0, f1, f2


def chebyshev_grid(b: float, size: int = GRID_SIZE) -> np.ndarray:
    """``size`` Chebyshev points of the first kind on ``(0, b)``, increasing."""
    k = np.arange(1, size + 1)
    return 0.5 * b * (1.0 - np.cos((2 * k - 1) * math.pi / (2 * size)))


def default_grid(P: Potential, size: int = GRID_SIZE) -> np.ndarray:
    return chebyshev_grid(turning_points(P, default_c_max(P)).b, size)


def _chain_terms(P: Potential, fn: Callable, x_grid):
    x = np.asarray(x_grid, dtype=float)
    A = involution_at(P, x)[0]
    return phi(P, x), fn(P.G(x)), phi(P, A)


def cn_monotonicity(
    P: Potential, n: int, x_grid=None, fn: FnPolynomial | None = None,
    margin: float = STRICT_MARGIN, iso_tol: float = RESIDUAL_TOL,
) -> str:
    """Check the chain ``phi(x) > f_n(G(x)) > phi(A(x))`` (or its reverse) on the grid.

    Returns ``"Increasing"``, ``"Decreasing"``, ``"Isochronous"`` or
    ``"Inconclusive"``.  Strict verdicts need a margin above ``margin`` at
    every grid point.
    """
    x = default_grid(P) if x_grid is None else np.asarray(x_grid, dtype=float)
    if np.any(x <= 0):
        raise ValueError("grid must lie in (0, b_bar)")
    fn = fn_polynomial(P, n) if fn is None else fn
    left, mid, right = _chain_terms(P, fn, x)
    if np.all(np.abs(left - mid) <= iso_tol) and np.all(np.abs(right - mid) <= iso_tol):
        return "Isochronous"
    up, down = left - mid, mid - right
    if np.all(up > margin) and np.all(down > margin):
        return "Increasing"
    if np.all(up < -margin) and np.all(down < -margin):
        return "Decreasing"
    return "Inconclusive"


def theorem_b_residual(P: Potential, x_grid) -> float:
    """``max |phi(x) - phi(A(x))|``: zero iff ``phi`` is a function of ``G`` alone."""
    x = np.asarray(x_grid, dtype=float)
    A = involution_at(P, x)[0]
    return float(np.max(np.abs(phi(P, x) - phi(P, A))))


def corollary_33_residual(P: Potential, x_grid, F: Callable) -> float:
    """``max |2 G - x g - g F(G)|`` over the grid."""
    x = np.asarray(x_grid, dtype=float)
    G, g = P.G(x), P.g(x)
    return float(np.max(np.abs(2.0 * G - x * g - g * F(G))))


_T_NODES, _T_WEIGHTS = np.polynomial.legendre.leggauss(64)
_T_NODES, _T_WEIGHTS = 0.5 * (_T_NODES + 1.0), 0.5 * _T_WEIGHTS


def corollary_34_solution(F: Callable, G_grid, check_origin: bool = True) -> np.ndarray:
    """``x(G) = sqrt(2G) (1 + \\int_0^G F(v) / (2v)^(3/2) dv)``.

    With ``v = G t^2`` this is ``sqrt(2G) + \\int_0^1 F(G t^2)/t^2 dt``, whose
    integrand is bounded because ``F(v) = O(v)``.
    """
    if check_origin:
        f0 = float(np.asarray(F(np.array([0.0])))[0])
        if f0 != 0.0:
            raise ValueError("F must vanish at 0")
    G = np.asarray(G_grid, dtype=float)
    if np.any(G < 0):
        raise ValueError("G must be non-negative")
    vals = F(G[..., None] * _T_NODES**2) / _T_NODES**2
    return np.sqrt(2.0 * G) + vals @ _T_WEIGHTS


def corollary_36_residual(P: Potential, x_grid, F: Callable) -> float:
    """``max |2 G dA/dG - A - F(G)|`` with ``dA/dG = A'(x) / g(x)``."""
    x = np.asarray(x_grid, dtype=float)
    A, A1, _ = involution_at(P, x)
    G = P.G(x)
    return float(np.max(np.abs(2.0 * G * A1 / P.g(x) - A - F(G))))


@dataclass
class IsochronyReport:
    family: str
    series_verdict: str
    pointwise_residual: float
    distance_residual: float
    scan_spread: float
    verdict: str
    criterion_order: Optional[int] = None
    series_residual: Optional[str] = None
    tolerances: dict = field(default_factory=dict)
    grids: dict = field(default_factory=dict)

    @property
    def isochronous(self) -> bool:
        return self.verdict == "Isochronous"

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self, manifest: dict | None = None) -> str:
        doc = self.to_dict()
        if manifest is not None:
            doc["manifest"] = manifest
        return json.dumps(doc, indent=2, sort_keys=True)


def series_verdict(P: Potential, order: int = DEFAULT_ORDER):
    """``("isochronous-to-order-N" | "mismatch at order m" | "unavailable", residual)``."""
    t = P.taylor(order)
    if t is None:
        return "unavailable", None
    match = b_from_g(t, tol=0.0 if t.is_exact() else SERIES_FLOAT_TOL)
    if match.isochronous:
        return f"isochronous-to-order-{order}", None
    return f"mismatch at order {match.mismatch_order}", str(match.residual)


def isochrony_verdict(
    P: Potential, grid_size: int = GRID_SIZE, scan_count: int = 20, nodes: int = DEFAULT_NODES,
    max_criterion_order: int = 3, order: int = DEFAULT_ORDER,
) -> IsochronyReport:
    """Combine the series test, the ``phi``-symmetry residual, the distance
    identity and a coarse period scan into one verdict.

    ``Isochronous`` requires every available test within tolerance.
    Otherwise the first ``n <= max_criterion_order`` whose chain holds on
    the grid decides ``Increasing`` or ``Decreasing``.
    """
    c_max = default_c_max(P)
    b = turning_points(P, c_max).b
    x = chebyshev_grid(b, grid_size)
    sv, sres = series_verdict(P, order)
    residual = theorem_b_residual(P, x)
    distance = float(np.max(np.abs(distance_identity_check(P, x))))
    scan = period_scan(P, energy_grid(P, scan_count, c_max=c_max), nodes, derivative=False)
    spread = scan.spread
    tests_ok = (
        residual <= RESIDUAL_TOL
        and distance <= RESIDUAL_TOL
        and spread <= SPREAD_TOL
        and not sv.startswith("mismatch")
    )
    verdict, used = "Inconclusive", None
    if tests_ok:
        verdict = "Isochronous"
    elif P.taylor_fn is not None:
        for n in range(max_criterion_order + 1):
            v = cn_monotonicity(P, n, x)
            if v in ("Increasing", "Decreasing"):
                verdict, used = v, n
                break
    return IsochronyReport(
        family=P.spec or P.name,
        series_verdict=sv,
        series_residual=sres,
        pointwise_residual=residual,
        distance_residual=distance,
        scan_spread=spread,
        verdict=verdict,
        criterion_order=used,
        tolerances={"residual": RESIDUAL_TOL, "spread": SPREAD_TOL, "strict_margin": STRICT_MARGIN},
        grids={"x_points": grid_size, "x_max": b, "energies": scan_count, "c_max": c_max, "nodes": nodes},
    )
