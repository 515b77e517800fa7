"""Potentials ``G`` with restoring force ``g = G'`` and the isochronous families.

Every isochronous family here is built from its Urabe function ``h``: with
``X = sign(x) sqrt(2 G(x))`` one has ``x = X + H(X)`` (``H' = h``), hence

    g = X / (1 + h(X)),    d/dx (G/g^2) = h'(X).

Closed-form families supply a cancellation-free ``X(x)``; :func:`potential_from_h`
inverts ``x = X + H(X)`` numerically instead.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Callable, Optional

import numpy as np
from scipy.integrate import quad, quad_vec

from .isochrone_series import DEFAULT_ORDER, g_coefficients_from_h, g_from_b
from .roots import RootFindingError, solve_increasing
from .series import Series, as_rational

INF = math.inf


class FamilySpecError(ValueError):
    """A family specification is malformed or violates a parameter constraint."""


class DomainError(ValueError):
    """Evaluation point or energy outside the potential's validity domain."""


@dataclass(frozen=True)
class Potential:
    """A normalized potential well ``G`` on ``domain = (a_bar, b_bar)``.

    ``cbar`` is the supremum of energies carrying closed orbits (may be
    ``inf``).  ``taylor_fn(N)`` returns the Taylor series of ``g`` at 0 through
    ``x^N`` when available.  ``f`` and ``F`` are the known ``d/dx(G/g^2)`` as a
    function of ``G`` and its antiderivative, for isochronous families.
    """

    name: str
    G: Callable
    g: Callable
    dg: Callable
    domain: tuple
    cbar: float
    d2g: Optional[Callable] = None
    taylor_fn: Optional[Callable[[int], Series]] = None
    f: Optional[Callable] = None
    F: Optional[Callable] = None
    spec: str = ""

    def taylor(self, order: int = DEFAULT_ORDER) -> Optional[Series]:
        return None if self.taylor_fn is None else self.taylor_fn(order)

    def contains(self, x) -> np.ndarray:
        lo, hi = self.domain
        x = np.asarray(x, dtype=float)
        return (x > lo) & (x < hi)


# --------------------------------------------------------------------------
# family specifications
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Harmonic:
    pass


@dataclass(frozen=True)
class Urabe:
    alpha: object


@dataclass(frozen=True)
class Isotonic:
    alpha: object


@dataclass(frozen=True)
class ThreeParam:
    alpha: object
    beta: object
    gamma: object = 1


@dataclass(frozen=True)
class Stillinger:
    alpha: object
    gamma: object = 1


@dataclass(frozen=True)
class BolotinMcKay:
    alpha: object


@dataclass(frozen=True)
class SeriesFamily:
    g: Series


@dataclass(frozen=True)
class HSpec:
    """Odd Urabe function ``h`` with ``|h| < 1`` on ``(-X_max, X_max)``.

    ``H`` (antiderivative with ``H(0) = 0``) is optional and computed by
    Gauss-Legendre quadrature when missing.  ``h_taylor[k]`` is the
    coefficient of ``X^(2k+1)``; ``h_taylor_fn(K)`` may supply ``K`` of them.
    """

    h: Callable
    dh: Callable
    X_max: float = INF
    H: Optional[Callable] = None
    d2h: Optional[Callable] = None
    h_taylor_fn: Optional[Callable[[int], list]] = None
    name: str = "h"


@dataclass(frozen=True)
class FromH:
    hspec: HSpec


def _num(v) -> float:
    return float(v)


def _binom_half(k: int, power: Fraction) -> Fraction:
    """Generalized binomial coefficient C(power, k)."""
    out = Fraction(1)
    for j in range(k):
        out *= (power - j) / (j + 1)
    return out


def _exactish(v):
    return v if isinstance(v, float) else as_rational(v)


# --------------------------------------------------------------------------
# generic h-family assembly
# --------------------------------------------------------------------------


def _assemble_from_X(name, X_of_x, h, dh, d2h, H, domain, cbar, taylor_fn, spec):
    """Potential from a map ``x -> X`` and the Urabe function ``h``."""

    def G(x):
        X = X_of_x(np.asarray(x, dtype=float))
        return 0.5 * X * X

    def g(x):
        X = X_of_x(np.asarray(x, dtype=float))
        return X / (1.0 + h(X))

    def dg(x):
        X = X_of_x(np.asarray(x, dtype=float))
        hp = 1.0 + h(X)
        return (hp - X * dh(X)) / hp**3

    d2g_fn = None
    if d2h is not None:
        def d2g_fn(x):
            X = X_of_x(np.asarray(x, dtype=float))
            Xp = 1.0 / (1.0 + h(X))
            h1 = dh(X)
            return Xp**4 * (-3.0 * h1 - X * d2h(X) + 3.0 * X * h1 * h1 * Xp)

    def f(Gv):
        return dh(np.sqrt(2.0 * np.asarray(Gv, dtype=float)))

    F = None
    if H is not None:
        def F(Gv):
            X = np.sqrt(2.0 * np.asarray(Gv, dtype=float))
            return X * h(X) - H(X)

    return Potential(
        name=name, G=G, g=g, dg=dg, d2g=d2g_fn, domain=domain, cbar=cbar,
        taylor_fn=taylor_fn, f=f, F=F, spec=spec,
    )


def _harmonic(spec="harmonic") -> Potential:
    return Potential(
        name="harmonic",
        G=lambda x: 0.5 * np.asarray(x, dtype=float) ** 2,
        g=lambda x: np.asarray(x, dtype=float) * 1.0,
        dg=lambda x: np.ones_like(np.asarray(x, dtype=float)),
        d2g=lambda x: np.zeros_like(np.asarray(x, dtype=float)),
        domain=(-INF, INF),
        cbar=INF,
        taylor_fn=lambda n: Series.from_coeffs([0, 1], n),
        f=lambda Gv: np.zeros_like(np.asarray(Gv, dtype=float)),
        F=lambda Gv: np.zeros_like(np.asarray(Gv, dtype=float)),
        spec=spec,
    )


def _urabe(alpha, spec) -> Potential:
    a = _num(alpha)
    if a == 0:
        return replace(_harmonic(spec), name="urabe")
    edge = -1.0 / (2.0 * a)
    domain = (edge, INF) if a > 0 else (-INF, edge)

    def X_of_x(x):
        return 2.0 * x / (1.0 + np.sqrt(1.0 + 2.0 * a * x))

    ex = _exactish(alpha)
    return _assemble_from_X(
        "urabe", X_of_x,
        h=lambda X: a * X,
        dh=lambda X: a + 0.0 * X,
        d2h=lambda X: 0.0 * X,
        H=lambda X: 0.5 * a * X * X,
        domain=domain, cbar=1.0 / (2.0 * a * a),
        taylor_fn=lambda n: g_from_b([ex], n),
        spec=spec,
    )


def _isotonic(alpha, spec) -> Potential:
    a = _num(alpha)
    if a == 0:
        return replace(_harmonic(spec), name="isotonic")
    edge = -1.0 / a
    domain = (edge, INF) if a > 0 else (-INF, edge)

    def X_of_x(x):
        return x * (2.0 + a * x) / (2.0 * (1.0 + a * x))

    ex = _exactish(alpha)
    return _assemble_from_X(
        "isotonic", X_of_x,
        h=lambda X: a * X / np.sqrt(1.0 + a * a * X * X),
        dh=lambda X: a * (1.0 + a * a * X * X) ** -1.5,
        d2h=lambda X: -3.0 * a**3 * X * (1.0 + a * a * X * X) ** -2.5,
        H=lambda X: (np.sqrt(1.0 + a * a * X * X) - 1.0) / a,
        domain=domain, cbar=INF,
        taylor_fn=lambda n: g_coefficients_from_h(
            [ex * _binom_half(k, Fraction(-1, 2)) * ex ** (2 * k) for k in range(n // 2 + 1)], n),
        spec=spec,
    )


def _three_X(y, a, b):
    """Cancellation-free ``X`` of the three-parameter family at ``gamma = 1``."""
    s = np.sqrt(2.0 * (2.0 + b * y * y + 4.0 * a * y))
    p = 2.0 * a + b * y
    with np.errstate(all="ignore"):
        rational = y * (4.0 * a + b * y) / (p + a * s)
        direct = (p - a * s) / (b - 2.0 * a * a)
    return np.where(p * a > 0, rational, direct)


def _three_base(alpha, beta, spec) -> Potential:
    a, b = _num(alpha), _num(beta)
    if a == 0:
        return replace(_harmonic(spec), name="three")
    if b == 0:
        return replace(_urabe(alpha, spec), name="three")
    if b > 2 * a * a:
        domain, cbar = (-INF, INF), INF
    elif b == 2 * a * a:
        edge = -1.0 / a
        domain, cbar = ((edge, INF) if a > 0 else (-INF, edge)), INF
    else:
        Xs = 1.0 / math.sqrt(a * a - b / 2.0)
        Hs = (2.0 * a / b) * (math.sqrt(1.0 + b * Xs * Xs / 2.0) - 1.0)
        domain, cbar = (-Xs + Hs, Xs + Hs), 0.5 * Xs * Xs

    ea, eb = _exactish(alpha), _exactish(beta)
    return _assemble_from_X(
        "three", lambda x: _three_X(x, a, b),
        h=lambda X: a * X / np.sqrt(1.0 + 0.5 * b * X * X),
        dh=lambda X: a * (1.0 + 0.5 * b * X * X) ** -1.5,
        d2h=lambda X: -1.5 * a * b * X * (1.0 + 0.5 * b * X * X) ** -2.5,
        H=lambda X: (2.0 * a / b) * (np.sqrt(1.0 + 0.5 * b * X * X) - 1.0),
        domain=domain, cbar=cbar,
        taylor_fn=lambda n: g_coefficients_from_h(
            [ea * _binom_half(k, Fraction(-1, 2)) * (eb / 2) ** k for k in range(n // 2 + 1)], n),
        spec=spec,
    )


def scale_potential(P: Potential, gamma) -> Potential:
    """``G(gamma x) / gamma^2``: same normalization, ``T_new(c) = T(gamma^2 c)``."""
    c = _num(gamma)
    if c == 0:
        raise FamilySpecError("gamma must be nonzero")
    if c == 1:
        return P
    lo, hi = P.domain[0] / c, P.domain[1] / c
    domain = (min(lo, hi), max(lo, hi))
    taylor_fn = None
    if P.taylor_fn is not None:
        eg = _exactish(gamma)

        def taylor_fn(n):
            base = P.taylor_fn(n)
            return Series(tuple(base[k] * eg ** (k - 1) if k else base[0] for k in range(n + 1)))

    f = None if P.f is None else (lambda Gv: c * P.f(c * c * np.asarray(Gv, dtype=float)))
    F = None if P.F is None else (lambda Gv: P.F(c * c * np.asarray(Gv, dtype=float)) / c)
    return Potential(
        name=P.name,
        G=lambda x: P.G(c * np.asarray(x, dtype=float)) / (c * c),
        g=lambda x: P.g(c * np.asarray(x, dtype=float)) / c,
        dg=lambda x: P.dg(c * np.asarray(x, dtype=float)),
        d2g=None if P.d2g is None else (lambda x: c * P.d2g(c * np.asarray(x, dtype=float))),
        domain=domain,
        cbar=P.cbar / (c * c),
        taylor_fn=taylor_fn, f=f, F=F,
        spec=P.spec,
    )


def _series_potential(gs: Series, spec) -> Potential:
    if gs.order < 1 or gs[0] != 0 or gs[1] != 1:
        raise FamilySpecError("series potentials need g(0) = 0 and g'(0) = 1")
    gcoef = np.array([float(c) for c in gs.coeffs])
    Gcoef = np.concatenate([[0.0], gcoef / np.arange(1, gcoef.size + 1)])
    dgcoef = gcoef[1:] * np.arange(1, gcoef.size)
    d2gcoef = dgcoef[1:] * np.arange(1, dgcoef.size) if dgcoef.size > 1 else np.zeros(1)

    def horner(c):
        rc = c[::-1]
        return lambda x: np.polyval(rc, np.asarray(x, dtype=float))

    Gf = horner(Gcoef)
    roots = np.roots(gcoef[::-1]) if np.any(gcoef[2:]) else np.array([0.0])
    real = roots[np.abs(roots.imag) <= 1e-12 * np.maximum(1.0, np.abs(roots))].real
    pos, neg = real[real > 1e-14], real[real < -1e-14]
    b_bar = float(pos.min()) if pos.size else INF
    a_bar = float(neg.max()) if neg.size else -INF
    cbar = min(float(Gf(a_bar)) if math.isfinite(a_bar) else INF,
               float(Gf(b_bar)) if math.isfinite(b_bar) else INF)

    def taylor_fn(n):
        cs = list(gs.coeffs[: n + 1])
        return Series.from_coeffs(cs + [gs[0] * 0] * (n + 1 - len(cs)), n)

    return Potential(
        name="series", G=Gf, g=horner(gcoef), dg=horner(dgcoef), d2g=horner(d2gcoef),
        domain=(a_bar, b_bar), cbar=cbar, taylor_fn=taylor_fn, spec=spec,
    )


# --------------------------------------------------------------------------
# h-function route
# --------------------------------------------------------------------------

def _quadrature_H(h):
    """``H(X) = X \\int_0^1 h(X t) dt`` by adaptive quadrature, vectorized over ``X``."""

    def H(X):
        X = np.asarray(X, dtype=float)
        flat = X.reshape(-1)
        val, _ = quad_vec(lambda t: flat * h(flat * t), 0.0, 1.0, epsabs=1e-300, epsrel=1e-14)
        return val.reshape(X.shape) if X.ndim else float(val[0])

    return H


def _edge(weight) -> float:
    """``\\int_0^inf weight``; ``inf`` unless ``weight`` decays faster than ``1/s``."""
    probe = 1e8
    if probe * abs(float(weight(probe))) > 1e-6:
        return INF
    val, _ = quad(weight, 0.0, INF, epsabs=1e-14, epsrel=1e-13, limit=200)
    return float(val)


def potential_from_h(spec: HSpec, tol: float = 1e-14, name: str | None = None, spec_str: str = "") -> Potential:
    """Isochronous potential whose Urabe function is ``spec.h``.

    ``X(x)`` is obtained by safeguarded Newton on ``X + H(X) = x`` bracketed
    in ``|X|`` by ``[|x|/2, X_hi]``.
    """
    h, dh = spec.h, spec.dh
    Xm = spec.X_max
    probe = np.linspace(-1.0, 1.0, 401) * (Xm if math.isfinite(Xm) else 50.0)
    probe = probe[1:-1]
    hv = h(probe)
    if np.any(np.abs(hv) >= 1.0) or np.any(np.abs(hv + h(-probe)) > 1e-12 * (1 + np.abs(hv))):
        raise FamilySpecError(f"{spec.name}: h must be odd with |h| < 1 on (-X_max, X_max)")
    H = spec.H if spec.H is not None else _quadrature_H(h)

    def x_of_X(X):
        return X + H(X)

    if math.isfinite(Xm):
        x_lo, x_hi = float(x_of_X(-Xm)), float(x_of_X(Xm))
        cbar = 0.5 * Xm * Xm
    else:
        # x(+-inf) = +-\\int_0^inf (1 +- h); finite only where h tends to -+1
        x_hi = _edge(lambda t: 1.0 + float(h(np.array(t))))
        x_lo = -_edge(lambda t: 1.0 - float(h(np.array(t))))
        cbar = INF

    def X_of_x(x):
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        for side in (1.0, -1.0):
            m = (side * x) > 0
            if not m.any():
                continue
            t = side * x[m]
            lo = 0.5 * t
            if math.isfinite(Xm):
                hi = np.full_like(t, Xm)
            else:
                hi = np.maximum(2.0 * t, 1.0)
                for _ in range(200):
                    short = side * x_of_X(side * hi) < t
                    if not short.any():
                        break
                    hi = np.where(short, 2.0 * hi, hi)
            y = solve_increasing(
                lambda u: side * x_of_X(side * u),
                lambda u: 1.0 + h(side * u),
                t, lo, hi, x0=t, xtol=tol,
            )
            out[m] = side * y
        return out if out.ndim else float(out)

    taylor_fn = None
    if spec.h_taylor_fn is not None:
        taylor_fn = lambda n: g_coefficients_from_h(spec.h_taylor_fn(n // 2 + 1), n)

    return _assemble_from_X(
        name or spec.name, X_of_x, h=h, dh=dh, d2h=spec.d2h, H=H,
        domain=(x_lo, x_hi), cbar=cbar, taylor_fn=taylor_fn, spec=spec_str,
    )


def h_preset(name: str, **params) -> HSpec:
    """Named Urabe functions.

    ``three`` (alpha, beta), ``bmk`` (alpha), ``isotonic`` (alpha),
    ``urabe`` (alpha), ``others1`` (alpha, beta; beta defaults to
    ``sqrt(2 alpha / 3)``), ``others2`` (alpha) and ``zero``.
    """
    p = {k: _exactish(v) for k, v in params.items()}

    def need(*keys):
        missing = [k for k in keys if k not in p]
        if missing:
            raise FamilySpecError(f"h preset {name!r} needs parameter(s) {', '.join(missing)}")
        return [float(p[k]) for k in keys]

    if name == "zero":
        z = lambda X: 0.0 * np.asarray(X, dtype=float)
        return HSpec(h=z, dh=z, d2h=z, H=z, name="zero", h_taylor_fn=lambda K: [Fraction(0)] * K)
    if name in ("three", "bmk", "isotonic"):
        if name == "three":
            a, b = need("alpha", "beta")
            ea, eb = p["alpha"], p["beta"]
        else:
            (a,) = need("alpha")
            ea = p["alpha"]
            eb = 2 * ea if name == "bmk" else 2 * ea * ea
            b = float(eb)
        if b < 2 * a * a:
            raise FamilySpecError(f"h preset {name!r}: constraint 2*alpha**2 <= beta violated")
        Xm = INF
        if b == 0:
            return h_preset("urabe", alpha=ea)
        return HSpec(
            h=lambda X: a * X / np.sqrt(1.0 + 0.5 * b * X * X),
            dh=lambda X: a * (1.0 + 0.5 * b * X * X) ** -1.5,
            d2h=lambda X: -1.5 * a * b * X * (1.0 + 0.5 * b * X * X) ** -2.5,
            H=lambda X: (2.0 * a / b) * (np.sqrt(1.0 + 0.5 * b * X * X) - 1.0),
            X_max=Xm, name=name,
            h_taylor_fn=lambda K: [ea * _binom_half(k, Fraction(-1, 2)) * (eb / 2) ** k for k in range(K)],
        )
    if name == "urabe":
        (a,) = need("alpha")
        ea = p["alpha"]
        return HSpec(
            h=lambda X: a * np.asarray(X, dtype=float),
            dh=lambda X: a + 0.0 * np.asarray(X, dtype=float),
            d2h=lambda X: 0.0 * np.asarray(X, dtype=float),
            H=lambda X: 0.5 * a * np.asarray(X, dtype=float) ** 2,
            X_max=1.0 / abs(a), name="urabe",
            h_taylor_fn=lambda K: [ea] + [ea * 0] * (K - 1),
        )
    if name == "others1":
        (a,) = need("alpha")
        ea = p["alpha"]
        if "beta" in p:
            eb = p["beta"]
        else:
            eb = math.sqrt(2.0 * a / 3.0)
        b2 = float(eb) ** 2
        eb2 = eb * eb
        if b2 <= 0:
            raise FamilySpecError("h preset 'others1': beta must be nonzero")
        if 2.0 * abs(a) / (3.0 * math.sqrt(b2)) >= 1.0:
            raise FamilySpecError("h preset 'others1': need 2|alpha|/(3|beta|) < 1 so that |h| < 1")

        def h1(X):
            u = 1.0 + b2 * X * X
            return a * (X / (3.0 * u**1.5) + 2.0 * X / (3.0 * np.sqrt(u)))

        def taylor(K):
            # h = a X [ (1/3)(1+b2 X^2)^(-3/2) + (2/3)(1+b2 X^2)^(-1/2) ]
            return [ea * (Fraction(1, 3) * _binom_half(k, Fraction(-3, 2))
                          + Fraction(2, 3) * _binom_half(k, Fraction(-1, 2))) * eb2**k
                    for k in range(K)]

        return HSpec(
            h=h1,
            dh=lambda X: a * (1.0 + b2 * X * X) ** -2.5,
            d2h=lambda X: -5.0 * a * b2 * X * (1.0 + b2 * X * X) ** -3.5,
            H=lambda X: a * (1.0 + 2.0 * b2 * X * X) / (3.0 * b2 * np.sqrt(1.0 + b2 * X * X)) - a / (3.0 * b2),
            X_max=INF, name="others1", h_taylor_fn=taylor,
        )
    if name == "others2":
        (a,) = need("alpha")
        ea = p["alpha"]
        if a == 0:
            return h_preset("zero")
        # |h| = 1 where (alpha X)^2 = (sqrt(5) - 1) / 2
        Xm = math.sqrt((math.sqrt(5.0) - 1.0) / 2.0) / abs(a)

        def taylor(K):
            # h = a X (2 + a^2 X^2) (1 + a^2 X^2)^(-3/2)
            c = [_binom_half(k, Fraction(-3, 2)) * ea ** (2 * k) for k in range(K)]
            return [ea * (2 * c[k] + (ea * ea * c[k - 1] if k else 0)) for k in range(K)]

        return HSpec(
            h=lambda X: a * X * (2.0 + a * a * X * X) * (1.0 + a * a * X * X) ** -1.5,
            dh=lambda X: a * (2.0 - a * a * X * X) * (1.0 + a * a * X * X) ** -2.5,
            d2h=lambda X: 3.0 * a**3 * X * (a * a * X * X - 4.0) * (1.0 + a * a * X * X) ** -3.5,
            H=lambda X: a * X * X / np.sqrt(1.0 + a * a * X * X),
            X_max=Xm, name="others2", h_taylor_fn=taylor,
        )
    raise FamilySpecError(f"unknown h preset {name!r}")


# --------------------------------------------------------------------------
# construction and parsing
# --------------------------------------------------------------------------


def make_family(spec, spec_str: str = "") -> Potential:
    """Build the potential described by a family specification object."""
    if isinstance(spec, Harmonic):
        return _harmonic(spec_str or "harmonic")
    if isinstance(spec, Urabe):
        return _urabe(spec.alpha, spec_str)
    if isinstance(spec, Isotonic):
        if _num(spec.alpha) == 0:
            raise FamilySpecError("isotonic: alpha must be nonzero")
        return _isotonic(spec.alpha, spec_str)
    if isinstance(spec, ThreeParam):
        a, b, c = _num(spec.alpha), _num(spec.beta), _num(spec.gamma)
        if c == 0:
            raise FamilySpecError("three: gamma must be nonzero")
        if b != 0 and 2 * a * a > b:
            raise FamilySpecError("three: constraint 2*alpha**2 <= beta violated")
        return scale_potential(_three_base(spec.alpha, spec.beta, spec_str), spec.gamma)
    if isinstance(spec, Stillinger):
        a = _num(spec.alpha)
        if not 0 <= a <= 1:
            raise FamilySpecError("stillinger: constraint 0 <= alpha <= 1 (2*alpha**2 <= beta = 2*alpha) violated")
        if _num(spec.gamma) == 0:
            raise FamilySpecError("stillinger: gamma must be nonzero")
        P = _three_base(spec.alpha, 2 * _exactish(spec.alpha), spec_str)
        return replace(scale_potential(P, spec.gamma), name="stillinger")
    if isinstance(spec, BolotinMcKay):
        a = _num(spec.alpha)
        if not 0 <= a <= 1:
            raise FamilySpecError("bmk: constraint 0 <= alpha <= 1 (2*alpha**2 <= beta = 2*alpha) violated")
        return replace(_three_base(spec.alpha, 2 * _exactish(spec.alpha), spec_str), name="bmk")
    if isinstance(spec, SeriesFamily):
        return _series_potential(spec.g, spec_str)
    if isinstance(spec, FromH):
        return potential_from_h(spec.hspec, spec_str=spec_str)
    raise FamilySpecError(f"unsupported family specification {spec!r}")


_KEYS = {
    "urabe": ("alpha",),
    "isotonic": ("alpha",),
    "three": ("alpha", "beta", "gamma"),
    "stillinger": ("alpha", "gamma"),
    "bmk": ("alpha",),
}


def _parse_params(body: str) -> dict:
    out = {}
    if not body:
        return out
    for item in body.split(","):
        if "=" not in item:
            raise FamilySpecError(f"expected key=value, got {item!r}")
        k, v = item.split("=", 1)
        k = k.strip()
        if k in out:
            raise FamilySpecError(f"duplicate parameter {k!r}")
        out[k] = v.strip()
    return out


def _rational(key, text):
    try:
        return as_rational(text)
    except (ValueError, ZeroDivisionError):
        raise FamilySpecError(f"{key}: {text!r} is not a rational number") from None


def parse_family(text: str):
    """Parse the CLI family grammar into a specification object.

    Examples: ``harmonic``, ``urabe:alpha=0.3``, ``three:alpha=0.2,beta=0.5,gamma=1``,
    ``series:a2=0,a3=1``, ``h:preset=others1,alpha=0.5``.
    """
    text = text.strip()
    kind, _, body = text.partition(":")
    kind = kind.strip().lower()
    params = _parse_params(body)
    if kind == "harmonic":
        if params:
            raise FamilySpecError("harmonic takes no parameters")
        return Harmonic()
    if kind in _KEYS:
        allowed = _KEYS[kind]
        extra = set(params) - set(allowed)
        if extra:
            raise FamilySpecError(f"{kind}: unknown parameter(s) {', '.join(sorted(extra))}")
        vals = {k: _rational(k, v) for k, v in params.items()}
        required = [k for k in allowed if k != "gamma"]
        missing = [k for k in required if k not in vals]
        if missing:
            raise FamilySpecError(f"{kind}: missing parameter(s) {', '.join(missing)}")
        cls = {"urabe": Urabe, "isotonic": Isotonic, "three": ThreeParam,
               "stillinger": Stillinger, "bmk": BolotinMcKay}[kind]
        return cls(**vals)
    if kind == "series":
        order = int(params.pop("order", 0) or 0)
        coeffs = {}
        for k, v in params.items():
            m = re.fullmatch(r"a(\d+)", k)
            if not m or int(m.group(1)) < 2:
                raise FamilySpecError(f"series: keys are a2, a3, ... (coefficients of g), got {k!r}")
            coeffs[int(m.group(1))] = _rational(k, v)
        n = max([order, 2] + list(coeffs))
        cs = [Fraction(0), Fraction(1)] + [coeffs.get(i, Fraction(0)) for i in range(2, n + 1)]
        return SeriesFamily(Series(tuple(cs)))
    if kind == "h":
        name = params.pop("preset", None)
        if name is None:
            raise FamilySpecError("h: preset=<name> is required")
        vals = {k: _rational(k, v) for k, v in params.items()}
        return FromH(h_preset(name, **vals))
    raise FamilySpecError(f"unknown family {kind!r}")


def family_from_string(text: str) -> Potential:
    return make_family(parse_family(text), spec_str=text.strip())


def taylor_of(P: Potential, order: int = DEFAULT_ORDER) -> Series:
    """Taylor coefficients of ``g`` at 0 (exact when the parameters are rational)."""
    s = P.taylor(order)
    if s is None:
        raise ValueError(f"{P.name}: no Taylor data available")
    return s


# --------------------------------------------------------------------------
# closed forms as printed for the families (independent evaluators)
# --------------------------------------------------------------------------


def urabe_G_sqrt_form(alpha, x):
    """``4/a^2 - (2/a)(x + 2 sqrt(1 - a x)/a)``.

    Its ``d/dx(G/g^2)`` is ``-a/2``; it equals ``Urabe(-a/2)``.
    """
    a = float(alpha)
    x = np.asarray(x, dtype=float)
    return 4.0 / a**2 - (2.0 / a) * (x + 2.0 * np.sqrt(1.0 - a * x) / a)


def isotonic_G_rational(alpha, x):
    a = float(alpha)
    x = np.asarray(x, dtype=float)
    return (a * x + 1.0 - 1.0 / (a * x + 1.0)) ** 2 / (8.0 * a * a)


def isotonic_G_quotient(alpha, x):
    """``x^2 (2 + a x)^2 / (4 (1 + a x)^2)`` as displayed; equals twice the normalized well."""
    a = float(alpha)
    x = np.asarray(x, dtype=float)
    return 0.25 * x * x * (2.0 + a * x) ** 2 / (1.0 + a * x) ** 2


def three_param_G_expanded(alpha, beta, x):
    """The ``gamma = 1`` potential written as one fraction."""
    a, b = float(alpha), float(beta)
    x = np.asarray(x, dtype=float)
    root = np.sqrt(2.0 * (2.0 + b * x * x + 4.0 * a * x))
    num = 8 * a * a + (b + 2 * a * a) * (4 * a * x + b * x * x) - (4 * a * a + 2 * a * b * x) * root
    return num / (2.0 * (b - 2 * a * a) ** 2)


def three_param_G_closed(alpha, beta, gamma, x):
    a, b, c = float(alpha), float(beta), float(gamma)
    x = np.asarray(x, dtype=float)
    root = np.sqrt(2.0 * (2.0 + b * c * c * x * x + 4.0 * a * c * x))
    return (2 * a + b * c * x - a * root) ** 2 / (2 * c * c * (b - 2 * a * a) ** 2)


def three_param_involution_closed(alpha, beta, gamma, x):
    a, b, c = float(alpha), float(beta), float(gamma)
    x = np.asarray(x, dtype=float)
    root = np.sqrt(2.0 * (2.0 + b * c * c * x * x + 4.0 * a * c * x))
    return x - 2.0 * (2 * a + b * c * x - a * root) / (c * (b - 2 * a * a))


def stillinger_G_closed(alpha, gamma, x):
    """``[1 + c x - sqrt(1 + a c^2 x^2 + 2 a c x)]^2 / (2 (1-a)^2)``, unnormalized.

    Its curvature at 0 is ``gamma^2``; divide by ``gamma^2`` for ``g'(0) = 1``.
    """
    a, c = float(alpha), float(gamma)
    x = np.asarray(x, dtype=float)
    return (1.0 + c * x - np.sqrt(1.0 + a * c * c * x * x + 2.0 * a * c * x)) ** 2 / (2.0 * (1.0 - a) ** 2)


def bolotin_mckay_G_closed(alpha, x):
    return stillinger_G_closed(alpha, 1.0, x)


def three_param_g_as_printed(alpha, beta, gamma, x):
    """The derivative formula printed below the three-parameter family, read literally.

    Kept to document that it disagrees with ``d/dx G``; see the tests.
    """
    a, b, c = float(alpha), float(beta), float(gamma)
    x = np.asarray(x, dtype=float)
    root = np.sqrt(2.0 * (2.0 + b * c * c * x * x + 4.0 * a * c * x))
    inner = 2 * a + b * c * x - a * root
    return inner * (b * c - a * (4 * b * c * c * x + 8 * a * c) / root) / (c * c * (b - 2 * a * a) ** 2)
