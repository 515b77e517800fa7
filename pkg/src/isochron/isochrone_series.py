"""Coefficient recursions for isochronous restoring forces.

Write ``g(x) = x + a_2 x^2 + a_3 x^3 + ...`` and ``G = \\int_0^x g``.  The centre
is isochronous iff ``d/dx (G/g^2) = f(G)`` with ``f(G) = b_0 + b_1 G + ...``.
Every routine here works on the integrated form of that identity,

    R(x) = G/g^2 - 1/2 - \\int_0^x f(G(s)) ds  ==  0,

matched order by order in ``x``.  With ``g`` known through ``x^N``, ``R`` is
known through ``x^(N-1)``.  The coefficient of ``x^m`` in ``R`` is affine in
``a_(m+1)`` with slope ``-(m+1)/(m+2)`` and, for odd ``m = 2k+1``, affine in
``b_k`` with slope ``-1/(2^k (2k+1))``; everything else entering that
coefficient is of lower order.  That triangular structure drives all three
solvers below.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .series import Series, as_rational

DEFAULT_ORDER = 14


def _zero_like(values) -> Fraction | float:
    return 0.0 if any(isinstance(v, float) for v in values) else Fraction(0)


def relation_residual(g: Series, b: Sequence) -> Series:
    """``G/g^2 - 1/2 - \\int f(G)`` as a series of order ``g.order - 1``.

    ``g`` must be normalized (``g(0) = 0``, ``g'(0) = 1``); missing ``b_k``
    are zero.
    """
    n = g.order
    if n < 2:
        raise ValueError("need g through at least x^2")
    if g[0] != 0 or g[1] != 1:
        raise ValueError("g must satisfy g(0) = 0 and g'(0) = 1")
    G = g.integrate()                       # order n + 1
    Gt = G.shift_down(2)                    # G / x^2, order n - 1
    gt = g.shift_down(1).truncate(n - 1)    # g / x, order n - 1
    ratio = Gt * (gt * gt).reciprocal()
    zero = g[0] * 0
    fb = Series.from_coeffs(list(b)[: n - 1] or [zero], n - 1)
    fb = Series(tuple(c + zero for c in fb.coeffs))
    fG = fb.compose(G.truncate(n - 1))
    return ratio - Fraction(1, 2) - fG.integrate().truncate(n - 1)


def _a_slope(n: int) -> Fraction:
    # d R_{n-1} / d a_n
    return Fraction(-n, n + 1)


def _b_slope(k: int) -> Fraction:
    # d R_{2k+1} / d b_k
    return Fraction(-1, 2**k * (2 * k + 1))


@dataclass(frozen=True)
class IsochroneSeriesResult:
    """Output of :func:`odd_from_even`.

    ``b_coeffs[k]`` is the coefficient of ``G^k`` in ``f``, i.e.
    ``f^{(k)}(0) / k!``.
    """

    g_series: Series
    a_odd: dict
    b_coeffs: tuple


@dataclass(frozen=True)
class SeriesMatch:
    """Outcome of :func:`b_from_g`.

    When matching fails, ``mismatch_order`` is the power of ``x`` in
    ``G/g^2`` at which no choice of ``f`` works and ``residual`` is the
    offending coefficient.  ``b`` then holds the coefficients fixed before
    the failure.
    """

    b: tuple
    mismatch_order: int | None = None
    residual: Fraction | float | None = None
    order: int = field(default=DEFAULT_ORDER)

    @property
    def isochronous(self) -> bool:
        return self.mismatch_order is None


def odd_from_even(a_even: Mapping[int, object], order: int = DEFAULT_ORDER) -> IsochroneSeriesResult:
    """Complete a set of even coefficients ``a_2k`` into an isochronous ``g``.

    Missing even coefficients up to ``order`` are taken as zero.  Returns the
    unique odd coefficients and the ``b_k`` that make ``R`` vanish through
    ``x^(order-1)``.
    """
    if order < 3:
        raise ValueError("order must be at least 3")
    for idx in a_even:
        if idx < 2 or idx % 2:
            raise ValueError(f"a_{idx}: only even indices >= 2 are free")
        if idx > order:
            raise ValueError(f"a_{idx} lies beyond the truncation order {order}")
    evens = {k: (v if isinstance(v, float) else as_rational(v)) for k, v in a_even.items()}
    zero = _zero_like(evens.values())
    a = [zero, zero + 1] + [evens.get(k, zero) for k in range(2, order + 1)]
    b: list = []
    for m in range(1, order):
        if m % 2 == 0:
            n = m + 1                       # odd unknown a_n
            a[n] = zero
            r = relation_residual(Series(tuple(a)), b)[m]
            a[n] = -r / _a_slope(n)
        else:
            k = (m - 1) // 2
            b.append(zero)
            r = relation_residual(Series(tuple(a)), b)[m]
            b[k] = -r / _b_slope(k)
    g = Series(tuple(a))
    a_odd = {n: a[n] for n in range(3, order + 1, 2)}
    return IsochroneSeriesResult(g_series=g, a_odd=a_odd, b_coeffs=tuple(b))


def g_from_b(b: Sequence, order: int = DEFAULT_ORDER) -> Series:
    """Normalized ``g`` whose ``d/dx (G/g^2)`` equals ``sum b_k G^k``."""
    if order < 2:
        raise ValueError("order must be at least 2")
    bs = [v if isinstance(v, float) else as_rational(v) for v in b]
    zero = _zero_like(bs)
    a = [zero, zero + 1] + [zero] * (order - 1)
    for n in range(2, order + 1):
        m = n - 1
        r = relation_residual(Series(tuple(a)), bs)[m]
        a[n] = -r / _a_slope(n)
    return Series(tuple(a))


def b_from_g(g: Series, tol: float = 0.0) -> SeriesMatch:
    """Recover ``f``'s coefficients from ``g`` or report where matching fails.

    With exact coefficients ``tol`` should stay 0.  For float series the
    odd-order consistency test uses ``|residual| <= tol * scale`` with
    ``scale`` the largest ``|a_n|^(1/(n-1))`` power appearing in ``g``.
    """
    n = g.order
    scale = max([1.0] + [abs(float(g[k])) ** (1.0 / (k - 1)) for k in range(2, n + 1) if g[k] != 0])
    zero = g[0] * 0
    b: list = []
    for m in range(1, n):
        if m % 2 == 1:
            k = (m - 1) // 2
            b.append(zero)
            r = relation_residual(g, b)[m]
            b[k] = -r / _b_slope(k)
        else:
            r = relation_residual(g, b)[m]
            if (r != 0) if tol == 0 else (abs(r) > tol * scale**m):
                return SeriesMatch(b=tuple(b), mismatch_order=m, residual=r, order=n)
    return SeriesMatch(b=tuple(b), order=n)


def b_from_even_part(g: Series) -> tuple:
    """``f``'s coefficients as functions of the even coefficients of ``g`` alone.

    This is the ``f`` attached to an arbitrary ``g`` by the monotonicity
    criteria: odd coefficients are replaced by the isochronous completion.
    """
    evens = {k: g[k] for k in range(2, g.order + 1, 2)}
    return odd_from_even(evens, g.order).b_coeffs


def urabe_relation_check(g: Series) -> bool:
    """``g''''(0) == (35/9) g''(0)^3``, i.e. ``24 a_4 == (280/9) a_2^3``."""
    a2 = g[2] if g.order >= 2 else 0
    a4 = g[4] if g.order >= 4 else 0
    lhs, rhs = 24 * a4, Fraction(280, 9) * a2**3
    if isinstance(lhs, float) or isinstance(rhs, float):
        return abs(lhs - rhs) <= 1e-12 * max(1.0, abs(lhs), abs(rhs))
    return lhs == rhs


def leading_odd_coefficient(p: int, b: Sequence) -> Fraction:
    """Leading part ``-(2p+1) / (2^(p-1) (2p)(2p-1)) * b_(p-1)``.

    It is the coefficient of ``x^(2p)`` in ``g`` (the ``x^(2p+1)`` term of
    ``G`` up to the factor ``1/(2p+1)``) once ``b_0 .. b_(p-2)`` vanish.
    """
    if p < 1:
        raise ValueError("p must be >= 1")
    if len(b) < p:
        raise ValueError(f"need at least {p} b-coefficients")
    bp = b[p - 1] if isinstance(b[p - 1], float) else as_rational(b[p - 1])
    return -Fraction(2 * p + 1, 2 ** (p - 1) * (2 * p) * (2 * p - 1)) * bp


def g_coefficients_from_h(h_odd: Sequence, order: int = DEFAULT_ORDER) -> Series:
    """Taylor series of ``g`` from the odd Taylor coefficients of an Urabe ``h``.

    ``h_odd[k]`` is the coefficient of ``X^(2k+1)`` in ``h``.  Since
    ``f(G) = h'(sqrt(2G))``, ``b_k = (2k+1) 2^k h_odd[k]``.
    """
    b = [(2 * k + 1) * 2**k * c for k, c in enumerate(h_odd)]
    return g_from_b(b, order)
