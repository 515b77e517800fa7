"""Truncated power series with exact (or floating) coefficients.

A :class:`Series` of order ``N`` stores the coefficients of ``1, x, ..., x^N``
and all arithmetic is carried out modulo ``x^(N+1)``.  Coefficients are
normally :class:`fractions.Fraction`, which keeps the coefficient recursions
for isochronous potentials bit-exact, but plain floats work too: the class
only relies on ``+``, ``-``, ``*`` and ``/`` of its elements.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Number
from typing import Iterable


class SeriesOrderError(ValueError):
    """Raised when two series of different truncation order are combined."""


class NotInvertibleError(ZeroDivisionError):
    """Raised when the reciprocal of a series with zero constant term is requested."""


def as_rational(value) -> Fraction:
    """Convert ``value`` to a Fraction.

    Strings such as ``"3/7"`` or ``"0.3"`` are parsed exactly; floats are
    converted through their shortest ``repr`` so that ``0.3`` maps to ``3/10``.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(repr(value))
    return Fraction(str(value).strip())


@dataclass(frozen=True)
class Series:
    coeffs: tuple

    def __post_init__(self):
        if len(self.coeffs) == 0:
            raise ValueError("a series needs at least the constant coefficient")

    @classmethod
    def from_coeffs(cls, coeffs: Iterable, order: int | None = None) -> "Series":
        """Build a series, padding with zeros (or truncating) to ``order``."""
        cs = list(coeffs)
        if order is None:
            order = max(len(cs) - 1, 0)
        zero = Fraction(0) if all(isinstance(c, (int, Fraction)) for c in cs) else 0.0
        cs = [Fraction(c) if isinstance(c, int) else c for c in cs[: order + 1]]
        cs += [zero] * (order + 1 - len(cs))
        return cls(tuple(cs))

    @classmethod
    def constant(cls, value, order: int) -> "Series":
        return cls.from_coeffs([value], order)

    @classmethod
    def variable(cls, order: int) -> "Series":
        """The series ``x`` (requires ``order >= 1``)."""
        return cls.from_coeffs([0, 1], order)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, k: int):
        return self.coeffs[k]

    def __len__(self) -> int:
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    def _check(self, other: "Series") -> None:
        if not isinstance(other, Series):
            raise TypeError(f"cannot combine Series with {type(other).__name__}")
        if other.order != self.order:
            raise SeriesOrderError(
                f"order mismatch: {self.order} vs {other.order}; truncate first"
            )

    def __add__(self, other):
        if isinstance(other, Number):
            return Series((self.coeffs[0] + other,) + self.coeffs[1:])
        self._check(other)
        return Series(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return Series(tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Number):
            return Series(tuple(a * other for a in self.coeffs))
        self._check(other)
        n = self.order
        u, v = self.coeffs, other.coeffs
        out = []
        for k in range(n + 1):
            acc = u[0] * v[k]
            for i in range(1, k + 1):
                acc += u[i] * v[k - i]
            out.append(acc)
        return Series(tuple(out))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Number):
            return Series(tuple(a / other for a in self.coeffs))
        return self * other.reciprocal()

    def __pow__(self, p: int):
        if not isinstance(p, int) or p < 0:
            raise ValueError("only non-negative integer powers are supported")
        result = Series.constant(1, self.order)
        base = self
        while p:
            if p & 1:
                result = result * base
            base = base * base
            p >>= 1
        return result

    def reciprocal(self) -> "Series":
        """Multiplicative inverse modulo ``x^(N+1)``."""
        u = self.coeffs
        if u[0] == 0:
            raise NotInvertibleError("series with zero constant term has no reciprocal")
        v = [1 / u[0] if not isinstance(u[0], Fraction) else Fraction(1) / u[0]]
        for k in range(1, self.order + 1):
            acc = u[1] * v[k - 1]
            for i in range(2, k + 1):
                acc += u[i] * v[k - i]
            v.append(-acc * v[0])
        return Series(tuple(v))

    def compose(self, inner: "Series") -> "Series":
        """``self(inner(x))`` by Horner's scheme; ``inner`` must vanish at 0.

        The result has order ``min(self.order, inner.order)``.
        """
        if inner.coeffs[0] != 0:
            raise ValueError("inner series of a composition must have zero constant term")
        n = min(self.order, inner.order)
        inner = inner.truncate(n)
        acc = Series.constant(self.coeffs[n], n)
        for k in range(n - 1, -1, -1):
            acc = acc * inner + self.coeffs[k]
        return acc

    def derive(self) -> "Series":
        """Formal derivative; the order drops by one."""
        if self.order == 0:
            return Series((self.coeffs[0] * 0,))
        return Series(tuple(k * self.coeffs[k] for k in range(1, self.order + 1)))

    def integrate(self) -> "Series":
        """Antiderivative vanishing at 0; the order grows by one."""
        zero = self.coeffs[0] * 0
        out = [zero]
        for k, c in enumerate(self.coeffs):
            out.append(c / (k + 1) if not isinstance(c, int) else Fraction(c, k + 1))
        return Series(tuple(out))

    def truncate(self, order: int) -> "Series":
        if order > self.order:
            raise SeriesOrderError(f"cannot extend a series of order {self.order} to {order}")
        return Series(self.coeffs[: order + 1])

    def shift_down(self, k: int) -> "Series":
        """Divide by ``x^k``; the first ``k`` coefficients must vanish."""
        if any(c != 0 for c in self.coeffs[:k]):
            raise ValueError(f"series is not divisible by x^{k}")
        if k > self.order:
            raise SeriesOrderError("shift exceeds the truncation order")
        return Series(self.coeffs[k:])

    def __call__(self, x):
        """Evaluate the truncated polynomial at ``x`` (scalar or numpy array)."""
        acc = 0 * x + float(self.coeffs[-1]) if not isinstance(x, Fraction) else self.coeffs[-1]
        for c in reversed(self.coeffs[:-1]):
            acc = acc * x + (c if isinstance(x, Fraction) else float(c))
        return acc

    def is_exact(self) -> bool:
        return all(isinstance(c, Fraction) for c in self.coeffs)

    def to_float(self) -> "Series":
        return Series(tuple(float(c) for c in self.coeffs))

    def __str__(self) -> str:
        terms = [f"({c})*x^{k}" for k, c in enumerate(self.coeffs) if c != 0]
        return " + ".join(terms) if terms else "0"

