from fractions import Fraction as Q

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from isochron.series import NotInvertibleError, Series, SeriesOrderError, as_rational

N = 8
rationals = st.fractions(min_value=-5, max_value=5, max_denominator=9)


def series(order=N, unit=False, zero_const=False):
    def build(cs):
        cs = list(cs)
        if unit:
            cs[0] = Q(1)
        if zero_const:
            cs[0] = Q(0)
        return Series(tuple(cs))
    return st.lists(rationals, min_size=order + 1, max_size=order + 1).map(build)


def x(order=N):
    return Series.variable(order)


def test_add_examples():
    assert x() + x() == Series.from_coeffs([0, 2], N)
    u = Series.from_coeffs([1, 2, 3], N)
    assert u + Series.constant(0, N) == u
    a = Series.from_coeffs([0, 0, Q(1, 2)], N) + Series.from_coeffs([0, 0, Q(1, 3)], N)
    assert a[2] == Q(5, 6)


def test_mul_examples():
    assert x() * x() == Series.from_coeffs([0, 0, 1], N)
    u = Series.from_coeffs([1, 2, 3], N)
    assert u * Series.constant(1, N) == u
    assert (1 + x()) * (1 - x()) == Series.from_coeffs([1, 0, -1], N)


def test_order_mismatch_rejected():
    with pytest.raises(SeriesOrderError):
        x(3) + x(4)
    with pytest.raises(SeriesOrderError):
        x(3) * x(4)


def test_reciprocal_examples():
    assert (1 - x()).reciprocal() == Series.from_coeffs([1] * (N + 1), N)
    assert Series.constant(1, N).reciprocal() == Series.constant(1, N)
    r = (1 + 2 * x()).reciprocal()
    assert list(r) == [Q((-2) ** k) for k in range(N + 1)]
    with pytest.raises(NotInvertibleError):
        x().reciprocal()


def test_compose_examples():
    t = x()
    assert (1 + t).compose(t * t) == Series.from_coeffs([1, 0, 1], N)
    outer = Series.from_coeffs([3, 1, 4, 1, 5], N)
    assert outer.compose(t) == outer
    assert (t * t).compose(t + t * t) == Series.from_coeffs([0, 0, 1, 2, 1], N)
    with pytest.raises(ValueError):
        outer.compose(1 + t)


def test_derive_integrate_examples():
    assert Series.from_coeffs([0, 0, Q(1, 2)], N).derive() == Series.from_coeffs([0, 1], N - 1)
    assert x().integrate() == Series.from_coeffs([0, 0, Q(1, 2)], N + 1)
    a2 = Q(3, 7)
    G = Series.from_coeffs([0, 1, a2], N).integrate()
    assert G[2] == Q(1, 2) and G[3] == a2 / 3


def test_as_rational_parses_exactly():
    assert as_rational("3/7") == Q(3, 7)
    assert as_rational("0.3") == Q(3, 10)
    assert as_rational(0.3) == Q(3, 10)
    assert as_rational(-2) == Q(-2)


def test_exact_arithmetic_stays_reduced():
    s = Series.from_coeffs([Q(2, 4), Q(6, 8)], 1)
    assert s[0].numerator == 1 and s[0].denominator == 2
    assert s.is_exact()


def test_float_coefficients_work():
    u = Series.from_coeffs([1.0, 0.5, 0.25], 2)
    v = u * u.reciprocal()
    assert abs(v[0] - 1) < 1e-15 and abs(v[1]) < 1e-15 and abs(v[2]) < 1e-15


def test_evaluation():
    s = Series.from_coeffs([1, 2, 3], 2)
    assert s(Q(1, 2)) == Q(11, 4)
    assert abs(s(0.5) - 2.75) < 1e-15


@settings(max_examples=60, deadline=None)
@given(series(unit=True))
def test_reciprocal_is_inverse(u):
    assert u * u.reciprocal() == Series.constant(1, N)


@settings(max_examples=30, deadline=None)
@given(series(6), series(6, zero_const=True), series(6, zero_const=True))
def test_composition_is_associative(a, b, c):
    assert a.compose(b.compose(c)) == a.compose(b).compose(c)


@settings(max_examples=60, deadline=None)
@given(series())
def test_derive_inverts_integrate(u):
    assert u.integrate().derive() == u


@settings(max_examples=60, deadline=None)
@given(series(zero_const=True))
def test_integrate_inverts_derive_on_zero_constant(u):
    assert u.derive().integrate() == u


@settings(max_examples=40, deadline=None)
@given(series(), series(), series())
def test_ring_laws(a, b, c):
    assert a * (b + c) == a * b + a * c
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a
