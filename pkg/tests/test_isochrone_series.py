import random
from fractions import Fraction as Q

import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from isochron.isochrone_series import (
    b_from_even_part,
    b_from_g,
    g_from_b,
    leading_odd_coefficient,
    odd_from_even,
    relation_residual,
    urabe_relation_check,
)
from isochron.series import Series
from isochron.tables import ODD_COEFFICIENT_TABLE, g_expansion_from_b

rationals = st.fractions(min_value=-3, max_value=3, max_denominator=7)


def rq(rng):
    return Q(rng.randint(-9, 9), rng.randint(1, 7))


def test_a3_from_a2():
    for a in (Q(1), Q(-2, 3), Q(5, 7)):
        assert odd_from_even({2: a}).a_odd[3] == Q(10, 9) * a**2


def test_all_even_zero_gives_harmonic():
    r = odd_from_even({})
    assert all(v == 0 for v in r.a_odd.values())
    assert all(v == 0 for v in r.b_coeffs)


def test_urabe_point_gives_a5():
    assert odd_from_even({2: 1, 4: Q(35, 27)}).a_odd[5] == Q(14, 9)


def test_a5_general_form():
    rng = random.Random(3)
    for _ in range(10):
        a2, a4 = rq(rng), rq(rng)
        assert odd_from_even({2: a2, 4: a4}).a_odd[5] == Q(14, 5) * a2 * a4 - Q(56, 27) * a2**4


def test_urabe_closed_form_taylor_oracle():
    # independent oracle: sympy Taylor expansion of g for d/dx(G/g^2) = alpha,
    # G = (1 + a x - sqrt(1 + 2 a x)) / a^2
    x = sp.symbols("x")
    a = sp.Rational(-2, 3)
    G = (1 + a * x - sp.sqrt(1 + 2 * a * x)) / a**2
    g = sp.series(sp.diff(G, x), x, 0, 8).removeO()
    coeffs = [sp.Rational(g.coeff(x, k)) for k in range(8)]
    r = odd_from_even({2: Q(str(coeffs[2])), 4: Q(str(coeffs[4])), 6: Q(str(coeffs[6]))}, 8)
    assert r.g_series[5] == Q(str(coeffs[5])) == Q(14, 9)
    assert r.g_series[7] == Q(str(coeffs[7]))


def test_residual_vanishes_for_completion():
    rng = random.Random(5)
    evens = {2 * k: rq(rng) for k in range(1, 7)}
    r = odd_from_even(evens, 14)
    R = relation_residual(r.g_series, r.b_coeffs)
    assert all(c == 0 for c in R)


def test_rejects_bad_indices():
    with pytest.raises(ValueError):
        odd_from_even({3: 1})
    with pytest.raises(ValueError):
        odd_from_even({16: 1}, 14)
    with pytest.raises(ValueError):
        odd_from_even({2: 1}, 2)


def test_table_as_polynomial_identities():
    rng = random.Random(11)
    for _ in range(5):
        evens = {2 * k: rq(rng) for k in range(1, 7)}
        a_odd = odd_from_even(evens, 14).a_odd
        for n, f in ODD_COEFFICIENT_TABLE.items():
            assert a_odd[n] == f(evens), n


def test_g_from_b_examples():
    b0 = Q(2, 5)
    assert g_from_b([b0])[2] == -Q(3, 2) * b0
    assert list(g_from_b([])) == [0, 1] + [0] * 13
    rng = random.Random(2)
    for _ in range(5):
        b = [rq(rng) for _ in range(3)]
        g = g_from_b(b)
        assert list(g.coeffs[:8]) == g_expansion_from_b(*b)


def test_printed_derivative_list_fourth_derivative():
    # the expansion gives g''''(0) = 24 * (-(5/24) b1 - (35/8) b0^3) = -105 b0^3 - 5 b1;
    # the derivative list prints -30 b1 instead, which this records
    b0, b1 = Q(1, 3), Q(2, 7)
    g4 = 24 * g_from_b([b0, b1])[4]
    assert g4 == -105 * b0**3 - 5 * b1
    assert g4 != -105 * b0**3 - 30 * b1


def test_b_from_g_examples():
    assert b_from_g(Series.variable(14)).isochronous
    assert all(v == 0 for v in b_from_g(Series.variable(14)).b)
    alpha = Q(3, 10)
    m = b_from_g(g_from_b([alpha]))
    assert m.isochronous and m.b[0] == alpha and all(v == 0 for v in m.b[1:])
    duffing = Series.from_coeffs([0, 1, 0, 1], 14)
    m = b_from_g(duffing)
    assert not m.isochronous and m.mismatch_order == 2 and m.residual == Q(-3, 4)


def test_b_from_g_float_tolerance():
    g = g_from_b([Q(1, 5), Q(-1, 3)]).to_float()
    assert b_from_g(g, tol=1e-12).isochronous
    assert not b_from_g(Series.from_coeffs([0.0, 1.0, 0.0, 1.0], 14), tol=1e-12).isochronous


@settings(max_examples=25, deadline=None)
@given(st.lists(rationals, min_size=0, max_size=5))
def test_round_trip(b):
    m = b_from_g(g_from_b(b, 14))
    assert m.isochronous
    assert list(m.b[: len(b)]) == list(b)
    assert all(v == 0 for v in m.b[len(b):])


@settings(max_examples=25, deadline=None)
@given(st.lists(rationals, min_size=3, max_size=3))
def test_f_constants_from_derivatives(b):
    g = g_from_b(b, 14)
    g2, g4, g6 = 2 * g[2], 24 * g[4], 720 * g[6]
    assert b[0] == -g2 / 3
    # derived sign of f'(0); the printed -(7/9) g''^3 + g''''/5 is exactly its negative
    assert b[1] == Q(7, 9) * g2**3 - g4 / 5
    assert -(Q(-7, 9) * g2**3 + g4 / 5) == b[1]
    # f''(0) = 2 b_2; printed constant 310/54 = 155/27 agrees
    assert 2 * b[2] == -g6 / 21 - Q(310, 54) * g2**5 + 2 * g2**2 * g4


def test_urabe_relation_check():
    for a in (Q(1, 3), Q(-2, 7)):
        assert urabe_relation_check(g_from_b([a]))
    assert urabe_relation_check(Series.variable(14))
    g = odd_from_even({2: 1, 4: 1}).g_series
    assert not urabe_relation_check(g)


def test_leading_odd_coefficient():
    b0 = Q(4, 9)
    assert leading_odd_coefficient(1, [b0]) == -Q(3, 2) * b0
    assert leading_odd_coefficient(1, [b0]) == g_from_b([b0])[2]
    b1 = Q(-5, 3)
    assert leading_odd_coefficient(2, [0, b1]) == -Q(5, 24) * b1 == g_from_b([0, b1])[4]
    for p in range(1, 6):
        b = [0] * (p - 1) + [Q(2, 3)]
        assert leading_odd_coefficient(p, b) == g_from_b(b)[2 * p]
        assert leading_odd_coefficient(p, [0] * p) == 0
    with pytest.raises(ValueError):
        leading_odd_coefficient(0, [1])


def test_vanishing_prefix_forces_next_even_structure():
    # with a_2 = ... = a_(2p-2) = 0 every odd coefficient below 2p+1 vanishes
    for p in (2, 3, 4):
        r = odd_from_even({2 * p: Q(1)}, 14)
        assert all(r.a_odd[n] == 0 for n in r.a_odd if n < 2 * p)
        assert all(v == 0 for v in r.b_coeffs[: p - 1])


def test_b_from_even_part_depends_only_on_evens():
    g1 = Series.from_coeffs([0, 1, Q(1, 2), 5, Q(1, 3)], 6)
    g2 = Series.from_coeffs([0, 1, Q(1, 2), -7, Q(1, 3), 9], 6)
    assert b_from_even_part(g1) == b_from_even_part(g2)
