import csv
import io
import json
import math

import numpy as np
import pytest

from isochron.period import (
    ScanTable,
    abel_turning_distance,
    default_c_max,
    distance_identity_check,
    energy_grid,
    involution_at,
    period,
    period_derivative,
    period_scan,
    phi,
    turning_points,
)
from isochron.potentials import DomainError, family_from_string, scale_potential
from suite import DUFFING, ISOCHRONOUS, NON_ISOCHRONOUS

TWO_PI = 2 * math.pi


def P(spec):
    return family_from_string(spec)


def test_turning_points_examples():
    o = turning_points(P("harmonic"), 0.5)
    assert abs(o.a + 1) < 1e-15 and abs(o.b - 1) < 1e-15
    assert abs(turning_points(P("isotonic:alpha=1"), 9 / 32).b - 1) < 1e-14
    assert abs(turning_points(P(DUFFING), 0.75).b - 1) < 1e-14


@pytest.mark.parametrize("spec", ISOCHRONOUS + NON_ISOCHRONOUS)
def test_turning_points_solve_energy(spec):
    pot = P(spec)
    for c in np.linspace(0.05, 1, 5) * default_c_max(pot):
        o = turning_points(pot, c)
        assert pot.domain[0] < o.a < 0 < o.b < pot.domain[1]
        assert abs(pot.G(o.a) - c) <= 1e-12 * c and abs(pot.G(o.b) - c) <= 1e-12 * c


def test_energy_out_of_range():
    with pytest.raises(DomainError):
        turning_points(P("urabe:alpha=0.3"), 10.0)
    with pytest.raises(DomainError):
        period(P("harmonic"), 0.0)


def test_involution_examples():
    x = np.linspace(-2, 2, 9)
    A, A1, A2 = involution_at(P("harmonic"), x)
    assert np.allclose(A, -x, atol=1e-15) and np.allclose(A1, -1) and np.allclose(A2, 0, atol=1e-12)
    for a in (0.5, 1.0):
        x = np.linspace(-0.4, 3, 35)
        A = involution_at(P(f"isotonic:alpha={a}"), x)[0]
        assert np.max(np.abs(A + x / (a * x + 1))) < 1e-13


def test_involution_at_zero():
    A, A1, A2 = involution_at(P("urabe:alpha=0.3"), 0.0)
    # A''(0) = -2 g''(0) / 3 with g''(0) = -3 alpha
    assert A == 0 and A1 == -1 and abs(A2 - 0.6) < 1e-15


@pytest.mark.parametrize("spec", ISOCHRONOUS + NON_ISOCHRONOUS)
def test_involution_is_idempotent_and_decreasing(spec):
    pot = P(spec)
    b = turning_points(pot, default_c_max(pot)).b
    x = np.linspace(-1, 1, 1001) * b
    x = x[(x != 0) & pot.contains(x)]
    a = turning_points(pot, default_c_max(pot)).a
    x = x[x > a]
    A, A1, _ = involution_at(pot, x)
    AA = involution_at(pot, A)[0]
    assert np.max(np.abs(AA - x)) < 1e-10
    assert np.all(A1 < 0)
    assert abs(involution_at(pot, 1e-9)[1] + 1) < 1e-6


def test_printed_three_param_involution():
    from isochron.potentials import three_param_involution_closed
    pot = P("three:alpha=0.2,beta=0.5,gamma=1.5")
    x = np.linspace(-2, 2, 41)
    x = x[x != 0]
    assert np.max(np.abs(involution_at(pot, x)[0] - three_param_involution_closed(0.2, 0.5, 1.5, x))) < 1e-12


def test_period_examples():
    for c in (0.1, 0.5, 3.0):
        assert abs(period(P("harmonic"), c) - TWO_PI) < 1e-14
    for c in (0.1, 0.2, 0.27):
        assert abs(period(P("isotonic:alpha=1"), c) - TWO_PI) < 1e-12


@pytest.mark.parametrize("spec", ISOCHRONOUS + NON_ISOCHRONOUS)
def test_quadrature_converges_on_node_doubling(spec):
    pot = P(spec)
    for c in (0.3 * default_c_max(pot), default_c_max(pot)):
        T1, T2 = period(pot, c, 256), period(pot, c, 512)
        assert abs(T1 - T2) <= 1e-10 * T2


@pytest.mark.parametrize("spec", ISOCHRONOUS + NON_ISOCHRONOUS)
def test_small_energy_limit(spec):
    assert abs(period(P(spec), 1e-8) - TWO_PI) < 1e-6


def test_scaling_maps_energy():
    base = P(DUFFING)
    for gamma in (1.7, -0.6):
        S = scale_potential(base, gamma)
        for c in (0.1, 0.4):
            assert abs(period(S, c) - period(base, gamma**2 * c)) < 1e-8


@pytest.mark.parametrize("spec", ISOCHRONOUS)
def test_involution_identities_on_isochronous_wells(spec):
    pot = P(spec)
    b = turning_points(pot, default_c_max(pot)).b
    x = np.linspace(0.05, 1, 40) * b
    A, A1, A2 = involution_at(pot, x)
    G, g = pot.G(x), pot.g(x)
    assert np.max(np.abs(phi(pot, x) - 4 * A2 / (1 - A1) ** 3)) < 1e-8
    assert np.max(np.abs(G / g**2 - 2 / (1 - A1) ** 2)) < 1e-8


def test_phi_near_zero_is_continuous():
    pot = P("series:a2=0.3,a3=0.2")
    # the Taylor surrogate and the closed quotient agree on both sides of the switch
    x = np.array([0.999e-3, 1.001e-3, 2e-3, -0.999e-3, -1.001e-3, -2e-3])
    direct = (pot.g(x) ** 2 - 2 * pot.G(x) * pot.dg(x)) / pot.g(x) ** 3
    assert np.max(np.abs(phi(pot, x) - direct)) < 1e-11
    assert abs(phi(pot, 0.0) - (-2 * 0.3 / 3)) < 1e-15


def test_period_derivative_examples():
    assert abs(period_derivative(P("harmonic"), 0.7)) < 1e-15
    for spec in ISOCHRONOUS:
        pot = P(spec)
        for c in (0.2, 0.9) * np.array(default_c_max(pot)):
            assert abs(period_derivative(pot, c)) < 1e-8
    pot = P(DUFFING)
    h = 1e-4
    fd = (period(pot, 0.5 + h) - period(pot, 0.5 - h)) / (2 * h)
    assert abs(period_derivative(pot, 0.5) - fd) < 1e-6 * abs(fd)


def test_scan_examples():
    t = period_scan(P("harmonic"), energy_grid(P("harmonic"), 10))
    assert len(t.samples) == 10 and np.all(np.abs(t.T - TWO_PI) < 1e-14)
    assert t.monotonicity() == "constant"
    pot = P("urabe:alpha=0.3")
    grid = energy_grid(pot, 50)
    assert grid[-1] == pytest.approx(0.9 * pot.cbar)
    assert period_scan(pot, grid).max_deviation_from_2pi <= 1e-8
    pot = P(DUFFING)
    t = period_scan(pot, energy_grid(pot, 50))
    assert t.monotonicity() == "decreasing" and np.all(np.diff(t.T) < 0)


def test_scan_grid_must_increase():
    with pytest.raises(ValueError):
        period_scan(P("harmonic"), [0.2, 0.1])


def test_scan_csv_round_trip():
    t = period_scan(P(DUFFING), [0.1, 0.2, 0.3])
    text = t.to_csv()
    assert text.splitlines()[0] == "c,T,Tprime"
    rows = list(csv.DictReader(io.StringIO(text)))
    for r, s in zip(rows, t.samples):
        assert float(r["c"]) == s.c and float(r["T"]) == s.T and float(r["Tprime"]) == s.T_prime
    doc = json.loads(t.to_json({"family": DUFFING}))
    assert doc["manifest"]["family"] == DUFFING and doc["monotonicity"] == "decreasing"
    assert [r["T"] for r in doc["samples"]] == list(t.T)


def test_scan_table_mixed():
    from isochron.period import PeriodSample
    t = ScanTable([PeriodSample(0.1, 1.0, 0), PeriodSample(0.2, 2.0, 0), PeriodSample(0.3, 1.5, 0)])
    assert t.monotonicity() == "mixed"


def test_abel_examples():
    lhs, rhs = abel_turning_distance(P("harmonic"), 0.5)
    assert abs(lhs - 2) < 1e-14 and abs(rhs - 2) < 1e-12
    lhs, rhs = abel_turning_distance(P("isotonic:alpha=1"), 9 / 32)
    assert abs(lhs - 1.5) < 1e-13 and abs(rhs - 1.5) < 1e-12
    lhs, rhs = abel_turning_distance(P(DUFFING), 0.75)
    assert abs(lhs - 2) < 1e-13 and abs(rhs - 2) < 1e-6


def test_distance_identity_examples():
    x = np.linspace(0.1, 3, 7)
    assert np.max(np.abs(distance_identity_check(P("harmonic"), x))) < 1e-14
    pot = P("three:alpha=0.2,beta=0.5,gamma=1")
    x = np.linspace(0.01, 4, 100)
    assert np.max(np.abs(distance_identity_check(pot, x))) <= 1e-9
    r = distance_identity_check(P(DUFFING), 1.0)
    assert abs(r - (2 - math.sqrt(6))) < 1e-14
    with pytest.raises(DomainError):
        distance_identity_check(pot, -1.0)
