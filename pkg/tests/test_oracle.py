import math

import numpy as np
import pytest

from isochron.oracle import OracleError, SimConfig, simulate_period
from isochron.period import default_c_max, period
from isochron.potentials import DomainError, family_from_string
from suite import DUFFING, curated_suite

TWO_PI = 2 * math.pi


def test_sim_config_validation():
    assert SimConfig().max_time == pytest.approx(200 * math.pi)
    with pytest.raises(ValueError):
        SimConfig(tol=0)
    with pytest.raises(ValueError):
        SimConfig(step=-1e-3)


def test_oracle_examples():
    assert abs(simulate_period(family_from_string("harmonic"), 0.5).T - TWO_PI) < 1e-8
    assert abs(simulate_period(family_from_string("isotonic:alpha=1"), 0.2).T - TWO_PI) < 1e-7
    pot = family_from_string(DUFFING)
    T_quad = period(pot, 0.75)
    assert abs(simulate_period(pot, 0.75).T - T_quad) <= 1e-6 * T_quad


def test_half_period_by_time_reversal():
    for spec in ("harmonic", DUFFING):
        pot = family_from_string(spec)
        for c in (0.2, 0.75, 1.5):
            r = simulate_period(pot, c)
            assert abs(r.half - r.T / 2) < 1e-7


@pytest.mark.parametrize("label,pot", [(l, p) for l, p, _ in curated_suite()], ids=lambda v: v if isinstance(v, str) else "")
def test_agreement_with_quadrature_and_energy(label, pot):
    cfg = SimConfig()
    for c in np.linspace(0.1, 1.0, 10) * default_c_max(pot):
        r = simulate_period(pot, c, cfg)
        T_quad = period(pot, c)
        assert abs(r.T - T_quad) <= 1e-6 * T_quad
        assert r.energy_drift <= 10 * cfg.tol
        assert not r.drift_warning


def test_max_time_exceeded():
    with pytest.raises(OracleError):
        simulate_period(family_from_string("harmonic"), 0.5, SimConfig(max_time=1.0))


def test_energy_outside_wells():
    with pytest.raises(DomainError):
        simulate_period(family_from_string("urabe:alpha=0.3"), 100.0)


def test_drift_flag(monkeypatch):
    import isochron.oracle as oracle
    from isochron.period import Orbit, turning_points

    def shifted(P, c):
        o = turning_points(P, c)
        return Orbit(o.c, o.a, o.b * (1 + 1e-6))

    monkeypatch.setattr(oracle, "turning_points", shifted)
    with pytest.warns(RuntimeWarning, match="energy drift"):
        r = simulate_period(family_from_string(DUFFING), 0.75)
    assert r.drift_warning and r.energy_drift > 1e-7
