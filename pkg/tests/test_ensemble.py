import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from phaseflow import ensemble
from phaseflow.ensemble import (
    count_beyond,
    estimate_pi_cl,
    evolve_free,
    quantum_classical_compare,
    sample_initial,
    worker_count,
)
from phaseflow.errors import ConfigurationError
from phaseflow.flow import probability_beyond
from phaseflow.wigner import DimensionlessPacket, PhasePoint, free_flow_preimage, omega

HALF_ERFC_1 = 0.078649603525142565


def test_sample_moments_uncorrelated():
    n = 1_000_000
    d = DimensionlessPacket(xi0=0.0, eta0=0.0, eps0=0.0, delta=0.0)
    pts = sample_initial(d, n, seed=1)
    cov = np.cov(pts.xi, pts.eta)
    assert abs(cov[0, 1]) < 3 / math.sqrt(n) * 0.5
    assert cov[1, 1] == pytest.approx(0.5, rel=0.01)


def test_sample_moments_correlated():
    n = 1_000_000
    d = DimensionlessPacket(xi0=2.0, eta0=-1.0, eps0=1.0, delta=0.0)
    pts = sample_initial(d, n, seed=2)
    cov = np.cov(pts.xi, pts.eta)
    assert cov[0, 0] == pytest.approx(1.0, rel=0.01)
    assert cov[1, 1] == pytest.approx(0.5, rel=0.01)
    assert cov[0, 1] == pytest.approx(0.5, rel=0.02)
    assert pts.xi.mean() == pytest.approx(2.0, abs=5e-3)
    assert pts.eta.mean() == pytest.approx(-1.0, abs=5e-3)


def test_sample_deterministic():
    d = DimensionlessPacket(0.0, 0.1, -2.0, 2.0)
    a = sample_initial(d, 1000, seed=99)
    b = sample_initial(d, 1000, seed=99)
    c = sample_initial(d, 1000, seed=100)
    assert np.array_equal(a.xi, b.xi) and np.array_equal(a.eta, b.eta)
    assert not np.array_equal(a.xi, c.xi)
    with pytest.raises(ConfigurationError):
        sample_initial(d, 0, seed=1)


def test_sample_prefix_stable_across_chunks(monkeypatch):
    d = DimensionlessPacket(0.0, 0.1, -2.0, 2.0)
    full = sample_initial(d, 5000, seed=3)
    monkeypatch.setattr(ensemble, "CHUNK", 700)
    chunked = sample_initial(d, 5000, seed=3)
    assert np.array_equal(full.xi, chunked.xi)


def test_evolve_free():
    rng = np.random.default_rng(0)
    pts = PhasePoint(rng.uniform(-3, 3, 1000), rng.uniform(-3, 3, 1000))
    same = evolve_free(pts, 0.0)
    assert np.array_equal(same.xi, pts.xi)
    moved = evolve_free(pts, 1.7)
    assert moved.eta is pts.eta
    back = evolve_free(moved, -1.7)
    assert np.allclose(back.xi, pts.xi, rtol=0, atol=1e-15 * 8)
    two_step = evolve_free(evolve_free(pts, 0.4), 1.3)
    one_step = evolve_free(pts, 1.7)
    assert np.allclose(two_step.xi, one_step.xi, rtol=0, atol=1e-15 * 8)


@given(st.floats(-5, 5), st.floats(-5, 5), st.floats(-5, 5))
def test_classical_flow_is_wigner_shear(xi, eta, tau):
    p = PhasePoint(xi, eta)
    pre = free_flow_preimage(evolve_free(p, tau), tau)
    assert pre.xi == pytest.approx(xi, abs=1e-13) and pre.eta == eta
    d = DimensionlessPacket(0.3, -0.2, -1.5, 1.0)
    assert omega(d, evolve_free(p, tau), tau) == pytest.approx(omega(d, p, 0.0), abs=1e-12)


def test_estimate_pi_cl():
    pts = PhasePoint(np.array([-1.0, -2.0, 0.5]), np.zeros(3))
    assert estimate_pi_cl(pts, 1.0) == (0.0, 0.0)
    p, se = estimate_pi_cl(pts, -math.inf)
    assert p == 1.0 and se == 0.0
    p, se = estimate_pi_cl(pts, 0.0)
    assert p == pytest.approx(1 / 3)
    assert se == pytest.approx(math.sqrt((1 / 3) * (2 / 3) / 3))
    with pytest.raises(ConfigurationError):
        estimate_pi_cl(PhasePoint(np.array([]), np.array([])), 0.0)


def test_estimate_matches_closed_form():
    d = DimensionlessPacket(xi0=0.0, eta0=1.0, eps0=0.0, delta=1.0)
    p, se = estimate_pi_cl(sample_initial(d, 1_000_000, seed=5), d.delta)
    assert abs(p - HALF_ERFC_1) < 3 * se


def test_counts_independent_of_workers(monkeypatch):
    d = DimensionlessPacket(0.0, 0.1, -2.0, 2.0)
    monkeypatch.setattr(ensemble, "CHUNK", 10_000)
    taus = [0.0, 1.0, 2.5]
    one = count_beyond(d, d.delta, taus, 95_001, seed=8, workers=1)
    many = count_beyond(d, d.delta, taus, 95_001, seed=8, workers=4)
    assert np.array_equal(one, many)
    pts = sample_initial(d, 95_001, seed=8)
    direct = [np.count_nonzero(evolve_free(pts, t).xi > d.delta) for t in taus]
    assert one.tolist() == direct


def test_worker_count_env(monkeypatch):
    monkeypatch.setenv("WB_THREADS", "3")
    assert worker_count() == 3
    monkeypatch.setenv("WB_THREADS", "0")
    with pytest.raises(ConfigurationError):
        worker_count()
    monkeypatch.delenv("WB_THREADS")
    assert worker_count() >= 1


def test_compare_small_n():
    d = DimensionlessPacket(0.0, 0.1, -2.0, 2.0)
    report = quantum_classical_compare(d, d.delta, np.linspace(0, 4, 5), 100, seed=4)
    for row in report.rows:
        assert 0.0 <= row.run.standard_error <= 0.05
        assert row.run.sample_count == 100
        assert row.pi_quantum == probability_beyond(d, row.run.tau)
    assert report.max_zscore < 6


def test_compare_degenerate_sample():
    # every point is far left of the detector: empirical stderr is zero
    d = DimensionlessPacket(0.0, 0.0, 0.0, 40.0)
    report = quantum_classical_compare(d, d.delta, [0.0], 10, seed=1)
    assert report.rows[0].run.pi_estimate == 0.0
    assert report.max_zscore == 0.0


def test_zscore_fallback():
    assert ensemble.zscore(0.0, 0.01, 0.0, 100) == pytest.approx(0.01 / math.sqrt(0.01 * 0.99 / 100))
    assert ensemble.zscore(0.0, 0.0, 0.0, 100) == 0.0
