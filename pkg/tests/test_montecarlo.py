import numpy as np
import pytest

from insider_percolation.errors import ValidationError
from insider_percolation.montecarlo import (
    SimulationConfig,
    draw_boundaries,
    run_sweep,
    smoothed_minimum,
    spacing_distribution,
)
from insider_percolation.rng import trial_rng
from insider_percolation.spacing_core import BoundarySet, mean_latitude, latitudes_from_boundaries, threat_latitudes


def exact_spacing_cdf(n, x):
    """Exact marginal CDF of one gap among n uniform boundaries: 1 - (1 - x)^n."""
    return 1.0 - (1.0 - np.asarray(x)) ** n


class TestConfig:
    @pytest.mark.parametrize(
        "kw",
        [dict(n_trials=0), dict(n_rules_max=0), dict(l_min=0.0), dict(l_min=1.0), dict(master_seed=-1),
         dict(master_seed=2**64), dict(n_trials=2.5)],
    )
    def test_rejects(self, kw):
        with pytest.raises(ValidationError):
            SimulationConfig(**kw)


def test_draw_boundaries_open_interval_and_distinct():
    x = draw_boundaries(np.random.default_rng(0), 1000)
    assert x.size == 1000 and np.all((x > 0) & (x < 1)) and np.unique(x).size == 1000


def test_sweep_matches_spacing_core_per_trial():
    cfg = SimulationConfig(n_trials=1, n_rules_max=300, l_min=0.02, master_seed=11)
    res = run_sweep(cfg)
    x = draw_boundaries(trial_rng(11, 0), 300)
    for n in (1, 2, 7, 50, 51, 299, 300):
        b = BoundarySet.from_unsorted(x[:n])
        assert res.l_normal_sim[n - 1] == pytest.approx(mean_latitude(latitudes_from_boundaries(b)), abs=1e-15)
        assert res.l_threat_sim[n - 1] == pytest.approx(mean_latitude(threat_latitudes(b, 0.02)), abs=1e-15)


@pytest.mark.parametrize("incremental", [True, False])
def test_normal_curve_identity_and_threat_dominance(incremental):
    cfg = SimulationConfig(n_trials=20, n_rules_max=400, l_min=0.01, master_seed=3, incremental=incremental)
    res = run_sweep(cfg)
    np.testing.assert_allclose(res.l_normal_sim, 1.0 / (res.n + 1), rtol=0, atol=1e-9)
    assert np.all(res.l_threat_sim >= res.l_normal_sim - 1e-15)


def test_vanishing_lmin_gives_normal_curve():
    res = run_sweep(SimulationConfig(n_trials=10, n_rules_max=200, l_min=1e-14, master_seed=5))
    np.testing.assert_allclose(res.l_threat_sim, 1.0 / (res.n + 1), atol=1e-12)


def test_thread_count_does_not_change_bits():
    cfg = SimulationConfig(n_trials=70, n_rules_max=150, l_min=0.03, master_seed=123456789)
    a = run_sweep(cfg, threads=1)
    b = run_sweep(cfg, threads=3)
    c = run_sweep(cfg, threads=0)
    for r in (b, c):
        assert a.l_threat_sim.tobytes() == r.l_threat_sim.tobytes()
        assert a.l_normal_sim.tobytes() == r.l_normal_sim.tobytes()


def test_seed_matters():
    a = run_sweep(SimulationConfig(n_trials=5, n_rules_max=100, master_seed=1))
    b = run_sweep(SimulationConfig(n_trials=5, n_rules_max=100, master_seed=2))
    assert not np.array_equal(a.l_threat_sim, b.l_threat_sim)


def test_independent_mode_differs_but_agrees_in_mean():
    base = dict(n_trials=400, n_rules_max=150, l_min=0.01, master_seed=9)
    inc = run_sweep(SimulationConfig(**base))
    ind = run_sweep(SimulationConfig(incremental=False, **base))
    assert not np.array_equal(inc.l_threat_sim, ind.l_threat_sim)
    np.testing.assert_allclose(inc.l_threat_sim[99], ind.l_threat_sim[99], rtol=0.05)


def test_ratio_near_tipping_point_with_many_trials():
    res = run_sweep(SimulationConfig(n_trials=10_000, n_rules_max=200, l_min=0.01, master_seed=1))
    assert 2.2 <= res.ratio[99] <= 3.3
    # exact value 2.699; 10^4 trials pin the simulated ratio much closer than the band
    assert res.ratio[99] == pytest.approx(2.699, rel=0.03)


def test_sweep_result_derived_columns():
    res = run_sweep(SimulationConfig(n_trials=2, n_rules_max=120, l_min=0.01))
    row = res.at(100)
    assert row["l_threat_exact"] == pytest.approx(0.026722321811282506)
    assert row["l_threat_percolation"] == pytest.approx(0.044467346832018148)
    assert row["ratio"] == pytest.approx(row["l_threat_sim"] / row["l_normal_sim"])


def test_percolation_column_saturates_to_inf():
    res = run_sweep(SimulationConfig(n_trials=1, n_rules_max=2000, l_min=0.5))
    assert np.isinf(res.l_threat_percolation[-1])
    assert np.isfinite(res.l_threat_percolation[0])


class TestSmoothedMinimum:
    def test_parabola(self):
        n = np.arange(1, 301)
        assert smoothed_minimum((n - 140.0) ** 2) == pytest.approx(140.0, abs=0.5)

    def test_width_one_is_argmin(self):
        assert smoothed_minimum(np.array([3.0, 1.0, 2.0]), width=1) == 2

    def test_bad_width(self):
        with pytest.raises(ValidationError):
            smoothed_minimum(np.ones(5), width=6)


class TestSpacingDistribution:
    def test_point_mass_without_rules(self):
        h = spacing_distribution(0, 50, 1)
        assert h.latitudes.tolist() == [1.0] * 50
        assert h.cdf([0.999, 1.0]).tolist() == [0.0, 1.0]

    def test_cdf_monotone(self):
        h = spacing_distribution(20, 200, 4)
        x, f = h.grid(300)
        assert f[0] == 0.0 and f[-1] == 1.0
        assert np.all(np.diff(f) >= 0)
        assert h.latitudes.size == 200 * 21

    def test_single_rule_is_uniform(self):
        h = spacing_distribution(1, 20_000, 8)
        # each gap of one uniform boundary is itself uniform on (0, 1)
        assert h.ks_distance(lambda x: x) < 0.02
        ks_exp = h.ks_exponential()
        assert 0 < ks_exp < 1  # reported only; the exponential law is poor at N = 1

    def test_exponential_law_at_100(self):
        n = 100
        # oracle: sup distance between the exact spacing law and its exponential form
        grid = np.linspace(0, 0.2, 200_001)
        model_gap = np.max(np.abs(exact_spacing_cdf(n, grid) - (-np.expm1(-(n + 1) * grid))))
        assert model_gap < 0.005
        h = spacing_distribution(n, 10_000, 1)
        assert h.ks_distance(lambda x: exact_spacing_cdf(n, x)) < 0.005
        assert h.ks_exponential() < 0.02

    def test_deterministic(self):
        a = spacing_distribution(30, 100, 77)
        b = spacing_distribution(30, 100, 77)
        assert a.latitudes.tobytes() == b.latitudes.tobytes()
