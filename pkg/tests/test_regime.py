import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from insider_percolation import analytic
from insider_percolation.errors import DomainError
from insider_percolation.regime import Regime, classify, regime_for_ratio


def test_under_regulated():
    rep = classify(5, 0.01)
    assert rep.regime is Regime.UNDER_REGULATED
    assert rep.distance_to_tipping == pytest.approx(0.05)


def test_tipping_point():
    rep = classify(100, 0.01)
    assert rep.regime is Regime.TIPPING_POINT
    assert rep.distance_to_tipping == 1.0
    assert rep.l_normal == pytest.approx(1 / 101)
    assert rep.l_normal == pytest.approx(0.01, rel=0.02)


def test_over_regulated():
    rep = classify(500, 0.01)
    assert rep.regime is Regime.OVER_REGULATED
    assert rep.distance_to_tipping == pytest.approx(5.0)
    assert rep.l_normal < 0.01


def test_possibly_optimal_band_and_edges():
    assert classify(10, 0.01).regime is Regime.POSSIBLY_OPTIMAL
    assert classify(79, 0.01).regime is Regime.POSSIBLY_OPTIMAL
    assert classify(80, 0.01).regime is Regime.TIPPING_POINT
    assert classify(120, 0.01).regime is Regime.TIPPING_POINT
    assert classify(121, 0.01).regime is Regime.OVER_REGULATED


def test_custom_cutoffs():
    assert classify(50, 0.01, cutoffs=(0.2, 0.4, 0.6)).regime is Regime.TIPPING_POINT
    with pytest.raises(DomainError):
        regime_for_ratio(1.0, (0.5, 0.2, 1.0))


@pytest.mark.parametrize("n,lmin", [(-1, 0.1), (3, 0.0), (3, 1.0), (2.5, 0.1)])
def test_domain(n, lmin):
    with pytest.raises(DomainError):
        classify(n, lmin)


def test_report_serialises():
    d = classify(100, 0.01).to_dict()
    assert d["regime"] == "tipping-point"
    assert set(d) == {"regime", "n", "l_min", "n_min_value", "l_normal", "l_threat_exact", "ratio",
                      "distance_to_tipping"}
    assert "tipping-point" in classify(100, 0.01).summary()


@given(st.integers(0, 20_000), st.floats(1e-4, 0.99))
def test_report_invariants(n, lmin):
    rep = classify(n, lmin)
    assert rep.ratio >= 1.0 - 1e-12
    if rep.regime is Regime.OVER_REGULATED:
        assert rep.l_normal < lmin


@given(st.floats(1e-4, 0.99))
def test_monotone_in_n(lmin):
    n_hi = int(3 / lmin)
    idx = [classify(n, lmin).regime.index for n in range(0, n_hi, max(1, n_hi // 400))]
    assert all(a <= b for a, b in zip(idx, idx[1:]))


@pytest.mark.parametrize("lmin", [0.1, 0.01, 0.001])
def test_tipping_band_near_minimum(lmin):
    ns = np.arange(0, int(5 / lmin))
    curve = np.array([analytic.exact_threat_latitude(int(k), lmin) for k in ns])
    best = curve.min()
    band = [k for k in ns if classify(int(k), lmin).regime is Regime.TIPPING_POINT]
    assert band
    assert np.all(curve[band] <= 1.10 * best)
