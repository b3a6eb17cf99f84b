import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tvmeff.errors import DegenerateSeriesError, InsufficientData
from tvmeff.unitroot import (CRITICAL_VALUES, DetrendSpec, adf_gls_test, default_pmax,
                             gls_detrend, select_lag_bic, select_lag_mbic, ols_detrend,
                             unitroot_csv)


def _gls_oracle(y, c_bar, trend):
    """Quasi-differencing written out element by element."""
    T = len(y)
    a = 1 + c_bar / T
    z = [[1.0, float(t + 1)] if trend else [1.0] for t in range(T)]
    yq, zq = [y[0]], [z[0]]
    for t in range(1, T):
        yq.append(y[t] - a * y[t - 1])
        zq.append([z[t][j] - a * z[t - 1][j] for j in range(len(z[t]))])
    zq, yq = np.array(zq), np.array(yq)
    phi = np.linalg.solve(zq.T @ zq, zq.T @ yq)
    return y - np.array(z) @ phi, phi


def _adf_oracle(yd, p):
    dy = np.diff(yd)
    rows, dep = [], []
    for t in range(p, len(dy)):
        rows.append([yd[t]] + [dy[t - j] for j in range(1, p + 1)])
        dep.append(dy[t])
    X, d = np.array(rows), np.array(dep)
    b = np.linalg.solve(X.T @ X, X.T @ d)
    e = d - X @ b
    s2 = e @ e / (len(d) - X.shape[1])
    return b[0] / np.sqrt(s2 * np.linalg.inv(X.T @ X)[0, 0])


@pytest.mark.parametrize("T, expected", [(245, 15), (100, 12), (50, 10)])
def test_schwert_rule(T, expected):
    assert default_pmax(T) == expected


@pytest.mark.parametrize("trend", [True, False])
def test_gls_detrend_matches_oracle(rng, trend):
    y = np.cumsum(rng.standard_normal(120))
    spec = DetrendSpec("trend" if trend else "constant")
    got, phi = gls_detrend(y, spec)
    want, phi_o = _gls_oracle(y, spec.c_bar, trend)
    np.testing.assert_allclose(got, want, atol=1e-10)
    np.testing.assert_allclose(phi, phi_o, atol=1e-10)


@pytest.mark.parametrize("p", [0, 1, 4])
def test_statistic_matches_oracle(rng, p):
    y = rng.standard_normal(200)
    res = adf_gls_test(y, lag=p)
    yd, _ = _gls_oracle(y, -13.5, True)
    assert res.statistic == pytest.approx(_adf_oracle(yd, p), rel=1e-10)
    assert res.lag == p and res.nobs == 199 - p


def test_spec_aliases_and_defaults():
    assert DetrendSpec("ct").c_bar == -13.5
    assert DetrendSpec("c").c_bar == -7.0
    with pytest.raises(ValueError):
        DetrendSpec("trend", c_bar=1.0)
    with pytest.raises(ValueError):
        DetrendSpec("quadratic")


def test_critical_values():
    assert CRITICAL_VALUES["trend"][0.05] == -2.91
    assert CRITICAL_VALUES["constant"][0.05] == -1.95
    for cv in CRITICAL_VALUES.values():
        assert cv[0.01] < cv[0.05] < cv[0.10] < 0


def test_random_walk_not_rejected(rng):
    rejects = sum(adf_gls_test(np.cumsum(rng.standard_normal(245))).reject for _ in range(40))
    assert rejects <= 8


def test_white_noise_rejected(rng):
    res = adf_gls_test(rng.standard_normal(245))
    assert res.reject and res.statistic < -2.91
    assert abs(res.rho_hat) < 0.4


def test_constant_series_is_degenerate():
    with pytest.raises(DegenerateSeriesError):
        adf_gls_test(np.full(50, 3.0))


def test_short_series():
    with pytest.raises(InsufficientData):
        adf_gls_test(np.arange(8.0))


def test_lag_selectors_return_in_range(rng):
    yd = ols_detrend(rng.standard_normal(245))
    for sel in (select_lag_bic, select_lag_mbic):
        assert 0 <= sel(yd, 15) <= 15
    assert select_lag_mbic(yd, 0) == 0


def test_default_selector_picks_zero_on_white_noise():
    rng = np.random.default_rng(5)
    zeros = sum(select_lag_bic(ols_detrend(rng.standard_normal(245)), 15) == 0
                for _ in range(200))
    assert zeros >= 160


@pytest.mark.xfail(strict=True, reason="modified BIC on GLS-detrended white noise favours "
                   "long lags (measured: lag 0 in about 3% of draws)")
def test_mbic_picks_zero_on_white_noise():
    rng = np.random.default_rng(5)
    zeros = 0
    for _ in range(200):
        yd, _ = gls_detrend(rng.standard_normal(245))
        zeros += select_lag_mbic(yd, 15) == 0
    assert zeros >= 160


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1), st.floats(-5, 5), st.floats(0.01, 100), st.floats(-1, 1))
def test_affine_and_trend_invariance(seed, shift, scale, slope):
    y = np.random.default_rng(seed).standard_normal(120)
    t = np.arange(120.0)
    base = adf_gls_test(y)
    moved = adf_gls_test(shift + scale * y + slope * t)
    assert moved.lag == base.lag
    assert moved.statistic == pytest.approx(base.statistic, rel=1e-7, abs=1e-9)


def test_csv_layout(rng):
    res = adf_gls_test(rng.standard_normal(100))
    lines = unitroot_csv([("EQPI", res)]).splitlines()
    assert lines[0].startswith("series,statistic,lag,phi_hat")
    assert lines[1].startswith("EQPI,")
