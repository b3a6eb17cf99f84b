import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from tvmeff.errors import RangeError
from tvmeff.irf import ma_coefficients, read_surface_csv, static_irf, surface_csv, tv_irf
from tvmeff.synth import companion
from tvmeff.tvvar import fit_tvvar_gls


def test_scalar_half():
    phi = ma_coefficients(np.array([[0.5]]), 4)
    np.testing.assert_array_equal(phi[:, 0, 0], [1, 0.5, 0.25, 0.125, 0.0625])


@settings(max_examples=40, deadline=None)
@given(arrays(float, (3, 3), elements=st.floats(-0.6, 0.6)), st.integers(1, 10))
def test_var1_is_matrix_power(A, H):
    phi = ma_coefficients(A, H)
    for h in range(H + 1):
        np.testing.assert_allclose(phi[h], np.linalg.matrix_power(A, h), atol=1e-12)


@settings(max_examples=40, deadline=None)
@given(arrays(float, (3, 2, 2), elements=st.floats(-0.5, 0.5)))
def test_varq_matches_companion(A):
    phi = ma_coefficients(A, 8)
    C = companion(A)
    for h in range(9):
        np.testing.assert_allclose(phi[h], np.linalg.matrix_power(C, h)[:2, :2], atol=1e-12)


def test_batched_equals_looped(rng):
    A = rng.uniform(-0.3, 0.3, (5, 2, 3, 3))
    batched = ma_coefficients(A, 6)
    for t in range(5):
        np.testing.assert_array_equal(batched[t], ma_coefficients(A[t], 6))


def test_surface_axes(gaussian_panel):
    m = fit_tvvar_gls(gaussian_panel, 1)
    s = tv_irf(m, 12)
    assert s.values.shape == (244, 13, 3, 3)
    A = m.A_path[7, 0]
    # response of series 2 one period after a shock to series 0
    assert s.values[7, 1, 0, 2] == pytest.approx(A[2, 0])
    np.testing.assert_array_equal(s.values[:, 0], np.broadcast_to(np.eye(3), (244, 3, 3)))
    np.testing.assert_array_equal(s.horizons, np.arange(13))


def test_static_is_slice(gaussian_panel):
    m = fit_tvvar_gls(gaussian_panel, 2)
    date = m.dates[100]
    np.testing.assert_array_equal(static_irf(m, date, 6), tv_irf(m, 6).at(date))
    with pytest.raises(RangeError):
        static_irf(m, "2099-01")


def test_orthogonalized_impact(gaussian_panel):
    m = fit_tvvar_gls(gaussian_panel, 1)
    s = tv_irf(m, 3, orthogonalize=True)
    e = m.residuals
    P = np.linalg.cholesky(e.T @ e / e.shape[0])
    np.testing.assert_allclose(s.values[0, 0], P.T, atol=1e-14)
    assert s.orthogonalized


def test_csv_round_trip(gaussian_panel):
    m = fit_tvvar_gls(gaussian_panel, 1)
    s = tv_irf(m, 4)
    back = read_surface_csv("# comment\n" + surface_csv(s))
    assert back.dates == s.dates and back.names == s.names
    np.testing.assert_array_equal(back.values, s.values)
    part = read_surface_csv(surface_csv(s, [s.dates[3]]))
    np.testing.assert_array_equal(part.values[0], s.values[3])


def test_bad_horizon():
    with pytest.raises(ValueError):
        ma_coefficients(np.eye(2), -1)
