"""ADF-GLS unit-root test with GLS detrending and information-criterion lags.

The Ng-Perron modified BIC (``select_lag_mbic``) is available, but it picks
long lags on strongly mean-reverting series: adding lagged differences pulls
the estimated ADF coefficient towards zero, which shrinks the criterion's
data-dependent term.  On i.i.d. data at T = 245 this leaves the test with
roughly 40% power.  The default therefore chooses the lag by BIC on the
OLS-detrended series (following Perron and Qu, 2007, for the detrending) and
keeps GLS detrending for the test regression itself.

References
----------
Elliott, G., Rothenberg, T. J. and Stock, J. H. (1996). Efficient tests for
    an autoregressive unit root. Econometrica, 64(4), 813-836.
Ng, S. and Perron, P. (2001). Lag length selection and the construction of
    unit root tests with good size and power. Econometrica, 69(6), 1519-1554.
Perron, P. and Qu, Z. (2007). A simple modification to improve the finite
    sample properties of Ng and Perron's unit root tests. Economics Letters,
    94(1), 12-19.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateSeriesError, InsufficientData, SingularError

CONSTANT = "constant"
TREND = "trend"

# DF-GLS critical values.  Constant-only: Dickey-Fuller without deterministics.
# Trend: asymptotic ERS values, with the 5% value at -2.91 as used for T ~ 245.
CRITICAL_VALUES = {
    CONSTANT: {0.01: -2.58, 0.05: -1.95, 0.10: -1.62},
    TREND: {0.01: -3.48, 0.05: -2.91, 0.10: -2.57},
}

_DEFAULT_CBAR = {CONSTANT: -7.0, TREND: -13.5}


@dataclass(frozen=True)
class DetrendSpec:
    """Deterministic terms and local-to-unity noncentrality ``c_bar``."""

    kind: str = TREND
    c_bar: float | None = None

    def __post_init__(self):
        kind = {"c": CONSTANT, "ct": TREND, "constant-only": CONSTANT,
                "constant-and-trend": TREND}.get(self.kind, self.kind)
        if kind not in (CONSTANT, TREND):
            raise ValueError(f"unknown detrending kind {self.kind!r}")
        object.__setattr__(self, "kind", kind)
        if self.c_bar is None:
            object.__setattr__(self, "c_bar", _DEFAULT_CBAR[kind])
        if not self.c_bar < 0:
            raise ValueError("c_bar must be negative")


@dataclass(frozen=True)
class UnitRootResult:
    """Outcome of :func:`adf_gls_test`.

    ``phi_hat`` is the coefficient vector of the GLS detrending regression
    (constant, and trend slope when present); it is sometimes written psi-hat.
    ``rho_hat`` is the implied autoregressive root ``1 + b0`` of the test
    regression.
    """

    statistic: float
    lag: int
    phi_hat: np.ndarray
    critical_5pct: float
    reject: bool
    spec: DetrendSpec
    p_max: int
    nobs: int
    rho_hat: float
    critical_values: dict = field(default_factory=dict)


def default_pmax(T: int) -> int:
    """Schwert's rule ``floor(12 (T/100)^(1/4))``."""
    return int(np.floor(12.0 * (T / 100.0) ** 0.25))


def _deterministics(T: int, kind: str) -> np.ndarray:
    if kind == CONSTANT:
        return np.ones((T, 1))
    return np.column_stack([np.ones(T), np.arange(1, T + 1, dtype=float)])


def gls_detrend(y, spec: DetrendSpec | None = None):
    """Quasi-difference GLS detrending.

    Regresses ``(y_1, y_t - a y_{t-1})`` on the identically quasi-differenced
    deterministics at ``a = 1 + c_bar / T``.

    Returns
    -------
    detrended : ndarray
        ``y`` minus the fitted deterministic component.
    phi_hat : ndarray
        Fitted deterministic coefficients.
    """
    spec = spec or DetrendSpec()
    y = np.asarray(y, dtype=float)
    T = y.shape[0]
    if T < 10:
        raise InsufficientData("GLS detrending needs at least 10 observations")
    alpha = 1.0 + spec.c_bar / T
    z = _deterministics(T, spec.kind)
    yq = np.concatenate([y[:1], y[1:] - alpha * y[:-1]])
    zq = np.vstack([z[:1], z[1:] - alpha * z[:-1]])
    if np.linalg.matrix_rank(zq) < zq.shape[1]:
        raise SingularError("quasi-differenced deterministics are collinear")
    phi, *_ = np.linalg.lstsq(zq, yq, rcond=None)
    return y - z @ phi, phi


def ols_detrend(y, spec: DetrendSpec | None = None) -> np.ndarray:
    """Residuals of ``y`` on the deterministic terms by ordinary least squares."""
    spec = spec or DetrendSpec()
    y = np.asarray(y, dtype=float)
    z = _deterministics(y.shape[0], spec.kind)
    b, *_ = np.linalg.lstsq(z, y, rcond=None)
    return y - z @ b


def _adf_design(yd: np.ndarray, p: int, start: int):
    """Regressand and regressors ``[y_{t-1}, dy_{t-1}, ..., dy_{t-p}]``.

    ``start`` indexes the first used element of ``dy = diff(yd)``.
    """
    dy = np.diff(yd)
    n = dy.shape[0]
    cols = [yd[start:n]]
    for j in range(1, p + 1):
        cols.append(dy[start - j:n - j])
    return dy[start:], np.column_stack(cols)


def select_lag_mbic(y_detrended, p_max: int) -> int:
    """Ng-Perron modified BIC lag choice over ``0..p_max``.

    All candidate regressions use the common sample of ``T - 1 - p_max``
    differenced observations.
    """
    yd = np.asarray(y_detrended, dtype=float)
    T = yd.shape[0]
    if p_max < 0:
        raise ValueError("p_max must be nonnegative")
    if T <= p_max + 2:
        raise InsufficientData("series too short for p_max")
    if p_max == 0:
        return 0
    n = T - 1 - p_max
    ct = np.log(n)
    best, best_ic = 0, np.inf
    for p in range(p_max + 1):
        dep, X = _adf_design(yd, p, p_max)
        b, *_ = np.linalg.lstsq(X, dep, rcond=None)
        resid = dep - X @ b
        s2 = resid @ resid / n
        if s2 <= 0:
            return p
        tau = b[0] ** 2 * (X[:, 0] @ X[:, 0]) / s2
        ic = np.log(s2) + ct * (tau + p) / n
        if ic < best_ic:
            best, best_ic = p, ic
    return best


def select_lag_bic(y_detrended, p_max: int) -> int:
    """Plain BIC (no data-dependent term) over ``0..p_max``, common sample."""
    yd = np.asarray(y_detrended, dtype=float)
    n = yd.shape[0] - 1 - p_max
    if n < 2:
        raise InsufficientData("series too short for p_max")
    ics = []
    for p in range(p_max + 1):
        dep, X = _adf_design(yd, p, p_max)
        b, *_ = np.linalg.lstsq(X, dep, rcond=None)
        resid = dep - X @ b
        ics.append(np.log(resid @ resid / n) + np.log(n) * p / n)
    return int(np.argmin(ics))


def adf_gls_test(y, spec: DetrendSpec | None = None,
                 p_max: int | None = None, lag: int | None = None,
                 lag_selection: str = "bic") -> UnitRootResult:
    """ADF-GLS (DF-GLS) test of a unit root against stationarity.

    Parameters
    ----------
    y : array_like, 1d
        Series to test.
    spec : DetrendSpec
        Deterministic specification; constant and trend by default.
    p_max : int, optional
        Largest lag considered by MBIC; Schwert's rule if omitted.
    lag : int, optional
        Use this lag instead of selecting one.
    lag_selection : {'bic', 'mbic'}
        Criterion used when ``lag`` is not given.  ``'bic'`` (default)
        applies BIC to the OLS-detrended series; ``'mbic'`` applies the
        Ng-Perron modified BIC to the GLS-detrended series.

    Returns
    -------
    UnitRootResult
    """
    spec = spec or DetrendSpec()
    y = np.asarray(y, dtype=float)
    T = y.shape[0]
    if p_max is None:
        p_max = default_pmax(T)
    p_max = min(p_max, T - 10)
    yd, phi = gls_detrend(y, spec)
    scale = max(np.max(np.abs(y)), 1.0)
    if np.max(np.abs(yd)) <= 1e-12 * scale or np.ptp(np.diff(yd)) <= 1e-12 * scale:
        raise DegenerateSeriesError("detrended series is constant")
    if lag is not None:
        p = int(lag)
    elif lag_selection == "mbic":
        p = select_lag_mbic(yd, p_max)
    elif lag_selection == "bic":
        p = select_lag_bic(ols_detrend(y, spec), p_max)
    else:
        raise ValueError(f"unknown lag_selection {lag_selection!r}")

    dep, X = _adf_design(yd, p, p)
    n, m = X.shape
    XtX = X.T @ X
    b = np.linalg.solve(XtX, X.T @ dep)
    resid = dep - X @ b
    s2 = resid @ resid / (n - m)
    se = np.sqrt(s2 * np.linalg.inv(XtX)[0, 0])
    stat = float(b[0] / se)
    cv = CRITICAL_VALUES[spec.kind]
    return UnitRootResult(
        statistic=stat, lag=p, phi_hat=phi, critical_5pct=cv[0.05],
        reject=stat < cv[0.05], spec=spec, p_max=p_max, nobs=n,
        rho_hat=float(1.0 + b[0]), critical_values=dict(cv))


def unitroot_csv(rows) -> str:
    """``series,statistic,lag,phi_hat,critical_5pct,reject`` rows.

    ``rows`` is an iterable of ``(name, UnitRootResult)``; the phi_hat
    vector is ``;``-joined.
    """
    out = ["series,statistic,lag,phi_hat,critical_5pct,reject"]
    for name, r in rows:
        phi = ";".join(repr(float(v)) for v in r.phi_hat)
        out.append(f"{name},{r.statistic!r},{r.lag},{phi},{r.critical_5pct!r},"
                   f"{str(r.reject).lower()}")
    return "\n".join(out) + "\n"
