"""Time-invariant VAR(q): least squares, BIC lag order, HAC errors, Hansen Lc."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BandwidthError, InsufficientData, SingularError
from .timeseries import ReturnPanel

VARIANCE_FLOOR = 1e-14

# Hansen (1992) asymptotic critical values of the joint Lc statistic,
# indexed by the number of scores tested; columns are the 1%, 5%, 10% levels.
HANSEN_LC_CRITICAL = {
    1: (0.748, 0.470, 0.353), 2: (1.07, 0.749, 0.610), 3: (1.35, 1.01, 0.846),
    4: (1.60, 1.24, 1.07), 5: (1.88, 1.47, 1.28), 6: (2.12, 1.68, 1.49),
    7: (2.35, 1.90, 1.69), 8: (2.59, 2.11, 1.89), 9: (2.82, 2.32, 2.10),
    10: (3.05, 2.54, 2.29), 11: (3.27, 2.75, 2.49), 12: (3.51, 2.96, 2.69),
    13: (3.69, 3.15, 2.89), 14: (3.90, 3.34, 3.08), 15: (4.07, 3.54, 3.26),
    16: (4.30, 3.75, 3.46), 17: (4.51, 3.95, 3.64), 18: (4.73, 4.14, 3.83),
    19: (4.92, 4.33, 4.03), 20: (5.13, 4.52, 4.22),
}


def hansen_critical_value(dof: float, level: float = 0.05) -> float:
    """Critical value of Lc with ``dof`` scores.

    Tabulated values are linearly interpolated in ``dof``.  Beyond the table
    the limit law (a sum of ``dof`` Cramer-von Mises variables, mean dof/6 and
    variance dof/45) is approximated by ``chi2(2.5 dof) / 15``.
    """
    from scipy import stats

    col = {0.01: 0, 0.05: 1, 0.10: 2}[level]
    if dof < 1:
        raise ValueError("dof must be at least 1")
    if dof <= 20:
        lo = int(np.floor(dof))
        hi = min(lo + 1, 20)
        w = dof - lo
        return (1 - w) * HANSEN_LC_CRITICAL[lo][col] + w * HANSEN_LC_CRITICAL[hi][col]
    return float(stats.chi2.ppf(1 - level, 2.5 * dof) / 15.0)


@dataclass(frozen=True)
class VarModel:
    """Fitted VAR(q) with intercept.

    ``coef`` is the k x (1 + k q) matrix ``[nu, A_1, ..., A_q]`` and
    ``regressors`` the matching (T - q) x (1 + k q) design.
    """

    q: int
    nu: np.ndarray
    A: np.ndarray           # (q, k, k)
    residuals: np.ndarray   # (T - q, k)
    sigma: np.ndarray
    adj_r2: np.ndarray
    regressors: np.ndarray
    response: np.ndarray
    names: tuple[str, ...]
    dates: tuple[str, ...]

    @property
    def k(self) -> int:
        return self.nu.shape[0]

    @property
    def nobs(self) -> int:
        return self.residuals.shape[0]

    @property
    def coef(self) -> np.ndarray:
        return np.column_stack([self.nu, np.concatenate(list(self.A), axis=1)])


def lag_design(x: np.ndarray, q: int, start: int | None = None):
    """Rows ``[1, x_{t-1}', ..., x_{t-q}']`` and responses ``x_t``.

    ``start`` (default ``q``) is the first response row, letting several lag
    orders share a common estimation sample.
    """
    x = np.asarray(x, dtype=float)
    T = x.shape[0]
    start = q if start is None else start
    cols = [np.ones((T - start, 1))]
    for l in range(1, q + 1):
        cols.append(x[start - l:T - l])
    return np.hstack(cols), x[start:]


def _check_columns(x: np.ndarray, names) -> None:
    var = x.var(axis=0)
    for i, v in enumerate(var):
        if v <= VARIANCE_FLOOR * max(1.0, float(np.mean(x[:, i] ** 2))):
            raise SingularError(f"series {names[i]!r} has (near) zero variance")


def fit_var_ols(r: ReturnPanel, q: int) -> VarModel:
    """Equation-by-equation least squares of ``x_t`` on ``[1, x_{t-1..t-q}]``.

    The residual covariance divides by ``T - q``.
    """
    x = r.values
    T, k = x.shape
    if q < 1:
        raise ValueError("q must be at least 1")
    if T - q <= k * q + 1:
        raise InsufficientData(f"T - q = {T - q} too small for {k * q + 1} regressors")
    _check_columns(x, r.names)
    X, Y = lag_design(x, q)
    if np.linalg.matrix_rank(X) < X.shape[1]:
        raise SingularError("lagged regressor matrix is rank deficient")
    B, *_ = np.linalg.lstsq(X, Y, rcond=None)   # (1 + kq, k)
    resid = Y - X @ B
    n, m = X.shape
    sigma = resid.T @ resid / n
    ssr = np.sum(resid ** 2, axis=0)
    sst = np.sum((Y - Y.mean(axis=0)) ** 2, axis=0)
    adj_r2 = 1.0 - (ssr / (n - m)) / (sst / (n - 1))
    coef = B.T
    A = np.stack([coef[:, 1 + l * k:1 + (l + 1) * k] for l in range(q)])
    return VarModel(q=q, nu=coef[:, 0].copy(), A=A, residuals=resid, sigma=sigma,
                    adj_r2=adj_r2, regressors=X, response=Y, names=r.names,
                    dates=r.dates[q:])


def bic_values(r: ReturnPanel, q_max: int) -> np.ndarray:
    """``ln det(Sigma_q) + ln(T*) k (k q + 1) / T*`` for q = 1..q_max, T* = T - q_max."""
    x = r.values
    T, k = x.shape
    n = T - q_max
    out = []
    for q in range(1, q_max + 1):
        X, Y = lag_design(x, q, start=q_max)
        B, *_ = np.linalg.lstsq(X, Y, rcond=None)
        resid = Y - X @ B
        _, logdet = np.linalg.slogdet(resid.T @ resid / n)
        out.append(logdet + np.log(n) * k * (k * q + 1) / n)
    return np.array(out)


def select_lag_bic(r: ReturnPanel, q_max: int) -> int:
    """BIC lag order in ``1..q_max`` on a common sample."""
    if q_max < 1:
        raise ValueError("q_max must be at least 1")
    if r.T <= r.k * q_max + 1:
        raise InsufficientData("sample too short for q_max")
    if q_max == 1:
        return 1
    return int(np.argmin(bic_values(r, q_max))) + 1


def newey_west_bandwidth(n: int) -> int:
    return int(np.floor(4.0 * (n / 100.0) ** (2.0 / 9.0)))


def _hac_meat(scores: np.ndarray, bandwidth: int) -> np.ndarray:
    S = scores.T @ scores
    for l in range(1, bandwidth + 1):
        w = 1.0 - l / (bandwidth + 1.0)
        G = scores[l:].T @ scores[:-l]
        S += w * (G + G.T)
    return S


def newey_west_cov(m: VarModel, bandwidth: int | str = "auto") -> np.ndarray:
    """Bartlett-kernel HAC covariance of each equation's coefficients.

    Returns an array of shape (k, 1 + k q, 1 + k q).  No small-sample
    degrees-of-freedom correction is applied.
    """
    X = m.regressors
    n = X.shape[0]
    L = newey_west_bandwidth(n) if bandwidth == "auto" else int(bandwidth)
    if L < 0:
        raise BandwidthError("bandwidth must be nonnegative")
    if L >= n:
        raise BandwidthError(f"bandwidth {L} >= effective sample {n}")
    bread = np.linalg.inv(X.T @ X)
    covs = []
    for j in range(m.k):
        meat = _hac_meat(X * m.residuals[:, [j]], L)
        covs.append(bread @ meat @ bread)
    return np.stack(covs)


def newey_west_se(m: VarModel, bandwidth: int | str = "auto") -> np.ndarray:
    """k x (1 + k q) Newey-West standard errors aligned with ``m.coef``."""
    covs = newey_west_cov(m, bandwidth)
    return np.sqrt(np.einsum("jii->ji", covs))


def classical_se(m: VarModel) -> np.ndarray:
    """Homoskedastic standard errors using the same ``/(T - q)`` variance."""
    bread = np.linalg.inv(m.regressors.T @ m.regressors)
    return np.sqrt(np.outer(np.diag(m.sigma), np.diag(bread)))


@dataclass(frozen=True)
class HansenResult:
    lc: float
    dof: int
    critical_5pct: float
    reject_5pct: bool


def hansen_scores(m: VarModel) -> np.ndarray:
    """Stacked per-period scores of all equations.

    Equation j contributes ``x_t e_jt`` for each of its coefficients and
    ``e_jt^2 - sigma_jj``; the blocks are concatenated in equation order.
    """
    X, E = m.regressors, m.residuals
    blocks = []
    for j in range(m.k):
        e = E[:, j]
        blocks.append(X * e[:, None])
        blocks.append((e ** 2 - e @ e / e.shape[0])[:, None])
    return np.hstack(blocks)


def hansen_lc(m: VarModel) -> HansenResult:
    """Hansen's joint parameter-constancy statistic including variances.

    ``Lc = n^-1 tr(V^-1 sum_t S_t S_t')`` with ``S_t`` the cumulative score
    sums and ``V`` the outer-product sum of the scores.
    """
    f = hansen_scores(m)
    n, dof = f.shape
    V = f.T @ f
    if np.linalg.cond(V) > 1e14:
        raise SingularError("score outer-product matrix is singular")
    S = np.cumsum(f, axis=0)
    lc = float(np.trace(np.linalg.solve(V, S.T @ S)) / n)
    lc = max(lc, 0.0)
    cv = hansen_critical_value(dof)
    return HansenResult(lc=lc, dof=dof, critical_5pct=cv, reject_5pct=lc > cv)
