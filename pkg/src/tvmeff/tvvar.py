"""Time-varying VAR by stacked generalized least squares.

The coefficient matrices follow random walks, ``A_{l,t} = A_{l,t-1} + V_{l,t}``,
while the intercept stays fixed.  Writing the measurement equations and the
(scaled) random-walk increments as one regression,

    x_t       = nu + sum_l A_{l,t} x_{t-l} + e_t          (t = q+1..T)
    0         = sqrt(lam) (vec A_t - vec A_{t-1}) + w_t    (t = q+2..T)

gives a single least-squares problem, equivalently the penalised fit

    min  sum_t ||x_t - nu - sum_l A_{l,t} x_{t-l}||^2 + lam sum_t ||vec A_t - vec A_{t-1}||^2.

``lam`` plays the role of the variance ratio sigma_e^2 / sigma_v^2.  The
problem separates by equation and every equation shares the same
block-tridiagonal normal matrix, so one banded Cholesky factorisation serves
all of them; the intercepts are recovered through a scalar Schur complement.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.linalg import cho_solve_banded, cholesky_banded

from .errors import InsufficientData, NumericError, SingularError
from .timeseries import ReturnPanel
from .var import VARIANCE_FLOOR

DEFAULT_SMOOTHNESS = 1.0


@dataclass(frozen=True)
class StackedLayout:
    """Column layout of the stacked system.

    Columns ``0..k-1`` hold the intercepts; coefficient ``A_{l,t}[row, col]``
    (``t`` counted from 0 at the first model period, ``l`` from 1) sits at
    ``k + t q k^2 + (l - 1) k^2 + row k + col``.
    """

    k: int
    q: int
    n: int

    @property
    def per_period(self) -> int:
        return self.q * self.k * self.k

    @property
    def n_unknowns(self) -> int:
        return self.k + self.n * self.per_period

    def index(self, l: int, t: int, row: int, col: int) -> int:
        if not (1 <= l <= self.q and 0 <= t < self.n
                and 0 <= row < self.k and 0 <= col < self.k):
            raise IndexError((l, t, row, col))
        return self.k + t * self.per_period + (l - 1) * self.k ** 2 + row * self.k + col


@dataclass(frozen=True)
class StackedSystem:
    design: sp.csr_matrix
    response: np.ndarray
    layout: StackedLayout

    @property
    def n_observation_rows(self) -> int:
        return self.layout.n * self.layout.k

    @property
    def n_smoothness_rows(self) -> int:
        return (self.layout.n - 1) * self.layout.per_period


@dataclass(frozen=True)
class TvVarModel:
    """Fitted time-varying VAR.

    ``A_path[t, l - 1]`` is the k x k matrix ``A_{l,t}`` for model period
    ``t`` (dated ``dates[t]``).
    """

    q: int
    nu: np.ndarray
    A_path: np.ndarray      # (T - q, q, k, k)
    residuals: np.ndarray   # (T - q, k)
    lam: float
    dates: tuple[str, ...]
    names: tuple[str, ...]

    @property
    def k(self) -> int:
        return self.nu.shape[0]

    @property
    def n_periods(self) -> int:
        return self.A_path.shape[0]

    def total_variation(self) -> float:
        """``sum_t ||A_t - A_{t-1}||_F`` over the stacked lag matrices."""
        d = np.diff(self.A_path.reshape(self.n_periods, -1), axis=0)
        return float(np.sum(np.sqrt(np.sum(d ** 2, axis=1))))

    def date_index(self, date: str) -> int:
        from .errors import RangeError

        try:
            return self.dates.index(date)
        except ValueError:
            raise RangeError(f"{date} outside model range "
                             f"{self.dates[0]}..{self.dates[-1]}") from None


class TvArModel(TvVarModel):
    """Univariate time-varying AR(q); ``coef_path[t, l - 1]`` is ``a_{l,t}``."""

    @property
    def coef_path(self) -> np.ndarray:
        return self.A_path[:, :, 0, 0]


def _validate(x: np.ndarray, q: int, lam: float, names) -> None:
    T, k = x.shape
    if not lam > 0 or not np.isfinite(lam):
        raise ValueError("smoothness lam must be a positive finite number")
    if q < 1:
        raise ValueError("q must be at least 1")
    if T - q < k * q + 2:
        raise InsufficientData(f"T - q = {T - q} < k q + 2 = {k * q + 2}")
    if not np.all(np.isfinite(x)):
        raise NumericError("returns contain non-finite values")
    var = x.var(axis=0)
    for i, v in enumerate(var):
        if v <= VARIANCE_FLOOR * max(1.0, float(np.mean(x[:, i] ** 2))):
            raise SingularError(f"series {names[i]!r} has (near) zero variance")


def _lagged(x: np.ndarray, q: int) -> np.ndarray:
    """(T - q) x (q k) rows ``[x_{t-1}', ..., x_{t-q}']``."""
    T = x.shape[0]
    return np.hstack([x[q - l:T - l] for l in range(1, q + 1)])


def build_stacked_system(r: ReturnPanel, q: int, lam: float = DEFAULT_SMOOTHNESS) -> StackedSystem:
    """Assemble the sparse observation + smoothness regression."""
    x = r.values
    _validate(x, q, lam, r.names)
    T, k = x.shape
    n = T - q
    lay = StackedLayout(k, q, n)
    P = lay.per_period
    Z = _lagged(x, q)                        # (n, q k), column l k + c
    m = q * k

    rows, cols, vals = [], [], []
    t_idx = np.arange(n)
    for i in range(k):
        obs_row = t_idx * k + i
        rows.append(obs_row)
        cols.append(np.full(n, i))
        vals.append(np.ones(n))
        for j in range(m):
            l, c = divmod(j, k)
            rows.append(obs_row)
            cols.append(k + t_idx * P + l * k * k + i * k + c)
            vals.append(Z[:, j])
    s = np.sqrt(lam)
    base = n * k
    tt = np.repeat(np.arange(1, n), P)
    jj = np.tile(np.arange(P), n - 1)
    srow = base + (tt - 1) * P + jj
    rows += [srow, srow]
    cols += [k + tt * P + jj, k + (tt - 1) * P + jj]
    vals += [np.full(srow.size, s), np.full(srow.size, -s)]
    design = sp.csr_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
                           shape=(base + (n - 1) * P, lay.n_unknowns))
    response = np.concatenate([x[q:].reshape(-1), np.zeros((n - 1) * P)])
    return StackedSystem(design, response, lay)


def _banded_normal_matrix(Z: np.ndarray, lam: float) -> np.ndarray:
    """Upper banded storage of ``blockdiag(z_t z_t') + lam (D'D kron I_m)``."""
    n, m = Z.shape
    u = m
    ab = np.zeros((u + 1, n * m))
    for d in range(m):
        band = np.zeros((n, m))
        band[:, d:] = Z[:, :m - d] * Z[:, d:]
        ab[u - d] = band.reshape(-1)
    dtd = np.full(n, 2.0)
    dtd[0] = dtd[-1] = 1.0
    if n == 1:
        dtd[0] = 0.0
    ab[u] += lam * np.repeat(dtd, m)
    ab[0, m:] -= lam
    return ab


def fit_tvvar_gls(r: ReturnPanel, q: int, lam: float = DEFAULT_SMOOTHNESS) -> TvVarModel:
    """Least-squares solution of the stacked time-varying VAR system.

    Parameters
    ----------
    r : ReturnPanel
        T x k returns.
    q : int
        Lag order.
    lam : float
        Smoothness ratio; larger values give flatter coefficient paths and
        ``lam -> inf`` recovers the constant-coefficient OLS fit.

    Returns
    -------
    TvVarModel
    """
    x = r.values
    _validate(x, q, lam, r.names)
    T, k = x.shape
    n = T - q
    Z = _lagged(x, q)
    Y = x[q:]
    m = Z.shape[1]

    ab = _banded_normal_matrix(Z, lam)
    try:
        cb = cholesky_banded(ab, lower=False)
    except np.linalg.LinAlgError:
        raise SingularError("stacked normal matrix is not positive definite") from None
    # columns: one per equation (Z * y_i) then the intercept coupling (Z)
    rhs = np.concatenate([(Z[:, :, None] * Y[:, None, :]).reshape(n * m, k),
                          Z.reshape(n * m, 1)], axis=1)
    sol = cho_solve_banded((cb, False), rhs)
    U, w = sol[:, :k], sol[:, k]
    s = Z.reshape(-1)
    schur = n - s @ w
    if not schur > 1e-12 * n:
        raise SingularError("intercept is not identified alongside the coefficient paths")
    nu = (Y.sum(axis=0) - s @ U) / schur
    B = U - np.outer(w, nu)                  # (n m, k)
    B = B.reshape(n, m, k)                   # [t, l k + c, i]
    fitted = nu + np.einsum("tj,tji->ti", Z, B)
    resid = Y - fitted
    if not (np.all(np.isfinite(B)) and np.all(np.isfinite(nu))):
        raise NumericError("non-finite coefficient estimates")
    A_path = B.reshape(n, q, k, k).transpose(0, 1, 3, 2)   # [t, l, row i, col c]
    cls = TvArModel if k == 1 else TvVarModel
    return cls(q=q, nu=nu, A_path=np.ascontiguousarray(A_path), residuals=resid,
               lam=float(lam), dates=r.dates[q:], names=r.names)


def fit_tvar_univariate(y, q: int, lam: float = DEFAULT_SMOOTHNESS,
                        name: str = "y") -> TvArModel:
    """Time-varying AR(q) for a single series (array or one-column panel)."""
    if isinstance(y, ReturnPanel):
        if y.k != 1:
            raise ValueError("univariate fit needs a one-column panel")
        panel = y
    else:
        panel = ReturnPanel.from_array(np.asarray(y, dtype=float), [name])
    return fit_tvvar_gls(panel, q, lam)


def coefficients_csv(m: TvVarModel) -> str:
    """Long format ``date,lag,row,col,estimate``; row/col are series names."""
    out = ["date,lag,row,col,estimate"]
    for t, date in enumerate(m.dates):
        for l in range(m.q):
            for i in range(m.k):
                for c in range(m.k):
                    out.append(f"{date},{l + 1},{m.names[i]},{m.names[c]},"
                               f"{float(m.A_path[t, l, i, c])!r}")
    return "\n".join(out) + "\n"
