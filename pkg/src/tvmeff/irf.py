"""Impulse responses (moving-average coefficients) of fitted VARs.

Reduced-form identification with ``Phi_0 = I`` is the default.  Surfaces are
indexed ``(date, horizon, shock, response)``, so ``values[d, h, s, r]`` is
``Phi_h[r, s]`` at date ``d``: the response of variable ``r`` ``h`` periods
after a unit shock to variable ``s``.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

import numpy as np

from .errors import RangeError

DEFAULT_HORIZON = 12


def ma_coefficients(A, H: int) -> np.ndarray:
    """``Phi_0..Phi_H`` from lag matrices ``A_1..A_q``.

    ``Phi_0 = I`` and ``Phi_h = sum_{j=1}^{min(h, q)} Phi_{h-j} A_j``.
    ``A`` may also carry leading batch axes, shape (..., q, k, k); the
    result then has shape (..., H + 1, k, k).
    """
    A = np.asarray(A, dtype=float)
    if A.ndim == 2:
        A = A[None]
    if H < 0:
        raise ValueError("H must be nonnegative")
    *batch, q, k, _ = A.shape
    phi = np.zeros((*batch, H + 1, k, k))
    phi[..., 0, :, :] = np.eye(k)
    for h in range(1, H + 1):
        acc = np.zeros((*batch, k, k))
        for j in range(1, min(h, q) + 1):
            acc = acc + phi[..., h - j, :, :] @ A[..., j - 1, :, :]
        phi[..., h, :, :] = acc
    return phi


@dataclass(frozen=True)
class ImpulseSurface:
    dates: tuple[str, ...]
    names: tuple[str, ...]
    values: np.ndarray          # (n_dates, H + 1, shock, response)
    orthogonalized: bool = False

    @property
    def horizons(self) -> np.ndarray:
        return np.arange(self.values.shape[1])

    def at(self, date: str) -> np.ndarray:
        try:
            d = self.dates.index(date)
        except ValueError:
            raise RangeError(f"{date} outside surface range "
                             f"{self.dates[0]}..{self.dates[-1]}") from None
        return self.values[d]


def tv_irf(m, H: int = DEFAULT_HORIZON, orthogonalize: bool = False) -> ImpulseSurface:
    """Impulse responses with the coefficients frozen at each date.

    With ``orthogonalize=True`` the responses are post-multiplied by the
    lower Cholesky factor of the residual covariance, so shocks are
    one-standard-deviation orthogonal innovations.
    """
    if H < 1:
        raise ValueError("H must be at least 1")
    phi = ma_coefficients(m.A_path, H)              # (n, H+1, resp, shock)
    if orthogonalize:
        resid = m.residuals
        P = np.linalg.cholesky(resid.T @ resid / resid.shape[0])
        phi = phi @ P
    values = np.ascontiguousarray(np.swapaxes(phi, -1, -2))
    return ImpulseSurface(tuple(m.dates), tuple(m.names), values, orthogonalize)


def static_irf(m, date: str, H: int = DEFAULT_HORIZON,
               orthogonalize: bool = False) -> np.ndarray:
    """Responses at one date, shape (H + 1, shock, response).

    Identical to the matching slice of :func:`tv_irf`.
    """
    d = m.date_index(date)
    return tv_irf(m, H, orthogonalize).values[d]


def surface_csv(surface: ImpulseSurface, dates=None) -> str:
    """Long format ``date,horizon,shock,response,value``."""
    keep = surface.dates if dates is None else dates
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["date", "horizon", "shock", "response", "value"])
    for date in keep:
        block = surface.at(date)
        for h in range(block.shape[0]):
            for s, sname in enumerate(surface.names):
                for r, rname in enumerate(surface.names):
                    w.writerow([date, h, sname, rname, repr(float(block[h, s, r]))])
    return buf.getvalue()


def read_surface_csv(text: str) -> ImpulseSurface:
    """Inverse of :func:`surface_csv` (comment lines starting with ``#`` ignored)."""
    rows = [r for r in csv.reader(io.StringIO(text)) if r and not r[0].startswith("#")]
    body = rows[1:]
    dates = tuple(dict.fromkeys(r[0] for r in body))
    names = tuple(dict.fromkeys(r[2] for r in body))
    H = max(int(r[1]) for r in body)
    k = len(names)
    values = np.zeros((len(dates), H + 1, k, k))
    di = {d: i for i, d in enumerate(dates)}
    ni = {n: i for i, n in enumerate(names)}
    for d, h, s, r, v in body:
        values[di[d], int(h), ni[s], ni[r]] = float(v)
    return ImpulseSurface(dates, names, values)
