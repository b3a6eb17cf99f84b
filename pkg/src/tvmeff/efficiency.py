"""Joint and individual degrees of market efficiency.

With ``Phi(1) = (I - A_1 - ... - A_q)^{-1}`` the long-run (cumulative)
impulse response, the joint degree is the spectral norm of ``Phi(1) - I``:
zero exactly when every autoregressive matrix vanishes.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import NumericError, UnitRootBoundaryError

COND_LIMIT = 1e12


@dataclass(frozen=True)
class EfficiencyPath:
    """Dated degree path.

    Periods where ``I - sum A`` could not be inverted carry ``nan`` in
    ``zeta`` and ``True`` in ``boundary``.
    """

    dates: tuple[str, ...]
    zeta: np.ndarray
    boundary: np.ndarray
    lower: np.ndarray | None = None
    upper: np.ndarray | None = None
    level: float | None = None
    warnings: tuple[str, ...] = field(default_factory=tuple)

    def with_bands(self, lower, upper, level) -> "EfficiencyPath":
        return EfficiencyPath(self.dates, self.zeta, self.boundary,
                              np.asarray(lower), np.asarray(upper), level,
                              self.warnings)

    def flags(self) -> list[str]:
        """``inside``/``above``/``below`` relative to the bands."""
        if self.lower is None:
            raise ValueError("path has no bands")
        return band_flags(self.zeta, self.lower, self.upper)


def band_flags(zeta, lower, upper) -> list[str]:
    out = []
    for z, lo, hi in zip(zeta, lower, upper):
        if not np.isfinite(z):
            out.append("boundary")
        elif z > hi:
            out.append("above")
        elif z < lo:
            out.append("below")
        else:
            out.append("inside")
    return out


def cumulative_response(*A) -> np.ndarray:
    """``(I - A_1 - ... - A_q)^{-1}``.

    Accepts the lag matrices as separate arguments or as one (q, k, k)
    array.  Raises :class:`UnitRootBoundaryError` when the condition number
    of ``I - sum A`` exceeds 1e12.
    """
    mats = np.asarray(A[0] if len(A) == 1 else A, dtype=float)
    if mats.ndim == 2:
        mats = mats[None]
    if not np.all(np.isfinite(mats)):
        raise NumericError("non-finite coefficient matrix")
    k = mats.shape[-1]
    M = np.eye(k) - mats.sum(axis=0)
    if np.linalg.cond(M) > COND_LIMIT:
        raise UnitRootBoundaryError("I - sum(A) is singular: sum of lag "
                                    "matrices has a unit eigenvalue")
    return np.linalg.inv(M)


def joint_degree(phi1) -> float:
    """Largest singular value of ``Phi(1) - I``."""
    phi1 = np.asarray(phi1, dtype=float)
    if not np.all(np.isfinite(phi1)):
        raise NumericError("non-finite Phi(1)")
    D = phi1 - np.eye(phi1.shape[0])
    return float(np.linalg.norm(D, 2))


def individual_degree(*a) -> float:
    """``|sum a / (1 - sum a)|`` for scalar AR coefficients ``a_1..a_q``."""
    total = float(np.sum(np.asarray(a, dtype=float)))
    if not np.isfinite(total):
        raise NumericError("non-finite coefficient")
    denom = 1.0 - total
    if abs(denom) < 1.0 / COND_LIMIT:
        raise UnitRootBoundaryError("AR coefficients sum to one")
    return abs(total / denom)


def _degree_series(A_path: np.ndarray, dates):
    n, q, k, _ = A_path.shape
    if not np.all(np.isfinite(A_path)):
        raise NumericError("non-finite coefficient path")
    total = A_path.sum(axis=1)
    if k == 1:
        s = total[:, 0, 0]
        denom = 1.0 - s
        boundary = np.abs(denom) < 1.0 / COND_LIMIT
        with np.errstate(divide="ignore", invalid="ignore"):
            zeta = np.abs(s / denom)
    else:
        M = np.eye(k) - total
        boundary = ~(np.linalg.cond(M) <= COND_LIMIT)
        zeta = np.full(n, np.nan)
        ok = ~boundary
        if ok.any():
            D = np.linalg.inv(M[ok]) - np.eye(k)
            zeta[ok] = np.linalg.norm(D, 2, axis=(1, 2))
    zeta[boundary] = np.nan
    notes = tuple(f"{dates[t]}: unit-root boundary, degree undefined"
                  for t in np.flatnonzero(boundary))
    return zeta, boundary, notes


def degree_path(m) -> EfficiencyPath:
    """Per-period degree for a fitted time-varying model.

    Uses the joint degree for k > 1 and the individual degree for k = 1.
    Boundary periods are reported in ``boundary`` and ``warnings`` and are
    never interpolated.
    """
    zeta, boundary, notes = _degree_series(m.A_path, m.dates)
    for note in notes:
        warnings.warn(note, RuntimeWarning, stacklevel=2)
    return EfficiencyPath(tuple(m.dates), zeta, boundary, warnings=notes)


def degree_values(A_path: np.ndarray) -> np.ndarray:
    """Degree path as a bare array (nan at boundaries, no warnings)."""
    zeta, _, _ = _degree_series(A_path, [""] * A_path.shape[0])
    return zeta


def joint_diagonal_degrees(m) -> dict[str, EfficiencyPath]:
    """Individual degrees read off the diagonal of a joint model's path."""
    out = {}
    for i, name in enumerate(m.names):
        diag = m.A_path[:, :, i:i + 1, i:i + 1]
        zeta, boundary, notes = _degree_series(diag, m.dates)
        out[name] = EfficiencyPath(tuple(m.dates), zeta, boundary, warnings=notes)
    return out


def path_csv(path: EfficiencyPath) -> str:
    """``date,zeta[,lower,upper,flag],boundary``; boundary periods leave zeta empty."""
    has_bands = path.lower is not None
    head = "date,zeta,lower,upper,flag,boundary" if has_bands else "date,zeta,boundary"
    out = [head]
    flags = path.flags() if has_bands else None
    for t, date in enumerate(path.dates):
        z = "" if path.boundary[t] else repr(float(path.zeta[t]))
        b = "boundary" if path.boundary[t] else ""
        if has_bands:
            out.append(f"{date},{z},{float(path.lower[t])!r},{float(path.upper[t])!r},"
                       f"{flags[t]},{b}")
        else:
            out.append(f"{date},{z},{b}")
    return "\n".join(out) + "\n"


def path_records(path: EfficiencyPath) -> list[dict]:
    recs = []
    flags = path.flags() if path.lower is not None else None
    for t, date in enumerate(path.dates):
        rec = {"date": date,
               "zeta": None if path.boundary[t] else float(path.zeta[t]),
               "boundary": bool(path.boundary[t])}
        if path.lower is not None:
            rec.update(lower=float(path.lower[t]), upper=float(path.upper[t]),
                       flag=flags[t])
        recs.append(rec)
    return recs
