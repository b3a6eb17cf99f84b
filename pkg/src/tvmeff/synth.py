"""Simulated panels with known coefficient paths, for Monte Carlo checks."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import ShapeError, SpecError
from .timeseries import ReturnPanel, month_range

BURN_IN = 50
MAX_SPECTRAL_RADIUS = 0.98
PATH_KINDS = ("constant", "linear-ramp", "random-walk", "break-at")


@dataclass(frozen=True)
class DgpSpec:
    """Data-generating process.

    ``coefficients`` holds the lag matrices (q, k, k) used at the start of
    the sample.  Depending on ``path``:

    * ``constant``: kept throughout;
    * ``linear-ramp``: moved linearly to ``end_coefficients`` at the last period;
    * ``random-walk``: each entry takes i.i.d. N(0, sigma_v^2) increments;
    * ``break-at``: switched to ``end_coefficients`` from period ``break_at`` on.
    """

    k: int
    q: int
    T: int
    coefficients: np.ndarray
    path: str = "constant"
    end_coefficients: np.ndarray | None = None
    sigma_v: float = 0.0
    break_at: int | None = None
    intercept: np.ndarray | None = None
    noise_sd: np.ndarray | float = 1.0
    seed: int = 0
    names: tuple[str, ...] | None = None
    start: str = "1924-07"

    def __post_init__(self):
        coef = np.asarray(self.coefficients, dtype=float).reshape(self.q, self.k, self.k)
        object.__setattr__(self, "coefficients", coef)
        if self.path not in PATH_KINDS:
            raise SpecError(f"unknown coefficient path {self.path!r}")
        if self.path in ("linear-ramp", "break-at"):
            if self.end_coefficients is None:
                raise SpecError(f"{self.path} needs end_coefficients")
            object.__setattr__(self, "end_coefficients", np.asarray(
                self.end_coefficients, dtype=float).reshape(self.q, self.k, self.k))
        if self.path == "break-at" and not (self.break_at and 0 < self.break_at < self.T):
            raise SpecError("break_at must lie inside the sample")
        if self.sigma_v < 0:
            raise SpecError("sigma_v must be nonnegative")
        icpt = np.zeros(self.k) if self.intercept is None else self.intercept
        object.__setattr__(self, "intercept", np.broadcast_to(
            np.asarray(icpt, dtype=float), (self.k,)).copy())
        object.__setattr__(self, "noise_sd", np.broadcast_to(
            np.asarray(self.noise_sd, dtype=float), (self.k,)).copy())
        if self.T <= self.q:
            raise SpecError("T must exceed q")

    @classmethod
    def from_dict(cls, d: dict) -> "DgpSpec":
        d = dict(d)
        if "names" in d and d["names"] is not None:
            d["names"] = tuple(d["names"])
        try:
            return cls(**d)
        except TypeError as exc:
            raise SpecError(str(exc)) from None

    @classmethod
    def from_json(cls, path) -> "DgpSpec":
        with open(path, encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))


def companion(A: np.ndarray) -> np.ndarray:
    q, k, _ = A.shape
    C = np.zeros((k * q, k * q))
    C[:k] = np.concatenate(list(A), axis=1)
    C[k:, :-k] = np.eye(k * (q - 1))
    return C


def spectral_radius(A: np.ndarray) -> float:
    return float(np.max(np.abs(np.linalg.eigvals(companion(np.asarray(A, dtype=float))))))


def _true_path(spec: DgpSpec, rng: np.random.Generator) -> np.ndarray:
    T = spec.T
    A0 = spec.coefficients
    if spec.path == "constant":
        return np.broadcast_to(A0, (T, *A0.shape)).copy()
    if spec.path == "linear-ramp":
        w = np.linspace(0.0, 1.0, T)[:, None, None, None]
        return (1 - w) * A0 + w * spec.end_coefficients
    if spec.path == "break-at":
        out = np.broadcast_to(A0, (T, *A0.shape)).copy()
        out[spec.break_at:] = spec.end_coefficients
        return out
    steps = rng.standard_normal((T, *A0.shape)) * spec.sigma_v
    steps[0] = 0.0
    return A0 + np.cumsum(steps, axis=0)


def gen_panel(spec: DgpSpec):
    """Simulate returns and return ``(panel, true_path)``.

    The recursion starts from zero lags and runs a 50-period burn-in with
    the starting coefficients; ``true_path[t]`` (shape (T, q, k, k)) holds
    the coefficients that generated retained row ``t``.  A model fitted on
    the panel covers rows ``q..T-1``, i.e. ``true_path[q:]``.
    """
    noise_ss, path_ss = np.random.SeedSequence(int(spec.seed)).spawn(2)
    noise_rng, path_rng = np.random.default_rng(noise_ss), np.random.default_rng(path_ss)
    path = _true_path(spec, path_rng)
    for t in range(spec.T):
        if spectral_radius(path[t]) >= MAX_SPECTRAL_RADIUS:
            raise SpecError(f"coefficients at period {t} are not stationary "
                            f"(spectral radius >= {MAX_SPECTRAL_RADIUS})")
    k, q = spec.k, spec.q
    n_total = BURN_IN + spec.T
    eps = noise_rng.standard_normal((n_total, k)) * spec.noise_sd
    full = np.concatenate([np.broadcast_to(path[0], (BURN_IN, q, k, k)), path])
    x = np.zeros((n_total + q, k))
    for t in range(n_total):
        acc = spec.intercept + eps[t]
        for l in range(q):
            acc = acc + full[t, l] @ x[q + t - 1 - l]
        x[q + t] = acc
    values = x[q + BURN_IN:]
    names = spec.names or tuple(f"x{i + 1}" for i in range(k))
    panel = ReturnPanel(month_range(spec.start, spec.T), tuple(names), values)
    return panel, path


def path_rmse(estimated, true):
    """Root-mean-square deviation over dates.

    Returns ``(per_element, aggregate)``: per_element has the shape of one
    period's coefficients, aggregate is the RMS over every date and element.
    """
    est = np.asarray(estimated, dtype=float)
    tru = np.asarray(true, dtype=float)
    if est.shape != tru.shape:
        raise ShapeError(f"shape mismatch {est.shape} vs {tru.shape}")
    sq = (est - tru) ** 2
    return np.sqrt(sq.mean(axis=0)), float(np.sqrt(sq.mean()))


def truth_csv(panel: ReturnPanel, path: np.ndarray) -> str:
    """``date,lag,row,col,value`` for the generating coefficients."""
    out = ["date,lag,row,col,value"]
    T, q, k, _ = path.shape
    for t in range(T):
        for l in range(q):
            for i in range(k):
                for c in range(k):
                    out.append(f"{panel.dates[t]},{l + 1},{panel.names[i]},"
                               f"{panel.names[c]},{float(path[t, l, i, c])!r}")
    return "\n".join(out) + "\n"
