"""Residual bootstrap of degree paths under the all-coefficients-zero null.

Under the null the returns are ``x_t = nu + e_t``; each replication
resamples whole rows of demeaned returns (keeping the cross-series
correlation), refits the time-varying model and records its degree path.
Pointwise quantiles across replications give the bands.

Replication ``b`` draws from its own stream ``SeedSequence(seed,
spawn_key=(b,))``, and results land in slot ``b`` of a preallocated array,
so the bands do not depend on the number of workers.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .efficiency import degree_values
from .errors import ConfigError, InsufficientData, NumericError, QualityError
from .timeseries import ReturnPanel
from .tvvar import fit_tvvar_gls

MAX_FAILURE_RATE = 0.01


@dataclass(frozen=True)
class BootstrapConfig:
    replications: int = 5000
    level: float = 0.95
    seed: int = 0
    workers: int | str = "auto"

    def __post_init__(self):
        if not 0 < self.level < 1:
            raise ConfigError("level must lie strictly between 0 and 1")
        if self.replications < 100:
            raise ConfigError("at least 100 replications are needed for bands")
        if not 0 <= int(self.seed) < 2 ** 64:
            raise ConfigError("seed must be a 64-bit unsigned integer")

    def n_workers(self) -> int:
        if self.workers == "auto":
            env = os.environ.get("TVMEFF_THREADS")
            return max(1, int(env)) if env else (os.cpu_count() or 1)
        return max(1, int(self.workers))


@dataclass(frozen=True)
class BandResult:
    dates: tuple[str, ...]
    lower: np.ndarray
    upper: np.ndarray
    level: float
    replications: int
    seed: int
    failures: int = 0
    draws: np.ndarray | None = None


def replication_rng(seed: int, b: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(int(seed), spawn_key=(int(b),)))


def simulate_null(r: ReturnPanel, rng: np.random.Generator, q: int = 1) -> ReturnPanel:
    """Panel of the same shape drawn from ``x*_t = mean + e*_t``.

    ``e*_t`` are rows of the demeaned panel drawn i.i.d. with replacement.
    """
    if r.T < q + 10:
        raise InsufficientData(f"null resampling needs T >= q + 10, got {r.T}")
    x = r.values
    nu = x.mean(axis=0)
    eps = x - nu
    idx = rng.integers(0, r.T, size=r.T)
    return ReturnPanel(r.dates, r.names, nu + eps[idx])


def quantile_bands(draws: np.ndarray, level: float):
    """Pointwise (lower, upper) quantiles of ``draws`` (replications x dates).

    Linear interpolation between order statistics (Hyndman-Fan type 7);
    ``nan`` draws are ignored.
    """
    a = (1.0 - level) / 2.0
    lower, upper = np.nanquantile(draws, [a, 1.0 - a], axis=0, method="linear")
    return lower, upper


def _run_block(x, dates, names, q, lam, seed, indices):
    panel = ReturnPanel(dates, names, x)
    out = np.full((len(indices), x.shape[0] - q), np.nan)
    ok = np.ones(len(indices), dtype=bool)
    for i, b in enumerate(indices):
        try:
            star = simulate_null(panel, replication_rng(seed, b), q)
            out[i] = degree_values(fit_tvvar_gls(star, q, lam).A_path)
        except NumericError:
            ok[i] = False
    return out, ok


def bootstrap_draws(r: ReturnPanel, q: int, lam: float, cfg: BootstrapConfig):
    """Degree paths of every replication, shape (replications, T - q).

    Returns the draws and a boolean mask of successful replications.
    """
    B = cfg.replications
    workers = min(cfg.n_workers(), B)
    args = (np.asarray(r.values), r.dates, r.names, q, lam, int(cfg.seed))
    if workers == 1:
        return _run_block(*args, list(range(B)))
    chunks = [list(c) for c in np.array_split(np.arange(B), workers * 4) if len(c)]
    draws = np.full((B, r.T - q), np.nan)
    ok = np.zeros(B, dtype=bool)
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [(c, pool.submit(_run_block, *args, c)) for c in chunks]
        for c, fut in futures:
            d, o = fut.result()
            draws[c] = d
            ok[c] = o
    return draws, ok


def bootstrap_bands(r: ReturnPanel, q: int, lam: float,
                    cfg: BootstrapConfig | None = None,
                    keep_draws: bool = False) -> BandResult:
    """Pointwise null bands for the degree path of ``fit_tvvar_gls(r, q, lam)``.

    Failed replications (singular refits) are dropped; more than 1% of
    failures raises :class:`QualityError`.
    """
    cfg = cfg or BootstrapConfig()
    if r.T < q + 10:
        raise InsufficientData(f"bootstrap needs T >= q + 10, got {r.T}")
    draws, ok = bootstrap_draws(r, q, lam, cfg)
    failures = int((~ok).sum())
    if failures > MAX_FAILURE_RATE * cfg.replications:
        raise QualityError(f"{failures} of {cfg.replications} replications failed")
    lower, upper = quantile_bands(draws[ok], cfg.level)
    return BandResult(tuple(r.dates[q:]), lower, upper, cfg.level,
                      cfg.replications, int(cfg.seed), failures,
                      draws if keep_draws else None)
