import numpy as np
import pytest

from tvmeff.synth import DgpSpec, gen_panel
from tvmeff.timeseries import ReturnPanel

SERIES_NAMES = ("EQPI", "GBPI", "Exchange")
# three monthly series with a persistent, low-volatility middle (bond-like) series
MARKET_A = [[0.25, 0.10, 0.06], [0.0, 0.45, 0.0], [0.0, 0.26, 0.24]]


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def gaussian_panel(rng):
    return ReturnPanel.from_array(rng.standard_normal((245, 3)), SERIES_NAMES)


@pytest.fixture
def var1_panel():
    spec = DgpSpec(k=3, q=1, T=245, coefficients=MARKET_A,
                   noise_sd=[0.045, 0.006, 0.03], intercept=[0.003, 0.002, 0.0005],
                   seed=11, names=SERIES_NAMES)
    return gen_panel(spec)[0]


def write_csv(path, header, rows):
    lines = [",".join(header)] + [",".join(str(c) for c in row) for row in rows]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


@pytest.fixture
def market_prices(tmp_path, var1_panel):
    from tvmeff.timeseries import write_price_csv

    path = tmp_path / "prices.csv"
    write_price_csv(var1_panel.to_prices(100.0), path)
    return path
