"""Monthly price panels, log returns and descriptive statistics."""

from __future__ import annotations

import csv
import json
import math
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import DuplicateError, GapError, InsufficientData, ParseError

_MONTH_RE = re.compile(r"^\s*(\d{4})-(\d{1,2})\s*$")


# -- month labels ------------------------------------------------------------

def parse_month(label: str) -> int:
    """Return a month ordinal (year * 12 + month - 1) for a ``YYYY-MM`` label."""
    m = _MONTH_RE.match(label)
    if m is None:
        raise ValueError(f"not a YYYY-MM month label: {label!r}")
    year, month = int(m.group(1)), int(m.group(2))
    if not 1 <= month <= 12:
        raise ValueError(f"month out of range in {label!r}")
    return year * 12 + month - 1


def format_month(ordinal: int) -> str:
    year, month0 = divmod(ordinal, 12)
    return f"{year:04d}-{month0 + 1:02d}"


def month_range(start: str, n: int) -> tuple[str, ...]:
    """``n`` consecutive month labels beginning at ``start``."""
    s = parse_month(start)
    return tuple(format_month(s + i) for i in range(n))


def _check_consecutive(dates: Sequence[str]) -> None:
    ords = [parse_month(d) for d in dates]
    for prev, cur, label in zip(ords, ords[1:], dates[1:]):
        if cur <= prev:
            raise ValueError(f"dates not strictly increasing at {label}")
        if cur != prev + 1:
            raise GapError(f"missing month {format_month(prev + 1)}")


# -- panels ------------------------------------------------------------------

@dataclass(frozen=True)
class PricePanel:
    """Strictly positive monthly price levels, one column per series."""

    dates: tuple[str, ...]
    names: tuple[str, ...]
    values: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.ndim != 2 or values.shape != (len(self.dates), len(self.names)):
            raise ValueError("values must be a (len(dates), len(names)) array")
        if values.shape[0] < 3:
            raise InsufficientData("a price panel needs at least 3 periods")
        if not np.all(np.isfinite(values)) or np.any(values <= 0):
            raise ParseError("prices must be finite and strictly positive")
        _check_consecutive(self.dates)
        values.setflags(write=False)
        object.__setattr__(self, "dates", tuple(self.dates))
        object.__setattr__(self, "names", tuple(self.names))
        object.__setattr__(self, "values", values)

    @property
    def n_periods(self) -> int:
        return self.values.shape[0]

    @property
    def k(self) -> int:
        return self.values.shape[1]


@dataclass(frozen=True)
class ReturnPanel:
    """T x k matrix of monthly log returns.

    Row ``t`` is dated by the later of the two prices it differences.
    """

    dates: tuple[str, ...]
    names: tuple[str, ...]
    values: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.ndim == 1:
            values = values[:, None]
        if values.shape != (len(self.dates), len(self.names)):
            raise ValueError("values must be a (len(dates), len(names)) array")
        if len(self.dates) > 1:
            _check_consecutive(self.dates)
        values.setflags(write=False)
        object.__setattr__(self, "dates", tuple(self.dates))
        object.__setattr__(self, "names", tuple(self.names))
        object.__setattr__(self, "values", values)

    @classmethod
    def from_array(cls, values, names: Sequence[str] | None = None,
                   start: str = "1924-07") -> "ReturnPanel":
        """Wrap a bare array with generated month labels."""
        values = np.asarray(values, dtype=float)
        if values.ndim == 1:
            values = values[:, None]
        if names is None:
            names = [f"x{i + 1}" for i in range(values.shape[1])]
        return cls(month_range(start, values.shape[0]), tuple(names), values)

    @property
    def T(self) -> int:
        return self.values.shape[0]

    @property
    def k(self) -> int:
        return self.values.shape[1]

    def column(self, name: str) -> "ReturnPanel":
        i = self.names.index(name)
        return ReturnPanel(self.dates, (name,), self.values[:, [i]])

    def to_prices(self, base: float = 1.0) -> PricePanel:
        """Inverse of :func:`log_returns` with every series starting at ``base``."""
        start = format_month(parse_month(self.dates[0]) - 1)
        levels = np.vstack([np.zeros(self.k), np.cumsum(self.values, axis=0)])
        return PricePanel(month_range(start, self.T + 1), self.names,
                          base * np.exp(levels))


# -- ingestion ---------------------------------------------------------------

def load_price_csv(path, schema: Mapping | None = None,
                   forward_fill: bool = False) -> PricePanel:
    """Read a ``date,<name1>,...`` price file into a validated panel.

    Parameters
    ----------
    path : path-like
        UTF-8 CSV with a header row; dates are ``YYYY-MM``.
    schema : mapping, optional
        ``{"date": <date column>, "columns": {<source column>: <name>}}``.
        By default the date column is ``date`` and every other column is a
        series keeping its header name.
    forward_fill : bool
        Fill missing months with the previous price instead of raising
        :class:`GapError`.

    Returns
    -------
    PricePanel
        Rows sorted by date.
    """
    schema = dict(schema or {})
    date_col = schema.get("date", "date")
    with open(path, newline="", encoding="utf-8") as fh:
        rows = [row for row in csv.reader(fh)
                if row and not row[0].lstrip().startswith("#")]
    if not rows:
        raise ParseError(f"{path}: empty file")
    header = [h.strip() for h in rows[0]]
    if date_col not in header:
        raise ParseError(f"{path}: no date column {date_col!r} in header")
    columns = schema.get("columns")
    if columns is None:
        columns = {h: h for h in header if h != date_col}
    if not columns:
        raise ParseError(f"{path}: no value columns")
    missing = [c for c in columns if c not in header]
    if missing:
        raise ParseError(f"{path}: columns not found: {missing}")
    di = header.index(date_col)
    vi = [header.index(c) for c in columns]

    records: dict[int, list[float]] = {}
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            raise ParseError(f"{path}: row {lineno} has {len(row)} fields, "
                             f"expected {len(header)}")
        try:
            month = parse_month(row[di])
        except ValueError as exc:
            raise ParseError(f"{path}: row {lineno}: {exc}") from None
        if month in records:
            raise DuplicateError(f"{path}: duplicate date {row[di].strip()} "
                                 f"at row {lineno}")
        vals = []
        for j, col in zip(vi, columns):
            cell = row[j].strip()
            try:
                v = float(cell)
            except ValueError:
                raise ParseError(f"{path}: row {lineno}, column {col!r}: "
                                 f"non-numeric price {cell!r}") from None
            if not math.isfinite(v) or v <= 0:
                raise ParseError(f"{path}: row {lineno}, column {col!r}: "
                                 f"non-positive price {cell!r}")
            vals.append(v)
        records[month] = vals

    months = sorted(records)
    if forward_fill:
        filled, prev = {}, None
        for m in range(months[0], months[-1] + 1):
            prev = records.get(m, prev)
            filled[m] = prev
        records, months = filled, sorted(filled)
    dates = [format_month(m) for m in months]
    _check_consecutive(dates)
    if len(dates) < 3:
        raise InsufficientData(f"{path}: need at least 3 monthly prices")
    return PricePanel(tuple(dates), tuple(columns.values()),
                      np.array([records[m] for m in months]))


def log_returns(p: PricePanel) -> ReturnPanel:
    """Log first differences, ``ln p[t+1] - ln p[t]``, dated at ``t+1``."""
    if p.values.shape[0] < 2:
        raise InsufficientData("need at least 2 prices for a return")
    r = np.diff(np.log(p.values), axis=0)
    return ReturnPanel(p.dates[1:], p.names, r)


# -- descriptives ------------------------------------------------------------

@dataclass(frozen=True)
class Descriptives:
    series: str
    mean: float
    sd: float
    min: float
    max: float
    n: int

    def as_dict(self) -> dict:
        return {"series": self.series, "mean": self.mean, "sd": self.sd,
                "min": self.min, "max": self.max, "n": self.n}


def describe(r: ReturnPanel) -> list[Descriptives]:
    """Mean, sample sd (n - 1 denominator), min, max and count per series."""
    if r.T < 2:
        raise InsufficientData("describe needs at least 2 observations")
    x = r.values
    # clip: rounding can put the mean of a constant column a ulp outside [min, max]
    mean = np.clip(x.mean(axis=0), x.min(axis=0), x.max(axis=0))
    sd = x.std(axis=0, ddof=1)
    return [Descriptives(name, float(mean[i]), float(sd[i]), float(x[:, i].min()),
                         float(x[:, i].max()), r.T)
            for i, name in enumerate(r.names)]


def descriptives_csv(rows: Iterable[Descriptives]) -> str:
    lines = ["series,mean,sd,min,max,n"]
    for d in rows:
        lines.append(f"{d.series},{d.mean!r},{d.sd!r},{d.min!r},{d.max!r},{d.n}")
    return "\n".join(lines) + "\n"


def descriptives_json(rows: Iterable[Descriptives]) -> str:
    return json.dumps([d.as_dict() for d in rows], indent=2)


def write_price_csv(p: PricePanel, path) -> None:
    with open(Path(path), "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["date", *p.names])
        for d, row in zip(p.dates, p.values):
            w.writerow([d, *(repr(float(v)) for v in row)])
