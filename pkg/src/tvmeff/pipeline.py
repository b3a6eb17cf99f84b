"""End-to-end run: descriptives and unit roots, VAR diagnostics, degree
paths with bootstrap bands, and time-varying impulse responses."""

from __future__ import annotations

import contextlib
import csv
import dataclasses
import hashlib
import io
import json
import os
import platform
import tempfile
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import scipy

from . import __version__
from .bootstrap import BootstrapConfig, bootstrap_bands
from .efficiency import EfficiencyPath, band_flags, degree_path, joint_diagonal_degrees
from .errors import ConfigError, TvmeffError
from .irf import surface_csv, tv_irf
from .timeseries import ReturnPanel, describe, load_price_csv, log_returns
from .tvvar import fit_tvar_univariate, fit_tvvar_gls
from .unitroot import DetrendSpec, adf_gls_test
from .var import fit_var_ols, hansen_lc, newey_west_se, select_lag_bic

ARTIFACTS = ("table1", "table2", "joint_degree", "individual_degree",
             "irf_surface", "irf_static")
MANIFEST = "manifest.json"


@dataclass
class RunConfig:
    """Settings of a pipeline run; every field except ``input`` has a default.

    ``workers`` and ``out_dir`` do not influence results and are left out of
    the manifest.
    """

    input: str | None = None
    date_column: str = "date"
    columns: dict | None = None
    forward_fill: bool = False
    detrend: str = "trend"
    pmax: int | str = "auto"
    lag_selection: str = "bic"
    qmax: int = 12
    q: int | str = "auto"
    bandwidth: int | str = "auto"
    smoothness: float = 1.0
    horizon: int = 12
    at: list = field(default_factory=list)
    orthogonalize: bool = False
    reps: int = 5000
    level: float = 0.95
    seed: int = 42
    workers: int | str = "auto"
    out_dir: str = "tvmeff_out"
    formats: list = field(default_factory=lambda: ["csv"])

    _NOT_IN_MANIFEST = ("workers", "out_dir")

    @classmethod
    def field_names(cls) -> list[str]:
        return [f.name for f in dataclasses.fields(cls)]

    @classmethod
    def from_mapping(cls, values: dict) -> "RunConfig":
        unknown = set(values) - set(cls.field_names())
        if unknown:
            raise ConfigError(f"unknown configuration keys: {sorted(unknown)}")
        cfg = cls(**values)
        cfg.validate()
        return cfg

    def validate(self) -> None:
        def positive_int_or_auto(name):
            v = getattr(self, name)
            if v == "auto":
                return
            try:
                iv = int(v)
            except (TypeError, ValueError):
                raise ConfigError(f"{name} must be an integer or 'auto'") from None
            if iv < 0 or (name in ("q", "workers") and iv < 1):
                raise ConfigError(f"{name} out of range: {v}")
            setattr(self, name, iv)

        for name in ("pmax", "q", "bandwidth", "workers"):
            positive_int_or_auto(name)
        try:
            self.qmax = int(self.qmax)
            self.horizon = int(self.horizon)
            self.reps = int(self.reps)
            self.seed = int(self.seed)
            self.smoothness = float(self.smoothness)
            self.level = float(self.level)
        except (TypeError, ValueError) as exc:
            raise ConfigError(str(exc)) from None
        if self.qmax < 1:
            raise ConfigError("qmax must be at least 1")
        if self.horizon < 1:
            raise ConfigError("horizon must be at least 1")
        if not self.smoothness > 0:
            raise ConfigError("smoothness must be positive")
        if self.detrend not in ("trend", "constant"):
            raise ConfigError("detrend must be 'trend' or 'constant'")
        if self.lag_selection not in ("mbic", "bic"):
            raise ConfigError("lag_selection must be 'mbic' or 'bic'")
        if isinstance(self.formats, str):
            self.formats = [f.strip() for f in self.formats.split(",") if f.strip()]
        if not self.formats or set(self.formats) - {"csv", "json"}:
            raise ConfigError("formats must be a subset of {csv, json}")
        if isinstance(self.at, str):
            self.at = [self.at]
        self.at = list(self.at)
        BootstrapConfig(self.reps, self.level, self.seed, self.workers)

    def manifest_dict(self) -> dict:
        d = dataclasses.asdict(self)
        for key in self._NOT_IN_MANIFEST:
            d.pop(key)
        return d


def load_config_file(path) -> dict:
    """Flat JSON object of RunConfig keys; a run manifest is accepted too."""
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    if not isinstance(data, dict):
        raise ConfigError("config file must hold a JSON object")
    if "config" in data and isinstance(data["config"], dict):
        data = data["config"]
    nested = [k for k, v in data.items() if isinstance(v, dict) and k != "columns"]
    if nested:
        raise ConfigError(f"config must be flat; nested keys: {nested}")
    return data


# -- output helpers ------------------------------------------------------------

def write_atomic(path, text: str) -> None:
    """Write via a temporary file in the same directory, then rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        with contextlib.suppress(OSError):
            os.unlink(tmp)
        raise


def with_trailer(text: str, ref: str = MANIFEST) -> str:
    return text + f"# manifest: {ref}\n"


def _csv_text(rows) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


def _f4(v: float) -> str:
    return f"{v:.4f}"


def file_sha256(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        h.update(fh.read())
    return h.hexdigest()


@contextlib.contextmanager
def stage(name: str):
    try:
        yield
    except TvmeffError as exc:
        if not hasattr(exc, "stage"):
            exc.stage = name
        raise


# -- tables --------------------------------------------------------------------

def table1(r: ReturnPanel, spec: DetrendSpec, pmax, lag_selection: str = "bic"):
    """Descriptives and ADF-GLS results laid out series-by-column."""
    desc = describe(r)
    ur = [adf_gls_test(r.values[:, i], spec, None if pmax == "auto" else pmax,
                       lag_selection=lag_selection) for i in range(r.k)]
    rows = [["", *r.names],
            ["Mean", *(_f4(d.mean) for d in desc)],
            ["SD", *(_f4(d.sd) for d in desc)],
            ["Min", *(_f4(d.min) for d in desc)],
            ["Max", *(_f4(d.max) for d in desc)],
            ["ADF-GLS", *(_f4(u.statistic) for u in ur)],
            ["Lags", *(str(u.lag) for u in ur)],
            ["phi_hat", *(";".join(_f4(v) for v in u.phi_hat) for u in ur)],
            ["rho_hat", *(_f4(u.rho_hat) for u in ur)],
            ["N", *(str(d.n) for d in desc)]]
    record = {
        "critical_5pct": ur[0].critical_5pct,
        "detrend": spec.kind,
        "series": {name: {"mean": d.mean, "sd": d.sd, "min": d.min, "max": d.max,
                          "n": d.n, "adf_gls": u.statistic, "lag": u.lag,
                          "phi_hat": [float(v) for v in u.phi_hat],
                          "rho_hat": u.rho_hat, "reject": bool(u.reject)}
                   for name, d, u in zip(r.names, desc, ur)},
    }
    return rows, record


def table2(r: ReturnPanel, q: int, bandwidth="auto"):
    """VAR(q) estimates with bracketed Newey-West errors, adj. R^2 and Lc.

    Columns are equations; rows are regressors, each followed by its
    standard-error row.
    """
    m = fit_var_ols(r, q)
    se = newey_west_se(m, bandwidth)
    lc = hansen_lc(m)
    coef = m.coef
    labels = ["Constant"] + [f"R_{name}(t-{l})" for l in range(1, q + 1) for name in r.names]
    rows = [["", *r.names]]
    for j, label in enumerate(labels):
        rows.append([label, *(_f4(coef[i, j]) for i in range(m.k))])
        rows.append(["", *(f"[{_f4(se[i, j])}]" for i in range(m.k))])
    rows.append(["adj_R2", *(_f4(v) for v in m.adj_r2)])
    rows.append(["Lc", _f4(lc.lc), *([""] * (m.k - 1))])
    rows.append(["Lc_reject_5pct", str(lc.reject_5pct).lower(), *([""] * (m.k - 1))])
    rows.append(["q", str(q), *([""] * (m.k - 1))])
    record = {
        "q": q, "regressors": labels,
        "coef": {name: [float(v) for v in coef[i]] for i, name in enumerate(r.names)},
        "se": {name: [float(v) for v in se[i]] for i, name in enumerate(r.names)},
        "adj_r2": {name: float(v) for name, v in zip(r.names, m.adj_r2)},
        "lc": lc.lc, "lc_dof": lc.dof, "lc_critical_5pct": lc.critical_5pct,
        "lc_reject_5pct": bool(lc.reject_5pct),
    }
    return rows, record


def _banded(path: EfficiencyPath, bands) -> EfficiencyPath:
    return path.with_bands(bands.lower, bands.upper, bands.level)


def _degree_rows(path: EfficiencyPath, series: str | None = None, extra=None):
    flags = band_flags(path.zeta, path.lower, path.upper)
    rows = []
    for t, date in enumerate(path.dates):
        z = "" if path.boundary[t] else repr(float(path.zeta[t]))
        row = [date] + ([series] if series is not None else [])
        row += [z, repr(float(path.lower[t])), repr(float(path.upper[t])), flags[t],
                "boundary" if path.boundary[t] else ""]
        if extra is not None:
            row.append("" if not np.isfinite(extra[t]) else repr(float(extra[t])))
        rows.append(row)
    return rows


def _records(header, rows):
    return [dict(zip(header, row)) for row in rows]


def run_pipeline(cfg: RunConfig) -> dict:
    """Run every stage and write the artifacts into ``cfg.out_dir``.

    Returns a mapping of artifact name to written path.  Each file is
    written atomically; an error carries the failing stage in ``exc.stage``.
    """
    cfg.validate()
    if cfg.input is None:
        raise ConfigError("no input file given")
    out = Path(cfg.out_dir)
    texts: dict[str, str] = {}
    records: dict[str, object] = {}

    with stage("load"):
        schema = {"date": cfg.date_column}
        if cfg.columns:
            schema["columns"] = cfg.columns
        prices = load_price_csv(cfg.input, schema, forward_fill=cfg.forward_fill)
        r = log_returns(prices)

    with stage("unitroot"):
        rows, records["table1"] = table1(r, DetrendSpec(cfg.detrend), cfg.pmax,
                                         cfg.lag_selection)
        texts["table1"] = _csv_text(rows)

    with stage("var"):
        q = select_lag_bic(r, cfg.qmax) if cfg.q == "auto" else int(cfg.q)
        rows, records["table2"] = table2(r, q, cfg.bandwidth)
        texts["table2"] = _csv_text(rows)

    bcfg = BootstrapConfig(cfg.reps, cfg.level, cfg.seed, cfg.workers)
    with stage("tvvar"):
        model = fit_tvvar_gls(r, q, cfg.smoothness)

    with stage("efficiency"):
        joint = _banded(degree_path(model), bootstrap_bands(r, q, cfg.smoothness, bcfg))
        header = ["date", "zeta", "lower", "upper", "flag", "boundary"]
        rows = _degree_rows(joint)
        texts["joint_degree"] = _csv_text([header, *rows])
        records["joint_degree"] = _records(header, rows)

        diag = joint_diagonal_degrees(model)
        header = ["date", "series", "zeta", "lower", "upper", "flag", "boundary",
                  "zeta_joint_diagonal"]
        rows = []
        for name in r.names:
            col = r.column(name)
            path = degree_path(fit_tvar_univariate(col, q, cfg.smoothness))
            bands = bootstrap_bands(col, q, cfg.smoothness, bcfg)
            rows += _degree_rows(_banded(path, bands), name, diag[name].zeta)
        texts["individual_degree"] = _csv_text([header, *rows])
        records["individual_degree"] = _records(header, rows)

    with stage("irf"):
        surface = tv_irf(model, cfg.horizon, cfg.orthogonalize)
        texts["irf_surface"] = surface_csv(surface)
        for date in cfg.at:
            surface.at(date)
        texts["irf_static"] = surface_csv(surface, cfg.at)
        records["irf_surface"] = {"dates": list(surface.dates), "names": list(surface.names),
                                  "axes": ["date", "horizon", "shock", "response"],
                                  "values": surface.values.tolist()}
        records["irf_static"] = {d: surface.at(d).tolist() for d in cfg.at}

    written = {}
    with stage("write"):
        for name in ARTIFACTS:
            if "csv" in cfg.formats:
                p = out / f"{name}.csv"
                write_atomic(p, with_trailer(texts[name]))
                written[name] = str(p)
            if "json" in cfg.formats:
                p = out / f"{name}.json"
                write_atomic(p, json.dumps(records[name], indent=1, allow_nan=False) + "\n")
                written[f"{name}_json"] = str(p)
        manifest = {
            "tool": "tvmeff",
            "version": __version__,
            "config": cfg.manifest_dict(),
            "input_sha256": file_sha256(cfg.input),
            "selected_q": q,
            "versions": {"python": platform.python_version(),
                         "numpy": np.__version__, "scipy": scipy.__version__},
            "artifacts": sorted(Path(p).name for p in written.values()),
        }
        write_atomic(out / MANIFEST, json.dumps(manifest, indent=2, sort_keys=True) + "\n")
        written["manifest"] = str(out / MANIFEST)
    return written
