"""``tvmeff`` command line.

Settings resolve as command-line flag > ``--config`` file > built-in
default.  Exit codes: 0 success, 2 input/schema error, 3 numerical failure,
4 configuration error; failures print a one-line JSON report on stderr.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import __version__
from .bootstrap import BootstrapConfig, bootstrap_bands
from .efficiency import degree_path, path_csv, path_records
from .errors import ConfigError, InputError, TvmeffError
from .irf import surface_csv, tv_irf
from .pipeline import (RunConfig, load_config_file, run_pipeline, stage, table2,
                       with_trailer, write_atomic)
from .synth import DgpSpec, gen_panel, truth_csv
from .timeseries import descriptives_csv, describe, load_price_csv, log_returns, write_price_csv
from .tvvar import coefficients_csv, fit_tvar_univariate, fit_tvvar_gls
from .unitroot import DetrendSpec, adf_gls_test, unitroot_csv
from .var import select_lag_bic

S = argparse.SUPPRESS


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def _auto_int(v: str):
    return v if v == "auto" else int(v)


def _common(p: argparse.ArgumentParser, input_required=True) -> None:
    if input_required:
        p.add_argument("input", nargs="?", default=S, help="price CSV (date,<series>...)")
    p.add_argument("--config", default=S, help="flat JSON config or run manifest")
    p.add_argument("--date-column", dest="date_column", default=S)
    p.add_argument("--forward-fill", dest="forward_fill", action="store_true", default=S)
    p.add_argument("--seed", type=int, default=S)
    p.add_argument("--workers", type=_auto_int, default=S)


def _single_out(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", default=None, help="output file (default: stdout)")
    p.add_argument("--format", dest="fmt", choices=("csv", "json"), default="csv")


def _model_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--qmax", type=int, default=S)
    p.add_argument("--q", type=_auto_int, default=S)
    p.add_argument("--smoothness", type=float, default=S)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="tvmeff", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"tvmeff {__version__}")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser, required=True)

    p = sub.add_parser("describe", help="descriptive statistics of log returns")
    _common(p), _single_out(p)

    p = sub.add_parser("unitroot", help="ADF-GLS test per series")
    _common(p), _single_out(p)
    p.add_argument("--spec", dest="detrend", choices=("trend", "constant"), default=S)
    p.add_argument("--pmax", type=_auto_int, default=S)
    p.add_argument("--lag-selection", dest="lag_selection", choices=("mbic", "bic"), default=S)

    p = sub.add_parser("var", help="time-invariant VAR with HAC errors and Hansen Lc")
    _common(p), _single_out(p)
    p.add_argument("--qmax", type=int, default=S)
    p.add_argument("--q", type=_auto_int, default=S)
    p.add_argument("--bandwidth", type=_auto_int, default=S)

    p = sub.add_parser("tvvar", help="time-varying VAR coefficient paths")
    _common(p), _single_out(p), _model_args(p)

    p = sub.add_parser("efficiency", help="degree-of-efficiency path (no bands)")
    _common(p), _single_out(p), _model_args(p)
    p.add_argument("--series", default=None, help="univariate degree of one series")

    p = sub.add_parser("irf", help="time-varying or static impulse responses")
    _common(p), _single_out(p), _model_args(p)
    p.add_argument("--horizon", type=int, default=S)
    p.add_argument("--at", action="append", default=S, help="YYYY-MM; repeatable")
    p.add_argument("--orthogonalize", action="store_true", default=S)

    p = sub.add_parser("bootstrap", help="degree path with null bootstrap bands")
    _common(p), _single_out(p), _model_args(p)
    p.add_argument("--reps", type=int, default=S)
    p.add_argument("--level", type=float, default=S)
    p.add_argument("--series", default=None, help="bands for one series' univariate degree")

    p = sub.add_parser("synth", help="simulate a panel from a JSON DGP spec")
    p.add_argument("--spec", dest="dgp", required=True, help="DGP spec JSON")
    p.add_argument("--out", nargs=2, required=True, metavar=("PANEL", "TRUTH"),
                   help="price CSV and true-coefficient CSV")

    p = sub.add_parser("run", help="full pipeline into an output directory")
    _common(p), _model_args(p)
    p.add_argument("--spec", dest="detrend", choices=("trend", "constant"), default=S)
    p.add_argument("--pmax", type=_auto_int, default=S)
    p.add_argument("--lag-selection", dest="lag_selection", choices=("mbic", "bic"), default=S)
    p.add_argument("--bandwidth", type=_auto_int, default=S)
    p.add_argument("--horizon", type=int, default=S)
    p.add_argument("--at", action="append", default=S)
    p.add_argument("--orthogonalize", action="store_true", default=S)
    p.add_argument("--reps", type=int, default=S)
    p.add_argument("--level", type=float, default=S)
    p.add_argument("--out-dir", dest="out_dir", default=S)
    p.add_argument("--format", dest="formats", default=S, help="csv, json or csv,json")
    return parser


_LOCAL = {"command", "config", "out", "fmt", "series", "dgp"}


def resolve_config(ns: argparse.Namespace) -> RunConfig:
    """Defaults, then the config file, then explicit flags."""
    values = {}
    if getattr(ns, "config", None):
        values.update(load_config_file(ns.config))
    values.update({k: v for k, v in vars(ns).items() if k not in _LOCAL})
    return RunConfig.from_mapping(values)


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        write_atomic(out, text)


def _trailer(command: str, cfg: RunConfig) -> str:
    ref = json.dumps({"command": command, "version": __version__,
                      "config": cfg.manifest_dict()}, sort_keys=True, separators=(",", ":"))
    return ref


def _panel(cfg: RunConfig):
    if cfg.input is None:
        raise ConfigError("no input file given")
    schema = {"date": cfg.date_column}
    if cfg.columns:
        schema["columns"] = cfg.columns
    with stage("load"):
        return log_returns(load_price_csv(cfg.input, schema, forward_fill=cfg.forward_fill))


def _order(cfg: RunConfig, r) -> int:
    return select_lag_bic(r, cfg.qmax) if cfg.q == "auto" else int(cfg.q)


def _dispatch(ns: argparse.Namespace) -> int:
    cmd = ns.command
    if cmd == "synth":
        with stage("synth"):
            panel, truth = gen_panel(DgpSpec.from_json(ns.dgp))
            write_price_csv(panel.to_prices(), ns.out[0])
            write_atomic(ns.out[1], truth_csv(panel, truth))
        return 0

    cfg = resolve_config(ns)
    if cmd == "run":
        run_pipeline(cfg)
        return 0

    r = _panel(cfg)
    trailer = _trailer(cmd, cfg)
    fmt = ns.fmt
    with stage(cmd):
        if cmd == "describe":
            rows = describe(r)
            text = (descriptives_csv(rows) if fmt == "csv"
                    else json.dumps([d.as_dict() for d in rows], indent=2) + "\n")
        elif cmd == "unitroot":
            spec = DetrendSpec(cfg.detrend)
            pmax = None if cfg.pmax == "auto" else cfg.pmax
            res = [(name, adf_gls_test(r.values[:, i], spec, pmax,
                                       lag_selection=cfg.lag_selection))
                   for i, name in enumerate(r.names)]
            if fmt == "csv":
                text = unitroot_csv(res)
            else:
                text = json.dumps([{"series": n, "statistic": u.statistic, "lag": u.lag,
                                    "phi_hat": [float(v) for v in u.phi_hat],
                                    "rho_hat": u.rho_hat, "critical_5pct": u.critical_5pct,
                                    "reject": bool(u.reject)} for n, u in res], indent=2) + "\n"
        elif cmd == "var":
            rows, record = table2(r, _order(cfg, r), cfg.bandwidth)
            if fmt == "csv":
                from .pipeline import _csv_text
                text = _csv_text(rows)
            else:
                text = json.dumps(record, indent=2) + "\n"
        elif cmd == "tvvar":
            m = fit_tvvar_gls(r, _order(cfg, r), cfg.smoothness)
            if fmt == "csv":
                text = coefficients_csv(m)
            else:
                text = json.dumps({"dates": list(m.dates), "names": list(m.names),
                                   "nu": m.nu.tolist(), "lambda": m.lam,
                                   "A_path": m.A_path.tolist()}) + "\n"
        elif cmd in ("efficiency", "bootstrap"):
            q = _order(cfg, r)
            target = r.column(ns.series) if ns.series else r
            model = (fit_tvar_univariate(target, q, cfg.smoothness) if ns.series
                     else fit_tvvar_gls(target, q, cfg.smoothness))
            path = degree_path(model)
            if cmd == "bootstrap":
                b = bootstrap_bands(target, q, cfg.smoothness,
                                    BootstrapConfig(cfg.reps, cfg.level, cfg.seed, cfg.workers))
                path = path.with_bands(b.lower, b.upper, b.level)
            text = (path_csv(path) if fmt == "csv"
                    else json.dumps(path_records(path), indent=1) + "\n")
        elif cmd == "irf":
            m = fit_tvvar_gls(r, _order(cfg, r), cfg.smoothness)
            surface = tv_irf(m, cfg.horizon, cfg.orthogonalize)
            dates = cfg.at or None
            if fmt == "csv":
                text = surface_csv(surface, dates)
            else:
                keep = dates or list(surface.dates)
                text = json.dumps({d: surface.at(d).tolist() for d in keep}) + "\n"
        else:  # pragma: no cover - argparse restricts choices
            raise ConfigError(f"unknown command {cmd}")
    if fmt == "csv":
        text = with_trailer(text, trailer)
    _emit(text, ns.out)
    return 0


def main(argv=None) -> int:
    np.seterr(all="ignore")
    try:
        ns = build_parser().parse_args(argv)
        return _dispatch(ns)
    except TvmeffError as exc:
        code = exc.exit_code
        err = exc
    except (FileNotFoundError, PermissionError, IsADirectoryError) as exc:
        code, err = InputError.exit_code, exc
    except np.linalg.LinAlgError as exc:
        code, err = 3, exc
    report = {"status": "error", "exit_code": code, "error": type(err).__name__,
              "stage": getattr(err, "stage", None), "message": str(err)}
    sys.stderr.write(json.dumps(report) + "\n")
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
