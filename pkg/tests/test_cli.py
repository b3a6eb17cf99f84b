import json
import os

import numpy as np
import pytest

from tvmeff.cli import build_parser, main, resolve_config
from tvmeff.irf import read_surface_csv
from tvmeff.pipeline import ARTIFACTS, RunConfig, load_config_file, write_atomic

from conftest import write_csv

FAST = ["--reps", "100", "--q", "1", "--workers", "1"]


def _error(capsys):
    return json.loads(capsys.readouterr().err.strip().splitlines()[-1])


def test_precedence(tmp_path):
    cfg_path = tmp_path / "c.json"
    cfg_path.write_text(json.dumps({"smoothness": 5.0, "seed": 3, "horizon": 6}))
    ns = build_parser().parse_args(["tvvar", "p.csv", "--config", str(cfg_path),
                                    "--seed", "9"])
    cfg = resolve_config(ns)
    assert cfg.seed == 9            # flag beats file
    assert cfg.smoothness == 5.0    # file beats default
    assert cfg.qmax == 12           # default
    assert cfg.input == "p.csv"


def test_unknown_config_key(tmp_path, capsys, market_prices):
    cfg_path = tmp_path / "c.json"
    cfg_path.write_text(json.dumps({"smoothnes": 5.0}))
    assert main(["describe", str(market_prices), "--config", str(cfg_path)]) == 4
    assert _error(capsys)["error"] == "ConfigError"


def test_nested_config_rejected(tmp_path):
    p = tmp_path / "c.json"
    p.write_text(json.dumps({"model": {"q": 2}}))
    with pytest.raises(Exception, match="flat"):
        load_config_file(p)


def test_bad_flag_is_config_error(capsys):
    assert main(["describe", "x.csv", "--no-such-flag"]) == 4


def test_missing_file_exit_2(capsys):
    assert main(["describe", "/nonexistent/prices.csv"]) == 2
    assert _error(capsys)["status"] == "error"


def test_gap_exit_2(tmp_path, capsys):
    p = write_csv(tmp_path / "p.csv", ["date", "a"], [["1924-05", 1], ["1924-06", 1],
                                                      ["1924-08", 2]])
    assert main(["describe", str(p)]) == 2
    err = _error(capsys)
    assert err["error"] == "GapError" and "1924-07" in err["message"]
    assert err["stage"] == "load"


def test_numeric_failure_exit_3(tmp_path, capsys):
    rows = [[f"1930-{m:02d}", 1 + 0.1 * (m % 3), 5.0] for m in range(1, 13)]
    rows += [[f"1931-{m:02d}", 1 + 0.1 * (m % 2), 5.0] for m in range(1, 13)]
    p = write_csv(tmp_path / "p.csv", ["date", "a", "b"], rows)
    assert main(["var", str(p), "--q", "1"]) == 3
    assert "'b'" in _error(capsys)["message"]


def test_describe_stdout(market_prices, capsys):
    assert main(["describe", str(market_prices)]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "series,mean,sd,min,max,n"
    assert out[-1].startswith("# manifest: {")
    trailer = json.loads(out[-1][len("# manifest: "):])
    assert trailer["command"] == "describe" and trailer["config"]["seed"] == 42


@pytest.mark.parametrize("cmd", [
    ["unitroot", "--pmax", "4"], ["var", "--q", "1"], ["tvvar", "--q", "1"],
    ["efficiency", "--q", "1"], ["efficiency", "--q", "1", "--series", "GBPI"],
    ["irf", "--q", "1", "--horizon", "3"]])
@pytest.mark.parametrize("fmt", ["csv", "json"])
def test_subcommands_write(cmd, fmt, tmp_path, market_prices):
    out = tmp_path / f"out.{fmt}"
    code = main([cmd[0], str(market_prices), *cmd[1:], "--format", fmt, "--out", str(out)])
    assert code == 0
    text = out.read_text()
    if fmt == "json":
        json.loads(text)
    else:
        assert text.rstrip().splitlines()[-1].startswith("# manifest:")


def test_bootstrap_subcommand(tmp_path, market_prices):
    out = tmp_path / "b.csv"
    assert main(["bootstrap", str(market_prices), *FAST, "--series", "EQPI",
                 "--out", str(out)]) == 0
    head = out.read_text().splitlines()[0]
    assert head == "date,zeta,lower,upper,flag,boundary"


def test_irf_at_out_of_range(market_prices, capsys):
    assert main(["irf", str(market_prices), "--q", "1", "--at", "1800-01"]) == 2
    assert _error(capsys)["error"] == "RangeError"


def test_synth_then_describe(tmp_path):
    dgp = tmp_path / "dgp.json"
    dgp.write_text(json.dumps({"k": 2, "q": 1, "T": 40, "coefficients": [[0.2, 0], [0, 0.1]],
                               "noise_sd": 0.02, "seed": 1, "names": ["A", "B"]}))
    panel, truth = tmp_path / "panel.csv", tmp_path / "truth.csv"
    assert main(["synth", "--spec", str(dgp), "--out", str(panel), str(truth)]) == 0
    assert panel.read_text().startswith("date,A,B\n")
    assert main(["describe", str(panel), "--out", str(tmp_path / "d.csv")]) == 0


def test_synth_bad_spec(tmp_path, capsys):
    dgp = tmp_path / "dgp.json"
    dgp.write_text(json.dumps({"k": 1, "q": 1, "T": 40, "coefficients": [[1.5]]}))
    assert main(["synth", "--spec", str(dgp), "--out", "a.csv", "b.csv"]) == 4


def test_write_atomic_leaves_no_partial_file(tmp_path, monkeypatch):
    target = tmp_path / "x.csv"
    target.write_text("old\n")

    def boom(*a, **k):
        raise OSError("disk full")

    monkeypatch.setattr(os, "replace", boom)
    with pytest.raises(OSError):
        write_atomic(target, "new\n")
    assert target.read_text() == "old\n"
    assert [p.name for p in tmp_path.iterdir()] == ["x.csv"]


def _run(out_dir, prices, *extra):
    return main(["run", str(prices), *FAST, "--out-dir", str(out_dir),
                 "--at", "1932-07", "--horizon", "4", *extra])


def test_run_writes_everything(tmp_path, market_prices):
    out = tmp_path / "out"
    assert _run(out, market_prices, "--format", "csv,json") == 0
    names = {p.name for p in out.iterdir()}
    for a in ARTIFACTS:
        assert f"{a}.csv" in names and f"{a}.json" in names
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["selected_q"] == 1 and manifest["tool"] == "tvmeff"
    assert "workers" not in manifest["config"]
    static = read_surface_csv((out / "irf_static.csv").read_text())
    full = read_surface_csv((out / "irf_surface.csv").read_text())
    np.testing.assert_array_equal(static.values[0], full.at("1932-07"))


def test_run_is_deterministic_across_workers(tmp_path, market_prices):
    a, b = tmp_path / "a", tmp_path / "b"
    assert _run(a, market_prices) == 0
    assert main(["run", str(market_prices), "--reps", "100", "--q", "1", "--workers", "3",
                 "--out-dir", str(b), "--at", "1932-07", "--horizon", "4"]) == 0
    for p in sorted(a.iterdir()):
        assert p.read_bytes() == (b / p.name).read_bytes(), p.name


def test_manifest_round_trip(tmp_path, market_prices):
    a, b = tmp_path / "a", tmp_path / "b"
    assert _run(a, market_prices, "--smoothness", "2.5") == 0
    assert main(["run", "--config", str(a / "manifest.json"), "--out-dir", str(b)]) == 0
    for name in ("joint_degree.csv", "table2.csv", "manifest.json"):
        assert (a / name).read_bytes() == (b / name).read_bytes()


def test_run_config_validation():
    with pytest.raises(Exception):
        RunConfig.from_mapping({"formats": "xml"})
    with pytest.raises(Exception):
        RunConfig.from_mapping({"reps": 10})
    assert RunConfig.from_mapping({"formats": "csv,json"}).formats == ["csv", "json"]
