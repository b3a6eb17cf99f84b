import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from tvmeff.errors import DuplicateError, GapError, InsufficientData, ParseError
from tvmeff.timeseries import (PricePanel, ReturnPanel, describe, descriptives_csv,
                               descriptives_json, load_price_csv, log_returns, month_range)

from conftest import write_csv


def test_load_four_rows_three_series(tmp_path):
    path = write_csv(tmp_path / "p.csv", ["date", "a", "b", "c"],
                     [["1924-06", 1, 2, 3], ["1924-07", 1.1, 2, 3],
                      ["1924-08", 1.2, 2.1, 3], ["1924-09", 1.3, 2.2, 3.3]])
    p = load_price_csv(path)
    assert p.values.shape == (4, 3)
    assert p.names == ("a", "b", "c")
    assert p.dates == ("1924-06", "1924-07", "1924-08", "1924-09")


def test_rows_are_sorted(tmp_path):
    path = write_csv(tmp_path / "p.csv", ["date", "a"],
                     [["1924-08", 3], ["1924-06", 1], ["1924-07", 2]])
    p = load_price_csv(path)
    assert p.dates == ("1924-06", "1924-07", "1924-08")
    np.testing.assert_array_equal(p.values[:, 0], [1, 2, 3])


def test_gap_is_named(tmp_path):
    path = write_csv(tmp_path / "p.csv", ["date", "a"],
                     [["1924-05", 1], ["1924-06", 1], ["1924-08", 2]])
    with pytest.raises(GapError, match="1924-07"):
        load_price_csv(path)


def test_forward_fill_closes_gap(tmp_path):
    path = write_csv(tmp_path / "p.csv", ["date", "a"],
                     [["1924-05", 1], ["1924-06", 1.5], ["1924-08", 2]])
    p = load_price_csv(path, forward_fill=True)
    assert p.dates == ("1924-05", "1924-06", "1924-07", "1924-08")
    assert p.values[2, 0] == 1.5


@pytest.mark.parametrize("cell", ["0", "-1.5", "abc", "nan", ""])
def test_bad_price_cells(tmp_path, cell):
    path = write_csv(tmp_path / "p.csv", ["date", "a", "b"],
                     [["1924-06", 1, 1], ["1924-07", cell, 1], ["1924-08", 1, 1]])
    with pytest.raises(ParseError, match=r"row 3, column 'a'"):
        load_price_csv(path)


def test_duplicate_date(tmp_path):
    path = write_csv(tmp_path / "p.csv", ["date", "a"],
                     [["1924-06", 1], ["1924-07", 1], ["1924-07", 2]])
    with pytest.raises(DuplicateError):
        load_price_csv(path)


def test_schema_mapping(tmp_path):
    path = write_csv(tmp_path / "p.csv", ["month", "stock", "ignored"],
                     [["1930-01", 1, 9], ["1930-02", 2, 9], ["1930-03", 3, 9]])
    p = load_price_csv(path, {"date": "month", "columns": {"stock": "EQPI"}})
    assert p.names == ("EQPI",)


def test_missing_date_column(tmp_path):
    path = write_csv(tmp_path / "p.csv", ["when", "a"], [["1924-06", 1]])
    with pytest.raises(ParseError, match="date column"):
        load_price_csv(path)


def test_log_return_of_e():
    p = PricePanel(("2000-01", "2000-02", "2000-03"), ("a",), [[1.0], [math.e], [math.e]])
    r = log_returns(p)
    assert r.values[0, 0] == pytest.approx(1.0, abs=1e-15)
    assert r.values[1, 0] == 0.0
    assert r.dates == ("2000-02", "2000-03")


def test_constant_prices_give_zero_returns():
    p = PricePanel(month_range("1930-01", 5), ("a", "b"), np.full((5, 2), 7.0))
    np.testing.assert_array_equal(log_returns(p).values, 0.0)


def test_sample_length_rule():
    # 246 monthly prices give 245 returns
    p = PricePanel(month_range("1924-06", 246), ("a",), np.ones((246, 1)))
    assert log_returns(p).T == 245


def test_price_panel_needs_three_rows():
    with pytest.raises(InsufficientData):
        PricePanel(("2000-01", "2000-02"), ("a",), [[1.0], [2.0]])


def test_describe_constant():
    d, = describe(ReturnPanel.from_array([1.0, 1.0, 1.0]))
    assert (d.mean, d.sd, d.min, d.max, d.n) == (1.0, 0.0, 1.0, 1.0, 3)


def test_describe_two_points():
    d, = describe(ReturnPanel.from_array([0.0, 2.0]))
    assert d.mean == 1.0
    assert d.sd == pytest.approx(math.sqrt(2), rel=1e-15)


def test_descriptives_outputs():
    rows = describe(ReturnPanel.from_array(np.array([[0.0, 1.0], [2.0, 3.0]]), ["a", "b"]))
    text = descriptives_csv(rows)
    assert text.splitlines()[0] == "series,mean,sd,min,max,n"
    assert text.splitlines()[1].startswith("a,1.0,")
    assert json.loads(descriptives_json(rows))[1]["series"] == "b"


finite = st.floats(-0.5, 0.5, allow_nan=False)


@settings(max_examples=50, deadline=None)
@given(arrays(float, st.tuples(st.integers(2, 40), st.integers(1, 3)), elements=finite))
def test_round_trip(r):
    panel = ReturnPanel.from_array(r)
    back = log_returns(panel.to_prices())
    np.testing.assert_allclose(back.values, r, atol=1e-12, rtol=0)


@settings(max_examples=50, deadline=None)
@given(arrays(float, st.tuples(st.integers(3, 30), st.just(2)),
              elements=st.floats(0.1, 100.0)),
       st.floats(1e-3, 1e3))
def test_scale_invariance(p, c):
    dates = month_range("1950-01", p.shape[0])
    a = log_returns(PricePanel(dates, ("a", "b"), p)).values
    b = log_returns(PricePanel(dates, ("a", "b"), c * p)).values
    np.testing.assert_allclose(a, b, atol=1e-12)


@settings(max_examples=50, deadline=None)
@given(arrays(float, st.integers(2, 30), elements=finite), st.randoms())
def test_describe_permutation_invariant(x, rnd):
    perm = list(range(len(x)))
    rnd.shuffle(perm)
    d1, = describe(ReturnPanel.from_array(x))
    d2, = describe(ReturnPanel.from_array(x[perm]))
    assert d1.min == d2.min and d1.max == d2.max
    assert d1.mean == pytest.approx(d2.mean, abs=1e-15)
    assert d1.sd == pytest.approx(d2.sd, abs=1e-12)
    assert d1.min <= d1.mean <= d1.max and d1.sd >= 0
