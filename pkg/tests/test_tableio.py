import json
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from psgames.analysis import SweepRow, SweepTable, company_family, foraging_family, sweep
from psgames.company import Linear
from psgames.core import EssClassification
from psgames.tableio import columns, dumps, loads, read_tables, write_tables

finite = st.floats(allow_nan=False, allow_infinity=False)


def test_column_order():
    assert columns(None) == ["gamma", "p_star", "pi_star", "total_production", "classification"]
    assert columns("s") == ["gamma", "s", "p_star", "pi_star", "total_production", "classification"]


@pytest.mark.parametrize("fmt", ["csv", "json"])
def test_round_trip_with_degenerate_rows(fmt):
    table = sweep(company_family(2, 0.7, 0.25, utility=Linear()), 0.0, 3.0, 0.01)
    meta = {"game": "company"}
    back, meta_back = loads(dumps([(None, table)], fmt, meta), fmt)
    assert meta_back == meta
    assert back[0][1].rows == table.rows
    assert any(r.classification is EssClassification.DEGENERATE for r in back[0][1].rows)


@pytest.mark.parametrize("fmt", ["csv", "json"])
def test_round_trip_second_axis(tmp_path, fmt):
    tables = [(s, sweep(foraging_family(3, s), 0.0, 1.0, 0.1)) for s in (0.2, 0.4)]
    meta = {"second_axis": {"name": "s"}}
    path = tmp_path / f"out.{fmt}"
    write_tables(path, tables, fmt, meta, "s")
    back, _ = read_tables(path)
    assert [v for v, _ in back] == [0.2, 0.4]
    assert [t.rows for _, t in back] == [t.rows for _, t in tables]


@settings(max_examples=200, deadline=None)
@given(values=st.lists(st.tuples(finite, finite, finite, finite), min_size=1, max_size=10))
def test_floats_survive_exactly(values):
    rows = [SweepRow(g, p, v, t, EssClassification.INTERIOR) for g, p, v, t in values]
    for fmt in ("csv", "json"):
        back, _ = loads(dumps([(None, SweepTable(rows))], fmt, {}), fmt)
        assert back[0][1].rows == rows


def test_csv_layout():
    rows = [SweepRow(0.1, 1.0, 1.1, 4.4, EssClassification.ALL_PRODUCER)]
    text = dumps([(None, SweepTable(rows))], "csv", {"k": 1})
    lines = text.splitlines()
    assert json.loads(lines[0][2:]) == {"k": 1}
    assert lines[1] == "gamma,p_star,pi_star,total_production,classification"
    assert lines[2] == "0.1,1.0,1.1,4.4,AllProducer"


def test_json_refuses_nan():
    rows = [SweepRow(0.1, 1.0, math.nan, 4.4, EssClassification.ALL_PRODUCER)]
    with pytest.raises(ValueError):
        dumps([(None, SweepTable(rows))], "json", {})


def test_unknown_format():
    with pytest.raises(ValueError):
        dumps([], "xml", {})
    with pytest.raises(ValueError):
        loads("", "xml")
