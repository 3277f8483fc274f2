import json
import math

import pytest

from zposc.estimates import EstimateRow, EstimateTable, fmt


def _table():
    return EstimateTable.build([
        EstimateRow("x^2", 0.4991, 0.0007, 1_000_000, 0.5),
        EstimateRow("H", 0.5003, 0.0009, 1_000_000, 0.5),
    ])


def test_z_score():
    row = EstimateRow("q", 1.2, 0.1, 10, 1.0)
    assert row.z == pytest.approx(2.0)
    exact = EstimateRow("q", 1.0, 0.0, 10, 1.0)
    assert exact.z == 0.0
    off = EstimateRow("q", 2.0, 0.0, 10, 1.0)
    assert math.isinf(off.z)


def test_csv_roundtrip():
    table = _table()
    text = table.to_csv()
    back = EstimateTable.from_csv(text)
    assert back == table
    assert text.splitlines()[0] == "name,estimate,se,n_eff,reference,z"


def test_json_roundtrip():
    table = _table()
    text = table.to_json()
    doc = json.loads(text)
    assert doc["schema_version"] == 1
    assert EstimateTable.from_json(text) == table


def test_bad_inputs():
    with pytest.raises(ValueError):
        EstimateTable.from_csv("wrong,header\n")
    with pytest.raises(ValueError):
        EstimateTable.from_json('{"schema_version": 99, "rows": []}')


def test_lookup_and_max_z():
    table = _table()
    assert table.row("H").estimate == 0.5003
    with pytest.raises(KeyError):
        table.row("nope")
    assert table.max_abs_z() == pytest.approx(abs((0.4991 - 0.5) / 0.0007))


def test_fmt_12_significant_digits():
    assert fmt(1.0819767068693264) == "1.08197670687"
    assert fmt(0.25) == "0.25"
    assert fmt(60001.0000025) == "60001.0000025"


def test_render_text_alignment():
    text = _table().render_text()
    lines = text.splitlines()
    assert lines[0].startswith("quantity")
    assert len(lines) == 3
