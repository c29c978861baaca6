import json
import math
import re

import numpy as np
import pytest
from numpy.testing import assert_allclose

from tractrix import circle_family as cf
from tractrix.output import (CSV_COLUMNS, Layer, csv_text, format_float, read_csv, svg_document,
                             to_jsonable, trace_json, trace_layers, write_csv)


@pytest.fixture(scope="module")
def trace():
    return cf.trace_cartesian(cf.LeashParams.from_w(2.0, 1.0), np.linspace(0.0, 1.0986122886681098, 50))


def test_format_float_round_trips():
    for v in (0.1, 1 / 3, -2.5e-300, 1e22, math.pi):
        assert float(format_float(v)) == v
    assert format_float(math.inf) == "inf"
    assert format_float(-math.inf) == "-inf"


def test_csv_round_trip_is_byte_identical(trace, tmp_path):
    p = tmp_path / "t.csv"
    write_csv(p, trace)
    meta, rows = read_csv(p)
    assert rows.shape == (len(trace), len(CSV_COLUMNS))
    q = tmp_path / "u.csv"
    write_csv(q, meta, rows)
    assert p.read_bytes() == q.read_bytes()


def test_csv_header_and_infinite_curvature(trace):
    text = csv_text(trace)
    lines = text.splitlines()
    assert "l,s,x,y,tau,nu,k" in lines
    assert any(l.startswith("# class=T1") for l in lines)
    # start and end are cusps of the finite-length type
    first = lines[lines.index("l,s,x,y,tau,nu,k") + 1]
    assert first.split(",")[-1] in ("inf", "-inf")


def test_read_csv_rejects_other_header(tmp_path):
    p = tmp_path / "bad.csv"
    p.write_text("a,b\n1,2\n")
    with pytest.raises(ValueError):
        read_csv(p)


def test_json_infinities_are_strings(trace):
    doc = json.loads(trace_json(trace))
    assert doc["meta"]["class"] == "T1"
    k = doc["columns"]["k"]
    assert isinstance(k[0], str) and k[0].endswith("inf")
    assert_allclose(doc["columns"]["x"], trace.x)
    assert to_jsonable({"a": np.float64(math.inf), "b": np.arange(2)}) == {"a": "inf", "b": [0, 1]}


def test_svg_conventions(trace):
    lead = np.column_stack([trace.meta["leading_x"], trace.meta["leading_y"]])
    svg = svg_document(trace_layers(trace, lead))
    assert 'transform="scale(1,-1)"' in svg
    assert svg.count("scale(1,-1)") == 1
    body = svg[svg.index("<svg"):]
    nums = re.findall(r"-?\d+\.\d+", body)
    assert nums and all(len(t.split(".")[1]) == 6 for t in nums)
    assert 'class="start"' in svg


def test_svg_skips_nonfinite_points():
    svg = svg_document([Layer(np.array([[0.0, 0.0], [np.inf, 1.0], [1.0, 1.0]]))])
    assert "inf" not in svg
