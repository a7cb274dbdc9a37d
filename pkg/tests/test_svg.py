"""SVG emitter tests."""

import xml.etree.ElementTree as ET

import numpy as np
import pytest

from qht.svg import line_chart


def sample_series():
    xs = np.linspace(0.0, 10.0, 25)
    return [
        ("dTp", "red", xs, np.sin(xs)),
        ("dTs", "black", xs, np.cos(xs)),
    ]


def test_chart_is_wellformed_xml_with_expected_elements():
    doc = line_chart(sample_series(), title="demo", y_label="gap")
    root = ET.fromstring(doc)
    assert root.tag.endswith("svg")
    ns = "{http://www.w3.org/2000/svg}"
    polylines = root.findall(f"{ns}polyline")
    assert [p.get("stroke") for p in polylines] == ["red", "black"]
    texts = [t.text for t in root.iter(f"{ns}text")]
    assert "demo" in texts and "dTp" in texts and "dTs" in texts and "gap" in texts


def test_chart_output_is_deterministic():
    a = line_chart(sample_series(), title="x")
    b = line_chart(sample_series(), title="x")
    assert a == b


def test_chart_escapes_markup_in_labels():
    xs = [0.0, 1.0]
    doc = line_chart([("a<b&c", "red", xs, xs)], title="t<1>")
    assert "a&lt;b&amp;c" in doc
    assert "t&lt;1&gt;" in doc
    ET.fromstring(doc)  # still parses


def test_chart_handles_constant_series():
    xs = [0.0, 1.0, 2.0]
    doc = line_chart([("flat", "blue", xs, [2.0, 2.0, 2.0])])
    ET.fromstring(doc)
    assert "NaN" not in doc and "inf" not in doc


def test_chart_rejects_empty_input():
    with pytest.raises(ValueError):
        line_chart([])
