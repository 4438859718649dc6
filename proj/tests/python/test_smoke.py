import os
import sys

import pytest

sys.path.insert(0, os.environ["SEAMLAB_MODULE_DIR"])

import _core  # noqa: E402

CORPUS = os.environ["SEAMLAB_CORPUS_DIR"]


def corpus(name):
    return os.path.join(CORPUS, name)


def test_call_returns_outputs():
    m = _core.Machine()
    m.load_source("function y = dbl(x)\ny = x * 2\nend\n", "dbl.ms")
    assert m.call("dbl", 21) == [42.0]


def test_intercepted_foo_flow():
    m = _core.Machine()
    m.load(corpus("foo.ms"))
    _core.gotoat(m, "foo", "<FOO:1>")
    _core.assignat(m, "foo", "<FOO:1>", {"a1": 15})
    _core.captureat(m, "foo", "<FOO:2>", "sum")
    _core.returnat(m, "foo", "<FOO:2>")
    m.call("foo", None, None)
    captured = _core.captureat(m)
    assert captured == {"FOO2": 120.0}
    _core.clearat(m)


def test_run_suite_reports_sections(tmp_path):
    m = _core.Machine(cache_dir=str(tmp_path / "cache"))
    m.load(corpus("foo.ms"))
    result = _core.run_suite(m, corpus("foo_suite.ms"))
    assert result["verdict"] == "pass"
    assert result["assertions"] == 2
    assert result["failures"] == 0
    names = [s["name"] for s in result["sections"]]
    assert names == ["setup", "test 1", "assert", "test 2", "assert", "tear down"]


def test_evalat_breakpoint_raises():
    m = _core.Machine()
    m.load(corpus("foo.ms"))
    _core.evalat(m, "foo", "<FOO:2>", "sum > 100")
    with pytest.raises(_core.SeamlabError):
        m.call("foo", 15, 1)


def test_serialize_round_trip():
    value = {"a": 1.0, "b": [1.0, 2.0, 3.0], "c": "it's", "d": True}
    text = _core.serialize(value)
    assert _core.serialize(_core.deserialize(text)) == text
    assert _core.deserialize(text) == value


def test_output_capture():
    m = _core.Machine()
    m.load(corpus("bar.ms"))
    m.call("bar", 10)
    assert m.output == ["sum scaled"]
    m.clear_output()
    assert m.output == []
