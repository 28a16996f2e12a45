import random

import pytest
from hypothesis import given, settings, strategies as st

from tiospec import textio
from tiospec.corpus import random_tioa
from tiospec.textio import SpecSyntaxError, format_tioa, parse_spec

SAMPLE = """
spec demo "two locations";
automaton A {
  clocks x;
  inputs go;
  outputs done;
  location L0 init inv: x<=3 {
    on go reset {x} goto L1;
  }
  location L1 coinv: x<=2 {
    on done guard: x>=1 && x<=2 goto L0;
  }
}
"""


def test_parse_sample():
    spec = parse_spec(SAMPLE)
    a = spec.automata["A"]
    assert spec.name == "demo" and spec.description == "two locations"
    assert a.initial == "L0" and a.clocks == ("x",)
    assert a.inputs == {"go"} and a.outputs == {"done"}
    assert [e.target for e in a.edges] == ["L1", "L0"]


def test_empty_file():
    assert parse_spec("").automata == {}


def test_syntax_error_has_position():
    with pytest.raises(SpecSyntaxError) as err:
        parse_spec("automaton A {\n  clocks x;\n  location L0 init { on go goto }\n}")
    assert err.value.line == 3


def test_validation_error_is_reported():
    with pytest.raises(ValueError):
        parse_spec("automaton A { clocks x; inputs a; outputs b; location L init { on c goto L; } }")


def test_duplicate_automaton_rejected():
    block = "automaton A { clocks x; inputs a; outputs b; location L init { } }\n"
    with pytest.raises(ValueError):
        parse_spec(block + block)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_random_automata_round_trip(seed):
    rng = random.Random(seed)
    a = random_tioa(rng, "R", ("a", "e"), ("b",), deterministic=rng.random() < 0.5)
    text = format_tioa(a)
    b = parse_spec(text).automata["R"]
    assert format_tioa(b) == text
    assert (b.inputs, b.outputs, b.initial, b.clocks) == (a.inputs, a.outputs, a.initial, a.clocks)


def test_shipped_models_round_trip():
    from importlib import resources

    for res in (resources.files("tiospec") / "models").iterdir():
        if res.name.endswith(".tioa"):
            spec = parse_spec(res.read_text(encoding="utf-8"))
            assert parse_spec(textio.format_spec(spec)) == spec
