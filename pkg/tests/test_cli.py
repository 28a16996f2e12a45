import io
import json
import sys

import jsonschema
import pytest

from tiospec import cli
from tiospec.analysis import replays_to_bot
from tiospec.oracle import digitize
from tiospec.textio import parse_spec
from tiospec.traces import JSON_SCHEMA, extract_triple_traces
from tiospec import words as W

from conftest import shipped


def run(capsys, monkeypatch, *argv, stdin=None):
    if stdin is not None:
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_pipe_compose_into_reach_bot(capsys, monkeypatch):
    code, product, _ = run(capsys, monkeypatch, "compose", "--op", "par", "scheduler", "controller")
    assert code == 0 and "automaton" in product
    code, out, _ = run(capsys, monkeypatch, "reach-bot", "--json", stdin=product)
    assert code == 1
    verdict = json.loads(out)
    assert verdict["outcome"] == "fails"
    a = next(iter(parse_spec(product).automata.values()))
    assert replays_to_bot(a, W.from_json(verdict["witness"]))


def test_refine_self_holds(capsys, monkeypatch):
    code, out, _ = run(capsys, monkeypatch, "refine", "scheduler", "scheduler")
    assert code == 0 and out.startswith("holds")


def test_equiv_json(capsys, monkeypatch):
    code, out, _ = run(capsys, monkeypatch, "equiv", "--json", "controller", "controller")
    assert code == 0 and json.loads(out)["outcome"] == "holds"


def test_budget_exceeded_exits_2(capsys, monkeypatch):
    code, product, _ = run(capsys, monkeypatch, "compose", "--op", "par", "scheduler", "controller")
    code, out, _ = run(capsys, monkeypatch, "reach-bot", "--budget", "1", "--json", stdin=product)
    assert code in (1, 2)


def test_traces_json_matches_schema_and_oracle(capsys, monkeypatch, tmp_path, model):
    target = tmp_path / "t.json"
    code, out, _ = run(capsys, monkeypatch, "traces", "scheduler", "--depth", "3", "--horizon", "6",
                       "--json-out", str(target))
    assert code == 0 and "TT:" in out
    data = json.loads(target.read_text())
    jsonschema.validate(data, JSON_SCHEMA)
    expected = extract_triple_traces(digitize(model("scheduler"), 1, 6), 3, 6).to_json()
    assert data == expected


def test_validate_reports(capsys, monkeypatch, tmp_path):
    good = tmp_path / "g.tioa"
    good.write_text("automaton A { inputs a; location l init { on a goto l; } }")
    assert run(capsys, monkeypatch, "validate", str(good))[0] == 0
    bad = tmp_path / "b.tioa"
    bad.write_text("automaton A { inputs a; outputs a; location l init { } }")
    code, out, _ = run(capsys, monkeypatch, "validate", "--json", str(bad))
    assert code == 1 and json.loads(out)["valid"] is False


def test_errors_exit_2(capsys, monkeypatch, tmp_path):
    code, _, err = run(capsys, monkeypatch, "mirror", str(tmp_path / "missing.tioa"))
    assert code == 2 and "error" in err
    broken = tmp_path / "x.tioa"
    broken.write_text("automaton {")
    code, out, _ = run(capsys, monkeypatch, "mirror", "--json", str(broken))
    assert code == 2 and json.loads(out)["error"] == "SpecSyntaxError"
    code, _, err = run(capsys, monkeypatch, "mirror", "strategies")
    assert code == 2 and "strategies:NAME" in err


def test_mirror_twice_round_trips(capsys, monkeypatch, tmp_path):
    once = tmp_path / "m.tioa"
    assert run(capsys, monkeypatch, "mirror", "controller", "-o", str(once))[0] == 0
    code, twice, _ = run(capsys, monkeypatch, "mirror", str(once))
    back = next(iter(parse_spec(twice).automata.values()))
    orig = shipped("controller")
    assert (back.inputs, back.outputs) == (orig.inputs, orig.outputs)
    twice_file = tmp_path / "mm.tioa"
    twice_file.write_text(twice)
    assert run(capsys, monkeypatch, "equiv", "controller", str(twice_file))[0] == 0


def test_det_json(capsys, monkeypatch):
    code, out, _ = run(capsys, monkeypatch, "det", "--json", "--horizon", "4", "strategies:P")
    data = json.loads(out)
    assert code == 0 and data["was_deterministic"] is False and data["states_after"] >= 1


def test_dot_output(capsys, monkeypatch):
    code, out, _ = run(capsys, monkeypatch, "dot", "scheduler_par_controller")
    assert code == 0 and out.startswith("digraph")
    assert "⊥" in out and "Inv:" in out and "!finish" in out


def test_strategies_command(capsys, monkeypatch):
    code, out, _ = run(capsys, monkeypatch, "strategies", "strategies:P", "--depth", "3")
    assert code == 0 and out.startswith("32 strategies")
    code, out, _ = run(capsys, monkeypatch, "strategies", "--json", "strategies:Q", "--depth", "3")
    assert json.loads(out)["count"] == 9


def test_check_lemmas_command(capsys, monkeypatch):
    code, out, _ = run(capsys, monkeypatch, "check-lemmas", "--corpus", "2", "--seed", "5", "--json")
    report = json.loads(out)
    assert code == 0 and report["holds"] and report["seed"] == 5


def test_output_is_deterministic(capsys, monkeypatch):
    first = run(capsys, monkeypatch, "compose", "--op", "quot", "scheduler", "scheduler")
    second = run(capsys, monkeypatch, "compose", "--op", "quot", "scheduler", "scheduler")
    assert first == second
