import random
from importlib import resources

import pytest

from tiospec import constraints as cc
from tiospec.corpus import random_pair, random_tioa
from tiospec.operators import (
    BOT, TOP, OperatorError, check_deterministic, combine, compose, compose_conjunction,
    compose_parallel, compose_quotient, mirror, quotient_via_mirror,
)
from tiospec.textio import format_tioa, parse_spec
from tiospec.tioa import validate_tioa


def test_combine_tables():
    assert combine("par", "P", TOP) == TOP and combine("par", BOT, "P") == BOT
    assert combine("par", BOT, TOP) == TOP
    assert combine("and", BOT, "P") == "right" and combine("and", TOP, BOT) == TOP
    assert combine("or", TOP, "P") == "right" and combine("or", BOT, TOP) == BOT
    assert combine("quot", "P", TOP) == BOT and combine("quot", TOP, "P") == TOP
    assert combine("quot", "P", BOT) == TOP and combine("quot", "P", "P") == "pair"


def test_parallel_alphabets(model):
    p = compose_parallel(model("scheduler"), model("controller"))
    assert p.outputs == {"start", "print", "finish"} and p.inputs == {"printed"}


def test_golden_product_matches_shipped_file(model):
    p = compose_parallel(model("scheduler"), model("controller"))
    golden = model("scheduler_par_controller")
    assert format_tioa(p) == format_tioa(golden)


def test_golden_product_finish_edges(model):
    p = compose_parallel(model("scheduler"), model("controller"))
    finish = [e for e in p.edges if e.source == "B_L4" and e.action == "finish"]
    ok = [e for e in finish if e.target == "A_L1"]
    bad = [e for e in finish if e.target == BOT]
    assert len(ok) == 1 and cc.to_text(ok[0].guard) == "x>=5 && x<=8 && y<=5"
    assert len(bad) == 1 and "!(x>=5 && x<=8)" in cc.to_text(bad[0].guard)


def test_output_clash_rejected(model):
    with pytest.raises(OperatorError):
        compose_parallel(model("scheduler"), model("scheduler"))


def test_unknown_operator(model):
    with pytest.raises(OperatorError):
        compose("xor", model("scheduler"), model("scheduler"))


def test_quotient_needs_dominance(model):
    with pytest.raises(OperatorError):
        compose_quotient(model("printer"), model("scheduler"))


def test_quotient_needs_deterministic_divisor(model):
    p = model("strategies:P")
    with pytest.raises(OperatorError):
        compose_quotient(p, p)


def test_determinism_witness(model):
    ok, witness = check_deterministic(model("strategies:P"))
    assert not ok and witness["location"] == "s0" and witness["action"] == "a"
    assert check_deterministic(model("scheduler"))[0]


@pytest.mark.parametrize("seed", range(25))
def test_mirror_is_an_involution(seed):
    a = random_tioa(random.Random(seed), "R", ("a",), ("b",))
    m = mirror(a)
    assert m.inputs == a.outputs and m.outputs == a.inputs
    assert format_tioa(mirror(m)).replace(a.name, "N") == format_tioa(a).replace(a.name, "N")


@pytest.mark.parametrize("seed", range(25))
def test_products_are_valid(seed):
    rng = random.Random(seed)
    for kind, ops in (("same", ("and", "or")), ("par", ("par",)), ("quot", ("quot",))):
        p, q = random_pair(rng, kind)
        for op in ops:
            r = compose(op, p, q)
            assert validate_tioa(r) == []
            assert parse_spec(format_tioa(r)).automata[r.name].edges == r.edges
    p, q = random_pair(rng, "quot")
    assert quotient_via_mirror(p, q).outputs == compose_quotient(p, q).outputs


def test_conjunction_needs_same_alphabet(model):
    with pytest.raises(OperatorError):
        compose_conjunction(model("scheduler"), model("controller"))
