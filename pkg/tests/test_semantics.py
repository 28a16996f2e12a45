import random
from fractions import Fraction

import pytest

from tiospec import concrete, constraints as cc, semantics as S
from tiospec.corpus import random_tioa
from tiospec.textio import load
from tiospec.tioa import BOT, TOP
from importlib import resources


def model(name):
    path = resources.files("tiospec") / "models" / f"{name}.tioa"
    return next(iter(load(path).automata.values()))


def kind(state):
    if state in (BOT, TOP):
        return state
    return state[0] if isinstance(state, tuple) else state.location


def test_initial_state_is_zero():
    a = model("scheduler")
    s = S.init_state(a)
    assert s.location == "A" and s.zone.contains({"x": Fraction(0)})
    assert not s.zone.contains({"x": Fraction(1)})


def test_scheduler_invariant_violation_is_magic():
    a = model("scheduler")
    regions = S.succ_delay(a, S.init_state(a))
    tops = [r for s, r in regions if s == TOP]
    assert tops and all(z.contains({"x": Fraction(101)}) for z in tops[0:1])


def test_early_or_late_finish_is_error():
    a = model("scheduler")
    (b_state, _), = [(s, g) for s, g in S.succ_action(a, S.init_state(a), "start") if s not in (BOT, TOP)]
    later = [s for s, _ in S.succ_delay(a, b_state) if s not in (BOT, TOP)][0]
    outcomes = S.succ_action(a, later, "finish")
    bad = [g for s, g in outcomes if s == BOT]
    assert any(g.contains({"x": Fraction(4)}) for g in bad)
    assert any(g.contains({"x": Fraction(9)}) for g in bad)
    assert not any(g.contains({"x": Fraction(6)}) for g in bad)


def _agree_on_actions(a, state, rng):
    point = state.zone.sample()
    vals = tuple(point[c] for c in a.clocks)
    for act in sorted(a.alphabet):
        sym = [(s, g) for s, g in S.succ_action(a, state, act) if g.contains(point)]
        conc = concrete.step_action(a, (state.location, vals), act)
        assert sorted(map(kind, conc)) == sorted({kind(s) for s, _ in sym}) or (
            not conc and not sym
        ), (a, state, act)


@pytest.mark.parametrize("seed", range(40))
def test_symbolic_actions_match_concrete(seed):
    rng = random.Random(seed)
    a = random_tioa(rng, "R", ("a",), ("b",), deterministic=seed % 2 == 0)
    frontier = [S.init_state(a)]
    for _ in range(3):
        nxt = []
        for st in frontier:
            if st in (BOT, TOP):
                continue
            _agree_on_actions(a, st, rng)
            nxt.extend(s for s, _ in S.succ_delay(a, st))
        frontier = nxt[:6]


@pytest.mark.parametrize("seed", range(40))
def test_symbolic_delays_match_concrete(seed):
    rng = random.Random(seed)
    a = random_tioa(rng, "R", ("a",), ("b",))
    st = S.init_state(a)
    if st in (BOT, TOP):
        return
    start = tuple(Fraction(0) for _ in a.clocks)
    for d in (Fraction(1, 2), Fraction(1), Fraction(5, 2), Fraction(4)):
        conc = concrete.step_delay(a, (st.location, start), d)
        after = {c: d for c in a.clocks}
        hits = {kind(s) for s, r in S.succ_delay(a, st) if r is not None and r.contains(after)}
        assert kind(conc) in hits, (seed, d, conc, hits)
