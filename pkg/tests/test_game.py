import itertools
import json
import random
from fractions import Fraction

import pytest

from tiospec import game as G
from tiospec.corpus import random_tioa
from tiospec.operators import compose_conjunction, compose_parallel
from tiospec.oracle import DELAY, digitize
from tiospec.textio import parse_spec

FIG = dict(depth=3, horizon=0)


@pytest.fixture
def fig3(model):
    p, q = model("strategies:P"), model("strategies:Q")
    dp, dq = digitize(p, 1, 0), digitize(q, 1, 0)

    def pol(d, moves, choices=None):
        return G.strategy_from_policy(d, 3, G.location_policy(d, moves, choices, default="a"))

    s = {
        1: pol(dp, {"s0": "a", "s1": "b"}, {("s0", "a"): "s1"}),
        2: pol(dp, {"s0": "a", "s1": "c"}, {("s0", "a"): "s1"}),
        3: pol(dp, {"s0": "a", "s2": "b"}, {("s0", "a"): "s2"}),
        4: pol(dp, {"s0": "a", "s2": "c"}, {("s0", "a"): "s2"}),
        "A": pol(dq, {"q0": "a", "q1": "b"}),
        "B": pol(dq, {"q0": "a", "q1": "c"}),
    }
    return p, q, dp, dq, s


def test_fig3_strategies_are_enumerated(fig3):
    p, q, dp, dq, s = fig3
    stg_p = G.enumerate_strategies(dp, 3)
    stg_q = G.enumerate_strategies(dq, 3)
    assert len(stg_p) == 32 and len(stg_q) == 9
    assert all(s[k] in stg_p for k in (1, 2, 3, 4))
    assert s["A"] in stg_q and s["B"] in stg_q
    assert s["A"] not in stg_p and s["B"] not in stg_p


def test_fig3_strategies_3_and_4_reach_magic(fig3):
    *_, s = fig3
    assert s[3].top_words and s[4].top_words
    assert ("a", "b") in s[3].top_words


def test_fig3_affinity(fig3):
    *_, s = fig3
    for x, y in itertools.combinations((1, 3, "A"), 2):
        assert G.is_affine(s[x], s[y])
    for x, y in itertools.combinations((2, 4, "B"), 2):
        assert G.is_affine(s[x], s[y])
    assert not G.is_affine(s[1], s[2])


def test_fig3_disjunctions(fig3):
    *_, s = fig3
    assert G.strategy_disjunction(s[1], s[3]) == s["A"]
    assert G.strategy_disjunction(s[2], s[4]) == s["B"]
    with pytest.raises(G.GameError):
        G.strategy_disjunction(s[1], s[2])


def test_fig3_aggressiveness(fig3):
    *_, s = fig3
    assert G.more_aggressive(s["A"], s[1]) and G.more_aggressive(s["A"], s[3])
    assert not G.more_aggressive(s[1], s["A"])
    with pytest.raises(G.GameError):
        G.more_aggressive(s[1], s[2])


def test_fig3_not_strategy_equivalent_but_closures_agree(fig3):
    p, q, dp, dq, s = fig3
    stg_p, stg_q = G.enumerate_strategies(dp, 3), G.enumerate_strategies(dq, 3)
    # without disjunction closure A is not a strategy of P, yet 1 is one of Q
    assert not G.dominated(s["A"], stg_p)
    assert G.dominated(s[1], stg_q)
    closure = G.disjunction_closure(stg_p)
    assert s["A"] in closure and s["B"] in closure
    bounds = G.Bounds(**FIG)
    assert G.check_refinement(p, q, bounds).holds and G.check_refinement(q, p, bounds).holds


def test_single_tree_system_has_one_strategy():
    a = parse_spec("""automaton T { inputs e; outputs b;
        location l0 init { on e goto l1; on b goto l1; } location l1 { } }""").automata["T"]
    d = digitize(a, 1, 0)
    # at depth 1 only the root move can vary: b, or nothing past the bound
    assert len(G.enumerate_strategies(d, 0)) == 1


def _small(seed, det=True):
    rng = random.Random(seed)
    return random_tioa(rng, "R", ("a",), ("b",), locations=2, clocks=1, maxc=2, deterministic=det)


@pytest.mark.parametrize("seed", range(15))
def test_enumerated_strategies_are_well_formed(seed):
    for g in G.strategies_of(_small(seed, seed % 2 == 0), G.Bounds(2, 2)):
        assert G.check_strategy(g) == []


# an independent enumerator: every syntactic strategy tree, filtered by containment

def _trees(n, t, mode, depth, steps, ins, outs):
    out = [G.BOTNODE, G.TOPNODE]
    moves = []
    if mode in ("free", "act"):
        if n < depth and outs:
            moves += [(("out", b), c) for b in outs for c in _trees(n + 1, t, "free", depth, steps, ins, outs)]
        elif n >= depth or t >= steps:
            moves.append((G.CUT, None))
    ks = range(1, steps - t + 1) if mode == "free" else ([mode] if isinstance(mode, int) else [])
    for k in ks:
        if t + k > steps:
            continue
        if k == steps - t:
            moves += [(("delay", k), G.BOTNODE), (("delay", k), G.TOPNODE)]
        for c in _trees(n, t + 1, k - 1 if k > 1 else "act", depth, steps, ins, outs):
            if not G.is_sink(c):
                moves.append((("delay", k), c))
    if n < depth:
        kids = [_trees(n + 1, t, "free", depth, steps, ins, outs) for _ in ins]
        combos = [tuple(zip(ins, combo)) for combo in itertools.product(*kids)]
    else:
        combos = [None]
    out += [("P", mv, combo, c) for combo in combos for mv, c in moves]
    return out


def _contained(node, s, d):
    kind = d.kind(s)
    if G.is_sink(node):
        return kind == node[0]
    if kind != "plain":
        return False
    _, mv, ins, child = node
    for e, sub in ins or ():
        if not any(_contained(sub, s2, d) for s2 in d.succ[s][e]):
            return False
    if mv[0] == "out":
        return any(_contained(child, s2, d) for s2 in d.succ[s][mv[1]])
    if mv[0] == "delay":
        return _contained(child, d.succ[s][DELAY][0], d)
    return True


@pytest.mark.parametrize("seed", range(6))
def test_enumeration_matches_brute_force(seed):
    a = _small(seed, det=seed % 2 == 1)
    d = digitize(a, 1, 1)
    depth = 1
    universe = _trees(0, 0, "free", depth, 1, ["a"], ["b"])
    expected = {r for r in universe if not G.is_sink(r) and _contained(r, d.initial, d)}
    if d.kind(d.initial) != "plain":
        expected = {("BOT",) if d.kind(d.initial) == "BOT" else ("TOP",)}
    found = {g.root for g in G.enumerate_strategies(d, depth, 1)}
    assert found == expected


@pytest.mark.parametrize("seed", range(8))
def test_order_properties(seed):
    stg = list(G.strategies_of(_small(seed, det=False), G.Bounds(2, 1)))[:40]
    for g in stg:
        assert G.is_affine(g, g) and G.more_aggressive(g, g)
        assert G.strategy_disjunction(g, g) == g
    for g, h in itertools.combinations(stg, 2):
        assert G.is_affine(g, h) == G.is_affine(h, g)
        if G.is_affine(g, h) and G.more_aggressive(g, h) and G.more_aggressive(h, g):
            assert g == h
        if G.is_affine(g, h):
            assert G.check_strategy(G.strategy_disjunction(g, h)) == []


def test_closure_properties(fig3):
    *_, dp, _, s = fig3
    assert G.disjunction_closure({s[1]}) == {s[1]}
    c = G.disjunction_closure(G.enumerate_strategies(dp, 3))
    assert G.disjunction_closure(c) == c


# plays

PAIR = """
automaton C { inputs a; outputs b; location c0 init { on a goto c0; on b goto c0; } }
automaton E { inputs b; outputs a; location e0 init { on a goto e0; on b goto e0; } }
"""


@pytest.fixture
def players():
    spec = parse_spec(PAIR).automata
    dc, de = digitize(spec["C"], 1, 2), digitize(spec["E"], 1, 2)

    def strat(d, move, after=None):
        def policy(w, s, succ):
            if w and not isinstance(w[-1], str) and isinstance(move, tuple):
                return after or sorted(d.outputs)[0], {}
            return move, {}
        return G.strategy_from_policy(d, 2, policy, horizon=2)

    return dc, de, strat


def test_action_beats_delay(players):
    dc, de, strat = players
    p = G.play(strat(dc, "b"), strat(de, ("delay", 2)))
    assert p.word[0] == "b"


def test_smaller_delay_prevails_then_actions(players):
    dc, de, strat = players
    gc = G.strategy_from_policy(dc, 2, lambda w, s, succ: (("delay", 1) if not w else "b", {}), horizon=2)
    ge = strat(de, ("delay", 2))
    p = G.play(gc, ge)
    assert p.word[:2] == (1, "b")
    assert not any(not isinstance(x, str) and not isinstance(y, str) for x, y in zip(p.word, p.word[1:]))


def test_coin_breaks_ties(players):
    dc, de, strat = players
    gc, ge = strat(dc, "b"), strat(de, "a")
    assert G.play(gc, ge, G.CoinStrategy.of({(): 0})).word[0] == "b"
    assert G.play(gc, ge, G.CoinStrategy.of({(): 1})).word[0] == "a"
    assert () in G.tie_points(gc, ge)


def test_play_needs_complementary_alphabets(players):
    dc, _, strat = players
    with pytest.raises(G.GameError):
        G.play(strat(dc, "b"), strat(dc, "b"))


@pytest.mark.parametrize("seed", range(20))
def test_compositions_are_the_strategies_of_the_product(seed):
    rng = random.Random(seed)
    kw = dict(locations=2, clocks=1, maxc=2)
    p = random_tioa(rng, "P", ("a",), ("b",), **kw)
    q = random_tioa(rng, "Q", ("b",), ("a",), **kw)
    b = G.Bounds(2, 1)
    sp, sq = G.strategies_of(p, b), G.strategies_of(q, b)
    composed = frozenset().union(*(G.all_compositions(x, y) for x in sp for y in sq))
    assert composed == G.strategies_of(compose_parallel(p, q), b)


def test_strategy_json_round_trip(fig3):
    *_, s = fig3
    data = json.loads(json.dumps(s["A"].to_json()))
    assert G.strategy_from_json(data) == s["A"]
    blob = G.strategy_set_json({s[1], s[2]}, automaton="P")
    assert blob["count"] == 2


def test_conjunction_on_self_conjunction():
    p = _small(3)
    b = G.Bounds(2, 1)
    assert G.check_conjunction(p, p, b).holds
    gens = G.semantics(p, b)
    both = G.semantics(compose_conjunction(p, p), b)
    assert all(G.dominated(g, gens) for g in both) and all(G.dominated(g, both) for g in gens)


def test_check_lemmas_small_corpus():
    report = G.check_lemmas(corpus=4, seed=11)
    assert report["holds"], json.dumps(report["lemmas"], default=str)[:2000]
    assert report["bounded_universe"] and report["bounds"]["depth"] == 2


def test_budget_is_enforced():
    a = _small(1)
    with pytest.raises(G.StrategyBudgetExceeded):
        G.strategies_of(a, G.Bounds(3, 3, budget=10))
