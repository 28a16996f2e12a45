"""Exit criteria.  Each test reports one ``criterion N: PASS|FAIL`` line.

Run directly (``python3 tests/test_acceptance.py``) or through pytest, where
the lines appear in the terminal summary.
"""
import random
import time

import pytest

from tiospec import analysis as A
from tiospec import constraints as cc
from tiospec import game as G
from tiospec import operators as OP
from tiospec.corpus import random_pair, random_tioa
from tiospec.oracle import determinize_explicit, digitize, reach_bot_digitized
from tiospec.traces import (
    extract_triple_traces, structural_report, tt_conjunction, tt_disjunction, tt_parallel,
    tt_quotient, tt_refines,
)

from conftest import shipped

pytestmark = pytest.mark.acceptance

DEPTH = 4
# trace-set criteria run at a short horizon; the trace universe grows
# exponentially in it and the random corpus uses constants up to 3
H_TRACES = 3


def tts(a, depth=DEPTH, horizon=H_TRACES):
    return extract_triple_traces(digitize(a, 1, horizon), depth, horizon)


def test_criterion_1_golden_product():
    t0 = time.perf_counter()
    sched, ctrl = shipped("scheduler"), shipped("controller")
    product = OP.compose_parallel(sched, ctrl)
    assert product == shipped("scheduler_par_controller")
    finish = [e for e in product.edges if e.source == "B_L4" and e.action == "finish"]
    good = [e for e in finish if e.target == "A_L1"]
    bad = [e for e in finish if e.target == "BOT"]
    assert [cc.to_text(e.guard) for e in good] == ["x>=5 && x<=8 && y<=5"]
    assert [cc.to_text(e.guard) for e in bad] == ["!(x>=5 && x<=8) && y<=5"]
    v = A.reach_bot(product)
    assert v.exit_code() == 1 and A.replays_to_bot(product, v.witness)
    assert time.perf_counter() - t0 < 1.0


def test_criterion_2_reachability_agrees_with_digitization():
    t0 = time.perf_counter()
    rng = random.Random(1)
    disagreements = failing = 0
    n = 240
    for i in range(n):
        if i % 2:
            a = random_tioa(rng, inputs=(), outputs=("b", "c"), p_coinv=0.5)
        else:
            a = random_tioa(rng, inputs=("a",), outputs=("b",), p_edge=0.9, p_guard=0.3)
        sym = A.reach_bot(a, depth=6, horizon=12)
        dig, _ = reach_bot_digitized(digitize(a, 1, 12), 6, 12)
        failing += sym.fails
        disagreements += sym.fails != dig
    assert disagreements == 0
    assert 0 < failing < n
    assert time.perf_counter() - t0 < 60.0


def test_criterion_3_symbolic_refinement_matches_trace_containment():
    rng = random.Random(2)
    disagreements = holds = 0
    for i in range(120):
        p, q = random_pair(rng, "same", p_edge=0.85, locations=2)
        if i % 3 == 0:
            q = p
        v = A.refines(p, q, depth=DEPTH, horizon=H_TRACES + 1)
        assert v.stats.get("engine") != "oracle"
        ok, _ = tt_refines(tts(p, horizon=H_TRACES + 1), tts(q, horizon=H_TRACES + 1))
        holds += v.holds
        disagreements += v.holds != ok
    assert disagreements == 0 and 0 < holds < 120


@pytest.mark.parametrize("op,kind,formula", [
    ("par", "par", tt_parallel),
    ("and", "same", tt_conjunction),
    ("or", "same", tt_disjunction),
    ("quot", "quot", tt_quotient),
])
def test_criterion_4_operator_formulas(op, kind, formula):
    rng = random.Random(3)
    mismatches = 0
    for _ in range(50):
        p, q = random_pair(rng, kind, locations=2, p_edge=0.8)
        mismatches += formula(tts(p), tts(q)) != tts(OP.compose(op, p, q))
    assert mismatches == 0


def _dominated_pairs(n=50, seed=5):
    rng = random.Random(seed)
    return [random_pair(rng, "quot", locations=2, p_edge=0.8) for _ in range(n)]


def test_criterion_5_quotient_through_mirror():
    bad = sum(not A.equivalent(OP.compose_quotient(p, q), OP.quotient_via_mirror(p, q)).holds
              for p, q in _dominated_pairs())
    assert bad == 0


def test_criterion_6_quotient_is_adjoint():
    bad = sum(not A.refines(p, OP.compose_parallel(OP.compose_quotient(p, q), q)).holds
              for p, q in _dominated_pairs())
    assert bad == 0


def test_criterion_7_lattice_and_congruence():
    rng = random.Random(7)
    failed = []

    def check(name, v):
        if not v.holds:
            failed.append(name)

    for _ in range(40):
        p, q = random_pair(rng, "same", locations=2, p_edge=0.8)
        pq, qp = OP.compose_conjunction(p, q), OP.compose_conjunction(q, p)
        o, o2 = OP.compose_disjunction(p, q), OP.compose_disjunction(q, p)
        check("P <= P and Q", A.refines(p, pq))
        check("Q <= P and Q", A.refines(q, pq))
        check("P or Q <= P", A.refines(o, p))
        check("P or Q <= Q", A.refines(o, q))
        check("and commutes", A.equivalent(pq, qp))
        check("or commutes", A.equivalent(o, o2))
        check("and idempotent", A.equivalent(p, OP.compose_conjunction(p, p)))
        check("or idempotent", A.equivalent(p, OP.compose_disjunction(p, p)))
        # congruence: P' = P and P is equivalent to P but syntactically different
        p2 = OP.compose_conjunction(p, p)
        check("congruence and", A.equivalent(OP.compose_conjunction(p, q), OP.compose_conjunction(p2, q)))
        check("congruence or", A.equivalent(OP.compose_disjunction(p, q), OP.compose_disjunction(p2, q)))
        a, b = random_pair(rng, "par", locations=2, p_edge=0.8)
        check("par commutes", A.equivalent(OP.compose_parallel(a, b), OP.compose_parallel(b, a)))
        a2 = OP.compose_disjunction(a, a)
        check("congruence par", A.equivalent(OP.compose_parallel(a, b), OP.compose_parallel(a2, b)))
        d, e = random_pair(rng, "quot", locations=2, p_edge=0.8)
        d2 = OP.compose_conjunction(d, d)
        check("congruence quot", A.equivalent(OP.compose_quotient(d, e), OP.compose_quotient(d2, e)))
    assert failed == []


def test_criterion_8_strategy_reproduction():
    p, q = shipped("strategies:P"), shipped("strategies:Q")
    dp, dq = digitize(p, 1, 0), digitize(q, 1, 0)

    def pol(d, moves, choices=None):
        return G.strategy_from_policy(d, 3, G.location_policy(d, moves, choices, default="a"))

    s1 = pol(dp, {"s0": "a", "s1": "b"}, {("s0", "a"): "s1"})
    s2 = pol(dp, {"s0": "a", "s1": "c"}, {("s0", "a"): "s1"})
    s3 = pol(dp, {"s0": "a", "s2": "b"}, {("s0", "a"): "s2"})
    s4 = pol(dp, {"s0": "a", "s2": "c"}, {("s0", "a"): "s2"})
    sa = pol(dq, {"q0": "a", "q1": "b"})
    sb = pol(dq, {"q0": "a", "q1": "c"})
    stg_p = G.enumerate_strategies(dp, 3)
    assert {s1, s2, s3, s4} <= stg_p
    assert G.strategy_disjunction(s1, s3) == sa
    assert G.strategy_disjunction(s2, s4) == sb
    assert G.more_aggressive(sa, s1) and G.more_aggressive(sa, s3)
    bounds = G.Bounds(depth=3, horizon=0)
    assert G.check_refinement(p, q, bounds).holds and G.check_refinement(q, p, bounds).holds
    assert G.semantics(p, bounds) == G.semantics(q, bounds)


def test_criterion_9_structural_predicates():
    systems = [shipped(n) for n in ("scheduler", "controller", "printer", "strategies:P", "strategies:Q")]
    rng = random.Random(9)
    systems += [random_tioa(rng, "R", ("a",), ("b",), locations=2, deterministic=i % 2 == 0) for i in range(60)]
    broken = []
    for a in systems:
        for name, (ok, cex) in structural_report(tts(a)).items():
            if not ok:
                broken.append((a.name, name, cex))
    assert broken == []


def test_criterion_10_determinization_preserves_traces():
    rng = random.Random(10)
    checked = mismatches = 0
    while checked < 100:
        a = random_tioa(rng, "N", ("a",), ("b",), locations=3, clocks=1, deterministic=False, p_edge=0.9)
        d = digitize(a, 1, H_TRACES)
        if d.is_deterministic():
            continue
        checked += 1
        det = determinize_explicit(d)
        assert det.is_deterministic()
        mismatches += extract_triple_traces(d, DEPTH, H_TRACES) != extract_triple_traces(det, DEPTH, H_TRACES)
    assert mismatches == 0


if __name__ == "__main__":
    import sys
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
