"""Strategy semantics over digitized systems.

A strategy is a finite tree.  Nodes are nested tuples so that isomorphic
strategies compare and hash equal:

* ``("BOT",)`` and ``("TOP",)`` are sink leaves;
* ``("P", move, inputs, child)`` is a plain node.  ``inputs`` is a sorted
  tuple of ``(input, subtree)`` pairs, or ``None`` once the action bound is
  reached.  ``move`` is ``("out", b)``, ``("delay", k)`` or ``("cut",)``.

A delay move of ``k`` grid steps is stored as one step to a child whose own
move is a delay of ``k - 1``; the last node of the chain proposes an action.
When the chain runs into a sink the move is widened to the remaining horizon,
since a sink admits every further delay.  ``("cut",)`` marks a move that lies
outside the bounded universe (an action past the depth bound, or no move at
all when time is exhausted and there are no outputs).

All set operations below are bounded: strategies are enumerated up to a fixed
number of actions and a fixed horizon.  An upward-closed set is represented
by generators; membership means being dominated (``≼``) by some generator.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

from . import words as W
from .oracle import DELAY, DigitizedTIOTS
from .tioa import BOT, TOP, ModelError

BOTNODE = ("BOT",)
TOPNODE = ("TOP",)
CUT = ("cut",)
FREE = "free"
ACT = "act"
DEFAULT_BUDGET = 200_000


class GameError(ModelError):
    pass


class StrategyBudgetExceeded(GameError):
    pass


def is_sink(node) -> bool:
    return node[0] != "P"


@dataclass(frozen=True)
class Strategy:
    inputs: frozenset
    outputs: frozenset
    root: tuple
    depth: int
    horizon: int
    delta: Fraction = Fraction(1)

    @property
    def alphabet(self) -> frozenset:
        return self.inputs | self.outputs

    def _walk(self):
        stack = [((), self.root)]
        while stack:
            w, node = stack.pop()
            yield w, node
            if is_sink(node):
                continue
            _, mv, ins, child = node
            for e, sub in ins or ():
                stack.append((W.concat(w, (e,)), sub))
            if mv[0] == "out":
                stack.append((W.concat(w, (mv[1],)), child))
            elif mv[0] == "delay":
                stack.append((W.concat(w, (self.delta,)), child))

    @cached_property
    def moves(self) -> dict:
        """Trace -> proposed move, for every plain node."""
        return {w: n[1] for w, n in self._walk() if not is_sink(n)}

    @cached_property
    def bot_words(self) -> frozenset:
        return frozenset(w for w, n in self._walk() if n == BOTNODE)

    @cached_property
    def top_words(self) -> frozenset:
        return frozenset(w for w, n in self._walk() if n == TOPNODE)

    def size(self) -> int:
        return sum(1 for _ in self._walk())

    def reaches_bot(self) -> bool:
        return bool(self.bot_words)

    def to_json(self) -> dict:
        return {
            "inputs": sorted(self.inputs),
            "outputs": sorted(self.outputs),
            "depth": self.depth,
            "horizon": self.horizon,
            "delta": str(self.delta),
            "tree": node_to_json(self.root),
        }

    def __str__(self) -> str:
        return render(self.root)


def node_to_json(node):
    if node == BOTNODE:
        return {"kind": "bot"}
    if node == TOPNODE:
        return {"kind": "top"}
    _, mv, ins, child = node
    out: dict = {"kind": "plain"}
    if mv[0] == "out":
        out["move"] = {"output": mv[1]}
    elif mv[0] == "delay":
        out["move"] = {"delay": mv[1]}
    else:
        out["move"] = "cut"
    if ins is not None:
        out["inputs"] = {e: node_to_json(sub) for e, sub in ins}
    if child is not None:
        out["next"] = node_to_json(child)
    return out


def node_from_json(data) -> tuple:
    kind = data["kind"]
    if kind == "bot":
        return BOTNODE
    if kind == "top":
        return TOPNODE
    mv = data["move"]
    if mv == "cut":
        move = CUT
    elif "output" in mv:
        move = ("out", mv["output"])
    else:
        move = ("delay", int(mv["delay"]))
    ins = data.get("inputs")
    ins = None if ins is None else tuple(sorted((e, node_from_json(s)) for e, s in ins.items()))
    child = data.get("next")
    return ("P", move, ins, None if child is None else node_from_json(child))


def strategy_from_json(data) -> Strategy:
    return Strategy(
        frozenset(data["inputs"]), frozenset(data["outputs"]), node_from_json(data["tree"]),
        int(data["depth"]), int(data["horizon"]), Fraction(data.get("delta", "1")),
    )


def render(node) -> str:
    """Compact one-line rendering, handy in reports."""
    if is_sink(node):
        return "⊥" if node == BOTNODE else "⊤"
    _, mv, ins, child = node
    head = {"out": lambda: f"!{mv[1]}", "delay": lambda: f"~{mv[1]}", "cut": lambda: "…"}[mv[0]]()
    parts = [f"?{e}:{render(s)}" for e, s in ins or ()]
    if child is not None:
        parts.append(f"{head}:{render(child)}")
    else:
        parts.append(head)
    return "{" + " ".join(parts) + "}"


# -- invariants -------------------------------------------------------------

def check_strategy(g: Strategy) -> list[str]:
    """Violations of the strategy invariants (empty when ``g`` is well formed)."""
    problems = []
    steps = int(Fraction(g.horizon) / g.delta)

    def visit(node, n, t, w, forced):
        if is_sink(node):
            return
        _, mv, ins, child = node
        where = W.to_text(w)
        if n < g.depth:
            names = [e for e, _ in ins or ()]
            if ins is None or sorted(names) != sorted(g.inputs):
                problems.append(f"{where}: inputs {names} instead of {sorted(g.inputs)}")
        elif ins is not None:
            problems.append(f"{where}: inputs past the action bound")
        if forced is not None and mv != ("delay", forced) and not (forced == 0 and mv[0] != "delay"):
            problems.append(f"{where}: move {mv} breaks the delay chain")
        if mv[0] == "out":
            if mv[1] not in g.outputs or n >= g.depth:
                problems.append(f"{where}: bad output move {mv[1]}")
            visit(child, n + 1, t, W.concat(w, (mv[1],)), None)
        elif mv[0] == "delay":
            k = mv[1]
            if k < 1 or t + k > steps:
                problems.append(f"{where}: delay {k} outside the horizon")
            if is_sink(child):
                if k != steps - t:
                    problems.append(f"{where}: delay into a sink is not widened")
            else:
                visit(child, n, t + 1, W.concat(w, (g.delta,)), k - 1)
        elif child is not None:
            problems.append(f"{where}: cut node with a successor")
        for e, sub in ins or ():
            visit(sub, n + 1, t, W.concat(w, (e,)), None)

    visit(g.root, 0, 0, (), None)
    return problems


# -- enumeration ------------------------------------------------------------

def enumerate_strategies(
    d: DigitizedTIOTS, depth: int, horizon=None, budget: int = DEFAULT_BUDGET
) -> frozenset:
    """All strategies contained in ``d`` with at most ``depth`` actions.

    ``horizon`` defaults to the horizon ``d`` was built with.  Nondeterministic
    targets are resolved every possible way, one choice per tree edge.
    """
    horizon = d.horizon if horizon is None else horizon
    steps = int(Fraction(horizon) / d.delta)
    ins = sorted(d.inputs)
    outs = sorted(d.outputs)
    memo: dict = {}
    made = [0]

    def targets(s, lab):
        try:
            return d.succ[s][lab]
        except KeyError:
            raise GameError(f"state {d.states[s]!r} has no {lab!r} successor; system not completed") from None

    def gen(s, n, t, mode) -> frozenset:
        kind = d.kind(s)
        if kind == BOT:
            return frozenset([BOTNODE])
        if kind == TOP:
            return frozenset([TOPNODE])
        key = (s, n, t, mode)
        if key in memo:
            return memo[key]
        moves: list = []
        if mode in (FREE, ACT):
            if n < depth and outs:
                for b in outs:
                    kids = frozenset().union(*(gen(s2, n + 1, t, FREE) for s2 in targets(s, b)))
                    moves.extend((("out", b), c) for c in kids)
            elif n >= depth or t >= steps:
                moves.append((CUT, None))
        delays = range(1, steps - t + 1) if mode == FREE else ([mode] if isinstance(mode, int) else [])
        if delays and t < steps:
            (s1,) = targets(s, DELAY)
            if d.kind(s1) != "plain":
                if steps - t in delays:
                    sink = BOTNODE if d.kind(s1) == BOT else TOPNODE
                    moves.append((("delay", steps - t), sink))
            else:
                for k in delays:
                    if k > steps - t:
                        continue
                    for c in gen(s1, n, t + 1, k - 1 if k > 1 else ACT):
                        moves.append((("delay", k), c))
        if n < depth:
            choices = [
                [(e, c) for c in frozenset().union(*(gen(s2, n + 1, t, FREE) for s2 in targets(s, e)))]
                for e in ins
            ]
        else:
            choices = None
        width = len(moves)
        for ch in choices or ():
            width *= len(ch)
        made[0] += width
        if made[0] > budget:
            raise StrategyBudgetExceeded(f"more than {budget} strategy nodes; lower depth or horizon")
        if choices is None:
            out = frozenset(("P", mv, None, c) for mv, c in moves)
        else:
            out = frozenset(
                ("P", mv, combo, c) for combo in itertools.product(*choices) for mv, c in moves
            )
        memo[key] = out
        return out

    roots = gen(d.initial, 0, 0, FREE)
    return frozenset(Strategy(d.inputs, d.outputs, r, depth, horizon, d.delta) for r in roots)


def strategy_from_policy(d: DigitizedTIOTS, depth: int, policy, horizon=None) -> Strategy:
    """Unfold one strategy of ``d``.

    ``policy(word, state_index, targets_by_label)`` returns ``(move, choice)``
    where ``move`` is an output name, ``("delay", k)`` or ``None`` for a cut,
    and ``choice`` maps labels to the chosen target index (missing labels take
    the first target).  Delay chains are followed without consulting the
    policy until they end.
    """
    horizon = d.horizon if horizon is None else horizon
    steps = int(Fraction(horizon) / d.delta)

    def pick(choice, s, lab):
        opts = d.succ[s][lab]
        return choice.get(lab, opts[0]) if choice else opts[0]

    def build(s, n, t, w, forced):
        if d.kind(s) == BOT:
            return BOTNODE
        if d.kind(s) == TOP:
            return TOPNODE
        move, choice = policy(w, s, d.succ[s])
        if forced:
            move = ("delay", forced)
        elif forced == 0 and isinstance(move, tuple):
            raise GameError(f"policy delays again at the end of a delay at {W.to_text(w)}")
        ins = None
        if n < depth:
            ins = tuple(
                (e, build(pick(choice, s, e), n + 1, t, W.concat(w, (e,)), None)) for e in sorted(d.inputs)
            )
        if isinstance(move, str) and n < depth:
            return ("P", ("out", move), ins, build(pick(choice, s, move), n + 1, t, W.concat(w, (move,)), None))
        if isinstance(move, tuple) and move[0] == "delay" and t < steps:
            k = min(move[1], steps - t)
            (s1,) = d.succ[s][DELAY]
            if d.kind(s1) != "plain":
                return ("P", ("delay", steps - t), ins, BOTNODE if d.kind(s1) == BOT else TOPNODE)
            child = build(s1, n, t + 1, W.concat(w, (d.delta,)), k - 1)
            if is_sink(child):
                k = steps - t
            elif child[1][0] == "delay":
                k = child[1][1] + 1
            else:
                k = 1
            return ("P", ("delay", k), ins, child)
        return ("P", CUT, ins, None)

    return Strategy(d.inputs, d.outputs, build(d.initial, 0, 0, (), None), depth, horizon, d.delta)


def location_policy(d: DigitizedTIOTS, moves: dict, choices: dict | None = None, default=None):
    """Policy for ``strategy_from_policy`` keyed by location name.

    ``moves`` maps a location to an output or ``("delay", k)``; ``choices``
    maps ``(location, label)`` to the preferred target location.
    """
    choices = choices or {}

    def loc_of(i):
        st = d.states[i]
        return st[0] if isinstance(st, tuple) else st

    def policy(w, s, succ):
        loc = loc_of(s)
        picked = {}
        for lab, targets in succ.items():
            want = choices.get((loc, lab))
            hits = [i for i in targets if loc_of(i) == want]
            if hits:
                picked[lab] = hits[0]
        return moves.get(loc, default), picked

    return policy


# -- comparing strategies ---------------------------------------------------

def _same_alphabet(g1: Strategy, g2: Strategy):
    if (g1.inputs, g1.outputs) != (g2.inputs, g2.outputs):
        raise GameError("strategies have different alphabets")


def is_affine(g1: Strategy, g2: Strategy) -> bool:
    """Equal traces reaching plain nodes in both lead to equal moves."""
    _same_alphabet(g1, g2)
    r1, r2 = g1.root, g2.root
    if not is_sink(r1) and not is_sink(r2) and r1[1] != r2[1]:
        return False
    m1, m2 = g1.moves, g2.moves
    if len(m2) < len(m1):
        m1, m2 = m2, m1
    return all(m2.get(w, mv) == mv for w, mv in m1.items())


def _has_prefix_in(w, pool: frozenset, delta) -> bool:
    cur = w
    while cur is not None:
        if cur in pool:
            return True
        cur = _parent(cur, delta)
    return False


def _parent(w, delta):
    if not w:
        return None
    last = w[-1]
    if isinstance(last, str) or last <= delta:
        return w[:-1]
    return w[:-1] + (W.canon((last - delta,))[0],)


def more_aggressive(g1: Strategy, g2: Strategy, check: bool = True) -> bool:
    """``g1 ≼ g2``: ``g1`` reaches ⊥ no later and ⊤ no earlier than ``g2``."""
    if check and not is_affine(g1, g2):
        raise GameError("more_aggressive needs an affine pair")
    if not all(_has_prefix_in(w, g1.bot_words, g1.delta) for w in g2.bot_words):
        return False
    return all(_has_prefix_in(w, g2.top_words, g1.delta) for w in g1.top_words)


def dominated(g: Strategy, gens) -> bool:
    """``g`` lies in the upward closure of ``gens``."""
    return any(is_affine(h, g) and more_aggressive(h, g, check=False) for h in gens)


# -- disjunction ------------------------------------------------------------

def _join(a, b, op: str):
    if op == "or":
        if BOTNODE in (a, b):
            return BOTNODE
        if a == TOPNODE:
            return b
        if b == TOPNODE:
            return a
    else:
        if TOPNODE in (a, b):
            return TOPNODE
        if a == BOTNODE:
            return b
        if b == BOTNODE:
            return a
    _, mv, ins_a, ca = a
    _, mv_b, ins_b, cb = b
    if mv != mv_b:
        raise GameError(f"strategies propose different moves {mv} and {mv_b}")
    ins = None if ins_a is None else tuple((e, _join(x, y, op)) for (e, x), (_, y) in zip(ins_a, ins_b))
    child = None if ca is None else _join(ca, cb, op)
    return ("P", mv, ins, child)


def _fix_delays(node, steps: int, t: int = 0):
    """Re-derive delay lengths bottom-up (a join can shorten or widen chains)."""
    if is_sink(node):
        return node
    _, mv, ins, child = node
    ins = None if ins is None else tuple((e, _fix_delays(s, steps, t)) for e, s in ins)
    if mv[0] == "delay":
        child = _fix_delays(child, steps, t + 1)
        if is_sink(child):
            mv = ("delay", steps - t)
        elif child[1][0] == "delay":
            mv = ("delay", child[1][1] + 1)
        else:
            mv = ("delay", 1)
    elif child is not None:
        child = _fix_delays(child, steps, t)
    return ("P", mv, ins, child)


def _binary(g1: Strategy, g2: Strategy, op: str) -> Strategy:
    _same_alphabet(g1, g2)
    if not is_affine(g1, g2):
        raise GameError("strategy disjunction and conjunction need an affine pair")
    steps = int(Fraction(g1.horizon) / g1.delta)
    root = _fix_delays(_join(g1.root, g2.root, op), steps)
    return Strategy(g1.inputs, g1.outputs, root, g1.depth, g1.horizon, g1.delta)


def strategy_disjunction(g1: Strategy, g2: Strategy) -> Strategy:
    return _binary(g1, g2, "or")


def strategy_conjunction(g1: Strategy, g2: Strategy) -> Strategy:
    return _binary(g1, g2, "and")


def disjunction_closure(strategies, budget: int = 20_000) -> frozenset:
    """Least superset closed under disjunction of affine pairs."""
    done = set(strategies)
    frontier = list(done)
    while frontier:
        new = []
        pool = list(done)
        for g in frontier:
            for h in pool:
                if g == h or not is_affine(g, h):
                    continue
                j = strategy_disjunction(g, h)
                if j not in done:
                    done.add(j)
                    new.append(j)
                    if len(done) > budget:
                        raise StrategyBudgetExceeded(f"disjunction closure exceeds {budget} strategies")
        frontier = new
    return frozenset(done)


def upward_closure(gens, universe) -> frozenset:
    """Members of ``universe`` dominated by a generator."""
    gens = list(gens)
    return frozenset(g for g in universe if dominated(g, gens))


def minimal(strategies) -> frozenset:
    """Drop strategies dominated by a different one (same upward closure)."""
    pool = list(strategies)
    keep = []
    for g in pool:
        if not any(h != g and is_affine(h, g) and more_aggressive(h, g, check=False)
                   and not more_aggressive(g, h, check=False) for h in pool):
            keep.append(g)
    return frozenset(keep)


# -- composition and plays --------------------------------------------------

@dataclass(frozen=True)
class CoinStrategy:
    """Decision table from traces to the winning side (0 first, 1 second)."""

    table: tuple = ()
    default: int = 0

    def __call__(self, w) -> int:
        return dict(self.table).get(w, self.default)

    @classmethod
    def of(cls, mapping: dict, default: int = 0) -> "CoinStrategy":
        return cls(tuple(sorted(mapping.items(), key=lambda kv: repr(kv[0]))), default)


@dataclass(frozen=True)
class Play:
    word: tuple
    terminal: str
    strategy: Strategy = field(repr=False, compare=False)

    def to_json(self) -> dict:
        return {"word": W.to_json(self.word), "terminal": self.terminal}


def _product_alphabet(g0: Strategy, g1: Strategy):
    if g0.outputs & g1.outputs:
        raise GameError("strategies share outputs: " + ", ".join(sorted(g0.outputs & g1.outputs)))
    if (g0.depth, g0.horizon, g0.delta) != (g1.depth, g1.horizon, g1.delta):
        raise GameError("strategies built with different bounds")
    outs = g0.outputs | g1.outputs
    return (g0.inputs | g1.inputs) - outs, outs


def _compose(g0: Strategy, g1: Strategy, coin, ties: set | None = None):
    """Product trees for ``coin`` (a CoinStrategy), or for every coin if None."""
    ins, outs = _product_alphabet(g0, g1)
    ins = sorted(ins)
    a0, a1 = g0.alphabet, g1.alphabet
    steps = int(Fraction(g0.horizon) / g0.delta)
    K = g0.depth

    def inp(node, e, alpha):
        if e not in alpha:
            return node
        return dict(node[2])[e]

    def go(p, q, n, t, w) -> list:
        if is_sink(p) or is_sink(q):
            return [TOPNODE if TOPNODE in (p, q) else BOTNODE]
        mp, mq = p[1], q[1]
        if n < K:
            kid_sets = [(e, go(inp(p, e, a0), inp(q, e, a1), n + 1, t, W.concat(w, (e,)))) for e in ins]
        else:
            kid_sets = None
        moves: list = []
        outs_here = [(0, mp[1])] if mp[0] == "out" else []
        outs_here += [(1, mq[1])] if mq[0] == "out" else []
        if n >= K:
            if mp[0] == "delay" and mq[0] == "delay":
                moves = [("delay", c) for c in go(p[3], q[3], n, t + 1, W.concat(w, (g0.delta,)))]
            else:
                moves = [(CUT, None)]
        elif outs_here:
            if len(outs_here) == 2:
                if ties is not None:
                    ties.add(w)
                sides = [0, 1] if coin is None else [coin(w)]
                outs_here = [outs_here[s] for s in sides]
            for side, b in outs_here:
                if side == 0:
                    p2, q2 = p[3], inp(q, b, a1)
                else:
                    p2, q2 = inp(p, b, a0), q[3]
                moves.extend((("out", b), c) for c in go(p2, q2, n + 1, t, W.concat(w, (b,))))
        elif mp[0] == "delay" and mq[0] == "delay":
            moves = [("delay", c) for c in go(p[3], q[3], n, t + 1, W.concat(w, (g0.delta,)))]
        else:
            moves = [(CUT, None)]
        out = []
        combos = [()] if kid_sets is None else itertools.product(*[[(e, c) for c in cs] for e, cs in kid_sets])
        for combo in combos:
            for mv, c in moves:
                if mv == "delay":
                    if is_sink(c):
                        mv = ("delay", steps - t)
                    elif c[1][0] == "delay":
                        mv = ("delay", c[1][1] + 1)
                    else:
                        mv = ("delay", 1)
                out.append(("P", mv, None if kid_sets is None else combo, c))
        return out

    roots = go(g0.root, g1.root, 0, 0, ())
    return [Strategy(frozenset(ins), frozenset(outs), r, K, g0.horizon, g0.delta) for r in roots]


def compose_strategies(g0: Strategy, g1: Strategy, h: CoinStrategy | None = None) -> Strategy:
    """``g0 ∥_h g1``; a tree when the alphabets leave inputs open."""
    (g,) = _compose(g0, g1, h or CoinStrategy())
    return g


def all_compositions(g0: Strategy, g1: Strategy) -> frozenset:
    """``g0 ∥_h g1`` for every coin ``h``."""
    return frozenset(_compose(g0, g1, None))


def tie_points(g0: Strategy, g1: Strategy) -> frozenset:
    """Traces at which both strategies propose an action, over all coins."""
    found: set = set()
    _compose(g0, g1, None, found)
    return frozenset(found)


def coins_for(points, limit: int = 4096):
    """Every decision table over ``points`` (at most ``limit`` of them)."""
    points = sorted(points, key=repr)
    if 2 ** len(points) > limit:
        raise StrategyBudgetExceeded(f"{len(points)} tie points give too many coin strategies")
    for bits in itertools.product((0, 1), repeat=len(points)):
        yield CoinStrategy.of(dict(zip(points, bits)))


def play(gc: Strategy, ge: Strategy, h: CoinStrategy | None = None) -> Play:
    """One play of a component against an environment with complementary alphabets."""
    if gc.inputs != ge.outputs or gc.outputs != ge.inputs:
        raise GameError("play needs complementary alphabets; use compose_strategies for open products")
    g = compose_strategies(gc, ge, h)
    w: tuple = ()
    node = g.root
    while not is_sink(node):
        mv = node[1]
        if mv[0] == "out":
            w = W.concat(w, (mv[1],))
        elif mv[0] == "delay":
            w = W.concat(w, (g.delta,))
        else:
            return Play(w, "frontier", g)
        node = node[3]
    return Play(w, BOT if node == BOTNODE else TOP, g)


def bot_free(g: Strategy) -> bool:
    return not g.bot_words


# -- sets of strategies -----------------------------------------------------

def strategy_set_json(strategies, **meta) -> dict:
    items = sorted(strategies, key=lambda g: json.dumps(node_to_json(g.root), sort_keys=True))
    first = items[0] if items else None
    return {
        **meta,
        "inputs": sorted(first.inputs) if first else [],
        "outputs": sorted(first.outputs) if first else [],
        "count": len(items),
        "strategies": [node_to_json(g.root) for g in items],
    }


# -- bounded lemma checks ---------------------------------------------------

@dataclass
class Bounds:
    depth: int = 2
    horizon: int = 1
    budget: int = DEFAULT_BUDGET

    def to_json(self) -> dict:
        return {"depth": self.depth, "horizon": self.horizon, "delta": 1}


def strategies_of(a, bounds: Bounds) -> frozenset:
    from .oracle import digitize

    return enumerate_strategies(digitize(a, 1, bounds.horizon), bounds.depth, bounds.horizon, bounds.budget)


def semantics(a, bounds: Bounds) -> frozenset:
    """Generators of the disjunction-closed strategy semantics of ``a``."""
    return minimal(disjunction_closure(strategies_of(a, bounds)))


def _outside(gens, closure_gens):
    """First generator not in the upward closure of ``closure_gens``."""
    pool = list(closure_gens)
    for g in gens:
        if not dominated(g, pool):
            return g
    return None


@dataclass
class LemmaResult:
    name: str
    holds: bool
    checked: int
    counterexample: dict | None = None
    note: str = ""

    def to_json(self) -> dict:
        return {
            "name": self.name, "holds": self.holds, "checked": self.checked,
            "counterexample": self.counterexample, "note": self.note,
        }


def _cex(**items) -> dict:
    out = {}
    for k, v in items.items():
        out[k] = v.to_json() if isinstance(v, Strategy) else v
    return out


def check_refinement(p, q, bounds: Bounds) -> LemmaResult:
    """``p ⊑ q`` on traces iff ``[q]+ ⊆ [p]+`` (``p`` is the specification)."""
    from .oracle import digitize
    from .traces import extract_triple_traces, tt_refines

    tp = extract_triple_traces(digitize(p, 1, bounds.horizon), bounds.depth, bounds.horizon)
    tq = extract_triple_traces(digitize(q, 1, bounds.horizon), bounds.depth, bounds.horizon)
    by_traces, _ = tt_refines(tp, tq)
    gp, gq = semantics(p, bounds), semantics(q, bounds)
    missing = _outside(gq, gp)
    by_games = missing is None
    cex = None
    if by_traces != by_games:
        cex = _cex(traces=by_traces, strategies=by_games, missing=missing)
    return LemmaResult("refinement", by_traces == by_games, len(gp) + len(gq), cex,
                       f"refinement {'holds' if by_traces else 'fails'}")


def check_disjunction_play(p, env, bounds: Bounds, rng=None, pairs: int = 30, envs: int = 10) -> LemmaResult:
    """``G0∥G, G1∥G`` ⊥-free iff ``(G0+G1)∥G`` ⊥-free, per coin."""
    import random

    rng = rng or random.Random(0)
    comp = sorted(strategies_of(p, bounds), key=str)
    opp = sorted(strategies_of(env, bounds), key=str)
    affine = [(g0, g1) for g0, g1 in itertools.combinations(comp, 2) if is_affine(g0, g1)]
    affine = rng.sample(affine, min(pairs, len(affine)))
    opp = rng.sample(opp, min(envs, len(opp)))
    checked = 0
    for g0, g1 in affine:
        j = strategy_disjunction(g0, g1)
        for ge in opp:
            points = tie_points(g0, ge) | tie_points(g1, ge) | tie_points(j, ge)
            for h in coins_for(points):
                checked += 1
                left = bot_free(compose_strategies(g0, ge, h)) and bot_free(compose_strategies(g1, ge, h))
                right = bot_free(compose_strategies(j, ge, h))
                if left != right:
                    return LemmaResult("disjunction_play", False, checked, _cex(g0=g0, g1=g1, environment=ge, coin=repr(h)))
    return LemmaResult("disjunction_play", True, checked)


def _mutual(name, gens_a, gens_b) -> LemmaResult:
    a_not_b = _outside(gens_a, gens_b)
    b_not_a = None if a_not_b is not None else _outside(gens_b, gens_a)
    cex = None
    if a_not_b is not None:
        cex = _cex(only_left=a_not_b)
    elif b_not_a is not None:
        cex = _cex(only_right=b_not_a)
    return LemmaResult(name, cex is None, len(gens_a) + len(gens_b), cex)


def check_parallel(p, q, bounds: Bounds) -> LemmaResult:
    """``[p∥q]+`` is the upward closure of the strategy compositions."""
    from .operators import compose_parallel

    gp, gq = semantics(p, bounds), semantics(q, bounds)
    composed = frozenset().union(*(all_compositions(a, b) for a in gp for b in gq)) if gp and gq else frozenset()
    return _mutual("parallel", semantics(compose_parallel(p, q), bounds), composed)


def check_disjunction(p, q, bounds: Bounds) -> LemmaResult:
    from .operators import compose_disjunction

    joined = disjunction_closure(semantics(p, bounds) | semantics(q, bounds))
    return _mutual("disjunction", semantics(compose_disjunction(p, q), bounds), joined)


def check_conjunction(p, q, bounds: Bounds) -> LemmaResult:
    from .operators import compose_conjunction

    gp, gq = list(semantics(p, bounds)), list(semantics(q, bounds))
    gpq = list(semantics(compose_conjunction(p, q), bounds))
    checked = 0
    for g in gpq:
        checked += 1
        if not (dominated(g, gp) and dominated(g, gq)):
            return LemmaResult("conjunction", False, checked, _cex(conjunction_only=g))
    for g in set(gp) | set(gq) | strategies_of(p, bounds) | strategies_of(q, bounds):
        checked += 1
        if dominated(g, gp) and dominated(g, gq) and not dominated(g, gpq):
            return LemmaResult("conjunction", False, checked, _cex(intersection_only=g))
    return LemmaResult("conjunction", True, checked)


def _candidates(a, bounds: Bounds, rng, extra: int) -> frozenset:
    """Strategies of ``a`` plus those of random systems over its alphabet."""
    from .corpus import random_tioa

    pool = set(strategies_of(a, bounds))
    for i in range(extra):
        r = random_tioa(rng, f"E{i}", tuple(sorted(a.inputs)), tuple(sorted(a.outputs)), locations=2, clocks=1, maxc=2)
        try:
            pool |= strategies_of(r, bounds)
        except StrategyBudgetExceeded:
            continue
    return frozenset(pool)


def check_quotient(p, q, bounds: Bounds, rng=None, extra: int = 3) -> LemmaResult:
    """``[p%q]+`` holds exactly the strategies whose compositions with ``[q]+`` land in ``[p]+``."""
    import random

    from .operators import compose_quotient

    rng = rng or random.Random(0)
    quot = compose_quotient(p, q)
    gp, gq = list(semantics(p, bounds)), list(semantics(q, bounds))
    gquot = semantics(quot, bounds)

    def fits(g):
        return all(dominated(c, gp) for b in gq for c in all_compositions(g, b))

    checked = 0
    for g in gquot:
        checked += 1
        if not fits(g):
            return LemmaResult("quotient", False, checked, _cex(quotient_strategy=g))
    for g in _candidates(quot, bounds, rng, extra):
        checked += 1
        if fits(g) and not dominated(g, gquot):
            return LemmaResult("quotient", False, checked, _cex(missing=g))
    return LemmaResult("quotient", True, checked)


def check_mirror(p, bounds: Bounds, rng=None, extra: int = 3) -> LemmaResult:
    """``[p¬]+`` holds exactly the strategies that never meet ⊥ against ``[p]+``."""
    import random

    from .operators import mirror

    rng = rng or random.Random(0)
    m = mirror(p)
    gp = list(semantics(p, bounds))
    gm = semantics(m, bounds)

    def safe(g):
        return all(bot_free(c) for b in gp for c in all_compositions(g, b))

    checked = 0
    for g in gm:
        checked += 1
        if not safe(g):
            return LemmaResult("mirror", False, checked, _cex(mirror_strategy=g))
    for g in _candidates(m, bounds, rng, extra):
        checked += 1
        if safe(g) and not dominated(g, gm):
            return LemmaResult("mirror", False, checked, _cex(missing=g))
    return LemmaResult("mirror", True, checked)


LEMMAS = ("refinement", "disjunction_play", "parallel", "disjunction", "conjunction", "quotient", "mirror")


def check_lemmas(corpus: int = 50, seed: int = 0, bounds: Bounds | None = None, pairs=None) -> dict:
    """Run every bounded check over random systems (and any given ``pairs``).

    ``pairs`` is an optional list of same-alphabet ``(p, q)`` pairs; they are
    used for the checks that take two operands of one alphabet.  The report
    aggregates per lemma and keeps the first counterexample.
    """
    import random

    from . import corpus as C

    bounds = bounds or Bounds()
    rng = random.Random(seed)
    kw = dict(locations=2, clocks=1, maxc=2)
    summary = {name: {"holds": True, "checked": 0, "cases": 0, "counterexample": None} for name in LEMMAS}
    skipped = 0

    def record(r: LemmaResult):
        entry = summary[r.name]
        entry["cases"] += 1
        entry["checked"] += r.checked
        if not r.holds and entry["holds"]:
            entry["holds"] = False
            entry["counterexample"] = r.counterexample

    def same_pairs():
        for p, q in pairs or ():
            yield p, q
        for _ in range(corpus):
            yield C.random_pair(rng, "same", **kw)

    for i, (p, q) in enumerate(same_pairs()):
        try:
            record(check_refinement(p, q, bounds))
            record(check_disjunction(p, q, bounds))
            record(check_conjunction(p, q, bounds))
            record(check_mirror(p, bounds, rng, extra=1))
            # distinct affine strategies only arise from nondeterminism
            comp = C.random_tioa(rng, "N", tuple(sorted(p.inputs)), tuple(sorted(p.outputs)),
                                 deterministic=False, p_edge=0.9, **kw)
            env = C.random_tioa(rng, "E", tuple(sorted(p.outputs)), tuple(sorted(p.inputs)), **kw)
            record(check_disjunction_play(comp, env, bounds, rng, pairs=10, envs=5))
            if i < corpus:
                record(check_parallel(*C.random_pair(rng, "par", **kw), bounds))
                record(check_quotient(*C.random_pair(rng, "quot", **kw), bounds, rng, extra=1))
        except StrategyBudgetExceeded:
            skipped += 1
    return {
        "bounds": bounds.to_json(),
        "bounded_universe": True,
        "seed": seed,
        "corpus": corpus,
        "skipped_over_budget": skipped,
        "holds": all(v["holds"] for v in summary.values()),
        "lemmas": summary,
    }
