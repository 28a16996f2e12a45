"""Digitized explicit-state semantics used as an independent reference.

A ``DigitizedTIOTS`` is the transition system of an automaton restricted to
delays that are multiples of ``delta``.  Clock values are stored as integer
multiples of ``delta`` and saturate at a cap past which no constraint can
tell them apart, so the graph is finite.  Horizon and depth are enforced
when traces are extracted, not in the graph.

For closed constraints (``<=``, ``>=``, ``==`` only) and ``delta = 1`` the
integer grid is exact for reachability and trace questions.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction

from . import concrete
from .tioa import BOT, TOP, TIOA

DELAY = "~delay"


@dataclass
class DigitizedTIOTS:
    inputs: frozenset
    outputs: frozenset
    delta: Fraction
    horizon: int
    depth: int | None
    states: list
    initial: int
    # succ[i] maps an action or DELAY to a tuple of state indices
    succ: list
    exact: bool = True
    name: str = ""
    index: dict = field(default=None, repr=False)

    def __post_init__(self):
        if self.index is None:
            self.index = {s: i for i, s in enumerate(self.states)}

    @property
    def alphabet(self) -> frozenset:
        return self.inputs | self.outputs

    def kind(self, i: int) -> str:
        s = self.states[i]
        return s if s in (BOT, TOP) else "plain"

    def is_deterministic(self) -> bool:
        return all(len(ts) <= 1 for row in self.succ for ts in row.values())

    def post(self, subset, label) -> frozenset:
        out = set()
        for i in subset:
            out.update(self.succ[i].get(label, ()))
        return frozenset(out)

    def size(self) -> int:
        return len(self.states)

    def to_json(self) -> dict:
        def show(s):
            if s in (BOT, TOP):
                return s
            if isinstance(s, tuple) and len(s) == 2 and isinstance(s[0], str):
                return {"location": s[0], "values": [str(v * self.delta) for v in s[1]]}
            return str(s)

        return {
            "name": self.name,
            "inputs": sorted(self.inputs),
            "outputs": sorted(self.outputs),
            "delta": str(self.delta),
            "horizon": self.horizon,
            "initial": self.initial,
            "exact": self.exact,
            "states": [show(s) for s in self.states],
            "transitions": [
                {"from": i, "label": "delay" if lab == DELAY else lab, "to": list(ts)}
                for i, row in enumerate(self.succ)
                for lab, ts in sorted(row.items())
            ],
        }


def _caps(a: TIOA, delta: Fraction, horizon: int) -> list[int]:
    """Per-clock saturation value in grid units."""
    if a.has_diagonals():
        top = horizon
        return [int(Fraction(top) / delta) + 1 for _ in a.clocks]
    maxc = a.max_constants()
    return [int(Fraction(maxc[c] + 1) / delta) + 1 for c in a.clocks]


def digitize(a: TIOA, delta=1, horizon: int = 12, depth: int | None = None) -> DigitizedTIOTS:
    """Explicit grid semantics of ``a`` (completed with ``BOT``/``TOP``)."""
    delta = Fraction(delta)
    if delta <= 0:
        raise ValueError("delta must be positive")
    caps = _caps(a, delta, horizon)
    states: list = [BOT, TOP]
    index = {BOT: 0, TOP: 1}
    succ: list = [
        {**{act: (0,) for act in a.alphabet}, DELAY: (0,)},
        {DELAY: (1,)},
    ]

    def encode(st):
        if st in (BOT, TOP):
            return st
        loc, vals = st
        units = []
        for v, cap in zip(vals, caps):
            u = Fraction(v) / delta
            if u.denominator != 1:
                raise ValueError(f"off-grid value {v} for delta {delta}")
            units.append(min(int(u), cap))
        return (loc, tuple(units))

    def intern(st) -> int:
        if st not in index:
            index[st] = len(states)
            states.append(st)
            succ.append(None)
            queue.append(index[st])
        return index[st]

    queue: deque = deque()
    init = intern(encode(concrete.initial(a)))
    while queue:
        i = queue.popleft()
        loc, units = states[i]
        vals = tuple(u * delta for u in units)
        row = {}
        for act in sorted(a.alphabet):
            targets = concrete.step_action(a, (loc, vals), act)
            row[act] = tuple(sorted({intern(encode(t)) for t in targets}))
            if not row[act]:
                del row[act]
        nxt = concrete.step_delay(a, (loc, vals), delta)
        row[DELAY] = (intern(encode(nxt)),)
        succ[i] = row
    exact = a.is_closed() and delta == 1
    return DigitizedTIOTS(a.inputs, a.outputs, delta, horizon, depth, states, init, succ, exact, a.name, index)


def determinize_explicit(d: DigitizedTIOTS) -> DigitizedTIOTS:
    """Subset construction with the sink reduction rules.

    A subset containing ``BOT`` becomes ``BOT``; ``TOP`` members are dropped
    unless ``TOP`` is the only member.
    """

    def reduce(subset: frozenset):
        if 0 in subset:
            return BOT
        if subset == frozenset({1}):
            return TOP
        return subset - {1}

    bot_row = {**{act: (0,) for act in d.alphabet}, DELAY: (0,)}
    states: list = [BOT, TOP]
    index = {BOT: 0, TOP: 1}
    succ: list = [bot_row, {DELAY: (1,)}]
    queue: deque = deque()

    def intern(s) -> int:
        if s not in index:
            index[s] = len(states)
            states.append(s)
            succ.append(None)
            queue.append(index[s])
        return index[s]

    init = intern(reduce(frozenset({d.initial})))
    while queue:
        i = queue.popleft()
        subset = states[i]
        row = {}
        for lab in sorted(d.alphabet) + [DELAY]:
            nxt = d.post(subset, lab)
            if nxt:
                row[lab] = (intern(reduce(nxt)),)
        succ[i] = row
    # present subsets through the original states for readability
    shown = [s if s in (BOT, TOP) else frozenset(d.states[j] for j in s) for s in states]
    return DigitizedTIOTS(d.inputs, d.outputs, d.delta, d.horizon, d.depth, shown, init, succ, d.exact, d.name)


def reach_bot_digitized(d: DigitizedTIOTS, depth: int, horizon: int | None = None):
    """Is ``BOT`` reachable with at most ``depth`` actions and elapsed time <= horizon?

    Returns ``(reachable, word)``.  Breadth-first over (state, elapsed,
    actions) keeping only Pareto-optimal (elapsed, actions) pairs per state.
    """
    from . import words as W

    horizon = d.horizon if horizon is None else horizon
    limit = int(Fraction(horizon) / d.delta)
    front: dict = {d.initial: [(0, 0)]}
    parent = {(d.initial, 0, 0): None}
    queue = deque([(d.initial, 0, 0)])

    def dominated(s, t, k):
        return any(t0 <= t and k0 <= k for t0, k0 in front.get(s, ()))

    while queue:
        s, t, k = queue.popleft()
        if s == 0:
            labels = []
            node = (s, t, k)
            while parent[node] is not None:
                node, lab = parent[node]
                labels.append(d.delta if lab == DELAY else lab)
            return True, W.canon(reversed(labels))
        for lab, targets in d.succ[s].items():
            if lab == DELAY:
                nt, nk = t + 1, k
                if nt > limit:
                    continue
            else:
                nt, nk = t, k + 1
                if nk > depth:
                    continue
            for s2 in targets:
                if dominated(s2, nt, nk):
                    continue
                front[s2] = [p for p in front.get(s2, []) if not (nt <= p[0] and nk <= p[1])] + [(nt, nk)]
                parent[(s2, nt, nk)] = ((s, t, k), lab)
                queue.append((s2, nt, nk))
    return False, None


def refines_digitized(spec: DigitizedTIOTS, imp: DigitizedTIOTS, depth: int, horizon=None):
    """Bounded refinement of digitized systems by a product search.

    Both sides are determinized first, so every bounded word leads to one
    state on each side.  A pair violates refinement when the implementation
    is at ``BOT`` and the specification is not, or the implementation is
    plain where the specification is at ``TOP``.  Pairs where the
    specification is at ``BOT`` or the implementation at ``TOP`` are pruned.
    Returns ``(holds, (set_name, word))`` like ``tt_refines``.
    """
    from . import words as W

    if spec.alphabet != imp.alphabet or spec.delta != imp.delta:
        raise ValueError("digitized systems differ in alphabet or delta")
    horizon = min(spec.horizon, imp.horizon) if horizon is None else horizon
    ds, di = determinize_explicit(spec), determinize_explicit(imp)
    limit = int(Fraction(horizon) / spec.delta)
    start = (di.initial, ds.initial)
    front: dict = {start: [(0, 0)]}
    parent = {(start, 0, 0): None}
    queue = deque([(start, 0, 0)])
    labels = sorted(spec.alphabet) + [DELAY]

    def word_of(node):
        out = []
        while parent[node] is not None:
            node, lab = parent[node]
            out.append(spec.delta if lab == DELAY else lab)
        return W.canon(reversed(out))

    while queue:
        node = queue.popleft()
        (i, s), t, k = node
        ki, ks = di.kind(i), ds.kind(s)
        if ks == BOT or ki == TOP:
            continue
        if ki == BOT:
            return False, ("TE", word_of(node))
        if ks == TOP:
            return False, ("TR", word_of(node))
        for lab in labels:
            if lab == DELAY:
                nt, nk = t + 1, k
                if nt > limit:
                    continue
            else:
                nt, nk = t, k + 1
                if nk > depth:
                    continue
            (i2,) = di.succ[i][lab]
            (s2,) = ds.succ[s][lab]
            pair = (i2, s2)
            if any(t0 <= nt and k0 <= nk for t0, k0 in front.get(pair, ())):
                continue
            front[pair] = [q for q in front.get(pair, []) if not (nt <= q[0] and nk <= q[1])] + [(nt, nk)]
            parent[(pair, nt, nk)] = (node, lab)
            queue.append((pair, nt, nk))
    return True, None


from .traces import (  # noqa: E402  (re-exported oracle API)
    TripleTraceStructure,
    extract_triple_traces,
    structural_report,
    tt_conjunction,
    tt_disjunction,
    tt_mirror,
    tt_parallel,
    tt_quotient,
    tt_quotient_derived,
    tt_refines,
)

__all__ = [
    "DELAY", "DigitizedTIOTS", "digitize", "determinize_explicit", "reach_bot_digitized", "refines_digitized",
    "TripleTraceStructure", "extract_triple_traces", "structural_report", "tt_refines",
    "tt_parallel", "tt_conjunction", "tt_disjunction", "tt_quotient", "tt_quotient_derived", "tt_mirror",
]
