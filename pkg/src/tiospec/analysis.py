"""Zone-graph exploration: reachability of ``BOT``, refinement and equivalence.

Exploration is breadth-first on action count (delays cost nothing), so the
first ``BOT`` found has a minimal number of actions.  Witness words are
rebuilt from the symbolic path with exact (non-extrapolated) zones and then
replayed through the point semantics before they are returned.
"""
from __future__ import annotations

import time
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil

from . import concrete
from . import words as W
from .dbm import Zone, bound
from .operators import OperatorError, check_deterministic, refinement_product
from .semantics import Plain, init_state, succ_action, succ_delay
from .tioa import BOT, TOP, TIOA, ModelError

HOLDS, FAILS, BOUND_EXCEEDED = "holds", "fails", "bound-exceeded"
HORIZON_CLOCK = "__T"
DEFAULT_BUDGET = 200_000


@dataclass
class Verdict:
    outcome: str
    witness: tuple | None = None
    stats: dict = field(default_factory=dict)
    detail: str = ""

    @property
    def holds(self) -> bool:
        return self.outcome == HOLDS

    @property
    def fails(self) -> bool:
        return self.outcome == FAILS

    def exit_code(self) -> int:
        return {HOLDS: 0, FAILS: 1}.get(self.outcome, 2)

    def to_json(self) -> dict:
        return {
            "outcome": self.outcome,
            "witness": None if self.witness is None else W.to_json(self.witness),
            "stats": self.stats,
            "detail": self.detail,
        }

    def __str__(self):
        text = self.outcome
        if self.witness is not None:
            text += f" witness {W.to_text(self.witness)}"
        if self.detail:
            text += f" ({self.detail})"
        return text


class _Explorer:
    def __init__(self, a: TIOA, budget: int, depth: int | None, horizon: int | None):
        self.a = a
        self.budget = budget
        self.depth = depth
        self.horizon = horizon
        self.clocks = a.clocks + ((HORIZON_CLOCK,) if horizon is not None else ())
        self.maxc = dict(a.max_constants())
        if horizon is not None:
            self.maxc[HORIZON_CLOCK] = horizon
            self.t_index = len(self.clocks)

    def clip(self, zone: Zone) -> Zone:
        if self.horizon is None or zone is None:
            return zone
        return zone.constrain(self.t_index, 0, bound(self.horizon, False))

    def clip_state(self, state):
        if not isinstance(state, Plain):
            return state
        z = self.clip(state.zone)
        return None if z.empty else Plain(state.location, z)

    def norm(self, state):
        if isinstance(state, Plain):
            return Plain(state.location, state.zone.extrapolate(self.maxc))
        return state

    def steps(self, state, allow_actions: bool):
        """Yield ``(label, successor)``; successors are clipped, not extrapolated."""
        for succ, region in succ_delay(self.a, state):
            if region is None:
                continue
            region = self.clip(region)
            if region.empty:
                continue
            succ = self.clip_state(succ)
            if succ is not None:
                yield None, succ
        if not allow_actions:
            return
        for action in sorted(self.a.alphabet):
            for succ, guard in succ_action(self.a, state, action):
                succ = self.clip_state(succ)
                if succ is not None:
                    yield action, succ

    def search(self):
        """0-1 BFS; returns ``(path or None, stats, exhausted)``."""
        start = init_state(self.a, self.clocks)
        stats = {"states": 0, "max_depth": 0}
        if start == BOT:
            return [], stats, False
        if start == TOP:
            return None, stats, False
        start = self.norm(self.clip_state(start))
        best = {start: 0}
        parent = {start: None}
        queue = deque([(start, 0)])
        while queue:
            state, d = queue.popleft()
            if best.get(state, d) < d:
                continue
            stats["states"] += 1
            stats["max_depth"] = max(stats["max_depth"], d)
            if stats["states"] > self.budget:
                return None, stats, True
            allow = self.depth is None or d < self.depth
            for label, succ in self.steps(state, allow):
                nd = d + (0 if label is None else 1)
                if succ == BOT:
                    return self._path(parent, state) + [label], stats, False
                if succ == TOP:
                    continue
                succ = self.norm(succ)
                if succ in best and best[succ] <= nd:
                    continue
                best[succ] = nd
                parent[succ] = (state, label)
                if label is None:
                    queue.appendleft((succ, nd))
                else:
                    queue.append((succ, nd))
        return None, stats, False

    @staticmethod
    def _path(parent, state) -> list:
        labels = []
        while parent[state] is not None:
            state, label = parent[state]
            labels.append(label)
        labels.reverse()
        return labels


# -- witnesses ----------------------------------------------------------------

def _pick_delay(lo, lo_strict, hi, hi_strict) -> Fraction:
    """A delay in the interval, preferring small integers."""
    k = ceil(lo)
    if k == lo and lo_strict:
        k += 1
    if hi is None or k < hi or (k == hi and not hi_strict):
        return Fraction(k)
    if hi is None:
        return lo + 1
    return (lo + hi) / 2


def _concretize(ex: _Explorer, labels: list) -> tuple:
    """Turn a label path (``None`` = delay) ending in ``BOT`` into a timed word."""
    a = ex.a
    start = ex.clip_state(init_state(a, ex.clocks))
    if start == BOT:
        return ()
    # forward pass with exact zones; each layer maps a key to a list of
    # (pre_zone, kind, trans_zone, resets, post_state)
    layers = []
    current = [start]
    for k, label in enumerate(labels):
        final = k == len(labels) - 1
        layer = []
        nxt = []
        for st in current:
            if label is None:
                for succ, region in succ_delay(a, st):
                    if region is None:
                        continue
                    region = ex.clip(region)
                    if region.empty or (succ == BOT) != final or succ == TOP:
                        continue
                    succ = ex.clip_state(succ)
                    if succ is None:
                        continue
                    layer.append((st, region, frozenset(), succ))
                    if succ != BOT:
                        nxt.append(succ)
            else:
                for succ, guard, resets in succ_action(a, st, label, with_resets=True):
                    if (succ == BOT) != final or succ == TOP:
                        continue
                    succ = ex.clip_state(succ)
                    if succ is None:
                        continue
                    layer.append((st, guard, resets, succ))
                    if succ != BOT:
                        nxt.append(succ)
        layers.append(layer)
        current = list(dict.fromkeys(nxt))
    # backward pass: good[k] lists (state, zone) pairs from which the rest of the path works
    good_post = None
    goods = [None] * len(labels)
    for k in range(len(labels) - 1, -1, -1):
        label = labels[k]
        pre_good = []
        for st, trans, resets, succ in layers[k]:
            if good_post is None:
                targets = [trans]
            else:
                targets = [z for s2, z in good_post if s2 == succ]
                if label is not None:
                    targets = [t.free(resets).conjoin(trans) for t in targets]
                else:
                    targets = [t.conjoin(trans) for t in targets]
            for t in targets:
                if t.empty:
                    continue
                z = t if label is not None else st.zone.conjoin(t.past())
                if not z.empty:
                    pre_good.append((st, z, t, succ))
        goods[k] = pre_good
        good_post = [(st, z) for st, z, _, _ in pre_good]
    # forward pass on points
    vals = {c: Fraction(0) for c in ex.clocks}
    state = start
    out = []
    for k, label in enumerate(labels):
        options = [(z, t, succ) for st, z, t, succ in goods[k] if st == state and z.contains(vals)]
        if not options:
            raise ModelError("witness reconstruction lost track of the symbolic path")
        z, t, succ = options[0]
        if label is None:
            iv = t.delay_interval(vals)
            if iv is None:
                raise ModelError("witness reconstruction found no delay")
            d = _pick_delay(*iv)
            if d > 0:
                out.append(d)
                vals = {c: v + d for c, v in vals.items()}
        else:
            out.append(label)
            resets = next(r for st, tr, r, s2 in layers[k] if st == state and s2 == succ)
            vals = {c: (Fraction(0) if c in resets else v) for c, v in vals.items()}
        state = succ
    return W.canon(out)


def replays_to_bot(a: TIOA, w) -> bool:
    return BOT in concrete.run_word(a, w)


# -- public API ---------------------------------------------------------------

def reach_bot(
    a: TIOA,
    budget: int = DEFAULT_BUDGET,
    depth: int | None = None,
    horizon: int | None = None,
) -> Verdict:
    """Does ``a`` (or rather its completed semantics) reach ``BOT``?

    ``holds`` means ``BOT`` is unreachable.  ``depth`` bounds the number of
    actions and ``horizon`` the elapsed time; without them the zone graph
    is finite thanks to extrapolation, so ``bound-exceeded`` only reports an
    exhausted ``budget`` of symbolic states.
    """
    t0 = time.perf_counter()
    if a.has_diagonals():
        detail = "diagonal constraints: extrapolation may over-approximate"
    else:
        detail = ""
    ex = _Explorer(a, budget, depth, horizon)
    labels, stats, exhausted = ex.search()
    stats["seconds"] = round(time.perf_counter() - t0, 6)
    stats["depth_bound"], stats["horizon"] = depth, horizon
    if exhausted:
        return Verdict(BOUND_EXCEEDED, None, stats, f"state budget {budget} exhausted")
    if labels is None:
        return Verdict(HOLDS, None, stats, detail)
    w = _concretize(ex, labels)
    if not replays_to_bot(a, w):
        raise ModelError(f"witness {W.to_text(w)} does not replay to BOT in {a.name}")
    return Verdict(FAILS, w, stats, detail)


def _deterministic(a: TIOA) -> bool:
    return check_deterministic(a)[0]


def refines(
    spec: TIOA,
    imp: TIOA,
    budget: int = DEFAULT_BUDGET,
    depth: int | None = None,
    horizon: int | None = None,
    delta=1,
) -> Verdict:
    """Does ``imp`` refine ``spec``?

    Deterministic operands use the symbolic product; otherwise both sides
    go through the digitized oracle (``depth``/``horizon`` then default to
    4 and 12) and the verdict says so in ``stats["engine"]``.
    """
    if spec.inputs != imp.inputs or spec.outputs != imp.outputs:
        raise OperatorError(
            f"refinement needs identical alphabets ({spec.name}: I={sorted(spec.inputs)} O={sorted(spec.outputs)}; "
            f"{imp.name}: I={sorted(imp.inputs)} O={sorted(imp.outputs)})"
        )
    if not (_deterministic(spec) and _deterministic(imp)):
        return _oracle_refines(spec, imp, depth, horizon, delta)
    product = refinement_product(spec, imp)
    verdict = reach_bot(product, budget, depth, horizon)
    verdict.stats["engine"] = "symbolic"
    if verdict.fails:
        verdict.detail = "implementation reaches a violation: " + _classify(spec, imp, verdict.witness)
    return verdict


def _classify(spec: TIOA, imp: TIOA, w) -> str:
    s = concrete.run_word(spec, w)
    i = concrete.run_word(imp, w)
    if BOT in i:
        return "implementation is inconsistent where the specification is not"
    if TOP in s or not s:
        return "specification stops time where the implementation does not"
    return "trace not allowed by the specification"


def _oracle_refines(spec, imp, depth, horizon, delta) -> Verdict:
    from .oracle import digitize, refines_digitized

    depth = 4 if depth is None else depth
    horizon = 12 if horizon is None else horizon
    ok, witness = refines_digitized(digitize(spec, delta, horizon, depth), digitize(imp, delta, horizon, depth),
                                    depth, horizon)
    stats = {"engine": "oracle", "delta": str(delta), "depth_bound": depth, "horizon": horizon}
    if ok:
        return Verdict(HOLDS, None, stats, "oracle-backed (nondeterministic operand)")
    return Verdict(FAILS, witness[1], stats, f"oracle-backed: {witness[0]} containment violated")


def equivalent(a: TIOA, b: TIOA, budget: int = DEFAULT_BUDGET, depth: int | None = None,
               horizon: int | None = None, delta=1) -> Verdict:
    first = refines(a, b, budget, depth, horizon, delta)
    if not first.holds:
        first.detail = f"{b.name} does not refine {a.name}: {first.detail}"
        return first
    second = refines(b, a, budget, depth, horizon, delta)
    if not second.holds:
        second.detail = f"{a.name} does not refine {b.name}: {second.detail}"
        return second
    stats = {"forward": first.stats, "backward": second.stats}
    return Verdict(HOLDS, None, stats, "")


__all__ = [
    "Verdict", "HOLDS", "FAILS", "BOUND_EXCEEDED", "reach_bot", "refines", "equivalent",
    "replays_to_bot",
]
