"""Composition operators as syntactic product constructions.

Every operator builds a product whose locations pair one location of each
operand.  A pair location keeps the parts of both operands, and its resolve
table combines what each side would do on its own using the operator's
state-combination table (``combine``).  Conjunction and disjunction may
discard one side; the survivor continues inside an embedded copy of its
own automaton.
"""
from __future__ import annotations

from collections import deque

from . import constraints as cc
from .semantics import zones_of
from .tioa import BOT, STAY, TOP, TIOA, Edge, Location, ModelError, Part

PLAIN = "P"
PAIR, LEFT, RIGHT = "pair", "left", "right"
OPS = ("par", "and", "or", "quot", "ref")
SYMBOLS = {"par": "∥", "and": "∧", "or": "∨", "quot": "%", "ref": "⊑"}


class OperatorError(ModelError):
    pass


def combine(op: str, s0: str, s1: str) -> str:
    """Combined state class for ``s0`` (left) and ``s1`` (right).

    Arguments are ``"P"`` (plain), ``BOT`` or ``TOP``.  The result is a sink,
    ``"pair"``, or ``"left"``/``"right"`` when only that side survives.  For
    ``"ref"`` the left side is the implementation and the right side the
    specification; ``TOP`` means "pruned" and ``BOT`` means "violation".
    """
    if op == "par":
        if TOP in (s0, s1):
            return TOP
        return BOT if BOT in (s0, s1) else PAIR
    if op == "and":
        if TOP in (s0, s1):
            return TOP
        if s0 == BOT:
            return BOT if s1 == BOT else RIGHT
        return LEFT if s1 == BOT else PAIR
    if op == "or":
        if BOT in (s0, s1):
            return BOT
        if s0 == TOP:
            return TOP if s1 == TOP else RIGHT
        return LEFT if s1 == TOP else PAIR
    if op == "quot":
        if s1 == TOP:
            return BOT
        if s0 == TOP:
            return TOP
        if s0 == BOT:
            return BOT
        return PAIR if s1 == PLAIN else TOP
    if op == "ref":
        if s1 == BOT or s0 == TOP:
            return TOP
        if s0 == BOT or s1 == TOP:
            return BOT
        return PAIR
    raise ValueError(f"unknown operator {op!r}")


def _fresh_clocks(taken, clocks):
    mapping = {}
    used = set(taken)
    for c in clocks:
        new = c
        while new in used:
            new += "'"
        used.add(new)
        if new != c:
            mapping[c] = new
    return mapping


def _satisfiable(con, clocks) -> bool:
    if con == cc.FALSE:
        return False
    return any(not z.empty for z in zones_of(con, clocks))


def settle_classes(a: TIOA, loc: str, resets=frozenset(), _depth: int = 0) -> list[tuple]:
    """Where ``a`` ends up right after entering ``loc`` with ``resets`` applied.

    Returns ``(outcome, constraint)`` pairs; constraints range over the
    valuation before the reset and partition it.  Outcomes are sinks or
    ``("P", location)``.
    """
    if loc in (BOT, TOP):
        return [(loc, cc.TRUE)]
    if _depth > len(a.locations) + 1:
        raise ModelError(f"resolve tables of {a.name} cycle at {loc}")
    location = a.locations[loc]
    if len(location.parts) == 1 and location.has_default_resolve() and location.parts[0] == Part():
        return [((PLAIN, loc), cc.TRUE)]
    out = []
    for combo in location.combos():
        pre = cc.after_reset(location.combo_constraint(combo), resets)
        if pre == cc.FALSE:
            continue
        target = location.target_for(combo)
        if target == STAY:
            out.append(((PLAIN, loc), pre))
        elif target in (BOT, TOP):
            out.append((target, pre))
        else:
            for outcome, con in settle_classes(a, target, resets, _depth + 1):
                out.append((outcome, cc.conj(pre, con)))
    return out


def _class(result):
    return result if result in (BOT, TOP) else PLAIN


class _Product:
    def __init__(self, left: TIOA, right: TIOA, op: str, name: str, inputs, outputs, sync):
        mapping = _fresh_clocks(left.clocks, right.clocks)
        if mapping:
            right = right.renamed_clocks(mapping)
        self.left, self.right, self.op = left, right, op
        self.name = name
        self.inputs, self.outputs = frozenset(inputs), frozenset(outputs)
        self.sync = frozenset(sync)
        self.clocks = left.clocks + right.clocks
        self.names: dict = {}
        self.used: set = set()
        self.locations: dict = {}
        self.edges: list = []
        self.todo: deque = deque()

    def node(self, key) -> str:
        if key in self.names:
            return self.names[key]
        if key[0] == PAIR:
            base = f"{key[1]}_{key[2]}"
        else:
            base = ("L." if key[0] == LEFT else "R.") + key[1]
        name = base
        while name in self.used or name in (BOT, TOP):
            name += "'"
        self.used.add(name)
        self.names[key] = name
        self.todo.append(key)
        return name

    def target(self, result, next0, next1) -> str:
        if result in (BOT, TOP):
            return result
        if result == PAIR:
            return self.node((PAIR, next0, next1))
        if result == LEFT:
            return self.node((LEFT, next0))
        return self.node((RIGHT, next1))

    def build(self) -> TIOA:
        init = self.node((PAIR, self.left.initial, self.right.initial))
        while self.todo:
            key = self.todo.popleft()
            if key[0] == PAIR:
                self._pair(key)
            else:
                self._solo(key)
        return TIOA(self.name, self.clocks, self.inputs, self.outputs, self.locations, init, tuple(self.edges))

    # solo copies keep the operand's own structure
    def _solo(self, key):
        side, loc = key
        a = self.left if side == LEFT else self.right
        src = a.locations[loc]
        name = self.names[key]
        resolve = None
        if src.resolve is not None:
            resolve = tuple(
                (c, t if t in (BOT, TOP, STAY) else self.node((side, t))) for c, t in src.resolve
            )
        self.locations[name] = Location(name, src.parts, resolve)
        for e in a.edges:
            if e.source == loc:
                tgt = e.target if e.target in (BOT, TOP) else self.node((side, e.target))
                self.edges.append(Edge(name, e.action, e.guard, e.resets, tgt))

    def _pair(self, key):
        _, l0, l1 = key
        name = self.names[key]
        loc0, loc1 = self.left.locations[l0], self.right.locations[l1]
        n0 = len(loc0.parts)
        loc = Location(name, loc0.parts + loc1.parts)
        entries = []
        for combo in loc.combos():
            r0, r1 = loc0.target_for(combo[:n0]), loc1.target_for(combo[n0:])
            next0 = l0 if r0 in (STAY, BOT, TOP) else r0
            next1 = l1 if r1 in (STAY, BOT, TOP) else r1
            res = combine(self.op, _class(r0), _class(r1))
            if res == PAIR and r0 == STAY and r1 == STAY:
                target = STAY
            else:
                target = self.target(res, next0, next1)
            if target != loc.target_for(combo):
                entries.append((combo, target))
        self.locations[name] = Location(name, loc.parts, tuple(entries) or None)
        for action in sorted(self.inputs | self.outputs):
            self._pair_edges(name, l0, l1, action)

    def _moves(self, a: TIOA, loc: str, action: str, moves: bool):
        if not moves:
            return [Edge(loc, action, cc.TRUE, frozenset(), loc)]
        return a.completed_edges(loc, action)

    def _pair_edges(self, name, l0, l1, action):
        in0 = action in self.left.alphabet
        in1 = action in self.right.alphabet
        if in0 and in1 and action not in self.sync:
            raise OperatorError(f"action {action} shared but not synchronised")
        for e0 in self._moves(self.left, l0, action, in0):
            for e1 in self._moves(self.right, l1, action, in1):
                guard = cc.conj(e0.guard, e1.guard)
                if not _satisfiable(guard, self.clocks):
                    continue
                resets = e0.resets | e1.resets
                t0, t1 = e0.target, e1.target
                sink0, sink1 = t0 in (BOT, TOP), t1 in (BOT, TOP)
                if not sink0 and not sink1:
                    self._emit(name, action, guard, resets, self.node((PAIR, t0, t1)))
                elif sink0 and sink1:
                    res = combine(self.op, t0, t1)
                    if res not in (BOT, TOP):
                        raise OperatorError(f"{self.op}: sinks {t0}/{t1} must combine to a sink")
                    self._emit(name, action, guard, resets, res)
                elif sink0:
                    for outcome, con in self._classes(self.right, t1, e1.resets, in1):
                        c1 = outcome if outcome in (BOT, TOP) else PLAIN
                        nxt = outcome[1] if c1 == PLAIN else t1
                        res = combine(self.op, t0, c1)
                        self._emit(name, action, cc.conj(guard, con), resets, self.target(res, l0, nxt))
                else:
                    for outcome, con in self._classes(self.left, t0, e0.resets, in0):
                        c0 = outcome if outcome in (BOT, TOP) else PLAIN
                        nxt = outcome[1] if c0 == PLAIN else t0
                        res = combine(self.op, c0, t1)
                        self._emit(name, action, cc.conj(guard, con), resets, self.target(res, nxt, l1))

    @staticmethod
    def _classes(a, loc, resets, moved):
        if not moved:
            return [((PLAIN, loc), cc.TRUE)]
        return settle_classes(a, loc, resets)

    def _emit(self, source, action, guard, resets, target):
        if _satisfiable(guard, self.clocks):
            self.edges.append(Edge(source, action, guard, frozenset(resets), target))


# -- public operators ---------------------------------------------------------

def _same_alphabet(a0: TIOA, a1: TIOA, what: str):
    if a0.inputs != a1.inputs or a0.outputs != a1.outputs:
        raise OperatorError(
            f"{what} needs identical alphabets: {a0.name} has I={sorted(a0.inputs)} O={sorted(a0.outputs)}, "
            f"{a1.name} has I={sorted(a1.inputs)} O={sorted(a1.outputs)}"
        )


def compose_parallel(a0: TIOA, a1: TIOA) -> TIOA:
    clash = a0.outputs & a1.outputs
    if clash:
        raise OperatorError(f"not composable: both control outputs {sorted(clash)}")
    outputs = a0.outputs | a1.outputs
    inputs = (a0.inputs | a1.inputs) - outputs
    sync = a0.alphabet & a1.alphabet
    return _Product(a0, a1, "par", f"{a0.name}_par_{a1.name}", inputs, outputs, sync).build()


def compose_conjunction(a0: TIOA, a1: TIOA) -> TIOA:
    _same_alphabet(a0, a1, "conjunction")
    return _Product(a0, a1, "and", f"{a0.name}_and_{a1.name}", a0.inputs, a0.outputs, a0.alphabet).build()


def compose_disjunction(a0: TIOA, a1: TIOA) -> TIOA:
    _same_alphabet(a0, a1, "disjunction")
    return _Product(a0, a1, "or", f"{a0.name}_or_{a1.name}", a0.inputs, a0.outputs, a0.alphabet).build()


def compose_quotient(a0: TIOA, a1: TIOA) -> TIOA:
    if not a1.alphabet <= a0.alphabet or not a1.outputs <= a0.outputs:
        raise OperatorError(f"{a0.name} does not dominate {a1.name} (need A1 ⊆ A0 and O1 ⊆ O0)")
    det, witness = check_deterministic(a1)
    if not det:
        raise OperatorError(f"quotient divisor {a1.name} is nondeterministic: {witness}")
    inputs = a0.inputs | a1.outputs
    outputs = a0.outputs - a1.outputs
    return _Product(a0, a1, "quot", f"{a0.name}_quot_{a1.name}", inputs, outputs, a1.alphabet).build()


def refinement_product(spec: TIOA, imp: TIOA) -> TIOA:
    """Product whose ``BOT`` states are exactly the refinement violations."""
    _same_alphabet(spec, imp, "refinement")
    return _Product(imp, spec, "ref", f"{imp.name}_ref_{spec.name}", imp.inputs, imp.outputs, imp.alphabet).build()


COMPOSERS = {
    "par": compose_parallel,
    "and": compose_conjunction,
    "or": compose_disjunction,
    "quot": compose_quotient,
}


def compose(op: str, a0: TIOA, a1: TIOA) -> TIOA:
    try:
        return COMPOSERS[op](a0, a1)
    except KeyError:
        raise OperatorError(f"unknown operator {op!r}; choose from {sorted(COMPOSERS)}") from None


def _swap(target: str) -> str:
    return {BOT: TOP, TOP: BOT}.get(target, target)


def mirror(a: TIOA, check: bool = True) -> TIOA:
    """Swap inputs with outputs and the roles of ``BOT`` and ``TOP``."""
    if check:
        det, witness = check_deterministic(a)
        if not det:
            raise OperatorError(f"mirror needs a deterministic automaton: {witness}")
    locations = {}
    for name, loc in a.locations.items():
        entries = []
        plain = Location(name, loc.parts)
        for combo in loc.combos():
            t = _swap(loc.target_for(combo))
            if t != plain.target_for(combo):
                entries.append((combo, t))
        locations[name] = Location(name, loc.parts, tuple(entries) or None)
    edges = tuple(Edge(e.source, e.action, e.guard, e.resets, _swap(e.target)) for e in a.edges)
    if a.name.endswith("_mirror"):
        new_name = a.name[: -len("_mirror")]
    else:
        new_name = a.name + "_mirror"
    return TIOA(new_name, a.clocks, a.outputs, a.inputs, locations, a.initial, edges)


def quotient_via_mirror(a0: TIOA, a1: TIOA) -> TIOA:
    """Derived quotient: mirror of (mirror(a0) ∥ a1)."""
    if not a1.alphabet <= a0.alphabet or not a1.outputs <= a0.outputs:
        raise OperatorError(f"{a0.name} does not dominate {a1.name} (need A1 ⊆ A0 and O1 ⊆ O0)")
    inner = compose_parallel(mirror(a0), a1)
    return mirror(inner)


def check_deterministic(a: TIOA) -> tuple[bool, dict | None]:
    """Check that same-action edges from a location have disjoint guards.

    Returns ``(True, None)`` or ``(False, witness)`` where the witness names
    the location, the action, both targets and a valuation enabling both.
    """
    for loc in a.locations:
        for action in sorted(a.alphabet):
            es = a.edges_from(loc, action)
            for i in range(len(es)):
                zi = zones_of(es[i].guard, a.clocks)
                for j in range(i + 1, len(es)):
                    for z1 in zi:
                        for z2 in zones_of(es[j].guard, a.clocks):
                            both = z1.conjoin(z2)
                            if not both.empty:
                                return False, {
                                    "location": loc,
                                    "action": action,
                                    "targets": [es[i].target, es[j].target],
                                    "valuation": {k: str(v) for k, v in both.sample().items()},
                                }
    return True, None
