"""Symbolic semantics: timed transition systems over (location, zone) states.

Successor functions work on the completed view: a disabled input leads to
``BOT`` and a disabled output or delay leads to ``TOP``.  Zones may carry
clocks beyond the automaton's own (the analysis adds a global clock for
horizon-bounded runs); extra clocks are never reset or constrained here.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

from . import constraints as cc
from .dbm import Zone, federation_minus
from .tioa import BOT, STATUSES, STAY, TOP, TIOA, ModelError


@dataclass(frozen=True)
class Plain:
    location: str
    zone: Zone

    def __repr__(self):
        return f"Plain({self.location}, {self.zone.to_text()})"


def describe(state) -> str:
    if state in (BOT, TOP):
        return "⊥" if state == BOT else "⊤"
    return f"({state.location}, {state.zone.to_text()})"


@lru_cache(maxsize=200_000)
def zones_of(con, clocks: tuple) -> tuple:
    return tuple(cc.to_zones(con, clocks))


def _restrict(zone: Zone, con) -> list[Zone]:
    out = []
    for z in zones_of(con, zone.clocks):
        piece = zone.conjoin(z)
        if not piece.empty:
            out.append(piece)
    return out


def _order_le(a: str, b: str) -> bool:
    return all(STATUSES.index(x) <= STATUSES.index(y) for x, y in zip(a, b))


def settle_zone(a: TIOA, loc_name: str, zone: Zone, _depth: int = 0) -> list[tuple]:
    """Split ``zone`` (valuations arriving in ``loc_name``) by where they land.

    Returns ``(state, subzone)`` pairs; subzones partition ``zone``.
    """
    if loc_name in (BOT, TOP):
        return [(loc_name, zone)]
    if _depth > len(a.locations) + 1:
        raise ModelError(f"resolve tables of {a.name} cycle at {loc_name}")
    loc = a.locations[loc_name]
    out = []
    for combo in loc.combos():
        for piece in _restrict(zone, loc.combo_constraint(combo)):
            target = loc.target_for(combo)
            if target == STAY:
                out.append((Plain(loc_name, piece), piece))
            else:
                out.extend(settle_zone(a, target, piece, _depth + 1))
    return out


def init_state(a: TIOA, clocks: tuple | None = None):
    """Initial symbolic state: ``TOP``, ``BOT`` or the zero valuation at l0."""
    clocks = a.clocks if clocks is None else clocks
    settled = settle_zone(a, a.initial, Zone.zero(clocks))
    return settled[0][0]


def succ_action(a: TIOA, state, action: str, with_resets: bool = False) -> list[tuple]:
    """``(successor, guard zone)`` pairs for ``action``.

    The guard zones partition the valuations of ``state``.  With
    ``with_resets`` each pair also carries the reset set of its edge.
    """
    if action not in a.alphabet:
        raise ModelError(f"action {action!r} not in alphabet of {a.name}")
    if state == BOT:
        return [(BOT, None, frozenset())] if with_resets else [(BOT, None)]
    if state == TOP:
        return []
    out = []
    for e in a.completed_edges(state.location, action):
        for piece in _restrict(state.zone, e.guard):
            if e.target in (BOT, TOP):
                out.append((e.target, piece, e.resets) if with_resets else (e.target, piece))
                continue
            moved = piece.reset(e.resets)
            for succ, sub in settle_zone(a, e.target, moved):
                guard = piece.conjoin(sub.free(e.resets)) if e.resets else sub
                out.append((succ, guard, e.resets) if with_resets else (succ, guard))
    return out


def succ_delay(a: TIOA, state) -> list[tuple]:
    """Delay successors ``(state, region)`` of a plain state.

    Regions are subsets of the future of the state's zone.  The plain part is
    the future intersected with the location's plain constraint.  Every other
    valuation is assigned by the first non-plain status combination met on
    its delay ray; the location's resolve table decides where that goes.
    """
    if state in (BOT, TOP):
        return [(state, None)]
    loc = a.locations[state.location]
    fut = state.zone.future()
    out = []
    for piece in _restrict(fut, loc.plain_constraint()):
        out.append((Plain(loc.name, piece), piece))
    visited: dict[str, list[Zone]] = {}
    for combo in loc.combos():
        if set(combo) == {"P"}:
            continue
        pieces = [p.future() for p in _restrict(fut, loc.combo_constraint(combo))]
        if pieces:
            visited[combo] = pieces
    for combo, pieces in visited.items():
        earlier = [z for c2, zs in visited.items() if c2 != combo and _order_le(c2, combo) for z in zs]
        first = federation_minus(pieces, earlier)
        target = loc.target_for(combo)
        for w in first:
            if target in (BOT, TOP):
                out.append((target, w))
                continue
            if target == STAY:
                raise ModelError(f"{a.name}: non-plain combo {combo} of {loc.name} cannot stay")
            cont = a.locations[target]
            for p in _restrict(w, cont.plain_constraint()):
                out.append((Plain(target, p), p))
    return out


def delay_closure(a: TIOA, state) -> list:
    """Plain states reachable by delays (following continuations)."""
    seen, todo, out = set(), [state], []
    while todo:
        s = todo.pop()
        if s in (BOT, TOP) or s in seen:
            continue
        seen.add(s)
        out.append(s)
        for succ, _ in succ_delay(a, s):
            if isinstance(succ, Plain) and succ not in seen:
                if succ.location == s.location and s.zone.includes(succ.zone) and succ.zone.includes(s.zone):
                    continue
                todo.append(succ)
    return out


def is_semi_top(a: TIOA, state) -> bool:
    """Plain state from which only environment inputs can avert a timestop.

    (1) outputs enabled now or after any delay lead to ``TOP`` only, and
    (2) some delay leads to ``TOP``.
    """
    if not isinstance(state, Plain):
        raise ModelError("is_semi_top expects a plain state")
    closure = delay_closure(a, state)
    for s in closure:
        for out_action in sorted(a.outputs):
            for e in a.edges_from(s.location, out_action):
                for piece in _restrict(s.zone, e.guard):
                    if e.target == TOP:
                        continue
                    if e.target == BOT:
                        return False
                    for succ, _ in settle_zone(a, e.target, piece.reset(e.resets)):
                        if succ != TOP:
                            return False
    return any(succ == TOP for s in closure for succ, _ in succ_delay(a, s))


def successors(a: TIOA, state) -> Iterable[tuple]:
    """Labelled successors used by explorers: ``(label, state, guard)``.

    ``label`` is an action name or ``None`` for a delay.
    """
    for succ, region in succ_delay(a, state):
        yield None, succ, region
    if isinstance(state, Plain):
        for action in sorted(a.alphabet):
            for succ, guard in succ_action(a, state, action):
                yield action, succ, guard
