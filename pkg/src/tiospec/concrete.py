"""Point semantics: single valuations, exact rational arithmetic.

States are ``BOT``, ``TOP`` or ``(location, values)`` with ``values`` a tuple of
``Fraction`` aligned with ``automaton.clocks``.  Delays are evaluated exactly
by sampling every instant at which some clock crosses an integer plus one
point inside each open interval between such instants; all constants are
integers, so every constraint is constant on those intervals.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Sequence

from . import constraints as cc
from .constraints import And, Atom, Const, Not, Or
from .tioa import BOT, STAY, TOP, TIOA, ModelError

ZERO = Fraction(0)


def _cmp(op):
    return {
        "<=": lambda d, c: d <= c,
        "<": lambda d, c: d < c,
        "==": lambda d, c: d == c,
        ">": lambda d, c: d > c,
        ">=": lambda d, c: d >= c,
    }[op]


@lru_cache(maxsize=None)
def compile_constraint(con, clocks: tuple) -> Callable[[Sequence[Fraction]], bool]:
    """Turn a constraint into a predicate over value tuples."""
    if isinstance(con, Const):
        v = con.value
        return lambda vals: v
    if isinstance(con, Atom):
        i = clocks.index(con.x)
        f, c = _cmp(con.op), con.c
        if con.y is None:
            return lambda vals: f(vals[i], c)
        j = clocks.index(con.y)
        return lambda vals: f(vals[i] - vals[j], c)
    if isinstance(con, Not):
        inner = compile_constraint(con.item, clocks)
        return lambda vals: not inner(vals)
    parts = [compile_constraint(it, clocks) for it in con.items]
    if isinstance(con, And):
        return lambda vals: all(p(vals) for p in parts)
    return lambda vals: any(p(vals) for p in parts)


def holds(a: TIOA, con, vals) -> bool:
    return compile_constraint(con, a.clocks)(vals)


def combo_at(a: TIOA, loc_name: str, vals) -> str:
    out = []
    for part in a.locations[loc_name].parts:
        if not holds(a, part.inv, vals):
            out.append("T")
        elif not holds(a, part.coinv, vals):
            out.append("B")
        else:
            out.append("P")
    return "".join(out)


def settle(a: TIOA, loc_name: str, vals, _depth: int = 0):
    """State reached when the automaton sits in ``loc_name`` at ``vals``."""
    if loc_name in (BOT, TOP):
        return loc_name
    if _depth > len(a.locations) + 1:
        raise ModelError(f"resolve tables of {a.name} cycle at {loc_name}")
    target = a.locations[loc_name].target_for(combo_at(a, loc_name, vals))
    if target == STAY:
        return (loc_name, tuple(vals))
    return settle(a, target, vals, _depth + 1)


def initial(a: TIOA):
    return settle(a, a.initial, tuple(ZERO for _ in a.clocks))


def reset(a: TIOA, vals, resets) -> tuple:
    return tuple(ZERO if c in resets else v for c, v in zip(a.clocks, vals))


def step_action(a: TIOA, state, action: str) -> list:
    """Successors under ``action`` in the completed view (possibly several)."""
    if action not in a.alphabet:
        raise ModelError(f"action {action!r} not in alphabet of {a.name}")
    if state == BOT:
        return [BOT]
    if state == TOP:
        return []
    loc, vals = state
    out = []
    for e in a.completed_edges(loc, action):
        if not holds(a, e.guard, vals):
            continue
        if e.target in (BOT, TOP):
            s = e.target
        else:
            s = settle(a, e.target, reset(a, vals, e.resets))
        if s not in out:
            out.append(s)
    return out


def _sample_offsets(vals, d: Fraction) -> list[Fraction]:
    crossings = set()
    for v in vals:
        k = math.floor(v) + 1
        while k - v <= d:
            crossings.add(k - v)
            k += 1
    crossings.add(d)
    points = sorted(crossings)
    out = []
    prev = ZERO
    for p in points:
        out.append((prev + p) / 2)
        out.append(p)
        prev = p
    return out


def step_delay(a: TIOA, state, d: Fraction):
    """Unique successor after letting ``d > 0`` time units elapse."""
    if d <= 0:
        raise ValueError("delays must be positive")
    if state in (BOT, TOP):
        return state
    loc, vals = state
    for off in _sample_offsets(vals, Fraction(d)):
        here = tuple(v + off for v in vals)
        target = a.locations[loc].target_for(combo_at(a, loc, here))
        if target == STAY:
            continue
        nxt = settle(a, target, here)
        if nxt in (BOT, TOP):
            return nxt
        loc = nxt[0]
    return (loc, tuple(v + d for v in vals))


def run_word(a: TIOA, word, start=None) -> list:
    """All states reachable by reading a timed word (numbers are delays)."""
    states = [initial(a) if start is None else start]
    for sym in word:
        nxt = []
        for s in states:
            if isinstance(sym, str):
                succ = step_action(a, s, sym)
            else:
                succ = [step_delay(a, s, Fraction(sym))]
            for t in succ:
                if t not in nxt:
                    nxt.append(t)
        states = nxt
    return states
