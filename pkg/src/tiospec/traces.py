"""Triple-trace structures over a bounded word universe, and operators on them.

The universe of a structure holds every canonical word over its alphabet with
at most ``depth`` actions, total duration at most ``horizon`` and delays that
are multiples of ``delta``.  Prefixes are taken on the same grid, so
``<2>`` is a prefix of ``<3>`` when ``delta = 1``.  Closure under arbitrary
extension (``·tA*``) and under time extension (``·R>=0``) is computed
relative to that universe.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from fractions import Fraction
from typing import Callable, Iterator

from . import words as W
from .tioa import BOT, TOP


class BoundMismatch(ValueError):
    pass


@dataclass(frozen=True)
class TripleTraceStructure:
    inputs: frozenset
    outputs: frozenset
    delta: Fraction
    depth: int
    horizon: int
    tt: frozenset
    tr: frozenset
    te: frozenset

    @property
    def alphabet(self) -> frozenset:
        return self.inputs | self.outputs

    @cached_property
    def tp(self) -> frozenset:
        return self.tr - self.te

    @cached_property
    def tm(self) -> frozenset:
        return self.tt - self.tr

    def bounds(self) -> tuple:
        return (Fraction(self.delta), self.depth, self.horizon)

    def universe(self) -> Iterator[tuple]:
        return universe(self.alphabet, self.delta, self.depth, self.horizon)

    def to_json(self) -> dict:
        def dump(ws):
            return [W.to_json(w) for w in sorted(ws, key=_order)]

        return {
            "alphabet": {"inputs": sorted(self.inputs), "outputs": sorted(self.outputs)},
            "delta": _num(self.delta),
            "depth": self.depth,
            "horizon": self.horizon,
            "tt": dump(self.tt),
            "tr": dump(self.tr),
            "te": dump(self.te),
        }

    @classmethod
    def from_json(cls, data) -> "TripleTraceStructure":
        if isinstance(data, str):
            data = json.loads(data)
        load = lambda key: frozenset(W.from_json(w) for w in data[key])  # noqa: E731
        return cls(
            frozenset(data["alphabet"]["inputs"]),
            frozenset(data["alphabet"]["outputs"]),
            Fraction(str(data["delta"])),
            data["depth"],
            data["horizon"],
            load("tt"),
            load("tr"),
            load("te"),
        )


JSON_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["alphabet", "delta", "depth", "horizon", "tt", "tr", "te"],
    "properties": {
        "alphabet": {
            "type": "object",
            "required": ["inputs", "outputs"],
            "properties": {
                "inputs": {"type": "array", "items": {"type": "string"}},
                "outputs": {"type": "array", "items": {"type": "string"}},
            },
        },
        "delta": {"type": ["number", "string"]},
        "depth": {"type": "integer", "minimum": 0},
        "horizon": {"type": "integer", "minimum": 0},
        "tt": {"$ref": "#/$defs/words"},
        "tr": {"$ref": "#/$defs/words"},
        "te": {"$ref": "#/$defs/words"},
    },
    "$defs": {
        "words": {
            "type": "array",
            "items": {"type": "array", "items": {"type": ["string", "number"]}},
        }
    },
}


def _num(x: Fraction):
    x = Fraction(x)
    return int(x) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _order(w):
    return (W.action_count(w), len(w), [str(s) for s in w])


# -- universe and prefixes ----------------------------------------------------

def universe(alphabet, delta, depth: int, horizon) -> Iterator[tuple]:
    """All words of the bounded universe, parents before children."""
    delta = Fraction(delta)
    acts = sorted(alphabet)
    stack = [((), 0, Fraction(0))]
    while stack:
        w, k, t = stack.pop()
        yield w
        if t + delta <= horizon:
            stack.append((W.concat(w, (delta,)), k, t + delta))
        if k < depth:
            for a in reversed(acts):
                stack.append((w + (a,), k + 1, t))


def parent(w, delta):
    """The longest strict grid prefix, or None for the empty word."""
    if not w:
        return None
    last = w[-1]
    if isinstance(last, str) or last <= delta:
        return w[:-1]
    return w[:-1] + (last - delta,)


def grid_prefixes(w, delta, strict: bool = True) -> list[tuple]:
    """Grid prefixes of ``w`` from the empty word upwards."""
    out = []
    cur = w
    while cur is not None:
        out.append(cur)
        cur = parent(cur, delta)
    out.reverse()
    return out[:-1] if strict else out


def _time_suffix_from(w, delta, pred: Callable) -> bool:
    """Does ``w`` equal ``u`` followed only by delay, with ``pred(u)``?"""
    if pred(w):
        return True
    if not w or isinstance(w[-1], str):
        return False
    base, d = w[:-1], w[-1]
    steps = int(d / delta)
    for j in range(steps):
        if pred(W.concat(base, (j * delta,))):
            return True
    return False


def _check_bounds(*ts):
    first = ts[0].bounds()
    for t in ts[1:]:
        if t.bounds() != first:
            raise BoundMismatch(f"trace structures use different bounds: {first} vs {t.bounds()}")


# -- extraction ---------------------------------------------------------------

def extract_triple_traces(d, depth: int, horizon: int | None = None) -> TripleTraceStructure:
    """Unfold a digitized system into its bounded triple-trace structure."""
    from .oracle import DELAY

    horizon = d.horizon if horizon is None else horizon
    delta = d.delta
    acts = sorted(d.alphabet)
    tt, tr, te = set(), set(), set()
    memo: dict = {}

    def post(subset, lab):
        key = (subset, lab)
        if key not in memo:
            memo[key] = d.post(subset, lab)
        return memo[key]

    stack = [((), frozenset({d.initial}), 0, Fraction(0))]
    while stack:
        w, subset, k, t = stack.pop()
        kinds = {d.kind(i) for i in subset}
        tt.add(w)
        if BOT in kinds:
            tr.add(w)
            te.add(w)
        elif "plain" in kinds:
            tr.add(w)
        if t + delta <= horizon:
            nxt = post(subset, DELAY)
            if nxt:
                stack.append((W.concat(w, (delta,)), nxt, k, t + delta))
        if k < depth:
            for a in acts:
                nxt = post(subset, a)
                if nxt:
                    stack.append((w + (a,), nxt, k + 1, t))
    return TripleTraceStructure(d.inputs, d.outputs, delta, depth, horizon, frozenset(tt), frozenset(tr), frozenset(te))


# -- structural predicates ----------------------------------------------------

def structural_report(t: TripleTraceStructure) -> dict:
    """Check the closure properties every trace structure must have.

    Returns ``{name: (ok, counterexample word or None)}``.
    """
    delta, depth, horizon = t.bounds()
    acts = sorted(t.alphabet)

    def extensions(w):
        out = []
        if W.action_count(w) < depth:
            out += [w + (a,) for a in acts]
        if W.duration(w) + delta <= horizon:
            out.append(W.concat(w, (delta,)))
        return out

    def first(pred, pool):
        for w in sorted(pool, key=_order):
            if not pred(w):
                return False, w
        return True, None

    tm = t.tm
    report = {
        "tt_nonempty": (bool(t.tt), None),
        "te_extension_closed": first(lambda w: all(x in t.te for x in extensions(w)), t.te),
        "tt_prefix_closed": first(lambda w: not w or parent(w, delta) in t.tt, t.tt),
        "tr_prefix_closed": first(lambda w: not w or parent(w, delta) in t.tr, t.tr),
        "te_within_tr": first(lambda w: w in t.tr, t.te),
        "tr_within_tt": first(lambda w: w in t.tt, t.tr),
        "tr_fully_branching": first(lambda w: all(x in t.tt for x in extensions(w)), t.tr),
        "tm_time_extension_closed": first(
            lambda w: W.duration(w) + delta > horizon or W.concat(w, (delta,)) in tm, tm
        ),
        "tm_extension_is_time_extension": first(lambda w: _tm_chain_ok(w, tm, delta), tm),
    }
    return report


def _tm_chain_ok(w, tm, delta) -> bool:
    prefixes = [p for p in grid_prefixes(w, delta) if p in tm]
    if not prefixes:
        return True
    shortest = prefixes[0]
    return all(not isinstance(s, str) for s in w[len(shortest):]) and W.actions(w) == W.actions(shortest)


def structure_ok(t: TripleTraceStructure) -> bool:
    return all(ok for ok, _ in structural_report(t).values())


# -- refinement ---------------------------------------------------------------

def tt_refines(t_spec: TripleTraceStructure, t_imp: TripleTraceStructure):
    """Containment of the implementation's three sets in the specification's.

    Returns ``(True, None)`` or ``(False, (set name, shortest offending word))``.
    """
    _check_bounds(t_spec, t_imp)
    if t_spec.inputs != t_imp.inputs or t_spec.outputs != t_imp.outputs:
        raise BoundMismatch("refinement needs identical alphabets")
    for name in ("te", "tr", "tt"):
        extra = getattr(t_imp, name) - getattr(t_spec, name)
        if extra:
            return False, (name.upper(), min(extra, key=_order))
    return True, None


# -- operators ----------------------------------------------------------------

class _Eval:
    """Evaluate a formula over a universe with extension closures."""

    def __init__(self, alphabet, delta, depth, horizon):
        self.alphabet = alphabet
        self.delta, self.depth, self.horizon = Fraction(delta), depth, horizon
        self.words = list(universe(alphabet, delta, depth, horizon))

    def strict_prefixes(self, w):
        return grid_prefixes(w, self.delta)

    def ext_closure(self, base: set) -> set:
        """Words of the universe with some prefix (or themselves) in ``base``."""
        out = set()
        for w in self.words:
            if w in base:
                out.add(w)
                continue
            p = parent(w, self.delta)
            if p is not None and p in out:
                out.add(w)
        return out

    def time_closure(self, base: set) -> set:
        return {w for w in self.words if _time_suffix_from(w, self.delta, base.__contains__)}

    def magic_closure(self, base: set, normalize: bool) -> set:
        """Time closure of ``base``; normalized, only its minimal words seed it.

        Magic traces may only be extended by time, so a word of ``base``
        that extends another one by an action is dropped.
        """
        if normalize:
            base = {w for w in base if not any(q in base for q in grid_prefixes(w, self.delta))}
        return self.time_closure(base)


def _structure(inputs, outputs, ev: _Eval, tt, tr, te) -> TripleTraceStructure:
    return TripleTraceStructure(
        frozenset(inputs), frozenset(outputs), ev.delta, ev.depth, ev.horizon,
        frozenset(tt), frozenset(tr), frozenset(te),
    )


def tt_parallel(t0: TripleTraceStructure, t1: TripleTraceStructure, normalize: bool = True) -> TripleTraceStructure:
    _check_bounds(t0, t1)
    if t0.outputs & t1.outputs:
        raise BoundMismatch(f"not composable: shared outputs {sorted(t0.outputs & t1.outputs)}")
    outputs = t0.outputs | t1.outputs
    inputs = (t0.inputs | t1.inputs) - outputs
    delta, depth, horizon = t0.bounds()
    ev = _Eval(inputs | outputs, delta, depth, horizon)
    ts = (t0, t1)
    alph = (t0.alphabet, t1.alphabet)

    te_base, plain, tm_base = set(), set(), set()
    for w in ev.words:
        p = (W.project(w, alph[0]), W.project(w, alph[1]))
        for i in (0, 1):
            j = 1 - i
            if p[i] in ts[i].te and p[j] in ts[j].tr:
                te_base.add(w)
            if p[i] in ts[i].tm and all(q in ts[j].tp for q in grid_prefixes(p[j], delta)):
                tm_base.add(w)
        if p[0] in ts[0].tp and p[1] in ts[1].tp:
            plain.add(w)
    te = ev.ext_closure(te_base)
    tr = te | plain
    tt = tr | ev.magic_closure(tm_base, normalize)
    return _structure(inputs, outputs, ev, tt, tr, te)


def _same_alphabet(t0, t1):
    _check_bounds(t0, t1)
    if t0.inputs != t1.inputs or t0.outputs != t1.outputs:
        raise BoundMismatch("operator needs identical alphabets")


def tt_disjunction(t0: TripleTraceStructure, t1: TripleTraceStructure, normalize: bool = True) -> TripleTraceStructure:
    _same_alphabet(t0, t1)
    delta, depth, horizon = t0.bounds()
    ev = _Eval(t0.alphabet, delta, depth, horizon)
    ts = (t0, t1)
    tm_base = set()
    for i in (0, 1):
        other = ts[1 - i].tm
        for w in ts[i].tm:
            if any(q in other for q in grid_prefixes(w, delta, strict=False)):
                tm_base.add(w)
    tr = t0.tr | t1.tr
    tt = tr | ev.magic_closure(tm_base, normalize)
    return _structure(t0.inputs, t0.outputs, ev, tt, tr, t0.te | t1.te)


def tt_conjunction(t0: TripleTraceStructure, t1: TripleTraceStructure, normalize: bool = True) -> TripleTraceStructure:
    _same_alphabet(t0, t1)
    delta, depth, horizon = t0.bounds()
    ev = _Eval(t0.alphabet, delta, depth, horizon)
    ts = (t0, t1)
    tm_base = set()
    for i in (0, 1):
        other = ts[1 - i].tr
        for w in ts[i].tm:
            if all(q in other for q in grid_prefixes(w, delta)):
                tm_base.add(w)
    tr = t0.tr & t1.tr
    tt = tr | ev.magic_closure(tm_base, normalize)
    return _structure(t0.inputs, t0.outputs, ev, tt, tr, t0.te & t1.te)


def tt_quotient(t0: TripleTraceStructure, t1: TripleTraceStructure, normalize: bool = True) -> TripleTraceStructure:
    """Quotient on trace sets.

    With ``normalize=False`` the clauses are taken literally.  Normalized,
    the magic clause is reduced to its minimal words and closed under time
    extension, like the other operators.
    """
    _check_bounds(t0, t1)
    if not t1.alphabet <= t0.alphabet or not t1.outputs <= t0.outputs:
        raise BoundMismatch("quotient needs the dividend to dominate the divisor")
    inputs = t0.inputs | t1.outputs
    outputs = t0.outputs - t1.outputs
    delta, depth, horizon = t0.bounds()
    ev = _Eval(inputs | outputs, delta, depth, horizon)
    a1 = t1.alphabet
    tm0, tm1 = t0.tm, t1.tm

    te_base, plain, magic = set(), set(), set()
    for w in ev.words:
        p1 = W.project(w, a1)
        strict = grid_prefixes(w, delta)
        if w in t0.te and all(W.project(q, a1) not in t1.te for q in strict):
            te_base.add(w)
        elif p1 in tm1 and all(q not in tm0 for q in strict):
            te_base.add(w)
        if w in t0.tp and p1 in t1.tp:
            plain.add(w)
        upto = strict + [w]
        if w in tm0 and all(W.project(q, a1) in t1.tr for q in upto):
            magic.add(w)
        elif p1 in t1.te and all(q not in t0.te for q in upto):
            magic.add(w)
    te = ev.ext_closure(te_base)
    tr = te | plain
    if normalize:
        magic = ev.magic_closure(magic, True)
    tt = tr | magic
    return _structure(inputs, outputs, ev, tt, tr, te)


def tt_mirror(t: TripleTraceStructure, normalize: bool = True) -> TripleTraceStructure:
    """Swap inputs and outputs, errors and magic.

    The literal form is ``(TT, TT minus TE, TT minus TR)``.  ``normalize``
    restores the closure properties: a magic trace turned error is closed
    under all extensions, and an error trace turned magic keeps only its
    time extensions.
    """
    if not normalize:
        return TripleTraceStructure(
            t.outputs, t.inputs, t.delta, t.depth, t.horizon, t.tt, t.tt - t.te, t.tt - t.tr
        )
    delta, depth, horizon = t.bounds()
    ev = _Eval(t.alphabet, delta, depth, horizon)
    te = ev.ext_closure(set(t.tm))
    minimal = {w for w in t.te if not any(q in t.te for q in grid_prefixes(w, delta))}
    tm = ev.time_closure(minimal)
    tr = t.tp | te
    tt = tr | tm
    return _structure(t.outputs, t.inputs, ev, tt, tr, te)


def tt_quotient_derived(t0: TripleTraceStructure, t1: TripleTraceStructure) -> TripleTraceStructure:
    """Quotient through mirrors: mirror(mirror(t0) ∥ t1)."""
    if not t1.alphabet <= t0.alphabet or not t1.outputs <= t0.outputs:
        raise BoundMismatch("quotient needs the dividend to dominate the divisor")
    return tt_mirror(tt_parallel(tt_mirror(t0), t1))


def words_of(t: TripleTraceStructure, which: str) -> list:
    return sorted(getattr(t, which), key=_order)


__all__ = [
    "TripleTraceStructure", "BoundMismatch", "JSON_SCHEMA", "universe", "parent", "grid_prefixes",
    "extract_triple_traces", "structural_report", "structure_ok", "tt_refines", "tt_parallel",
    "tt_disjunction", "tt_conjunction", "tt_quotient", "tt_mirror", "tt_quotient_derived", "BOT", "TOP",
]
