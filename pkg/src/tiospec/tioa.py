"""Timed I/O automata.

Besides plain TIOAs, this module describes the automata produced by the
composition operators.  Those need two extras:

* edges may target the sinks ``BOT`` (inconsistent) and ``TOP`` (timestop);
* a location may carry several ``(inv, coinv)`` parts, one per operand, plus a
  ``resolve`` table deciding where the system goes once some part stops being
  plain.  Each part has a status ``P`` (plain: inv and coinv hold), ``B``
  (inv holds, coinv fails: time-out) or ``T`` (inv fails).  A *combo* is the
  string of part statuses, e.g. ``"PB"``.

A plain TIOA location has one part and the default table: ``P`` stays, ``B``
goes to ``BOT`` and ``T`` goes to ``TOP``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from . import constraints as cc
from .constraints import Constraint, TRUE
from .dbm import LE_ZERO, Zone, federation_minus

BOT = "BOT"
TOP = "TOP"
STAY = "STAY"
SINKS = (BOT, TOP)
STATUSES = "PBT"


class ModelError(ValueError):
    pass


@dataclass(frozen=True)
class Part:
    inv: Constraint = TRUE
    coinv: Constraint = TRUE

    def status_constraint(self, status: str) -> Constraint:
        if status == "P":
            return cc.conj(self.inv, self.coinv)
        if status == "B":
            return cc.conj(self.inv, cc.neg(self.coinv))
        return cc.neg(self.inv)


@dataclass(frozen=True)
class Location:
    name: str
    parts: tuple = (Part(),)
    # ((combo, target), ...); None selects the default table
    resolve: tuple | None = None

    @property
    def inv(self) -> Constraint:
        return cc.conj(*(p.inv for p in self.parts))

    @property
    def coinv(self) -> Constraint:
        return cc.conj(*(p.coinv for p in self.parts))

    def target_for(self, combo: str) -> str:
        if self.resolve is not None:
            for key, target in self.resolve:
                if key == combo:
                    return target
        if all(s == "P" for s in combo):
            return STAY
        return TOP if "T" in combo else BOT

    def combos(self) -> Iterable[str]:
        for tup in itertools.product(STATUSES, repeat=len(self.parts)):
            yield "".join(tup)

    def combo_constraint(self, combo: str) -> Constraint:
        return cc.conj(*(p.status_constraint(s) for p, s in zip(self.parts, combo)))

    def plain_constraint(self) -> Constraint:
        return self.combo_constraint("P" * len(self.parts))

    def has_default_resolve(self) -> bool:
        return all(self.target_for(c) == _default_target(c) for c in self.combos())


def _default_target(combo: str) -> str:
    if all(s == "P" for s in combo):
        return STAY
    return TOP if "T" in combo else BOT


@dataclass(frozen=True)
class Edge:
    source: str
    action: str
    guard: Constraint
    resets: frozenset
    target: str


@dataclass
class TIOA:
    name: str
    clocks: tuple
    inputs: frozenset
    outputs: frozenset
    locations: dict
    initial: str
    edges: tuple
    _by_source: dict = field(default=None, init=False, repr=False, compare=False)
    _completed: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self):
        self.clocks = tuple(self.clocks)
        self.inputs = frozenset(self.inputs)
        self.outputs = frozenset(self.outputs)
        self.edges = tuple(self.edges)

    @classmethod
    def build(
        cls,
        name: str,
        clocks: Sequence[str],
        inputs: Iterable[str],
        outputs: Iterable[str],
        locations: Sequence,
        initial: str,
        edges: Sequence,
    ) -> "TIOA":
        """Convenience constructor.

        ``locations`` holds ``(name, inv, coinv)`` tuples (constraints may be
        text); ``edges`` holds ``(source, action, guard, resets, target)``.
        """
        locs = {}
        for entry in locations:
            if isinstance(entry, Location):
                locs[entry.name] = entry
                continue
            lname, inv, coinv = (tuple(entry) + (TRUE, TRUE))[:3]
            locs[lname] = Location(lname, (Part(_as_cc(inv), _as_cc(coinv)),))
        es = [Edge(s, a, _as_cc(g), frozenset(rs), t) for s, a, g, rs, t in edges]
        return cls(name, tuple(clocks), frozenset(inputs), frozenset(outputs), locs, initial, tuple(es))

    @property
    def alphabet(self) -> frozenset:
        return self.inputs | self.outputs

    def location(self, name: str) -> Location:
        return self.locations[name]

    def edges_from(self, source: str, action: str | None = None) -> list[Edge]:
        if self._by_source is None:
            idx: dict = {}
            for e in self.edges:
                idx.setdefault((e.source, e.action), []).append(e)
            self._by_source = idx
        if action is None:
            return [e for e in self.edges if e.source == source]
        return self._by_source.get((source, action), [])

    def completed_edges(self, source: str, action: str) -> list[Edge]:
        """Edges for ``action`` plus the completion edge to a sink.

        The completion edge covers valuations where no edge is enabled: it goes
        to ``BOT`` for inputs and ``TOP`` for outputs.
        """
        key = (source, action)
        if key in self._completed:
            return self._completed[key]
        es = list(self.edges_from(source, action))
        rest = cc.neg(cc.disj(*(e.guard for e in es))) if es else TRUE
        if rest != cc.FALSE:
            sink = BOT if action in self.inputs else TOP
            es.append(Edge(source, action, rest, frozenset(), sink))
        self._completed[key] = es
        return es

    def max_constants(self) -> dict[str, int]:
        """Largest constant compared against each clock (diagonals count for both)."""
        out = {c: 0 for c in self.clocks}
        constraints = [e.guard for e in self.edges]
        for loc in self.locations.values():
            for p in loc.parts:
                constraints += [p.inv, p.coinv]
        for con in constraints:
            for atom in cc.atoms_of(con):
                for clock in (atom.x, atom.y):
                    if clock is not None and clock in out:
                        out[clock] = max(out[clock], atom.c)
        return out

    def has_diagonals(self) -> bool:
        constraints = [e.guard for e in self.edges]
        for loc in self.locations.values():
            for p in loc.parts:
                constraints += [p.inv, p.coinv]
        return any(a.y is not None for con in constraints for a in cc.atoms_of(con))

    def is_closed(self) -> bool:
        """True when every atom uses a non-strict comparison."""
        constraints = [e.guard for e in self.edges]
        for loc in self.locations.values():
            for p in loc.parts:
                constraints += [p.inv, p.coinv]
        for con in constraints:
            for atom in cc.atoms_of(_strip_not(con)):
                if atom.op in ("<", ">"):
                    return False
        return True

    def renamed_clocks(self, mapping: Mapping[str, str]) -> "TIOA":
        locs = {
            name: Location(
                loc.name,
                tuple(Part(cc.rename(p.inv, mapping), cc.rename(p.coinv, mapping)) for p in loc.parts),
                loc.resolve,
            )
            for name, loc in self.locations.items()
        }
        es = [
            Edge(e.source, e.action, cc.rename(e.guard, mapping), frozenset(mapping.get(r, r) for r in e.resets), e.target)
            for e in self.edges
        ]
        return TIOA(self.name, tuple(mapping.get(c, c) for c in self.clocks), self.inputs, self.outputs, locs, self.initial, tuple(es))


def _strip_not(con: Constraint) -> Constraint:
    """Negation-normal form, so strictness reflects the effective comparison."""
    return cc._nnf(con)


def _as_cc(value) -> Constraint:
    if isinstance(value, str):
        return cc.parse_constraint(value)
    if value is None:
        return TRUE
    if isinstance(value, bool):
        return cc.Const(value)
    return value


def is_downward_closed(con: Constraint, clocks: Sequence[str]) -> bool:
    """Exact check: the box under every zone of the normal form stays inside."""
    zones = cc.to_zones(con, clocks)
    for z in zones:
        if all(z.get(0, j) == LE_ZERO for j in range(1, z.n)) and all(
            z.get(i, j) == z.get(i, 0) for i in range(1, z.n) for j in range(1, z.n) if i != j
        ):
            continue
        box = Zone.universe(clocks)
        for i in range(1, z.n):
            box = box.constrain(i, 0, z.get(i, 0))
        if federation_minus([box], zones):
            return False
    return True


def validate_tioa(a: TIOA) -> list[str]:
    """Report-style well-formedness check; an empty list means well-formed."""
    problems: list[str] = []
    overlap = a.inputs & a.outputs
    if overlap:
        problems.append(f"alphabet overlap: {sorted(overlap)} are both inputs and outputs")
    declared = set(a.clocks)
    if len(declared) != len(a.clocks):
        problems.append("duplicate clock declarations")
    for reserved in SINKS:
        if reserved in a.locations:
            problems.append(f"location name {reserved} is reserved")
    if a.initial not in a.locations:
        problems.append(f"unknown initial location {a.initial!r}")

    def check(con: Constraint, where: str):
        bad = cc.clocks_of(con) - declared
        if bad:
            problems.append(f"{where}: undeclared clocks {sorted(bad)}")
            return False
        for c in cc.constants_of(con):
            if not isinstance(c, int) or c < 0:
                problems.append(f"{where}: constant {c!r} is not a natural number")
                return False
        return True

    for loc in a.locations.values():
        for k, p in enumerate(loc.parts):
            tag = f"location {loc.name}" + (f" part {k}" if len(loc.parts) > 1 else "")
            if check(p.inv, tag + " invariant") and not is_downward_closed(p.inv, a.clocks):
                problems.append(f"{tag}: invariant not downward-closed")
            if check(p.coinv, tag + " co-invariant") and not is_downward_closed(p.coinv, a.clocks):
                problems.append(f"{tag}: co-invariant not downward-closed")
        if loc.resolve is not None:
            for combo, target in loc.resolve:
                if len(combo) != len(loc.parts) or set(combo) - set(STATUSES):
                    problems.append(f"location {loc.name}: malformed resolve combo {combo!r}")
                if target not in a.locations and target not in SINKS and target != STAY:
                    problems.append(f"location {loc.name}: resolve target {target!r} unknown")
    for e in a.edges:
        where = f"edge {e.source} -{e.action}-> {e.target}"
        if e.source not in a.locations:
            problems.append(f"{where}: unknown source location")
        if e.target not in a.locations and e.target not in SINKS:
            problems.append(f"{where}: unknown target location")
        if e.action not in a.alphabet:
            problems.append(f"{where}: action not in alphabet")
        check(e.guard, where + " guard")
        bad = set(e.resets) - declared
        if bad:
            problems.append(f"{where}: resets undeclared clocks {sorted(bad)}")
    return problems


def require_valid(a: TIOA) -> TIOA:
    problems = validate_tioa(a)
    if problems:
        raise ModelError(f"{a.name}: " + "; ".join(problems))
    return a
