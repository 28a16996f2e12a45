"""Random automata for property tests and benchmarks."""
from __future__ import annotations

import random

from . import constraints as cc
from .tioa import TIOA, Edge, Location, Part


def _atom(rng: random.Random, clocks, maxc: int, ops=("<=", ">=", "==")):
    return cc.Atom(rng.choice(clocks), rng.choice(ops), rng.randint(0, maxc))


def _upper(rng: random.Random, clocks, maxc: int, p: float):
    if not clocks or rng.random() >= p:
        return cc.TRUE
    return cc.Atom(rng.choice(clocks), "<=", rng.randint(1, maxc))


def random_tioa(
    rng: random.Random,
    name: str = "R",
    inputs=("a",),
    outputs=("b",),
    locations: int = 3,
    clocks: int = 2,
    maxc: int = 3,
    p_inv: float = 0.4,
    p_coinv: float = 0.3,
    p_edge: float = 0.7,
    p_guard: float = 0.6,
    deterministic: bool = True,
) -> TIOA:
    """A random closed-constraint, diagonal-free automaton.

    Every (location, action) gets at most one edge when ``deterministic``;
    otherwise a second, possibly overlapping edge is sometimes added.
    """
    n_locs = rng.randint(1, locations)
    n_clocks = rng.randint(1, clocks) if clocks else 0
    cl = tuple("xyzw"[:n_clocks])
    names = [f"L{i}" for i in range(n_locs)]
    locs = {
        n: Location(n, (Part(_upper(rng, cl, maxc, p_inv), _upper(rng, cl, maxc, p_coinv)),))
        for n in names
    }
    edges = []
    for src in names:
        for act in sorted(set(inputs) | set(outputs)):
            count = 0
            if rng.random() < p_edge:
                count = 1
                if not deterministic and rng.random() < 0.35:
                    count = 2
            for _ in range(count):
                guard = cc.TRUE
                if cl and rng.random() < p_guard:
                    guard = cc.conj(*(_atom(rng, cl, maxc) for _ in range(rng.randint(1, 2))))
                resets = frozenset(c for c in cl if rng.random() < 0.4)
                edges.append(Edge(src, act, guard, resets, rng.choice(names)))
    return TIOA(name, cl, frozenset(inputs), frozenset(outputs), locs, names[0], tuple(edges))


def random_pair(rng: random.Random, kind: str, **kw) -> tuple[TIOA, TIOA]:
    """Operand pairs shaped for an operator.

    ``kind`` is ``same`` (identical alphabets), ``par`` (composable, with one
    shared action each way) or ``quot`` (dividend dominating the divisor).
    """
    if kind == "same":
        return (
            random_tioa(rng, "P", ("a",), ("b",), **kw),
            random_tioa(rng, "Q", ("a",), ("b",), **kw),
        )
    if kind == "par":
        return (
            random_tioa(rng, "P", ("a",), ("b",), **kw),
            random_tioa(rng, "Q", ("b",), ("a", "c"), **kw),
        )
    if kind == "quot":
        return (
            random_tioa(rng, "P", ("a",), ("b", "c"), **kw),
            random_tioa(rng, "Q", ("a",), ("b",), **kw),
        )
    raise ValueError(f"unknown pair kind {kind!r}")
