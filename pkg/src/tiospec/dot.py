"""Graphviz rendering of automata."""
from __future__ import annotations

from . import constraints as cc
from .tioa import BOT, TOP, TIOA


def _q(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n") + '"'


def to_dot(a: TIOA, complete: bool = False) -> str:
    """DOT source for ``a``.

    Locations show their invariant and co-invariant; edges show guard and
    resets, inputs with ``?`` and outputs with ``!``.  Edges into the error and
    magic sinks are drawn to ``⊥``/``⊤`` nodes.  With ``complete`` the
    implicit completion edges are drawn too.
    """
    out = [f"digraph {_q(a.name)} {{", "  rankdir=LR;", '  node [shape=ellipse, fontname="Helvetica"];']
    out.append('  __init [shape=point, label=""];')
    for name, loc in a.locations.items():
        label = [name]
        if loc.inv != cc.TRUE:
            label.append(f"Inv: {cc.to_text(loc.inv)}")
        if loc.coinv != cc.TRUE:
            label.append(f"coInv: {cc.to_text(loc.coinv)}")
        for combo, target in loc.resolve or ():
            label.append(f"{combo} -> {target}")
        out.append(f"  {_q(name)} [label={_q(chr(10).join(label))}];")
    out.append(f"  __init -> {_q(a.initial)};")
    sinks = set()
    edges = list(a.edges)
    if complete:
        seen = {(e.source, e.action, e.guard, e.resets, e.target) for e in edges}
        for name in a.locations:
            for act in sorted(a.alphabet):
                for e in a.completed_edges(name, act):
                    if (e.source, e.action, e.guard, e.resets, e.target) not in seen:
                        edges.append(e)
    for e in edges:
        mark = "?" if e.action in a.inputs else "!"
        label = [mark + e.action]
        if e.guard != cc.TRUE:
            label.append(cc.to_text(e.guard))
        if e.resets:
            label.append("{" + ", ".join(sorted(e.resets)) + "} := 0")
        target = e.target
        if target in (BOT, TOP):
            sinks.add(target)
            target = f"__{target}"
        style = ", style=dashed" if e.action in a.outputs else ""
        out.append(f"  {_q(e.source)} -> {_q(target)} [label={_q(chr(10).join(label))}{style}];")
    for s in sorted(sinks):
        glyph = "⊥" if s == BOT else "⊤"
        out.append(f"  {_q('__' + s)} [label={_q(glyph)}, shape=box];")
    out.append("}")
    return "\n".join(out) + "\n"
