"""Textual automaton format.

::

    spec jobs "optional description";
    automaton Scheduler {
      clocks x;
      inputs finish;
      outputs start;
      location A init inv: x<=100 { on start reset {x} goto B; }
      location B { on finish guard: x>=5 && x<=8 goto A; }
    }

Square brackets around ``inv:``/``coinv:``/``guard:`` clauses are accepted.
Composite locations list their parts and resolve table instead::

    location A_B { part inv: x<=1 coinv: true; part inv: true coinv: y<=2;
                   resolve PB -> A; on a goto A_B; }
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field

from . import constraints as cc
from .tioa import BOT, STAY, TOP, TIOA, Edge, Location, Part, validate_tioa


class SpecSyntaxError(ValueError):
    def __init__(self, msg, line=None, col=None):
        where = f"{line}:{col}: " if line is not None else ""
        super().__init__(where + msg)
        self.line, self.col = line, col


@dataclass
class SpecFile:
    automata: dict = field(default_factory=dict)
    name: str | None = None
    description: str | None = None

    def __getitem__(self, key):
        return self.automata[key]

    def __len__(self):
        return len(self.automata)


_TOKEN = re.compile(
    r"""(?P<ws>\s+|//[^\n]*|\#[^\n]*)
      | (?P<str>"(?:[^"\\]|\\.)*")
      | (?P<num>\d+)
      | (?P<id>[A-Za-z_][A-Za-z0-9_.']*)
      | (?P<sym>->|<=|>=|==|&&|\|\||[{}\[\];,:()<>=!\-])""",
    re.X,
)

_CC_STOP = {"coinv", "guard", "reset", "goto", "inv", "{", ";", "]", "}"}


def _tokenize(text):
    pos, line, col = 0, 1, 1
    out = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise SpecSyntaxError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        val = m.group(kind)
        if kind != "ws":
            out.append((kind, val, line, col))
        nl = val.count("\n")
        if nl:
            line += nl
            col = len(val) - val.rfind("\n")
        else:
            col += len(val)
        pos = m.end()
    return out


class _Reader:
    def __init__(self, tokens):
        self.toks = tokens
        self.i = 0

    def peek(self, k=0):
        j = self.i + k
        return self.toks[j] if j < len(self.toks) else (None, None, None, None)

    def where(self):
        t = self.peek()
        if t[0] is None and self.toks:
            return self.toks[-1][2], self.toks[-1][3]
        return t[2], t[3]

    def fail(self, msg):
        raise SpecSyntaxError(msg, *self.where())

    def take(self, value=None, kind=None):
        t = self.peek()
        if t[0] is None:
            self.fail(f"unexpected end of input (expected {value or kind})")
        if (value is not None and t[1] != value) or (kind is not None and t[0] != kind):
            self.fail(f"expected {value or kind}, found {t[1]!r}")
        self.i += 1
        return t

    def accept(self, value):
        if self.peek()[1] == value:
            self.i += 1
            return True
        return False

    def ident(self):
        return self.take(kind="id")[1]

    def ident_list(self):
        names = []
        if self.peek()[1] == ";":
            return names
        names.append(self.ident())
        while self.accept(","):
            names.append(self.ident())
        return names

    def constraint(self):
        line, col = self.where()
        parts = []
        depth = 0
        while True:
            kind, val, _, _ = self.peek()
            if kind is None:
                break
            if depth == 0 and val in _CC_STOP:
                break
            if val == "(":
                depth += 1
            elif val == ")":
                depth -= 1
            parts.append(val)
            self.i += 1
        if not parts:
            raise SpecSyntaxError("empty constraint", line, col)
        try:
            return cc.parse_constraint(" ".join(parts))
        except cc.ConstraintError as exc:
            raise SpecSyntaxError(str(exc), line, col) from None


def parse_spec(text: str, validate: bool = True) -> SpecFile:
    """Parse a spec file; every automaton is checked with ``validate_tioa``."""
    r = _Reader(_tokenize(text))
    spec = SpecFile()
    while r.peek()[0] is not None:
        if r.accept("spec"):
            spec.name = r.ident()
            if r.peek()[0] == "str":
                spec.description = r.take(kind="str")[1][1:-1].replace('\\"', '"')
            r.take(";")
            continue
        line, col = r.where()
        r.take("automaton")
        a = _automaton(r)
        if a.name in spec.automata:
            raise SpecSyntaxError(f"duplicate automaton {a.name!r}", line, col)
        if validate:
            problems = validate_tioa(a)
            if problems:
                raise SpecSyntaxError(f"automaton {a.name}: " + "; ".join(problems), line, col)
        spec.automata[a.name] = a
    return spec


def _clause(r, key):
    bracket = r.peek()[1] == "[" and r.peek(1)[1] == key
    if bracket:
        r.take("[")
    if r.peek()[1] != key:
        return None
    r.take(key)
    r.take(":")
    con = r.constraint()
    if bracket:
        r.take("]")
    return con


def _automaton(r: _Reader) -> TIOA:
    name = r.ident()
    r.take("{")
    clocks, inputs, outputs = [], [], []
    locations: dict = {}
    initial = None
    edges = []
    while not r.accept("}"):
        word = r.peek()[1]
        if word in ("clocks", "inputs", "outputs"):
            r.take()
            names = r.ident_list()
            r.take(";")
            {"clocks": clocks, "inputs": inputs, "outputs": outputs}[word].extend(names)
        elif word == "location":
            line, col = r.where()
            r.take()
            lname = r.ident()
            if lname in locations:
                raise SpecSyntaxError(f"duplicate location {lname!r}", line, col)
            if r.accept("init"):
                if initial is not None:
                    raise SpecSyntaxError("more than one initial location", line, col)
                initial = lname
            inv = _clause(r, "inv")
            coinv = _clause(r, "coinv")
            parts, resolve = [], []
            r.take("{")
            while not r.accept("}"):
                word2 = r.peek()[1]
                if word2 == "on":
                    edges.append(_edge(r, lname))
                elif word2 == "part":
                    r.take()
                    p_inv = _clause(r, "inv") or cc.TRUE
                    p_coinv = _clause(r, "coinv") or cc.TRUE
                    r.take(";")
                    parts.append(Part(p_inv, p_coinv))
                elif word2 == "resolve":
                    r.take()
                    combo = r.ident()
                    r.take("->")
                    target = r.ident()
                    r.take(";")
                    resolve.append((combo, target))
                else:
                    r.fail(f"expected 'on', 'part' or 'resolve', found {word2!r}")
            if parts and (inv is not None or coinv is not None):
                raise SpecSyntaxError("a location uses either inv/coinv or parts", line, col)
            if not parts:
                parts = [Part(inv or cc.TRUE, coinv or cc.TRUE)]
            locations[lname] = Location(lname, tuple(parts), tuple(resolve) if resolve else None)
        else:
            r.fail(f"unexpected {word!r} in automaton {name}")
    if initial is None:
        if not locations:
            raise SpecSyntaxError(f"automaton {name} has no locations", *r.where())
        initial = next(iter(locations))
    return TIOA(name, tuple(clocks), frozenset(inputs), frozenset(outputs), locations, initial, tuple(edges))


def _edge(r: _Reader, source: str) -> Edge:
    r.take("on")
    action = r.ident()
    guard = _clause(r, "guard") or cc.TRUE
    resets = []
    if r.accept("reset"):
        r.take("{")
        if not r.accept("}"):
            resets = r.ident_list()
            r.take("}")
    r.take("goto")
    target = r.ident()
    r.take(";")
    return Edge(source, action, guard, frozenset(resets), target)


# -- printing -----------------------------------------------------------------

def format_tioa(a: TIOA) -> str:
    lines = [f"automaton {a.name} {{"]
    lines.append(f"  clocks {', '.join(a.clocks)};")
    lines.append(f"  inputs {', '.join(sorted(a.inputs))};")
    lines.append(f"  outputs {', '.join(sorted(a.outputs))};")
    order = [a.initial] + [n for n in a.locations if n != a.initial]
    for lname in order:
        loc = a.locations[lname]
        head = f"  location {lname}" + (" init" if lname == a.initial else "")
        body = []
        if len(loc.parts) == 1 and loc.resolve is None:
            p = loc.parts[0]
            if p.inv != cc.TRUE:
                head += f" inv: {cc.to_text(p.inv)}"
            if p.coinv != cc.TRUE:
                head += f" coinv: {cc.to_text(p.coinv)}"
        else:
            for p in loc.parts:
                body.append(f"part inv: {cc.to_text(p.inv)} coinv: {cc.to_text(p.coinv)};")
            for combo, target in loc.resolve or ():
                body.append(f"resolve {combo} -> {target};")
        for e in a.edges:
            if e.source != lname:
                continue
            s = f"on {e.action}"
            if e.guard != cc.TRUE:
                s += f" guard: {cc.to_text(e.guard)}"
            if e.resets:
                s += f" reset {{{', '.join(sorted(e.resets))}}}"
            s += f" goto {e.target};"
            body.append(s)
        if not body:
            lines.append(head + " { }")
        else:
            lines.append(head + " {")
            lines.extend("    " + b for b in body)
            lines.append("  }")
    lines.append("}")
    return "\n".join(lines) + "\n"


def format_spec(spec: SpecFile) -> str:
    out = []
    if spec.name:
        desc = f' "{spec.description}"' if spec.description else ""
        out.append(f"spec {spec.name}{desc};\n")
    out.extend(format_tioa(a) for a in spec.automata.values())
    return "\n".join(out)


def load(path) -> SpecFile:
    with open(path, encoding="utf-8") as fh:
        return parse_spec(fh.read())


__all__ = ["SpecFile", "SpecSyntaxError", "parse_spec", "format_tioa", "format_spec", "load", "BOT", "TOP", "STAY"]
