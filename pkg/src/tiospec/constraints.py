"""Boolean clock constraints and their normalization into zone unions."""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

from .dbm import Zone, bound

OPS = ("<=", "<", "==", ">", ">=")
_NEGATED = {"<=": ">", "<": ">=", ">": "<=", ">=": "<"}


class ConstraintError(ValueError):
    pass


@dataclass(frozen=True)
class Atom:
    """``x op c`` or, when ``y`` is set, ``x - y op c``."""

    x: str
    op: str
    c: int
    y: str | None = None

    def __post_init__(self):
        if self.op not in OPS:
            raise ConstraintError(f"unknown comparison {self.op!r}")


@dataclass(frozen=True)
class And:
    items: tuple


@dataclass(frozen=True)
class Or:
    items: tuple


@dataclass(frozen=True)
class Not:
    item: object


@dataclass(frozen=True)
class Const:
    value: bool


TRUE = Const(True)
FALSE = Const(False)

Constraint = Union[Atom, And, Or, Not, Const]


def conj(*items: Constraint) -> Constraint:
    flat = []
    for it in items:
        if it == TRUE:
            continue
        if it == FALSE:
            return FALSE
        flat.extend(it.items if isinstance(it, And) else [it])
    if not flat:
        return TRUE
    return flat[0] if len(flat) == 1 else And(tuple(flat))


def disj(*items: Constraint) -> Constraint:
    flat = []
    for it in items:
        if it == FALSE:
            continue
        if it == TRUE:
            return TRUE
        flat.extend(it.items if isinstance(it, Or) else [it])
    if not flat:
        return FALSE
    return flat[0] if len(flat) == 1 else Or(tuple(flat))


def neg(item: Constraint) -> Constraint:
    if isinstance(item, Const):
        return Const(not item.value)
    if isinstance(item, Not):
        return item.item
    return Not(item)


def clocks_of(cc: Constraint) -> set[str]:
    if isinstance(cc, Atom):
        return {cc.x} if cc.y is None else {cc.x, cc.y}
    if isinstance(cc, (And, Or)):
        out = set()
        for it in cc.items:
            out |= clocks_of(it)
        return out
    if isinstance(cc, Not):
        return clocks_of(cc.item)
    return set()


def constants_of(cc: Constraint) -> list[int]:
    if isinstance(cc, Atom):
        return [cc.c]
    if isinstance(cc, (And, Or)):
        return [c for it in cc.items for c in constants_of(it)]
    if isinstance(cc, Not):
        return constants_of(cc.item)
    return []


def atoms_of(cc: Constraint) -> list[Atom]:
    if isinstance(cc, Atom):
        return [cc]
    if isinstance(cc, (And, Or)):
        return [a for it in cc.items for a in atoms_of(it)]
    if isinstance(cc, Not):
        return atoms_of(cc.item)
    return []


def _compare(d, op, c) -> bool:
    if op == "<=":
        return d <= c
    if op == "<":
        return d < c
    if op == "==":
        return d == c
    if op == ">":
        return d > c
    return d >= c


def evaluate(cc: Constraint, valuation: Mapping[str, Fraction]) -> bool:
    """Truth value of ``cc`` at ``valuation``."""
    if isinstance(cc, Atom):
        try:
            d = valuation[cc.x] - (valuation[cc.y] if cc.y is not None else 0)
        except KeyError as exc:
            raise ConstraintError(f"clock {exc.args[0]!r} has no value") from None
        return _compare(d, cc.op, cc.c)
    if isinstance(cc, And):
        return all(evaluate(it, valuation) for it in cc.items)
    if isinstance(cc, Or):
        return any(evaluate(it, valuation) for it in cc.items)
    if isinstance(cc, Not):
        return not evaluate(cc.item, valuation)
    return cc.value


def _nnf(cc: Constraint, negate: bool = False) -> Constraint:
    """Push negations into atoms (equality splits into a disjunction)."""
    if isinstance(cc, Const):
        return Const(cc.value != negate)
    if isinstance(cc, Not):
        return _nnf(cc.item, not negate)
    if isinstance(cc, Atom):
        if not negate:
            return cc
        if cc.op == "==":
            return disj(Atom(cc.x, "<", cc.c, cc.y), Atom(cc.x, ">", cc.c, cc.y))
        return Atom(cc.x, _NEGATED[cc.op], cc.c, cc.y)
    parts = [_nnf(it, negate) for it in cc.items]
    if isinstance(cc, And):
        return disj(*parts) if negate else conj(*parts)
    return conj(*parts) if negate else disj(*parts)


def _atom_zone(atom: Atom, base: Zone) -> Zone:
    i = base.index(atom.x)
    j = base.index(atom.y) if atom.y is not None else 0
    z = base
    if atom.op in ("<=", "<", "=="):
        z = z.constrain(i, j, bound(atom.c, atom.op == "<"))
    if atom.op in (">=", ">", "=="):
        z = z.constrain(j, i, bound(-atom.c, atom.op == ">"))
    return z


def _dnf_zones(cc: Constraint, base: Zone) -> list[Zone]:
    if base.empty:
        return []
    if isinstance(cc, Const):
        return [base] if cc.value else []
    if isinstance(cc, Atom):
        z = _atom_zone(cc, base)
        return [] if z.empty else [z]
    if isinstance(cc, Or):
        out = []
        for it in cc.items:
            out.extend(_dnf_zones(it, base))
        return out
    # And
    current = [base]
    for it in cc.items:
        nxt = []
        for z in current:
            nxt.extend(_dnf_zones(it, z))
        current = _dedupe(nxt)
        if not current:
            break
    return current


def _dedupe(zones: list[Zone]) -> list[Zone]:
    out: list[Zone] = []
    for z in zones:
        if any(o.includes(z) for o in out):
            continue
        out = [o for o in out if not z.includes(o)]
        out.append(z)
    return out


def to_zones(cc: Constraint, clocks: Sequence[str], within: Zone | None = None) -> list[Zone]:
    """Normalize ``cc`` into a finite union of canonical zones."""
    undeclared = clocks_of(cc) - set(clocks)
    if undeclared:
        raise ConstraintError(f"undeclared clocks: {sorted(undeclared)}")
    base = within if within is not None else Zone.universe(clocks)
    return _dedupe(_dnf_zones(_nnf(cc), base))


def from_zone(z: Zone) -> Constraint:
    """Conjunctive constraint describing a canonical zone."""
    if z.empty:
        return FALSE
    names = [None] + list(z.clocks)
    items = []
    n = z.n
    for i in range(n):
        for j in range(n):
            b = z.get(i, j)
            if i == j or b >= (1 << 60):
                continue
            c, strict = b >> 1, not (b & 1)
            if i == 0:
                if b == 1:
                    continue
                items.append(Atom(names[j], ">" if strict else ">=", -c))
            elif j == 0:
                items.append(Atom(names[i], "<" if strict else "<=", c))
            else:
                items.append(Atom(names[i], "<" if strict else "<=", c, names[j]))
    return conj(*items)


def rename(cc: Constraint, mapping: Mapping[str, str]) -> Constraint:
    if isinstance(cc, Atom):
        return Atom(mapping.get(cc.x, cc.x), cc.op, cc.c, None if cc.y is None else mapping.get(cc.y, cc.y))
    if isinstance(cc, And):
        return And(tuple(rename(it, mapping) for it in cc.items))
    if isinstance(cc, Or):
        return Or(tuple(rename(it, mapping) for it in cc.items))
    if isinstance(cc, Not):
        return Not(rename(cc.item, mapping))
    return cc


def after_reset(cc: Constraint, resets: Iterable[str]) -> Constraint:
    """Constraint on the pre-state equivalent to ``cc`` holding after ``resets``."""
    rs = set(resets)
    if isinstance(cc, Atom):
        x0, y0 = cc.x in rs, cc.y is not None and cc.y in rs
        if cc.y is None:
            return Const(_compare(0, cc.op, cc.c)) if x0 else cc
        if x0 and y0:
            return Const(_compare(0, cc.op, cc.c))
        if y0:
            return Atom(cc.x, cc.op, cc.c)
        if x0:
            # -y op c  <=>  y flipped-op -c
            flipped = {"<=": ">=", "<": ">", "==": "==", ">": "<", ">=": "<="}[cc.op]
            if cc.c > 0:
                # clocks are non-negative, so y against a negative constant is decided
                return Const(flipped in (">", ">="))
            return Atom(cc.y, flipped, 0)
        return cc
    if isinstance(cc, And):
        return conj(*(after_reset(it, rs) for it in cc.items))
    if isinstance(cc, Or):
        return disj(*(after_reset(it, rs) for it in cc.items))
    if isinstance(cc, Not):
        return neg(after_reset(cc.item, rs))
    return cc


# -- text ---------------------------------------------------------------------

def to_text(cc: Constraint) -> str:
    return _text(cc, 0)


def _text(cc: Constraint, prec: int) -> str:
    if isinstance(cc, Const):
        return "true" if cc.value else "false"
    if isinstance(cc, Atom):
        lhs = cc.x if cc.y is None else f"{cc.x}-{cc.y}"
        return f"{lhs}{cc.op}{cc.c}"
    if isinstance(cc, Not):
        return "!" + _text(cc.item, 3)
    if isinstance(cc, And):
        s = " && ".join(_text(it, 2) for it in cc.items)
        return f"({s})" if prec > 2 else s
    s = " || ".join(_text(it, 1) for it in cc.items)
    return f"({s})" if prec > 1 else s


_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<id>[A-Za-z_][A-Za-z_0-9']*)|(?P<op><=|>=|==|&&|\|\||[<>=!()\-]))")


def parse_constraint(text: str) -> Constraint:
    """Parse ``x<=5 && (y-x>2 || !z==1)``; ``=`` is accepted for ``==``."""
    toks = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ConstraintError(f"unexpected character at {pos}: {text[pos:pos + 10]!r}")
        kind = m.lastgroup
        toks.append((kind, m.group(kind)))
        pos = m.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
    parser = _Parser(toks, text)
    cc = parser.disjunction()
    if parser.i != len(toks):
        raise ConstraintError(f"trailing input in constraint {text!r}")
    return cc


class _Parser:
    def __init__(self, toks, text):
        self.toks, self.i, self.text = toks, 0, text

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self, value=None):
        tok = self.peek()
        if tok[0] is None or (value is not None and tok[1] != value):
            raise ConstraintError(f"expected {value or 'token'} in {self.text!r}")
        self.i += 1
        return tok

    def disjunction(self):
        items = [self.conjunction()]
        while self.peek()[1] == "||":
            self.take()
            items.append(self.conjunction())
        return items[0] if len(items) == 1 else Or(tuple(items))

    def conjunction(self):
        items = [self.unary()]
        while self.peek()[1] == "&&":
            self.take()
            items.append(self.unary())
        return items[0] if len(items) == 1 else And(tuple(items))

    def unary(self):
        kind, val = self.peek()
        if val == "!":
            self.take()
            return Not(self.unary())
        if val == "(":
            self.take()
            inner = self.disjunction()
            self.take(")")
            return inner
        if kind == "id" and val in ("true", "false"):
            self.take()
            return Const(val == "true")
        if kind == "id":
            return self.atom()
        raise ConstraintError(f"unexpected {val!r} in {self.text!r}")

    def atom(self):
        _, x = self.take()
        y = None
        if self.peek()[1] == "-":
            self.take()
            kind, y = self.take()
            if kind != "id":
                raise ConstraintError(f"expected clock after '-' in {self.text!r}")
        kind, op = self.take()
        if op == "=":
            op = "=="
        if op not in OPS:
            raise ConstraintError(f"expected comparison, got {op!r} in {self.text!r}")
        kind, num = self.take()
        if kind != "num":
            raise ConstraintError(f"constants must be natural numbers in {self.text!r}")
        return Atom(x, op, int(num), y)
