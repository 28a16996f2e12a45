"""Timed words: tuples mixing positive delays (``Fraction``) and action names.

A word is canonical when it holds no zero delays and no two delays are
adjacent.  All helpers return canonical words.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable

EMPTY: tuple = ()


def is_delay(sym) -> bool:
    return not isinstance(sym, str)


def _num(d):
    # integral delays are kept as int: equal to the Fraction, cheaper to hash
    return int(d) if d.denominator == 1 else d


def canon(items: Iterable) -> tuple:
    out: list = []
    for sym in items:
        if isinstance(sym, str):
            out.append(sym)
            continue
        d = Fraction(sym)
        if d < 0:
            raise ValueError(f"negative delay {sym}")
        if d == 0:
            continue
        if out and not isinstance(out[-1], str):
            out[-1] = _num(out[-1] + d)
        else:
            out.append(_num(d))
    return tuple(out)


def word(*items) -> tuple:
    return canon(items)


def concat(*words) -> tuple:
    """Concatenate and canonicalize; tuple arguments are taken as canonical."""
    if len(words) == 2:
        w, v = words
        if isinstance(w, tuple) and len(v) == 1 and not isinstance(v[0], str) and v[0] > 0:
            if w and not isinstance(w[-1], str):
                return w[:-1] + (_num(Fraction(w[-1] + v[0])),)
            return w + (_num(Fraction(v[0])),)
    return canon(sym for w in words for sym in w)


def project(w, alphabet) -> tuple:
    """Drop actions outside ``alphabet``; delays are kept and merged."""
    alphabet = set(alphabet)
    return canon(sym for sym in w if not isinstance(sym, str) or sym in alphabet)


def duration(w) -> Fraction:
    return sum((sym for sym in w if not isinstance(sym, str)), Fraction(0))


def actions(w) -> tuple:
    return tuple(sym for sym in w if isinstance(sym, str))


def action_count(w) -> int:
    return sum(1 for sym in w if isinstance(sym, str))


def last(w):
    return w[-1] if w else None


def prefixes(w, proper: bool = False) -> list[tuple]:
    """Prefixes of a canonical word at symbol boundaries (delays are not split)."""
    out = [w[:k] for k in range(len(w) + 1)]
    return out[:-1] if proper else out


def is_prefix(u, w) -> bool:
    """``u`` is a prefix of ``w`` in the timed sense (a delay may be cut short)."""
    if len(u) > len(w):
        return False
    for k, sym in enumerate(u):
        if sym == w[k]:
            continue
        last_sym = k == len(u) - 1
        if last_sym and is_delay(sym) and is_delay(w[k]) and sym < w[k]:
            return True
        return False
    return True


def to_json(w) -> list:
    out = []
    for sym in w:
        if isinstance(sym, str):
            out.append(sym)
        elif sym.denominator == 1:
            out.append(int(sym))
        else:
            out.append(f"{sym.numerator}/{sym.denominator}")
    return out


def from_json(items) -> tuple:
    out = []
    for sym in items:
        if isinstance(sym, str) and "/" not in sym and not _numeric(sym):
            out.append(sym)
        else:
            out.append(Fraction(sym))
    return canon(out)


def _numeric(text: str) -> bool:
    try:
        Fraction(text)
    except ValueError:
        return False
    return True


def to_text(w) -> str:
    if not w:
        return "ε"
    return "⟨" + ", ".join(str(sym) for sym in w) + "⟩"


def parse(text: str) -> tuple:
    """Parse ``"start, 4, finish"``-style text (brackets optional)."""
    body = text.strip().strip("⟨⟩<>[]()")
    if not body.strip() or body.strip() == "ε":
        return EMPTY
    items = []
    for tok in body.split(","):
        tok = tok.strip()
        items.append(Fraction(tok) if _numeric(tok) else tok)
    return canon(items)
