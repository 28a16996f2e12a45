"""Difference-bound matrices over a fixed, ordered clock tuple.

Index 0 is the reference clock (always 0); clock ``clocks[k]`` lives at index
``k + 1``.  Every public ``Zone`` is canonical (shortest-path closed) or empty.
"""
from __future__ import annotations

import os
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

try:
    if os.environ.get("TIOSPEC_PURE_PYTHON"):
        raise ImportError
    from . import _dbm_core as _kernel

    KERNEL = "compiled"
except ImportError:  # pragma: no cover - depends on build
    from . import _dbm_py as _kernel

    KERNEL = "python"

INF = _kernel.INF
LE_ZERO = _kernel.LE_ZERO


def bound(c: int, strict: bool) -> int:
    return (c << 1) | (0 if strict else 1)


def bound_value(b: int) -> int:
    return b >> 1


def bound_strict(b: int) -> bool:
    return not (b & 1)


def negate_bound(b: int) -> int:
    """Bound for the complement: not(x - y <= c) is y - x < -c."""
    return bound(-(b >> 1), not bound_strict(b))


class ClockMismatch(ValueError):
    pass


class Zone:
    __slots__ = ("clocks", "n", "m", "empty", "_hash")

    def __init__(self, clocks: Sequence[str], m: list[int], empty: bool):
        self.clocks = tuple(clocks)
        self.n = len(self.clocks) + 1
        self.m = tuple(m)
        self.empty = empty
        self._hash = None

    # constructors -----------------------------------------------------------

    @classmethod
    def universe(cls, clocks: Sequence[str]) -> "Zone":
        n = len(clocks) + 1
        m = [INF] * (n * n)
        for j in range(n):
            m[j] = LE_ZERO
            m[j * n + j] = LE_ZERO
        return cls(clocks, m, False)

    @classmethod
    def zero(cls, clocks: Sequence[str]) -> "Zone":
        n = len(clocks) + 1
        return cls(clocks, [LE_ZERO] * (n * n), False)

    @classmethod
    def empty_zone(cls, clocks: Sequence[str]) -> "Zone":
        n = len(clocks) + 1
        m = [LE_ZERO] * (n * n)
        m[0] = bound(-1, True)
        return cls(clocks, m, True)

    # basics -----------------------------------------------------------------

    def index(self, clock: str) -> int:
        try:
            return self.clocks.index(clock) + 1
        except ValueError:
            raise ClockMismatch(f"clock {clock!r} not in {self.clocks}") from None

    def get(self, i: int, j: int) -> int:
        return self.m[i * self.n + j]

    def _check(self, other: "Zone"):
        if other.clocks != self.clocks:
            raise ClockMismatch(f"clock sets differ: {self.clocks} vs {other.clocks}")

    def __eq__(self, other):
        if not isinstance(other, Zone):
            return NotImplemented
        if self.clocks != other.clocks:
            return False
        if self.empty or other.empty:
            return self.empty and other.empty
        return self.m == other.m

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.clocks, None if self.empty else self.m))
        return self._hash

    def __repr__(self):
        return f"Zone({self.to_text()})"

    def is_empty(self) -> bool:
        return self.empty

    # operations -------------------------------------------------------------

    def constrain(self, i: int, j: int, b: int) -> "Zone":
        """Intersect with ``x_i - x_j (<|<=) c`` where ``b`` encodes the bound."""
        if self.empty:
            return self
        n = self.n
        if b >= self.m[i * n + j]:
            return self
        m = list(self.m)
        m[i * n + j] = b
        if add_bounds(b, m[j * n + i]) < LE_ZERO:
            return Zone.empty_zone(self.clocks)
        ok = _kernel.close_ij(m, n, i, j)
        return Zone(self.clocks, m, not ok) if ok else Zone.empty_zone(self.clocks)

    def conjoin(self, other: "Zone") -> "Zone":
        self._check(other)
        if self.empty:
            return self
        if other.empty:
            return other
        m = [min(a, b) for a, b in zip(self.m, other.m)]
        ok = _kernel.close(m, self.n)
        return Zone(self.clocks, m, False) if ok else Zone.empty_zone(self.clocks)

    def future(self) -> "Zone":
        if self.empty:
            return self
        m = list(self.m)
        for i in range(1, self.n):
            m[i * self.n] = INF
        return Zone(self.clocks, m, False)

    def past(self) -> "Zone":
        if self.empty:
            return self
        n = self.n
        m = list(self.m)
        for j in range(1, n):
            m[j] = LE_ZERO
            for i in range(1, n):
                if m[i * n + j] < m[j]:
                    m[j] = m[i * n + j]
        return Zone(self.clocks, m, False)

    def reset(self, resets: Iterable[str]) -> "Zone":
        if self.empty:
            return self
        n = self.n
        m = list(self.m)
        for c in resets:
            x = self.index(c)
            for j in range(n):
                m[x * n + j] = m[j]
                m[j * n + x] = m[j * n]
            m[x * n + x] = LE_ZERO
        return Zone(self.clocks, m, False)

    def free(self, clocks: Iterable[str]) -> "Zone":
        if self.empty:
            return self
        n = self.n
        m = list(self.m)
        for c in clocks:
            x = self.index(c)
            for j in range(n):
                if j != x:
                    m[x * n + j] = INF
                    m[j * n + x] = m[j * n]
        _kernel.close(m, n)
        return Zone(self.clocks, m, False)

    def includes(self, other: "Zone") -> bool:
        self._check(other)
        if other.empty:
            return True
        if self.empty:
            return False
        return all(b <= a for a, b in zip(self.m, other.m))

    def extrapolate(self, max_constants: Mapping[str, int]) -> "Zone":
        if self.empty:
            return self
        bounds = [0] + [max_constants.get(c, 0) for c in self.clocks]
        m = list(self.m)
        ok = _kernel.extrapolate(m, self.n, bounds)
        return Zone(self.clocks, m, False) if ok else Zone.empty_zone(self.clocks)

    def subtract(self, other: "Zone") -> list["Zone"]:
        """``self \\ other`` as a list of pairwise disjoint zones."""
        self._check(other)
        if self.empty:
            return []
        if other.empty or self.conjoin(other).empty:
            return [self]
        pieces = []
        rest = self
        n = self.n
        for i in range(n):
            for j in range(n):
                if i == j:
                    continue
                b = other.m[i * n + j]
                if b >= INF or b >= rest.m[i * n + j]:
                    continue
                outside = rest.constrain(j, i, negate_bound(b))
                if not outside.empty:
                    pieces.append(outside)
                rest = rest.constrain(i, j, b)
                if rest.empty:
                    return pieces
        return pieces

    def contains(self, valuation: Mapping[str, Fraction]) -> bool:
        if self.empty:
            return False
        vals = [Fraction(0)] + [Fraction(valuation[c]) for c in self.clocks]
        n = self.n
        for i in range(n):
            for j in range(n):
                b = self.m[i * n + j]
                if i == j or b >= INF:
                    continue
                d = vals[i] - vals[j]
                c = b >> 1
                if d > c or (d == c and bound_strict(b)):
                    return False
        return True

    def sample(self) -> dict | None:
        """Some valuation inside the zone (rational), or None if empty.

        Works on an integer DBM scaled by ``2n``: every non-empty zone with
        integer constants has a point on that grid.
        """
        if self.empty:
            return None
        n = self.n
        scale = 2 * n
        m = []
        for b in self.m:
            if b >= INF:
                m.append(INF)
            else:
                c = (b >> 1) * scale - (1 if bound_strict(b) else 0)
                m.append(bound(c, False))
        if not _kernel.close(m, n):
            return None
        vals = {}
        for i in range(1, n):
            v = -(m[i] >> 1)
            m[i * n] = min(m[i * n], bound(v, False))
            m[i] = min(m[i], bound(-v, False))
            _kernel.close(m, n)
            vals[self.clocks[i - 1]] = Fraction(v, scale)
        return vals

    def delay_interval(self, valuation: Mapping[str, Fraction]):
        """Delays ``d >= 0`` with ``valuation + d`` in the zone.

        Returns ``(lo, lo_strict, hi, hi_strict)`` (``hi`` is None when
        unbounded) or None if no delay works.
        """
        if self.empty:
            return None
        vals = [Fraction(0)] + [Fraction(valuation[c]) for c in self.clocks]
        n = self.n
        for i in range(1, n):
            for j in range(1, n):
                b = self.m[i * n + j]
                if i == j or b >= INF:
                    continue
                d = vals[i] - vals[j]
                if d > (b >> 1) or (d == (b >> 1) and bound_strict(b)):
                    return None
        lo, lo_strict, hi, hi_strict = Fraction(0), False, None, False
        for i in range(1, n):
            up = self.m[i * n]
            if up < INF:
                h = (up >> 1) - vals[i]
                if hi is None or h < hi or (h == hi and bound_strict(up)):
                    hi, hi_strict = h, bound_strict(up)
            low = self.m[i]
            lval = -(low >> 1) - vals[i]
            if lval > lo or (lval == lo and bound_strict(low)):
                lo, lo_strict = lval, bound_strict(low)
        if hi is not None and (hi < lo or (hi == lo and (hi_strict or lo_strict))):
            return None
        return lo, lo_strict, hi, hi_strict

    def max_constant(self) -> int:
        best = 0
        for b in self.m:
            if b < INF:
                best = max(best, abs(b >> 1))
        return best

    def rename(self, clocks: Sequence[str]) -> "Zone":
        if len(clocks) != len(self.clocks):
            raise ClockMismatch("rename must preserve dimension")
        return Zone(clocks, list(self.m), self.empty)

    def embed(self, clocks: Sequence[str]) -> "Zone":
        """Cylindrify into a superset clock tuple (new clocks unconstrained)."""
        out = Zone.universe(clocks)
        if self.empty:
            return Zone.empty_zone(clocks)
        n = self.n
        idx = [0] + [out.index(c) for c in self.clocks]
        m = list(out.m)
        for i in range(n):
            for j in range(n):
                m[idx[i] * out.n + idx[j]] = min(m[idx[i] * out.n + idx[j]], self.m[i * n + j])
        ok = _kernel.close(m, out.n)
        return Zone(clocks, m, False) if ok else Zone.empty_zone(clocks)

    def to_text(self) -> str:
        if self.empty:
            return "false"
        parts = []
        n = self.n
        names = ["0"] + list(self.clocks)
        for i in range(1, n):
            low, up = self.m[i], self.m[i * n]
            lo = -(low >> 1)
            if up < INF and (up & 1) and (low & 1) and lo == (up >> 1):
                parts.append(f"{names[i]}=={lo}")
                continue
            if low != LE_ZERO:
                parts.append(f"{names[i]}{'>' if bound_strict(low) else '>='}{lo}")
            if up < INF:
                parts.append(f"{names[i]}{'<' if bound_strict(up) else '<='}{up >> 1}")
        for i in range(1, n):
            for j in range(1, n):
                b = self.m[i * n + j]
                if i == j or b >= INF:
                    continue
                implied = add_bounds(self.m[i * n], self.m[j])
                if b < implied:
                    parts.append(f"{names[i]}-{names[j]}{'<' if bound_strict(b) else '<='}{b >> 1}")
        return " && ".join(parts) if parts else "true"


def add_bounds(a: int, b: int) -> int:
    return _kernel.add(a, b)


def federation_subtract(pieces: Sequence[Zone], other: Zone) -> list[Zone]:
    out = []
    for z in pieces:
        out.extend(z.subtract(other))
    return out


def federation_minus(pieces: Sequence[Zone], others: Sequence[Zone]) -> list[Zone]:
    out = list(pieces)
    for o in others:
        out = federation_subtract(out, o)
        if not out:
            break
    return out


def federation_intersect(a: Sequence[Zone], b: Sequence[Zone]) -> list[Zone]:
    out = []
    for x in a:
        for y in b:
            z = x.conjoin(y)
            if not z.empty:
                out.append(z)
    return out
