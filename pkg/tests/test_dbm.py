from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from tiospec import _dbm_py, constraints as cc
from tiospec.dbm import INF, Zone, bound

try:
    from tiospec import _dbm_core
except ImportError:  # pragma: no cover
    _dbm_core = None

CLOCKS = ("x", "y", "z")


@st.composite
def matrices(draw, n=None):
    n = draw(st.integers(1, 4)) if n is None else n
    size = n + 1
    cells = []
    for i in range(size):
        for j in range(size):
            if i == j:
                cells.append(bound(0, False))
            elif draw(st.booleans()):
                cells.append(INF)
            else:
                cells.append(bound(draw(st.integers(-6, 6)), draw(st.booleans())))
    return size, cells


@pytest.mark.skipif(_dbm_core is None, reason="compiled kernel not built")
@settings(max_examples=300, deadline=None)
@given(matrices())
def test_compiled_close_matches_python(m):
    size, cells = m
    a, b = list(cells), list(cells)
    ok_py = _dbm_py.close(a, size)
    ok_c = _dbm_core.close(b, size)
    assert ok_py == ok_c
    if ok_py:
        assert a == b


@pytest.mark.skipif(_dbm_core is None, reason="compiled kernel not built")
@settings(max_examples=200, deadline=None)
@given(matrices(), st.lists(st.integers(0, 5), min_size=5, max_size=5))
def test_compiled_extrapolate_matches_python(m, ks):
    size, cells = m
    a = list(cells)
    if not _dbm_py.close(a, size):
        return
    b = list(a)
    bounds = ks[:size]
    _dbm_py.extrapolate(a, size, bounds)
    _dbm_core.extrapolate(b, size, bounds)
    assert a == b


def test_add_bounds():
    assert _dbm_py.add(bound(2, False), bound(3, True)) == bound(5, True)
    assert _dbm_py.add(INF, bound(1, False)) == INF


atoms = st.builds(
    cc.Atom, st.sampled_from(CLOCKS), st.sampled_from(["<", "<=", "==", ">=", ">"]), st.integers(0, 4)
)
constraints = st.recursive(
    atoms, lambda sub: st.one_of(st.builds(lambda a, b: cc.conj(a, b), sub, sub),
                                 st.builds(lambda a, b: cc.disj(a, b), sub, sub),
                                 st.builds(cc.neg, sub)),
    max_leaves=4,
)
valuations = st.fixed_dictionaries({c: st.fractions(0, 6, max_denominator=2) for c in CLOCKS})


@settings(max_examples=300, deadline=None)
@given(constraints, valuations)
def test_zone_cover_agrees_with_evaluation(con, v):
    zones = cc.to_zones(con, CLOCKS)
    assert any(z.contains(v) for z in zones) == cc.evaluate(con, v)


@settings(max_examples=200, deadline=None)
@given(constraints)
def test_sample_lies_inside(con):
    for z in cc.to_zones(con, CLOCKS):
        point = z.sample()
        assert point is not None and z.contains(point)


@settings(max_examples=150, deadline=None)
@given(constraints, constraints, valuations)
def test_subtract_is_set_difference(a, b, v):
    za, zb = cc.to_zones(a, CLOCKS), cc.to_zones(b, CLOCKS)
    pieces = [p for z in za for p in z.subtract(zb[0])] if zb else list(za)
    expected = cc.evaluate(a, v) and not (zb and zb[0].contains(v))
    assert any(p.contains(v) for p in pieces) == expected


def test_future_and_reset():
    z = Zone.zero(("x", "y")).future()
    assert z.contains({"x": Fraction(3), "y": Fraction(3)})
    assert not z.contains({"x": Fraction(3), "y": Fraction(2)})
    r = z.reset(["y"])
    assert r.contains({"x": Fraction(3), "y": Fraction(0)})


def test_extrapolate_widens_above_max_constant():
    z = cc.to_zones(cc.parse_constraint("x == 7"), ("x",))[0]
    w = z.extrapolate({"x": 3})
    assert w.contains({"x": Fraction(100)}) and not w.contains({"x": Fraction(2)})


def test_delay_interval():
    z = cc.to_zones(cc.parse_constraint("x >= 2 && x <= 5"), ("x",))[0]
    lo, lo_strict, hi, hi_strict = z.delay_interval({"x": Fraction(1)})
    assert (lo, hi) == (1, 4) and not lo_strict and not hi_strict
