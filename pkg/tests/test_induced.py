import numpy as np
import pytest
from hypothesis import given, strategies as st

from padicdyn.induced import (
    Ball,
    Cycle,
    _functional_graph_numpy,
    _functional_graph_walk,
    ball_set_of,
    cycles_over,
    eval_array,
    find_cycles,
    induced_map,
    lift_residues,
)
from padicdyn.padic_core import IntegrityError, ResourceError
from padicdyn.poly import IntPoly
from strategies import polys

X2X = IntPoly((0, 1, 1), 2)
X2M1 = IntPoly((-1, 0, 1), 2)


def test_induced_map_examples():
    assert induced_map(X2X, 1) == {0: 0, 1: 0}
    assert induced_map(X2X, 2) == {0: 0, 1: 2, 2: 2, 3: 0}
    assert induced_map(X2M1, 2) == {0: 3, 1: 0, 2: 3, 3: 0}


def test_find_cycles_examples():
    g = find_cycles(X2X, 2)
    assert [c.points for c in g.cycles] == [(0,), (2,)]
    assert g.tail_map == {1: (Cycle(2, (2,), 2), 1), 3: (Cycle(2, (0,), 2), 1)}
    g = find_cycles(X2M1, 2)
    assert [c.points for c in g.cycles] == [(0, 3)]
    assert g.tails() == [1, 2]
    g = find_cycles(IntPoly((-3, 1, 1), 2), 1)
    assert [c.points for c in g.cycles] == [(1,)]
    assert induced_map(IntPoly((-3, 1, 1), 2), 1) == {0: 1, 1: 1}


def test_ball_set_examples():
    assert ball_set_of(Cycle(2, (2,), 2)) == [Ball(2, 2, 2)]
    assert ball_set_of(Cycle(2, (0, 3), 2)) == [Ball(0, 2, 2), Ball(3, 2, 2)]
    assert len(ball_set_of(Cycle(1, (1, 2, 4), 7))) == 3


def test_ball_basics():
    b = Ball(6, 2, 2)
    assert b.center == 2 and str(b) == "2+4Z_2"
    assert str(Ball(0, 3, 2)) == "8Z_2" and str(Ball(5, 0, 3)) == "Z_3"
    assert b.children() == [Ball(2, 3), Ball(6, 3)]
    assert b.parent() == Ball(0, 1)
    assert list(b.residues(4)) == [2, 6, 10, 14]
    assert b.contains_ball(Ball(10, 4)) and not b.contains_ball(Ball(0, 1))


def test_budget_is_enforced(monkeypatch):
    monkeypatch.setenv("PADIC_BUDGET", "100")
    with pytest.raises(ResourceError):
        find_cycles(X2X, 7)
    find_cycles(X2X, 6)


def test_cycle_validate():
    Cycle(2, (0, 3), 2).validate(X2M1)
    with pytest.raises(IntegrityError):
        Cycle(2, (0, 1), 2).validate(X2M1)


def test_cycles_over_matches_global():
    c = Cycle(2, (2,), 2)
    lifts, tails = cycles_over(X2X, c)
    assert [l.points for l in lifts] == [(2, 6)]
    assert tails == []
    lifts, tails = cycles_over(IntPoly((-4, 0, 1), 2), Cycle(2, (0,), 2))
    assert [l.points for l in lifts] == [(4,)] and tails == [0]


@given(polys(max_degree=5), st.integers(1, 7))
def test_eval_array_matches_scalar(f, n):
    mod = f.prime ** n
    xs = np.arange(min(mod, 200))
    assert eval_array(f, xs, mod).tolist() == [f.eval_int_mod(int(x), mod) for x in xs]


def test_eval_array_large_modulus():
    f = IntPoly((3, -7, 5, 1), 2)
    mod = 1 << 40
    xs = [0, 1, (1 << 39) + 5, mod - 1]
    assert eval_array(f, xs, mod).tolist() == [f.eval_int_mod(x, mod) for x in xs]


@given(st.lists(st.integers(0, 63), min_size=64, max_size=64))
def test_graph_paths_agree(succ):
    a = _functional_graph_walk(list(succ), 6, 2)
    b = _functional_graph_numpy(np.array(succ, dtype=np.int64), 6, 2)
    assert a.cycles == b.cycles
    assert list(a.cycle_id) == list(b.cycle_id)
    assert list(a.depth) == list(b.depth)


@given(polys(), st.data())
def test_conservation_and_compatibility(f, data):
    n = data.draw(st.integers(1, {2: 7, 3: 4, 5: 3}[f.prime]))
    g = find_cycles(f, n)
    on_cycles = sum(c.length for c in g.cycles)
    assert on_cycles + len(g.tails()) == f.prime ** n
    g1 = find_cycles(f, n + 1)
    below = {x: c for c in g.cycles for x in c.points}
    for c in g1.cycles:
        parent = below[c.points[0] % g.cycles[0].modulus]
        assert all(below[x % parent.modulus] == parent for x in c.points)
        assert c.length % parent.length == 0


@given(polys(), st.data())
def test_lift_coverage(f, data):
    n = data.draw(st.integers(1, 4))
    c = data.draw(st.sampled_from(find_cycles(f, n).cycles))
    xs = lift_residues(c)
    assert len(set(xs)) == f.prime * c.length
    for x in c.points:
        ball = Ball(x, n, f.prime)
        assert sorted(y for y in xs if ball.contains(y)) == sorted(ball.residues(n + 1))
    lifts, tails = cycles_over(f, c)
    assert sorted([y for l in lifts for y in l.points] + tails) == sorted(xs)
