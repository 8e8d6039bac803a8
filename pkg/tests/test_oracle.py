import pytest
from hypothesis import given, settings

from padicdyn.decomposition import minimal_decomposition, possible_periods
from padicdyn.induced import Ball, find_cycles
from padicdyn.lift_engine import lift_cycle
from padicdyn.oracle import (
    basin_bruteforce,
    cross_check,
    is_minimal_bruteforce,
    oracle_level_cap,
    periodic_points_bruteforce,
    residue_array,
    residues_of,
    transitive_mod,
)
from padicdyn.padic_core import DomainError, IntegrityError, ResourceError
from padicdyn.poly import IntPoly
from strategies import polys

X2X = IntPoly((0, 1, 1), 2)
X2XM3 = IntPoly((-3, 1, 1), 2)
X2M1 = IntPoly((-1, 0, 1), 2)
X2M4 = IntPoly((-4, 0, 1), 2)


def test_transitive_examples():
    assert transitive_mod(X2X, [Ball(2, 2, 2)], 6)
    assert transitive_mod(X2XM3, [Ball(1, 1, 2)], 8)
    assert not transitive_mod(X2X, [Ball(0, 1, 2)], 3)


def test_transitive_rejects_non_invariant_sets():
    with pytest.raises(IntegrityError):
        transitive_mod(X2X, [Ball(1, 1, 2)], 3)


def test_minimal_examples():
    assert is_minimal_bruteforce(X2X, [Ball(2, 2, 2)], 10)
    assert is_minimal_bruteforce(X2X, [Ball(24, 6, 2)], 10)
    assert not is_minimal_bruteforce(X2X, [Ball(26, 6, 2)], 10)
    dec = minimal_decomposition(X2X, 12)
    comp = dec.B[1]
    assert is_minimal_bruteforce(X2X, comp, 10)
    shifted = [Ball(b.center + 1, b.level, 2) for b in comp.balls]
    assert not is_minimal_bruteforce(X2X, shifted, 10)


def test_periodic_point_examples():
    assert periodic_points_bruteforce(X2M1, 2, 4, 4) == [(0, 2), (15, 2)]
    assert (0, 1) in periodic_points_bruteforce(X2X, 2, 6, 4)
    fixed = [x for x, k in periodic_points_bruteforce(X2M4, 2, 6, 4) if k == 1]
    assert sorted(x % 4 for x in fixed) == [0, 1]


def test_basin_examples():
    rep = basin_bruteforce(X2M4, 2, 8)
    for x in range(256):
        (fixed,) = rep.cycle_of(x).points
        assert fixed % 4 == (0 if x % 2 == 0 else 1)
    rep = basin_bruteforce(X2M1, 2, 8)
    assert {rep.cycle_of(x).points for x in range(256)} == {(0, 255)}
    rep = basin_bruteforce(X2X, 2, 4)
    assert rep[1][1] == 1 and 2 in rep.cycle_of(1).points


def test_basin_rejects_wrong_prime():
    with pytest.raises(DomainError):
        basin_bruteforce(X2X, 3, 4)


def test_residue_helpers():
    assert residues_of([Ball(2, 2, 2)], 4) == {2, 6, 10, 14}
    assert residue_array([Ball(5, 4, 2)], 2).tolist() == [1]
    with pytest.raises(ResourceError):
        residue_array([Ball(0, 0, 2)], 20, budget=1000)


def test_level_cap():
    assert oracle_level_cap(X2X, budget=1 << 10) == 10
    assert oracle_level_cap(IntPoly((0, 1, 1), 2, known_precision=6), budget=1 << 10) == 6


@given(polys())
def test_basin_report_shape(f):
    n = {2: 8, 3: 5, 5: 3}[f.prime]
    rep = basin_bruteforce(f, f.prime, n)
    for x in range(f.prime ** n):
        cid, steps = rep[x]
        assert steps < f.prime ** n
        y = x
        for _ in range(steps):
            y = f.eval_int_mod(y, f.prime ** n)
        assert y in rep.cycles[cid].points


@given(polys())
def test_persistent_cycle_lengths_are_admissible(f):
    n = {2: 8, 3: 5, 5: 3}[f.prime]
    for c in find_cycles(f, n).cycles:
        if any(ch.length == c.length for ch in lift_cycle(f, c)):
            assert c.length in possible_periods(f.prime)


def test_raw_cycle_lengths_can_leave_the_admissible_set():
    f = IntPoly((14, 3, 19, 16, 0, 3), 5)
    lengths = {c.length for c in find_cycles(f, 3).cycles}
    assert 15 in lengths and 15 not in possible_periods(5)
    for c in find_cycles(f, 3).cycles:
        if c.length == 15:
            assert [ch.length for ch in lift_cycle(f, c)] == [75]


@settings(max_examples=25)
@given(polys(max_degree=4))
def test_cross_check_agrees(f):
    L = {2: 8, 3: 6, 5: 4}[f.prime]
    assert cross_check(minimal_decomposition(f, L), budget=1 << 16) == []
