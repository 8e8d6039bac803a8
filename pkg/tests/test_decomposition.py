import json

import pytest
from hypothesis import given, settings, strategies as st

from padicdyn.decomposition import (
    ATTRACTING_NATURE,
    INDIFFERENT_NATURE,
    Decomposition,
    basin_lands,
    components_near_orbit,
    default_depth,
    is_partition,
    make_component,
    merged_form,
    minimal_decomposition,
    period4_precondition_p2,
    possible_periods,
    structure_sequence,
)
from padicdyn.induced import Ball, eval_array
from padicdyn.oracle import residue_array
from padicdyn.padic_core import DomainError, IntegrityError
from padicdyn.poly import IntPoly
from strategies import polys

X2X = IntPoly((0, 1, 1), 2)
X2M4 = IntPoly((-4, 0, 1), 2)
X2XM3 = IntPoly((-3, 1, 1), 2)


def residues_in(dec, pred):
    return {x for x in range(dec.prime ** dec.max_level) if pred(x)}


def decompose_random(f):
    L = {2: 8, 3: 6, 5: 4}[f.prime]
    return minimal_decomposition(f, L)


def test_x2_plus_x():
    dec = minimal_decomposition(X2X, 12)
    assert [(o.period, o.points, o.nature) for o in dec.A] == [(1, (0,), INDIFFERENT_NATURE)]
    balls = {b for c in dec.B for b in c.balls}
    assert Ball(2, 2, 2) in balls
    for n in range(3, 7):
        for t in range(2 ** (n - 2)):
            assert Ball(2 ** (n - 1) + t * 2 ** n, 2 * n - 2, 2) in balls
    assert residues_in(dec, lambda x: x % 2) <= dec.region()["C"]
    assert is_partition(dec)


def test_x2_minus_4():
    dec = minimal_decomposition(X2M4, 12)
    assert not dec.B and not dec.undecided
    assert sorted(o.points[0] % 4 for o in dec.A) == [0, 1]
    assert all(o.nature == ATTRACTING_NATURE and o.period == 1 for o in dec.A)
    for j, o in enumerate(dec.A):
        basin = {x for e in dec.C if e.target.index == j
                 for x in residue_array([e.ball], dec.max_level)}
        basin |= set(o.points)
        parity = o.points[0] % 2
        assert basin == residues_in(dec, lambda x: x % 2 == parity)


def test_x2_plus_x_minus_3():
    dec = minimal_decomposition(X2XM3, 12)
    assert not dec.A and not dec.undecided
    assert len(dec.B) == 1
    assert dec.B[0].merged_form == (Ball(1, 1, 2),)
    assert dec.region()["C"] == residues_in(dec, lambda x: x % 2 == 0)


def test_structure_sequence_examples():
    assert structure_sequence(make_component([Ball(2, 2, 2)]), 6) == (1, 1, 2, 4, 8, 16)
    odd = make_component([Ball(1, 2, 2), Ball(3, 2, 2)])
    assert structure_sequence(odd, 6) == (1, 2, 4, 8, 16, 32)
    two = make_component([Ball(0, 2, 3), Ball(1, 2, 3)])
    assert structure_sequence(two, 4)[1:] == (2, 6, 18)


def test_merged_form_joins_sibling_balls():
    assert merged_form([Ball(1, 3, 2), Ball(5, 3, 2)]) == (Ball(1, 2, 2),)
    assert merged_form([Ball(1, 3, 2), Ball(3, 3, 2)]) == (Ball(1, 3, 2), Ball(3, 3, 2))


def test_possible_periods():
    assert possible_periods(2) == {1, 2, 4}
    assert possible_periods(3) == {1, 2, 3, 4, 6, 9}
    assert possible_periods(5) == {1, 2, 3, 4, 5, 6, 8, 10, 12, 16, 20}


def test_period4_precondition():
    assert period4_precondition_p2(X2X) is False
    assert period4_precondition_p2(IntPoly((1, 0, 0, 1), 2)) is True
    assert period4_precondition_p2(IntPoly((0, 0, 1), 2)) is True


def test_components_near_fixed_point():
    dec = minimal_decomposition(X2X, 12)
    (zero,) = dec.A
    comp = components_near_orbit(dec, zero, 4)
    assert [(b.center, b.level) for b in comp.balls] == [(16, 8)]
    comp = components_near_orbit(dec, zero, 2)
    assert [(b.center, b.level) for b in comp.balls] == [(4, 4)]
    attracting = minimal_decomposition(X2M4, 8).A[0]
    with pytest.raises(DomainError):
        components_near_orbit(dec, attracting, 3)


def test_rejects_linear_and_tiny_levels():
    with pytest.raises(DomainError):
        minimal_decomposition(IntPoly((1, 3), 2), 6)
    with pytest.raises(DomainError):
        minimal_decomposition(X2X, 1)


def test_depth_rule():
    assert default_depth(16) == 8
    assert default_depth(3) == 2


@settings(max_examples=50)
@given(polys())
def test_partition(f):
    assert is_partition(decompose_random(f))


@given(polys())
def test_components_are_invariant(f):
    dec = decompose_random(f)
    mod = f.prime ** dec.max_level
    for comp in dec.B:
        xs = residue_array(comp.balls, dec.max_level)
        images = eval_array(f, xs, mod)
        assert set(images.tolist()) <= set(xs.tolist())


@given(polys())
def test_orbit_periods_admissible(f):
    dec = decompose_random(f)
    assert all(o.period in possible_periods(f.prime) for o in dec.A)
    for o in dec.A:
        assert (o.nature == ATTRACTING_NATURE) == (o.derivative_valuation > 0)


@given(polys())
def test_basins_land(f):
    dec = decompose_random(f)
    for e in dec.C:
        assert basin_lands(dec, e, steps=dec.max_level * dec.prime)


@given(polys())
def test_structure_shape(f):
    dec = decompose_random(f)
    p = f.prime
    for comp in dec.B:
        assert (p - 1) % comp.d == 0 and 1 <= comp.k <= p
        seq = comp.structure
        ratios = [b // a for a, b in zip(seq, seq[1:])]
        assert seq[0] == comp.k
        assert all(b % a == 0 for a, b in zip(seq, seq[1:]))
        assert set(ratios) <= {1, comp.d, p}
        assert all(r == p for r in ratios[comp.growth_start - 1:])
        assert len([r for r in ratios[:comp.growth_start - 1] if r != 1]) <= 1


@given(polys(primes=st.just(2), min_degree=2, max_degree=2))
def test_no_period_four_for_quadratics(f):
    assert all(o.period != 4 for o in decompose_random(f).A)


@given(polys())
def test_json_round_trip(f):
    dec = decompose_random(f)
    text = json.dumps(dec.to_json())
    assert Decomposition.from_json(json.loads(text)).to_json() == dec.to_json()


@given(polys())
def test_deterministic_order(f):
    dec = decompose_random(f)
    keys = [c.sort_key() for c in dec.B]
    assert keys == sorted(keys)
    assert decompose_random(f) == dec


def test_structure_sequence_checks_pattern():
    with pytest.raises(IntegrityError):
        structure_sequence([Ball(0, 2, 5), Ball(5, 2, 5), Ball(1, 2, 5)], 4)
