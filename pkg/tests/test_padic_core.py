import pytest
from hypothesis import given, strategies as st

from padicdyn.padic_core import (
    INFINITE,
    DomainError,
    Finite,
    PrecisionError,
    Residue,
    has_sqrt_z2,
    mul_order,
    sqrt_z2,
    vp,
)


def test_vp_examples():
    assert vp(12, 2) == Finite(2)
    assert vp(0, 3) == INFINITE
    assert vp(9, 3) == Finite(2)


def test_valuation_order_and_text():
    assert Finite(3) < INFINITE
    assert Finite(2) + Finite(3) == Finite(5)
    assert (Finite(2) + INFINITE).is_infinite
    assert str(INFINITE) == "inf" and str(Finite(4)) == "4"
    assert INFINITE.cap(7) == 7 and Finite(2).cap(7) == 2


def test_mul_order_examples():
    assert mul_order(2, 5) == 4
    assert mul_order(1, 7) == 1
    assert mul_order(4, 5) == 2
    with pytest.raises(DomainError):
        mul_order(5, 5)


def test_has_sqrt_examples():
    assert has_sqrt_z2(17)
    assert not has_sqrt_z2(3)
    assert has_sqrt_z2(4)
    assert not has_sqrt_z2(8)


def test_has_sqrt_needs_enough_digits():
    with pytest.raises(PrecisionError):
        has_sqrt_z2(16, precision=5)
    assert has_sqrt_z2(17, precision=5)


def test_sqrt_rejects_non_squares():
    with pytest.raises(DomainError):
        sqrt_z2(3, 10)


@given(st.integers(-2000, 2000).filter(bool), st.integers(8, 20))
def test_sqrt_squares_back(d, digits):
    if has_sqrt_z2(d):
        r = sqrt_z2(d, digits)
        assert (r * r - d) % (1 << (digits - vp(d, 2).value // 2 - 1)) == 0


@given(st.integers(-5000, 5000))
def test_has_sqrt_matches_search(d):
    """A square in Z_2 is a square mod 2^12 with a root that refines to every level."""
    n = 12
    if d % (1 << n) == 0 or vp(d, 2).value + 3 > n:
        return
    roots = [r for r in range(1 << (n - 1)) if (r * r - d) % (1 << n) == 0]
    assert has_sqrt_z2(d) == bool(roots)


@given(st.sampled_from([2, 3, 5, 7]), st.integers(1, 6), st.data())
def test_ring_laws(p, n, data):
    r = st.integers(0, p ** n - 1)
    a, b, c = (Residue(data.draw(r), p, n) for _ in range(3))
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    assert (a - b) + b == a
    assert -(-a) == a


@given(st.sampled_from([2, 3, 5]), st.integers(2, 8), st.data())
def test_reduction_compatible(p, n, data):
    r = st.integers(0, p ** n - 1)
    a, b = Residue(data.draw(r), p, n), Residue(data.draw(r), p, n)
    m = data.draw(st.integers(0, n))
    e = a * a * b + a - b ** 3
    ar, br = a.reduce(m), b.reduce(m)
    assert e.reduce(m) == ar * ar * br + ar - br ** 3


def test_reduce_cannot_raise_level():
    with pytest.raises(PrecisionError):
        Residue(1, 2, 3).reduce(4)


def test_mixed_levels_rejected():
    with pytest.raises(DomainError):
        Residue(1, 2, 3) + Residue(1, 2, 4)


@given(st.sampled_from([2, 3, 5]), st.integers(-10 ** 6, 10 ** 6).filter(bool),
       st.integers(-10 ** 6, 10 ** 6).filter(bool))
def test_vp_multiplicative(p, x, y):
    assert vp(x * y, p) == vp(x, p) + vp(y, p)


def test_bad_prime():
    with pytest.raises(DomainError):
        Residue(1, 4, 2)
