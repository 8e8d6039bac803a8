"""Shared hypothesis strategies."""

from hypothesis import strategies as st

from padicdyn.induced import find_cycles
from padicdyn.poly import IntPoly

PRIMES = st.sampled_from([2, 3, 5])


@st.composite
def polys(draw, primes=PRIMES, min_degree=2, max_degree=4, bound=20):
    p = draw(primes)
    deg = draw(st.integers(min_degree, max_degree))
    cs = draw(st.lists(st.integers(-bound, bound), min_size=deg, max_size=deg))
    return IntPoly(tuple(cs) + (draw(st.integers(1, 9)),), p)


@st.composite
def poly_cycles(draw, primes=PRIMES, max_level=None):
    """(f, cycle of f_n) with n >= 2 and p^n small."""
    f = draw(polys(primes))
    top = max_level or {2: 6, 3: 4, 5: 3}[f.prime]
    n = draw(st.integers(2, top))
    c = draw(st.sampled_from(find_cycles(f, n).cycles))
    return f, c


def residues(p, n):
    return st.integers(0, p ** n - 1)
