"""Brute-force checks by enumeration on Z/p^nZ.

Nothing here looks at linearization data; everything is plain iteration.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, List, Set, Tuple

import numpy as np

from .induced import Ball, Cycle, enumeration_budget, eval_array, find_cycles
from .padic_core import DomainError, IntegrityError, ResourceError
from .poly import IntPoly


def oracle_level_cap(f: IntPoly, budget: int = None) -> int:
    """Deepest level whose full residue ring fits in the budget (and the known precision)."""
    budget = enumeration_budget() if budget is None else budget
    n, p = 0, f.prime
    while p ** (n + 1) <= budget:
        n += 1
    if f.known_precision is not None:
        n = min(n, f.known_precision)
    return n


def residue_array(balls: Iterable[Ball], n: int, budget: int = None) -> np.ndarray:
    """Sorted residues mod p^n of a union of balls."""
    budget = enumeration_budget() if budget is None else budget
    balls = list(balls)
    if not balls:
        return np.zeros(0, dtype=np.int64)
    p = balls[0].prime
    mod = p ** n
    total = sum(p ** max(0, n - b.level) for b in balls)
    if total > budget:
        raise ResourceError(f"{total} residues at level {n} exceed the budget {budget}")
    parts = []
    for b in balls:
        if b.level >= n:
            parts.append(np.array([b.center % mod], dtype=np.int64))
        else:
            parts.append(np.arange(b.center, mod, b.modulus, dtype=np.int64))
    return np.unique(np.concatenate(parts))


def residues_of(balls: Iterable[Ball], n: int, budget: int = None) -> Set[int]:
    """The set E mod p^n for a union of balls E."""
    return set(residue_array(balls, n, budget).tolist())


def transitive_mod(f: IntPoly, E: Iterable[Ball], n: int, budget: int = None) -> bool:
    """Whether E mod p^n is a single f_n-cycle.  Non-invariant E raises IntegrityError."""
    f.check_level(n)
    S = residue_array(E, n, budget)
    if not S.size:
        raise IntegrityError("empty set")
    images = eval_array(f, S, f.prime ** n).astype(np.int64)
    mod = f.prime ** n
    if mod <= 8 * S.size:
        index = np.full(mod, -1, dtype=np.int64)
        index[S] = np.arange(S.size)
        pos = index[images]
        bad = pos < 0
        pos[bad] = 0
    else:
        pos = np.searchsorted(S, images)
        pos[pos == S.size] = 0
        bad = S[pos] != images
    if bad.any():
        i = int(np.flatnonzero(bad)[0])
        raise IntegrityError(f"set is not invariant at level {n}: {S[i]} -> {images[i]}")
    if np.bincount(pos, minlength=S.size).max() > 1:
        return False
    # pointer doubling: label[x] becomes the smallest index on x's cycle
    label, jump = np.arange(S.size), pos
    for _ in range(max(1, int(S.size - 1).bit_length())):
        label = np.minimum(label, label[jump])
        jump = jump[jump]
    return not label.any()


def is_minimal_bruteforce(f: IntPoly, component, n_max: int, budget: int = None) -> bool:
    """transitive_mod at every level 1..n_max.  ``component`` is a MinimalComponent or a list of balls."""
    balls = getattr(component, "balls", component)
    try:
        return all(transitive_mod(f, balls, n, budget) for n in range(1, n_max + 1))
    except IntegrityError:
        return False


def periodic_points_bruteforce(f: IntPoly, p: int, n: int, k_max: int) -> List[Tuple[int, int]]:
    """Residues mod p^n lying on f_n-cycles of length at most k_max, with that length."""
    g = find_cycles(f, n)
    out = []
    for c in g.cycles:
        if c.length <= k_max:
            out.extend((x, c.length) for x in c.points)
    return sorted(out)


@dataclass
class BasinReport:
    """Eventual cycle and transient length of every residue mod p^n."""

    level: int
    cycles: List[Cycle]
    cycle_id: List[int]
    transient: List[int]

    def __getitem__(self, x: int) -> Tuple[int, int]:
        x %= len(self.cycle_id)
        return self.cycle_id[x], self.transient[x]

    def cycle_of(self, x: int) -> Cycle:
        return self.cycles[self[x][0]]

    def basin(self, cycle_index: int) -> Set[int]:
        return {x for x, c in enumerate(self.cycle_id) if c == cycle_index}

    def index_containing(self, x: int) -> int:
        x %= len(self.cycle_id)
        i = self.cycle_id[x]
        if self.transient[x] or x not in self.cycles[i].points:
            raise KeyError(x)
        return i


def basin_bruteforce(f: IntPoly, p: int, n: int) -> BasinReport:
    if p != f.prime:
        raise DomainError("prime does not match the polynomial")
    g = find_cycles(f, n)
    return BasinReport(n, g.cycles, g.cycle_id, g.depth)


def cross_check(dec, extra_levels: int = 6, budget: int = None) -> List[str]:
    """Compare a decomposition with brute force; returns the list of disagreements."""
    from .decomposition import ATTRACTING_NATURE, basin_lands, is_partition, possible_periods

    f, p, L = dec.poly, dec.prime, dec.max_level
    cap = oracle_level_cap(f, budget)
    problems = []
    for i, c in enumerate(dec.B):
        top = min(c.level + extra_levels, cap)
        if not is_minimal_bruteforce(f, c, top, budget):
            problems.append(f"component {i} is not minimal by level {top}")
    n = min(L, cap)
    report = basin_bruteforce(f, p, n)
    mod = p ** n
    periodic = {x for x, _ in periodic_points_bruteforce(f, p, n, max(possible_periods(p)))}
    for j, o in enumerate(dec.A):
        missing = [x for x in o.points if x % mod not in periodic]
        if missing:
            problems.append(f"orbit {j} point {missing[0]} is not periodic mod {p}^{n}")
            continue
        if o.nature != ATTRACTING_NATURE:
            continue
        cid = report.index_containing(o.points[0])
        for e in dec.C:
            if e.target.kind == "orbit" and e.target.index == j:
                xs = residue_array([e.ball], n, budget) if e.ball.level <= n else [e.ball.center % mod]
                if any(report[int(x)][0] != cid for x in xs):
                    problems.append(f"basin ball {e.ball} does not drain into orbit {j}")
    for e in dec.C:
        if not basin_lands(dec, e):
            problems.append(f"basin ball {e.ball} does not reach its target")
    if not is_partition(dec):
        problems.append("A, B, C and undecided do not partition the residues")
    return problems
