"""The decomposition Z_p = A + B + C, structure sequences and admissible periods."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Set, Tuple

import numpy as np

from .classify import iterate_derivative
from .induced import Ball, Cycle, find_cycles
from .lift_engine import (
    ATTRACTING,
    MINIMAL,
    SPLITS_FOREVER,
    LiftNode,
    build_lift_tree,
    follow_chain,
)
from .padic_core import DomainError, IntegrityError, ResourceError, Valuation, vp
from .poly import IntPoly

ATTRACTING_NATURE = "Attracting"
INDIFFERENT_NATURE = "Indifferent"


def default_max_level(p: int) -> int:
    return {2: 16, 3: 8}.get(p, 6)


def default_depth(max_level: int) -> int:
    """Deepest level classified by the engine.

    Reading A_n and B_n at level n needs f^k modulo p^(2n), so a decomposition
    reported modulo p^L is only trusted for cycles up to level L/2.
    """
    return max(2, max_level // 2)


# ---------------------------------------------------------------- types

@dataclass(frozen=True)
class MinimalComponent:
    balls: Tuple[Ball, ...]
    k: int
    d: int
    growth_start: int
    structure: Tuple[int, ...]
    merged_form: Tuple[Ball, ...]

    @property
    def level(self) -> int:
        return self.balls[0].level

    @property
    def prime(self) -> int:
        return self.balls[0].prime

    def sort_key(self) -> Tuple[int, int]:
        return (self.level, min(b.center for b in self.balls))

    def residues(self, n: int) -> Set[int]:
        mod = self.prime ** n
        return {x % mod for b in self.balls for x in _ball_residues(b, n)}

    def to_json(self) -> dict:
        return {
            "balls": [b.to_json() for b in self.balls],
            "k": self.k,
            "d": self.d,
            "growth_start": self.growth_start,
            "structure_sequence": list(self.structure),
            "merged_form": [b.to_json() for b in self.merged_form],
        }


@dataclass(frozen=True)
class PeriodicOrbitApprox:
    period: int
    points: Tuple[int, ...]
    nature: str
    derivative_valuation: Valuation
    level: int
    prime: int

    def balls(self) -> List[Ball]:
        return [Ball(x, self.level, self.prime) for x in self.points]

    def to_json(self) -> dict:
        return {
            "period": self.period,
            "points": list(self.points),
            "nature": self.nature,
            "derivative_valuation": self.derivative_valuation.to_json(),
        }


@dataclass(frozen=True)
class Target:
    """Where a basin ball is attracted: an A orbit, a B component, or a level-2 cycle."""

    kind: str  # "orbit", "component" or "cycle"
    index: int = -1
    cycle: Optional[Cycle] = None

    def to_json(self) -> dict:
        if self.kind == "cycle":
            return {"cycle": self.cycle.to_json()}
        return {self.kind: self.index}

    @staticmethod
    def from_json(obj: dict, prime: int) -> "Target":
        if "cycle" in obj:
            c = obj["cycle"]
            return Target("cycle", cycle=Cycle(c["level"], tuple(c["points"]), prime))
        (kind, index), = obj.items()
        return Target(kind, index)


@dataclass(frozen=True)
class BasinBall:
    ball: Ball
    target: Target

    def to_json(self) -> dict:
        return {"ball": self.ball.to_json(), "target": self.target.to_json()}


@dataclass(frozen=True)
class UndecidedBall:
    ball: Ball
    reason: str

    def to_json(self) -> dict:
        return {**self.ball.to_json(), "reason": self.reason}


@dataclass(frozen=True)
class Decomposition:
    prime: int
    poly: IntPoly
    max_level: int
    A: Tuple[PeriodicOrbitApprox, ...]
    B: Tuple[MinimalComponent, ...]
    C: Tuple[BasinBall, ...]
    undecided: Tuple[UndecidedBall, ...]
    depth: int = 0

    def to_json(self) -> dict:
        return {
            "prime": self.prime,
            "poly": list(self.poly.coeffs),
            "max_level": self.max_level,
            "depth": self.depth,
            "A": [o.to_json() for o in self.A],
            "B": [c.to_json() for c in self.B],
            "C": [c.to_json() for c in self.C],
            "undecided": [u.to_json() for u in self.undecided],
        }

    @staticmethod
    def from_json(obj: dict) -> "Decomposition":
        p, L = obj["prime"], obj["max_level"]

        def ball(b):
            return Ball(b["center"], b["level"], p)

        A = tuple(PeriodicOrbitApprox(o["period"], tuple(o["points"]), o["nature"],
                                      Valuation.from_json(o["derivative_valuation"]), L, p)
                  for o in obj["A"])
        B = tuple(MinimalComponent(tuple(ball(b) for b in c["balls"]), c["k"], c["d"],
                                   c["growth_start"], tuple(c["structure_sequence"]),
                                   tuple(ball(b) for b in c["merged_form"]))
                  for c in obj["B"])
        C = tuple(BasinBall(ball(e["ball"]), Target.from_json(e["target"], p)) for e in obj["C"])
        U = tuple(UndecidedBall(ball(u), u["reason"]) for u in obj["undecided"])
        return Decomposition(p, IntPoly(tuple(obj["poly"]), p), L, A, B, C, U, obj.get("depth", 0))

    def region(self, n: Optional[int] = None) -> Dict[str, Set[int]]:
        """Residue sets mod p^n of the four parts."""
        n = self.max_level if n is None else n
        out = {"A": set(), "B": set(), "C": set(), "undecided": set()}
        for o in self.A:
            out["A"].update(x % self.prime ** n for x in o.points)
        for c in self.B:
            out["B"].update(c.residues(n))
        for e in self.C:
            out["C"].update(_ball_residues(e.ball, n))
        for u in self.undecided:
            out["undecided"].update(_ball_residues(u.ball, n))
        return out


def _ball_residues(b: Ball, n: int):
    if b.level >= n:
        return [b.center % b.prime ** n]
    return b.residues(n)


# ---------------------------------------------------------------- structure sequences

def structure_sequence(c, s_max: Optional[int] = None) -> Tuple[int, ...]:
    """(p_1, ..., p_s_max) with p_s the number of residues of the component mod p^s.

    Raises IntegrityError unless the ratios p_(s+1)/p_s are ones except for
    a single jump by d | p-1 or by p, followed by p from some level on.
    """
    balls = list(getattr(c, "balls", c))
    p, level = balls[0].prime, balls[0].level
    s_max = max(level + 3, 4) if s_max is None else s_max
    seq = []
    for s in range(1, s_max + 1):
        if s <= level:
            seq.append(len({b.center % p ** s for b in balls}))
        else:
            seq.append(len(balls) * p ** (s - level))
    _pattern(seq, p)
    return tuple(seq)


def _pattern(seq: Sequence[int], p: int) -> Tuple[int, int, int]:
    """(k, d, growth_start) of a structure sequence, or IntegrityError."""
    k = seq[0]
    if not 1 <= k <= p:
        raise IntegrityError(f"structure sequence {list(seq)} starts with k = {k} > p")
    ratios = []
    for a, b in zip(seq, seq[1:]):
        if b % a:
            raise IntegrityError(f"structure sequence {list(seq)} is not a divisor chain")
        ratios.append(b // a)
    start = len(ratios)
    while start > 0 and ratios[start - 1] == p:
        start -= 1
    if start == len(ratios):
        raise IntegrityError(f"structure sequence {list(seq)} never grows")
    # before perpetual growth: one jump by p or by a divisor of p-1, ones elsewhere
    extra = [r for r in ratios[:start] if r != 1]
    if len(extra) > 1 or (extra and extra[0] != p and (p - 1) % extra[0]):
        raise IntegrityError(f"structure sequence {list(seq)} violates the odometer shape")
    d = extra[0] if extra and extra[0] != p else 1
    return k, d, start + 1


def merged_form(balls: Sequence[Ball]) -> Tuple[Ball, ...]:
    """Replace every complete set of p sibling balls by their parent, repeatedly."""
    current = set(balls)
    while True:
        groups: Dict[Ball, List[Ball]] = {}
        for b in current:
            if b.level > 0:
                groups.setdefault(b.parent(), []).append(b)
        full = [parent for parent, kids in groups.items() if len(kids) == parent.prime]
        if not full:
            return tuple(sorted(current))
        for parent in full:
            current.difference_update(groups[parent])
            current.add(parent)


def make_component(balls: Sequence[Ball]) -> MinimalComponent:
    balls = tuple(sorted(balls))
    seq = structure_sequence(balls)
    k, d, start = _pattern(seq, balls[0].prime)
    return MinimalComponent(balls, k, d, start, seq, merged_form(balls))


# ---------------------------------------------------------------- periods

def possible_periods(p: int) -> Set[int]:
    if p == 2:
        return {1, 2, 4}
    if p == 3:
        return {1, 2, 3, 4, 6, 9}
    divisors = [a for a in range(1, p) if (p - 1) % a == 0]
    return {a * b for a in divisors for b in range(1, p + 1)}


def period4_precondition_p2(f: IntPoly) -> bool:
    """Whether f_1 permutes Z/2Z; when false no 4-periodic orbit exists."""
    if f.prime != 2:
        raise DomainError("the permutation precondition concerns p = 2")
    return {f.eval_int_mod(0, 2), f.eval_int_mod(1, 2)} == {0, 1}


# ---------------------------------------------------------------- assembly

def _orbit_from(f: IntPoly, x: int, k: int, L: int) -> Tuple[int, ...]:
    mod = f.prime ** L
    pts = [x % mod]
    for _ in range(k - 1):
        pts.append(f.eval_int_mod(pts[-1], mod))
    i = pts.index(min(pts))
    return tuple(pts[i:] + pts[:i])


def _orbit_approx(f: IntPoly, pts: Tuple[int, ...], L: int) -> PeriodicOrbitApprox:
    p = f.prime
    _, der = iterate_derivative(f, len(pts), pts[0], p ** L)
    v = vp(der, p)
    nature = ATTRACTING_NATURE if v > 0 else INDIFFERENT_NATURE
    return PeriodicOrbitApprox(len(pts), pts, nature, v, L, p)


def _attracting_point(f: IntPoly, c: Cycle, L: int) -> int:
    """A point of the attracting orbit inside c, modulo p^L."""
    mod = f.prime ** L
    x = c.points[0]
    for _ in range(L + 1):
        y = f.iterate_int_mod(c.length, x, mod)
        if y == x:
            return x
        x = y
    raise IntegrityError(f"no attracting point found above {c}")


def _complement(ball: Ball, point: int, L: int) -> List[Ball]:
    """ball minus point + p^L Z_p, as disjoint balls."""
    p = ball.prime
    out = []
    for j in range(ball.level, L):
        digit = (point // p ** j) % p
        base = point % p ** j
        out.extend(Ball(base + t * p ** j, j + 1, p) for t in range(p) if t != digit)
    return out


@dataclass
class _Parts:
    orbits: List[Tuple[PeriodicOrbitApprox, List[Ball]]] = field(default_factory=list)
    components: List[List[Ball]] = field(default_factory=list)
    basin: List[Tuple[Ball, int]] = field(default_factory=list)  # (ball, orbit index)
    undecided: List[UndecidedBall] = field(default_factory=list)


def _collect(f: IntPoly, root: LiftNode, L: int, parts: _Parts) -> None:
    for leaf in root.leaves():
        fate, c = leaf.fate, leaf.cycle
        if fate.kind == MINIMAL:
            if fate.components is None:
                parts.undecided.extend(UndecidedBall(b, "minimal components finer than max_level")
                                       for b in c.balls())
            else:
                parts.components.extend(comp.balls() for comp in fate.components)
        elif fate.kind == ATTRACTING:
            pts = _orbit_from(f, _attracting_point(f, c, L), c.length, L)
            idx = len(parts.orbits)
            parts.orbits.append((_orbit_approx(f, pts, L), c.balls()))
            for b in c.balls():
                y = next(x for x in pts if b.contains(x))
                parts.basin.extend((piece, idx) for piece in _complement(b, y, L))
        elif fate.kind == SPLITS_FOREVER:
            if "exact" in (fate.reason or ""):
                pts = _orbit_from(f, c.points[0], c.length, L)
            else:
                pts = follow_chain(f, leaf, L).points
                pts = _orbit_from(f, pts[0], len(pts), L)
            orbit = _orbit_approx(f, pts, L)
            parts.orbits.append((orbit, c.balls()))
            for b in c.balls():
                if b.level >= L:
                    continue
                y = next(x for x in pts if b.contains(x))
                parts.undecided.extend(UndecidedBall(piece, "accumulates at an indifferent orbit")
                                       for piece in _complement(b, y, L))
        else:
            parts.undecided.extend(UndecidedBall(b, fate.reason or "undecided") for b in c.balls())


def minimal_decomposition(f: IntPoly, max_level: Optional[int] = None,
                          depth: Optional[int] = None,
                          component_cap: Optional[int] = None) -> Decomposition:
    """Decompose Z_p for f, reporting everything modulo p^max_level."""
    p = f.prime
    if f.degree < 2:
        raise DomainError("decomposition needs deg f >= 2")
    L = default_max_level(p) if max_level is None else max_level
    if L < 2:
        raise DomainError("max_level must be at least 2")
    f.check_level(L)
    depth = default_depth(L) if depth is None else depth
    cap = L if component_cap is None else component_cap
    graph = find_cycles(f, 2)
    parts = _Parts()
    root_fate = {}
    for c in graph.cycles:
        start = len(parts.orbits), len(parts.components)
        root = build_lift_tree(f, c, depth, component_cap=cap)
        _collect(f, root, L, parts)
        root_fate[c] = (root, start, (len(parts.orbits), len(parts.components)))

    orbits = [o for o, _ in parts.orbits]
    order_a = sorted(range(len(orbits)), key=lambda i: (orbits[i].points[0], orbits[i].period))
    new_a = {old: new for new, old in enumerate(order_a)}
    comps = [make_component(bs) for bs in parts.components]
    order_b = sorted(range(len(comps)), key=lambda i: comps[i].sort_key())
    new_b = {old: new for new, old in enumerate(order_b)}

    basin = [BasinBall(b, Target("orbit", new_a[i])) for b, i in parts.basin]
    for x, (entry, _) in graph.tail_map.items():
        root, (a0, b0), (a1, b1) = root_fate[entry]
        if root.fate.kind == ATTRACTING and a1 == a0 + 1:
            target = Target("orbit", new_a[a0])
        elif root.fate.kind == MINIMAL and b1 == b0 + 1:
            target = Target("component", new_b[b0])
        else:
            target = Target("cycle", cycle=entry)
        basin.append(BasinBall(Ball(x, 2, p), target))

    orbit_balls = {b for o in orbits for b in o.balls()}
    undecided = {}
    for u in parts.undecided:
        if u.ball.level > L:
            u = UndecidedBall(Ball(u.ball.center, L, p), u.reason)
        if u.ball not in orbit_balls:
            undecided.setdefault(u.ball, u)
    return Decomposition(
        prime=p, poly=f, max_level=L,
        A=tuple(orbits[i] for i in order_a),
        B=tuple(comps[i] for i in order_b),
        C=tuple(sorted(set(basin), key=lambda e: e.ball.sort_key())),
        undecided=tuple(sorted(undecided.values(), key=lambda u: u.ball.sort_key())),
        depth=depth,
    )


# ---------------------------------------------------------------- checks

def partition_counts(dec: Decomposition, budget: int = 1 << 24):
    """How many parts cover each residue mod p^max_level (all ones for a partition)."""
    p, L = dec.prime, dec.max_level
    mod = p ** L
    if mod > budget:
        raise ResourceError(f"{p}^{L} residues exceed the budget")
    counts = np.zeros(mod, dtype=np.int32)

    def add(b: Ball):
        if b.level >= L:
            counts[b.center % mod] += 1
        else:
            counts[b.center::b.modulus] += 1

    for o in dec.A:
        for b in o.balls():
            add(b)
    for c in dec.B:
        for b in c.balls:
            add(b)
    for e in dec.C:
        add(e.ball)
    for u in dec.undecided:
        add(u.ball)
    return counts


def is_partition(dec: Decomposition) -> bool:
    return bool((partition_counts(dec) == 1).all())


def target_balls(dec: Decomposition, t: Target) -> List[Ball]:
    if t.kind == "orbit":
        return dec.A[t.index].balls()
    if t.kind == "component":
        return list(dec.B[t.index].balls)
    return t.cycle.balls()


def basin_lands(dec: Decomposition, entry: BasinBall, steps: Optional[int] = None) -> bool:
    """Whether iterating the ball's center modulo p^max_level reaches its target."""
    f, mod = dec.poly, dec.prime ** dec.max_level
    steps = dec.max_level * dec.prime * 4 if steps is None else steps
    balls = target_balls(dec, entry.target)
    x = entry.ball.center
    for _ in range(steps + 1):
        if any(b.contains(x) for b in balls):
            return True
        x = f.eval_int_mod(x, mod)
    return False


def components_near_orbit(dec: Decomposition, orbit: PeriodicOrbitApprox, n: int):
    """First component of B (in canonical order) of diameter <= p^-n lying within p^-n of the orbit."""
    if orbit.nature != INDIFFERENT_NATURE:
        raise DomainError("components accumulate only at indifferent orbits")
    p = dec.prime
    for comp in dec.B:
        centers = [b.center for b in comp.balls]
        diam = min([comp.level] + [vp(x - y, p).cap(comp.level)
                                   for i, x in enumerate(centers) for y in centers[i + 1:]])
        if diam < n:
            continue
        if any(vp(c - y, p) >= n for c in centers for y in orbit.points):
            return comp
    return None
