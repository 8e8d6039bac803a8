"""Induced maps f_n on Z/p^nZ and their functional graphs."""

from __future__ import annotations

import os
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, List, Sequence, Tuple

import numpy as np

from .padic_core import IntegrityError, ResourceError
from .poly import IntPoly

DEFAULT_BUDGET = 1 << 24


def enumeration_budget() -> int:
    """Residue budget for global enumeration; PADIC_BUDGET overrides the default."""
    raw = os.environ.get("PADIC_BUDGET")
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            pass
    return DEFAULT_BUDGET


@dataclass(frozen=True)
class Ball:
    """center + p^level Z_p, with center canonical in [0, p^level)."""

    center: int
    level: int
    prime: int = 2

    def __post_init__(self):
        object.__setattr__(self, "center", self.center % self.prime ** self.level)

    @property
    def modulus(self) -> int:
        return self.prime ** self.level

    def sort_key(self) -> Tuple[int, int]:
        return (self.level, self.center)

    def __lt__(self, other: "Ball") -> bool:
        return self.sort_key() < other.sort_key()

    def contains(self, x: int) -> bool:
        return (x - self.center) % self.modulus == 0

    def contains_ball(self, other: "Ball") -> bool:
        return other.level >= self.level and self.contains(other.center)

    def residues(self, n: int) -> range:
        """Residues mod p^n lying in the ball (n >= level)."""
        if n < self.level:
            raise ValueError("ball is finer than the requested level")
        return range(self.center, self.prime ** n, self.modulus)

    def children(self) -> List["Ball"]:
        return [Ball(self.center + t * self.modulus, self.level + 1, self.prime)
                for t in range(self.prime)]

    def parent(self) -> "Ball":
        return Ball(self.center, self.level - 1, self.prime)

    def to_json(self) -> dict:
        return {"center": self.center, "level": self.level}

    def __str__(self):
        if self.level == 0:
            return f"Z_{self.prime}"
        if self.center == 0:
            return f"{self.modulus}Z_{self.prime}"
        return f"{self.center}+{self.modulus}Z_{self.prime}"


@dataclass(frozen=True)
class Cycle:
    """A cycle (x_1, ..., x_k) of f_n, rotated to start at its smallest point."""

    level: int
    points: Tuple[int, ...]
    prime: int

    @staticmethod
    def canonical(level: int, points: Sequence[int], prime: int) -> "Cycle":
        pts = list(points)
        i = pts.index(min(pts))
        return Cycle(level, tuple(pts[i:] + pts[:i]), prime)

    @property
    def length(self) -> int:
        return len(self.points)

    @property
    def modulus(self) -> int:
        return self.prime ** self.level

    def balls(self) -> List[Ball]:
        return [Ball(x, self.level, self.prime) for x in self.points]

    def key(self) -> Tuple[int, int]:
        return (self.level, self.points[0])

    def validate(self, f: IntPoly) -> None:
        mod = self.modulus
        pts = self.points
        if len(set(pts)) != len(pts):
            raise IntegrityError(f"repeated points in cycle {pts}")
        for i, x in enumerate(pts):
            if f.eval_int_mod(x, mod) != pts[(i + 1) % len(pts)]:
                raise IntegrityError(f"{pts} is not a cycle of f_{self.level}")

    def to_json(self) -> dict:
        return {"level": self.level, "points": list(self.points)}

    def __str__(self):
        return "(" + ",".join(map(str, self.points)) + ")"


def ball_set_of(c: Cycle) -> List[Ball]:
    return c.balls()


def eval_array(f: IntPoly, xs, modulus: int) -> np.ndarray:
    """f(x) mod ``modulus`` for an array of residues (int64 when it cannot overflow)."""
    if modulus < (1 << 31):
        xs = np.asarray(xs, dtype=np.int64)
        acc = np.zeros(xs.shape, dtype=np.int64)
    else:
        xs = np.asarray(xs, dtype=object)
        acc = np.zeros(xs.shape, dtype=object)
    for c in reversed(f.coeffs):
        acc = (acc * xs + (c % modulus)) % modulus
    return acc


def _successor_array(f: IntPoly, n: int) -> np.ndarray:
    mod = f.prime ** n
    return eval_array(f, np.arange(mod, dtype=np.int64), mod).astype(np.int64)


def induced_map(f: IntPoly, n: int) -> Dict[int, int]:
    """f_n as a dict residue -> residue."""
    f.check_level(n)
    _check_budget(f.prime, n)
    return dict(enumerate(_successor_array(f, n).tolist()))


def _check_budget(p: int, n: int, budget: int = None) -> None:
    budget = enumeration_budget() if budget is None else budget
    if p ** n > budget:
        raise ResourceError(f"{p}^{n} residues exceed the enumeration budget {budget}")


@dataclass
class FunctionalGraph:
    level: int
    prime: int
    successor: List[int]
    cycles: List[Cycle]
    cycle_id: List[int]
    depth: List[int]

    @cached_property
    def tail_map(self) -> Dict[int, Tuple[Cycle, int]]:
        """Non-cycle residue -> (cycle it falls into, steps until it lands on the cycle)."""
        return {x: (self.cycles[self.cycle_id[x]], self.depth[x])
                for x in range(len(self.successor)) if self.depth[x] > 0}

    def tails(self) -> List[int]:
        return [x for x, d in enumerate(self.depth) if d > 0]


_SMALL_GRAPH = 4096


def functional_graph(successor, level: int, prime: int) -> FunctionalGraph:
    """Cycles and tails of an arbitrary map on range(len(successor))."""
    if len(successor) <= _SMALL_GRAPH:
        if isinstance(successor, np.ndarray):
            successor = successor.tolist()
        return _functional_graph_walk(list(successor), level, prime)
    return _functional_graph_numpy(np.asarray(successor, dtype=np.int64), level, prime)


def _functional_graph_walk(successor: List[int], level: int, prime: int) -> FunctionalGraph:
    size = len(successor)
    state = bytearray(size)  # 0 new, 1 on current path, 2 finished
    cycle_id = [-1] * size
    depth = [0] * size
    raw_cycles: List[List[int]] = []
    for start in range(size):
        if state[start]:
            continue
        path = []
        x = start
        while state[x] == 0:
            state[x] = 1
            path.append(x)
            x = successor[x]
        if state[x] == 1:
            # closed a new cycle starting at x
            i = path.index(x)
            cid = len(raw_cycles)
            raw_cycles.append(path[i:])
            for y in path[i:]:
                cycle_id[y] = cid
                depth[y] = 0
                state[y] = 2
            path = path[:i]
        for y in reversed(path):
            nxt = successor[y]
            cycle_id[y] = cycle_id[nxt]
            depth[y] = depth[nxt] + 1
            state[y] = 2
    cycles = [Cycle.canonical(level, pts, prime) for pts in raw_cycles]
    order = sorted(range(len(cycles)), key=lambda i: cycles[i].points[0])
    remap = {old: new for new, old in enumerate(order)}
    cycles = [cycles[i] for i in order]
    cycle_id = [remap[c] for c in cycle_id]
    return FunctionalGraph(level, prime, successor, cycles, cycle_id, depth)


def _functional_graph_numpy(succ: np.ndarray, level: int, prime: int) -> FunctionalGraph:
    size = len(succ)
    # strip tail points: repeatedly drop everything nobody maps to
    indeg = np.bincount(succ, minlength=size)
    alive = np.ones(size, dtype=bool)
    frontier = np.flatnonzero(indeg == 0)
    while frontier.size:
        alive[frontier] = False
        targets = succ[frontier]
        np.subtract.at(indeg, targets, 1)
        targets = np.unique(targets)
        frontier = targets[(indeg[targets] == 0) & alive[targets]]
    nxt = succ.tolist()
    cycle_id = np.full(size, -1, dtype=np.int64)
    cycles: List[Cycle] = []
    for start in np.flatnonzero(alive).tolist():
        if cycle_id[start] >= 0:
            continue
        pts, x = [], start
        while x != start or not pts:
            pts.append(x)
            x = nxt[x]
        cycle_id[pts] = len(cycles)
        cycles.append(Cycle(level, tuple(pts), prime))
    depth = np.zeros(size, dtype=np.int64)
    pending = np.flatnonzero(~alive)
    while pending.size:
        ready = cycle_id[succ[pending]] >= 0
        done = pending[ready]
        cycle_id[done] = cycle_id[succ[done]]
        depth[done] = depth[succ[done]] + 1
        pending = pending[~ready]
    return FunctionalGraph(level, prime, nxt, cycles, cycle_id.tolist(), depth.tolist())


def find_cycles(f: IntPoly, n: int, budget: int = None) -> FunctionalGraph:
    f.check_level(n)
    _check_budget(f.prime, n, budget)
    return functional_graph(_successor_array(f, n), n, f.prime)


def lift_residues(c: Cycle) -> List[int]:
    """The p*k residues at level n+1 lying over the cycle's balls."""
    m = c.modulus
    return [x + t * m for x in c.points for t in range(c.prime)]


def cycles_over(f: IntPoly, c: Cycle) -> Tuple[List[Cycle], List[int]]:
    """f_{n+1}-cycles inside the balls of c, and the remaining (tail) residues."""
    n1 = c.level + 1
    f.check_level(n1)
    mod = c.prime ** n1
    xs = lift_residues(c)
    index = {x: i for i, x in enumerate(xs)}
    succ = []
    for x in xs:
        y = f.eval_int_mod(x, mod)
        if y not in index:
            raise IntegrityError(f"{c} is not invariant at level {n1}")
        succ.append(index[y])
    g = functional_graph(succ, n1, c.prime)
    lifts = sorted((Cycle.canonical(n1, [xs[i] for i in cyc.points], c.prime) for cyc in g.cycles),
                   key=lambda cy: cy.points[0])
    tails = sorted(xs[i] for i in g.tails())
    return lifts, tails
