"""Lifting cycles level by level and predicting their eventual fate."""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from .classify import (
    Behavior,
    CycleData,
    DiagnosticWarning,
    classify,
    compute_an,
    cycle_data,
    exact_periodic,
    growth_test_p3_level1,
)
from .induced import Ball, Cycle, cycles_over
from .padic_core import IntegrityError, vp
from .poly import IntPoly

MINIMAL = "MinimalForever"
SPLITS_FOREVER = "SplitsForever"
ATTRACTING = "AttractingOrbit"
UNDECIDED = "Undecided"


@dataclass
class Fate:
    """Eventual behavior of the region above a cycle.

    MinimalForever: ``components`` lists the minimal components (cycles at
    ``level``, where perpetual growth starts); it is None when they lie
    deeper than the component cap, in which case ``count`` still says how
    many there are.
    SplitsForever: the region contains an indifferent periodic orbit that
    the nested cycles ``chain`` close in on; ``reason`` names the certificate.
    AttractingOrbit: the cycle grows tails, the whole region is a basin.
    Undecided: analysis stopped at ``level``.
    """

    kind: str
    level: int
    components: Optional[List[Cycle]] = None
    count: int = 0
    reason: str = ""
    chain: Optional[str] = None
    trace: List[Tuple[int, str, str]] = field(default_factory=list)

    def describe(self) -> str:
        if self.kind == MINIMAL:
            return f"MinimalForever(level {self.level}, {self.count} component(s))"
        if self.kind == SPLITS_FOREVER:
            return f"SplitsForever({self.reason})"
        if self.kind == ATTRACTING:
            return f"AttractingOrbit(level {self.level})"
        return f"Undecided(level {self.level}: {self.reason})"


@dataclass
class LiftNode:
    cycle: Cycle
    data: Optional[CycleData]
    behavior: Optional[Behavior]
    children: List["LiftNode"] = field(default_factory=list)
    fate: Optional[Fate] = None
    growths: int = 0

    def walk(self):
        yield self
        for ch in self.children:
            yield from ch.walk()

    def leaves(self):
        return [n for n in self.walk() if not n.children]


def lift_cycle(f: IntPoly, c: Cycle) -> List[Cycle]:
    """All f_{n+1}-cycles lying over c, sorted by smallest point."""
    return cycles_over(f, c)[0]


def lift_with_tails(f: IntPoly, c: Cycle) -> Tuple[List[Cycle], List[int]]:
    return cycles_over(f, c)


def _split_descendants(f: IntPoly, c: Cycle, times: int) -> List[Cycle]:
    """Descendants of c after it splits ``times`` times (checked at each step)."""
    layer = [c]
    for _ in range(times):
        nxt = []
        for cy in layer:
            lifts = lift_cycle(f, cy)
            if len(lifts) != cy.prime or any(l.length != cy.length for l in lifts):
                raise IntegrityError(f"{cy} was predicted to split but does not")
            nxt.extend(lifts)
        layer = nxt
    return sorted(layer, key=lambda cy: cy.points[0])


def _case(data: CycleData) -> int:
    """Which of the three splitting cases applies (1, 2 or 3)."""
    n = data.level
    A, B = data.A, data.B
    if B < A.cap(n):
        return 1
    if A <= B and A < n:
        return 2
    return 3


class _Builder:
    def __init__(self, f: IntPoly, max_level: int, component_cap: Optional[int]):
        self.f = f
        self.p = f.prime
        self.max_level = max_level
        self.cap = component_cap

    # fates -----------------------------------------------------------
    def minimal(self, c: Cycle, splits: int) -> Fate:
        """c splits ``splits`` times, then everything above grows forever."""
        level = c.level + splits
        count = self.p ** splits
        if self.cap is not None and level > self.cap:
            return Fate(MINIMAL, level, None, count, "components finer than the level cap")
        comps = _split_descendants(self.f, c, splits)
        return Fate(MINIMAL, level, comps, len(comps))

    def chain_leaf(self, c: Cycle, reason: str) -> LiftNode:
        return LiftNode(c, None, None, fate=Fate(SPLITS_FOREVER, c.level, reason=reason, chain=reason))

    # recursion --------------------------------------------------------
    def build(self, c: Cycle, growths: int = 0, chain: Optional[str] = None) -> LiftNode:
        """Node for c.  ``chain`` is set when an ancestor certified that c
        carries a self-similar splitting chain."""
        f, n = self.f, c.level
        if n > self.max_level:
            if chain:
                return self.chain_leaf(c, chain)
            if exact_periodic(f, c.points[0], c.length):
                return self.chain_leaf(c, "exact periodic point")
            return LiftNode(c, None, None, fate=Fate(UNDECIDED, n, reason="beyond analysis depth"))
        data = cycle_data(f, c)
        beh = classify(f, c, data)
        node = LiftNode(c, data, beh, growths=growths)
        name = beh.name
        if name == "GrowsTails":
            node.fate = Fate(ATTRACTING, n)
        elif name == "StronglyGrows" or (name == "Grows" and (n >= 2 or self.p > 3)):
            node.fate = self.minimal(c, 0)
        elif name == "Grows":
            # p = 3 at level 1: the lift may fail to grow
            if growth_test_p3_level1(f, c):
                node.fate = self.minimal(c, 0)
            else:
                (child,) = lift_cycle(f, c)
                node.children = [self.build(child, growths + 1)]
        elif name == "WeaklyGrows":
            if growths >= 1:
                # a second growth: everything above grows forever
                node.fate = self.minimal(c, 0)
            else:
                (child,) = lift_cycle(f, c)
                ch = self.build(child, growths + 1)
                if ch.behavior is not None and ch.behavior.name != "StronglySplits":
                    warnings.warn(f"lift of weakly growing {c} is {ch.behavior}",
                                  DiagnosticWarning, stacklevel=2)
                node.children = [ch]
        elif name == "WeaklySplits":
            node.fate = Fate(SPLITS_FOREVER, n, reason="weakly splitting chain", chain="weak")
            for ch in lift_cycle(f, c):
                if cycle_data(f, ch).b % 2 == 0:
                    node.children.append(self.build(ch, growths, chain="weakly splitting chain"))
                else:
                    node.children.append(self.build(ch, growths))
        elif name == "PartiallySplits":
            node.fate = Fate(SPLITS_FOREVER, n, reason="partially splitting chain", chain="partial")
            for ch in lift_cycle(f, c):
                if ch.length == c.length:
                    node.children.append(self.build(ch, growths, chain="partially splitting chain"))
                else:
                    node.children.append(self.partial_child(ch, c, beh.d, growths))
        else:
            self.split(node, growths)
        node.fate = node.fate or summarize(node)
        return node

    def split(self, node: LiftNode, growths: int) -> None:
        c, data = node.cycle, node.data
        n = c.level
        case = _case(data)
        trace = (n, str(data.A), str(data.B))
        if case == 1:
            node.fate = self.minimal(c, data.B.value)
            node.fate.trace.append(trace)
            return
        lifts = lift_cycle(self.f, c)
        if case == 2:
            A = data.A.value
            node.fate = Fate(SPLITS_FOREVER, n, reason="splitting chain (A <= B, A < n)", chain="split")
            for ch in lifts:
                d = cycle_data(self.f, ch)
                if A <= d.B:
                    node.children.append(self.build(ch, growths, chain="splitting chain"))
                else:
                    leaf = LiftNode(ch, d, classify(self.f, ch, d), growths=growths)
                    leaf.fate = self.minimal(ch, A - 1)
                    node.children.append(leaf)
            return
        for ch in lifts:
            node.children.append(self.build(ch, growths))

    def partial_child(self, ch: Cycle, parent: Cycle, d: int, growths: int) -> LiftNode:
        """A lift of length kd of a partially splitting cycle."""
        f, n = self.f, parent.level
        if ch.level > self.max_level:
            return LiftNode(ch, None, None, fate=Fate(UNDECIDED, ch.level, reason="beyond analysis depth"))
        data = cycle_data(f, ch)
        beh = classify(f, ch, data)
        bound = n * d
        capped = {min(_valuation_at(f, ch, x), bound) for x in ch.points}
        if len(capped) > 1:
            warnings.warn(f"min(A_(n+1), nd) depends on the point for {ch}: {sorted(capped)}",
                          DiagnosticWarning, stacklevel=2)
        A1 = data.A.cap(bound)
        node = LiftNode(ch, data, beh, growths=growths)
        if A1 < bound:
            if beh.grows and A1 != 1:
                warnings.warn(f"{ch} grows although A = {A1}", DiagnosticWarning, stacklevel=2)
            node.fate = self.minimal(ch, A1 - 1)
            return node
        if beh.grows:
            node.fate = self.minimal(ch, 0)
        else:
            self.split(node, growths)
            node.fate = node.fate or summarize(node)
        return node


def _valuation_at(f: IntPoly, c: Cycle, x: int) -> int:
    w = c.prime ** (2 * c.level + 4)
    a = compute_an(f, c, x, raw=True)
    v = vp((a - 1) % w, c.prime)
    return 2 * c.level + 4 if v.is_infinite else v.value


def summarize(node: LiftNode) -> Fate:
    """Fate of an internal node from its leaves."""
    kinds = [lf.fate.kind for lf in node.leaves()]
    n = node.cycle.level
    if SPLITS_FOREVER in kinds:
        return Fate(SPLITS_FOREVER, n, reason="contains a splitting chain")
    if UNDECIDED in kinds:
        deepest = max(lf.cycle.level for lf in node.leaves())
        return Fate(UNDECIDED, deepest, reason="some descendants undecided")
    if kinds and all(k == MINIMAL for k in kinds):
        comps, count, levels = [], 0, []
        for lf in node.leaves():
            count += lf.fate.count
            levels.append(lf.fate.level)
            if comps is not None and lf.fate.components is not None:
                comps.extend(lf.fate.components)
            else:
                comps = None
        return Fate(MINIMAL, min(levels), comps, count)
    return Fate(UNDECIDED, n, reason="mixed")


def build_lift_tree(f: IntPoly, c: Cycle, max_level: int,
                    component_cap: Optional[int] = None, expand: bool = False) -> LiftNode:
    """Lift tree of c; nodes are classified up to level max_level.

    With expand=True, regions already known to be minimal are unfolded into
    their growing descendants up to max_level for display.
    """
    if c.level < 2 and c.prime == 2:
        raise IntegrityError("2-adic analysis starts at level 2")
    root = _Builder(f, max_level, component_cap).build(c)
    if expand:
        _expand(f, root, max_level)
    return root


def _expand(f: IntPoly, node: LiftNode, max_level: int, budget: int = 4096) -> None:
    stack = [node]
    made = 0
    while stack:
        nd = stack.pop()
        if nd.children:
            stack.extend(nd.children)
            continue
        if nd.fate is None or nd.fate.kind != MINIMAL or nd.cycle.level >= max_level:
            continue
        for ch in lift_cycle(f, nd.cycle):
            made += 1
            if made > budget:
                return
            d = cycle_data(f, ch)
            kid = LiftNode(ch, d, classify(f, ch, d), growths=nd.growths,
                           fate=Fate(MINIMAL, nd.fate.level, count=1))
            nd.children.append(kid)
            stack.append(kid)


def predict_fate(f: IntPoly, c: Cycle, max_level: int) -> Fate:
    return build_lift_tree(f, c, max_level).fate


def follow_chain(f: IntPoly, node: LiftNode, to_level: int) -> Cycle:
    """Follow the self-similar chain below a SplitsForever leaf down to ``to_level``."""
    c = node.cycle
    reason = node.fate.chain or node.fate.reason
    while c.level < to_level:
        lifts = lift_cycle(f, c)
        c = _chain_child(f, c, lifts, reason)
    return c


def _chain_child(f: IntPoly, c: Cycle, lifts: List[Cycle], reason: str) -> Cycle:
    same = [ch for ch in lifts if ch.length == c.length]
    if "exact" in reason:
        cands = [ch for ch in same if c.points[0] in ch.points]
    elif "partial" in reason:
        cands = same
    elif "weak" in reason:
        cands = [ch for ch in same if cycle_data(f, ch).b % 2 == 0]
    else:
        A = cycle_data(f, c).A
        cands = [ch for ch in same if A <= cycle_data(f, ch).B]
    if len(cands) != 1:
        raise IntegrityError(f"could not follow the periodic chain below {c}")
    return cands[0]


def cycle_balls(c: Cycle) -> List[Ball]:
    return c.balls()
