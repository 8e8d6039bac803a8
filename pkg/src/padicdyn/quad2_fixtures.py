"""Closed-form decompositions of 2-adic quadratics, used as fixtures against the engine."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from typing import Dict, List, Optional, Tuple

import numpy as np

from .classify import iterate_derivative
from .decomposition import (
    ATTRACTING_NATURE,
    INDIFFERENT_NATURE,
    BasinBall,
    Decomposition,
    PeriodicOrbitApprox,
    Target,
    UndecidedBall,
    _complement,
    make_component,
    merged_form,
    minimal_decomposition,
)
from .induced import Ball
from .padic_core import DomainError, has_sqrt_z2, sqrt_z2, vp
from .poly import IntPoly, QuadNormalForm, normal_form_2adic

FAMILIES = (
    "XSqMinusLambda",
    "XSqPlusX",
    "XSqPlus1m4mX",
    "XSqPlusNeg1m4mX_odd",
    "XSqPlusNeg1m4mX_even",
    "XSqPlusXMinusD_mod0",
    "XSqPlusXMinusD_mod1",
    "XSqPlusXMinusD_mod2",
    "XSqPlusXMinusD_mod3",
)


@dataclass(frozen=True)
class ComponentTypeTag:
    """I-[k]: one ball splitting k times; II-[k]: a two-ball 2-cycle splitting k times."""

    kind: str
    k: int

    def __str__(self):
        return f"{self.kind}-[{self.k}]"


def TypeI(k: int) -> ComponentTypeTag:
    return ComponentTypeTag("I", k)


def TypeII(k: int) -> ComponentTypeTag:
    return ComponentTypeTag("II", k)


@dataclass(frozen=True)
class Piece:
    """A region of known type: one ball (I) or the two balls of a 2-cycle (II) at ``level``."""

    label: str
    tag: ComponentTypeTag
    centers: Tuple[int, ...]
    level: int

    @property
    def component_level(self) -> int:
        return self.level + self.tag.k


@dataclass(frozen=True)
class OrbitSpec:
    points: Tuple[int, ...]
    locations: Tuple[Ball, ...]
    nature: str
    basin: Tuple[Ball, ...] = ()


@dataclass
class Expected:
    subcase: str
    pieces: List[Piece] = field(default_factory=list)
    orbits: List[OrbitSpec] = field(default_factory=list)
    transient: List[Ball] = field(default_factory=list)


@dataclass(frozen=True)
class QuadFixture:
    family: str
    param: int

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise DomainError(f"unknown fixture family {self.family}")

    def polynomial(self) -> IntPoly:
        fam, q = self.family, self.param
        if fam == "XSqMinusLambda":
            return IntPoly((-q, 0, 1), 2)
        if fam == "XSqPlusX":
            return IntPoly((0, 1, 1), 2)
        if fam == "XSqPlus1m4mX":
            return IntPoly((0, 1 - 4 * q, 1), 2)
        if fam.startswith("XSqPlusNeg1m4mX"):
            return IntPoly((0, -1 - 4 * q, 1), 2)
        return IntPoly((-q, 1, 1), 2)

    def to_json(self) -> dict:
        return {"family": self.family, "param": self.param}


# ---------------------------------------------------------------- helpers

def _v(x: int) -> float:
    v = vp(x, 2)
    return float("inf") if v.is_infinite else v.value


def _roots(D: int, num: int, L: int) -> Tuple[int, int]:
    """The two values (num +- sqrt(D)) / 2 modulo 2^L."""
    digits = L + int(min(_v(D), 4 * L)) + 8
    r = sqrt_z2(D, digits)
    return tuple(((num + s) % (1 << digits) // 2) % (1 << L) for s in (r, -r))


def _II_ball(label: str, center: int, level: int, k: int) -> Piece:
    """A ball at ``level`` whose two halves form a 2-cycle of type II-[k]."""
    return Piece(label, TypeII(k), (center, center + (1 << level)), level + 1)


def _locate(points, balls) -> Tuple[int, ...]:
    """Orbit points ordered to match the stated location balls."""
    out = []
    for b in balls:
        hits = [x for x in points if b.contains(x)]
        if len(hits) != 1:
            raise DomainError(f"orbit {points} does not meet {b} exactly once")
        out.append(hits[0])
    return tuple(out)


# ---------------------------------------------------------------- transcription

def _lambda(q: int, L: int) -> Expected:
    cls = q % 4
    if cls in (0, 2):
        pts = _roots(1 + 4 * q, 1, L)
        locs = (Ball(0, 2), Ball(1, 2)) if cls == 0 else (Ball(2, 2), Ball(3, 2))
        x0, x1 = _locate(pts, locs)
        return Expected(f"lambda = {cls} mod 4", orbits=[
            OrbitSpec((x0,), (locs[0],), ATTRACTING_NATURE, (Ball(0, 1),)),
            OrbitSpec((x1,), (locs[1],), ATTRACTING_NATURE, (Ball(1, 1),)),
        ])
    pts = _roots(4 * q - 3, -1, L)
    locs = (Ball(0, 2), Ball(3, 2)) if cls == 1 else (Ball(1, 2), Ball(2, 2))
    return Expected(f"lambda = {cls} mod 4", orbits=[
        OrbitSpec(_locate(pts, locs), locs, ATTRACTING_NATURE, (Ball(0, 0),))])


def _fixed(x: int, L: int) -> OrbitSpec:
    return OrbitSpec((x % (1 << L),), (Ball(x, L),), INDIFFERENT_NATURE)


def _x2_plus_x(L: int) -> Expected:
    e = Expected("b = 1", orbits=[_fixed(0, L)], transient=[Ball(1, 1)])
    for n in range(2, L + 2):
        e.pieces.append(Piece(f"n={n}", TypeI(n - 2), (1 << (n - 1),), n))
    return e


def _one_minus_4m(m: int, L: int) -> Expected:
    v = int(_v(m))
    e = Expected(f"v2(m) = {v}", orbits=[_fixed(0, L), _fixed(4 * m, L)], transient=[Ball(1, 1)])
    for n in range(2, v + 3):
        e.pieces.append(Piece(f"E1 n={n}", TypeI(n - 2), (1 << (n - 1),), n))
    for n in range(v + 4, L + 2):
        e.pieces.append(Piece(f"E2 n={n}", TypeI(v + 1), (1 << (n - 1),), n))
        e.pieces.append(Piece(f"E3 n={n}", TypeI(v + 1), (4 * m + (1 << (n - 1)),), n))
    return e


def _neg_common(m: int, L: int, e: Expected) -> None:
    for n in range(4, L + 2):
        e.pieces.append(_II_ball(f"E1 n={n}", 4 * m + 2 + (1 << (n - 2)), n - 1, 1))


def _neg_odd(m: int, L: int) -> Expected:
    v = int(_v(m))
    e = Expected(f"v2(m) = {v}", orbits=[_fixed(0, L), _fixed(4 * m + 2, L)], transient=[Ball(1, 1)])
    _neg_common(m, L, e)
    for n in range(4, L + 2):
        k = 2 * n - 5 if n <= v // 2 + 3 else v + 1
        e.pieces.append(_II_ball(f"E{2 if n <= v // 2 + 3 else 3} n={n}", 1 << (n - 2), n - 1, k))
    return e


def _pair_orbit(m: int, L: int) -> Tuple[int, int]:
    """The 2-cycle of x^2+(-1-4m)x: roots of x^2 - 4m x - 4m = 0."""
    return _roots(16 * m * (m + 1), 4 * m, L)


def _annuli(f: IntPoly, orbit: OrbitSpec, start: int, k: int, L: int, label: str) -> List[Piece]:
    """Two-ball annuli x_i + 2^(n-1) + 2^n Z_2 around a 2-periodic orbit, n >= start."""
    x1, x2 = orbit.points
    return [Piece(f"{label} n={n}", TypeII(k), (x1 + (1 << (n - 1)), x2 + (1 << (n - 1))), n)
            for n in range(start, L + 2)]


def _neg_even(m: int, L: int) -> Expected:
    v = int(_v(m))
    h = v // 2
    e = Expected("", orbits=[_fixed(0, L), _fixed(4 * m + 2, L)], transient=[Ball(1, 1)])
    _neg_common(m, L, e)
    for n in range(4, L + 2):
        if n < h + 3:
            e.pieces.append(_II_ball(f"E2 n={n}", 1 << (n - 2), n - 1, 2 * n - 5))
        elif n > h + 3:
            e.pieces.append(_II_ball(f"E3 n={n}", 1 << (n - 2), n - 1, v + 1))
    E_center, E_level = 1 << (h + 1), h + 2
    f = QuadFixture("XSqPlusNeg1m4mX_even", m).polynomial()
    w4, wv = _v(m - 4), _v(m - (1 << v))
    if v == 2 and w4 == 3:
        e.subcase = "(1) v2(m)=2, v2(m-4)=3"
        e.pieces.append(_II_ball("E", E_center, E_level, 4))
    elif v == 2 and w4 >= 5:
        e.subcase = "(2) v2(m)=2, v2(m-4)>=5"
        e.pieces.append(_II_ball("E", E_center, E_level, 5))
    elif v == 2:
        e.subcase = "(3) v2(m)=2, v2(m-4)=4"
        locs = (Ball(4, 4), Ball(12, 4))
        orbit = OrbitSpec(_locate(_pair_orbit(m, L), locs), locs, INDIFFERENT_NATURE)
        e.orbits.append(orbit)
        e.pieces.extend(_annuli(f, orbit, 5, 5, L, "E4"))
    elif wv < v + 3:
        e.subcase = "(4) v2(m)>=4, v2(m-2^v2(m)) < v2(m)+3"
        e.pieces.append(_II_ball("E", E_center, E_level, int(wv) + 1))
    else:
        e.subcase = "(5) v2(m)>=4, v2(m-2^v2(m)) >= v2(m)+3"
        locs = (Ball(E_center, h + 3), Ball(E_center + (1 << (h + 2)), h + 3))
        orbit = OrbitSpec(_locate(_pair_orbit(m, L), locs), locs, INDIFFERENT_NATURE)
        e.orbits.append(orbit)
        e.pieces.extend(_annuli(f, orbit, h + 4, v + 1, L, "E4'"))
    return e


def _d_mod0(d: int, L: int) -> Expected:
    v = int(_v(d))
    n0 = v // 2 + 1
    e = Expected("", transient=[Ball(1, 1)])
    if v == 2:
        w = _v(d - 4)
        if w == 3:
            e.subcase = "(1) v2(d)=2, v2(d-4)=3"
            balls = [(0, 2), (2, 3), (6, 3)]
        else:
            e.subcase = "(2) v2(d)=2, v2(d-4)=4"
            balls = [(0, 2), (2, 4), (6, 4), (10, 4), (14, 4)]
        e.pieces = [Piece(f"{c}+2^{lv}", TypeI(0), (c,), lv) for c, lv in balls]
    elif v % 2:
        e.subcase = "(3) v2(d) odd"
        for n in range(2, n0 + 1):
            e.pieces.append(Piece(f"E1 n={n}", TypeI(n - 2), (1 << (n - 1),), n))
        e.pieces.append(Piece("E2", TypeI(n0 - 1), (0,), n0))
    else:
        e.subcase = "(4) v2(d)>=4 even"
        for n in range(2, n0):
            e.pieces.append(Piece(f"E1' n={n}", TypeI(n - 2), (1 << (n - 1),), n))
        e.pieces.append(Piece("E2'", TypeI(n0 - 2), (0,), n0))
        e.pieces.append(Piece("E3'", TypeI(int(_v(d - (1 << v))) - n0), (1 << (n0 - 1),), n0))
    return e


_ABC = {1: (1, 25, 9), 2: (1, 9, 25), 3: (9, 1, 17), 4: (9, 17, 1)}


def _d_mod1(d: int, L: int) -> Expected:
    f = QuadFixture("XSqPlusXMinusD_mod1", d).polynomial()
    t = (d - 5) // 8
    vt = _v(t)
    e = Expected("", transient=[Ball(0, 1)])
    e.pieces.append(_II_ball("3+4Z", 3, 2, 1))
    if vt <= 1:
        e.subcase = "v2(t)<=1"
        e.pieces.append(_II_ball("1+4Z", 1, 2, int(vt) + 2))
        return e
    if vt == 2:
        row = 1 if _v(t - 4) == 3 else 2
    else:
        row = 3 if vt == 3 else 4
    a, b, c = _ABC[row]
    e.subcase = f"v2(t)>=2 row ({row})"
    locs = (Ball(c, 5), Ball(f(c), 5))
    orbit = OrbitSpec(_locate(_roots(4 * (d - 1), -2, L), locs), locs, INDIFFERENT_NATURE)
    e.orbits.append(orbit)
    e.pieces.append(Piece("E1", TypeII(3), (a, f(a)), 4))
    e.pieces.append(Piece("E2", TypeII(3), (b, f(b)), 5))
    e.pieces.extend(_annuli(f, orbit, 6, 3, L, "E3"))
    return e


def _d_mod2(d: int, L: int) -> Expected:
    f = QuadFixture("XSqPlusXMinusD_mod2", d).polynomial()
    w = _v(d - 2)
    e = Expected("", transient=[Ball(1, 1)])
    if w == 2:
        e.subcase = "(1) v2(d-2)=2"
        e.pieces.append(_II_ball("2Z", 0, 1, 1))
        return e
    split, orbit_at = (0, 4) if w == 3 else (4, 0)
    e.subcase = "(2) v2(d-2)=3" if w == 3 else "(3) v2(d-2)>=4"
    e.pieces.append(Piece("II-[1] pair", TypeII(1), (split, f(split)), 3))
    locs = (Ball(orbit_at, 3), Ball(f(orbit_at), 3))
    orbit = OrbitSpec(_locate(_roots(4 * (d - 1), -2, L), locs), locs, INDIFFERENT_NATURE)
    e.orbits.append(orbit)
    e.pieces.extend(_annuli(f, orbit, 4, 2, L, "annulus"))
    return e


def _d_mod3(d: int, L: int) -> Expected:
    return Expected("d = 3 mod 4", pieces=[Piece("1+2Z", TypeI(0), (1,), 1)],
                    transient=[Ball(0, 1)])


def check_hypotheses(fx: QuadFixture, max_level: int) -> None:
    """Raise DomainError if the parameter is outside the family or too deep for max_level."""
    fam, q = fx.family, fx.param
    deep = max_level - 3
    if fam in ("XSqPlus1m4mX", "XSqPlusNeg1m4mX_odd", "XSqPlusNeg1m4mX_even"):
        v = _v(q)
        if q == 0:
            raise DomainError("m = 0 is not covered by this family")
        if v >= deep:
            raise DomainError(f"v2(m) = {v} >= max_level - 3; use a larger max_level")
        if fam.endswith("_odd") and v % 2 != 1:
            raise DomainError("family needs v2(m) odd")
        if fam.endswith("_even") and (v == 0 or v % 2):
            raise DomainError("family needs v2(m) even and positive")
    if fam.startswith("XSqPlusXMinusD"):
        if has_sqrt_z2(q):
            raise DomainError(f"d = {q} has a square root in Z_2")
        if q % 4 != int(fam[-1]):
            raise DomainError(f"d = {q} is not {fam[-1]} mod 4")
        if fam.endswith("mod0") and _v(q) >= deep:
            raise DomainError(f"v2(d) >= max_level - 3; use a larger max_level")
    if fam == "XSqPlusX" and q != 0:
        raise DomainError("the x^2+x family has no parameter")


def expected(fx: QuadFixture, max_level: int) -> Expected:
    """The symbolic decomposition, with infinite families listed up to max_level."""
    check_hypotheses(fx, max_level)
    L, q = max_level, fx.param
    builders = {
        "XSqMinusLambda": lambda: _lambda(q, L),
        "XSqPlusX": lambda: _x2_plus_x(L),
        "XSqPlus1m4mX": lambda: _one_minus_4m(q, L),
        "XSqPlusNeg1m4mX_odd": lambda: _neg_odd(q, L),
        "XSqPlusNeg1m4mX_even": lambda: _neg_even(q, L),
        "XSqPlusXMinusD_mod0": lambda: _d_mod0(q, L),
        "XSqPlusXMinusD_mod1": lambda: _d_mod1(q, L),
        "XSqPlusXMinusD_mod2": lambda: _d_mod2(q, L),
        "XSqPlusXMinusD_mod3": lambda: _d_mod3(q, L),
    }
    e = builders[fx.family]()
    e.pieces = [pc for pc in e.pieces if min(b.level for b in piece_region(pc)) <= L]
    return e


# ---------------------------------------------------------------- expansion

def expand_piece(f: IntPoly, pc: Piece) -> List[List[Ball]]:
    """Minimal components of a piece, as ball lists at the component level."""
    lv = pc.component_level
    step = 1 << pc.level
    subs = [pc.centers[0] + t * step for t in range(1 << pc.tag.k)]
    if pc.tag.kind == "I":
        return [[Ball(u, lv)] for u in subs]
    mod = 1 << lv
    return [[Ball(u, lv), Ball(f.eval_int_mod(u, mod), lv)] for u in subs]


def closed_form(fx: QuadFixture, max_level: int) -> Decomposition:
    """Expand a fixture into a Decomposition modulo 2^max_level.

    Components finer than max_level and the remaining neighborhoods of the
    orbits are reported as undecided.
    """
    L = max_level
    e = expected(fx, L)
    f = fx.polynomial()
    comps = []
    for pc in e.pieces:
        if pc.component_level <= L:
            comps.extend(make_component(bs) for bs in expand_piece(f, pc))
    comps.sort(key=lambda c: c.sort_key())
    orbits = []
    for o in e.orbits:
        pts = o.points
        i = pts.index(min(pts))
        pts = pts[i:] + pts[:i]
        orbits.append(PeriodicOrbitApprox(len(pts), pts, o.nature, _derivative_valuation(f, pts, L), L, 2))
    basin = []
    for i, o in enumerate(e.orbits):
        for b in o.basin:
            pts = [x for x in o.points if b.contains(x)]
            pieces = [b]
            for x in pts:
                pieces = [q for pc in pieces for q in
                          (_complement(pc, x, L) if pc.contains(x) else [pc])]
            basin.extend(BasinBall(q, Target("orbit", _orbit_index(orbits, o))) for q in pieces)
    basin.extend(BasinBall(b, Target("invariant", 0)) for b in e.transient)
    covered = set()
    for o in orbits:
        covered.update(o.points)
    for c in comps:
        covered.update(c.residues(L))
    for bb in basin:
        covered.update(bb.ball.residues(L) if bb.ball.level <= L else [bb.ball.center])
    rest = [Ball(x, L) for x in range(1 << L) if x not in covered]
    undecided = tuple(UndecidedBall(b, "finer than max_level") for b in merged_form(rest))
    return Decomposition(2, f, L, tuple(sorted(orbits, key=lambda o: o.points)), tuple(comps),
                         tuple(sorted(basin, key=lambda bb: bb.ball.sort_key())), undecided, L)


def piece_region(pc: Piece) -> List[Ball]:
    """The set a piece describes, with sibling balls merged."""
    return merged_form([Ball(c, pc.level) for c in pc.centers])


def self_consistency(fx: QuadFixture, max_level: int) -> List[str]:
    """Problems with the fixture's own bookkeeping modulo 2^max_level.

    Pieces, orbit points, basins and transient balls must cover every residue exactly once.
    """
    L = max_level
    mod = 1 << L
    e = expected(fx, L)
    counts = np.zeros(mod, dtype=np.int32)

    def add(b: Ball):
        if b.level >= L:
            counts[b.center % mod] += 1
        else:
            counts[b.center % b.modulus::b.modulus] += 1

    for pc in e.pieces:
        for b in piece_region(pc):
            add(b)
    for o in e.orbits:
        for b in o.basin:
            add(b)
        for x in o.points:
            if not any(b.contains(x) for b in o.basin):
                add(Ball(x, L))
    for b in e.transient:
        add(b)
    problems = []
    over = np.flatnonzero(counts > 1)
    if over.size:
        problems.append(f"{over.size} residues mod 2^{L} covered twice, e.g. {int(over[0])}")
    gaps = np.flatnonzero(counts == 0)
    if gaps.size:
        problems.append(f"{gaps.size} residues mod 2^{L} not covered, e.g. {int(gaps[0])}")
    return problems


def _derivative_valuation(f: IntPoly, pts, L: int):
    _, der = iterate_derivative(f, len(pts), pts[0], 1 << L)
    return vp(der, 2)


def _orbit_index(orbits, spec: OrbitSpec) -> int:
    ordered = sorted(orbits, key=lambda o: o.points)
    return next(i for i, o in enumerate(ordered) if set(o.points) == set(spec.points))


# ---------------------------------------------------------------- verification

@dataclass
class VerifyReport:
    fixture: QuadFixture
    max_level: int
    subcase: str
    expected_components: int
    engine_components: int
    mismatches: List[str] = field(default_factory=list)

    @property
    def matched(self) -> bool:
        return not self.mismatches

    def __str__(self):
        head = (f"{self.fixture.family}({self.fixture.param}) {self.subcase} at level "
                f"{self.max_level}: {self.expected_components} expected / "
                f"{self.engine_components} engine components")
        if self.matched:
            return head + ": MATCH"
        return head + ": MISMATCH\n" + "\n".join("  " + m for m in self.mismatches)


def _residue_set(balls, L: int) -> frozenset:
    out = set()
    for b in balls:
        out.update(b.residues(L) if b.level <= L else [b.center % (1 << L)])
    return frozenset(out)


def _show(balls) -> str:
    return "{" + ", ".join(str(b) for b in merged_form(balls)) + "}"


def compare(closed: Decomposition, engine: Decomposition, orbit_specs: List[OrbitSpec],
            report: VerifyReport) -> None:
    L = closed.max_level
    want = {_residue_set(c.balls, L): c for c in closed.B}
    got = {_residue_set(c.balls, L): c for c in engine.B}
    for key in sorted(set(want) - set(got), key=lambda k: want[k].sort_key()):
        report.mismatches.append(f"missing component {_show(want[key].balls)}")
    for key in sorted(set(got) - set(want), key=lambda k: got[k].sort_key()):
        report.mismatches.append(f"unexpected component {_show(got[key].balls)}")

    engine_orbits = {frozenset(o.points): o for o in engine.A}
    for spec in orbit_specs:
        hit = engine_orbits.pop(frozenset(x % (1 << L) for x in spec.points), None)
        if hit is None:
            report.mismatches.append(f"missing orbit {spec.points} in {_show(spec.locations)}")
            continue
        if hit.nature != spec.nature:
            report.mismatches.append(f"orbit {hit.points} is {hit.nature}, expected {spec.nature}")
        for loc in spec.locations:
            if sum(loc.contains(x) for x in hit.points) != 1:
                report.mismatches.append(f"orbit {hit.points} not located in {loc}")
        if spec.basin:
            idx = engine.A.index(hit)
            claimed = [b for b in hit.balls()]
            claimed += [e.ball for e in engine.C if e.target == Target("orbit", idx)]
            if _residue_set(claimed, L) != _residue_set(spec.basin, L):
                report.mismatches.append(f"basin of {hit.points} differs from {_show(spec.basin)}")
    for o in engine_orbits.values():
        report.mismatches.append(f"unexpected orbit {o.points} ({o.nature})")

    if not any(spec.basin for spec in orbit_specs):
        want_c = _residue_set([e.ball for e in closed.C], L)
        got_c = _residue_set([e.ball for e in engine.C], L)
        if want_c != got_c:
            report.mismatches.append(
                f"transient region differs: {len(got_c - want_c)} extra, "
                f"{len(want_c - got_c)} missing residues mod 2^{L}")


def verify_against_engine(fx: QuadFixture, max_level: int) -> VerifyReport:
    """Compare the closed form with the engine, component by component, modulo 2^max_level."""
    e = expected(fx, max_level)
    closed = closed_form(fx, max_level)
    engine = minimal_decomposition(fx.polynomial(), max_level, depth=max_level)
    report = VerifyReport(fx, max_level, e.subcase, len(closed.B), len(engine.B))
    compare(closed, engine, e.orbits, report)
    return report


# ---------------------------------------------------------------- dispatch

def fixture_for(nf: QuadNormalForm) -> Tuple[QuadFixture, Optional[int]]:
    """Fixture family of a normal form.

    Returns the fixture and, when the x^2+(-1-4m)x reduction with v2(m) = 0
    was applied, the extra shift of that conjugacy.
    """
    q = nf.param
    if nf.kind == "XSqMinusLambda":
        return QuadFixture("XSqMinusLambda", q), None
    if nf.kind == "XSqPlusXMinusD":
        return QuadFixture(f"XSqPlusXMinusD_mod{q % 4}", q), None
    if q == 1:
        return QuadFixture("XSqPlusX", 0), None
    if q == -1:
        raise DomainError("x^2-x is not covered by the fixture families")
    if q % 4 == 1:
        return QuadFixture("XSqPlus1m4mX", (1 - q) // 4), None
    m = (-1 - q) // 4
    shift = None
    if m % 2:
        # x -> x - 4m - 2 conjugates to the same form with m' = -m - 1
        shift, m = -4 * m - 2, -m - 1
    fam = "XSqPlusNeg1m4mX_odd" if vp(m, 2).value % 2 else "XSqPlusNeg1m4mX_even"
    return QuadFixture(fam, m), shift


def fixture_for_quadratic(a: int, b: int, c: int, max_level: int):
    """(normal form, fixture, extra shift) for ax^2+bx+c."""
    nf = normal_form_2adic(a, b, c, max_level)
    fx, shift = fixture_for(nf)
    return nf, fx, shift


# ---------------------------------------------------------------- catalog

def load_catalog() -> List[dict]:
    """The fixture catalog shipped with the package."""
    text = resources.files("padicdyn").joinpath("data/fixtures.json").read_text()
    return json.loads(text)["fixtures"]


def catalog_entry(fx: QuadFixture, max_level: int) -> dict:
    """Symbolic fixture content in the decomposition ball schema."""
    e = expected(fx, max_level)
    return {
        **fx.to_json(),
        "polynomial": fx.polynomial().pretty(),
        "subcase": e.subcase,
        "pieces": [{"label": pc.label, "type": str(pc.tag),
                    "balls": [Ball(c, pc.level).to_json() for c in pc.centers]}
                   for pc in e.pieces],
        "orbits": [{"locations": [b.to_json() for b in o.locations], "nature": o.nature,
                    "basin": [b.to_json() for b in o.basin]} for o in e.orbits],
        "transient": [b.to_json() for b in e.transient],
    }


CATALOG_LEVEL = 10

CATALOG_PARAMS: Tuple[Tuple[str, int], ...] = (
    *(("XSqMinusLambda", q) for q in (4, 8, 0, 1, 5, 2, 6, 3, 7)),
    ("XSqPlusX", 0),
    *(("XSqPlus1m4mX", m) for m in (1, 3, -1, 2, 6, -2, 4, 12)),
    *(("XSqPlusNeg1m4mX_odd", m) for m in (2, 6, -2, 8, 24, -8)),
    *(("XSqPlusNeg1m4mX_even", m) for m in (12, -4, 36, 4, 20, 52, 48, 80, 16, 144)),
    *(("XSqPlusXMinusD_mod0", d) for d in (12, -4, 20, -12, 8, 24, 32, 48, 80, 112)),
    *(("XSqPlusXMinusD_mod1", d) for d in (13, 21, 29, -3, 101, -27, 37, 165, 69, 197, 5, 133)),
    *(("XSqPlusXMinusD_mod2", d) for d in (6, 14, 10, 26, 18, 2, 34)),
    *(("XSqPlusXMinusD_mod3", d) for d in (3, 7, -1)),
)


def build_catalog(max_level: int = CATALOG_LEVEL) -> dict:
    return {"max_level": max_level,
            "fixtures": [catalog_entry(QuadFixture(fam, q), max_level) for fam, q in CATALOG_PARAMS]}
