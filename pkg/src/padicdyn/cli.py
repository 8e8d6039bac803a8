"""Command-line entry point.

Polynomials are given as comma-separated coefficients in ASCENDING degree:
``--poly 0,1,1`` is x^2+x and ``--poly -3,1,1`` is x^2+x-3.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from contextlib import contextmanager
from dataclasses import dataclass
from typing import List, Optional, Sequence, TextIO

from .classify import classify, cycle_data, growth_test_p3_level1
from .decomposition import (
    Decomposition,
    Target,
    default_depth,
    default_max_level,
    merged_form,
    minimal_decomposition,
    period4_precondition_p2,
    possible_periods,
)
from .induced import Cycle, find_cycles
from .lift_engine import ATTRACTING, MINIMAL, SPLITS_FOREVER, LiftNode, build_lift_tree
from .oracle import cross_check
from .padic_core import PadicError, ResourceError, check_prime
from .poly import Affine, IntPoly
from .quad2_fixtures import fixture_for_quadratic, verify_against_engine

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2, 3

LEAF_SHAPES = {
    MINIMAL: "box",
    SPLITS_FOREVER: "diamond",
    ATTRACTING: "doublecircle",
}


class UsageError(Exception):
    """Invalid flag combination detected after parsing."""


@dataclass
class RunConfig:
    subcommand: str
    prime: Optional[int] = None
    poly: Optional[str] = None
    max_level: Optional[int] = None
    format: str = "text"
    oracle_depth: Optional[int] = None
    budget: Optional[int] = None
    seed: int = 0

    @staticmethod
    def from_args(ns: argparse.Namespace) -> "RunConfig":
        cfg = RunConfig(ns.command, getattr(ns, "prime", None), getattr(ns, "poly", None),
                        getattr(ns, "max_level", None), getattr(ns, "format", "text"),
                        getattr(ns, "oracle_depth", None), ns.budget, getattr(ns, "seed", 0))
        cfg.validate()
        return cfg

    def validate(self) -> None:
        if self.prime is not None:
            try:
                check_prime(self.prime)
            except PadicError as exc:
                raise UsageError(str(exc)) from exc
        if self.max_level is not None and self.max_level < 1:
            raise UsageError("--max-level must be positive")
        if self.oracle_depth is not None and self.oracle_depth < 0:
            raise UsageError("--oracle-depth must be non-negative")
        if self.budget is not None and self.budget < 1:
            raise UsageError("--budget must be positive")

    def polynomial(self) -> IntPoly:
        return IntPoly.parse(self.poly, self.prime)


def _int_list(text: str) -> List[int]:
    try:
        return [int(t) for t in text.replace(" ", "").split(",") if t]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="padicdyn",
        description="Minimal decompositions of polynomial dynamics on Z_p. "
                    "Coefficients are given in ascending degree: --poly 0,1,1 means x^2+x.")
    ap.add_argument("--budget", type=int, help="residue enumeration budget (overrides PADIC_BUDGET)")
    sub = ap.add_subparsers(dest="command", required=True)

    def poly_args(p, poly_required=True):
        p.add_argument("--prime", type=int, required=True)
        p.add_argument("--poly", required=poly_required,
                       help="ascending coefficients, e.g. 0,1,1 for x^2+x")

    d = sub.add_parser("decompose", help="A/B/C decomposition up to a level")
    poly_args(d)
    d.add_argument("--max-level", type=int)
    d.add_argument("--depth", type=int, help="extra levels explored below max-level ancestry")
    d.add_argument("--format", choices=("text", "json"), default="text")
    d.add_argument("--oracle-depth", type=int,
                   help="cross-check components by brute force this many levels deeper")

    c = sub.add_parser("classify", help="linearization data and behavior of a cycle")
    poly_args(c)
    c.add_argument("--level", type=int, required=True)
    c.add_argument("--cycle", type=_int_list, required=True, help="x1,..,xk")
    c.add_argument("--format", choices=("text", "json"), default="text")

    t = sub.add_parser("lift-tree", help="lift tree of a cycle (all level cycles if --cycle is omitted)")
    poly_args(t)
    t.add_argument("--level", type=int, default=2)
    t.add_argument("--cycle", type=_int_list)
    t.add_argument("--max-level", type=int)
    t.add_argument("--expand", action="store_true", help="unfold minimal regions for display")
    t.add_argument("--format", choices=("dot", "json", "text"), default="dot")

    p = sub.add_parser("periods", help="possible periods of periodic points")
    poly_args(p, poly_required=False)
    p.add_argument("--format", choices=("text", "json"), default="text")

    v = sub.add_parser("verify-quadratic", help="compare a 2-adic quadratic with its closed form")
    v.add_argument("--a", type=int, required=True)
    v.add_argument("--b", type=int, required=True)
    v.add_argument("--c", type=int, required=True)
    v.add_argument("--max-level", type=int, default=12)
    v.add_argument("--format", choices=("text", "json"), default="text")

    o = sub.add_parser("oracle-check", help="engine against brute force on random polynomials")
    o.add_argument("--seed", type=int, default=0)
    o.add_argument("--count", type=int, default=50)
    o.add_argument("--primes", type=_int_list, default=[2, 3, 5])
    o.add_argument("--max-level", type=int, default=8)
    o.add_argument("--oracle-depth", type=int, default=6)
    o.add_argument("--format", choices=("text", "json"), default="text")
    return ap


# ---------------------------------------------------------------- rendering

def _target_text(t: Target) -> str:
    if t.kind == "cycle":
        return f"cycle {t.cycle} mod {t.cycle.prime}^{t.cycle.level}"
    return f"{t.kind} {t.index}"


def _balls_text(balls) -> str:
    return " u ".join(str(b) for b in merged_form(balls))


def decomposition_text(dec: Decomposition) -> str:
    p = dec.prime
    lines = [f"f = {dec.poly.pretty()} over Z_{p}, max level {dec.max_level}, depth {dec.depth}",
             f"A: {len(dec.A)} periodic orbit(s)"]
    for i, o in enumerate(dec.A):
        lines.append(f"  [{i}] period {o.period} {o.nature} points {list(o.points)} mod {p}^{o.level}"
                     f" v(derivative)={o.derivative_valuation}")
    lines.append(f"B: {len(dec.B)} minimal component(s)")
    for i, c in enumerate(dec.B):
        lines.append(f"  [{i}] {_balls_text(c.balls)}  k={c.k} d={c.d} growth_start={c.growth_start}")
    lines.append(f"C: {len(dec.C)} basin ball(s)")
    for e in dec.C:
        lines.append(f"  {e.ball} -> {_target_text(e.target)}")
    lines.append(f"undecided: {len(dec.undecided)} ball(s)")
    for u in dec.undecided:
        lines.append(f"  {u.ball} ({u.reason})")
    return "\n".join(lines)


def _node_id(node: LiftNode) -> str:
    c = node.cycle
    return f"n{c.level}_{c.points[0]}"


def _short_cycle(c: Cycle, limit: int = 4) -> str:
    pts = ",".join(map(str, c.points[:limit]))
    return f"({pts}{',...' if c.length > limit else ''})"


def tree_json(node: LiftNode) -> dict:
    out = {"id": [node.cycle.level, node.cycle.points[0]], "cycle": node.cycle.to_json(),
           "behavior": str(node.behavior) if node.behavior else None}
    if node.data is not None:
        out["A_n"] = node.data.A.to_json()
        out["B_n"] = node.data.B.to_json()
    if node.fate is not None:
        out["fate"] = node.fate.describe()
    out["children"] = [tree_json(ch) for ch in node.children]
    return out


def tree_dot(roots: Sequence[LiftNode]) -> str:
    lines = ["digraph lift_tree {", "  node [fontname=\"monospace\"];"]
    for root in roots:
        for nd in root.walk():
            c = nd.cycle
            label = f"{_short_cycle(c)} mod {c.prime}^{c.level}\\nk={c.length} {nd.behavior or ''}"
            if not nd.children and nd.fate is not None:
                label += f"\\n{nd.fate.describe()}"
                shape = LEAF_SHAPES.get(nd.fate.kind, "octagon")
            else:
                shape = "ellipse"
            lines.append(f"  {_node_id(nd)} [label=\"{label}\", shape={shape}];")
            for ch in nd.children:
                lines.append(f"  {_node_id(nd)} -> {_node_id(ch)};")
    lines.append("}")
    return "\n".join(lines)


def tree_text(node: LiftNode, indent: int = 0) -> List[str]:
    c = node.cycle
    line = f"{'  ' * indent}{_short_cycle(c)} mod {c.prime}^{c.level} k={c.length} {node.behavior or ''}"
    if not node.children and node.fate is not None:
        line += f" -> {node.fate.describe()}"
    out = [line.rstrip()]
    for ch in node.children:
        out.extend(tree_text(ch, indent + 1))
    return out


# ---------------------------------------------------------------- commands

def _emit(out: TextIO, fmt: str, text: str, payload) -> None:
    if fmt == "json":
        out.write(json.dumps(payload, indent=2) + "\n")
    else:
        out.write(text + "\n")


def cmd_decompose(ns, cfg: RunConfig, out: TextIO) -> int:
    f = cfg.polynomial()
    L = cfg.max_level or default_max_level(cfg.prime)
    dec = minimal_decomposition(f, L, depth=ns.depth if ns.depth is not None else default_depth(L))
    problems = cross_check(dec, cfg.oracle_depth) if cfg.oracle_depth is not None else []
    payload = dec.to_json()
    text = decomposition_text(dec)
    if cfg.oracle_depth is not None:
        payload["oracle"] = {"depth": cfg.oracle_depth, "problems": problems}
        text += f"\noracle check: {'OK' if not problems else 'MISMATCH'}"
        text += "".join(f"\n  {m}" for m in problems)
    _emit(out, cfg.format, text, payload)
    return EXIT_MISMATCH if problems else EXIT_OK


def _cycle_arg(f: IntPoly, level: int, points: Sequence[int]) -> Cycle:
    mod = f.prime ** level
    c = Cycle.canonical(level, [x % mod for x in points], f.prime)
    c.validate(f)
    return c


def cmd_classify(ns, cfg: RunConfig, out: TextIO) -> int:
    f = cfg.polynomial()
    c = _cycle_arg(f, ns.level, ns.cycle)
    data = cycle_data(f, c)
    beh = classify(f, c, data)
    payload = {**data.to_json(), "cycle": list(c.points), "behavior": str(beh)}
    lines = [f"cycle {c} of f_{c.level}, length {c.length}",
             f"a_n = {data.a}  A_n = {data.A}",
             "b_n = " + ", ".join(f"{x}: {b}" for x, b in sorted(data.b_per_point.items()))
             + f"  B_n = {data.B}",
             f"behavior: {beh}"]
    if f.prime == 3 and c.level == 1 and beh.grows:
        lifted = growth_test_p3_level1(f, c)
        payload["lift_grows"] = lifted
        lines.append(f"lift grows: {'yes' if lifted else 'no'}")
    _emit(out, cfg.format, "\n".join(lines), payload)
    return EXIT_OK


def cmd_lift_tree(ns, cfg: RunConfig, out: TextIO) -> int:
    f = cfg.polynomial()
    L = cfg.max_level or default_max_level(cfg.prime)
    if ns.cycle:
        roots_c = [_cycle_arg(f, ns.level, ns.cycle)]
    else:
        roots_c = find_cycles(f, ns.level).cycles
    roots = [build_lift_tree(f, c, L, expand=ns.expand) for c in roots_c]
    if cfg.format == "dot":
        out.write(tree_dot(roots) + "\n")
    elif cfg.format == "json":
        out.write(json.dumps([tree_json(r) for r in roots], indent=2) + "\n")
    else:
        out.write("\n".join(line for r in roots for line in tree_text(r)) + "\n")
    return EXIT_OK


def cmd_periods(ns, cfg: RunConfig, out: TextIO) -> int:
    p = cfg.prime
    periods = sorted(possible_periods(p))
    payload = {"prime": p, "periods": periods}
    lines = [" ".join(map(str, periods))]
    if cfg.poly is not None:
        if p != 2:
            raise UsageError("--poly is only meaningful for --prime 2 (period-4 precondition)")
        perm = period4_precondition_p2(cfg.polynomial())
        payload["f1_permutation"] = perm
        lines.append("f_1 is a permutation: period 4 possible" if perm
                     else "f_1 is not a permutation: period 4 excluded")
    _emit(out, cfg.format, "\n".join(lines), payload)
    return EXIT_OK


def _affine_text(h: Affine) -> str:
    if h.is_identity:
        return "identity"
    shift = f"{h.shift:+d}" if h.shift else ""
    scale = {1: "", -1: "-"}.get(h.scale, str(h.scale))
    return f"x -> {scale}x{shift}"


def _component_set_text(dec: Decomposition, limit: int = 8) -> str:
    if len(dec.B) > limit:
        return f"{len(dec.B)} components"
    return "{" + ", ".join(_balls_text(c.balls) for c in dec.B) + "}"


def cmd_verify_quadratic(ns, cfg: RunConfig, out: TextIO) -> int:
    L = cfg.max_level
    nf, fx, shift = fixture_for_quadratic(ns.a, ns.b, ns.c, L)
    report = verify_against_engine(fx, L)
    engine = minimal_decomposition(fx.polynomial(), L, depth=L)
    form = nf.describe()
    if shift is not None:
        form += f" ~ {fx.polynomial().pretty()}"
    verdict = "MATCH" if report.matched else "MISMATCH"
    head = f"normal form {form}; B = {_component_set_text(engine)}; fixture {verdict}"
    lines = [head]
    if not nf.conjugacy.is_identity or shift is not None:
        lines.append(f"conjugacy: {_affine_text(nf.conjugacy)}"
                     + (f", then x -> x{shift:+d}" if shift is not None else ""))
    lines.extend(f"  {m}" for m in report.mismatches)
    payload = {"normal_form": nf.describe(), "fixture": fx.to_json(), "subcase": report.subcase,
               "conjugacy": {"scale": nf.conjugacy.scale, "shift": nf.conjugacy.shift},
               "extra_shift": shift, "max_level": L, "matched": report.matched,
               "expected_components": report.expected_components,
               "engine_components": report.engine_components, "mismatches": report.mismatches}
    _emit(out, cfg.format, "\n".join(lines), payload)
    return EXIT_OK if report.matched else EXIT_MISMATCH


def cmd_oracle_check(ns, cfg: RunConfig, out: TextIO) -> int:
    rng = random.Random(cfg.seed)
    for p in ns.primes:
        check_prime(p)
    results = []
    for _ in range(ns.count):
        p = rng.choice(ns.primes)
        f = IntPoly.random(rng, p, rng.randint(2, 4))
        dec = minimal_decomposition(f, cfg.max_level)
        results.append((f, cross_check(dec, cfg.oracle_depth)))
    bad = [(f, pr) for f, pr in results if pr]
    lines = [f"FAIL p={f.prime} {f.pretty()}: {'; '.join(pr)}" for f, pr in bad]
    lines.append(f"checked {len(results)} polynomials at max level {cfg.max_level}: "
                 f"{len(bad)} mismatch(es)")
    payload = {"seed": cfg.seed, "count": len(results), "max_level": cfg.max_level,
               "failures": [{"prime": f.prime, "poly": list(f.coeffs), "problems": pr}
                            for f, pr in bad]}
    _emit(out, cfg.format, "\n".join(lines), payload)
    return EXIT_MISMATCH if bad else EXIT_OK


COMMANDS = {
    "decompose": cmd_decompose,
    "classify": cmd_classify,
    "lift-tree": cmd_lift_tree,
    "periods": cmd_periods,
    "verify-quadratic": cmd_verify_quadratic,
    "oracle-check": cmd_oracle_check,
}


@contextmanager
def _budget_env(budget: Optional[int]):
    if budget is None:
        yield
        return
    old = os.environ.get("PADIC_BUDGET")
    os.environ["PADIC_BUDGET"] = str(budget)
    try:
        yield
    finally:
        if old is None:
            os.environ.pop("PADIC_BUDGET", None)
        else:
            os.environ["PADIC_BUDGET"] = old


_VALUE_FLAGS = ("--poly", "--cycle", "--primes", "--a", "--b", "--c")


def _attach_values(argv: Sequence[str]) -> List[str]:
    """Turn "--poly -3,1,1" into "--poly=-3,1,1" so negative values are not read as flags."""
    out, i = [], 0
    while i < len(argv):
        tok = argv[i]
        if tok in _VALUE_FLAGS and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def run(argv: Optional[Sequence[str]] = None, out: TextIO = None, err: TextIO = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    argv = _attach_values(sys.argv[1:] if argv is None else list(argv))
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        cfg = RunConfig.from_args(ns)
        with _budget_env(cfg.budget):
            return COMMANDS[ns.command](ns, cfg, out)
    except UsageError as exc:
        parser.print_usage(err)
        err.write(f"error: {exc}\n")
        return EXIT_USAGE
    except ResourceError as exc:
        err.write(f"resource budget exceeded: {exc}\n")
        return EXIT_RESOURCE
    except PadicError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())
