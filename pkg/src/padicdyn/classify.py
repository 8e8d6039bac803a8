"""Linearization data of a cycle and its behavior class."""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Dict, Optional

from .induced import Cycle
from .padic_core import (
    DomainError,
    IntegrityError,
    Valuation,
    mul_order,
    vp,
)
from .poly import IntPoly


class DiagnosticWarning(UserWarning):
    """A documented assumption was observed to fail at runtime."""


def working_digits(n: int) -> int:
    return 2 * n + 4


@dataclass(frozen=True)
class Behavior:
    """Behavior tag.  name is one of Grows, Splits, PartiallySplits, GrowsTails
    (p >= 3) or StronglyGrows, WeaklyGrows, StronglySplits, WeaklySplits,
    GrowsTails (p = 2)."""

    name: str
    d: Optional[int] = None

    @property
    def grows(self) -> bool:
        return self.name in ("Grows", "StronglyGrows", "WeaklyGrows")

    @property
    def splits(self) -> bool:
        return self.name in ("Splits", "StronglySplits", "WeaklySplits")

    @property
    def tails(self) -> bool:
        return self.name == "GrowsTails"

    def __str__(self):
        return f"PartiallySplits({self.d})" if self.name == "PartiallySplits" else self.name


GROWS = Behavior("Grows")
SPLITS = Behavior("Splits")
GROWS_TAILS = Behavior("GrowsTails")
STRONGLY_GROWS = Behavior("StronglyGrows")
WEAKLY_GROWS = Behavior("WeaklyGrows")
STRONGLY_SPLITS = Behavior("StronglySplits")
WEAKLY_SPLITS = Behavior("WeaklySplits")


def PartiallySplits(d: int) -> Behavior:
    return Behavior("PartiallySplits", d)


def iterate_derivative(f: IntPoly, k: int, x: int, modulus: int):
    """(f^k(x), (f^k)'(x)) modulo ``modulus`` by the chain rule."""
    df = f.derivative()
    y, der = x % modulus, 1
    for _ in range(k):
        der = der * df.eval_int_mod(y, modulus) % modulus
        y = f.eval_int_mod(y, modulus)
    return y, der


def _base_point(c: Cycle, x: Optional[int]) -> int:
    if x is None:
        return c.points[0]
    if x % c.modulus not in c.points:
        raise IntegrityError(f"{x} does not lie over the cycle {c}")
    return x


def compute_an(f: IntPoly, c: Cycle, x: Optional[int] = None, raw: bool = False) -> int:
    """a_n(x) = product of f'(f^j(x)) over one period, mod p^n.

    With raw=True the value is returned modulo p^(2n+4) instead, which for
    small cycles is the plain integer product.
    """
    n, p = c.level, c.prime
    x = _base_point(c, x)
    w = p ** working_digits(n)
    y, der = iterate_derivative(f, c.length, x, w)
    if (y - x) % c.modulus:
        raise IntegrityError(f"{c} is not a cycle of f_{n}")
    return der if raw else der % c.modulus


def bn_exact(f: IntPoly, c: Cycle, x: int, digits: int) -> int:
    """(f^k(x) - x)/p^n modulo p^digits."""
    n, p = c.level, c.prime
    mod = p ** (n + digits)
    g = f.iterate_int_mod(c.length, x, mod)
    diff = (g - x) % mod
    if diff % c.modulus:
        raise IntegrityError(f"p^{n} does not divide f^k(x) - x at x={x}")
    return diff // c.modulus


def compute_bn(f: IntPoly, c: Cycle, x: Optional[int] = None) -> int:
    """b_n(x) = (f^k(x) - x)/p^n, reported mod p^n."""
    x = _base_point(c, x)
    return bn_exact(f, c, x, c.level) % c.modulus


_EXACT_BITS = 1 << 12


def exact_periodic(f: IntPoly, x: int, k: int) -> bool:
    """Whether the integer x satisfies f^k(x) = x exactly (so it is a genuine periodic point)."""
    y = x
    for _ in range(k):
        y = f(y)
        if y.bit_length() > _EXACT_BITS:
            return False
    return y == x


@dataclass(frozen=True)
class CycleData:
    """(a_n, b_n, A_n, B_n) of a cycle, read at its smallest point.

    a is a_n mod p^n.  A and B are valuations of a_n - 1 and b_n computed
    from p^(2n+4) digits, so Infinite means zero at that precision.
    """

    level: int
    length: int
    prime: int
    a: int
    a_work: int
    b: int
    b_work: int
    b_per_point: Dict[int, int]
    A: Valuation
    B: Valuation
    exact_periodic: bool = False
    a_valuation: Valuation = field(default=None)

    def capped_A(self) -> int:
        return self.A.cap(self.level)

    def capped_B(self) -> int:
        return self.B.cap(self.level)

    def to_json(self) -> dict:
        return {
            "level": self.level,
            "length": self.length,
            "a_n": self.a,
            "b_n": {str(k): v for k, v in sorted(self.b_per_point.items())},
            "A_n": self.A.to_json(),
            "B_n": self.B.to_json(),
        }


def cycle_data(f: IntPoly, c: Cycle) -> CycleData:
    n, p, k = c.level, c.prime, c.length
    f.check_level(n)
    w = working_digits(n)
    x0 = c.points[0]
    y, a_work = iterate_derivative(f, k, x0, p ** w)
    if (y - x0) % c.modulus:
        raise IntegrityError(f"{c} is not a cycle of f_{n}")
    b_work = (y - x0) % p ** w // c.modulus
    per_point = {x: compute_bn(f, c, x) for x in c.points}
    A = vp((a_work - 1) % p ** w, p)
    B = vp(b_work, p)
    return CycleData(
        level=n, length=k, prime=p,
        a=a_work % c.modulus, a_work=a_work,
        b=b_work % c.modulus, b_work=b_work,
        b_per_point=per_point, A=A, B=B,
        exact_periodic=exact_periodic(f, x0, k),
        a_valuation=vp(a_work % p ** w, p),
    )


def classify_odd(f: IntPoly, c: Cycle, data: Optional[CycleData] = None) -> Behavior:
    p = c.prime
    if p < 3:
        raise DomainError("classify_odd needs p >= 3")
    data = data or cycle_data(f, c)
    a, b = data.a % p, data.b % p
    if a == 0:
        return GROWS_TAILS
    if a == 1:
        return GROWS if b else SPLITS
    return PartiallySplits(mul_order(a, p))


def classify_two(f: IntPoly, c: Cycle, data: Optional[CycleData] = None) -> Behavior:
    if c.prime != 2:
        raise DomainError("classify_two needs p = 2")
    if c.level < 2:
        raise DomainError("2-adic cycles are classified from level 2 on")
    data = data or cycle_data(f, c)
    a4, b2 = data.a % 4, data.b % 2
    if a4 % 2 == 0:
        return GROWS_TAILS
    if a4 == 1:
        return STRONGLY_GROWS if b2 else STRONGLY_SPLITS
    return WEAKLY_GROWS if b2 else WEAKLY_SPLITS


def classify(f: IntPoly, c: Cycle, data: Optional[CycleData] = None) -> Behavior:
    if c.prime == 2:
        return classify_two(f, c, data)
    return classify_odd(f, c, data)


def growth_test_p3_level1(f: IntPoly, c: Cycle) -> bool:
    """For a growing level-1 cycle at p = 3: does its lift grow as well?

    The criterion compares b_1(x) with g''(x)/2 mod 3 (g = f^k); it is read
    at every cycle point and a DiagnosticWarning is issued if they disagree.
    """
    if c.prime != 3 or c.level != 1:
        raise DomainError("growth test applies to level-1 cycles at p = 3")
    mod = 3 ** 4
    answers = []
    for x in c.points:
        g0, _, half_g2 = f.taylor2(x, c.length, mod)
        diff = (g0 - x) % mod
        if diff % 3:
            raise IntegrityError(f"{c} is not a cycle of f_1")
        b1 = (diff // 3) % 3
        answers.append(b1 != half_g2 % 3)
    if len(set(answers)) > 1:
        warnings.warn(f"growth test for {c} depends on the cycle point: {answers}",
                      DiagnosticWarning, stacklevel=2)
    return answers[0]
