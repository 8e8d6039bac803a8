"""Integer polynomials viewed over Z_p at finite precision, and 2-adic quadratic normal forms."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Optional, Tuple

from .padic_core import (
    DomainError,
    PrecisionError,
    Residue,
    check_prime,
    has_sqrt_z2,
    sqrt_z2,
    vp,
)


@dataclass(frozen=True)
class IntPoly:
    """Polynomial with integer coefficients in ascending degree.

    ``known_precision`` is the number of p-adic digits to which the
    coefficients are meaningful; None means the integers are exact.
    """

    coeffs: Tuple[int, ...]
    prime: int
    known_precision: Optional[int] = None

    def __post_init__(self):
        check_prime(self.prime)
        cs = [int(c) for c in self.coeffs]
        while len(cs) > 1 and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs) if cs else (0,))

    @classmethod
    def parse(cls, text: str, prime: int, known_precision: Optional[int] = None) -> "IntPoly":
        """Parse comma-separated ascending coefficients, e.g. "0,1,1" for x^2+x."""
        try:
            cs = [int(t) for t in text.replace(" ", "").split(",") if t != ""]
        except ValueError as exc:
            raise DomainError(f"bad polynomial text {text!r}") from exc
        if not cs:
            raise DomainError("empty polynomial")
        return cls(tuple(cs), prime, known_precision)

    def to_text(self) -> str:
        return ",".join(str(c) for c in self.coeffs)

    @classmethod
    def random(cls, rng: random.Random, prime: int, degree: int, bound: int = 20) -> "IntPoly":
        """Coefficients uniform in [-bound, bound], leading one in [1, 9]."""
        cs = [rng.randint(-bound, bound) for _ in range(degree)] + [rng.randint(1, 9)]
        return cls(tuple(cs), prime)

    @property
    def degree(self) -> int:
        if self.coeffs == (0,):
            return -1
        return len(self.coeffs) - 1

    def check_level(self, n: int) -> None:
        if self.known_precision is not None and n > self.known_precision:
            raise PrecisionError(
                f"level {n} exceeds known precision {self.known_precision}")

    def __call__(self, x: int) -> int:
        """Exact integer evaluation (Horner)."""
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def eval_int_mod(self, x: int, modulus: int) -> int:
        acc = 0
        for c in reversed(self.coeffs):
            acc = (acc * x + c) % modulus
        return acc

    def eval_mod(self, x: Residue) -> Residue:
        if x.prime != self.prime:
            raise DomainError("residue and polynomial over different primes")
        self.check_level(x.level)
        return Residue(self.eval_int_mod(x.value, x.modulus), x.prime, x.level)

    def derivative(self) -> "IntPoly":
        cs = tuple(i * c for i, c in enumerate(self.coeffs))[1:] or (0,)
        return IntPoly(cs, self.prime, self.known_precision)

    def iterate_mod(self, k: int, x: Residue) -> Residue:
        if k < 1:
            raise DomainError("iteration count must be positive")
        self.check_level(x.level)
        m, v = x.modulus, x.value
        for _ in range(k):
            v = self.eval_int_mod(v, m)
        return Residue(v, x.prime, x.level)

    def iterate_int_mod(self, k: int, x: int, modulus: int) -> int:
        for _ in range(k):
            x = self.eval_int_mod(x, modulus)
        return x

    def taylor2(self, x: int, k: int = 1, modulus: Optional[int] = None) -> Tuple[int, int, int]:
        """Coefficients (g(x), g'(x), g''(x)/2) of g = f^k, by truncated series in h."""
        c0, c1, c2 = x, 1, 0
        for _ in range(k):
            s0, s1, s2 = 0, 0, 0
            for c in reversed(self.coeffs):
                # (s0 + s1 h + s2 h^2) * (c0 + c1 h + c2 h^2) + c, truncated at h^3
                s0, s1, s2 = (s0 * c0 + c,
                              s0 * c1 + s1 * c0,
                              s0 * c2 + s1 * c1 + s2 * c0)
                if modulus:
                    s0, s1, s2 = s0 % modulus, s1 % modulus, s2 % modulus
            c0, c1, c2 = s0, s1, s2
        return c0, c1, c2

    def pretty(self, var: str = "x") -> str:
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
            mag = abs(c)
            body = mono if (mag == 1 and mono) else (f"{mag}{mono}")
            sign = "-" if c < 0 else "+"
            terms.append((sign, body))
        if not terms:
            return "0"
        first_sign, first = terms[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in terms[1:]:
            out += sign + body
        return out


@dataclass(frozen=True)
class Affine:
    """The map h(x) = scale*x + shift."""

    scale: int = 1
    shift: int = 0

    def __call__(self, x: int) -> int:
        return self.scale * x + self.shift

    def then(self, other: "Affine") -> "Affine":
        """other after self."""
        return Affine(other.scale * self.scale, other.scale * self.shift + other.shift)

    @property
    def is_identity(self) -> bool:
        return self.scale == 1 and self.shift == 0


IDENTITY = Affine()


def conjugate_check(f: IntPoly, g: IntPoly, h: Affine, n: int,
                    exhaustive_limit: int = 1 << 16, samples: int = 4096,
                    seed: int = 0) -> bool:
    """Whether h(f(x)) = g(h(x)) mod p^n for all residues x (sampled above the limit)."""
    p = f.prime
    f.check_level(n)
    g.check_level(n)
    mod = p ** n
    if mod <= exhaustive_limit:
        xs = range(mod)
    else:
        rng = random.Random(seed)
        xs = [rng.randrange(mod) for _ in range(samples)]
    for x in xs:
        if (h(f.eval_int_mod(x, mod)) - g.eval_int_mod(h(x) % mod, mod)) % mod:
            return False
    return True


@dataclass(frozen=True)
class QuadNormalForm:
    """A 2-adic quadratic normal form g with conjugacy h (h o f = g o h).

    kind is one of "XSqMinusLambda", "XSqPlusBX", "XSqPlusXMinusD";
    ``param`` holds lambda, b or d.  Values depending on a square root are
    only meaningful mod 2^precision.
    """

    kind: str
    param: int
    conjugacy: Affine
    precision: int
    sqrt_exists: Optional[bool] = None
    notes: Tuple[str, ...] = field(default=())

    def polynomial(self, known_precision: Optional[int] = None) -> IntPoly:
        if self.kind == "XSqMinusLambda":
            cs = (-self.param, 0, 1)
        elif self.kind == "XSqPlusBX":
            cs = (0, self.param, 1)
        else:
            cs = (-self.param, 1, 1)
        return IntPoly(cs, 2, known_precision)

    def describe(self) -> str:
        return self.polynomial().pretty()


def _signed(x: int, digits: int) -> int:
    """Representative of x mod 2^digits in (-2^(digits-1), 2^(digits-1)]."""
    m = 1 << digits
    x %= m
    return x - m if x > m // 2 else x


GUARD_DIGITS = 8


def normal_form_2adic(a: int, b: int, c: int, N: int) -> QuadNormalForm:
    """Conjugate ax^2+bx+c on Z_2 to x^2-lambda, x^2+bx or x^2+x-d."""
    if a == 0:
        raise DomainError("not a quadratic")
    notes = []
    h = IDENTITY
    if a != 1:
        # h(x) = a x turns ax^2+bx+c into y^2 + b y + ac
        h = Affine(a, 0)
        c = a * c
        if a % 2 == 0:
            notes.append("even leading coefficient: conjugacy maps onto a*Z_2 only")
    if b % 2 == 0:
        lam = (b * b - 4 * c - 2 * b) // 4
        h = h.then(Affine(1, b // 2))
        return QuadNormalForm("XSqMinusLambda", lam, h, N, None, tuple(notes))
    e = (b - 1) // 2
    d = e * e - c
    h = h.then(Affine(1, e))
    work = N + GUARD_DIGITS
    if d != 0 and vp(d, 2).value + 3 > work:
        raise PrecisionError("square class of d is not determined at this precision")
    if not has_sqrt_z2(d):
        return QuadNormalForm("XSqPlusXMinusD", d, h, N, False, tuple(notes))
    mod = 1 << work
    if c == 0:
        # already x^2 + bx: keep it
        r = -e
    else:
        r = sqrt_z2(d, work)
        if r % 2 == 1:
            # b' = 1 - 2r = -1 - 4m with m = (r-1)/2; take the root with m even
            m = (r - 1) // 2
            if m % 2 == 1:
                r = (-r) % mod
    bprime = _signed(1 - 2 * r, N)
    if bprime == -1:
        notes.append("degenerate branch: b = -1 lies outside the -1-4m table")
    h = h.then(Affine(1, _signed(r, N)))
    return QuadNormalForm("XSqPlusBX", bprime, h, N, True, tuple(notes))
