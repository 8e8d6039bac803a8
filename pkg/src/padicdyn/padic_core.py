"""Truncated p-adic integers: residues mod p^n, valuations, orders, square roots."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache, total_ordering
from typing import Optional, Union


class PadicError(Exception):
    """Base class for errors raised by this package."""


class PrecisionError(PadicError):
    """Raised when a request needs more p-adic digits than are known."""


class DomainError(PadicError):
    """Raised for arguments outside an operation's domain."""


class IntegrityError(PadicError):
    """Raised when an internal consistency check fails."""


class ResourceError(PadicError):
    """Raised when an enumeration would exceed its residue budget."""


@lru_cache(maxsize=None)
def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    i = 3
    while i * i <= p:
        if p % i == 0:
            return False
        i += 2
    return True


def check_prime(p: int) -> int:
    if not isinstance(p, int) or not is_prime(p):
        raise DomainError(f"{p!r} is not a prime")
    return p


@total_ordering
@dataclass(frozen=True)
class Valuation:
    """A p-adic valuation: a non-negative integer or infinity (value None)."""

    value: Optional[int] = None

    @property
    def is_infinite(self) -> bool:
        return self.value is None

    def _key(self):
        return (1, 0) if self.value is None else (0, self.value)

    def __eq__(self, other):
        if isinstance(other, int) and not isinstance(other, bool):
            return self.value == other
        if isinstance(other, Valuation):
            return self.value == other.value
        return NotImplemented

    def __lt__(self, other):
        if isinstance(other, int) and not isinstance(other, bool):
            return self.value is not None and self.value < other
        if isinstance(other, Valuation):
            return self._key() < other._key()
        return NotImplemented

    def __hash__(self):
        return hash(self.value)

    def __add__(self, other):
        other = other if isinstance(other, Valuation) else Finite(other)
        if self.value is None or other.value is None:
            return INFINITE
        return Valuation(self.value + other.value)

    __radd__ = __add__

    def cap(self, n: int) -> int:
        """min(self, n) as a plain integer."""
        return n if self.value is None or self.value > n else self.value

    def __repr__(self):
        return "Infinite" if self.value is None else f"Finite({self.value})"

    def __str__(self):
        return "inf" if self.value is None else str(self.value)

    def to_json(self):
        return "inf" if self.value is None else self.value

    @staticmethod
    def from_json(obj) -> "Valuation":
        return INFINITE if obj == "inf" else Valuation(int(obj))


INFINITE = Valuation(None)


def Finite(v: int) -> Valuation:
    if v < 0:
        raise DomainError("valuations of p-adic integers are non-negative")
    return Valuation(v)


def vp(x: int, p: int) -> Valuation:
    """p-adic valuation of an integer; Infinite for zero."""
    check_prime(p)
    if x == 0:
        return INFINITE
    x = abs(x)
    if p == 2:
        return Valuation((x & -x).bit_length() - 1)
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return Valuation(v)


def vp_int(x: int, p: int, cap: int) -> int:
    """Valuation of x truncated at cap (x = 0 gives cap)."""
    if x == 0:
        return cap
    v = 0
    while v < cap and x % p == 0:
        x //= p
        v += 1
    return v


def mul_order(a: int, p: int) -> int:
    """Order of a in (Z/pZ)^*."""
    check_prime(p)
    a %= p
    if a == 0:
        raise DomainError("0 has no multiplicative order mod p")
    d, x = 1, a
    while x != 1:
        x = x * a % p
        d += 1
    return d


def has_sqrt_z2(d: int, precision: Optional[int] = None) -> bool:
    """Whether d is a square in Z_2.

    With ``precision`` given, d is only known mod 2^precision and the answer
    must already be determined there.
    """
    if precision is not None:
        d %= 1 << precision
        if d == 0 or vp(d, 2).value + 3 > precision:
            raise PrecisionError(
                f"square class of d needs v2(d)+3 digits, only {precision} known")
    if d == 0:
        return True
    v = vp(d, 2).value
    if v % 2:
        return False
    return (d >> v) % 8 == 1


def sqrt_z2(d: int, digits: int) -> int:
    """A square root of d in Z_2 modulo 2^digits (the root that is 1 mod 4 after scaling)."""
    if not has_sqrt_z2(d):
        raise DomainError(f"{d} has no square root in Z_2")
    if d == 0:
        return 0
    v = vp(d, 2).value
    half = v // 2
    u = d >> v
    # r^2 = u (mod 2^j) lifted one digit at a time; r is determined mod 2^(j-1).
    target = max(digits - half + 1, 3)
    r = 1
    for j in range(3, target):
        if (r * r - u) % (1 << (j + 1)):
            r += 1 << (j - 1)
    r %= 1 << max(target - 1, 0)
    if r % 4 != 1:
        r = (-r) % (1 << (target - 1))
    return (r << half) % (1 << digits)


@dataclass(frozen=True)
class Residue:
    """The ball value + p^level Z_p, stored by its canonical representative."""

    value: int
    prime: int
    level: int

    def __post_init__(self):
        check_prime(self.prime)
        if self.level < 0:
            raise DomainError("level must be non-negative")
        object.__setattr__(self, "value", self.value % self.modulus)

    @property
    def modulus(self) -> int:
        return self.prime ** self.level

    def reduce(self, m: int) -> "Residue":
        if m > self.level:
            raise PrecisionError(f"cannot raise level {self.level} to {m}")
        return Residue(self.value, self.prime, m)

    def _coerce(self, other) -> int:
        if isinstance(other, Residue):
            if other.prime != self.prime or other.level != self.level:
                raise DomainError("residues at different (p, n)")
            return other.value
        if isinstance(other, int):
            return other
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        return Residue(self.value + o, self.prime, self.level)

    def __sub__(self, other):
        o = self._coerce(other)
        return Residue(self.value - o, self.prime, self.level)

    def __mul__(self, other):
        o = self._coerce(other)
        return Residue(self.value * o, self.prime, self.level)

    __radd__ = __add__
    __rmul__ = __mul__

    def __rsub__(self, other):
        return Residue(other - self.value, self.prime, self.level)

    def __neg__(self):
        return Residue(-self.value, self.prime, self.level)

    def __pow__(self, e: int):
        return Residue(pow(self.value, e, self.modulus), self.prime, self.level)

    def valuation(self) -> Valuation:
        """Valuation at this precision: Infinite means zero mod p^level."""
        return vp(self.value, self.prime)


Number = Union[int, Residue]
