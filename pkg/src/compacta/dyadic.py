"""Exact dyadic rationals and the nested interval addressing scheme.

Every coordinate produced by the tree-to-set construction is a dyadic
rational a/2^k, so all geometry here is closed-form integer arithmetic.
Cantor-set internals are the one exception and live on fractions.Fraction;
the interval endpoints that frame them stay dyadic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

Address = tuple[int, ...]

ROOT: Address = ()


def _normalize(num: int, exp: int) -> tuple[int, int]:
    if num == 0:
        return 0, 0
    while num % 2 == 0 and exp > 0:
        num //= 2
        exp -= 1
    if exp < 0:
        num <<= -exp
        exp = 0
    return num, exp


@dataclass(frozen=True, order=False)
class Dyadic:
    """a/2^k with k >= 0 and a odd unless the value is zero."""

    num: int
    exp: int = 0

    def __post_init__(self) -> None:
        n, e = _normalize(self.num, self.exp)
        object.__setattr__(self, "num", n)
        object.__setattr__(self, "exp", e)

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other: "Dyadic | int") -> "Dyadic":
        other = _coerce(other)
        e = max(self.exp, other.exp)
        return Dyadic(
            (self.num << (e - self.exp)) + (other.num << (e - other.exp)), e
        )

    __radd__ = __add__

    def __neg__(self) -> "Dyadic":
        return Dyadic(-self.num, self.exp)

    def __sub__(self, other: "Dyadic | int") -> "Dyadic":
        return self + (-_coerce(other))

    def __rsub__(self, other: "Dyadic | int") -> "Dyadic":
        return _coerce(other) + (-self)

    def __mul__(self, other: "Dyadic | int") -> "Dyadic":
        other = _coerce(other)
        return Dyadic(self.num * other.num, self.exp + other.exp)

    __rmul__ = __mul__

    def __abs__(self) -> "Dyadic":
        return Dyadic(abs(self.num), self.exp)

    def half(self) -> "Dyadic":
        return Dyadic(self.num, self.exp + 1)

    def scaled_pow2(self, shift: int) -> "Dyadic":
        """Multiply by 2^shift (shift may be negative)."""
        return Dyadic(self.num, self.exp - shift)

    # -- comparisons --------------------------------------------------------

    def _key(self, other: "Dyadic") -> tuple[int, int]:
        e = max(self.exp, other.exp)
        return self.num << (e - self.exp), other.num << (e - other.exp)

    def __lt__(self, other: "Dyadic | int") -> bool:
        a, b = self._key(_coerce(other))
        return a < b

    def __le__(self, other: "Dyadic | int") -> bool:
        a, b = self._key(_coerce(other))
        return a <= b

    def __gt__(self, other: "Dyadic | int") -> bool:
        a, b = self._key(_coerce(other))
        return a > b

    def __ge__(self, other: "Dyadic | int") -> bool:
        a, b = self._key(_coerce(other))
        return a >= b

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            other = Dyadic(other)
        if not isinstance(other, Dyadic):
            return NotImplemented
        return self.num == other.num and self.exp == other.exp

    def __hash__(self) -> int:
        return hash((self.num, self.exp))

    # -- conversions --------------------------------------------------------

    def as_fraction(self) -> Fraction:
        return Fraction(self.num, 1 << self.exp)

    def __float__(self) -> float:
        return self.num / (1 << self.exp)

    def __str__(self) -> str:
        return f"{self.num}/2^{self.exp}"

    __repr__ = __str__


def _coerce(x: "Dyadic | int") -> Dyadic:
    return x if isinstance(x, Dyadic) else Dyadic(x)


ZERO = Dyadic(0)
ONE = Dyadic(1)
HALF = Dyadic(1, 1)


def parse_dyadic(text: str) -> Dyadic:
    """Parse the literal form `a/2^k`, e.g. `13/2^4` or `-3/2^1`."""
    num_part, sep, exp_part = text.partition("/2^")
    if not sep or not exp_part:
        raise ValueError(f"not a dyadic literal: {text!r}")
    num = int(num_part)
    exp = int(exp_part)
    if exp < 0:
        raise ValueError(f"negative exponent in dyadic literal: {text!r}")
    return Dyadic(num, exp)


def dyadic_ceil(value: Fraction, bits: int = 80) -> Dyadic:
    """Smallest multiple of 2^-bits that is >= value."""
    scaled = value * (1 << bits)
    n = scaled.numerator // scaled.denominator
    if n * scaled.denominator != scaled.numerator:
        n += 1
    return Dyadic(n, bits)


def midpoint(a: Dyadic, b: Dyadic) -> Dyadic:
    return (a + b).half()


@dataclass(frozen=True)
class DyInterval:
    lo: Dyadic
    hi: Dyadic

    def __post_init__(self) -> None:
        if self.hi < self.lo:
            raise ValueError(f"interval endpoints out of order: {self}")

    @property
    def length(self) -> Dyadic:
        return self.hi - self.lo

    @property
    def mid(self) -> Dyadic:
        return midpoint(self.lo, self.hi)

    def contains(self, x: Dyadic) -> bool:
        return self.lo <= x <= self.hi

    def __str__(self) -> str:
        return f"[{self.lo},{self.hi}]"


UNIT = DyInterval(ZERO, ONE)


@lru_cache(maxsize=None)
def base_interval(m: int) -> DyInterval:
    """The m-th root-level interval.

    Length is exactly 2^-(m+2).  Even indices 2n are centered in the block
    [(1-2^-n)/2, (1-2^-(n+1))/2] climbing toward 1/2 from the left; odd
    indices 2n+1 sit in the mirrored block on the right, descending toward
    1/2.  Blocks partition each side, so distinct intervals never touch.
    """
    if m < 0:
        raise ValueError("interval index must be a natural number")
    n, odd = divmod(m, 2)
    block_lo = HALF * (ONE - Dyadic(1, n))
    block_hi = HALF * (ONE - Dyadic(1, n + 1))
    center = midpoint(block_lo, block_hi)
    if odd:
        center = ONE - center
    half_len = Dyadic(1, m + 3)
    return DyInterval(center - half_len, center + half_len)


@lru_cache(maxsize=None)
def interval_of(addr: Address) -> DyInterval:
    """Nested interval for an address: each step rescales the root pattern."""
    if not addr:
        return UNIT
    outer = interval_of(addr[:-1])
    inner = base_interval(addr[-1])
    scale = outer.length
    return DyInterval(
        outer.lo + scale * inner.lo, outer.lo + scale * inner.hi
    )


def concentration_point(addr: Address) -> Dyadic:
    """The single accumulation point of the sibling family below addr."""
    return interval_of(addr).mid


def format_address(addr: Address) -> str:
    return ".".join(str(i) for i in addr) if addr else "-"


def parse_address(text: str) -> Address:
    if text == "-":
        return ()
    parts = text.split(".")
    addr = tuple(int(p) for p in parts)
    if any(i < 0 for i in addr):
        raise ValueError(f"negative index in address: {text!r}")
    return addr
