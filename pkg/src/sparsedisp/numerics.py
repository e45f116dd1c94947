"""Exact arithmetic: dyadic coordinates, big-integer combinatorics and
certified comparison of (possibly astronomically large) size values.

General rationals are plain :class:`fractions.Fraction` objects; ``Rat`` is
only an alias so signatures read the way the rest of the package talks.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Optional, Union

from mpmath import libmp

from .errors import DomainError, IndeterminateComparison

Rat = Fraction

START_PRECISION = 128
MAX_PRECISION = 8192


class Dyadic(Fraction):
    """A dyadic rational ``numerator / 2**exponent`` in ``[0, 1]``.

    ``Fraction`` already keeps the value reduced, which is exactly the
    canonical form: odd numerator, or ``0/2^0`` and ``1/2^0`` at the ends.
    Arithmetic falls back to ``Fraction``.
    """

    __slots__ = ()

    def __new__(cls, numerator=0, denominator=None):
        self = super().__new__(cls, numerator, denominator)
        den = self.denominator
        if den & (den - 1):
            raise DomainError(f"{Fraction(self)} is not dyadic")
        if not 0 <= self <= 1:
            raise DomainError(f"dyadic value {Fraction(self)} outside [0, 1]")
        return self

    @property
    def exponent(self) -> int:
        return self.denominator.bit_length() - 1

    def __repr__(self):
        return f"Dyadic({self.numerator}, 2**{self.exponent})"

    def __str__(self):
        return f"{self.numerator}/2^{self.exponent}"

    def __reduce__(self):
        return (Dyadic, (self.numerator, self.denominator))

    def __copy__(self):
        return self

    def __deepcopy__(self, memo):
        return self


def dyadic_normalize(numerator: int, exponent: int) -> Dyadic:
    if exponent < 0:
        raise DomainError(f"negative exponent {exponent}")
    return Dyadic(numerator, 1 << exponent)


_DECIMAL_BITS = 12000


def format_int(n: int) -> str:
    """Decimal, or ``0x`` hex past ~3600 digits (CPython caps int->str)."""
    if abs(n).bit_length() <= _DECIMAL_BITS:
        return str(n)
    return ("-" if n < 0 else "") + hex(abs(n))


def format_rat(x: Fraction) -> str:
    """Interchange text for an exact coordinate: ``a/2^b`` or ``p/q``."""
    if isinstance(x, Dyadic):
        return str(x)
    x = Fraction(x)
    return f"{format_int(x.numerator)}/{format_int(x.denominator)}"


_DYADIC_RE = re.compile(r"^\s*(\d+)\s*/\s*2\^(\d+)\s*$")
_RAT_RE = re.compile(r"^\s*(-?(?:0x[0-9a-f]+|\d+))\s*(?:/\s*(0x[0-9a-f]+|\d+))?\s*$")
_DECIMAL_RE = re.compile(r"^\s*(-?)(\d*)\.(\d*)\s*$")


def parse_rat(text: str) -> Fraction:
    """Inverse of :func:`format_rat`; also takes plain decimals like ``0.25``.

    Scientific notation is rejected on purpose.
    """
    m = _DYADIC_RE.match(text)
    if m:
        return dyadic_normalize(int(m.group(1)), int(m.group(2)))
    m = _RAT_RE.match(text)
    if m:
        den = int(m.group(2), 0) if m.group(2) is not None else 1
        if den == 0:
            raise DomainError(f"zero denominator in {text!r}")
        return Fraction(int(m.group(1), 0), den)
    m = _DECIMAL_RE.match(text)
    if m and (m.group(2) or m.group(3)):
        sign = -1 if m.group(1) else 1
        digits = m.group(2) + m.group(3)
        return sign * Fraction(int(digits), 10 ** len(m.group(3)))
    raise DomainError(f"cannot parse exact number from {text!r}")


def binomial(n: int, k: int) -> int:
    if n < 0 or k < 0:
        raise DomainError("binomial arguments must be non-negative")
    return math.comb(n, k)


_SMALL_PRIME_BOUND = {1: 2, 2: 3, 3: 5, 4: 7, 5: 11}


def first_primes(count: int) -> list[int]:
    """The first ``count`` primes by a sieve of Eratosthenes.

    The sieve limit uses p_n < n (ln n + ln ln n), valid for n >= 6.
    """
    if count <= 0:
        return []
    if count in _SMALL_PRIME_BOUND:
        limit = _SMALL_PRIME_BOUND[count]
    else:
        limit = int(count * (math.log(count) + math.log(math.log(count)))) + 1
    sieve = bytearray([1]) * (limit + 1)
    sieve[0] = sieve[1] = 0
    for p in range(2, math.isqrt(limit) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(range(p * p, limit + 1, p)))
    primes = [i for i, flag in enumerate(sieve) if flag]
    return primes[:count]


@lru_cache(maxsize=256)
def primorial(d: int) -> int:
    """Product of the first ``d - 1`` primes."""
    if d < 2:
        raise DomainError(f"primorial needs d >= 2, got {d}")
    return math.prod(first_primes(d - 1))


# ---------------------------------------------------------------------------
# certified logarithms on rational endpoints


def _mpf_to_fraction(x) -> Fraction:
    p, q = libmp.to_rational(x)
    return Fraction(int(p), int(q))


def _ulp_pad(x: Fraction, prec: int) -> Fraction:
    return abs(x) / (1 << (prec - 2)) + Fraction(1, 1 << (2 * prec))


@lru_cache(maxsize=4096)
def ln_bounds(x: Fraction, prec: int) -> tuple[Fraction, Fraction]:
    """Rational bounds ``lo <= ln(x) <= hi`` for a positive rational ``x``.

    Inputs and outputs are rounded outward at ``prec`` bits and padded by a
    few ulps on top.
    """
    x = Fraction(x)
    if x <= 0:
        raise DomainError(f"logarithm of non-positive value {x}")
    if x == 1:
        return Fraction(0), Fraction(0)
    p, q = x.numerator, x.denominator
    wp = prec + 10
    lo_in = libmp.from_rational(p, q, wp, libmp.round_floor)
    hi_in = libmp.from_rational(p, q, wp, libmp.round_ceiling)
    lo = _mpf_to_fraction(libmp.mpf_log(lo_in, wp, libmp.round_floor))
    hi = _mpf_to_fraction(libmp.mpf_log(hi_in, wp, libmp.round_ceiling))
    return lo - _ulp_pad(lo, prec), hi + _ulp_pad(hi, prec)


def _div_interval(a, b):
    (a_lo, a_hi), (b_lo, b_hi) = a, b
    if b_lo <= 0:
        raise DomainError("interval divisor must be positive")
    quotients = [a_lo / b_lo, a_lo / b_hi, a_hi / b_lo, a_hi / b_hi]
    return min(quotients), max(quotients)


def mul_interval(a, b):
    if a[0] >= 0 and b[0] >= 0:
        return a[0] * b[0], a[1] * b[1]
    products = [x * y for x in a for y in b]
    return min(products), max(products)


def log_bounds(x: Fraction, prec: int, base: Union[str, int] = "e"):
    """Bounds on log(x) in base ``"e"`` or ``2``."""
    if base == "e":
        return ln_bounds(Fraction(x), prec)
    if base != 2:
        raise DomainError(f"unsupported log base {base!r}")
    x = Fraction(x)
    if x > 0 and x.numerator & (x.numerator - 1) == 0 and x.denominator & (x.denominator - 1) == 0:
        exact = Fraction(x.numerator.bit_length() - x.denominator.bit_length())
        return exact, exact
    return _div_interval(ln_bounds(x, prec), ln_bounds(Fraction(2), prec))


# ---------------------------------------------------------------------------
# size values


@dataclass(frozen=True)
class SizeValue:
    """Value of a size bound: an exact integer, or a certified bracket.

    A certified value brackets the real quantity *before* integer rounding;
    ``rounding="floor"`` records that the reported size is its floor. With
    ``log2_domain`` set the bracket is on log2 of the quantity instead,
    which is how values with millions of digits are carried. ``refine``
    recomputes the value at a higher precision.
    """

    exact: Optional[int] = None
    lower: Optional[Fraction] = None
    upper: Optional[Fraction] = None
    rounding: Optional[str] = None
    log2_domain: bool = False
    precision: Optional[int] = None
    refine: Optional[Callable[[int], "SizeValue"]] = field(
        default=None, compare=False, repr=False
    )

    def __post_init__(self):
        if self.exact is None:
            if self.lower is None or self.upper is None:
                raise ValueError("certified value needs both endpoints")
            if self.lower > self.upper:
                raise ValueError(f"empty interval [{self.lower}, {self.upper}]")

    @classmethod
    def of_int(cls, n: int) -> "SizeValue":
        return cls(exact=int(n))

    @classmethod
    def of_rational(cls, r: Fraction) -> "SizeValue":
        r = Fraction(r)
        if r.denominator == 1:
            return cls(exact=r.numerator)
        return cls(lower=r, upper=r)

    @property
    def is_exact(self) -> bool:
        return self.exact is not None

    @property
    def is_point(self) -> bool:
        """True when the reported value is known exactly."""
        if self.exact is not None:
            return True
        lo, hi = self.bracket()
        return lo == hi and not self.log2_domain

    @property
    def value(self) -> Fraction:
        if self.exact is not None:
            return Fraction(self.exact)
        if not self.is_point:
            raise IndeterminateComparison("value is only known as an interval")
        return self.lower

    def bracket(self) -> tuple[Fraction, Fraction]:
        """Bracket of the *reported* value, in this value's domain."""
        if self.exact is not None:
            return Fraction(self.exact), Fraction(self.exact)
        lo, hi = self.lower, self.upper
        if self.rounding == "floor":
            if self.log2_domain:
                # floor(v) >= v/2 once v >= 2
                return lo - 1, hi
            return Fraction(math.floor(lo)), Fraction(math.floor(hi))
        return lo, hi

    def log2_bracket(self, prec: int):
        if self.log2_domain:
            return self.bracket()
        lo, hi = self.bracket()
        log_lo = log_bounds(lo, prec, 2)[0] if lo > 0 else -math.inf
        log_hi = log_bounds(hi, prec, 2)[1] if hi > 0 else -math.inf
        return log_lo, log_hi

    def approx_log2(self) -> float:
        """Display-only estimate of log2 of the reported value."""
        if self.log2_domain:
            return float((self.lower + self.upper) / 2)
        lo, hi = self.bracket()
        mid = (lo + hi) / 2
        if mid <= 0:
            return -math.inf
        return math.log2(mid.numerator) - math.log2(mid.denominator)

    def refined(self, prec: int) -> "SizeValue":
        if self.refine is None:
            return self
        return self.refine(prec)


def _order(a_lo, a_hi, b_lo, b_hi):
    if a_hi < b_lo:
        return -1
    if a_lo > b_hi:
        return 1
    if a_lo == a_hi == b_lo == b_hi:
        return 0
    return None


def compare_sizes(a: SizeValue, b: SizeValue, max_precision: int = MAX_PRECISION) -> int:
    """Order two size values: -1, 0 or 1.

    Overlapping brackets are refined by doubling precision up to
    ``max_precision``; if they still overlap, IndeterminateComparison is
    raised rather than guessing.
    """
    while True:
        if a.log2_domain or b.log2_domain:
            prec = max(a.precision or START_PRECISION, b.precision or START_PRECISION)
            result = _order(*a.log2_bracket(prec), *b.log2_bracket(prec))
            if result == 0 and not (a.is_point and b.is_point):
                result = None
        else:
            result = _order(*a.bracket(), *b.bracket())
        if result is not None:
            return result
        a_next = _step(a, max_precision)
        b_next = _step(b, max_precision)
        if a_next is None and b_next is None:
            raise IndeterminateComparison(
                f"cannot order two values near 2^{a.approx_log2():.6g} "
                f"within {max_precision} bits"
            )
        a = a_next or a
        b = b_next or b


def _step(v: SizeValue, max_precision: int) -> Optional[SizeValue]:
    if v.refine is None or v.precision is None or v.precision >= max_precision:
        return None
    return v.refine(min(2 * v.precision, max_precision))
