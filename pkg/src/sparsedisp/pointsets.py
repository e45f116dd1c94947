"""Point set constructions: dyadic sparse grids and Hammersley sets."""
from __future__ import annotations

import io
import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction
from typing import Iterable, Iterator, Sequence, TextIO

from .errors import DomainError, ResourceError
from .numerics import Dyadic, binomial, first_primes, format_rat, parse_rat

DEFAULT_POINT_BUDGET = 10**7

Point = tuple


@dataclass(frozen=True)
class PointSet:
    """Sorted, duplicate-free points in ``(0, 1)^dim`` with exact coordinates."""

    dim: int
    points: tuple
    label: str = ""

    def __post_init__(self):
        if self.dim < 1:
            raise DomainError(f"dimension must be positive, got {self.dim}")
        pts = [
            p if all(isinstance(c, Fraction) for c in p) else tuple(Fraction(c) for c in p)
            for p in map(tuple, self.points)
        ]
        for p in pts:
            if len(p) != self.dim:
                raise DomainError(f"point {p} does not have dimension {self.dim}")
        # sort and dedup on integer keys over a common denominator; Fraction
        # comparisons are far too slow for sets with 10^5+ points
        scale = math.lcm(1, *{c.denominator for p in pts for c in p})
        keyed = {}
        for p in pts:
            key = tuple(c.numerator * (scale // c.denominator) for c in p)
            for v in key:
                if not 0 < v < scale:
                    raise DomainError(f"point {p} leaves the open unit cube")
            keyed.setdefault(key, p)
        object.__setattr__(self, "points", tuple(keyed[k] for k in sorted(keyed)))

    @classmethod
    def from_points(cls, points: Iterable[Sequence], dim: int | None = None, label: str = ""):
        pts = [tuple(p) for p in points]
        if dim is None:
            if not pts:
                raise DomainError("cannot infer dimension of an empty point list")
            dim = len(pts[0])
        return cls(dim, tuple(pts), label)

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __contains__(self, point):
        return tuple(point) in set(self.points)

    def without(self, index: int) -> "PointSet":
        pts = self.points[:index] + self.points[index + 1 :]
        return PointSet(self.dim, pts, f"{self.label} minus #{index}")

    def with_point(self, point) -> "PointSet":
        return PointSet(self.dim, self.points + (tuple(point),), self.label)


def m_set(j: int) -> list[Dyadic]:
    """The 2^j odd multiples of 2^-(j+1) in (0, 1), ascending."""
    if j < 0:
        raise DomainError(f"level must be non-negative, got {j}")
    return list(_m_set(j))


@lru_cache(maxsize=64)
def _m_set(j):
    den = 1 << (j + 1)
    return tuple(Dyadic(2 * i - 1, den) for i in range(1, (1 << j) + 1))


def compositions(k: int, d: int) -> Iterator[tuple[int, ...]]:
    """All j in N_0^d with j_1 + ... + j_d = k, lexicographically."""
    if d < 1:
        raise DomainError(f"dimension must be positive, got {d}")
    if k < 0:
        return
    if d == 1:
        yield (k,)
        return
    for first in range(k + 1):
        for rest in compositions(k - first, d - 1):
            yield (first,) + rest


def sparse_cardinality(k: int, d: int) -> int:
    if k < 0 or d < 1:
        raise DomainError(f"need k >= 0 and d >= 1, got k={k}, d={d}")
    return (1 << k) * binomial(d + k - 1, d - 1)


def iter_sparse_grid(k: int, d: int) -> Iterator[tuple[Dyadic, ...]]:
    """Stream the points of P(k, d) one subgrid at a time (unsorted)."""
    for comp in compositions(k, d):
        yield from itertools.product(*(_m_set(j) for j in comp))


def sparse_grid(k: int, d: int, budget: int = DEFAULT_POINT_BUDGET) -> PointSet:
    size = sparse_cardinality(k, d)
    if size > budget:
        raise ResourceError(f"P({k},{d}) has {size} points, over the budget of {budget}")
    raw = list(iter_sparse_grid(k, d))
    ps = PointSet(d, tuple(raw), f"P({k},{d})")
    # subgrids of distinct compositions are disjoint: coordinate exponents differ
    assert len(ps) == len(raw), "duplicate points across subgrids"
    return ps


def k_of_epsilon(eps: Fraction) -> int:
    """Smallest k >= 0 with 2^-(k+1) <= eps, i.e. ceil(log2(1/eps)) - 1."""
    eps = Fraction(eps)
    if not 0 < eps < 1:
        raise DomainError(f"epsilon must lie in (0, 1), got {eps}")
    # floor(1/eps) has bit_length b, so 2^(b-1) <= 1/eps < 2^b
    k = max(0, (eps.denominator // eps.numerator).bit_length() - 2)
    while Fraction(1, 1 << (k + 1)) > eps:
        k += 1
    while k > 0 and Fraction(1, 1 << k) <= eps:
        k -= 1
    return k


def radical_inverse(i: int, base: int) -> Fraction:
    """Digit reversal of ``i`` in ``base`` about the radix point."""
    num, den = 0, 1
    while i:
        i, digit = divmod(i, base)
        num = num * base + digit
        den *= base
    return Fraction(num, den)


def _ceil_log(n: int, base: int) -> int:
    e, power = 0, 1
    while power < n:
        power *= base
        e += 1
    return e


def hammersley(n: int, d: int) -> PointSet:
    """The n-point Hammersley set in dimension d, kept inside the open cube.

    The first coordinate is the cell midpoint (2i+1)/(2n); the others are
    radical inverses of i in the first d-1 primes. The radical inverse of
    i = 0 is 0, which is replaced by 1/(2 b^(ceil(log_b n) + 1)).
    """
    if n < 1 or d < 1:
        raise DomainError(f"need n >= 1 and d >= 1, got n={n}, d={d}")
    bases = first_primes(d - 1)
    zero_sub = [Fraction(1, 2 * b ** (_ceil_log(n, b) + 1)) for b in bases]
    pts = []
    for i in range(n):
        coords = [Fraction(2 * i + 1, 2 * n)]
        for b, sub in zip(bases, zero_sub):
            r = radical_inverse(i, b)
            coords.append(r if r else sub)
        pts.append(tuple(coords))
    return PointSet(d, tuple(pts), f"Hammersley(n={n},d={d})")


# ---------------------------------------------------------------------------
# text formats


def write_pointset(ps: PointSet, out: TextIO) -> None:
    label = "_".join(ps.label.split()) or "-"
    out.write(f"# dim={ps.dim} label={label} n={len(ps)}\n")
    for p in ps.points:
        out.write(" ".join(format_rat(c) for c in p))
        out.write("\n")


def dumps_pointset(ps: PointSet) -> str:
    buf = io.StringIO()
    write_pointset(ps, buf)
    return buf.getvalue()


def read_pointset(stream: TextIO) -> PointSet:
    dim = None
    label = ""
    declared = None
    pts = []
    for lineno, line in enumerate(stream, 1):
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            for tok in line[1:].split():
                key, _, val = tok.partition("=")
                if key == "dim":
                    dim = int(val)
                elif key == "label":
                    label = val
                elif key == "n":
                    declared = int(val)
            continue
        coords = tuple(parse_rat(tok) for tok in line.split())
        if dim is None:
            dim = len(coords)
        if len(coords) != dim:
            raise DomainError(f"line {lineno}: expected {dim} coordinates, got {len(coords)}")
        pts.append(coords)
    if dim is None:
        raise DomainError("point file declares no dimension and has no points")
    ps = PointSet(dim, tuple(pts), label)
    if declared is not None and declared != len(ps):
        raise DomainError(f"header announces n={declared}, file holds {len(ps)} distinct points")
    return ps


def loads_pointset(text: str) -> PointSet:
    return read_pointset(io.StringIO(text))


def _decimal(x: Fraction) -> str:
    """Exact decimal expansion when finite, else ``p/q``."""
    den = x.denominator
    twos = fives = 0
    while den % 2 == 0:
        den //= 2
        twos += 1
    while den % 5 == 0:
        den //= 5
        fives += 1
    if den != 1:
        return f"{x.numerator}/{x.denominator}"
    places = max(twos, fives)
    if places == 0:
        return str(x.numerator)
    scaled = x.numerator * 10**places // x.denominator
    sign = "-" if scaled < 0 else ""
    digits = str(abs(scaled)).rjust(places + 1, "0")
    return f"{sign}{digits[:-places]}.{digits[-places:]}"


def write_pointset_csv(ps: PointSet, out: TextIO) -> None:
    out.write(",".join(f"x{i + 1}" for i in range(ps.dim)) + "\n")
    for p in ps.points:
        out.write(",".join(_decimal(Fraction(c)) for c in p) + "\n")
