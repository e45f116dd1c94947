"""Exact dispersion: the largest empty axis-parallel open box in [0,1]^d.

Why the search is complete: an inclusion-maximal empty open box either
touches the cube boundary with a facet or the facet is pinned by a point
lying strictly inside the box's extent on every other axis. So once the
intervals on some axes are fixed, the remaining lower/upper ends can be
drawn from the coordinates of the points still "active" (strictly inside
every fixed interval), plus 0 and 1. On the last axis the best interval is
simply the widest gap among the active points.

Coordinates are rescaled by the common denominator so the inner loops run
on Python ints.
"""
from __future__ import annotations

import math
from concurrent.futures import Executor, ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import BudgetExceeded, DomainError
from .numerics import format_rat
from .pointsets import PointSet

DEFAULT_BUDGET = 10**8


@dataclass(frozen=True)
class BoxD:
    """Open box: one ``(lo, hi)`` pair of exact rationals per axis."""

    intervals: tuple

    def __post_init__(self):
        ivs = tuple((Fraction(lo), Fraction(hi)) for lo, hi in self.intervals)
        for lo, hi in ivs:
            if not 0 <= lo < hi <= 1:
                raise DomainError(f"bad box interval ({lo}, {hi})")
        object.__setattr__(self, "intervals", ivs)

    @property
    def dim(self) -> int:
        return len(self.intervals)

    @property
    def volume(self) -> Fraction:
        return math.prod((hi - lo for lo, hi in self.intervals), start=Fraction(1))

    def contains(self, point) -> bool:
        return all(lo < c < hi for (lo, hi), c in zip(self.intervals, point))

    @classmethod
    def unit(cls, d: int) -> "BoxD":
        return cls(((0, 1),) * d)


@dataclass(frozen=True)
class SearchConfig:
    budget: int = DEFAULT_BUDGET
    parallel_slices: int = 1
    prune: bool = True

    def __post_init__(self):
        if self.budget <= 0:
            raise DomainError("search budget must be positive")
        if self.parallel_slices < 1:
            raise DomainError("parallel_slices must be at least 1")


@dataclass(frozen=True)
class DispersionResult:
    volume: Fraction
    witness: BoxD
    boxes_examined: int
    pruned: int

    def to_json(self) -> dict:
        return {
            "volume": format_rat(self.volume),
            "witness": [[format_rat(lo), format_rat(hi)] for lo, hi in self.witness.intervals],
            "boxes_examined": self.boxes_examined,
            "pruned": self.pruned,
        }


def is_empty(box: BoxD, ps: PointSet) -> bool:
    if box.dim != ps.dim:
        raise DomainError(f"box dimension {box.dim} does not match point set dimension {ps.dim}")
    return not any(box.contains(p) for p in ps.points)


def candidate_grid(ps: PointSet, axis: int) -> list[Fraction]:
    if not 0 <= axis < ps.dim:
        raise DomainError(f"axis {axis} out of range for dimension {ps.dim}")
    values = {Fraction(0), Fraction(1)}
    values.update(Fraction(p[axis]) for p in ps.points)
    return sorted(values)


# ---------------------------------------------------------------------------
# the pruned search


class _Found(Exception):
    pass


class _Search:
    def __init__(self, points, dim, scale, budget, prune, target=None):
        self.points = points
        self.dim = dim
        self.L = scale
        self.budget = budget
        self.prune = prune
        # with a known optimum, stop at the first box reaching it
        self.target = target
        self.best = 0 if target is None else target - 1
        self.best_box = None
        self.examined = 0
        self.pruned = 0
        self.prefix = []

    def _tick(self):
        self.examined += 1
        if self.examined > self.budget:
            raise BudgetExceeded(
                f"box search exceeded its budget of {self.budget} candidates",
                best=self.best,
                witness=self.best_box,
            )

    def leaf(self, active, partial):
        """Widest gap on the last axis; returns its width."""
        self._tick()
        axis = self.dim - 1
        L = self.L
        coords = sorted({p[axis] for p in active})
        prev, gap, gap_lo = 0, -1, 0
        for c in coords:
            if c - prev > gap:
                gap, gap_lo = c - prev, prev
            prev = c
        if L - prev > gap:
            gap, gap_lo = L - prev, prev
        vol = partial * gap
        if vol > self.best:
            self.best = vol
            self.best_box = tuple(self.prefix) + ((gap_lo, gap_lo + gap),)
            if self.target is not None:
                raise _Found
        return gap

    def node(self, depth, active, partial, lo_filter=None):
        """Upper bound on the best extent product over axes depth..dim-1.

        Exact whenever no branch below was pruned.
        """
        if depth == self.dim - 1:
            return self.leaf(active, partial)
        L = self.L
        rest = L ** (self.dim - depth - 1)
        ordered = sorted(active, key=lambda p: p[depth])
        coords = sorted({p[depth] for p in ordered})
        los = [0] + coords
        his = coords + [L]
        bound = 0
        n = len(ordered)
        start = 0
        for li, lo in enumerate(los):
            if lo_filter is not None and not lo_filter(li):
                continue
            if self.prune and partial * (L - lo) * rest <= self.best:
                self.pruned += 1
                bound = max(bound, (L - lo) * rest)
                break
            while start < n and ordered[start][depth] <= lo:
                start += 1
            inside = []
            idx = start
            f_bound = rest
            for hi in his:
                if hi <= lo:
                    continue
                while idx < n and ordered[idx][depth] < hi:
                    inside.append(ordered[idx])
                    idx += 1
                width = hi - lo
                if self.prune and partial * width * f_bound <= self.best:
                    self.pruned += 1
                    bound = max(bound, width * f_bound)
                    if partial * (L - lo) * f_bound <= self.best:
                        bound = max(bound, (L - lo) * f_bound)
                        break
                    continue
                self._tick()
                self.prefix.append((lo, hi))
                f = self.node(depth + 1, inside, partial * width)
                self.prefix.pop()
                bound = max(bound, width * f)
                f_bound = min(f_bound, f)
                if self.prune and partial * (L - lo) * f_bound <= self.best:
                    self.pruned += 1
                    bound = max(bound, (L - lo) * f_bound)
                    break
        return bound


def _axis_order(ps: PointSet) -> list[int]:
    counts = [len({p[a] for p in ps.points}) for a in range(ps.dim)]
    return sorted(range(ps.dim), key=lambda a: -counts[a])


def _scaled(ps: PointSet, order):
    scale = math.lcm(1, *(Fraction(c).denominator for p in ps.points for c in p))
    pts = [tuple(int(Fraction(p[a]) * scale) for a in order) for p in ps.points]
    return pts, scale


def _run_slice(points, dim, scale, budget, prune, slice_index, slices):
    search = _Search(points, dim, scale, budget, prune)
    lo_filter = None
    if slices > 1:
        lo_filter = lambda li: li % slices == slice_index  # noqa: E731
    search.node(0, points, 1, lo_filter)
    return search.best, search.best_box, search.examined, search.pruned


def _first_optimal_box(ps: PointSet, target_volume: Fraction, cfg: SearchConfig):
    """Lexicographically smallest empty box of the known optimal volume,
    axes in their natural order."""
    points, scale = _scaled(ps, range(ps.dim))
    target = target_volume * scale**ps.dim
    assert target.denominator == 1
    search = _Search(points, ps.dim, scale, cfg.budget, cfg.prune, int(target))
    try:
        search.node(0, points, 1)
    except _Found:
        pass
    lo_hi = search.best_box
    return BoxD(tuple((Fraction(lo, scale), Fraction(hi, scale)) for lo, hi in lo_hi)), search


def _run_slices(pool, points, d, scale, cfg, slices):
    futures = [
        pool.submit(_run_slice, points, d, scale, cfg.budget, cfg.prune, s, slices)
        for s in range(slices)
    ]
    return [f.result() for f in futures]


def largest_empty_box(ps: PointSet, cfg: Optional[SearchConfig] = None,
                      executor: Optional[Executor] = None) -> DispersionResult:
    """Exact largest empty open box of ``ps`` with a witness.

    Among boxes of maximal volume the witness is the lexicographically
    smallest endpoint sequence ``(lo1, hi1, lo2, hi2, ...)``. When the
    search visits axes in a different order (descending number of distinct
    coordinates), a second, tightly pruned pass in natural axis order picks
    that box out. The same box is reported for any number of slices. Slices
    run on ``executor`` when given, otherwise on a fresh process pool.
    """
    cfg = cfg or SearchConfig()
    order = _axis_order(ps)
    points, scale = _scaled(ps, order)
    d = ps.dim
    slices = cfg.parallel_slices if d > 1 else 1
    try:
        if slices == 1:
            results = [_run_slice(points, d, scale, cfg.budget, cfg.prune, 0, 1)]
        elif executor is not None:
            results = _run_slices(executor, points, d, scale, cfg, slices)
        else:
            with ProcessPoolExecutor(max_workers=slices) as pool:
                results = _run_slices(pool, points, d, scale, cfg, slices)
    except BudgetExceeded as exc:
        exc.best = Fraction(exc.best or 0, scale**d)
        exc.witness = None
        raise
    best, box = 0, None
    examined = pruned = 0
    for vol, b, ex, pr in results:
        examined += ex
        pruned += pr
        if b is None:
            continue
        if vol > best or (vol == best and box is not None and b < box):
            best, box = vol, b
    intervals = [None] * d
    for pos, axis in enumerate(order):
        lo, hi = box[pos]
        intervals[axis] = (Fraction(lo, scale), Fraction(hi, scale))
    witness = BoxD(tuple(intervals))
    volume = Fraction(best, scale**d)
    if order != sorted(order):
        try:
            witness, second = _first_optimal_box(ps, volume, cfg)
        except BudgetExceeded as exc:
            exc.best, exc.witness = volume, witness
            raise
        examined += second.examined
        pruned += second.pruned
    assert witness.volume == volume
    return DispersionResult(volume, witness, examined, pruned)


def dispersion(ps: PointSet, cfg: Optional[SearchConfig] = None,
               executor: Optional[Executor] = None) -> Fraction:
    return largest_empty_box(ps, cfg, executor).volume


def slab_witness_box(k: int, d: int) -> BoxD:
    """The thin slab (0, 2^-(k+1)) x (0,1)^(d-1), empty for P(k, d)."""
    return BoxD(((Fraction(0), Fraction(1, 2 ** (k + 1))),) + ((Fraction(0), Fraction(1)),) * (d - 1))


def leave_one_out(ps: PointSet, cfg: Optional[SearchConfig] = None) -> list[Fraction]:
    return [dispersion(ps.without(i), cfg) for i in range(len(ps))]

