"""Named end-to-end checks, shared by the test suite and ``sparsedisp verify``.

Each check returns a :class:`Check`; ``passed`` already folds in the time
limits that apply to it.
"""
from __future__ import annotations

import math
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from .bounds import (
    nets_beat_hammersley,
    simplified_bounds,
    size_hammersley,
    size_nets,
    size_sparse,
)
from .classify import GridSpec, Region, classify, classify_grid
from .dispersion import SearchConfig, is_empty, largest_empty_box, slab_witness_box
from .numerics import compare_sizes
from .oracle import naive_oracle
from .pointsets import PointSet, k_of_epsilon, sparse_grid

DISPERSION_CASES = [(2, k) for k in range(7)] + [(3, k) for k in range(5)] + [(4, k) for k in range(3)]


@dataclass
class Check:
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0
    findings: list = field(default_factory=list)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.name}: {self.detail} ({self.seconds:.2f}s)"


def _timed(fn):
    def wrapper(*args, **kwargs):
        start = time.perf_counter()
        check = fn(*args, **kwargs)
        check.seconds = time.perf_counter() - start
        return check

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


@_timed
def check_cardinality() -> Check:
    """Generated size of P(k,d) equals 2^k C(d+k-1, d-1) for k <= 8, d <= 6."""
    bad = []
    start = time.perf_counter()
    for d in range(1, 7):
        for k in range(9):
            expected = 2**k * math.comb(d + k - 1, d - 1)
            got = len(sparse_grid(k, d))
            if got != expected:
                bad.append((k, d, got, expected))
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 30
    return Check("cardinality", ok, f"54 (k,d) pairs, mismatches={bad}, {elapsed:.1f}s < 30s")


@_timed
def check_grid_dispersion(slices: int = 1) -> Check:
    """dispersion(P(k,d)) = 2^-(k+1) with a valid witness; the thin slab is empty."""
    bad = []
    start = time.perf_counter()
    for d, k in DISPERSION_CASES:
        ps = sparse_grid(k, d)
        res = largest_empty_box(ps, SearchConfig(parallel_slices=slices))
        target = Fraction(1, 2 ** (k + 1))
        if res.volume != target:
            bad.append((d, k, "volume", res.volume))
        if not is_empty(res.witness, ps) or res.witness.volume != res.volume:
            bad.append((d, k, "witness"))
        slab = slab_witness_box(k, d)
        if not is_empty(slab, ps) or slab.volume != target:
            bad.append((d, k, "slab"))
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 300
    return Check("grid_dispersion", ok, f"{len(DISPERSION_CASES)} cases, failures={bad}")


@_timed
def check_dimension_one() -> Check:
    bad = []
    for k in range(9):
        target = Fraction(1, 2) if k == 0 else Fraction(1, 2**k)
        got = largest_empty_box(sparse_grid(k, 1)).volume
        if got != target:
            bad.append((k, got))
    return Check("dimension1", not bad, f"k=0..8, failures={bad}")


@_timed
def check_leave_one_out() -> Check:
    """P(3,2): 32 points, dispersion 1/16, each leave-one-out at least 1/8."""
    ps = sparse_grid(3, 2)
    vol = largest_empty_box(ps).volume
    outs = [largest_empty_box(ps.without(i)).volume for i in range(len(ps))]
    below = [i for i, v in enumerate(outs) if v < Fraction(1, 8)]
    excess = [(ps.points[i], v) for i, v in enumerate(outs) if v > Fraction(1, 8)]
    ok = len(ps) == 32 and vol == Fraction(1, 16) and not below and len(outs) == 32
    detail = (
        f"|P(3,2)|={len(ps)}, dispersion={vol}, "
        f"leave-one-out values={{{', '.join(str(v) for v in sorted(set(outs)))}}}, strict excess at {len(excess)} points"
    )
    return Check("leave_one_out", ok, detail, findings=excess)


@_timed
def check_eps_guarantee() -> Check:
    bad = []
    for n in range(4, 21):
        eps = Fraction(1, n)
        k = k_of_epsilon(eps)
        for d in (2, 3):
            vol = largest_empty_box(sparse_grid(k, d)).volume
            if not vol <= eps:
                bad.append((eps, d, vol))
    return Check("eps_guarantee", not bad, f"eps=1/4..1/20, d=2,3, violations={bad}")


@_timed
def check_crossover() -> Check:
    winners = [d for d in range(2, 61) if nets_beat_hammersley(d)]
    first = winners[0] if winners else None
    sample = [
        compare_sizes(size_nets(e, first), size_hammersley(e, first)) < 0
        and compare_sizes(size_nets(e, first - 1), size_hammersley(e, first - 1)) >= 0
        for e in (Fraction(1, 4), Fraction(1, 37), Fraction(1, 100))
    ] if first else [False]
    ok = first == 54 and winners == list(range(54, 61)) and all(sample)
    return Check("crossover", ok, f"first d with nets < hammersley: {first}")


def random_instances(count: int = 60, seed: int = 20170601):
    """Seeded small point sets with dyadic coordinates of exponent <= 6."""
    rng = random.Random(seed)
    limits = {1: 40, 2: 40, 3: 16}
    out = []
    for i in range(count):
        d = (1, 2, 3)[i % 3]
        n = rng.randint(0, limits[d])
        pts = [tuple(Fraction(rng.randrange(1, 64), 64) for _ in range(d)) for _ in range(n)]
        out.append(PointSet(d, tuple(pts), f"random#{i}"))
    return out


@_timed
def check_oracle_equivalence(count: int = 60) -> Check:
    bad = []
    for ps in random_instances(count):
        fast = largest_empty_box(ps).volume
        slow = naive_oracle(ps)
        if fast != slow:
            bad.append((ps.label, fast, slow))
    return Check("oracle", not bad and count >= 50, f"{count} instances, mismatches={bad}")


@_timed
def check_simplified(spec: GridSpec | None = None) -> Check:
    spec = spec or GridSpec()
    bad = []
    for eps in spec.eps_values:
        for d in spec.d_values:
            sparse = size_sparse(eps, d)
            linear, poly = simplified_bounds(eps, d)
            if compare_sizes(sparse, linear) > 0 or compare_sizes(sparse, poly) > 0:
                bad.append((eps, d))
    cells = len(spec.eps_values) * len(spec.d_values)
    return Check("simplified", not bad, f"{cells} cells, violations={bad}")


@_timed
def check_region_grid(workers: int = 1) -> Check:
    spec = GridSpec()
    matrix = classify_grid(spec, workers=workers)
    tags = {c for row in matrix for c in row}
    spots = {
        (Fraction(1, 4), 2): Region.BLACK,
        (Fraction(1, 100), 2): Region.LIGHT_GRAY,
        (Fraction(1, 100), 100): Region.DARK_GRAY,
    }
    idx_e = {e: i for i, e in enumerate(spec.eps_values)}
    idx_d = {d: j for j, d in enumerate(spec.d_values)}
    spot_ok = all(matrix[idx_e[e]][idx_d[d]] is r and classify(e, d) is r for (e, d), r in spots.items())
    shape_ok = len(matrix) == 97 and all(len(r) == 99 for r in matrix)
    ok = shape_ok and tags == set(Region) and spot_ok
    counts = {str(r): sum(c is r for row in matrix for c in row) for r in Region}
    return Check("region_grid", ok, f"97x99 grid, counts={counts}, spot checks ok={spot_ok}")


@_timed
def check_determinism(thread_counts=(1, 2, 8)) -> Check:
    inputs = [sparse_grid(k, d) for d, k in DISPERSION_CASES]
    fig1 = sparse_grid(3, 2)
    inputs += [fig1] + [fig1.without(i) for i in range(len(fig1))]
    reference = None
    bad = []
    for t in thread_counts:
        cfg = SearchConfig(parallel_slices=t)
        if t == 1:
            got = [largest_empty_box(ps, cfg) for ps in inputs]
        else:
            with ProcessPoolExecutor(max_workers=t) as pool:
                got = [largest_empty_box(ps, cfg, pool) for ps in inputs]
        got = [(r.volume, r.witness) for r in got]
        if reference is None:
            reference = got
        elif got != reference:
            bad.append(t)
    return Check("determinism", not bad, f"{len(inputs)} inputs x workers {list(thread_counts)}, differing={bad}")


SUITES = {
    "cardinality": check_cardinality,
    "grid_dispersion": check_grid_dispersion,
    "dimension1": check_dimension_one,
    "leave_one_out": check_leave_one_out,
    "eps_guarantee": check_eps_guarantee,
    "crossover": check_crossover,
    "oracle": check_oracle_equivalence,
    "simplified": check_simplified,
    "region_grid": check_region_grid,
    "determinism": check_determinism,
}


def run_suites(names):
    if not names or "all" in names:
        names = list(SUITES)
    for name in names:
        yield SUITES[name]()
