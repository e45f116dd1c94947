"""Brute-force dispersion, kept deliberately separate from the pruned search.

Every box whose endpoints come from the per-axis coordinate grids (point
coordinates plus 0 and 1) is tested for emptiness; no pruning, no active
sets. Only meant for small inputs.
"""
from __future__ import annotations

import itertools
import math
from fractions import Fraction

import numpy as np

from .pointsets import PointSet


def naive_oracle(ps: PointSet) -> Fraction:
    d = ps.dim
    den = math.lcm(1, *(Fraction(c).denominator for p in ps.points for c in p))
    pts = np.array(
        [[int(Fraction(c) * den) for c in p] for p in ps.points], dtype=object
    ).reshape(len(ps), d)

    pairs = []
    for axis in range(d):
        grid = sorted({0, den} | {int(v) for v in pts[:, axis]})
        pairs.append([(a, b) for a, b in itertools.combinations(grid, 2)])

    # last axis is vectorised: inside[i, j] says point j lies in pair i
    last = np.array(pairs[-1], dtype=object).reshape(-1, 2)
    last_w = last[:, 1] - last[:, 0]
    if len(ps):
        col = pts[:, -1]
        last_inside = (last[:, :1] < col[None, :]) & (col[None, :] < last[:, 1:])
    else:
        last_inside = np.zeros((len(last), 0), dtype=bool)

    best = 0
    for head in itertools.product(*pairs[:-1]):
        mask = np.ones(len(ps), dtype=bool)
        width = 1
        for axis, (lo, hi) in enumerate(head):
            col = pts[:, axis]
            mask &= (lo < col) & (col < hi)
            width *= hi - lo
        blocked = (last_inside & mask[None, :]).any(axis=1)
        free = last_w[~blocked]
        if len(free):
            best = max(best, width * max(free))
    return Fraction(best, den**d)
