"""Sizes of admissible point sets: the lower bound, four rival upper bounds,
the sparse grid's own size and its two simple majorants.

A set is admissible for (eps, d) when its dispersion is at most eps.
Values come back as :class:`SizeValue`; the two bounds that contain a bare
logarithm use the natural log unless ``log_base=2`` is passed.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import partial
from typing import Optional

from .errors import DomainError, IndeterminateComparison
from .numerics import (
    MAX_PRECISION,
    START_PRECISION,
    SizeValue,
    binomial,
    compare_sizes,
    format_int,
    format_rat,
    log_bounds,
    mul_interval,
    primorial,
)
from .pointsets import k_of_epsilon

SOSNOVEC_EXPONENT_CAP = 65536


def _check(eps, d, d_min=2, eps_max=Fraction(1), closed=False):
    eps = Fraction(eps)
    if not (0 < eps <= eps_max if closed else 0 < eps < eps_max):
        raise DomainError(f"epsilon {eps} outside the admissible range")
    if d < d_min:
        raise DomainError(f"dimension must be at least {d_min}, got {d}")
    return eps


def lower_bound_ahr(eps, d: int, precision: int = START_PRECISION) -> SizeValue:
    """(4 eps)^-1 (1 - 4 eps) log2 d: every admissible set is at least this big."""
    eps = _check(eps, d, eps_max=Fraction(1, 4), closed=True)
    coef = (1 - 4 * eps) / (4 * eps)
    lo, hi = log_bounds(Fraction(d), precision, 2)
    if coef == 0 or lo == hi:
        return SizeValue.of_rational(coef * lo)
    return SizeValue(
        lower=coef * lo,
        upper=coef * hi,
        precision=precision,
        refine=lambda p: lower_bound_ahr(eps, d, p),
    )


def size_hammersley(eps, d: int) -> SizeValue:
    eps = _check(eps, d)
    return SizeValue.of_int(math.ceil(2 ** (d - 1) * primorial(d) / eps))


def size_nets(eps, d: int) -> SizeValue:
    eps = _check(eps, d)
    return SizeValue.of_int(math.ceil(2 ** (7 * d + 1) / eps))


def _floor_exact(interval_at, precision, max_precision, what, magnitude=0):
    # a bracket of relative width 2^-p cannot settle the floor of a value
    # near 2^magnitude unless p exceeds magnitude, so skip those rounds
    p = precision
    while p < magnitude + 32 and p < max_precision:
        p = min(2 * p, max_precision)
    while True:
        lo, hi = interval_at(p)
        if math.floor(lo) == math.floor(hi):
            return SizeValue.of_int(math.floor(lo))
        if p >= max_precision:
            raise IndeterminateComparison(f"{what}: floor undecided at {p} bits")
        p = min(2 * p, max_precision)


def size_rudolf(eps, d: int, precision: int = START_PRECISION, log_base="e",
                max_precision: int = MAX_PRECISION) -> SizeValue:
    """floor(8 d eps^-1 log(33 eps^-1))."""
    eps = _check(eps, d)
    scale = 8 * d / eps

    def interval_at(p):
        lo, hi = log_bounds(33 / eps, p, log_base)
        return scale * lo, scale * hi

    return _floor_exact(interval_at, precision, max_precision, "rudolf bound")


def _log_factor(q, d, p, base):
    """Bracket of (1 + 4 log q) * log d."""
    q_lo, q_hi = log_bounds(Fraction(q), p, base)
    d_lo, d_hi = log_bounds(Fraction(d), p, base)
    return mul_interval((1 + 4 * q_lo, 1 + 4 * q_hi), (d_lo, d_hi))


def _sosnovec_linear(q, d, base, p):
    power = q ** (q * q + 2)
    lo, hi = _log_factor(q, d, p, base)
    return SizeValue(
        lower=power * lo,
        upper=power * hi,
        rounding="floor",
        precision=p,
        refine=partial(_sosnovec_linear, q, d, base),
    )


def _sosnovec_log2(q, d, base, p):
    e = q * q + 2
    lq_lo, lq_hi = log_bounds(Fraction(q), p, 2)
    f_lo, f_hi = _log_factor(q, d, p, base)
    lf_lo = log_bounds(f_lo, p, 2)[0]
    lf_hi = log_bounds(f_hi, p, 2)[1]
    return SizeValue(
        lower=e * lq_lo + lf_lo,
        upper=e * lq_hi + lf_hi,
        rounding="floor",
        log2_domain=True,
        precision=p,
        refine=partial(_sosnovec_log2, q, d, base),
    )


def size_sosnovec(eps, d: int, precision: int = START_PRECISION, log_base="e",
                  max_precision: int = MAX_PRECISION,
                  exponent_cap: int = SOSNOVEC_EXPONENT_CAP) -> SizeValue:
    """floor(q^(q^2+2) (1 + 4 log q) log d) with q = ceil(1/eps).

    Exact when the floor can be settled within ``max_precision`` bits;
    otherwise a certified bracket (on log2 of the value once the exponent
    q^2 + 2 passes ``exponent_cap``), good for comparisons only.
    """
    eps = _check(eps, d)
    q = math.ceil(1 / eps)
    e = q * q + 2
    if e > exponent_cap:
        return _sosnovec_log2(q, d, log_base, precision)
    magnitude = e * q.bit_length()
    if magnitude + 32 <= max_precision:
        def interval_at(p):
            v = _sosnovec_linear(q, d, log_base, p)
            return v.lower, v.upper

        return _floor_exact(interval_at, precision, max_precision, "sosnovec bound", magnitude)
    return _sosnovec_linear(q, d, log_base, precision)


def size_sparse(eps, d: int) -> SizeValue:
    """2^k C(d+k-1, d-1) with k = k(eps): the size of P(k(eps), d)."""
    eps = _check(eps, d, d_min=1)
    k = k_of_epsilon(eps)
    return SizeValue.of_int((1 << k) * binomial(d + k - 1, d - 1))


def simplified_bounds(eps, d: int) -> tuple[SizeValue, SizeValue]:
    """(eps^-1 ceil(log2 eps^-1)^(d-1), (2d)^k(eps)), both majorants of the sparse size."""
    eps = _check(eps, d, d_min=1)
    k = k_of_epsilon(eps)
    ceil_log = k + 1
    return (
        SizeValue.of_rational(ceil_log ** (d - 1) / eps),
        SizeValue.of_int((2 * d) ** k),
    )


UPPER_BOUNDS = ("hammersley", "nets", "rudolf", "sosnovec", "sparse")


@dataclass(frozen=True)
class BoundsReport:
    eps: Fraction
    d: int
    lower_ahr: Optional[SizeValue]
    hammersley: SizeValue
    nets: SizeValue
    rudolf: SizeValue
    sosnovec: SizeValue
    sparse: SizeValue
    simplified_linear: SizeValue
    simplified_poly: SizeValue
    log_base: str = "e"

    def min_upper(self) -> tuple[str, SizeValue]:
        """Smallest known admissible size among the upper bounds, with its name.

        This is only an upper estimate of the true minimal size, which stays
        unknown.
        """
        name = UPPER_BOUNDS[0]
        best = getattr(self, name)
        for other in UPPER_BOUNDS[1:]:
            value = getattr(self, other)
            if compare_sizes(value, best) < 0:
                name, best = other, value
        return name, best


def bounds_report(eps, d: int, precision: int = START_PRECISION, log_base="e") -> BoundsReport:
    eps = _check(eps, d)
    lower = lower_bound_ahr(eps, d, precision) if eps <= Fraction(1, 4) else None
    linear, poly = simplified_bounds(eps, d)
    return BoundsReport(
        eps=eps,
        d=d,
        lower_ahr=lower,
        hammersley=size_hammersley(eps, d),
        nets=size_nets(eps, d),
        rudolf=size_rudolf(eps, d, precision, log_base),
        sosnovec=size_sosnovec(eps, d, precision, log_base),
        sparse=size_sparse(eps, d),
        simplified_linear=linear,
        simplified_poly=poly,
        log_base=str(log_base),
    )


def nets_beat_hammersley(d: int) -> bool:
    """Whether the net size is strictly below the Hammersley size.

    Both sizes are ceilings of integers over eps and eps < 1, so the order
    is that of 2^(7d+1) against 2^(d-1) pi_d, i.e. 2^(6d+2) against pi_d.
    """
    return 2 ** (6 * d + 2) < primorial(d)


def nets_crossover(d_max: int = 200) -> Optional[int]:
    for d in range(2, d_max + 1):
        if nets_beat_hammersley(d):
            return d
    return None


# ---------------------------------------------------------------------------
# rendering


def format_size(v: Optional[SizeValue]) -> str:
    if v is None:
        return "NA"
    if v.is_exact:
        return format_int(v.exact)
    if v.is_point:
        return format_rat(v.lower)
    return f"~2^{v.approx_log2():.6g}"


def size_to_json(v: Optional[SizeValue]) -> Optional[dict]:
    if v is None:
        return None
    if v.is_exact:
        return {"kind": "exact", "value": format_int(v.exact)}
    return {
        "kind": "certified",
        "lower": format_rat(v.lower),
        "upper": format_rat(v.upper),
        "rounding": v.rounding,
        "log2_domain": v.log2_domain,
        "precision_bits": v.precision,
        "approx_log2": f"{v.approx_log2():.6g}",
    }


REPORT_FIELDS = (
    "lower_ahr", "hammersley", "nets", "rudolf", "sosnovec",
    "sparse", "simplified_linear", "simplified_poly",
)

CSV_HEADER = "eps,d," + ",".join(REPORT_FIELDS) + ",min_upper_name,min_upper"


def report_csv_row(r: BoundsReport) -> str:
    name, best = r.min_upper()
    cells = [format_rat(r.eps), str(r.d)]
    cells += [format_size(getattr(r, f)) for f in REPORT_FIELDS]
    cells += [name, format_size(best)]
    return ",".join(cells)


def report_json(r: BoundsReport) -> dict:
    name, best = r.min_upper()
    out = {"eps": format_rat(r.eps), "d": r.d, "log_base": r.log_base}
    for f in REPORT_FIELDS:
        out[f] = size_to_json(getattr(r, f))
    out["min_upper"] = {"name": name, "value": size_to_json(best)}
    return out
