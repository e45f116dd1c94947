"""Three-way classification of (eps, d) by how the sparse grid's size compares
with the other admissible-set sizes, plus PPM/SVG/CSV emitters for the grid.
"""
from __future__ import annotations

import enum
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .bounds import size_hammersley, size_nets, size_rudolf, size_sosnovec, size_sparse
from .errors import DomainError
from .numerics import MAX_PRECISION, START_PRECISION, compare_sizes


class Region(enum.Enum):
    BLACK = "Black"          # sparse grid beats every upper bound, constructive or not
    DARK_GRAY = "DarkGray"   # smallest explicit set, but a nonconstructive bound is no larger
    LIGHT_GRAY = "LightGray" # an explicit rival set is strictly smaller

    def __str__(self):
        return self.value


PALETTE = {
    Region.BLACK: (0, 0, 0),
    Region.DARK_GRAY: (105, 105, 105),
    Region.LIGHT_GRAY: (211, 211, 211),
}


def _default_d():
    return list(range(2, 101))


def _default_eps():
    return [Fraction(1, n) for n in range(4, 101)]


@dataclass(frozen=True)
class GridSpec:
    d_values: Sequence[int] = field(default_factory=_default_d)
    eps_values: Sequence[Fraction] = field(default_factory=_default_eps)

    def __post_init__(self):
        object.__setattr__(self, "d_values", tuple(self.d_values))
        object.__setattr__(self, "eps_values", tuple(Fraction(e) for e in self.eps_values))
        if not self.d_values or not self.eps_values:
            raise DomainError("grid needs at least one d and one epsilon")
        if any(d < 2 for d in self.d_values):
            raise DomainError("all dimensions must be at least 2")
        if any(not 0 < e <= Fraction(1, 4) for e in self.eps_values):
            raise DomainError("all epsilons must lie in (0, 1/4]")


def classify(eps, d: int, precision: int = START_PRECISION,
             max_precision: int = MAX_PRECISION, log_base="e") -> Region:
    """Black iff the sparse size is strictly below all four rival bounds,
    LightGray iff an explicit rival (Hammersley or nets) is strictly below
    it, DarkGray otherwise; exact ties therefore land in DarkGray.
    """
    eps = Fraction(eps)
    if not 0 < eps < 1 or d < 2:
        raise DomainError(f"need eps in (0, 1) and d >= 2, got eps={eps}, d={d}")
    sparse = size_sparse(eps, d)
    explicit = [size_hammersley(eps, d), size_nets(eps, d)]
    if any(compare_sizes(v, sparse, max_precision) < 0 for v in explicit):
        return Region.LIGHT_GRAY
    rivals = explicit + [
        size_rudolf(eps, d, precision, log_base, max_precision),
        size_sosnovec(eps, d, precision, log_base, max_precision),
    ]
    if all(compare_sizes(sparse, v, max_precision) < 0 for v in rivals):
        return Region.BLACK
    return Region.DARK_GRAY


def _classify_row(eps, d_values, precision, max_precision):
    return [classify(eps, d, precision, max_precision) for d in d_values]


def classify_grid(spec: GridSpec | None = None, precision: int = START_PRECISION,
                  max_precision: int = MAX_PRECISION, workers: int = 1) -> list[list[Region]]:
    """Rows follow ``spec.eps_values``, columns ``spec.d_values``."""
    spec = spec or GridSpec()
    if workers <= 1:
        return [_classify_row(e, spec.d_values, precision, max_precision) for e in spec.eps_values]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [
            pool.submit(_classify_row, e, spec.d_values, precision, max_precision)
            for e in spec.eps_values
        ]
        return [f.result() for f in futures]


# ---------------------------------------------------------------------------
# emitters

ORIENTATION = "columns: d increasing left to right; rows: eps decreasing top to bottom"


def _order_for_display(matrix, spec):
    rows = list(zip(spec.eps_values, matrix))
    rows.sort(key=lambda r: r[0], reverse=True)
    cols = sorted(range(len(spec.d_values)), key=lambda j: spec.d_values[j])
    return [[row[j] for j in cols] for _, row in rows]


def render_figure(matrix, fmt: str, spec: GridSpec | None = None) -> bytes:
    """Encode a region matrix as PPM (P6), SVG or CSV.

    When ``spec`` is given, cells are reordered so d grows to the right and
    eps shrinks downwards; otherwise the matrix is drawn as-is.
    """
    if not matrix or not matrix[0]:
        raise DomainError("cannot render an empty matrix")
    if spec is not None:
        matrix = _order_for_display(matrix, spec)
    rows, cols = len(matrix), len(matrix[0])
    fmt = fmt.lower()
    if fmt == "ppm":
        header = f"P6\n# {ORIENTATION}\n{cols} {rows}\n255\n".encode("ascii")
        body = bytearray()
        for row in matrix:
            for cell in row:
                body.extend(PALETTE[cell])
        return header + bytes(body)
    if fmt == "svg":
        parts = [
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{cols}" height="{rows}" '
            f'viewBox="0 0 {cols} {rows}" shape-rendering="crispEdges">',
            f"<!-- {ORIENTATION} -->",
        ]
        for i, row in enumerate(matrix):
            for j, cell in enumerate(row):
                r, g, b = PALETTE[cell]
                parts.append(
                    f'<rect x="{j}" y="{i}" width="1" height="1" '
                    f'fill="rgb({r},{g},{b})" class="{cell}"/>'
                )
        parts.append("</svg>")
        return ("\n".join(parts) + "\n").encode("ascii")
    if fmt == "csv":
        return "".join(",".join(str(c) for c in row) + "\n" for row in matrix).encode("ascii")
    raise DomainError(f"unknown figure format {fmt!r}")


def grid_records_csv(matrix, spec: GridSpec) -> str:
    """Long-form CSV: ``d,eps_num,eps_den,region`` per cell."""
    lines = ["d,eps_num,eps_den,region"]
    for eps, row in zip(spec.eps_values, matrix):
        for d, cell in zip(spec.d_values, row):
            lines.append(f"{d},{eps.numerator},{eps.denominator},{cell}")
    return "\n".join(lines) + "\n"


def persistence_exceptions(matrix, spec: GridSpec) -> list[tuple[int, Fraction]]:
    """Cells that leave LightGray after LightGray appeared at a larger eps
    in the same column."""
    order = sorted(range(len(spec.eps_values)), key=lambda i: spec.eps_values[i], reverse=True)
    found = []
    for j, d in enumerate(spec.d_values):
        seen_light = False
        for i in order:
            cell = matrix[i][j]
            if cell is Region.LIGHT_GRAY:
                seen_light = True
            elif seen_light:
                found.append((d, spec.eps_values[i]))
    return found
