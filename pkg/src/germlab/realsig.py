"""Eigenvalue-sign stratification of a real symmetric matrix family in the plane.

A(x) is evaluated exactly on a square grid.  After scaling by a positive
integer every grid matrix is an integer matrix, so its characteristic
polynomial has integer coefficients; since all roots are real, Descartes'
rule of signs counts positive and negative eigenvalues exactly.
"""

from __future__ import annotations

import csv
import warnings
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Sequence

import numpy as np
from scipy import ndimage

from .polyring import SymMatrixGerm

Triple = tuple[int, int, int]


def char_poly_coefficients(m: Sequence[Sequence]) -> list:
    """Coefficients [1, c1, ..., cn] of det(t I - M) for n <= 3.

    Works elementwise on numpy object arrays as well as on scalars.
    """
    n = len(m)
    if n == 1:
        return [1, -m[0][0]]
    if n == 2:
        return [1, -(m[0][0] + m[1][1]), m[0][0] * m[1][1] - m[0][1] * m[0][1]]
    if n == 3:
        tr = m[0][0] + m[1][1] + m[2][2]
        minors = (m[0][0] * m[1][1] - m[0][1] * m[0][1] + m[0][0] * m[2][2] - m[0][2] * m[0][2]
                  + m[1][1] * m[2][2] - m[1][2] * m[1][2])
        det = (m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[1][2])
               - m[0][1] * (m[0][1] * m[2][2] - m[1][2] * m[0][2])
               + m[0][2] * (m[0][1] * m[1][2] - m[1][1] * m[0][2]))
        return [1, -tr, minors, -det]
    raise ValueError("signature sampling supports n <= 3")


def _sign_changes(signs: list) -> int:
    changes, last = 0, 0
    for s in signs:
        if s != 0:
            if last and s != last:
                changes += 1
            last = s
    return changes


def signature_from_coefficients(coeffs: Sequence) -> Triple:
    """(positive, zero, negative) root counts of a real-rooted polynomial."""
    n = len(coeffs) - 1
    zero = 0
    while zero < n and coeffs[n - zero] == 0:
        zero += 1
    signs = [(c > 0) - (c < 0) for c in coeffs]
    pos = _sign_changes(signs)
    neg = _sign_changes([s * (-1) ** (n - k) for k, s in enumerate(signs)])
    return pos, zero, neg


def signature_of_matrix(m: Sequence[Sequence]) -> Triple:
    return signature_from_coefficients(char_poly_coefficients([[Fraction(x) for x in row] for row in m]))


def signature_at(a: SymMatrixGerm, point: Sequence) -> Triple:
    return signature_of_matrix(a.evaluate([Fraction(p) for p in point]))


@dataclass(frozen=True)
class GridSpec:
    """Square grid of step h on [-radius, radius]^2 restricted to the punctured disk.

    Cells are squares of side h centered at grid points; a cell is dropped when
    it meets the closed disk of radius ``puncture`` (default radius/20) or when
    its center lies outside the disk of radius ``radius``.
    """

    radius: Fraction = Fraction(1)
    step: Fraction = Fraction(1, 100)
    puncture: Fraction | None = None

    def __post_init__(self):
        object.__setattr__(self, "radius", Fraction(self.radius))
        object.__setattr__(self, "step", Fraction(self.step))
        object.__setattr__(self, "puncture", Fraction(self.radius) / 20 if self.puncture is None
                           else Fraction(self.puncture))
        if self.step <= 0 or self.radius <= 0:
            raise ValueError("radius and step must be positive")

    @property
    def half_count(self) -> int:
        return int(self.radius / self.step)

    def halved(self) -> "GridSpec":
        return GridSpec(self.radius, self.step / 2, self.puncture)


class SignatureField:
    """Per-cell signature triples of A on a grid; -1 marks cells outside the region."""

    def __init__(self, a: SymMatrixGerm, grid: GridSpec):
        if a.r != 2:
            raise ValueError("signature fields are planar (r = 2)")
        self.a, self.grid = a, grid
        k = grid.half_count
        idx = np.arange(-k, k + 1, dtype=object)
        self.coords = [Fraction(int(i)) * grid.step for i in idx]
        i1, i2 = np.meshgrid(idx, idx, indexing="ij")
        # positions are (i1 h, i2 h); scale A(i h) by a positive integer so every entry is an integer
        h = grid.step
        degree = max((e.degree() for e in a.upper_entries() if not e.is_zero()), default=0)
        den = 1
        for e in a.upper_entries():
            for c in e.terms.values():
                den = lcm(den, c.denominator)
        scale_num = h.numerator
        scale_den = h.denominator

        def entry(p):
            out = np.zeros(i1.shape, dtype=object)
            for m, c in p.items():
                d = sum(m)
                coeff = int(c * den) * scale_num ** d * scale_den ** (degree - d)
                out = out + coeff * i1 ** m[0] * i2 ** m[1]
            return out

        n = a.n
        mats = [[entry(a.entry(i, j)) for j in range(n)] for i in range(n)]
        coeffs = char_poly_coefficients(mats)
        coeffs = [np.broadcast_to(np.asarray(c, dtype=object), i1.shape) for c in coeffs]
        self.n = n
        self.labels = np.empty(i1.shape + (3,), dtype=np.int64)
        signs = [_sign_array(c) for c in coeffs]
        self.labels[...] = _descartes(signs)
        self.mask = _region_mask(grid, i1, i2)
        self.labels[~self.mask] = -1

    def cells(self):
        """Yield (x1, x2, (n1, n2, n3)) for every cell in the region."""
        k = self.grid.half_count
        for a in range(2 * k + 1):
            for b in range(2 * k + 1):
                if self.mask[a, b]:
                    yield self.coords[a], self.coords[b], tuple(int(v) for v in self.labels[a, b])

    def target_mask(self, target: Triple) -> np.ndarray:
        t = np.array(target)
        return self.mask & np.all(self.labels == t, axis=-1)

    def counts(self) -> dict[Triple, int]:
        out: dict[Triple, int] = {}
        flat = self.labels[self.mask]
        for row in flat:
            key = tuple(int(v) for v in row)
            out[key] = out.get(key, 0) + 1
        return out


def _sign_array(c: np.ndarray) -> np.ndarray:
    return np.vectorize(lambda v: (v > 0) - (v < 0), otypes=[np.int64])(c)


def _descartes(signs: list[np.ndarray]) -> np.ndarray:
    n = len(signs) - 1
    shape = signs[0].shape

    def changes(seq):
        count = np.zeros(shape, dtype=np.int64)
        last = np.zeros(shape, dtype=np.int64)
        for s in seq:
            nz = s != 0
            count += (nz & (last != 0) & (s != last)).astype(np.int64)
            last = np.where(nz, s, last)
        return count

    zero = np.zeros(shape, dtype=np.int64)
    still = np.ones(shape, dtype=bool)
    for k in range(n, 0, -1):
        still &= signs[k] == 0
        zero += still.astype(np.int64)
    pos = changes(signs)
    neg = changes([s * (-1) ** (n - k) for k, s in enumerate(signs)])
    return np.stack([pos, zero, neg], axis=-1)


def _region_mask(grid: GridSpec, i1: np.ndarray, i2: np.ndarray) -> np.ndarray:
    # exact integer tests in units of h/2
    h2 = grid.step / 2
    R = grid.radius / h2
    eps = grid.puncture / h2
    a = (2 * i1).astype(np.int64)
    b = (2 * i2).astype(np.int64)
    r2 = R * R
    inside = (a * a + b * b) * r2.denominator <= r2.numerator
    # nearest point of the cell [a-1, a+1] x [b-1, b+1] to the origin
    na = np.maximum(np.abs(a) - 1, 0)
    nb = np.maximum(np.abs(b) - 1, 0)
    e2 = eps * eps
    meets = (na * na + nb * nb) * e2.denominator <= e2.numerator
    return inside & ~meets


def signature_field(a: SymMatrixGerm, grid: GridSpec = GridSpec()) -> SignatureField:
    return SignatureField(a, grid)


def component_count(a: SymMatrixGerm, target: Triple, grid: GridSpec = GridSpec()) -> int:
    """Number of 4-connected components of cells with signature ``target``."""
    mask = signature_field(a, grid).target_mask(tuple(target))
    if not mask.any():
        warnings.warn(f"no cells with signature {tuple(target)}", stacklevel=2)
        return 0
    _, count = ndimage.label(mask)
    return int(count)


@dataclass
class StableCount:
    count: int
    refined: int

    @property
    def stable(self) -> bool:
        return self.count == self.refined

    def as_dict(self):
        return {"count": self.count, "count_half_step": self.refined, "stable": self.stable}


def stable_component_count(a: SymMatrixGerm, target: Triple, grid: GridSpec = GridSpec()) -> StableCount:
    return StableCount(component_count(a, target, grid), component_count(a, target, grid.halved()))


# ---------------------------------------------------------------- rays

def ray_signature(a: SymMatrixGerm, direction: Sequence) -> Triple:
    """Signature of A(t v) for all sufficiently small t > 0.

    Each characteristic coefficient is a polynomial in t; for small t its sign
    is the sign of its lowest-order term.
    """
    from .polyring import Polynomial

    p, q = (Fraction(v) for v in direction)
    ray = [Polynomial({(1,): p}, 1), Polynomial({(1,): q}, 1)]
    b = a.compose(ray)
    coeffs = char_poly_coefficients([[b.entry(i, j) for j in range(a.n)] for i in range(a.n)])
    signs = []
    for c in coeffs:
        if isinstance(c, int):
            signs.append((c > 0) - (c < 0))
        elif c.is_zero():
            signs.append(0)
        else:
            low = c.coeff((c.order(),))
            signs.append((low > 0) - (low < 0))
    return signature_from_coefficients(signs)


def ray_sectors(a: SymMatrixGerm, count: int = 720) -> dict[Triple, int]:
    """Number of angular sectors of rays from the origin carrying each signature.

    Signatures that fill a sector of directions belong to regions with
    nonempty interior tangent cone; regions tangent to finitely many
    directions (cusps) carry none.  Directions seen on a single sample only
    are treated as exceptional and merged into their neighbours.
    """
    from math import cos, pi, sin

    scale = 10 ** 6
    seq = []
    for k in range(count):
        th = 2 * pi * (k + 0.5) / count
        seq.append(ray_signature(a, (Fraction(round(cos(th) * scale), scale),
                                     Fraction(round(sin(th) * scale), scale))))
    keep = [s for i, s in enumerate(seq) if s == seq[i - 1] or s == seq[(i + 1) % count]]
    if not keep:
        return {}
    arcs = [s for i, s in enumerate(keep) if s != keep[i - 1]] or [keep[0]]
    out: dict[Triple, int] = {}
    for s in arcs:
        out[s] = out.get(s, 0) + 1
    return out


# ---------------------------------------------------------------- output

_PALETTE = ["#1f4e9c", "#6fa8dc", "#cfe2f3", "#f4cccc", "#e06666", "#990000", "#999999", "#ffd966", "#93c47d",
            "#674ea7"]


def _colour(triple: Triple, n: int) -> str:
    # order triples by (n1, n2) so the fully positive signature is first
    ordered = [(p, z, n - p - z) for p in range(n, -1, -1) for z in range(n - p, -1, -1)]
    return _PALETTE[ordered.index(tuple(triple)) % len(_PALETTE)]


def signature_svg(a: SymMatrixGerm, grid: GridSpec, path: str) -> str:
    """Write the signature field as SVG: x1 to the right, x2 upward."""
    f = signature_field(a, grid)
    k = grid.half_count
    size = 2 * k + 1
    px = max(1, 600 // size)
    lines = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size * px}" height="{size * px}" '
             f'viewBox="0 0 {size * px} {size * px}">',
             f'<rect width="{size * px}" height="{size * px}" fill="white"/>']
    for a_ in range(size):
        for b in range(size):
            if not f.mask[a_, b]:
                continue
            col = _colour(tuple(int(v) for v in f.labels[a_, b]), f.n)
            lines.append(f'<rect x="{a_ * px}" y="{(size - 1 - b) * px}" width="{px}" height="{px}" fill="{col}"/>')
    mid = k * px + px // 2
    lines.append(f'<line x1="0" y1="{mid}" x2="{size * px}" y2="{mid}" stroke="black" stroke-width="1"/>')
    lines.append(f'<line x1="{mid}" y1="0" x2="{mid}" y2="{size * px}" stroke="black" stroke-width="1"/>')
    legend_y = 14
    for triple in sorted(f.counts(), reverse=True):
        lines.append(f'<text x="4" y="{legend_y}" font-size="12" fill="{_colour(triple, f.n)}">'
                     f'{triple}</text>')
        legend_y += 14
    lines.append("</svg>")
    text = "\n".join(lines) + "\n"
    with open(path, "w") as fh:
        fh.write(text)
    return path


def signature_csv(a: SymMatrixGerm, grid: GridSpec, path: str) -> str:
    f = signature_field(a, grid)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["x1", "x2", "n1", "n2", "n3"])
        for x1, x2, t in f.cells():
            w.writerow([str(x1), str(x2), *t])
    return path


__all__ = [
    "GridSpec",
    "SignatureField",
    "StableCount",
    "char_poly_coefficients",
    "signature_from_coefficients",
    "signature_of_matrix",
    "signature_at",
    "signature_field",
    "component_count",
    "stable_component_count",
    "ray_signature",
    "ray_sectors",
    "signature_svg",
    "signature_csv",
]
