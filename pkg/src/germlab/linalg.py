"""Exact linear algebra over Q.

Two tools:

* :class:`EchelonSpace` - an incrementally built subspace of Q^N stored as a
  sparse semi-echelon basis of primitive integer rows.  The pivot of a row is
  its smallest column, so callers control pivot choice through column order.
* Dense helpers (:func:`rank`, :func:`det`, :func:`nullspace`, :func:`rref`)
  using fraction-free Bareiss elimination on small matrices.
"""

from __future__ import annotations

import heapq
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Mapping, Sequence

SparseVec = Mapping[int, int | Fraction]


def _to_primitive(vec: SparseVec) -> dict[int, int]:
    """Scale a rational sparse vector to a primitive integer vector with positive leading entry."""
    den = 1
    for v in vec.values():
        if isinstance(v, Fraction):
            den = lcm(den, v.denominator)
    out = {}
    for k, v in vec.items():
        if v:
            iv = v * den
            out[k] = int(iv) if not isinstance(iv, Fraction) else iv.numerator
    return _content_free(out)


def _content_free(vec: dict[int, int]) -> dict[int, int]:
    g = 0
    for v in vec.values():
        g = gcd(g, v)
        if g == 1:
            break
    if g > 1:
        vec = {k: v // g for k, v in vec.items()}
    return vec


class EchelonSpace:
    """Subspace of Q^dim spanned by inserted vectors.

    Rows are kept content-free; reduction is fraction-free, so no rational
    arithmetic happens inside the loop.
    """

    def __init__(self, dim: int):
        self.dim = dim
        self._rows: dict[int, dict[int, int]] = {}

    def __len__(self):
        return len(self._rows)

    @property
    def rank(self) -> int:
        return len(self._rows)

    @property
    def pivots(self) -> list[int]:
        return sorted(self._rows)

    def rows(self) -> list[dict[int, int]]:
        return [self._rows[p] for p in sorted(self._rows)]

    def _reduce_int(self, v: dict[int, int]) -> tuple[dict[int, int], int]:
        """Eliminate every pivot column from ``v``.

        Returns (w, s) with w = s*v - (combination of rows); s is a positive integer.
        """
        scale = 1
        heap = [c for c in v if c in self._rows]
        heapq.heapify(heap)
        while heap:
            c = heapq.heappop(heap)
            a = v.get(c)
            if not a or c not in self._rows:
                continue
            row = self._rows[c]
            p = row[c]
            g = gcd(a, p)
            mv, mr = p // g, a // g
            if mv < 0:
                mv, mr = -mv, -mr
            if mv != 1:
                v = {k: x * mv for k, x in v.items()}
                scale *= mv
            for k, x in row.items():
                nv = v.get(k, 0) - mr * x
                if nv:
                    if k not in v and k in self._rows:
                        heapq.heappush(heap, k)
                    v[k] = nv
                else:
                    v.pop(k, None)
        return v, scale

    def reduce(self, vec: SparseVec) -> dict[int, Fraction]:
        """Canonical residue of ``vec`` modulo the space (zero on every pivot column)."""
        den = 1
        for x in vec.values():
            if isinstance(x, Fraction):
                den = lcm(den, x.denominator)
        iv = {k: int(x * den) for k, x in vec.items() if x}
        w, s = self._reduce_int(iv)
        total = s * den
        return {k: Fraction(x, total) for k, x in w.items()}

    def contains(self, vec: SparseVec) -> bool:
        if not vec:
            return True
        w, _ = self._reduce_int(_to_primitive(vec))
        return not w

    def insert(self, vec: SparseVec) -> bool:
        """Add ``vec``; return True when the dimension grew."""
        if not vec:
            return False
        w, _ = self._reduce_int(_to_primitive(vec))
        if not w:
            return False
        w = _content_free(w)
        piv = min(w)
        if w[piv] < 0:
            w = {k: -x for k, x in w.items()}
        self._rows[piv] = w
        return True

    def extend(self, vecs: Iterable[SparseVec]) -> int:
        return sum(self.insert(v) for v in vecs)

    def copy(self) -> "EchelonSpace":
        out = EchelonSpace(self.dim)
        out._rows = {k: dict(v) for k, v in self._rows.items()}
        return out

    def rows_with_pivot_at_least(self, col: int) -> list[dict[int, int]]:
        """Basis of the intersection with the coordinate block [col, dim)."""
        return [self._rows[p] for p in sorted(self._rows) if p >= col]

    def rref(self) -> list[dict[int, Fraction]]:
        """Reduced row echelon basis (leading 1, zero above and below pivots)."""
        piv = sorted(self._rows)
        done: dict[int, dict[int, Fraction]] = {}
        for p in reversed(piv):
            row = {k: Fraction(x, self._rows[p][p]) for k, x in self._rows[p].items()}
            for q in [k for k in row if k != p and k in done]:
                f = row[q]
                for k, x in done[q].items():
                    nv = row.get(k, 0) - f * x
                    if nv:
                        row[k] = nv
                    else:
                        row.pop(k, None)
            done[p] = row
        return [done[p] for p in piv]

    def same_space(self, other: "EchelonSpace") -> bool:
        return self.rank == other.rank and all(other.contains(r) for r in self._rows.values())


class TrackedElimination:
    """Row reduction that remembers which input combinations produced each row.

    Used to compute kernels of maps given by the images of basis vectors.
    """

    def __init__(self):
        self._rows: dict[int, tuple[dict[int, Fraction], dict[int, Fraction]]] = {}
        self.kernel: list[dict[int, Fraction]] = []

    def add(self, image: SparseVec, label: int):
        v = {k: Fraction(x) for k, x in image.items() if x}
        comb = {label: Fraction(1)}
        while v:
            c = min(v)
            if c not in self._rows:
                break
            rv, rc = self._rows[c]
            f = v[c]
            for k, x in rv.items():
                nv = v.get(k, 0) - f * x
                if nv:
                    v[k] = nv
                else:
                    v.pop(k, None)
            for k, x in rc.items():
                nv = comb.get(k, 0) - f * x
                if nv:
                    comb[k] = nv
                else:
                    comb.pop(k, None)
        if not v:
            self.kernel.append(comb)
            return
        c = min(v)
        f = v[c]
        self._rows[c] = ({k: x / f for k, x in v.items()}, {k: x / f for k, x in comb.items()})


def _as_sparse(vec, dim: int) -> dict:
    if isinstance(vec, Mapping):
        if any(not 0 <= k < dim for k in vec):
            raise ValueError(f"vector index outside ambient dimension {dim}")
        return {k: x for k, x in vec.items() if x}
    if len(vec) != dim:
        raise ValueError(f"vector of length {len(vec)} in ambient dimension {dim}")
    return {k: x for k, x in enumerate(vec) if x}


def span(vectors: Iterable, dim: int | None = None) -> EchelonSpace:
    """Echelon basis of the span of dense or sparse vectors in Q^dim."""
    vectors = list(vectors)
    if dim is None:
        dense = [v for v in vectors if not isinstance(v, Mapping)]
        if not dense:
            raise ValueError("ambient dimension is needed for sparse or empty input")
        dim = len(dense[0])
    space = EchelonSpace(dim)
    for v in vectors:
        space.insert(_as_sparse(v, dim))
    return space


def quotient_dim(ambient_dim: int, sub) -> int:
    space = getattr(sub, "space", sub)
    if space.dim != ambient_dim:
        raise ValueError(f"subspace lives in dimension {space.dim}, not {ambient_dim}")
    return ambient_dim - space.rank


def membership(vec, sub) -> bool:
    space = getattr(sub, "space", sub)
    return space.contains(_as_sparse(vec, space.dim))


# ---------------------------------------------------------------- dense helpers

Matrix = Sequence[Sequence[int | Fraction]]


def _integer_rows(m: Matrix) -> list[list[int]]:
    out = []
    for row in m:
        den = 1
        for x in row:
            if isinstance(x, Fraction):
                den = lcm(den, x.denominator)
        out.append([int(Fraction(x) * den) for x in row])
    return out


def bareiss_rank(m: Matrix) -> int:
    if not m or not m[0]:
        return 0
    a = _integer_rows(m)
    nrows, ncols = len(a), len(a[0])
    r = 0
    prev = 1
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        for i in range(r + 1, nrows):
            for j in range(c + 1, ncols):
                a[i][j] = (a[i][j] * a[r][c] - a[i][c] * a[r][j]) // prev
            a[i][c] = 0
        prev = a[r][c]
        r += 1
        if r == nrows:
            break
    return r


rank = bareiss_rank


def det(m: Matrix) -> Fraction:
    """Determinant by Bareiss elimination (exact)."""
    n = len(m)
    if n == 0:
        return Fraction(1)
    if any(len(r) != n for r in m):
        raise ValueError("matrix is not square")
    dens = 1
    a = []
    for row in m:
        den = 1
        for x in row:
            if isinstance(x, Fraction):
                den = lcm(den, x.denominator)
        dens *= den
        a.append([int(Fraction(x) * den) for x in row])
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k]), None)
            if swap is None:
                return Fraction(0)
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return Fraction(sign * a[n - 1][n - 1], dens)


def rref(m: Matrix) -> tuple[list[list[Fraction]], list[int]]:
    a = [[Fraction(x) for x in row] for row in m]
    if not a:
        return [], []
    nrows, ncols = len(a), len(a[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        f = a[r][c]
        a[r] = [x / f for x in a[r]]
        for i in range(nrows):
            if i != r and a[i][c]:
                g = a[i][c]
                a[i] = [x - g * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return a[:r], pivots


def nullspace(m: Matrix, ncols: int | None = None) -> list[list[Fraction]]:
    """Basis of {v : m v = 0}; one vector per free column, with a 1 in that column."""
    if ncols is None:
        ncols = len(m[0]) if m else 0
    if not m:
        return [[Fraction(int(i == j)) for i in range(ncols)] for j in range(ncols)]
    red, piv = rref(m)
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, p in zip(red, piv):
            v[p] = -row[f]
        basis.append(v)
    return basis


def solve(m: Matrix, b: Sequence[int | Fraction]) -> list[Fraction] | None:
    """One solution of m x = b, or None when inconsistent."""
    ncols = len(m[0]) if m else 0
    aug = [list(row) + [bv] for row, bv in zip(m, b)]
    red, piv = rref(aug)
    if ncols in piv:
        return None
    x = [Fraction(0)] * ncols
    for row, p in zip(red, piv):
        x[p] = row[ncols]
    return x


def matmul(a: Matrix, b: Matrix) -> list[list[Fraction]]:
    return [[sum((Fraction(a[i][k]) * b[k][j] for k in range(len(b))), Fraction(0)) for j in range(len(b[0]))]
            for i in range(len(a))]


def transpose(a: Matrix) -> list[list]:
    return [list(r) for r in zip(*a)]


def inverse(a: Matrix) -> list[list[Fraction]]:
    n = len(a)
    aug = [list(map(Fraction, row)) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(a)]
    red, piv = rref(aug)
    if piv[:n] != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return [row[n:] for row in red]


__all__ = [
    "EchelonSpace",
    "TrackedElimination",
    "span",
    "quotient_dim",
    "membership",
    "bareiss_rank",
    "rank",
    "det",
    "rref",
    "nullspace",
    "solve",
    "matmul",
    "transpose",
    "inverse",
]
