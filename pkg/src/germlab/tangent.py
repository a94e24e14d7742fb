"""Tangent spaces to congruence orbits and the invariants derived from them.

The group acts on symmetric-matrix germs by A -> X^T (A o phi) X.  Its
infinitesimal action at A is (V, U) -> dA(V) + U^T A + A U, and every
tangent space used here is a submodule of Sym_n[[x]] spanned by
(monomial) * (generator).  Jets are encoded as sparse coordinate vectors
by :class:`JetCoords`, ordered low degree first so that intersections with
the top homogeneous block are read directly off the echelon pivots.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .linalg import EchelonSpace, nullspace
from .polyring import (
    Monomial,
    Polynomial,
    SymMatrixGerm,
    monomials_of_degree,
    monomials_up_to,
)


class JetCoords:
    """Coordinates on jets of Sym_n-valued (or scalar, n_entries=1) maps.

    Columns run over (degree, monomial, entry) for degrees lo..hi, lowest
    degree first.
    """

    def __init__(self, r: int, n_entries: int, lo: int, hi: int):
        self.r, self.n_entries, self.lo, self.hi = r, n_entries, lo, hi
        self.monos: list[Monomial] = monomials_up_to(r, hi, lo)
        self._mono_index = {m: i for i, m in enumerate(self.monos)}
        self.dim = len(self.monos) * n_entries
        self._deg_start = {}
        for i, m in enumerate(self.monos):
            self._deg_start.setdefault(sum(m), i * n_entries)

    def index(self, entry: int, mono: Monomial) -> int:
        return self._mono_index[mono] * self.n_entries + entry

    def block_start(self, degree: int) -> int:
        return self._deg_start[degree]

    def unpack(self, col: int) -> tuple[int, Monomial]:
        return col % self.n_entries, self.monos[col // self.n_entries]

    def vector(self, entries: Sequence[Polynomial], shift: Monomial | None = None, coeff=1) -> dict[int, Fraction]:
        """Coordinates of shift * (entries), truncated to degrees lo..hi."""
        out: dict[int, Fraction] = {}
        for e, p in enumerate(entries):
            for m, c in p.items():
                if shift is not None:
                    m = tuple(a + b for a, b in zip(m, shift))
                d = sum(m)
                if self.lo <= d <= self.hi:
                    out[self.index(e, m)] = c * coeff
        return out

    def unit_entries(self, col: int) -> list[Polynomial]:
        e, m = self.unpack(col)
        return [Polynomial({m: 1}, self.r) if i == e else Polynomial.zero(self.r) for i in range(self.n_entries)]


def sym_entries(a: SymMatrixGerm) -> list[Polynomial]:
    return a.upper_entries()


def _sym_from_upper(n: int, entries: Sequence[Polynomial]) -> SymMatrixGerm:
    rows: list[list] = [[None] * n for _ in range(n)]
    k = 0
    for i in range(n):
        for j in range(i, n):
            rows[i][j] = entries[k]
            rows[j][i] = entries[k]
            k += 1
    return SymMatrixGerm(rows, check=False)


def congruence_generator(a: SymMatrixGerm, p: int, q: int) -> list[Polynomial]:
    """Upper entries of U^T A + A U for U = E_pq."""
    n = a.n
    z = Polynomial.zero(a.r)
    out = []
    for i in range(n):
        for j in range(i, n):
            # (E_qp A)_ij = [i==q] A_pj ; (A E_pq)_ij = A_ip [j==q]
            v = z
            if i == q:
                v = v + a.entry(p, j)
            if j == q:
                v = v + a.entry(i, p)
            out.append(v)
    return out


def linear_field_image(a: SymMatrixGerm, L: Sequence[Sequence[Fraction]]) -> list[Polynomial]:
    """Upper entries of dA(L x)."""
    r = a.r
    comps = [sum((Polynomial.var(j, r).scale(L[i][j]) for j in range(r) if L[i][j]), Polynomial.zero(r))
             for i in range(r)]
    out = [Polynomial.zero(r)] * len(sym_entries(a))
    for k, v in enumerate(comps):
        if v:
            dk = sym_entries(a.diff(k))
            out = [o + d * v for o, d in zip(out, dk)]
    return out


@dataclass
class Generators:
    """Module generators with the minimal degree of monomial multiplier each may carry."""

    items: list[tuple[list[Polynomial], int]] = field(default_factory=list)

    def add(self, entries: list[Polynomial], min_mult: int):
        if any(e for e in entries):
            self.items.append((entries, min_mult))


def tangent_generators(
    a: SymMatrixGerm,
    group: str = "Ge",
    constant_u: Sequence[Sequence[Sequence[Fraction]]] | None = None,
) -> Generators:
    """Generators of the tangent space of the orbit of ``a``.

    group:
      ``Ge``   - V arbitrary, U arbitrary
      ``G``    - V(0) = 0, U arbitrary
      ``unip`` - V in m^2, U in m (unipotent subgroup of the jet group)
    ``constant_u`` replaces the constant U block by the span of the given
    matrices (only meaningful for ``G``).
    """
    vmin = {"Ge": 0, "G": 1, "unip": 2}[group]
    umin = {"Ge": 0, "G": 0, "unip": 1}[group]
    gens = Generators()
    for k in range(a.r):
        gens.add(sym_entries(a.diff(k)), vmin)
    n = a.n
    if constant_u is not None and umin == 0:
        for U in constant_u:
            acc = [Polynomial.zero(a.r)] * (n * (n + 1) // 2)
            for p in range(n):
                for q in range(n):
                    if U[p][q]:
                        acc = [x + y.scale(U[p][q]) for x, y in zip(acc, congruence_generator(a, p, q))]
            gens.add(acc, 0)
        umin = 1
    for p in range(n):
        for q in range(n):
            gens.add(congruence_generator(a, p, q), umin)
    return gens


def span_jets(coords: JetCoords, gens: Generators) -> EchelonSpace:
    space = EchelonSpace(coords.dim)
    for entries, min_mult in gens.items:
        order = min((e.order() for e in entries if e), default=0)
        for d in range(min_mult, coords.hi - order + 1):
            for m in monomials_of_degree(coords.r, d):
                v = coords.vector(entries, shift=m)
                if v:
                    space.insert(v)
    return space


@dataclass
class JetSubspace:
    """A subspace of jets together with its coordinate system."""

    coords: JetCoords
    space: EchelonSpace

    @property
    def dim(self) -> int:
        return self.space.rank

    @property
    def codim(self) -> int:
        return self.coords.dim - self.space.rank

    def contains(self, a: SymMatrixGerm | Sequence[Polynomial]) -> bool:
        ent = sym_entries(a) if isinstance(a, SymMatrixGerm) else a
        return self.space.contains(self.coords.vector(ent))

    def contains_homogeneous_block(self, degree: int) -> bool:
        start = self.coords.block_start(degree)
        stop = start + len(monomials_of_degree(self.coords.r, degree)) * self.coords.n_entries
        return all(self.space.contains({c: 1}) for c in range(start, stop))


def tangent_space(a: SymMatrixGerm, group: str, d: int, lo: int = 0) -> JetSubspace:
    """Image of the tangent space of ``group`` at ``a`` in jets of degrees lo..d."""
    coords = JetCoords(a.r, a.n * (a.n + 1) // 2, lo, d)
    return JetSubspace(coords, span_jets(coords, tangent_generators(a, group)))


# ---------------------------------------------------------------- codimension

@dataclass
class CodimResult:
    value: int | None
    stabilized: bool
    degree: int
    history: list[int]

    def as_dict(self):
        return {"codim": self.value, "stabilized": self.stabilized, "degree": self.degree, "history": self.history}


class DegreeBoundExceeded(RuntimeError):
    pass


def _codim_sequence(a: SymMatrixGerm, group: str, dmax: int, lo: int = 0) -> CodimResult:
    history = []
    for d in range(1, dmax + 1):
        t = tangent_space(a, group, d, lo)
        history.append(t.codim)
        if len(history) >= 2 and history[-1] == history[-2]:
            # equal quotients at d-1 and d mean m^d Sym lies in T + m^{d+1}; Nakayama then gives m^d Sym in T
            if t.contains_homogeneous_block(d):
                return CodimResult(history[-1], True, d - 1, history)
    return CodimResult(None, False, dmax, history)


def ge_codimension(a: SymMatrixGerm, dmax: int = 12) -> CodimResult:
    """dim Sym_n[[x]] / T Ge.A, certified by stabilization of jet quotients."""
    return _codim_sequence(a, "Ge", dmax)


def g_codimension(a: SymMatrixGerm, dmax: int = 12) -> CodimResult:
    """dim m Sym_n[[x]] / T G.A (only constants-free jets count)."""
    return _codim_sequence(a, "G", dmax, lo=1)


# ---------------------------------------------------------------- jet-level orbit dimensions

def adapted_constant_frame(jet: SymMatrixGerm) -> list[list[list[Fraction]]]:
    """Constant U with U^T C + C U proportional to C for every 1-jet coefficient matrix C."""
    n = jet.n
    cs = [c for c in jet.linear_coefficients() if any(any(row) for row in c)]
    nu = n * n
    ncols = nu + len(cs)
    rows = []
    for k, c in enumerate(cs):
        for i in range(n):
            for j in range(i, n):
                row = [Fraction(0)] * ncols
                # (U^T C + C U)_ij = sum_p U_pi C_pj + C_ip U_pj
                for p in range(n):
                    row[p * n + i] += c[p][j]
                    row[p * n + j] += c[i][p]
                row[nu + k] -= c[i][j]
                rows.append(row)
    basis = nullspace(rows, ncols) if rows else [[Fraction(int(i == j)) for i in range(ncols)] for j in range(ncols)]
    out = []
    seen = EchelonSpace(nu)
    for v in basis:
        u = v[:nu]
        if seen.insert({i: x for i, x in enumerate(u) if x}):
            out.append([u[i * n:(i + 1) * n] for i in range(n)])
    return out


def orbit_tangent_dim_jet(jet: SymMatrixGerm, k: int, frame: str = "adapted") -> int:
    """Dimension of the tangent space to the k-jet orbit at j^k A inside J^k_0.

    frame="adapted" restricts the constant part of U to the congruences that
    preserve the lines of the 1-jet coefficient matrices; frame="full" lets U(0)
    range over gl_n.
    """
    a = jet.truncate(k)
    if frame == "full":
        gens = tangent_generators(a, "G")
    elif frame == "adapted":
        gens = tangent_generators(a, "G", constant_u=adapted_constant_frame(a))
    else:
        raise ValueError(f"unknown frame {frame!r}")
    coords = JetCoords(a.r, a.n * (a.n + 1) // 2, 1, k)
    return span_jets(coords, gens).rank


# ---------------------------------------------------------------- complete transversal

def unipotent_tangent(jet: SymMatrixGerm, k: int, top: int | None = None) -> JetSubspace:
    top = k + 1 if top is None else top
    a = jet.truncate(k)
    coords = JetCoords(a.r, a.n * (a.n + 1) // 2, 1, top)
    return JetSubspace(coords, span_jets(coords, tangent_generators(a, "unip")))


def complete_transversal(jet: SymMatrixGerm, k: int) -> list[SymMatrixGerm]:
    """Homogeneous degree-(k+1) directions spanning a complement of T Unip . j^k A in H^{k+1}."""
    t = unipotent_tangent(jet, k)
    coords = t.coords
    start = coords.block_start(k + 1)
    pivots = set(t.space.pivots)
    out = []
    for col in range(start, coords.dim):
        if col not in pivots:
            out.append(_sym_from_upper(jet.n, coords.unit_entries(col)))
    return out


def determinacy_sufficient(a: SymMatrixGerm, k: int, d_check: int) -> bool:
    """True when H^N lies in the unipotent tangent space of j^k A for all k < N <= d_check."""
    jet = a.truncate(k)
    if jet.is_zero() or d_check <= k:
        return False
    for top in range(k + 1, d_check + 1):
        if not unipotent_tangent(jet, k, top).contains_homogeneous_block(top):
            return False
    return True


# ---------------------------------------------------------------- strata

@dataclass
class Stratum:
    name: str
    expected_dim: int
    equations: list[Polynomial]
    inequations: list[Polynomial]
    samples: list[tuple[Fraction, ...]]


@dataclass
class StratumReport:
    name: str
    expected_dim: int
    dims: list[int]
    tangent_ok: list[bool]
    ok: bool


def _jacobian_kernel(eqs: Sequence[Polynomial], point: Sequence[Fraction], m: int) -> list[list[Fraction]]:
    rows = [[e.diff(i).evaluate(point) for i in range(m)] for e in eqs]
    if not rows:
        return [[Fraction(int(i == j)) for i in range(m)] for j in range(m)]
    return nullspace(rows, m)


def mather_stratum_check(
    family: SymMatrixGerm,
    r: int,
    strata: Sequence[Stratum],
    k: int,
    frame: str = "adapted",
) -> list[StratumReport]:
    """Check orbit dimension constancy and tangency along each stratum.

    ``family`` is a symmetric matrix whose entries are polynomials in
    x1..xr followed by the parameters c1..cm.
    """
    m = family.r - r
    reports = []
    for s in strata:
        dims, tangent_ok = [], []
        for c in s.samples:
            c = tuple(Fraction(v) for v in c)
            if any(e.evaluate(c) != 0 for e in s.equations) or any(e.evaluate(c) == 0 for e in s.inequations):
                raise ValueError(f"sample {c} does not lie on stratum {s.name}")
            jet = family.map(lambda p: p.specialize(r, c))
            jet = SymMatrixGerm(jet.rows(), check=True)
            dims.append(orbit_tangent_dim_jet(jet, k, frame))
            if frame == "adapted":
                gens = tangent_generators(jet.truncate(k), "G", constant_u=adapted_constant_frame(jet))
            else:
                gens = tangent_generators(jet.truncate(k), "G")
            coords = JetCoords(r, jet.n * (jet.n + 1) // 2, 1, k)
            space = span_jets(coords, gens)
            ok = True
            for v in _jacobian_kernel(s.equations, c, m):
                direction = [Polynomial.zero(r)] * len(sym_entries(jet))
                for i, vi in enumerate(v):
                    if vi:
                        dfam = [p.diff(r + i).specialize(r, c).scale(vi) for p in sym_entries(family)]
                        direction = [x + y for x, y in zip(direction, dfam)]
                if not space.contains(coords.vector(direction)):
                    ok = False
            tangent_ok.append(ok)
        reports.append(StratumReport(s.name, s.expected_dim, dims, tangent_ok,
                                     all(d == s.expected_dim for d in dims) and all(tangent_ok)))
    return reports


def classify_germ(a: SymMatrixGerm, max_codim: int = 8, dmax: int = 12, real: bool = True):
    """Match ``a`` against the built-in tables; see :mod:`germlab.classify`."""
    from .classify import classify_germ as run

    return run(a, max_codim, dmax, real)


__all__ = [
    "classify_germ",
    "JetCoords",
    "JetSubspace",
    "CodimResult",
    "Stratum",
    "StratumReport",
    "tangent_generators",
    "tangent_space",
    "ge_codimension",
    "g_codimension",
    "adapted_constant_frame",
    "orbit_tangent_dim_jet",
    "unipotent_tangent",
    "complete_transversal",
    "determinacy_sufficient",
    "mather_stratum_check",
    "congruence_generator",
    "linear_field_image",
    "span_jets",
    "sym_entries",
]
