"""Matching a germ against the built-in normal-form tables by invariants.

No equivalence is searched for.  A germ is reduced to a fingerprint of
quantities that do not change under the group action, and the fingerprint is
compared with those of the catalog rows of the same codimension:

complex part
    codimension, per-degree jet quotients of the extended and of the
    ordinary tangent space, orbit dimensions of the 1-, 2- and 3-jets,
    the linear pencil type, the Milnor number of det, the colength of the
    ideal of (n-1)-minors, and the shape of the residue algebra of
    endomorphisms of coker A (its dimension and trace-form rank)
real part
    number of connected components of each open signature region on a
    sampling disk

Only the 1-jet normalization is performed explicitly; its witness is
returned with the report.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .linalg import EchelonSpace, bareiss_rank, nullspace
from .polyring import Polynomial, SymMatrixGerm, monomials_up_to
from .tangent import JetCoords, g_codimension, ge_codimension, orbit_tangent_dim_jet

TABLE_FOR_SIZE = {2: "table2", 3: "n2m3"}


# ---------------------------------------------------------------- endomorphisms of the cokernel

def _matrix(a: SymMatrixGerm) -> list[list[Polynomial]]:
    return [[a.entry(i, j) for j in range(a.n)] for i in range(a.n)]


def _flat_product(x: list[list[Polynomial]], y: list[list[Polynomial]], r: int) -> list[Polynomial]:
    n = len(x)
    zero = Polynomial.zero(r)
    return [sum((x[i][k] * y[k][j] for k in range(n)), zero) for i in range(n) for j in range(n)]


def residue_endomorphisms(a: SymMatrixGerm, d: int) -> list[list[list[Fraction]]]:
    """Constant terms P(0) of solutions of P A = A Q modulo m^(d+1).

    These contain the image of End(coker A) in End(coker A / m coker A) and
    shrink to it as d grows.
    """
    n, r = a.n, a.r
    am = _matrix(a)
    coords = JetCoords(r, n * n, 0, d)
    one, zero = Polynomial.constant(1, r), Polynomial.zero(r)

    def unit(i, j):
        return [[one if (p, q) == (i, j) else zero for q in range(n)] for p in range(n)]

    rest = EchelonSpace(coords.dim)
    heads = []
    for i in range(n):
        for j in range(n):
            e = unit(i, j)
            pa, aq = _flat_product(e, am, r), _flat_product(am, e, r)
            for m in monomials_up_to(r, d):
                if sum(m):
                    rest.insert(coords.vector(pa, shift=m))
                rest.insert(coords.vector(aq, shift=m))
            heads.append(coords.vector(pa))
    reduced = [rest.reduce(h) for h in heads]
    cols = sorted({c for v in reduced for c in v})
    rows = [[v.get(c, 0) for v in reduced] for c in cols]
    basis = nullspace(rows, n * n) if rows else [[Fraction(int(k == t)) for k in range(n * n)] for t in range(n * n)]
    return [[b[i * n:(i + 1) * n] for i in range(n)] for b in basis]


def endomorphism_shape(a: SymMatrixGerm, dmax: int = 8) -> tuple[int, int, int]:
    """(dimension, trace-form rank, degree) of the residue endomorphism algebra.

    The trace form of a matrix algebra in characteristic 0 has the Jacobson
    radical as its kernel, so the rank is the dimension of the semisimple
    part.  The truncation degree is raised until the dimension is unchanged
    over three consecutive degrees.
    """
    dims = []
    for d in range(1, dmax + 1):
        basis = residue_endomorphisms(a, d)
        dims.append(len(basis))
        if len(dims) >= 3 and dims[-1] == dims[-2] == dims[-3]:
            break
    n = a.n
    gram = [[sum(x[i][k] * y[k][i] for i in range(n) for k in range(n)) for y in basis] for x in basis]
    return len(basis), bareiss_rank(gram) if basis else 0, d


# ---------------------------------------------------------------- fingerprints

@dataclass(frozen=True)
class Fingerprint:
    codim: int | None
    ge_history: tuple[int, ...]
    g_history: tuple[int, ...]
    orbit_dims: tuple[int, ...]
    one_jet: str
    milnor: int | None
    minors_colength: int | None
    endomorphisms: tuple[int, int]

    def as_dict(self):
        return {
            "codim": self.codim,
            "ge_history": list(self.ge_history),
            "g_history": list(self.g_history),
            "jet_orbit_dims": list(self.orbit_dims),
            "one_jet": self.one_jet,
            "milnor_det": self.milnor,
            "minors_colength": self.minors_colength,
            "endomorphism_algebra": {"dim": self.endomorphisms[0], "semisimple_dim": self.endomorphisms[1]},
        }


def _one_jet_key(a: SymMatrixGerm) -> tuple[str, object]:
    from .pencil import classify_one_jet, one_jet_invariants_n3

    c, d = a.linear_coefficients()
    if a.n == 2:
        cls = classify_one_jet(c, d)
        # 5+ and 5- differ only over the reals
        return cls.class_id.rstrip("+-"), cls
    inv = one_jet_invariants_n3(c, d)
    key = f"rank{inv.rank_dA0}/cols{inv.joint_column_rank}/{inv.cubic_class.value}/{inv.quadratic_class.value}"
    return key, inv


def fingerprint(a: SymMatrixGerm, dmax: int = 12) -> Fingerprint:
    from .detinv import ideal_colength, koszul_generators, milnor_number

    ge = ge_codimension(a, dmax)
    g = g_codimension(a, dmax)
    orbit = tuple(orbit_tangent_dim_jet(a.truncate(k), k, "full") for k in (1, 2, 3))
    mu = milnor_number(a.det(), 2 * dmax)
    b0 = ideal_colength(koszul_generators(a), a.r, 2 * dmax)
    dim_s, rank_s, _ = endomorphism_shape(a)
    return Fingerprint(ge.value, tuple(ge.history), tuple(g.history), orbit, _one_jet_key(a)[0],
                       mu.dimension, b0.dimension, (dim_s, rank_s))


@dataclass(frozen=True)
class RealFingerprint:
    components: tuple[tuple[tuple[int, int, int], int], ...]
    sectors: tuple[tuple[tuple[int, int, int], int], ...]

    def as_dict(self):
        return {"components": [{"signature": list(t), "count": k} for t, k in self.components],
                "ray_sectors": [{"signature": list(t), "count": k} for t, k in self.sectors]}


def _open_components(a: SymMatrixGerm, grid) -> tuple:
    from scipy import ndimage

    from .realsig import signature_field

    f = signature_field(a, grid)
    comps = []
    for t in sorted(f.counts()):
        if t[1] == 0:
            _, k = ndimage.label(f.target_mask(t))
            comps.append((t, int(k)))
    return tuple(comps)


def real_fingerprint(a: SymMatrixGerm, grid=None) -> RealFingerprint:
    """Component counts of the open signature regions and their sectors of rays.

    Without an explicit grid the disk shrinks (radius 1, 1/4, 1/16, step
    radius/100) until two successive radii give the same counts, so that
    higher-order terms of a non-normalized germ do not distort the picture.
    """
    from .realsig import GridSpec, ray_sectors

    if grid is not None:
        comps = _open_components(a, grid)
    else:
        radius = Fraction(1)
        comps = _open_components(a, GridSpec(radius, radius / 100))
        for _ in range(2):
            radius /= 4
            smaller = _open_components(a, GridSpec(radius, radius / 100))
            if smaller == comps:
                break
            comps = smaller
    return RealFingerprint(comps, tuple(sorted(ray_sectors(a).items())))


@lru_cache(maxsize=None)
def _catalog_prints(table: str, codim: int, max_param: int, dmax: int):
    from . import catalog

    out = []
    for e in catalog.instances(table, max_param=max_param):
        if e.column("codim") != codim:
            continue
        out.append((e, fingerprint(e.germ, dmax), _LazyReal(e.germ)))
    return out


class _LazyReal:
    """Real fingerprint of a catalog germ, computed on first comparison."""

    def __init__(self, germ: SymMatrixGerm):
        self.germ, self._value = germ, None

    def __eq__(self, other):
        if self._value is None:
            self._value = real_fingerprint(self.germ)
        return self._value == other

    __hash__ = None


# ---------------------------------------------------------------- classification

@dataclass
class ClassificationReport:
    status: str  # matched | ambiguous | unresolved
    table: str | None
    class_ids: list[str]
    variants: list[str]
    normal_forms: list[str]
    fingerprint: Fingerprint | None
    real: RealFingerprint | None = None
    one_jet_witness: dict | None = None
    reason: str = ""

    @property
    def class_id(self) -> str | None:
        return self.class_ids[0] if self.status == "matched" else None

    def as_dict(self):
        return {
            "status": self.status,
            "table": self.table,
            "class": self.class_id,
            "candidates": self.class_ids,
            "variants": self.variants,
            "normal_forms": self.normal_forms,
            "invariants": self.fingerprint.as_dict() if self.fingerprint else None,
            "real_invariants": self.real.as_dict() if self.real else None,
            "one_jet_witness": self.one_jet_witness,
            "reason": self.reason,
        }


def _witness_dict(a: SymMatrixGerm):
    if a.n != 2:
        return None
    cls = _one_jet_key(a)[1]
    if cls.witness is None:
        return None
    return {"one_jet_class": cls.class_id, "P": [[str(v) for v in cls.witness.P.row(i)] for i in range(2)],
            "X": [[str(v) for v in cls.witness.X.row(i)] for i in range(2)]}


def classify_germ(a: SymMatrixGerm, max_codim: int = 8, dmax: int = 12, real: bool = True) -> ClassificationReport:
    """Identify the table class of ``a`` (r = 2, n = 2 or 3) from its invariants.

    Parameters of catalog families are enumerated up to the largest value
    whose codimension is at most ``max_codim``.  With ``real=False`` only the
    complex invariants are compared, so sign variants merge.
    """
    if a.r != 2 or a.n not in TABLE_FOR_SIZE:
        raise ValueError("classification covers r = 2 and n in {2, 3}")
    table = TABLE_FOR_SIZE[a.n]
    fp = fingerprint(a, dmax)

    def unresolved(reason):
        return ClassificationReport("unresolved", table, [], [], [], fp, None, _witness_dict(a), reason)

    if fp.codim is None:
        return unresolved(f"codimension not stabilized by degree {dmax} (history {list(fp.ge_history)})")
    if fp.codim > max_codim:
        return unresolved(f"codimension {fp.codim} exceeds {max_codim}")
    if a.n == 2 and fp.one_jet == "1":
        return unresolved("1-jet has corank 2; the table covers corank at most 1")
    pool = _catalog_prints(table, fp.codim, max_codim + 1, dmax)
    complex_hits = [(e, rf) for e, efp, rf in pool if efp == fp]
    real_fp = real_fingerprint(a) if real else None
    hits = [e for e, rf in complex_hits if real_fp is None or rf == real_fp]
    if not hits:
        if complex_hits:
            reason = "complex invariants match " + ", ".join(e.label for e, _ in complex_hits) + \
                     " but no real signature pattern does"
        else:
            reason = "no table entry of this codimension has the same invariants"
        return ClassificationReport("unresolved", table, [], [], [], fp, real_fp, _witness_dict(a), reason)
    ids = sorted({e.row_id for e in hits}, key=lambda s: (len(s), s))
    status = "matched" if len(ids) == 1 else "ambiguous"
    return ClassificationReport(status, table, ids, [e.label for e in hits],
                                [str(e.germ) for e in hits],
                                fp, real_fp, _witness_dict(a))


__all__ = [
    "ClassificationReport",
    "Fingerprint",
    "classify_germ",
    "endomorphism_shape",
    "fingerprint",
    "RealFingerprint",
    "real_fingerprint",
    "residue_endomorphisms",
]
