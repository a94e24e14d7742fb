"""Volume-preserving refinement of congruence equivalence.

Covers congruence witnesses with their orientation sign, the divergence
module {div V : V in LD_A}, a heuristic search for orientation-reversing
elements of the isotropy group, and a small deduction engine that proves
det dPhi(0) > 0 from low-order coefficient identities of A o Phi = X^T A X.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Sequence

from .linalg import EchelonSpace, det as rdet
from .polyring import (
    Polynomial,
    PolyMatrix,
    SymMatrixGerm,
    determinant,
    monomials_up_to,
)
from .quasihom import LdaJets
from .tangent import JetCoords, JetSubspace


class WitnessError(ValueError):
    pass


@dataclass
class CongruenceWitness:
    """Phi and X with B = X^T (A o Phi) X."""

    phi: tuple[Polynomial, ...]
    x_matrix: PolyMatrix
    order: int | None = None

    def __post_init__(self):
        self.phi = tuple(self.phi)
        if any(p.constant_term() != 0 for p in self.phi):
            raise WitnessError("Phi(0) must be 0")
        if self.jacobian_det() == 0:
            raise WitnessError("dPhi(0) is singular")
        if rdet([[e.constant_term() for e in row] for row in self.x_matrix]) == 0:
            raise WitnessError("X(0) is singular")

    @classmethod
    def from_strings(cls, phi: Sequence[str], x: Sequence[Sequence[str | int]], r: int = 2) -> "CongruenceWitness":
        from .polyring import parse_polynomial

        return cls(
            tuple(parse_polynomial(p, r) for p in phi),
            [[parse_polynomial(str(e), r) for e in row] for row in x],
        )

    @classmethod
    def identity(cls, n: int, r: int) -> "CongruenceWitness":
        return cls(
            tuple(Polynomial.var(i, r) for i in range(r)),
            [[Polynomial.constant(int(i == j), r) for j in range(n)] for i in range(n)],
        )

    def linear_part(self) -> list[list[Fraction]]:
        return [p.linear_coefficients() for p in self.phi]

    def jacobian_det(self) -> Fraction:
        return rdet(self.linear_part())

    @property
    def orientation_sign(self) -> int:
        return 1 if self.jacobian_det() > 0 else -1

    def apply(self, a: SymMatrixGerm, d: int | None = None) -> SymMatrixGerm:
        composed = a.compose(self.phi, trunc=d)
        return composed.congruence(self.x_matrix, trunc=d)

    def as_dict(self):
        return {
            "phi": [str(p) for p in self.phi],
            "X": [[str(e) for e in row] for row in self.x_matrix],
            "orientation_sign": self.orientation_sign,
        }


@dataclass
class WitnessCheck:
    holds: bool
    orientation_sign: int

    def as_dict(self):
        return {"holds": self.holds, "orientation_sign": self.orientation_sign}


def verify_congruence_witness(a: SymMatrixGerm, b: SymMatrixGerm, w: CongruenceWitness, d: int) -> WitnessCheck:
    """Does B - X^T (A o Phi) X vanish up to degree d?"""
    image = w.apply(a, d)
    holds = all(
        (b.entry(i, j) - image.entry(i, j)).truncate(d).is_zero() for i in range(a.n) for j in range(i, a.n)
    )
    return WitnessCheck(holds, w.orientation_sign)


@dataclass(frozen=True)
class VolumeJet:
    """density * dx1 ^ ... ^ dxr."""

    density: Polynomial

    def __post_init__(self):
        if self.density.constant_term() == 0:
            raise ValueError("volume density must not vanish at 0")

    @property
    def orientation(self) -> int:
        return 1 if self.density.constant_term() > 0 else -1

    def pullback(self, phi: Sequence[Polynomial], d: int) -> Polynomial:
        jac = [[p.diff(j) for j in range(len(phi))] for p in phi]
        return determinant(jac).mul_truncated(self.density.compose(list(phi), truncate=d), d)

    def preserved_by(self, phi: Sequence[Polynomial], d: int) -> bool:
        return (self.pullback(phi, d) - self.density).truncate(d).is_zero()


# ---------------------------------------------------------------- divergence module

class InsufficientTruncation(RuntimeError):
    pass


def _divergence_space(a: SymMatrixGerm, d: int, lda_degree: int) -> EchelonSpace:
    coords = JetCoords(a.r, 1, 0, d)
    lda = LdaJets(a, lda_degree)
    space = EchelonSpace(coords.dim)
    for v in lda.v_part_basis(d + 1):
        for m in monomials_up_to(a.r, d):
            mono = Polynomial({m: 1}, a.r)
            div = v.scaled_by(mono).divergence().truncate(d)
            vec = coords.vector([div])
            if vec:
                space.insert(vec)
    return space


def divergence_module(a: SymMatrixGerm, d: int, slack: int = 2, max_slack: int = 8) -> JetSubspace:
    """Jets of degree <= d of {div V : V in LD_A}.

    The V-parts come from LD_A computed at a higher truncation; the result is
    accepted once two consecutive truncations agree.
    """
    coords = JetCoords(a.r, 1, 0, d)
    prev = None
    for s in range(slack, max_slack + 1):
        space = _divergence_space(a, d, d + 1 + s)
        if prev is not None and prev.same_space(space):
            return JetSubspace(coords, space)
        prev = space
    raise InsufficientTruncation(f"divergence module at degree {d} did not settle up to slack {max_slack}")


def moduli_quotient_dim(a: SymMatrixGerm, d: int) -> int:
    return divergence_module(a, d).codim


# ---------------------------------------------------------------- generic coefficient identities

@dataclass
class GenericIsotropy:
    """Coefficients of C = A o Phi - X^T A X for generic jets of Phi and X.

    The polynomial ring has the r coordinates first, then the unknown
    coefficients.  Every identity of x-degree <= ``order`` is exact when Phi is
    generic up to degree ``order`` and X up to degree ``order - 1``.
    """

    a: SymMatrixGerm
    order: int
    names: list[str] = field(default_factory=list)
    identities: dict[tuple, Polynomial] = field(default_factory=dict)
    jac_det: Polynomial | None = None
    x0_det: Polynomial | None = None

    @classmethod
    def build(cls, a: SymMatrixGerm, order: int = 3) -> "GenericIsotropy":
        r, n = a.r, a.n
        phi_monos = monomials_up_to(r, order, 1)
        x_monos = monomials_up_to(r, order - 1, 0)
        names = []
        for i in range(r):
            names += [f"phi{i + 1}_{''.join(map(str, m))}" for m in phi_monos]
        for p in range(n):
            for q in range(n):
                names += [f"X{p + 1}{q + 1}_{''.join(map(str, m))}" for m in x_monos]
        nv = r + len(names)
        xs = list(range(r))

        def unknown(k):
            return Polynomial.var(r + k, nv)

        def xmono(m):
            return Polynomial({tuple(m) + (0,) * len(names): 1}, nv)

        k = 0
        phi = []
        for i in range(r):
            acc = Polynomial.zero(nv)
            for m in phi_monos:
                acc = acc + unknown(k) * xmono(m)
                k += 1
            phi.append(acc)
        x = [[None] * n for _ in range(n)]
        for p in range(n):
            for q in range(n):
                acc = Polynomial.zero(nv)
                for m in x_monos:
                    acc = acc + unknown(k) * xmono(m)
                    k += 1
                x[p][q] = acc
        a_ext = [[a.entry(i, j).extend(nv) for j in range(n)] for i in range(n)]

        def compose_trunc(p: Polynomial) -> Polynomial:
            out = Polynomial.zero(nv)
            for m, c in p.items():
                t = Polynomial.constant(c, nv)
                for i, e in enumerate(m[:r]):
                    for _ in range(e):
                        t = t.mul_truncated(phi[i], order, xs)
                out = out + t
            return out

        composed = [[compose_trunc(a.entry(i, j).extend(nv)) for j in range(n)] for i in range(n)]
        xt_a = [[sum((x[p][i].mul_truncated(a_ext[p][j], order, xs) for p in range(n)), Polynomial.zero(nv))
                 for j in range(n)] for i in range(n)]
        xtax = [[sum((xt_a[i][q].mul_truncated(x[q][j], order, xs) for q in range(n)), Polynomial.zero(nv))
                 for j in range(n)] for i in range(n)]
        ids = {}
        for i in range(n):
            for j in range(i, n):
                diff = composed[i][j] - xtax[i][j]
                for xm, coeff in diff.coefficients_in(xs).items():
                    if sum(xm) <= order and coeff:
                        ids[(i, j, xm)] = coeff
        nu = len(names)

        def lin_coeff(i, j):
            m = tuple(int(t == j) for t in range(r))
            return Polynomial.var(i * len(phi_monos) + phi_monos.index(m), nu)

        jac = determinant([[lin_coeff(i, j) for j in range(r)] for i in range(r)])
        xbase = r * len(phi_monos)
        x0 = determinant([[Polynomial.var(xbase + (p * n + q) * len(x_monos) + x_monos.index((0,) * r), nu)
                           for q in range(n)] for p in range(n)])
        return cls(a, order, names, ids, jac, x0)


def _kill(p: Polynomial, v: int) -> Polynomial:
    return Polynomial._raw({m: c for m, c in p.items() if m[v] == 0}, p.nvars)


def _is_even(m) -> bool:
    return all(e % 2 == 0 for e in m)


@dataclass
class DeductionReport:
    proved: bool
    branches: int
    zeroed: list[list[str]]
    facts: list[str]

    def as_dict(self):
        return {"proved": self.proved, "branches": self.branches, "zero_sets": self.zeroed, "sign_facts": self.facts}


class _Deducer:
    def __init__(self, names: list[str], max_depth: int = 14):
        self.names = names
        self.max_depth = max_depth
        self.branches = 0
        self.zero_sets: list[list[str]] = []
        self.facts: list[str] = []
        self._memo: dict = {}

    def _sign_of(self, m, var_sign: dict[int, int], mono_sign: dict) -> int:
        if m in mono_sign:
            return mono_sign[m]
        s = 1
        for v, e in enumerate(m):
            if e % 2:
                if v not in var_sign:
                    return 0
                s *= var_sign[v]
        return s

    def _signs(self, eqs):
        # a*m + (terms of the opposite sign, all even) = 0 gives m >= 0
        var_sign: dict[int, int] = {}
        mono_sign: dict = {}
        for e in eqs:
            items = list(e.items())
            for idx, (m, c) in enumerate(items):
                rest = items[:idx] + items[idx + 1:]
                if rest and all(_is_even(mm) and (cc > 0) != (c > 0) for mm, cc in rest):
                    mono_sign[m] = 1
                    support = [v for v, x in enumerate(m) if x]
                    if len(support) == 1 and m[support[0]] % 2:
                        var_sign[support[0]] = 1
        return var_sign, mono_sign

    def run(self, eqs: list[Polynomial], target: Polynomial, nondeg: list[Polynomial], zeros: list[int], depth=0) -> bool:
        key = frozenset(zeros)
        if key in self._memo:
            return self._memo[key]
        self.branches += 1
        result = self._run(eqs, target, nondeg, zeros, depth)
        self._memo[key] = result
        return result

    def _run(self, eqs, target, nondeg, zeros, depth) -> bool:
        if any(p.is_zero() for p in nondeg) or target.is_zero():
            return True  # contradicts invertibility
        eqs = [e for e in eqs if not e.is_zero()]
        if any(e.degree() == 0 for e in eqs):
            return True
        var_sign, mono_sign = self._signs(eqs)
        if all(c * self._sign_of(m, var_sign, mono_sign) > 0 for m, c in target.items()):
            self.zero_sets.append([self.names[v] for v in zeros])
            for m in mono_sign:
                if any(m[v] for v in target.variables()):
                    desc = "*".join(f"{self.names[v]}^{x}" if x > 1 else self.names[v] for v, x in enumerate(m) if x)
                    if desc + " >= 0" not in self.facts:
                        self.facts.append(desc + " >= 0")
            return True
        if depth >= self.max_depth:
            return False
        candidates = []
        for e in eqs:
            if len(e) == 1:
                candidates.append(next(iter(e.terms)))
            elif len({c > 0 for c in e.terms.values()}) == 1 and all(_is_even(m) for m in e.terms):
                candidates.append(next(iter(e.terms)))
        if not candidates:
            return False
        split = min(candidates, key=lambda m: sum(1 for x in m if x))
        for v in [v for v, x in enumerate(split) if x]:
            if not self.run([_kill(e, v) for e in eqs], _kill(target, v), [_kill(p, v) for p in nondeg],
                            zeros + [v], depth + 1):
                return False
        return True


def orientation_forced(a: SymMatrixGerm, order: int = 3) -> DeductionReport:
    """Try to prove det dPhi(0) > 0 for every Phi in the isotropy group of ``a``.

    Uses the identities of x-degree <= order; True means proved, False means the
    simple rules (monomial splits, sums of squares, sign propagation) did not
    suffice, which is not a disproof.
    """
    g = GenericIsotropy.build(a, order)
    eqs = list(g.identities.values())
    ded = _Deducer(g.names)
    proved = ded.run(eqs, g.jac_det, [g.jac_det, g.x0_det], [])
    return DeductionReport(proved, ded.branches, ded.zero_sets, ded.facts)


# ---------------------------------------------------------------- search

@dataclass
class SearchResult:
    found: bool
    witness: CongruenceWitness | None
    stage: str
    tried: int

    def as_dict(self):
        out = {"result": "Found" if self.found else "NotFoundWithinBudget", "stage": self.stage, "tried": self.tried}
        if self.witness:
            out["witness"] = self.witness.as_dict()
        return out


def _linear_phi(mat, r):
    return tuple(sum((Polynomial.var(j, r).scale(mat[i][j]) for j in range(r) if mat[i][j]), Polynomial.zero(r))
                 for i in range(r))


def _candidate_x(n: int):
    if n <= 2:
        for flat in product((0, 1, -1), repeat=n * n):
            m = [list(flat[i * n:(i + 1) * n]) for i in range(n)]
            if rdet(m) != 0:
                yield m
        return
    from itertools import permutations

    for perm in permutations(range(n)):
        for signs in product((1, -1), repeat=n):
            yield [[signs[i] if perm[i] == j else 0 for j in range(n)] for i in range(n)]


def orientation_reversing_search(a: SymMatrixGerm, jet_degree: int = 6, budget: int = 20, seed: int = 0) -> SearchResult:
    """Look for Phi in D_A with det dPhi(0) < 0.  NotFound is not a proof of absence."""
    r, n = a.r, a.n
    target = a.truncate(jet_degree)
    tried = 0
    xs = list(_candidate_x(n))
    for flat in product((0, 1, -1), repeat=r * r):
        lin = [list(flat[i * r:(i + 1) * r]) for i in range(r)]
        if rdet(lin) >= 0:
            continue
        phi = _linear_phi(lin, r)
        composed = a.compose(phi, trunc=jet_degree)
        for xm in xs:
            tried += 1
            x = [[Polynomial.constant(c, r) for c in row] for row in xm]
            img = composed.congruence(x, trunc=jet_degree)
            if img == target:
                w = CongruenceWitness(phi, x, jet_degree)
                if verify_congruence_witness(a, a, w, jet_degree).holds:
                    return SearchResult(True, w, "enumeration", tried)
    found = _numeric_search(a, jet_degree, budget, seed)
    if found is not None:
        return SearchResult(True, found, "least-squares", tried + budget)
    return SearchResult(False, None, "exhausted", tried + budget)


def _numeric_search(a: SymMatrixGerm, jet_degree: int, budget: int, seed: int) -> CongruenceWitness | None:
    """Least squares over linear Phi and constant X, then rational rounding and exact verification."""
    import numpy as np
    from scipy.optimize import least_squares

    r, n = a.r, a.n
    nphi, nx = r * r, n * n
    monos = monomials_up_to(r, jet_degree, 1)
    # evaluate A at sample points and compare X^T A(Phi x) X with A(x) pointwise; the map is polynomial,
    # so enough generic points pin down the jet
    rng = np.random.default_rng(seed)
    pts = rng.normal(scale=0.6, size=(max(3 * len(monos), 24), r))

    entries = [[_as_callable(a.entry(i, j)) for j in range(n)] for i in range(n)]

    def a_num(cols):
        # cols: r arrays of sample coordinates; returns an (N, n, n) stack
        return np.stack([np.stack([np.broadcast_to(entries[i][j](cols), cols[0].shape) for j in range(n)], -1)
                         for i in range(n)], -2)

    base = a_num(tuple(pts.T))

    def residual(z):
        L = z[:nphi].reshape(r, r)
        X = z[nphi:].reshape(n, n)
        moved = a_num(tuple((pts @ L.T).T))
        res = np.einsum("pi,kpq,qj->kij", X, moved, X) - base
        return np.concatenate([res.ravel(), [np.linalg.det(L) + 1.0]])

    pyrng = random.Random(seed)
    for _ in range(budget):
        z0 = np.array([pyrng.uniform(-1.5, 1.5) for _ in range(nphi + nx)])
        sol = least_squares(residual, z0, xtol=1e-12, ftol=1e-12, max_nfev=400)
        if sol.cost > 1e-10:
            continue
        for den in (1, 2, 3, 4, 6, 8, 12):
            vals = [Fraction(float(v)).limit_denominator(den) for v in sol.x]
            lin = [vals[i * r:(i + 1) * r] for i in range(r)]
            if rdet(lin) >= 0:
                continue
            xm = [vals[nphi + i * n: nphi + (i + 1) * n] for i in range(n)]
            if rdet(xm) == 0:
                continue
            w = CongruenceWitness(_linear_phi(lin, r), [[Polynomial.constant(c, r) for c in row] for row in xm], jet_degree)
            if verify_congruence_witness(a, a, w, jet_degree).holds:
                return w
    return None


def _as_callable(p: Polynomial):
    terms = [(float(c), m) for m, c in p.items()]

    def f(x):
        total = 0.0 * x[0]
        for c, m in terms:
            t = c
            for xi, e in zip(x, m):
                if e:
                    t = t * xi ** e
            total = total + t
        return total

    return f


# ---------------------------------------------------------------- splitting table

@dataclass
class SplittingRecord:
    table: str
    class_id: str
    splits: bool
    labels: list[str]
    representatives: dict[str, list] | None

    def as_dict(self):
        return {"table": self.table, "class": self.class_id, "splits": self.splits, "labels": self.labels,
                "representatives": self.representatives}


def unimodular_splitting(class_id: str, table: str = "table2") -> SplittingRecord:
    """Whether a real class splits into two classes under volume-preserving equivalence."""
    from . import catalog

    row = catalog.find_row(table, str(class_id))
    split = row["uni"]["split"]
    if split is None:
        return SplittingRecord(table, row["id"], False, [row["id"]], None)
    sign = split["sign"]
    reps = {}
    for s, tag in ((1, "+"), (-1, "-")):
        reps[row["id"] + tag] = [[None if e is None else e.replace("{" + sign + "}", str(s)) for e in r]
                                 for r in split["entries"]]
    return SplittingRecord(table, row["id"], True, list(reps), reps)


__all__ = [
    "CongruenceWitness",
    "WitnessCheck",
    "WitnessError",
    "VolumeJet",
    "InsufficientTruncation",
    "GenericIsotropy",
    "DeductionReport",
    "SearchResult",
    "verify_congruence_witness",
    "divergence_module",
    "moduli_quotient_dim",
    "orientation_forced",
    "orientation_reversing_search",
    "SplittingRecord",
    "unimodular_splitting",
]
