"""Symmetric quasi-homogeneity.

A germ A is symmetrically quasi-homogeneous for weights lambda and
quasi-degrees delta when every monomial x^a of entry (i, j) has weighted
degree <lambda, a> = (delta_i + delta_j) / 2.  Equivalently the Euler field
E = sum lambda_k x_k d/dx_k satisfies dA(E) = U^T A + A U with
U = diag(delta) / 2, i.e. E lies in the Lie algebra LD_A of the isotropy
group of A.  The trace of the linear part of any field in LD_A is an
invariant-theoretic obstruction: if every achievable linear part is
trace-free, no Euler field with positive total weight can exist.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from itertools import product
from math import lcm
from typing import Sequence

from .linalg import EchelonSpace, TrackedElimination, nullspace, rref
from .polyring import Polynomial, SymMatrixGerm, VectorFieldJet, monomials_up_to
from .tangent import JetCoords, congruence_generator, sym_entries


@dataclass(frozen=True)
class WeightSystem:
    lam: tuple[int, ...]
    delta: tuple[int, ...]

    def __post_init__(self):
        if any(x < 0 for x in self.lam) or sum(self.lam) <= 0:
            raise ValueError("weights must be non-negative with positive total weight")

    def as_dict(self):
        return {"lambda": list(self.lam), "delta": list(self.delta)}


# ---------------------------------------------------------------- checking

def _monomial_test(a: SymMatrixGerm, w: WeightSystem) -> bool:
    for i in range(a.n):
        for j in range(i, a.n):
            target = Fraction(w.delta[i] + w.delta[j], 2)
            for m in a.entry(i, j).terms:
                if sum(l * e for l, e in zip(w.lam, m)) != target:
                    return False
    return True


def _euler_test(a: SymMatrixGerm, w: WeightSystem) -> bool:
    r = a.r
    euler = [Polynomial.var(k, r).scale(w.lam[k]) for k in range(r)]
    for i in range(a.n):
        for j in range(i, a.n):
            e = a.entry(i, j)
            lhs = sum((e.diff(k) * euler[k] for k in range(r)), Polynomial.zero(r))
            rhs = e.scale(Fraction(w.delta[i] + w.delta[j], 2))
            if lhs != rhs:
                return False
    return True


def qh_check(a: SymMatrixGerm, w: WeightSystem) -> bool:
    """Weighted-degree check, done monomial-wise and through the Euler field."""
    if len(w.lam) != a.r or len(w.delta) != a.n:
        raise ValueError("weight system has the wrong shape")
    by_monomial = _monomial_test(a, w)
    by_euler = _euler_test(a, w)
    if by_monomial != by_euler:  # pragma: no cover - the two are equivalent
        raise AssertionError("monomial and Euler-field checks disagree")
    return by_monomial


# ---------------------------------------------------------------- Fourier-Motzkin

def fourier_motzkin_point(constraints: list[tuple[list[Fraction], Fraction]], nvars: int) -> list[Fraction] | None:
    """A rational point with a.t >= b for every (a, b), or None if the system is infeasible."""
    stages = []
    cur = [(list(map(Fraction, a)), Fraction(b)) for a, b in constraints]
    for k in range(nvars):
        stages.append(cur)
        pos = [c for c in cur if c[0][k] > 0]
        neg = [c for c in cur if c[0][k] < 0]
        nxt = [c for c in cur if c[0][k] == 0]
        for ap, bp in pos:
            for an, bn in neg:
                fp, fn = -an[k], ap[k]
                nxt.append(([fp * x + fn * y for x, y in zip(ap, an)], fp * bp + fn * bn))
        # drop exact duplicates to slow the blow-up
        seen, cur = set(), []
        for a, b in nxt:
            key = (tuple(a), b)
            if key not in seen:
                seen.add(key)
                cur.append((a, b))
    if any(b > 0 for _, b in cur):
        return None
    point = [Fraction(0)] * nvars
    for k in reversed(range(nvars)):
        lo, hi = None, None
        for a, b in stages[k]:
            if a[k] == 0:
                continue
            rest = sum((a[j] * point[j] for j in range(k + 1, nvars)), Fraction(0))
            bound = (b - rest) / a[k]
            if a[k] > 0:
                lo = bound if lo is None else max(lo, bound)
            else:
                hi = bound if hi is None else min(hi, bound)
        if lo is not None:
            point[k] = lo
        elif hi is not None:
            point[k] = hi
    return point


# ---------------------------------------------------------------- weight search

def _weight_equations(a: SymMatrixGerm) -> list[list[Fraction]]:
    r, n = a.r, a.n
    rows = []
    for i in range(n):
        for j in range(i, n):
            for m in a.entry(i, j).terms:
                row = [Fraction(e) for e in m] + [Fraction(0)] * n
                row[r + i] -= Fraction(1, 2)
                row[r + j] -= Fraction(1, 2)
                rows.append(row)
    return rows


def _delta_for(a: SymMatrixGerm, lam: Sequence[int]) -> tuple[int, ...] | None:
    n = a.n
    rows, rhs = [], []
    for i in range(n):
        for j in range(i, n):
            for m in a.entry(i, j).terms:
                row = [Fraction(0)] * n
                row[i] += 1
                row[j] += 1
                rows.append(row)
                rhs.append(2 * sum(l * e for l, e in zip(lam, m)))
    if not rows:
        return (0,) * n
    red, piv = rref([r + [b] for r, b in zip(rows, rhs)])
    if n in piv:
        return None
    free = [c for c in range(n) if c not in piv]
    radius = 2
    for values in sorted(product(range(-radius, radius + 1), repeat=len(free)),
                         key=lambda v: (sum(abs(x) for x in v), [abs(x) for x in v], [-x for x in v])):
        delta = [Fraction(0)] * n
        for f, v in zip(free, values):
            delta[f] = Fraction(v)
        for row, p in zip(red, piv):
            delta[p] = row[n] - sum((row[f] * delta[f] for f in free), Fraction(0))
        if all(d.denominator == 1 for d in delta):
            return tuple(int(d) for d in delta)
    return None


def weight_system_for(a: SymMatrixGerm, lam: Sequence[int]) -> WeightSystem | None:
    """Complete weights ``lam`` with integer quasi-degrees, or None if the entries are not weighted homogeneous."""
    delta = _delta_for(a, lam)
    if delta is None:
        return None
    w = WeightSystem(tuple(lam), delta)
    return w if qh_check(a, w) else None


def qh_find_diagonal(a: SymMatrixGerm) -> WeightSystem | None:
    """Integer weights for which ``a`` is quasi-homogeneous in the given coordinates, or None.

    Strictly positive weights are preferred; otherwise non-negative weights
    with positive total.  Among solutions the smallest total weight wins, then
    the lexicographically smallest weight vector.
    """
    r, n = a.r, a.n
    eqs = _weight_equations(a)
    basis = nullspace(eqs, r + n) if eqs else [[Fraction(int(i == j)) for i in range(r + n)] for j in range(r + n)]
    if not basis:
        return None
    k = len(basis)
    lam_rows = [[basis[t][i] for t in range(k)] for i in range(r)]
    for strict in (True, False):
        cons = [(row, Fraction(1 if strict else 0)) for row in lam_rows]
        if not strict:
            cons.append(([sum(col) for col in zip(*lam_rows)], Fraction(1)))
        pt = fourier_motzkin_point(cons, k)
        if pt is None:
            continue
        vec = [sum((basis[t][i] * pt[t] for t in range(k)), Fraction(0)) for i in range(r + n)]
        scale = 2 * lcm(*(v.denominator for v in vec))
        bound = int(sum(vec[:r]) * scale)
        found = _enumerate_weights(a, r, bound, strict)
        if found is not None:
            return found
    return None


def _enumerate_weights(a: SymMatrixGerm, r: int, bound: int, strict: bool) -> WeightSystem | None:
    low = 1 if strict else 0
    for total in range(max(1, low * r), bound + 1):
        for lam in _compositions(total, r, low):
            delta = _delta_for(a, lam)
            if delta is not None:
                w = WeightSystem(tuple(lam), delta)
                if qh_check(a, w):
                    return w
    return None


def _compositions(total: int, parts: int, low: int):
    """Vectors of ``parts`` integers >= low summing to ``total``, lexicographically increasing."""
    if parts == 1:
        if total >= low:
            yield [total]
        return
    for first in range(low, total - low * (parts - 1) + 1):
        for rest in _compositions(total - first, parts - 1, low):
            yield [first] + rest


# ---------------------------------------------------------------- the Lie algebra LD_A on jets

class LdaJets:
    """Solutions (V, U) of dA(V) = U^T A + A U modulo m^(D+1), with V(0) = 0.

    Unknowns are the coefficients of V (degrees 1..D) and U (degrees 0..D).
    V-parts are read off by eliminating the U-unknowns and any V-unknowns
    outside the requested range.
    """

    def __init__(self, a: SymMatrixGerm, degree: int):
        if degree < 1:
            raise ValueError("degree must be >= 1")
        self.a = a
        self.degree = degree
        self.r, self.n = a.r, a.n
        self.coords = JetCoords(a.r, a.n * (a.n + 1) // 2, 0, degree)
        self._partials = [sym_entries(a.diff(k)) for k in range(a.r)]
        self._u_space: EchelonSpace | None = None
        self._v_monos = monomials_up_to(a.r, degree, 1)

    # images
    def v_image(self, k: int, mono) -> dict[int, Fraction]:
        return self.coords.vector(self._partials[k], shift=mono)

    def field_image(self, v: VectorFieldJet) -> dict[int, Fraction]:
        out: dict[int, Fraction] = {}
        for k, comp in enumerate(v.components):
            for m, c in comp.items():
                for col, x in self.v_image(k, m).items():
                    s = out.get(col, 0) + c * x
                    if s:
                        out[col] = s
                    else:
                        out.pop(col, None)
        return out

    def u_space(self) -> EchelonSpace:
        if self._u_space is None:
            space = EchelonSpace(self.coords.dim)
            order = max(self.a.order(), 0)
            for p in range(self.n):
                for q in range(self.n):
                    g = congruence_generator(self.a, p, q)
                    for m in monomials_up_to(self.r, self.degree - order):
                        v = self.coords.vector(g, shift=m)
                        if v:
                            space.insert(v)
            self._u_space = space
        return self._u_space

    # membership
    def contains(self, v: VectorFieldJet) -> bool:
        """Does some U solve dA(V) = U^T A + A U modulo m^(D+1) for this exact V?"""
        return self.u_space().contains(self.field_image(v))

    def _free_kernel(self, free: list[tuple[int, tuple]], fixed_extra: list[tuple[int, tuple]]) -> list[dict[int, Fraction]]:
        space = self.u_space().copy()
        for k, m in fixed_extra:
            space.insert(self.v_image(k, m))
        elim = TrackedElimination()
        for idx, (k, m) in enumerate(free):
            elim.add(space.reduce(self.v_image(k, m)), idx)
        return elim.kernel

    def v_part_basis(self, k: int) -> list[VectorFieldJet]:
        """Spanning set for the k-jets of V-parts of solutions (1 <= k <= degree)."""
        free = [(i, m) for m in self._v_monos if sum(m) <= k for i in range(self.r)]
        extra = [(i, m) for m in self._v_monos if sum(m) > k for i in range(self.r)]
        out = []
        for comb in self._free_kernel(free, extra):
            comps = [dict() for _ in range(self.r)]
            for idx, c in comb.items():
                i, m = free[idx]
                comps[i][m] = c
            out.append(VectorFieldJet(tuple(Polynomial(c, self.r) for c in comps), k))
        return out

    def contains_jet(self, v: VectorFieldJet, k: int | None = None) -> bool:
        """Is j^k V the k-jet of the V-part of some solution?"""
        k = v.order if k is None else k
        extra = [(i, m) for m in self._v_monos if sum(m) > k for i in range(self.r)]
        space = self.u_space().copy()
        for i, m in extra:
            space.insert(self.v_image(i, m))
        truncated = VectorFieldJet(tuple(c.truncate(k) for c in v.components), k)
        return space.contains(self.field_image(truncated))

    def linear_parts(self) -> list[list[list[Fraction]]]:
        """Basis of achievable linear parts L (V = L x + higher order)."""
        free = [(i, tuple(int(t == j) for t in range(self.r))) for i in range(self.r) for j in range(self.r)]
        extra = [(i, m) for m in self._v_monos if sum(m) > 1 for i in range(self.r)]
        out = []
        for comb in self._free_kernel(free, extra):
            L = [[Fraction(0)] * self.r for _ in range(self.r)]
            for idx, c in comb.items():
                i, m = free[idx]
                L[i][m.index(1)] = c
            out.append(L)
        return out

    def pair_basis(self, max_unknowns: int = 4000) -> list[tuple[VectorFieldJet, list[list[Polynomial]]]]:
        """Explicit kernel pairs (V, U); intended for small degrees."""
        labels = []
        order = max(self.a.order(), 0)
        for m in self._v_monos:
            for i in range(self.r):
                labels.append(("V", i, m))
        for m in monomials_up_to(self.r, self.degree - order):
            for p in range(self.n):
                for q in range(self.n):
                    labels.append(("U", (p, q), m))
        if len(labels) > max_unknowns:
            raise ValueError("too many unknowns for an explicit kernel")
        elim = TrackedElimination()
        for idx, lab in enumerate(labels):
            if lab[0] == "V":
                img = self.v_image(lab[1], lab[2])
            else:
                p, q = lab[1]
                img = {c: -x for c, x in self.coords.vector(congruence_generator(self.a, p, q), shift=lab[2]).items()}
            elim.add(img, idx)
        out = []
        for comb in elim.kernel:
            comps = [dict() for _ in range(self.r)]
            u = [[dict() for _ in range(self.n)] for _ in range(self.n)]
            for idx, c in comb.items():
                lab = labels[idx]
                if lab[0] == "V":
                    comps[lab[1]][lab[2]] = c
                else:
                    p, q = lab[1]
                    u[p][q][lab[2]] = c
            if not any(comps):
                continue
            v = VectorFieldJet(tuple(Polynomial(c, self.r) for c in comps), self.degree)
            out.append((v, [[Polynomial(u[p][q], self.r) for q in range(self.n)] for p in range(self.n)]))
        return out


def lda_jets(a: SymMatrixGerm, d: int) -> LdaJets:
    return LdaJets(a, d)


# ---------------------------------------------------------------- trace obstruction

class Verdict(str, Enum):
    SQH = "SQH"
    NOT_SQH = "NotSQH"
    INCONCLUSIVE = "Inconclusive"


@dataclass
class SqhCertificate:
    verdict: Verdict
    degree_used: int
    weights: WeightSystem | None = None
    linear_parts: list[list[list[Fraction]]] = field(default_factory=list)
    stabilized: bool = False
    history: list[int] = field(default_factory=list)
    diagnostic: str = ""

    def as_dict(self):
        out = {"verdict": self.verdict.value, "degree_used": self.degree_used, "stabilized": self.stabilized,
               "linear_part_dims": self.history}
        if self.weights:
            out["weights"] = self.weights.as_dict()
        if self.linear_parts:
            out["linear_parts"] = [[[str(x) for x in row] for row in L] for L in self.linear_parts]
        if self.diagnostic:
            out["diagnostic"] = self.diagnostic
        return out


def _span_key(mats: list[list[list[Fraction]]]) -> tuple:
    if not mats:
        return ()
    red, _ = rref([[x for row in L for x in row] for L in mats])
    return tuple(tuple(r) for r in red)


def sqh_obstruction(a: SymMatrixGerm, dmax: int = 12, dmin: int | None = None) -> SqhCertificate:
    """SQH with weights, NotSQH via the trace of achievable linear parts, or Inconclusive.

    The linear-part space at truncation degree D contains the true one, so a
    trace-free space at any D already certifies NotSQH.  ``stabilized``
    reports whether the space was equal at three consecutive degrees.
    """
    w = qh_find_diagonal(a)
    if w is not None:
        return SqhCertificate(Verdict.SQH, 0, weights=w, stabilized=True)
    start = dmin if dmin is not None else max(2, a.order())
    keys, history = [], []
    trace_free_at = None
    last = []
    for d in range(start, dmax + 1):
        lin = LdaJets(a, d).linear_parts()
        last = lin
        keys.append(_span_key(lin))
        history.append(len(lin))
        stable = len(keys) >= 3 and keys[-1] == keys[-2] == keys[-3]
        if trace_free_at is None and all(sum(L[i][i] for i in range(a.r)) == 0 for L in lin):
            trace_free_at = d
        if trace_free_at is not None and stable:
            return SqhCertificate(Verdict.NOT_SQH, d, linear_parts=lin, stabilized=True, history=history)
        if stable and trace_free_at is None:
            return SqhCertificate(Verdict.INCONCLUSIVE, d, linear_parts=lin, stabilized=True, history=history,
                                  diagnostic="achievable linear parts include nonzero trace but no diagonal weights found")
    if trace_free_at is not None:
        return SqhCertificate(Verdict.NOT_SQH, dmax, linear_parts=last, stabilized=False, history=history,
                              diagnostic=f"trace-free from degree {trace_free_at}; not stabilized by {dmax}")
    return SqhCertificate(Verdict.INCONCLUSIVE, dmax, linear_parts=last, stabilized=False, history=history,
                          diagnostic=f"linear-part space not stabilized by degree {dmax}")


def trace_free(mats: list[list[list[Fraction]]]) -> bool:
    return all(sum(L[i][i] for i in range(len(L))) == 0 for L in mats)


__all__ = [
    "WeightSystem",
    "LdaJets",
    "SqhCertificate",
    "Verdict",
    "qh_check",
    "qh_find_diagonal",
    "weight_system_for",
    "lda_jets",
    "sqh_obstruction",
    "fourier_motzkin_point",
    "trace_free",
]
