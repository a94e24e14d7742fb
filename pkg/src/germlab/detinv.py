"""Invariants built from the determinant of a symmetric matrix germ.

Local algebras Q[[x]]/I are handled through jets: the image of I in jets of
degrees lo..d is spanned by (monomial) * (generator), and the quotient is
certified once a whole homogeneous degree lies in the span (Nakayama).
Koszul homology of the generators is computed on the truncated complex over
Q[x]/m^T and corrected by the finite term dim m^T / I m^T.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import prod
from typing import Sequence

from .linalg import EchelonSpace, nullspace
from .polyring import Polynomial, SymMatrixGerm, monomials_up_to
from .tangent import JetCoords, ge_codimension


def det_germ(a: SymMatrixGerm) -> Polynomial:
    return a.det()


@dataclass
class LocalAlgebraReport:
    dimension: int | None
    stabilized: bool
    degree: int
    history: list[int]
    lower_bound: int | None = None
    product_formula: Fraction | None = None

    def as_dict(self):
        out = {
            "dimension": self.dimension if self.stabilized else f">= {self.lower_bound}",
            "stabilized": self.stabilized,
            "degree": self.degree,
            "history": self.history,
        }
        if self.product_formula is not None:
            out["product_formula"] = str(self.product_formula)
        return out


def _block_inside(space: EchelonSpace, coords: JetCoords, degree: int) -> bool:
    start = coords.block_start(degree)
    return all(space.contains({c: 1}) for c in range(start, coords.dim))


def ideal_colength(gens: Sequence[Polynomial], r: int, dmax: int = 20, lo: int = 0) -> LocalAlgebraReport:
    """dim m^lo / (I m^lo) for the ideal I generated by ``gens`` (lo = 0 gives dim R/I).

    Generators are multiplied only by monomials of degree >= lo.
    """
    history = []
    for hi in range(lo, lo + dmax + 1):
        coords = JetCoords(r, 1, lo, hi)
        space = EchelonSpace(coords.dim)
        for g in gens:
            if g.is_zero():
                continue
            for m in monomials_up_to(r, hi - g.order(), lo):
                vec = coords.vector([g], shift=m)
                if vec:
                    space.insert(vec)
        history.append(coords.dim - space.rank)
        if _block_inside(space, coords, hi):
            # the top degree lies in the ideal, so everything above it does too
            return LocalAlgebraReport(history[-1], True, hi, history)
    return LocalAlgebraReport(None, False, lo + dmax, history, lower_bound=max(history) if history else 0)


def _weighted_homogeneous_weights(f: Polynomial) -> list[Fraction] | None:
    """Weights w_i with <w, alpha> = 1 on every monomial of f, when unique and positive."""
    r = f.nvars
    rows = [[Fraction(e) for e in m] + [Fraction(-1)] for m in f.terms]
    basis = nullspace(rows, r + 1)
    sols = [v for v in basis if v[r] != 0]
    if len(basis) != 1 or not sols:
        return None
    v = sols[0]
    w = [x / v[r] for x in v[:r]]
    return w if all(x > 0 for x in w) else None


def milnor_number(f: Polynomial, dmax: int = 20) -> LocalAlgebraReport:
    """Milnor number: dim Q[[x]] / (df/dx_1, ..., df/dx_r), with a stabilization certificate."""
    if f.constant_term() != 0:
        raise ValueError("function germ must vanish at the origin")
    rep = ideal_colength(f.gradient(), f.nvars, dmax)
    w = _weighted_homogeneous_weights(f) if not f.is_zero() else None
    if w is not None:
        rep.product_formula = prod((1 / x - 1 for x in w), start=Fraction(1))
    return rep


# ---------------------------------------------------------------- Koszul homology

def koszul_generators(a: SymMatrixGerm) -> list[Polynomial]:
    """Signed (n-1)x(n-1) minors, upper triangle of the adjugate in row-major order."""
    return a.adjugate_upper()


@dataclass
class TruncatedKoszul:
    """Koszul complex of ``gens`` over Q[x]/m^T with its homology dimensions."""

    gens: list[Polynomial]
    T: int
    chain_dims: list[int] = field(default_factory=list)
    ranks: list[int] = field(default_factory=list)  # ranks[j] = rank of d_j : C_j -> C_{j-1}
    homology: list[int] = field(default_factory=list)

    @classmethod
    def build(cls, gens: Sequence[Polynomial], T: int) -> "TruncatedKoszul":
        gens = list(gens)
        m = len(gens)
        r = gens[0].nvars
        coords = JetCoords(r, 1, 0, T - 1)
        subsets = [list(combinations(range(m), j)) for j in range(m + 1)]
        index = [{s: k for k, s in enumerate(sub)} for sub in subsets]
        nb = coords.dim
        chain_dims = [len(sub) * nb for sub in subsets]
        ranks = [0] * (m + 2)
        for j in range(1, m + 1):
            space = EchelonSpace(chain_dims[j - 1])
            for s in subsets[j]:
                for mono in coords.monos:
                    image: dict[int, Fraction] = {}
                    for pos, t in enumerate(s):
                        g = gens[t]
                        if g.is_zero():
                            continue
                        face = index[j - 1][s[:pos] + s[pos + 1:]]
                        sign = -1 if pos % 2 else 1
                        for col, c in coords.vector([g], shift=mono, coeff=sign).items():
                            key = face * nb + col
                            image[key] = image.get(key, 0) + c
                    space.insert({k: v for k, v in image.items() if v})
            ranks[j] = space.rank
        homology = [chain_dims[j] - ranks[j] - ranks[j + 1] for j in range(m + 1)]
        return cls(gens, T, chain_dims, ranks[: m + 1], homology)

    def euler_consistent(self) -> bool:
        lhs = sum((-1) ** j * d for j, d in enumerate(self.chain_dims))
        rhs = sum((-1) ** j * h for j, h in enumerate(self.homology))
        return lhs == rhs


@dataclass
class KoszulReport:
    beta0: int | None
    beta1: int | None
    stabilized: bool
    truncation: int
    history: list[tuple[int, int, int]]
    euler_ok: bool

    def as_dict(self):
        return {"beta0": self.beta0, "beta1": self.beta1, "stabilized": self.stabilized,
                "truncation": self.truncation, "history": [list(h) for h in self.history],
                "euler_consistent": self.euler_ok}


def koszul_betti(gens: Sequence[Polynomial], dmax: int = 12) -> KoszulReport:
    """Dimensions of H_0 and H_1 of the Koszul complex on ``gens`` over Q[[x]].

    For m^T inside I the long exact sequence of 0 -> m^T -> R -> R/m^T -> 0
    gives dim H_1(R) = dim H_1(R/m^T) - dim m^T / I m^T once T is past the
    Artin-Rees range; T is increased until two consecutive values agree.
    """
    gens = list(gens)
    if not gens:
        raise ValueError("no generators")
    r = gens[0].nvars
    if any(g.constant_term() != 0 for g in gens):
        raise ValueError("generators must vanish at the origin")
    b0 = ideal_colength(gens, r, dmax)
    if not b0.stabilized:
        return KoszulReport(None, None, False, dmax, [], True)
    history = []
    euler_ok = True
    prev = None
    for T in range(b0.degree, b0.degree + dmax + 1):
        kz = TruncatedKoszul.build(gens, T)
        euler_ok = euler_ok and kz.euler_consistent()
        tail = ideal_colength(gens, r, dmax, lo=T)
        if not tail.stabilized:
            break
        b1 = kz.homology[1] - tail.dimension
        history.append((T, kz.homology[1], tail.dimension))
        if prev is not None and prev == b1:
            return KoszulReport(b0.dimension, b1, True, T, history, euler_ok)
        prev = b1
    return KoszulReport(b0.dimension, None, False, T, history, euler_ok)


# ---------------------------------------------------------------- the identity mu = codim - beta1 + beta0

@dataclass
class Theorem27Report:
    mu: int | None
    codim: int | None
    beta0: int | None
    beta1: int | None
    holds: bool
    resolved: bool
    weights: tuple[int, ...] | None
    determinant: str

    def as_dict(self):
        return {"mu": self.mu, "codim": self.codim, "beta0": self.beta0, "beta1": self.beta1,
                "holds": self.holds, "resolved": self.resolved,
                "sqh_weights": list(self.weights) if self.weights else None, "det": self.determinant}


def theorem27_check(a: SymMatrixGerm, dmax: int = 12) -> Theorem27Report:
    """Compare the Milnor number of det A with codim - beta1 + beta0 (all computed independently).

    Exact rank computations over Q give the same dimensions over C, so this
    is the complex statement.
    """
    from .quasihom import qh_find_diagonal

    d = det_germ(a)
    mu = milnor_number(d, 2 * dmax)
    codim = ge_codimension(a, dmax)
    kz = koszul_betti(koszul_generators(a), dmax)
    w = qh_find_diagonal(a)
    resolved = mu.stabilized and codim.stabilized and kz.stabilized
    holds = resolved and mu.dimension == codim.value - kz.beta1 + kz.beta0
    return Theorem27Report(mu.dimension, codim.value, kz.beta0, kz.beta1, holds, resolved,
                           w.lam if w else None, str(d))


__all__ = [
    "LocalAlgebraReport",
    "KoszulReport",
    "TruncatedKoszul",
    "Theorem27Report",
    "det_germ",
    "ideal_colength",
    "milnor_number",
    "koszul_generators",
    "koszul_betti",
    "theorem27_check",
]
