"""1-jets C*x1 + D*x2 of symmetric matrix germs under congruence and linear coordinate change.

For n = 2 the six classes are told apart by the dimension of span{C, D},
the congruence type of a nonsingular member, and the class of the binary
quadratic form det(C x1 + D x2).  Witnesses are exact; some need square
roots, so they are returned as sympy matrices.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Sequence

import sympy as sp

from .linalg import bareiss_rank, det as rdet, nullspace
from .polyring import Polynomial, determinant

Mat = Sequence[Sequence[int | Fraction]]


class QuadraticClass(str, Enum):
    ZERO = "Zero"
    RANK_ONE_POS = "RankOnePos"
    RANK_ONE_NEG = "RankOneNeg"
    INDEFINITE = "Indefinite"
    POS_DEF = "PosDef"
    NEG_DEF = "NegDef"


def classify_quadratic(q: Polynomial) -> QuadraticClass:
    """Rank and signature of a binary quadratic form."""
    if q.nvars != 2:
        raise ValueError("expected a form in two variables")
    if q.is_zero():
        return QuadraticClass.ZERO
    if any(sum(m) != 2 for m in q.terms):
        raise ValueError(f"not a quadratic form: {q}")
    a, b, c = q.coeff((2, 0)), q.coeff((1, 1)), q.coeff((0, 2))
    disc = b * b - 4 * a * c
    if disc < 0:
        return QuadraticClass.POS_DEF if a > 0 else QuadraticClass.NEG_DEF
    if disc > 0:
        return QuadraticClass.INDEFINITE
    lead = a if a else c
    return QuadraticClass.RANK_ONE_POS if lead > 0 else QuadraticClass.RANK_ONE_NEG


def pencil_det(c: Mat, d: Mat) -> Polynomial:
    """det(C x1 + D x2) as a binary form."""
    n = len(c)
    entries = [[Polynomial({(1, 0): c[i][j], (0, 1): d[i][j]}, 2) for j in range(n)] for i in range(n)]
    return determinant(entries)


def _flat(m: Mat) -> list[Fraction]:
    n = len(m)
    return [Fraction(m[i][j]) for i in range(n) for j in range(i, n)]


def pencil_rank(c: Mat, d: Mat) -> int:
    return bareiss_rank([_flat(c), _flat(d)])


# ---------------------------------------------------------------- n = 2 witnesses

REPRESENTATIVES: dict[str, tuple[list[list[int]], list[list[int]]]] = {
    "1": ([[0, 0], [0, 0]], [[0, 0], [0, 0]]),
    "2": ([[1, 0], [0, 0]], [[0, 0], [0, 0]]),
    "3": ([[0, 1], [1, 0]], [[1, 0], [0, 0]]),
    "4": ([[1, 0], [0, 0]], [[0, 0], [0, 1]]),
    "5+": ([[1, 0], [0, 1]], [[0, 0], [0, 0]]),
    "5-": ([[1, 0], [0, -1]], [[0, 0], [0, 0]]),
    "6": ([[1, 0], [0, -1]], [[0, 1], [1, 0]]),
}


@dataclass
class PencilWitness:
    """rep(x) = X^T A(P x) X for the linear map P and constant X."""

    P: sp.Matrix
    X: sp.Matrix

    def apply(self, c: Mat, d: Mat) -> tuple[sp.Matrix, sp.Matrix]:
        C, D = sp.Matrix(c), sp.Matrix(d)
        P, X = self.P, self.X
        c2 = X.T * (P[0, 0] * C + P[1, 0] * D) * X
        d2 = X.T * (P[0, 1] * C + P[1, 1] * D) * X
        return c2.applyfunc(sp.simplify), d2.applyfunc(sp.simplify)

    def is_rational(self) -> bool:
        return all(e.is_Rational for e in list(self.P) + list(self.X))

    def verifies(self, c: Mat, d: Mat, target: tuple[Mat, Mat]) -> bool:
        c2, d2 = self.apply(c, d)
        return (c2 - sp.Matrix(target[0])).is_zero_matrix and (d2 - sp.Matrix(target[1])).is_zero_matrix


@dataclass
class OneJetClass:
    class_id: str
    rank_dA0: int
    det_class: QuadraticClass
    witness: PencilWitness | None = None
    extra: dict = field(default_factory=dict)

    @property
    def number(self) -> int:
        return int(self.class_id[0])

    def representative(self) -> tuple[list[list[int]], list[list[int]]]:
        return REPRESENTATIVES[self.class_id]


def _diagonalizer(m: sp.Matrix) -> tuple[sp.Matrix, list[int]]:
    """X with X^T M X diagonal in {1, -1, 0}, positives first, then negatives, then zeros."""
    n = m.shape[0]
    m = sp.Matrix(m)
    X = sp.eye(n)
    work = m
    # symmetric Gaussian elimination
    for k in range(n):
        if work[k, k] == 0:
            j = next((j for j in range(k + 1, n) if work[j, j] != 0), None)
            if j is not None:
                S = sp.eye(n).permute([(k, j)], orientation="cols")
            else:
                j = next((j for j in range(k + 1, n) if work[k, j] != 0), None)
                if j is None:
                    continue
                S = sp.eye(n)
                S[j, k] = 1
            X = X * S
            work = S.T * work * S
        if work[k, k] == 0:
            continue
        E = sp.eye(n)
        for j in range(k + 1, n):
            E[k, j] = -work[k, j] / work[k, k]
        X = X * E
        work = E.T * work * E
    diag = [work[i, i] for i in range(n)]
    scale = sp.diag(*[1 / sp.sqrt(abs(v)) if v != 0 else 1 for v in diag])
    X = X * scale
    signs = [int(sp.sign(v)) for v in diag]
    order = sorted(range(n), key=lambda i: {1: 0, -1: 1, 0: 2}[signs[i]])
    perm = sp.zeros(n)
    for new, old in enumerate(order):
        perm[old, new] = 1
    return X * perm, [signs[i] for i in order]


def _polar(c: Mat, d: Mat) -> list[list[Fraction]]:
    """Generator of the line orthogonal to span{C, D} for B(M,N) = (m11 n22 + m22 n11 - 2 m12 n12)/2."""
    rows = [[Fraction(m[1][1]), Fraction(-2 * Fraction(m[0][1])), Fraction(m[0][0])] for m in (c, d)]
    v = nullspace(rows, 3)[0]
    return [[v[0], v[1]], [v[1], v[2]]]


def _plane_change(c2: sp.Matrix, d2: sp.Matrix, t1: sp.Matrix, t2: sp.Matrix) -> sp.Matrix:
    """P with (p11 C' + p21 D', p12 C' + p22 D') = (T1, T2) when span{C', D'} = span{T1, T2}."""
    basis = sp.Matrix([[t1[0, 0], t2[0, 0]], [t1[0, 1], t2[0, 1]], [t1[1, 1], t2[1, 1]]])
    coords = []
    for m in (c2, d2):
        rhs = sp.Matrix([m[0, 0], m[0, 1], m[1, 1]])
        sol, params = basis.gauss_jordan_solve(rhs)
        coords.append([sp.simplify(s) for s in sol])
    (a, b), (cc, dd) = coords
    return sp.Matrix([[a, cc], [b, dd]]).inv().applyfunc(sp.simplify)


def classify_one_jet(c: Mat, d: Mat) -> OneJetClass:
    """Class 1-6 of the 1-jet C x1 + D x2 of a Sym_2-valued germ, with an exact witness."""
    if len(c) != 2 or len(d) != 2:
        raise ValueError("classify_one_jet handles n = 2; use one_jet_invariants_n3 for n = 3")
    C, D = sp.Matrix(c), sp.Matrix(d)
    rk = pencil_rank(c, d)
    q = pencil_det(c, d)
    qclass = classify_quadratic(q)
    if rk == 0:
        return OneJetClass("1", 0, qclass, PencilWitness(sp.eye(2), sp.eye(2)))
    if rk == 1:
        m = C if not C.is_zero_matrix else D
        a = _ratio(C, m)
        b = _ratio(D, m)
        # new x1 coefficient = a p11 + b p21 = 1, new x2 coefficient = 0
        P = sp.Matrix([[a, -b], [b, a]]) / (a * a + b * b)
        X, signs = _diagonalizer(m)
        if signs.count(0) == 1:
            if signs[0] == -1:
                P = P * sp.diag(-1, 1)
            cid = "2"
        else:
            if signs == [-1, -1]:
                P = P * sp.diag(-1, 1)
                cid = "5+"
            elif signs == [1, 1]:
                cid = "5+"
            else:
                cid = "5-"
        w = PencilWitness(P.applyfunc(sp.simplify), X)
        return OneJetClass(cid, 1, qclass, w)
    polar = _polar(c, d)
    N0 = sp.Matrix(polar)
    if qclass == QuadraticClass.NEG_DEF:
        X, _ = _diagonalizer(N0)
        cid = "6"
    elif qclass == QuadraticClass.INDEFINITE:
        X1, signs = _diagonalizer(N0)
        # X1^T N0 X1 = diag(1, -1); isotropic vectors (1, 1) and (1, -1)
        X = X1 * sp.Matrix([[1, 1], [1, -1]])
        cid = "4"
    elif qclass == QuadraticClass.RANK_ONE_NEG:
        ker = nullspace([[Fraction(x) for x in row] for row in polar], 2)[0]
        e = [Fraction(1), Fraction(0)] if polar[0][0] != 0 else [Fraction(0), Fraction(1)]
        X = sp.Matrix([[e[0], ker[0]], [e[1], ker[1]]])
        cid = "3"
    else:  # pragma: no cover - det restricted to a plane in Sym_2 has signature (1, 2)
        raise AssertionError(f"impossible determinant class {qclass} for a 2-plane")
    t1, t2 = (sp.Matrix(m) for m in REPRESENTATIVES[cid])
    c2 = (X.T * C * X).applyfunc(sp.simplify)
    d2 = (X.T * D * X).applyfunc(sp.simplify)
    P = _plane_change(c2, d2, t1, t2)
    return OneJetClass(cid, 2, qclass, PencilWitness(P, X.applyfunc(sp.simplify)))


def _ratio(m: sp.Matrix, base: sp.Matrix) -> sp.Expr:
    for i in range(2):
        for j in range(2):
            if base[i, j] != 0:
                return m[i, j] / base[i, j]
    raise ValueError("zero base")


# ---------------------------------------------------------------- n = 3 invariants

class CubicClass(str, Enum):
    ZERO = "Zero"
    THREE_REAL = "ThreeDistinctReal"
    ONE_REAL = "OneReal"
    DOUBLE = "DoubleRoot"
    TRIPLE = "TripleRoot"


def classify_binary_cubic(f: Polynomial) -> CubicClass:
    if f.is_zero():
        return CubicClass.ZERO
    if any(sum(m) != 3 for m in f.terms):
        raise ValueError(f"not a cubic form: {f}")
    a, b, c, d = (f.coeff(m) for m in ((3, 0), (2, 1), (1, 2), (0, 3)))
    disc = b * b * c * c - 4 * a * c ** 3 - 4 * b ** 3 * d - 27 * a * a * d * d + 18 * a * b * c * d
    if disc > 0:
        return CubicClass.THREE_REAL
    if disc < 0:
        return CubicClass.ONE_REAL
    # repeated factor: triple iff the Hessian vanishes
    hess = (b * b - 3 * a * c, b * c - 9 * a * d, c * c - 3 * b * d)
    return CubicClass.TRIPLE if not any(hess) else CubicClass.DOUBLE


@dataclass
class N3Invariants:
    rank_dA0: int
    joint_column_rank: int
    det_cubic: Polynomial
    cubic_class: CubicClass
    quadratic_class: QuadraticClass

    def as_dict(self):
        return {
            "rank_dA0": self.rank_dA0,
            "joint_column_rank": self.joint_column_rank,
            "j3det": str(self.det_cubic),
            "cubic_class": self.cubic_class.value,
            "j2det_class": self.quadratic_class.value,
        }


def one_jet_invariants_n3(c: Mat, d: Mat) -> N3Invariants:
    """Invariants of the 1-jet of a Sym_3-valued germ in two variables.

    rank_dA0 is dim span{C, D}; joint_column_rank is the dimension of the sum
    of the column spaces of C and D.  det of the 1-jet is a binary cubic, so
    its 2-jet always vanishes.
    """
    if len(c) != 3 or len(d) != 3:
        raise ValueError("expected 3x3 matrices")
    rk = pencil_rank(c, d)
    joint = bareiss_rank([[Fraction(x) for x in row] for row in list(c) + list(d)])
    cubic = pencil_det(c, d)
    return N3Invariants(rk, joint, cubic, classify_binary_cubic(cubic), classify_quadratic(cubic.homogeneous_part(2)))


def one_jet_of(a) -> tuple[list[list[Fraction]], list[list[Fraction]]]:
    """(C, D) for a SymMatrixGerm in two variables."""
    cs = a.linear_coefficients()
    return cs[0], cs[1]


def signature(m: Mat) -> tuple[int, int]:
    """(n_plus, n_minus) of a rational symmetric matrix (via leading minors after diagonalizing)."""
    X, signs = _diagonalizer(sp.Matrix(m))
    return signs.count(1), signs.count(-1)


def is_nonsingular(m: Mat) -> bool:
    return rdet(m) != 0


__all__ = [
    "QuadraticClass",
    "CubicClass",
    "OneJetClass",
    "PencilWitness",
    "N3Invariants",
    "REPRESENTATIVES",
    "classify_quadratic",
    "classify_binary_cubic",
    "classify_one_jet",
    "one_jet_invariants_n3",
    "one_jet_of",
    "pencil_det",
    "pencil_rank",
    "signature",
]
