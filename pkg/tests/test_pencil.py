from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st

from germlab import catalog
from germlab.pencil import (
    REPRESENTATIVES,
    CubicClass,
    QuadraticClass,
    classify_binary_cubic,
    classify_one_jet,
    classify_quadratic,
    one_jet_invariants_n3,
    one_jet_of,
    pencil_det,
)
from germlab.polyring import parse_polynomial
from strategies import invertible_matrices


def Q(text):
    return parse_polynomial(text, 2)


def transform(c, d, P, X):
    """Pencil of X^T A(P x) X, computed independently of the library."""
    C, D, P, X = sp.Matrix(c), sp.Matrix(d), sp.Matrix(P), sp.Matrix(X)
    return X.T * (P[0, 0] * C + P[1, 0] * D) * X, X.T * (P[0, 1] * C + P[1, 1] * D) * X


def as_lists(m):
    return [[Fraction(int(x.p), int(x.q)) for x in m.row(i)] for i in range(m.rows)]


class TestQuadratic:
    @pytest.mark.parametrize("text, expected", [
        ("-x1^2 - x2^2", QuadraticClass.NEG_DEF),
        ("x1*x2", QuadraticClass.INDEFINITE),
        ("0", QuadraticClass.ZERO),
        ("x1^2 + x1*x2 + x2^2", QuadraticClass.POS_DEF),
        ("-(x1 - 2*x2)^2", QuadraticClass.RANK_ONE_NEG),
        ("x2^2", QuadraticClass.RANK_ONE_POS),
    ])
    def test_examples(self, text, expected):
        assert classify_quadratic(Q(text)) == expected

    def test_rejects_non_quadratic(self):
        with pytest.raises(ValueError):
            classify_quadratic(Q("x1^3"))

    @given(st.integers(-3, 3), st.integers(-3, 3), st.integers(-3, 3),
           st.fractions(min_value=Fraction(1, 5), max_value=7), invertible_matrices(2))
    def test_invariant_under_positive_scaling_and_coordinates(self, a, b, c, lam, P):
        q = Q(f"{a}*x1^2 + {b}*x1*x2 + {c}*x2^2")
        u = Q(f"{P[0][0]}*x1 + {P[0][1]}*x2")
        v = Q(f"{P[1][0]}*x1 + {P[1][1]}*x2")
        assert classify_quadratic(q.compose([u, v]).scale(lam)) == classify_quadratic(q)


class TestOneJet:
    def test_zero_pencil(self):
        assert classify_one_jet([[0, 0], [0, 0]], [[0, 0], [0, 0]]).class_id == "1"

    def test_fold_pair(self):
        assert classify_one_jet([[1, 0], [0, 0]], [[0, 0], [0, 1]]).class_id == "4"

    def test_transformed_class6(self):
        c, d = REPRESENTATIVES["6"]
        c2, d2 = transform(c, d, [[1, 1], [0, 1]], [[1, 2], [0, 1]])
        got = classify_one_jet(as_lists(c2), as_lists(d2))
        assert got.class_id == "6"
        assert got.rank_dA0 == 2 and got.det_class == QuadraticClass.NEG_DEF

    @pytest.mark.parametrize("row", catalog.rows_of("table1"), ids=lambda r: r["id"])
    def test_table_representatives(self, row):
        a = catalog.render(row["entries"], {})
        got = classify_one_jet(*one_jet_of(a))
        assert got.class_id == row["id"]
        assert got.rank_dA0 == row["rank"]
        assert classify_quadratic(Q(row["j2det"])) == got.det_class

    @pytest.mark.parametrize("cid", sorted(REPRESENTATIVES))
    def test_two_hundred_random_changes(self, cid, rng):
        c, d = REPRESENTATIVES[cid]
        for _ in range(200):
            while True:
                P = [[rng.randint(-4, 4) for _ in range(2)] for _ in range(2)]
                X = [[rng.randint(-4, 4) for _ in range(2)] for _ in range(2)]
                if sp.Matrix(P).det() and sp.Matrix(X).det():
                    break
            c2, d2 = transform(c, d, P, X)
            got = classify_one_jet(as_lists(c2), as_lists(d2))
            assert got.class_id == cid, (P, X)

    @given(st.lists(st.integers(-3, 3), min_size=6, max_size=6))
    def test_witness_reaches_representative(self, vals):
        c = [[vals[0], vals[1]], [vals[1], vals[2]]]
        d = [[vals[3], vals[4]], [vals[4], vals[5]]]
        got = classify_one_jet(c, d)
        if got.witness is not None:
            assert got.witness.verifies(c, d, got.representative())
        else:
            assert got.class_id == "1"

    @given(st.lists(st.integers(-3, 3), min_size=6, max_size=6), invertible_matrices(2), invertible_matrices(2))
    def test_class_invariant(self, vals, P, X):
        c = [[vals[0], vals[1]], [vals[1], vals[2]]]
        d = [[vals[3], vals[4]], [vals[4], vals[5]]]
        c2, d2 = transform(c, d, P, X)
        assert classify_one_jet(as_lists(c2), as_lists(d2)).class_id == classify_one_jet(c, d).class_id


class TestThreeByThree:
    def test_class1(self):
        inv = one_jet_invariants_n3(*one_jet_of(catalog.germ("n2m3", "1")))
        assert inv.rank_dA0 == 2
        assert inv.joint_column_rank == 3
        assert inv.cubic_class == CubicClass.THREE_REAL

    def test_zero(self):
        z = [[0] * 3 for _ in range(3)]
        inv = one_jet_invariants_n3(z, z)
        assert inv.rank_dA0 == 0 and inv.joint_column_rank == 0

    def test_class6(self):
        row = catalog.find_row("n2m3", "6")
        vals = next(catalog.parameter_values(row))
        inv = one_jet_invariants_n3(*one_jet_of(catalog.render(row["entries"], vals)))
        assert inv.rank_dA0 == 2
        assert inv.cubic_class == CubicClass.TRIPLE

    def test_wrong_size(self):
        with pytest.raises(ValueError):
            one_jet_invariants_n3([[1]], [[0]])

    @given(st.lists(st.integers(-2, 2), min_size=12, max_size=12), invertible_matrices(3, -2, 2))
    def test_invariants_survive_congruence(self, vals, X):
        def symm(v):
            return [[v[0], v[1], v[2]], [v[1], v[3], v[4]], [v[2], v[4], v[5]]]
        c, d = symm(vals[:6]), symm(vals[6:])
        Xs = sp.Matrix(X)
        c2, d2 = (as_lists(Xs.T * sp.Matrix(m) * Xs) for m in (c, d))
        a, b = one_jet_invariants_n3(c, d), one_jet_invariants_n3(c2, d2)
        assert (a.rank_dA0, a.joint_column_rank, a.cubic_class) == (b.rank_dA0, b.joint_column_rank, b.cubic_class)

    @pytest.mark.parametrize("text, expected", [
        ("x1^3", CubicClass.TRIPLE), ("x1^2*x2", CubicClass.DOUBLE),
        ("x1^3 - x1*x2^2", CubicClass.THREE_REAL), ("x1^3 + x2^3", CubicClass.ONE_REAL),
    ])
    def test_cubics(self, text, expected):
        assert classify_binary_cubic(Q(text)) == expected

    def test_pencil_det(self):
        assert pencil_det([[1, 0], [0, 0]], [[0, 0], [0, 1]]) == Q("x1*x2")
