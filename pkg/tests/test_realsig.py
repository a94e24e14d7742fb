from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from germlab.polyring import Polynomial, SymMatrixGerm, parse_polynomial, sym
from germlab.realsig import (
    GridSpec,
    component_count,
    ray_sectors,
    ray_signature,
    signature_at,
    signature_csv,
    signature_field,
    signature_of_matrix,
    signature_svg,
    stable_component_count,
)
from strategies import invertible_matrices

FOLD_PAIR = sym([["x1", "0"], [None, "x2"]])
COARSE = GridSpec(1, Fraction(1, 40))
FINE = GridSpec()


def a_pm(sign, k):
    return sym([["x1", "0"], [None, f"x1*x2 {sign} x2^{k}"]])


def eig_oracle(m):
    """(n+, n0, n-) from floating eigenvalues, with zeros counted through the exact rank."""
    import sympy as sp

    mat = sp.Matrix(m)
    zeros = mat.rows - mat.rank()
    vals = np.linalg.eigvalsh(np.array(m, dtype=float))
    order = np.argsort(np.abs(vals))
    nonzero = vals[order[zeros:]]
    return int((nonzero > 0).sum()), zeros, int((nonzero < 0).sum())


class TestPointwise:
    @pytest.mark.parametrize("a, point, expected", [
        (FOLD_PAIR, (1, 1), (2, 0, 0)),
        (FOLD_PAIR, (1, -1), (1, 0, 1)),
        (sym([["x1", "0"], [None, "x1*x2 - x2^2"]]), (1, 2), (1, 0, 1)),
        (FOLD_PAIR, (0, 0), (0, 2, 0)),
        (FOLD_PAIR, (0, -1), (0, 1, 1)),
    ])
    def test_examples(self, a, point, expected):
        assert signature_at(a, point) == expected

    @given(st.integers(1, 3).flatmap(lambda n: st.lists(st.lists(st.integers(-4, 4), min_size=n, max_size=n),
                                                        min_size=n, max_size=n)))
    def test_matches_eigenvalues(self, rows):
        n = len(rows)
        m = [[rows[min(i, j)][max(i, j)] for j in range(n)] for i in range(n)]
        assert signature_of_matrix(m) == eig_oracle(m)

    @given(st.lists(st.integers(-4, 4), min_size=6, max_size=6), invertible_matrices(3))
    def test_sylvester_inertia(self, v, X):
        m = [[v[0], v[1], v[2]], [v[1], v[3], v[4]], [v[2], v[4], v[5]]]
        xm = np.array(X, dtype=object)
        b = (xm.T.dot(np.array(m, dtype=object))).dot(xm).tolist()
        assert signature_of_matrix(b) == signature_of_matrix(m)


class TestComponents:
    def test_fold_pair_quadrant(self):
        assert component_count(FOLD_PAIR, (2, 0, 0)) == 1

    @pytest.mark.parametrize("sign, k, expected", [("+", 2, 2), ("-", 2, 1), ("+", 3, 1), ("-", 3, 2)])
    def test_split_pairs(self, sign, k, expected):
        # x1 > 0 and x2 (x1 +- x2^(k-1)) > 0: one or two regions by hand
        rep = stable_component_count(a_pm(sign, k), (2, 0, 0))
        assert rep.stable and rep.count == expected

    def test_zero_matrix(self):
        f = signature_field(SymMatrixGerm.zero(2, 2), COARSE)
        assert set(f.counts()) == {(0, 2, 0)}

    def test_definite_determinant(self):
        f = signature_field(sym([["x1", "x2"], [None, "-x1"]]), COARSE)
        assert set(f.counts()) == {(1, 0, 1)}

    def test_empty_target(self):
        with pytest.warns(UserWarning):
            assert component_count(sym([["x1", "x2"], [None, "-x1"]]), (2, 0, 0), COARSE) == 0

    @pytest.mark.parametrize("a", [FOLD_PAIR, a_pm("+", 3), sym([["x1", "x2^2"], [None, "x1^2"]])])
    def test_partition(self, a):
        f = signature_field(a, COARSE)
        assert sum(f.counts().values()) == int(f.mask.sum())
        assert all(sum(t) == 2 for t in f.counts())

    @pytest.mark.parametrize("a", [FOLD_PAIR, sym([["x1", "x2^2"], [None, "x1^2"]]),
                                   sym([["x1", "0"], [None, "x2^2 - x1^2"]])])
    @pytest.mark.parametrize("P, X", [([[1, 1], [0, 1]], [[1, 2], [0, 1]]),
                                      ([[0, 1], [1, 0]], [[2, 0], [1, 1]]),
                                      ([[2, 0], [1, -1]], [[0, 1], [-1, 0]])])
    def test_congruence_and_linear_coordinates(self, a, P, X):
        phi = [parse_polynomial(f"{P[i][0]}*x1 + {P[i][1]}*x2", 2) for i in range(2)]
        b = a.compose(phi).congruence([[Polynomial.constant(c, 2) for c in row] for row in X])
        fa, fb = signature_field(a, FINE), signature_field(b, FINE)
        for target in fa.counts().keys() | fb.counts().keys():
            if target[1] == 0:
                assert component_count(a, target, FINE) == component_count(b, target, FINE)

    def test_grid_validation(self):
        with pytest.raises(ValueError):
            GridSpec(1, 0)


class TestRays:
    def test_fold_pair(self):
        assert ray_signature(FOLD_PAIR, (1, 1)) == (2, 0, 0)
        assert ray_signature(FOLD_PAIR, (1, 0)) == (1, 1, 0)

    def test_cusp_region_has_no_sector(self):
        # x1 > 0 and x2 (x1 - x2^2) > 0: a fat piece over x2 > 0 and a cusp along the negative x2-axis
        assert component_count(a_pm("-", 3), (2, 0, 0)) == 2
        assert ray_sectors(a_pm("-", 3)).get((2, 0, 0)) == 1
        assert ray_sectors(a_pm("+", 3)).get((2, 0, 0)) == 1
        assert ray_sectors(sym([["x1", "0"], [None, "x2^2 - x1^2"]])).get((2, 0, 0)) == 2

    @given(st.integers(-5, 5), st.integers(-5, 5), st.integers(1, 7))
    def test_scale_free(self, p, q, s):
        if p == q == 0:
            return
        assert ray_signature(a_pm("-", 3), (p, q)) == ray_signature(a_pm("-", 3), (s * p, s * q))

    @given(st.integers(-9, 9), st.integers(-9, 9))
    def test_agrees_with_small_points(self, p, q):
        if p == q == 0:
            return
        a = sym([["x1", "x2"], [None, "x1^2 + x2^3"]])
        t = Fraction(1, 10 ** 6)
        assert ray_signature(a, (p, q)) == signature_at(a, (p * t, q * t))


class TestOutput:
    def test_svg_deterministic(self, tmp_path):
        g = GridSpec(1, Fraction(1, 10))
        p1, p2 = tmp_path / "a.svg", tmp_path / "b.svg"
        signature_svg(FOLD_PAIR, g, str(p1))
        signature_svg(FOLD_PAIR, g, str(p2))
        assert p1.read_text() == p2.read_text()
        assert p1.read_text().startswith("<svg")

    def test_csv_rows(self, tmp_path):
        g = GridSpec(1, Fraction(1, 10))
        path = tmp_path / "f.csv"
        signature_csv(FOLD_PAIR, g, str(path))
        lines = path.read_text().splitlines()
        assert lines[0] == "x1,x2,n1,n2,n3"
        assert len(lines) - 1 == int(signature_field(FOLD_PAIR, g).mask.sum())
