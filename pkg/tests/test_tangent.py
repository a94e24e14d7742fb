from dataclasses import replace
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from germlab import catalog
from germlab.linalg import det
from germlab.polyring import Polynomial, SymMatrixGerm, random_polynomial, sym
from germlab.tangent import (
    JetCoords,
    complete_transversal,
    determinacy_sufficient,
    g_codimension,
    ge_codimension,
    mather_stratum_check,
    orbit_tangent_dim_jet,
    sym_entries,
    tangent_space,
    unipotent_tangent,
)
from strategies import sym_germs

FOLD_PAIR = sym([["x1", "0"], [None, "x2"]])
CLASS6 = sym([["x1", "x2^2"], [None, "x1^2"]])
TABLE4_FAMILY, TABLE4_R, TABLE4_K, TABLE4_STRATA = catalog.table4_family()


def table4_jet(c):
    vals = dict(zip(("c1", "c2", "c3", "c4"), c))
    return sym([["x1", f"{vals['c1']}*x2^2"], [None, f"{vals['c2']}*x2^2 + {vals['c3']}*x1*x2 + {vals['c4']}*x1^2"]])


def random_group_element(rng, n, r=2):
    phi = [Polynomial.var(i, r) + random_polynomial(rng, r, 2, 2, 2, 2) for i in range(r)]
    while True:
        x = [[Polynomial.constant(rng.randint(-2, 2), r) + random_polynomial(rng, r, 1, 1, 1, 2)
              for _ in range(n)] for _ in range(n)]
        if det([[e.coeff((0,) * r) for e in row] for row in x]):
            return phi, x


class TestTangentSpace:
    def test_zero_germ(self):
        t = tangent_space(SymMatrixGerm.zero(2, 2), "Ge", 3)
        assert t.dim == 0

    def test_fold_pair(self):
        assert tangent_space(FOLD_PAIR, "Ge", 3).codim == 1

    def test_class6(self):
        assert tangent_space(CLASS6, "Ge", 6).codim == 6

    @given(sym_germs(max_degree=3), st.integers(1, 4))
    def test_g_inside_ge(self, a, d):
        big = tangent_space(a, "Ge", d)
        small = tangent_space(a, "G", d, lo=0)
        assert all(big.space.contains(row) for row in small.space.rows())

    @given(sym_germs(max_degree=3), st.integers(1, 4))
    def test_unipotent_inside_g(self, a, k):
        unip = unipotent_tangent(a, k)
        full = tangent_space(a.truncate(k), "G", k + 1, lo=1)
        assert all(full.space.contains(row) for row in unip.space.rows())

    def test_euler_field_image_is_tangent(self):
        a = sym([["x1", "x2^3"], [None, "x1^2 + x1*x2^2 + x2^4"]])
        euler = [Polynomial.var(0, 2).scale(2), Polynomial.var(1, 2)]
        image = [sum((p.diff(k) * euler[k] for k in range(2)), Polynomial.zero(2)) for p in sym_entries(a)]
        assert tangent_space(a, "G", 6, lo=1).contains(image)


class TestCodimension:
    def test_class7(self):
        assert ge_codimension(sym([["x1", "0"], [None, "x2^2 + x1^2"]])).value == 4

    def test_class8(self):
        assert ge_codimension(sym([["x1", "0"], [None, "x1*x2 + x2^3"]])).value == 6

    def test_n2m3_class1(self):
        assert ge_codimension(catalog.germ("n2m3", "1")).value == 4

    def test_unstabilized(self):
        rep = ge_codimension(sym([["x1", "0"], [None, "x1*x2"]]), dmax=6)
        assert not rep.stabilized and rep.value is None

    @pytest.mark.parametrize("e", list(catalog.instances("table2", max_param=3)), ids=lambda e: e.label)
    def test_invariant_under_twenty_group_elements(self, e, rng):
        want = e.column("codim")
        for _ in range(20):
            phi, x = random_group_element(rng, e.germ.n)
            b = e.germ.compose(phi).congruence(x)
            assert ge_codimension(b).value == want

    @given(sym_germs(max_degree=3))
    def test_history_non_decreasing(self, a):
        for rep in (ge_codimension(a, 7), g_codimension(a, 7)):
            h = rep.history
            assert all(x <= y for x, y in zip(h, h[1:]))
            if rep.stabilized:
                assert h[-1] == h[-2] == rep.value


class TestOrbitDims:
    @pytest.mark.parametrize("c, dim", [((0, 1, 0, 1), 11), ((0, 0, 0, 0), 7), ((1, 0, 1, 0), 10),
                                        ((0, 1, 0, -1), 11), ((0, -1, 0, 1), 11)])
    def test_examples(self, c, dim):
        assert orbit_tangent_dim_jet(table4_jet(c), 2) == dim

    def test_full_frame_is_one_larger_generically(self):
        assert orbit_tangent_dim_jet(table4_jet((0, 1, 0, 1)), 2, "full") == 12

    def test_all_strata(self):
        reports = mather_stratum_check(TABLE4_FAMILY, TABLE4_R, TABLE4_STRATA, TABLE4_K)
        assert [r.name for r in reports] == [s.name for s in TABLE4_STRATA]
        for rep in reports:
            assert rep.ok, rep

    def test_single_point_stratum(self):
        point = [s for s in TABLE4_STRATA if s.name == "2-5"]
        (rep,) = mather_stratum_check(TABLE4_FAMILY, TABLE4_R, point, TABLE4_K)
        assert rep.dims == [7] and rep.ok

    def test_sample_off_stratum(self):
        point = [s for s in TABLE4_STRATA if s.name == "2-5"][0]
        bad = replace(point, samples=[(1, 0, 0, 0)])
        with pytest.raises(ValueError):
            mather_stratum_check(TABLE4_FAMILY, TABLE4_R, [bad], TABLE4_K)


class TestTransversal:
    def test_class2_family(self):
        out = complete_transversal(sym([["x1", "0"], [None, "0"]]), 1)
        got = {(tuple(str(p) for p in sym_entries(v))) for v in out}
        assert got == {("0", "x2^2", "0"), ("0", "0", "x2^2"), ("0", "0", "x1*x2"), ("0", "0", "x1^2")}

    def test_zero_jet(self):
        assert len(complete_transversal(SymMatrixGerm.zero(2, 2), 0)) == 6

    def test_fold_pair(self):
        assert complete_transversal(FOLD_PAIR, 1) == []

    @given(sym_germs(max_degree=2), st.integers(1, 2))
    def test_complement(self, a, k):
        out = complete_transversal(a, k)
        t = unipotent_tangent(a, k)
        coords = JetCoords(2, 3, 1, k + 1)
        space = t.space.copy()
        for v in out:
            assert space.insert(coords.vector(sym_entries(v)))
        assert space.rank == t.space.rank + len(out)
        start = coords.block_start(k + 1)
        assert all(space.contains({c: 1}) for c in range(start, coords.dim))


class TestDeterminacy:
    def test_fold_pair(self):
        assert determinacy_sufficient(FOLD_PAIR, 1, 4)

    def test_class6_needs_weights(self):
        # E22*x2^3 is not reachable by the unipotent group over the 2-jet
        assert not determinacy_sufficient(CLASS6, 2, 4)
        assert determinacy_sufficient(CLASS6, 3, 6)

    def test_zero_jet(self):
        assert not determinacy_sufficient(sym([["x1^3", "0"], [None, "x2^3"]]), 2, 5)

    def test_sufficient_means_transversal_empty(self):
        for a in (FOLD_PAIR, CLASS6):
            for k in (1, 2, 3):
                if determinacy_sufficient(a, k, k + 1):
                    assert complete_transversal(a, k) == []


def test_fraction_coordinates_round_trip():
    coords = JetCoords(2, 3, 1, 2)
    ent = [Polynomial({(1, 0): Fraction(1, 2)}, 2), Polynomial.zero(2), Polynomial({(0, 2): 3}, 2)]
    v = coords.vector(ent)
    assert sorted(v.values()) == [Fraction(1, 2), 3]
