from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from germlab import catalog
from germlab.linalg import EchelonSpace
from germlab.polyring import Polynomial, VectorFieldJet, euler_field, monomials_up_to, sym
from germlab.quasihom import (
    Verdict,
    WeightSystem,
    lda_jets,
    qh_check,
    qh_find_diagonal,
    sqh_obstruction,
    weight_system_for,
)
from strategies import invertible_matrices, sym_germs

A_H = sym([["x1^3", "x1^2*x2 + x2^3"], [None, "x2^5"]])


def a21(d1=1, d2=1):
    ex = catalog.example("A_21")
    return catalog.render(ex["entries"], {"d1": d1, "d2": d2})


def field_space(fields, r=2, degree=6):
    monos = monomials_up_to(r, degree, 1)
    index = {(i, m): k for k, (i, m) in enumerate((i, m) for m in monos for i in range(r))}
    space = EchelonSpace(len(index))
    for v in fields:
        space.insert({index[(i, m)]: c for i, comp in enumerate(v.components) for m, c in comp.items()})
    return space


class TestCheck:
    def test_bruce_row(self):
        assert qh_check(sym([["x1", "x2^2"], [None, "x1^2"]]), WeightSystem((4, 3), (4, 8)))

    def test_table_row_with_derived_degrees(self):
        a = sym([["x1", "x2^2"], [None, "x1*x2"]])
        w = weight_system_for(a, (3, 2))
        assert w is not None and qh_check(a, w)

    def test_wrong_weights(self):
        assert not qh_check(sym([["x1", "0"], [None, "x2"]]), WeightSystem((1, 2), (2, 2)))

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            qh_check(sym([["x1", "0"], [None, "x2"]]), WeightSystem((1, 1, 1), (2, 2)))

    def test_weights_must_be_positive_in_total(self):
        with pytest.raises(ValueError):
            WeightSystem((0, 0), (0, 0))


class TestFindDiagonal:
    def test_boundary_germ_has_none(self):
        assert qh_find_diagonal(A_H) is None

    def test_single_entry(self):
        w = qh_find_diagonal(sym([["x1", "0"], [None, "0"]]))
        assert w.lam == (1, 1)
        assert w.delta[0] == 1

    @pytest.mark.parametrize("e", list(catalog.instances("table2", max_param=4)) + list(catalog.instances("n2m3", max_param=4)),
                             ids=lambda e: f"{e.table}:{e.label}")
    def test_every_normal_form(self, e):
        w = qh_find_diagonal(e.germ)
        assert w is not None and qh_check(e.germ, w) and sum(w.lam) > 0

    @given(sym_germs(max_degree=3))
    def test_result_always_checks(self, a):
        w = qh_find_diagonal(a)
        if w is not None:
            assert qh_check(a, w)
            assert all(x >= 0 for x in w.lam) and sum(w.lam) > 0


class TestIsotropyAlgebra:
    def test_scaling_field_of_fold_pair(self):
        jets = lda_jets(sym([["x1", "0"], [None, "x2"]]), 4)
        assert jets.contains(VectorFieldJet.from_strings(["x1", "0"], 4, 2))

    @pytest.mark.parametrize("d1, d2", [(1, 1), (1, -1), (-1, 1), (-1, -1)])
    def test_listed_generators(self, d1, d2):
        ex = catalog.example("A_21")
        jets = lda_jets(a21(d1, d2), 6)
        vals = {"d1": d1, "d2": d2}
        for gen in ex["generators"]:
            assert jets.contains(VectorFieldJet.from_strings([catalog.render_text(s, vals) for s in gen], 3, 2))

    def test_boundary_germ_three_jets(self):
        # a basis of the 3-jets of V-parts, computed by hand
        jets = lda_jets(A_H, 9)
        for comps in (["3*x1^3 + x1*x2^2", "2*x1^2*x2"], ["3*x1^2*x2 + x2^3", "2*x1*x2^2"],
                      ["-2*x1^3", "-x1^2*x2 + x2^3"]):
            assert jets.contains_jet(VectorFieldJet.from_strings(comps, 3, 2), 3)
        assert jets.v_part_basis(2) == []
        assert field_space(jets.v_part_basis(3)).rank == 3

    @pytest.mark.parametrize("e", list(catalog.instances("table2", max_param=3)), ids=lambda e: e.label)
    def test_euler_field_belongs(self, e):
        w = qh_find_diagonal(e.germ)
        E = euler_field(w.lam, 6)
        assert lda_jets(e.germ, 6).contains(E)

    @given(sym_germs(max_degree=2), st.sampled_from([(1, 0), (0, 1), (2, 0), (1, 1)]))
    def test_module_property(self, a, mono):
        jets = lda_jets(a, 4)
        m = Polynomial({mono: 1}, 2)
        for v in jets.v_part_basis(2):
            k = 2 + sum(mono)
            assert jets.contains_jet(VectorFieldJet(tuple(c * m for c in v.components), k), k)

    @given(sym_germs(max_degree=2), invertible_matrices(2, -2, 2))
    def test_conjugation_stability(self, a, X):
        x = [[Polynomial.constant(c, 2) for c in row] for row in X]
        b = a.congruence(x)
        left = field_space(lda_jets(a, 4).v_part_basis(3), degree=3)
        right = field_space(lda_jets(b, 4).v_part_basis(3), degree=3)
        assert left.same_space(right)

    @given(sym_germs(max_degree=3))
    def test_linear_parts_shrink(self, a):
        prev = None
        for d in (2, 3, 4):
            lin = lda_jets(a, d).linear_parts()
            space = EchelonSpace(4)
            for L in lin:
                space.insert({i: x for i, x in enumerate(v for row in L for v in row) if x})
            if prev is not None:
                assert all(prev.contains(row) for row in space.rows())
            prev = space


class TestObstruction:
    def test_a21(self):
        assert sqh_obstruction(a21()).verdict == Verdict.NOT_SQH

    def test_boundary_germ(self):
        cert = sqh_obstruction(A_H)
        assert cert.verdict == Verdict.NOT_SQH
        assert all(sum(L[i][i] for i in range(2)) == 0 for L in cert.linear_parts)

    def test_alpha_beta(self):
        cert = sqh_obstruction(sym([["x1", "x2^3"], [None, "x1^2 + x1*x2^2 + x2^4"]]))
        assert cert.verdict == Verdict.SQH and cert.weights.lam == (2, 1)

    def test_certificate_serializes(self):
        out = sqh_obstruction(a21()).as_dict()
        assert out["verdict"] == "NotSQH" and out["stabilized"]
        assert all(isinstance(x, str) for L in out["linear_parts"] for row in L for x in row)


def test_weighted_degrees_consistent():
    w = qh_find_diagonal(sym([["x1", "x2^3"], [None, "x1^2 + x1*x2^2 + x2^4"]]))
    assert Fraction(w.delta[0] + w.delta[1], 2) == 3 * w.lam[1]
