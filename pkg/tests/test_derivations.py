import pytest
from hypothesis import given
from hypothesis import strategies as st

from sigmaheat.algebra import LambdaPoly, lam
from sigmaheat.construct import context
from sigmaheat.derivations import (
    PsiPoly,
    build_script_l,
    compute_w,
    heat_log_rhs,
    log_derivative_ratio,
    psi_derivative,
    split_by_psi_order,
    to_psi_poly,
)
from sigmaheat.textio import parse_expr


def psi(text, g):
    return to_psi_poly(parse_expr(text), g)


class TestPsiRing:
    def test_sign_conventions(self):
        g = 2
        assert psi_derivative(PsiPoly.psi(g, 1), 1) == -PsiPoly.psi(g, 1, 1)
        assert psi_derivative(PsiPoly.psi(g, 1, 1), 3) == PsiPoly.psi(g, 1, 1, 3)

    def test_leibniz(self):
        g = 1
        p1 = PsiPoly.psi(g, 1)
        assert psi_derivative(p1 * p1, 1) == p1 * PsiPoly.psi(g, 1, 1) * -2

    def test_z_derivative(self):
        g = 2
        assert psi_derivative(psi("3 l4 z1^2 z3", g), 1) == psi("6 l4 z1 z3", g)

    def test_second_log_derivative(self):
        # d1^2 phi / phi = psi1^2 - psi11
        assert log_derivative_ratio(1, (2,)) == psi("psi{1}^2 - psi{1,1}", 1)

    @given(st.integers(min_value=0, max_value=2), st.integers(min_value=0, max_value=2))
    def test_mixed_derivatives_commute(self, a, b):
        g = 2
        e = log_derivative_ratio(g, (a, b))
        assert psi_derivative(psi_derivative(e, 1), 3) == psi_derivative(psi_derivative(e, 3), 1)

    def test_round_trips(self):
        p = psi("1/2 psi{1,1,3} - 4/3 l4 psi{1} + (3 l8 - 4/3 l4^2) z3 + psi{1} psi{3}", 2)
        assert PsiPoly.from_json(p.to_json()) == p
        assert psi(p.render(), 2) == p


class TestHeatRhs:
    def test_genus_one_h2(self):
        expected = psi("1/2 (psi{1}^2 - psi{1,1}) - 1/6 l4 z1^2", 1)
        assert heat_log_rhs(context(1), 1) == expected

    def test_genus_four_h0(self):
        expected = psi("z1 psi{1} + 3 z3 psi{3} + 5 z5 psi{5} + 7 z7 psi{7} - 10", 4)
        assert heat_log_rhs(context(4), 0) == expected

    @pytest.mark.parametrize("g", [1, 2, 3])
    def test_weight(self, g):
        ctx = context(g)
        for k in ctx.k_range:
            assert heat_log_rhs(ctx, k).is_homogeneous(2 * k)


class TestScriptL:
    def test_l0(self):
        op = build_script_l(context(4), 0)
        assert op.render() == "L0 - z1 d1 - 3 z3 d3 - 5 z5 d5 - 7 z7 d7"

    def test_psi_terms(self):
        op = build_script_l(context(4), 3)
        assert {ab for ab, _ in op.psi_first_order} == {(1, 5), (3, 3), (5, 1)}
        assert build_script_l(context(4), 7).psi_map() == {(7, 7): LambdaPoly.const(4, 1)}

    @pytest.mark.parametrize("g", [1, 2, 3, 4])
    def test_homogeneous(self, g):
        ctx = context(g)
        for k in ctx.k_range:
            assert build_script_l(ctx, k).is_homogeneous()


class TestW:
    def test_genus_four_small(self):
        ctx = context(4)
        assert compute_w(ctx, 0, 1) == PsiPoly.psi(4, 1)
        assert compute_w(ctx, 0, 3) == PsiPoly.psi(4, 3).map_coefficients(lambda c: c.scale(3))

    def test_w21_sign(self):
        # the derivation gives -1/2 psi{1,1,1}; the printed table has +1/2
        w = compute_w(context(4), 1, 1)
        assert w == psi("-1/2 psi{1,1,1} + psi{3} - 7/9 l4 z1", 4)

    def test_w12_7_has_z5_term(self):
        w = compute_w(context(4), 6, 7)
        _, low = split_by_psi_order(w)
        assert low.terms[((), (0, 0, 1, 0))] == lam(4, 8) * lam(4, 16) + (lam(4, 6) * lam(4, 18)).scale(4)

    @pytest.mark.parametrize("g", [1, 2, 3, 4])
    def test_product_free_and_homogeneous(self, g):
        ctx = context(g)
        for k in ctx.k_range:
            for j in ctx.z_indices:
                w = compute_w(ctx, k, j)
                assert all(len(p) <= 1 for p, _ in w.terms)
                assert w.is_homogeneous(2 * k + j)

    def test_bad_index(self):
        with pytest.raises(ValueError):
            compute_w(context(2), 0, 2)
