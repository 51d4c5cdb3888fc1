from fractions import Fraction

import pytest

from sigmaheat.algebra import LambdaPoly, XPoly, lam
from sigmaheat.construct import (
    alpha_delta,
    build_h_t,
    build_L,
    build_Q,
    context,
    h_closed_form,
    h_from_generating,
    h_generating,
    q_family_recurrence,
    q_recurrence,
    r_poly,
    v_entry,
)
from sigmaheat.errors import IndexRangeError, InvalidGenusError, RecurrenceNotApplicableError
from sigmaheat.textio import parse_vector_field, parse_weyl
from sigmaheat.weyl import WeylOperator


def xp(g, *coeffs):
    cs = [c if isinstance(c, LambdaPoly) else LambdaPoly.const(g, c) for c in coeffs]
    return XPoly(cs, LambdaPoly.zero(g))


def test_context_rejects_bad_genus():
    with pytest.raises(InvalidGenusError):
        context(0)
    with pytest.raises(IndexRangeError):
        build_L(context(2), 4)


class TestVectorFields:
    def test_v_entries_genus_one(self):
        ctx = context(1)
        assert v_entry(ctx, 1, 1) == lam(1, 4).scale(4)
        assert v_entry(ctx, 1, 2) == lam(1, 6).scale(6)
        assert v_entry(ctx, 2, 2) == (lam(1, 4) ** 2).scale(Fraction(-4, 3))

    def test_v_is_symmetric(self):
        ctx = context(3)
        for k in range(1, 7):
            for m in range(1, 7):
                assert v_entry(ctx, k, m) == v_entry(ctx, m, k)

    def test_L_genus_one(self):
        ctx = context(1)
        assert build_L(ctx, 0) == parse_vector_field("4 l4 dl4 + 6 l6 dl6", 1)
        assert build_L(ctx, 1) == parse_vector_field("6 l6 dl4 - 4/3 l4^2 dl6", 1)

    @pytest.mark.parametrize("g", [1, 2, 3, 4])
    def test_L0_is_euler_field(self, g):
        ctx = context(g)
        for idx in ctx.lambda_indices:
            assert build_L(ctx, 0).apply(lam(g, idx)) == lam(g, idx).scale(idx)

    @pytest.mark.parametrize("g", [1, 2, 3, 4, 5])
    def test_L_homogeneous(self, g):
        ctx = context(g)
        for k in ctx.k_range:
            assert build_L(ctx, k).is_homogeneous(2 * k)


class TestGeneratingData:
    @pytest.mark.parametrize("g", [1, 2, 3, 4])
    def test_r1_is_power(self, g):
        assert r_poly(context(g), 1) == xp(g, *([0] * g + [1]))

    def test_r2_genus_two(self):
        assert r_poly(context(2), 2) == xp(2, 0, lam(2, 4), 0, 3)

    def test_h_and_t_genus_one(self):
        ctx = context(1)
        h, t = build_h_t(ctx)
        assert h == XPoly([ctx.d(1), ctx.z(1)], WeylOperator.zero(1))
        assert t.is_zero()

    def test_t_z3_square_genus_two(self):
        ctx = context(2)
        _, t = build_h_t(ctx)
        z3sq = ctx.z(3) * ctx.z(3)
        assert t.coeff(1).coefficient(z={3: 2}) == LambdaPoly.const(2, Fraction(3, 2))
        assert (t.coeff(1) - z3sq.scale(Fraction(3, 2))).coefficient(z={3: 2}).is_zero()

    def test_generating_function_genus_one(self):
        ctx = context(1)
        H = h_generating(ctx)
        assert H.degree == 1
        assert H.coeff(1) == parse_weyl("z1 d1 - 1", 1)
        assert H.coeff(0) == parse_weyl("1/2 d1^2 - 1/6 l4 z1^2", 1)

    def test_delta_spot_values(self):
        assert h_from_generating(context(2), 2).delta() == -lam(2, 4)
        assert h_from_generating(context(3), 3).delta() == -lam(3, 6).scale(2)


class TestClosedForms:
    def test_h0(self):
        assert h_closed_form(context(2), 0) == parse_weyl("z1 d1 + 3 z3 d3 - 3", 2)
        assert h_closed_form(context(4), 0).delta() == LambdaPoly.const(4, -10)

    def test_h2_genus_one(self):
        assert h_closed_form(context(1), 1) == parse_weyl("1/2 d1^2 - 1/6 l4 z1^2", 1)

    def test_out_of_range(self):
        with pytest.raises(IndexRangeError):
            h_closed_form(context(3), 3)
        with pytest.raises(IndexRangeError):
            h_closed_form(context(1), 2)

    @pytest.mark.parametrize("g", [1, 2, 3, 4, 5, 6])
    def test_closed_forms_match_generating_function(self, g):
        ctx = context(g)
        for k in range(min(3, 2 * g)):
            assert h_closed_form(ctx, k) == h_from_generating(ctx, k)


class TestAlphaDelta:
    def test_examples(self):
        assert alpha_delta(context(2), 2)[1] == -lam(2, 4)
        assert alpha_delta(context(3), 3)[1] == -lam(3, 6).scale(2)
        for g in (1, 2, 5):
            assert alpha_delta(context(g), 1)[1].is_zero()

    def test_alpha_indicator(self):
        alpha, _ = alpha_delta(context(3), 3)
        assert alpha[(1, 5)] == alpha[(5, 1)] == alpha[(3, 3)] == 1
        assert alpha[(1, 3)] == 0


class TestRecurrence:
    def test_not_applicable(self):
        ctx = context(2)
        q = [build_Q(ctx, k) for k in range(4)]
        with pytest.raises(RecurrenceNotApplicableError):
            q_recurrence(ctx, 2, q[1], q[1], q[0], q[0])

    def test_h6_genus_two(self):
        qs = q_family_recurrence(context(2))
        expected = parse_weyl("1/2 d3^2 - 3/5 l8 z3 d1 - 1/10 l8 z1^2 + 2 l10 z1 z3 - 3/10 l4 l8 z3^2 - 1/2 l6", 2)
        assert qs[3].h_part == expected

    def test_h10_genus_three_constant(self):
        qs = q_family_recurrence(context(3))
        assert qs[5].h_part.delta() == lam(3, 10).scale(Fraction(-1, 2))
        assert qs[5].h_part == h_from_generating(context(3), 5)

    @pytest.mark.parametrize("g", [1, 2, 3, 4, 5])
    def test_recurrence_matches_generating_function(self, g):
        ctx = context(g)
        for k, q in enumerate(q_family_recurrence(ctx)):
            assert q.h_part == h_from_generating(ctx, k)
            assert q.l_part == build_L(ctx, k)


class TestQ:
    def test_genus_one(self):
        ctx = context(1)
        q0 = build_Q(ctx, 0)
        assert q0.l_part == build_L(ctx, 0)
        assert q0.h_part == parse_weyl("z1 d1 - 1", 1)
        assert build_Q(ctx, 1).h_part == parse_weyl("1/2 d1^2 - 1/6 l4 z1^2", 1)

    @pytest.mark.parametrize("g", [1, 2, 3, 4, 5])
    def test_weights(self, g):
        ctx = context(g)
        for k in ctx.k_range:
            assert build_Q(ctx, k).is_homogeneous(2 * k)

    @pytest.mark.parametrize("g", [1, 2, 3, 4])
    def test_generating_function_homogeneous(self, g):
        # wt x = 2, H_2k at x^(2g-1-k) has weight 2k: total weight 4g - 2
        H = h_generating(context(g))
        for n, c in enumerate(H.coeffs):
            assert c.is_homogeneous(4 * g - 2 - 2 * n)
