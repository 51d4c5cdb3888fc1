from fractions import Fraction

import pytest

from sigmaheat.algebra import LambdaPoly, lam
from sigmaheat.construct import build_L, context
from sigmaheat.errors import BasisDegenerateError, NotInSpanError
from sigmaheat.fixtureset import load_fixtures
from sigmaheat.linsolve import bareiss_solve, check_nonsingular, solve_sparse
from sigmaheat.textio import parse_weyl
from sigmaheat.verify import (
    bracket_expansion,
    check_coefficient_shapes,
    check_dual_construction,
    check_euler,
    check_lemma33,
    check_q_structure,
    check_witt_leading,
    express_in_l_basis,
    golden_compare,
    l_matrix,
    run_checks,
    structure_coefficients,
)
from sigmaheat.weyl import LambdaVectorField, vf_bracket


def all_pass(entries):
    return all(e["status"] == "pass" for e in entries)


class TestLinearSolve:
    def test_sparse_unique(self):
        sol = solve_sparse([({"a": Fraction(2), "b": Fraction(1)}, Fraction(5)), ({"b": Fraction(3)}, Fraction(3))], ["a", "b"])
        assert sol == {"a": 2, "b": 1}

    def test_sparse_inconsistent(self):
        with pytest.raises(NotInSpanError):
            solve_sparse([({"a": Fraction(1)}, Fraction(1)), ({"a": Fraction(2)}, Fraction(3))], ["a"])

    def test_sparse_underdetermined(self):
        with pytest.raises(BasisDegenerateError):
            solve_sparse([({"a": Fraction(1), "b": Fraction(1)}, Fraction(1))], ["a", "b"])

    @pytest.mark.parametrize("g", [1, 2, 3, 4, 5])
    def test_basis_nonsingular(self, g):
        assert check_nonsingular(l_matrix(context(g))) != 0

    def test_singular_matrix_detected(self):
        g = 1
        row = [lam(g, 4), lam(g, 6)]
        with pytest.raises(BasisDegenerateError):
            check_nonsingular([row, row])


class TestExpansion:
    @pytest.mark.parametrize("g", [1, 2, 3])
    def test_euler_bracket_expansion(self, g):
        ctx = context(g)
        for k in ctx.k_range:
            coeffs = express_in_l_basis(ctx, vf_bracket(build_L(ctx, 0), build_L(ctx, k)))
            assert coeffs == [LambdaPoly.const(g, 2 * k if n == k else 0) for n in ctx.k_range]

    def test_basis_element(self):
        ctx = context(2)
        coeffs = express_in_l_basis(ctx, build_L(ctx, 2))
        assert coeffs == [LambdaPoly.const(2, int(n == 2)) for n in range(4)]

    def test_l2_l4_genus_two(self):
        ctx = context(2)
        c = bracket_expansion(ctx, 1, 2)
        assert c[0] == lam(2, 6).scale(Fraction(8, 5))
        assert c[1] == lam(2, 4).scale(Fraction(-8, 5))
        assert c[2].is_zero()
        assert c[3] == LambdaPoly.const(2, 2)

    def test_not_in_span(self):
        ctx = context(1)
        # coefficient l4 d/dl6 has weight -2, no polynomial combination gives it
        v = LambdaVectorField(1, [LambdaPoly.zero(1), lam(1, 4)])
        with pytest.raises(NotInSpanError):
            express_in_l_basis(ctx, v)

    @pytest.mark.parametrize("g", [1, 2])
    def test_bareiss_oracle(self, g):
        # symbolic fraction-free solve must agree with the graded ansatz
        ctx = context(g)
        mat = [list(col) for col in zip(*l_matrix(ctx))]  # columns of L as unknowns
        for i in ctx.k_range:
            for j in ctx.k_range:
                if i >= j:
                    continue
                target = vf_bracket(build_L(ctx, i), build_L(ctx, j))
                det, num = bareiss_solve(mat, [[c] for c in target.coeffs])
                graded = bracket_expansion(ctx, i, j)
                for k in ctx.k_range:
                    assert num[k][0] == graded[k] * det

    def test_structure_coefficients_antisymmetric(self):
        sc = structure_coefficients(context(2))
        for i in range(4):
            for j in range(4):
                assert sc.row(i, j) == [-c for c in sc.row(j, i)]


class TestChecks:
    @pytest.mark.parametrize("g", [1, 2, 3, 4])
    def test_euler(self, g):
        assert all_pass(check_euler(context(g)))

    @pytest.mark.parametrize("g", [1, 2, 3, 4])
    def test_lemma33(self, g):
        entries = check_lemma33(context(g))
        assert all_pass(entries)
        assert len(entries) == 2 * g

    def test_lemma33_last_index_uses_expansion(self):
        last = check_lemma33(context(3))[-1]
        assert last["mode"] == "basis-expansion"
        assert last["truncated_formula_holds"] is True

    def test_lemma33_genus_one_trivial(self):
        e = check_lemma33(context(1))[1]
        assert e["status"] == "pass"

    @pytest.mark.parametrize("g", [1, 2, 3])
    def test_witt_leading(self, g):
        assert all_pass(check_witt_leading(context(g)))

    @pytest.mark.parametrize("g", [1, 2, 3])
    def test_q_structure(self, g):
        assert all_pass(check_q_structure(context(g)))

    def test_q_structure_euler_row(self):
        ctx = context(3)
        for e in check_q_structure(ctx, pairs=[(0, k) for k in ctx.k_range]):
            assert e["coefficients"] == ({f"Q{2 * e['j']}": str(2 * e["j"])} if e["j"] else {})

    @pytest.mark.parametrize("g", [1, 2, 3, 4])
    def test_dual_construction(self, g):
        assert all_pass(check_dual_construction(context(g)))

    @pytest.mark.parametrize("g", [1, 2, 3, 4])
    def test_shapes(self, g):
        assert all_pass(check_coefficient_shapes(context(g)))

    def test_run_checks_summary(self):
        entries = run_checks(2)
        summary = entries[-1]
        assert summary["check"] == "summary" and summary["status"] == "pass"
        assert summary["failed"] == 0 and summary["typo_candidates"] == []
        checks = {e["check"] for e in entries}
        assert {"lemma33", "q-structure", "golden", "euler-L"} <= checks

    def test_run_checks_only(self):
        entries = run_checks(3, checks=["lemma33", "q-structure"], only=[1, 2])
        ks = {e.get("k") for e in entries if e["check"] == "lemma33"}
        assert ks == {1, 2}
        pairs = {(e["i"], e["j"]) for e in entries if e["check"] == "q-structure"}
        assert pairs == {(1, 1), (1, 2), (2, 2)}


class FakeFixtures:
    def __init__(self, ops):
        self.ops = ops

    def h_operators(self):
        return iter(self.ops)


class TestGolden:
    @pytest.mark.parametrize("g", [1, 2, 3, 4])
    def test_bundled_tables(self, g):
        assert all_pass(golden_compare(context(g), load_fixtures(g)))

    def test_spot_values(self):
        ops = {k: op for _, k, op in load_fixtures(4).h_operators()}
        assert ops[7].delta() == lam(4, 14).scale(Fraction(-1, 2))
        ops3 = {k: op for _, k, op in load_fixtures(3).h_operators()}
        assert ops3[4].gamma(1, 1) == lam(3, 10).scale(Fraction(-2, 7))

    def test_mismatch_labelled_as_typo_candidate(self):
        ctx = context(1)
        wrong = parse_weyl("1/2 d1^2 + 1/6 l4 z1^2", 1)
        (e,) = golden_compare(ctx, FakeFixtures([("H_{2}", 1, wrong)]))
        assert e["status"] == "fail"
        assert e["verdict"] == "paper typo candidate"
        assert e["dual_construction_agrees"] is True
        assert e["diff"] == [{"monomial": "z1^2", "paper": "1/6*l4", "computed": "-1/6*l4"}]


@pytest.mark.slow
@pytest.mark.parametrize("g", [5, 6])
def test_higher_genus_identities(g):
    ctx = context(g)
    assert all_pass(check_lemma33(ctx))
    assert all_pass(check_q_structure(ctx))
