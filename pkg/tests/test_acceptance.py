"""Acceptance criteria 1-8, one test each.

Every test prints a single ``ACCEPTANCE <n> PASS|FAIL`` line with its
timing.  Caches are cleared before each criterion so the timings are cold.
Run directly (``python3 tests/test_acceptance.py``) for just the lines.
"""
import time

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sigmaheat.algebra import LambdaPoly, lam
from sigmaheat.construct import build_L, build_Q, context, h_from_generating, v_entry
from sigmaheat.derivations import PsiPoly, build_script_l, compute_w
from sigmaheat.fixtureset import load_fixtures
from sigmaheat.textio import parse_lambda_poly, parse_vector_field, parse_weyl
from sigmaheat.verify import (
    check_coefficient_shapes,
    check_dual_construction,
    check_euler,
    check_lemma33,
    check_q_structure,
    clear_caches,
    golden_compare,
    golden_compare_script_l,
    golden_compare_w,
)
from sigmaheat.weyl import (
    LambdaVectorField,
    SchrodingerOperator,
    WeylOperator,
    q_commutator,
    vf_bracket,
    weyl_commutator,
)

from strategies import lambda_polys, vector_fields, weyl_ops


def report(n, title, ok, seconds, budget, detail=""):
    within = seconds <= budget
    status = "PASS" if ok and within else "FAIL"
    line = f"ACCEPTANCE {n} {status}  {title}  ({seconds:.2f} s, budget {budget} s)"
    if detail:
        line += f"  {detail}"
    print(line)
    return ok and within


def failing(entries):
    return [e for e in entries if e["status"] == "fail"]


@pytest.fixture(autouse=True)
def cold_caches():
    clear_caches()
    yield


@pytest.fixture
def say(capsys):
    def emit(*args, **kwargs):
        with capsys.disabled():
            ok = report(*args, **kwargs)
        return ok
    return emit


def test_criterion_1_golden_tables(say):
    t0 = time.perf_counter()
    bad = []
    for g in (1, 2, 3, 4):
        bad += failing(golden_compare(context(g), load_fixtures(g)))
    dt = time.perf_counter() - t0
    verdicts = sorted({e["verdict"] for e in bad})
    assert say(1, "H tables g=1..4 exact", not bad, dt, 5, f"mismatches={len(bad)} {verdicts or ''}")


def test_criterion_2_dual_construction(say):
    t0 = time.perf_counter()
    bad = []
    times = {}
    for g in range(1, 9):
        t = time.perf_counter()
        bad += failing(check_dual_construction(context(g)))
        times[g] = time.perf_counter() - t
    dt = time.perf_counter() - t0
    assert say(2, "generating function = closed forms + recurrence, g=1..8 (timed at g=8)", not bad, times[8], 60,
               f"all genera {dt:.2f} s")


def test_criterion_3_commutator_identities(say):
    t0 = time.perf_counter()
    bad = []
    for g in range(1, 7):
        ctx = context(g)
        bad += failing(check_euler(ctx))
        bad += failing(check_lemma33(ctx))
    dt = time.perf_counter() - t0
    assert say(3, "Euler relations and [L2, L2k] formula, g=1..6", not bad, dt, 30, f"failures={len(bad)}")


def test_criterion_4_q_structure(say):
    t0 = time.perf_counter()
    bad = []
    times = {}
    for g in (1, 2, 3, 4):
        t = time.perf_counter()
        bad += failing(check_q_structure(context(g)))
        times[g] = time.perf_counter() - t
    dt = time.perf_counter() - t0
    assert say(4, "[Q2i, Q2j] expands with the L-side coefficients, g=1..4 (timed at g=4)", not bad, times[4], 120,
               f"all genera {dt:.2f} s")


def test_criterion_5_coefficient_shapes(say):
    t0 = time.perf_counter()
    bad = []
    for g in range(1, 9):
        bad += failing(check_coefficient_shapes(context(g)))
    spots = (
        h_from_generating(context(2), 2).delta() == -lam(2, 4)
        and h_from_generating(context(3), 3).delta() == -lam(3, 6).scale(2)
    )
    dt = time.perf_counter() - t0
    assert say(5, "alpha/delta formulas, beta linear, gamma quadratic, g=1..8", not bad and spots, dt, 60,
               f"failures={len(bad)} spot values={'ok' if spots else 'wrong'}")


def test_criterion_6_grading(say):
    t0 = time.perf_counter()
    bad = []
    for g in range(1, 6):
        ctx = context(g)
        for k in range(1, 2 * g + 1):
            for m in range(1, 2 * g + 1):
                if not v_entry(ctx, k, m).is_homogeneous(2 * (k + m)):
                    bad.append(("v", g, k, m))
        for k in ctx.k_range:
            q = build_Q(ctx, k)
            if not (build_L(ctx, k).is_homogeneous(2 * k) and q.h_part.is_homogeneous(2 * k) and q.is_homogeneous(2 * k)):
                bad.append(("Q", g, k))
    for g in range(1, 5):
        ctx = context(g)
        for k in ctx.k_range:
            if not build_script_l(ctx, k).is_homogeneous():
                bad.append(("scriptL", g, k))
            for j in ctx.z_indices:
                if not compute_w(ctx, k, j).is_homogeneous(2 * k + j):
                    bad.append(("w", g, k, j))
    dt = time.perf_counter() - t0
    assert say(6, "weight homogeneity of v, L, H, Q (g<=5), scriptL and w (g<=4)", not bad, dt, 60, f"violations={len(bad)}")


def test_criterion_7_derivations(say):
    t0 = time.perf_counter()
    ctx = context(4)
    fs = load_fixtures(4)
    script = golden_compare_script_l(ctx, fs)
    w = golden_compare_w(ctx, fs)
    products = []
    for g in (1, 2, 3, 4):
        c = context(g)
        for k in c.k_range:
            for j in c.z_indices:
                if any(len(p) > 1 for p, _ in compute_w(c, k, j).terms):
                    products.append((g, k, j))
    blocks = [e for e in w if e["check"] == "golden-w"]
    typos = sorted(e["operator"] for e in blocks if e.get("verdict") == "paper typo candidate")
    sign = [e for e in w if e["check"] == "w-psi-sign"]
    labels_reported = {"w_{2k,5}", "w_{4,5}", "w_{12,7}"} <= set(typos)
    ok = (
        len(script) == 8 and not failing(script)
        and len(blocks) == 32 and not failing(blocks)
        and not products and bool(sign) and labels_reported
    )
    dt = time.perf_counter() - t0
    assert say(7, "scriptL displays, w tables, product-free w for g=1..4", ok, dt, 30,
               f"typo candidates={typos} sign question={'reported' if sign else 'missing'}")


def test_criterion_8_algebraic_properties(say):
    t0 = time.perf_counter()
    counts = {"weyl": 0, "vf": 0, "q": 0}

    @settings(max_examples=100, derandomize=True, deadline=None)
    @given(weyl_ops(2), weyl_ops(2), weyl_ops(2))
    def weyl_laws(a, b, c):
        counts["weyl"] += 1
        br = weyl_commutator
        assert (a * b) * c == a * (b * c)
        assert br(a, b) == -br(b, a)
        assert (br(br(a, b), c) + br(br(b, c), a) + br(br(c, a), b)).is_zero()

    @settings(max_examples=100, derandomize=True, deadline=None)
    @given(vector_fields(2), vector_fields(2), vector_fields(2))
    def vf_laws(u, v, w):
        counts["vf"] += 1
        br = vf_bracket
        assert br(u, v) == -br(v, u)
        assert (br(br(u, v), w) + br(br(v, w), u) + br(br(w, u), v)).is_zero()

    @settings(max_examples=100, derandomize=True, deadline=None)
    @given(st.data())
    def q_laws(data):
        counts["q"] += 1
        a, b, c = (SchrodingerOperator(data.draw(vector_fields(1)), data.draw(weyl_ops(1))) for _ in range(3))
        br = q_commutator
        assert br(a, b) == -br(b, a)
        assert (br(br(a, b), c) + br(br(b, c), a) + br(br(c, a), b)).is_zero()

    @settings(max_examples=100, derandomize=True, deadline=None)
    @given(lambda_polys(3, max_terms=5), weyl_ops(3, max_terms=5), vector_fields(2))
    def round_trips(p, op, v):
        assert parse_lambda_poly(p.render(), 3) == p
        assert LambdaPoly.from_json(3, p.to_json()) == p
        assert parse_weyl(op.render() or "0", 3) == op
        assert WeylOperator.from_json(op.to_json()) == op
        assert parse_vector_field(v.render() or "0", 2) == v
        assert LambdaVectorField.from_json(v.to_json()) == v

    weyl_laws()
    vf_laws()
    q_laws()
    round_trips()
    q = build_Q(context(3), 4)
    w = compute_w(context(4), 3, 5)
    ok = SchrodingerOperator.from_json(q.to_json()) == q and PsiPoly.from_json(w.to_json()) == w
    dt = time.perf_counter() - t0
    assert say(8, "antisymmetry, Jacobi, associativity, round trips", ok and min(counts.values()) >= 100, dt, 120,
               f"random triples={counts}")


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
