"""Exact linear algebra used to expand vector fields over the ``L_2k`` basis.

Two independent routes:

* :func:`solve_graded` -- the expansion coefficients are weight-homogeneous
  parameter polynomials of known weight, so an ansatz with unknown rational
  coefficients turns the problem into a sparse linear system over ``Q``,
  solved by fraction-free (integer) elimination.
* :func:`bareiss_solve` -- fraction-free Bareiss elimination directly over
  the parameter polynomial ring with exact multivariate division.  Its
  intermediate expressions grow like the discriminant, so it is only
  practical for small genus; the test suite uses it as an oracle there.
"""
from __future__ import annotations

import random
from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm

from .algebra import Exps, LambdaPoly
from .errors import BasisDegenerateError, NotInSpanError


@lru_cache(maxsize=None)
def monomials_of_weight(g: int, weight: int) -> tuple[Exps, ...]:
    """All exponent tuples in ``l4 .. l(4g+2)`` of the given weight."""
    weights = [2 * p + 4 for p in range(2 * g)]
    out: list[Exps] = []

    def rec(p: int, left: int, acc: list[int]) -> None:
        if p == len(weights):
            if left == 0:
                out.append(tuple(acc))
            return
        for k in range(left // weights[p] + 1):
            acc.append(k)
            rec(p + 1, left - k * weights[p], acc)
            acc.pop()

    if weight >= 0:
        rec(0, weight, [])
    return tuple(out)


def _int_row(row: dict, rhs: Fraction) -> tuple[dict, int]:
    den = 1
    for v in row.values():
        den = lcm(den, v.denominator)
    den = lcm(den, rhs.denominator)
    irow = {k: int(v * den) for k, v in row.items()}
    return irow, int(rhs * den)


def _normalize(row: dict, rhs: int) -> tuple[dict, int]:
    g0 = abs(rhs)
    for v in row.values():
        g0 = gcd(g0, v)
    if g0 > 1:
        row = {k: v // g0 for k, v in row.items()}
        rhs //= g0
    return row, rhs


def solve_sparse(equations: list[tuple[dict, Fraction]], unknowns: list) -> dict:
    """Solve a sparse rational system exactly.

    ``equations`` holds ``({unknown: coef}, rhs)`` pairs.  Rows are scaled
    to integers and reduced with integer row operations (content removed at
    each step).  Raises :class:`NotInSpanError` when inconsistent and
    :class:`BasisDegenerateError` when the solution is not unique.
    """
    order = {u: n for n, u in enumerate(unknowns)}
    pivots: dict = {}
    pivot_order: list = []
    for row, rhs in equations:
        if not row and rhs == 0:
            continue
        r, b = _int_row(row, Fraction(rhs))
        for p in pivot_order:
            c = r.get(p)
            if not c:
                continue
            prow, pb = pivots[p]
            pc = prow[p]
            for k in r:
                r[k] *= pc
            b *= pc
            for k, v in prow.items():
                nv = r.get(k, 0) - c * v
                if nv:
                    r[k] = nv
                else:
                    r.pop(k, None)
            b -= c * pb
            r = {k: v for k, v in r.items() if v}
            r, b = _normalize(r, b)
        r = {k: v for k, v in r.items() if v}
        if not r:
            if b != 0:
                raise NotInSpanError("linear system is inconsistent")
            continue
        p = min(r, key=lambda u: order[u])
        r, b = _normalize(r, b)
        pivots[p] = (r, b)
        pivot_order.append(p)
    free = [u for u in unknowns if u not in pivots]
    if free:
        raise BasisDegenerateError(f"{len(free)} undetermined unknowns")
    sol: dict = {}
    for p in reversed(pivot_order):
        prow, pb = pivots[p]
        acc = Fraction(pb)
        for k, v in prow.items():
            if k != p:
                acc -= v * sol[k]
        sol[p] = acc / prow[p]
    return sol


def solve_graded(basis: list[list[LambdaPoly]], target: list[LambdaPoly], weight_of_basis: list[int], target_weight: int) -> list[LambdaPoly]:
    """Find polynomials ``c_k`` with ``sum_k c_k * basis[k] == target`` componentwise.

    ``basis[k]`` is homogeneous of weight ``weight_of_basis[k]`` (as a
    vector field), ``target`` of weight ``target_weight``; hence ``c_k`` has
    weight ``target_weight - weight_of_basis[k]``.
    """
    g = target[0].genus
    unknowns = []
    columns: dict = {}
    for k, vec in enumerate(basis):
        for mono in monomials_of_weight(g, target_weight - weight_of_basis[k]):
            u = (k, mono)
            unknowns.append(u)
            mp = LambdaPoly(g, {mono: Fraction(1)})
            for m, comp in enumerate(vec):
                for e, c in (mp * comp).terms.items():
                    columns.setdefault((m, e), {})[u] = c
    rows: dict = {key: (coeffs, Fraction(0)) for key, coeffs in columns.items()}
    for m, comp in enumerate(target):
        for e, c in comp.terms.items():
            coeffs, _ = rows.get((m, e), ({}, 0))
            rows[(m, e)] = (coeffs, c)
    sol = solve_sparse(list(rows.values()), unknowns) if unknowns else {}
    if not unknowns and any(target):
        raise NotInSpanError("no admissible coefficients of the required weight")
    out = [LambdaPoly.zero(g) for _ in basis]
    for (k, mono), v in sol.items():
        if v:
            out[k] = out[k] + LambdaPoly(g, {mono: v})
    return out


def det_at_point(matrix: list[list[LambdaPoly]], point: dict[int, Fraction]) -> Fraction:
    a = [[p.substitute(point) for p in row] for row in matrix]
    n = len(a)
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        det *= a[col][col]
        for r in range(col + 1, n):
            f = a[r][col] / a[col][col]
            if f:
                for c in range(col, n):
                    a[r][c] -= f * a[col][c]
    return det


def check_nonsingular(matrix: list[list[LambdaPoly]], tries: int = 5, seed: int = 20190527) -> Fraction:
    """Certify ``det(matrix) != 0`` as a polynomial by a nonzero evaluation."""
    g = matrix[0][0].genus
    rng = random.Random(seed)
    for _ in range(tries):
        point = {2 * p + 4: Fraction(rng.randint(-50, 50), rng.randint(1, 7)) for p in range(2 * g)}
        d = det_at_point(matrix, point)
        if d != 0:
            return d
    raise BasisDegenerateError("determinant vanishes at every sampled point")


def bareiss_solve(matrix: list[list[LambdaPoly]], rhs: list[list[LambdaPoly]]) -> tuple[LambdaPoly, list[list[LambdaPoly]]]:
    """Fraction-free solve of ``matrix * X = rhs`` over the polynomial ring.

    Returns ``(det, numerators)`` with ``X = numerators / det``.  Exact
    divisions by the previous pivot are guaranteed by Sylvester's identity.
    """
    n = len(matrix)
    g = matrix[0][0].genus
    a = [list(matrix[r]) + list(rhs[r]) for r in range(n)]
    width = len(a[0])
    prev = LambdaPoly.const(g, 1)
    sign = 1
    for k in range(n):
        piv = next((r for r in range(k, n) if a[r][k]), None)
        if piv is None:
            raise BasisDegenerateError("singular matrix over the polynomial ring")
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, width):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]).exact_div(prev)
            a[i][k] = LambdaPoly.zero(g)
        prev = a[k][k]
    det = a[n - 1][n - 1]
    # back substitution: x_i = (det * b_i - sum a_ij x_j) / a_ii, all exact
    nrhs = width - n
    xs = [[LambdaPoly.zero(g)] * nrhs for _ in range(n)]
    for c in range(nrhs):
        for i in range(n - 1, -1, -1):
            acc = a[i][n + c] * det
            for j in range(i + 1, n):
                acc = acc - a[i][j] * xs[j][c]
            xs[i][c] = acc.exact_div(a[i][i])
    if sign < 0:
        det = -det
        xs = [[-v for v in row] for row in xs]
    return det, xs
