"""Construction of the generators ``L_2k``, ``H_2k`` and ``Q_2k`` for a genus.

Three independent routes produce ``H_2k``:

* the generating function (remainder modulo ``f'(x)``), the authoritative one;
* the closed forms for ``H_0, H_2, H_4``;
* the bracket recurrence that produces ``Q_2k`` for ``k >= 3`` from
  ``Q_0, Q_2`` and lower operators.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .algebra import LambdaPoly, XPoly, check_genus, curve_poly, lam, quo, rem, strict_lam, x_power
from .errors import IndexRangeError, RecurrenceNotApplicableError
from .weyl import LambdaVectorField, SchrodingerOperator, WeylOperator, odd_indices, q_commutator


@dataclass(frozen=True)
class GenusContext:
    g: int

    def __post_init__(self):
        check_genus(self.g)

    @property
    def lambda_indices(self) -> list[int]:
        return [2 * p + 4 for p in range(2 * self.g)]

    @property
    def z_indices(self) -> list[int]:
        return odd_indices(self.g)

    @property
    def k_range(self) -> range:
        return range(2 * self.g)

    def lam(self, index: int) -> LambdaPoly:
        return lam(self.g, index)

    def const(self, c) -> LambdaPoly:
        return LambdaPoly.const(self.g, c)

    def z(self, a: int) -> WeylOperator:
        return WeylOperator.z(self.g, a)

    def d(self, b: int) -> WeylOperator:
        return WeylOperator.d(self.g, b)

    def check_k(self, k: int) -> int:
        if not 0 <= k <= 2 * self.g - 1:
            raise IndexRangeError(f"k={k} outside 0..{2 * self.g - 1} for genus {self.g}")
        return k


def context(g: int) -> GenusContext:
    return GenusContext(g)


# -- parameter vector fields ---------------------------------------------

@lru_cache(maxsize=None)
def v_entry(ctx: GenusContext, k: int, m: int) -> LambdaPoly:
    """Entry ``v_{2k,2m}`` of the symmetric matrix of the discriminant fields."""
    g = ctx.g
    if not (1 <= k <= 2 * g and 1 <= m <= 2 * g):
        raise IndexRangeError(f"v_entry indices ({k}, {m}) outside 1..{2 * g}")
    if k > m:
        k, m = m, k
    out = LambdaPoly.zero(g)
    for s in range(k):
        out = out + (lam(g, 2 * s) * lam(g, 2 * (k + m - s))).scale(2 * (k + m - 2 * s))
    out = out - (lam(g, 2 * k) * lam(g, 2 * m)).scale(Fraction(2 * k * (2 * g - m + 1), 2 * g + 1))
    return out


@lru_cache(maxsize=None)
def build_L(ctx: GenusContext, k: int) -> LambdaVectorField:
    """``L_2k``; its ``d/dl(2m)`` coefficient is ``v_{2k+2, 2m-2}``."""
    ctx.check_k(k)
    return LambdaVectorField(ctx.g, [v_entry(ctx, k + 1, m - 1) for m in range(2, 2 * ctx.g + 2)])


def l_or_zero(ctx: GenusContext, k: int) -> LambdaVectorField:
    if 0 <= k <= 2 * ctx.g - 1:
        return build_L(ctx, k)
    return LambdaVectorField.zero(ctx.g)


# -- generating-function data --------------------------------------------

@lru_cache(maxsize=None)
def r_poly(ctx: GenusContext, i: int) -> XPoly:
    """``R_i(x) = x^(g-i+1) * d/dx q(f(x), x^(2g-2i+2))``."""
    g = ctx.g
    if not 1 <= i <= g:
        raise IndexRangeError(f"R_i needs 1 <= i <= {g}, got {i}")
    q = quo(curve_poly(g), x_power(g, 2 * g - 2 * i + 2))
    return q.derivative().shift(g - i + 1)


def _as_operators(p: XPoly, g: int) -> XPoly:
    return p.map(lambda c: WeylOperator.scalar(g, c), WeylOperator.zero(g))


def _h_piece(ctx: GenusContext, i: int) -> XPoly:
    """``x^(g-i) d_(2i-1) + R_i(x) z_(2i-1)``."""
    g = ctx.g
    a = 2 * i - 1
    d_part = XPoly.monomial(ctx.d(a), g - i, WeylOperator.zero(g))
    z_part = _as_operators(r_poly(ctx, i), g) * ctx.z(a)
    return d_part + z_part


@lru_cache(maxsize=None)
def build_h_t(ctx: GenusContext) -> tuple[XPoly, XPoly]:
    """The first-order ``h(x)`` and the multiplication operator ``t(x)``."""
    g = ctx.g
    zero = WeylOperator.zero(g)
    h = XPoly([], zero)
    for i in range(1, g + 1):
        h = h + _h_piece(ctx, i)
    t = XPoly([], zero)
    for i in range(1, g + 1):
        a = 2 * i - 1
        zz = ctx.z(a) * ctx.z(a)
        qr = _as_operators(quo(r_poly(ctx, i), x_power(g, g - i + 2)), g)
        t = t + qr * zz.scale(Fraction(g - i + 1, 2))
    for i in range(1, g):
        piece = _h_piece(ctx, i)
        for j in range(i + 1, g + 1):
            qj = quo(piece, x_power(g, g - j + 2))
            t = t + ctx.z(2 * j - 1).scale(g - j + 1) * qj
    return h, t


@lru_cache(maxsize=None)
def h_generating(ctx: GenusContext) -> XPoly:
    """``H(x) = r(-1/4 f'' + 2 f t + 1/2 h o h, f')``; ``H_2k`` sits at ``x^(2g-1-k)``."""
    g = ctx.g
    f = curve_poly(g)
    fp = f.derivative()
    h, t = build_h_t(ctx)
    num = _as_operators(fp.derivative(), g) * Fraction(-1, 4)
    num = num + (_as_operators(f, g) * t) * 2
    num = num + (h * h) * Fraction(1, 2)
    return rem(num, fp)


def h_from_generating(ctx: GenusContext, k: int) -> WeylOperator:
    ctx.check_k(k)
    return h_generating(ctx).coeff(2 * ctx.g - 1 - k)


# -- closed forms ----------------------------------------------------------

def h_closed_form(ctx: GenusContext, k: int) -> WeylOperator:
    """Explicit ``H_0``, ``H_2``, ``H_4``."""
    g = ctx.g
    if k not in (0, 1, 2):
        raise IndexRangeError(f"closed forms exist for k in {{0, 1, 2}}, got {k}")
    ctx.check_k(k)
    L = lambda idx: strict_lam(g, idx)  # noqa: E731
    z, d = ctx.z, ctx.d
    H = WeylOperator.zero(g)
    if k == 0:
        for s in range(1, g + 1):
            H = H + (z(2 * s - 1) * d(2 * s - 1)).scale(2 * s - 1)
        return H - Fraction(g * (g + 1), 2)
    if k == 1:
        H = (d(1) * d(1)).scale(Fraction(1, 2))
        for s in range(1, g):
            H = H + (z(2 * s - 1) * d(2 * s + 1)).scale(2 * s - 1)
            H = H - (z(2 * s + 1) * d(2 * s - 1)) * L(4).scale(Fraction(4 * (g - s), 2 * g + 1))
        for s in range(1, g + 1):
            c = L(4 * s).scale(Fraction(2 * s - 1, 2)) - (L(4) * L(4 * s - 4)).scale(Fraction(2 * (g - s + 1), 2 * g + 1))
            H = H + (z(2 * s - 1) * z(2 * s - 1)) * c
        return H
    H = d(1) * d(3)
    for s in range(1, g - 1):
        H = H + (z(2 * s - 1) * d(2 * s + 3)).scale(2 * s - 1)
    for s in range(1, g):
        H = H + (z(2 * s + 1) * d(2 * s + 1)) * L(4).scale(2 * s - 1)
        H = H - (z(2 * s + 1) * d(2 * s - 1)) * L(6).scale(Fraction(6 * (g - s), 2 * g + 1))
    for s in range(1, g + 1):
        c = L(4 * s + 2).scale(2 * s - 1) - (L(6) * L(4 * s - 4)).scale(Fraction(3 * (g - s + 1), 2 * g + 1))
        H = H + (z(2 * s - 1) * z(2 * s - 1)) * c
    for s in range(1, g):
        H = H + (z(2 * s - 1) * z(2 * s + 1)) * L(4 * s + 4).scale(2 * s - 1)
    return H - L(4).scale(Fraction(g * (g - 1), 2))


def alpha_delta(ctx: GenusContext, k: int) -> tuple[dict[tuple[int, int], Fraction], LambdaPoly]:
    """Predicted ``alpha^(k)`` (indicator of ``a + b = 2k``) and ``delta^(k)``."""
    g = ctx.g
    ctx.check_k(k)
    alpha = {(a, b): Fraction(int(a + b == 2 * k)) for a in ctx.z_indices for b in ctx.z_indices}
    fl = (k + 1) // 2
    c = Fraction(-(2 * g - k + 1) * (2 * g - k), 4) + Fraction((g + fl - k) * (g - fl), 2)
    return alpha, lam(g, 2 * k).scale(c)


# -- Schrodinger operators -------------------------------------------------

def build_Q(ctx: GenusContext, k: int) -> SchrodingerOperator:
    """``Q_2k = L_2k - H_2k`` with ``H_2k`` from the generating function."""
    return SchrodingerOperator(build_L(ctx, k), h_from_generating(ctx, k), 2 * k)


def q_recurrence(
    ctx: GenusContext,
    k: int,
    q2: SchrodingerOperator,
    q_prev: SchrodingerOperator,
    q0: SchrodingerOperator,
    q_prev2: SchrodingerOperator,
) -> SchrodingerOperator:
    """``Q_2k = [Q_2, Q_(2k-2)]/(2(k-2)) - 2(2g-k+1)/((k-2)(2g+1)) (l_2k Q_0 - l_4 Q_(2k-4))``."""
    g = ctx.g
    if k < 3:
        raise RecurrenceNotApplicableError(f"the recurrence starts at k=3, got k={k}")
    ctx.check_k(k)
    br = q_commutator(q2, q_prev).scale(Fraction(1, 2 * (k - 2)))
    corr = q0.scale(lam(g, 2 * k)) - q_prev2.scale(lam(g, 4))
    out = br - corr.scale(Fraction(2 * (2 * g - k + 1), (k - 2) * (2 * g + 1)))
    out.weight = 2 * k
    return out


@dataclass
class HFamily:
    genus: int
    operators: list[WeylOperator] = field(default_factory=list)
    provenance: list[str] = field(default_factory=list)


@lru_cache(maxsize=None)
def h_family_generating(ctx: GenusContext) -> HFamily:
    fam = HFamily(ctx.g)
    for k in ctx.k_range:
        fam.operators.append(h_from_generating(ctx, k))
        fam.provenance.append("generating-function")
    return fam


@lru_cache(maxsize=None)
def q_family_recurrence(ctx: GenusContext) -> tuple[SchrodingerOperator, ...]:
    """``Q_0 .. Q_(4g-2)`` from the closed forms and the recurrence only."""
    qs: list[SchrodingerOperator] = []
    for k in ctx.k_range:
        if k <= 2:
            qs.append(SchrodingerOperator(build_L(ctx, k), h_closed_form(ctx, k), 2 * k))
        else:
            qs.append(q_recurrence(ctx, k, qs[1], qs[k - 1], qs[0], qs[k - 2]))
    return tuple(qs)


def h_family_recurrence(ctx: GenusContext) -> HFamily:
    fam = HFamily(ctx.g)
    for k, q in enumerate(q_family_recurrence(ctx)):
        fam.operators.append(q.h_part)
        fam.provenance.append("closed-form" if k <= 2 else "recurrence")
    return fam


@lru_cache(maxsize=None)
def q_family(ctx: GenusContext) -> tuple[SchrodingerOperator, ...]:
    return tuple(build_Q(ctx, k) for k in ctx.k_range)
