"""Derivation operators and the right-hand sides of the Burgers-type system.

Generators ``psi_I`` are attached to sorted multisets ``I`` of odd indices.
For ``|I| = 1`` they are first logarithmic derivatives of a solution phi of
the heat system, ``psi_a = d_a ln phi``; for ``|I| >= 2`` they carry a minus
sign, ``psi_I = -d_I ln phi``.  All sign handling lives in
:func:`psi_derivative`.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from numbers import Rational

from .algebra import Exps, LambdaPoly, format_fraction, join_terms
from .construct import GenusContext, build_L, build_Q
from .errors import GenusMismatchError, InternalConsistencyError, ParseError
from .textio import Expr, _lambda_exps, _odd_exps, _split, psi_index
from .weyl import LambdaVectorField, WeylOperator, ZMonomial, z_slot

PsiPart = tuple[tuple[int, ...], ...]


def psi_name(index: tuple[int, ...]) -> str:
    return "psi{" + ",".join(str(i) for i in index) + "}"


def _psi_weight(psis: PsiPart) -> int:
    return sum(sum(i) for i in psis)


class PsiPoly:
    """``{(psi multiset, z exponents): LambdaPoly}`` with no zero entries."""

    __slots__ = ("genus", "terms")

    def __init__(self, genus: int, terms: dict[tuple[PsiPart, Exps], LambdaPoly] | None = None):
        self.genus = genus
        self.terms = terms if terms is not None else {}

    @classmethod
    def zero(cls, g: int) -> "PsiPoly":
        return cls(g)

    @classmethod
    def const(cls, g: int, c) -> "PsiPoly":
        if not isinstance(c, LambdaPoly):
            c = LambdaPoly.const(g, c)
        return cls(g, {((), (0,) * g): c} if c else {})

    @classmethod
    def psi(cls, g: int, *index: int) -> "PsiPoly":
        return cls(g, {((tuple(sorted(index)),), (0,) * g): LambdaPoly.const(g, 1)})

    @classmethod
    def z(cls, g: int, a: int) -> "PsiPoly":
        e = [0] * g
        e[z_slot(a)] = 1
        return cls(g, {((), tuple(e)): LambdaPoly.const(g, 1)})

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def _add_term(self, out: dict, key, c: LambdaPoly) -> None:
        cur = out.get(key)
        s = c if cur is None else cur + c
        if s:
            out[key] = s
        elif cur is not None:
            del out[key]

    def __add__(self, other):
        if isinstance(other, (int, Rational, LambdaPoly)):
            other = PsiPoly.const(self.genus, other)
        if other.genus != self.genus:
            raise GenusMismatchError("psi polynomials of different genus")
        out = dict(self.terms)
        for k, c in other.terms.items():
            self._add_term(out, k, c)
        return PsiPoly(self.genus, out)

    __radd__ = __add__

    def __neg__(self) -> "PsiPoly":
        return PsiPoly(self.genus, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Rational, LambdaPoly)):
            other = PsiPoly.const(self.genus, other)
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Rational, LambdaPoly)):
            out = {}
            for k, c in self.terms.items():
                v = c * other
                if v:
                    out[k] = v
            return PsiPoly(self.genus, out)
        if not isinstance(other, PsiPoly):
            return NotImplemented
        out: dict = {}
        for (p1, z1), c1 in self.terms.items():
            for (p2, z2), c2 in other.terms.items():
                key = (tuple(sorted(p1 + p2)), tuple(a + b for a, b in zip(z1, z2)))
                self._add_term(out, key, c1 * c2)
        return PsiPoly(self.genus, out)

    __rmul__ = __mul__

    def map_coefficients(self, fn) -> "PsiPoly":
        out = {}
        for k, c in self.terms.items():
            v = fn(c)
            if v:
                out[k] = v
        return PsiPoly(self.genus, out)

    def psi_degree(self) -> int:
        return max((len(p) for p, _ in self.terms), default=0)

    def term_weight(self, key, c: LambdaPoly) -> set[int]:
        psis, z = key
        zw = sum((2 * i + 1) * k for i, k in enumerate(z))
        return {w + _psi_weight(psis) - zw for w in c.weights()}

    def is_homogeneous(self, weight: int) -> bool:
        return all(self.term_weight(k, c) == {weight} for k, c in self.terms.items())

    def __eq__(self, other) -> bool:
        if not isinstance(other, PsiPoly):
            return NotImplemented
        return self.genus == other.genus and self.terms == other.terms

    def __hash__(self):
        return hash((self.genus, frozenset(self.terms.items())))

    def sorted_terms(self):
        def key(item):
            (psis, z), _ = item
            return (-len(psis), [(-len(i), i) for i in psis], tuple(reversed(z)))
        return sorted(self.terms.items(), key=key)

    def expanded_terms(self) -> list[tuple[Fraction, list[str]]]:
        out = []
        for (psis, z), c in self.sorted_terms():
            tail = [psi_name(i) for i in psis]
            tail += [(f"z{2 * i + 1}" if k == 1 else f"z{2 * i + 1}^{k}") for i, k in enumerate(z) if k]
            for e, v in c.sorted_terms():
                out.append((v, c.monomial_factors(e) + tail))
        return out

    def render(self) -> str:
        return join_terms(self.expanded_terms(), " ")

    __str__ = render

    def __repr__(self) -> str:
        return f"PsiPoly(g={self.genus}, {self.render()!r})"

    def to_json(self) -> dict:
        return {
            "genus": self.genus,
            "terms": [
                {
                    "psi": [list(i) for i in psis],
                    "z": {f"z{2 * i + 1}": k for i, k in enumerate(z) if k},
                    "coef": c.to_json(),
                }
                for (psis, z), c in self.sorted_terms()
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "PsiPoly":
        g = data["genus"]
        out = cls(g)
        for t in data["terms"]:
            z = [0] * g
            for name, k in t["z"].items():
                z[z_slot(int(name[1:]))] += k
            key = (tuple(sorted(tuple(i) for i in t["psi"])), tuple(z))
            out = out + cls(g, {key: LambdaPoly.from_json(g, t["coef"])})
        return out


def to_psi_poly(expr: Expr, g: int) -> PsiPoly:
    out = PsiPoly.zero(g)
    for mono, c in expr.items():
        parts = _split(mono)
        extra = set(parts) - {"l", "z", "psi"}
        if extra:
            raise ParseError(f"a psi polynomial cannot contain {sorted(extra)} atoms")
        e = _lambda_exps(g, parts.get("l", []))
        if e is None:
            continue
        psis: list[tuple[int, ...]] = []
        for name, k in parts.get("psi", []):
            idx = psi_index(name)
            if any(a % 2 == 0 or not 1 <= a <= 2 * g - 1 for a in idx):
                raise ParseError(f"{name} has an index outside the genus-{g} range")
            psis += [idx] * k
        key = (tuple(sorted(psis)), _odd_exps(g, parts.get("z", [])))
        out = out + PsiPoly(g, {key: LambdaPoly(g, {e: c})})
    return out


def _d_psi(index: tuple[int, ...], j: int) -> tuple[int, tuple[int, ...]]:
    """``d_j psi_I = sign * psi_J``; the single place where the sign convention lives."""
    new = tuple(sorted(index + (j,)))
    return (-1 if len(index) == 1 else 1), new


def psi_derivative(expr: PsiPoly, j: int) -> PsiPoly:
    """Formal ``d/dz_j`` on the psi ring (Leibniz rule, parameters constant)."""
    g = expr.genus
    if j % 2 == 0 or not 1 <= j <= 2 * g - 1:
        raise ValueError(f"d{j} is not a genus-{g} derivative")
    sj = z_slot(j)
    out = PsiPoly(g)
    for (psis, z), c in expr.terms.items():
        if z[sj]:
            nz = z[:sj] + (z[sj] - 1,) + z[sj + 1:]
            out = out + PsiPoly(g, {(psis, nz): c.scale(z[sj])})
        for n, idx in enumerate(psis):
            if n and psis[n - 1] == idx:
                continue
            mult = psis.count(idx)
            sign, new = _d_psi(idx, j)
            rest = list(psis)
            rest.remove(idx)
            key = (tuple(sorted(rest + [new])), z)
            out = out + PsiPoly(g, {key: c.scale(sign * mult)})
    return out


@lru_cache(maxsize=None)
def log_derivative_ratio(g: int, d_exps: Exps) -> PsiPoly:
    """``(d^B phi)/phi`` in psi generators, via ``E_(B+j) = d_j E_B + psi_j E_B``."""
    if not any(d_exps):
        return PsiPoly.const(g, 1)
    slot = max(i for i, k in enumerate(d_exps) if k)
    j = 2 * slot + 1
    prev = d_exps[:slot] + (d_exps[slot] - 1,) + d_exps[slot + 1:]
    e = log_derivative_ratio(g, prev)
    return psi_derivative(e, j) + PsiPoly.psi(g, j) * e


def heat_log_rhs(ctx: GenusContext, k: int) -> PsiPoly:
    """``(H_2k phi)/phi``, which equals ``L_2k ln phi`` on solutions of ``Q_2k phi = 0``."""
    g = ctx.g
    h = build_Q(ctx, k).h_part
    out = PsiPoly(g)
    for m, c in h.terms.items():
        zpart = PsiPoly(g, {((), m.z): c})
        out = out + zpart * log_derivative_ratio(g, m.d)
    return out


@dataclass(frozen=True)
class DerivationOperator:
    """``L - sum psi_a d_b (coefficient alpha_ab) - z_first_order``."""

    l_part: LambdaVectorField
    l_index: int
    psi_first_order: tuple[tuple[tuple[int, int], LambdaPoly], ...]
    z_first_order: WeylOperator

    @property
    def genus(self) -> int:
        return self.l_part.genus

    @property
    def weight(self) -> int:
        return 2 * self.l_index

    def psi_map(self) -> dict[tuple[int, int], LambdaPoly]:
        return dict(self.psi_first_order)

    def apply_nonlambda(self, expr: PsiPoly) -> PsiPoly:
        """Action of everything except ``L`` (the z-derivation part)."""
        g = self.genus
        out = PsiPoly(g)
        for (a, b), c in self.psi_first_order:
            out = out - PsiPoly.psi(g, a) * psi_derivative(expr, b) * c
        for m, c in self.z_first_order.terms.items():
            (b_slot,) = [i for i, k in enumerate(m.d) if k]
            zp = PsiPoly(g, {((), m.z): c})
            out = out - zp * psi_derivative(expr, 2 * b_slot + 1)
        return out

    def apply(self, expr: PsiPoly) -> PsiPoly:
        return expr.map_coefficients(self.l_part.apply) + self.apply_nonlambda(expr)

    def is_homogeneous(self) -> bool:
        w = self.weight
        ok = self.l_part.is_homogeneous(w) and self.z_first_order.is_homogeneous(w)
        return ok and all(c.is_homogeneous(w - a - b) for (a, b), c in self.psi_first_order)

    def expanded_terms(self) -> list[tuple[Fraction, list[str]]]:
        out: list[tuple[Fraction, list[str]]] = [(Fraction(1), [f"L{self.weight}"])]
        for (a, b), c in sorted(self.psi_first_order, key=lambda t: (t[0][1], t[0][0])):
            for e, v in c.sorted_terms():
                out.append((-v, c.monomial_factors(e) + [psi_name((a,)), f"d{b}"]))
        out += [(-v, f) for v, f in self.z_first_order.expanded_terms()]
        return out

    def render(self) -> str:
        return join_terms(self.expanded_terms(), " ")

    __str__ = render

    def to_json(self) -> dict:
        return {
            "genus": self.genus,
            "L": self.weight,
            "psi_terms": [
                {"psi": a, "d": b, "coef": c.to_json()} for (a, b), c in self.psi_first_order
            ],
            "z_terms": self.z_first_order.to_json(),
        }


def build_script_l(ctx: GenusContext, k: int) -> DerivationOperator:
    """``L_2k - sum_{a+b=2k} psi_a d_b - (z d part of H_2k)``.

    The psi coefficients are read from the second-order part of ``H_2k``
    (``alpha_ab``), the last sum is its ``z_a d_b`` part.
    """
    ctx.check_k(k)
    h = build_Q(ctx, k).h_part
    psi_terms = []
    for a in ctx.z_indices:
        for b in ctx.z_indices:
            c = h.alpha(a, b)
            if c:
                psi_terms.append(((a, b), c))
    return DerivationOperator(build_L(ctx, k), k, tuple(psi_terms), h.part(1, 1))


def script_l_from_expr(expr: Expr, g: int) -> DerivationOperator:
    """Read ``L<2k> - psi{a} d<b> ... + <z d terms>`` into a :class:`DerivationOperator`."""
    ctx = GenusContext(g)
    l_index = None
    psi_terms: dict[tuple[int, int], LambdaPoly] = {}
    zop = WeylOperator.zero(g)
    for mono, c in expr.items():
        parts = _split(mono)
        if "L" in parts:
            if len(mono) != 1 or c != 1 or mono[0][1] != 1:
                raise ParseError("the L<n> generator must appear alone with coefficient 1")
            if l_index is not None:
                raise ParseError("more than one L<n> generator")
            l_index = int(mono[0][0][1:]) // 2
            continue
        e = _lambda_exps(g, parts.get("l", []))
        if e is None:
            continue
        coef = LambdaPoly(g, {e: c})
        if "psi" in parts:
            (name, k1), = parts["psi"]
            (dname, k2), = parts["d"]
            idx = psi_index(name)
            if k1 != 1 or k2 != 1 or len(idx) != 1 or "z" in parts:
                raise ParseError("psi terms must have the form psi{a} d<b>")
            key = (idx[0], int(dname[1:]))
            psi_terms[key] = psi_terms.get(key, LambdaPoly.zero(g)) - coef
        else:
            m = ZMonomial(_odd_exps(g, parts.get("z", [])), _odd_exps(g, parts.get("d", [])))
            zop = zop - WeylOperator(g, {m: coef})
    if l_index is None:
        raise ParseError("missing the L<n> generator")
    ordered = tuple(sorted(((k, v) for k, v in psi_terms.items() if v)))
    return DerivationOperator(build_L(ctx, l_index), l_index, ordered, zop)


def normalize_script_l(op: DerivationOperator) -> DerivationOperator:
    return DerivationOperator(op.l_part, op.l_index, tuple(sorted(op.psi_first_order)), op.z_first_order)


def compute_w(ctx: GenusContext, k: int, j: int) -> PsiPoly:
    """Right-hand side ``w_{2k,j}`` of ``script_L_2k psi_j = w_{2k,j}``.

    ``L_2k psi_j = d_j (L_2k ln phi) = d_j heat_log_rhs``; the remaining
    first-order part of ``script_L_2k`` acts on ``psi_j`` formally.  The
    result must be free of products of psi generators.
    """
    g = ctx.g
    if j % 2 == 0 or not 1 <= j <= 2 * g - 1:
        raise ValueError(f"j={j} is not an odd index in 1..{2 * g - 1}")
    op = build_script_l(ctx, k)
    w = psi_derivative(heat_log_rhs(ctx, k), j) + op.apply_nonlambda(PsiPoly.psi(g, j))
    if w.psi_degree() > 1:
        raise InternalConsistencyError(f"w_{{{2 * k},{j}}} keeps products of psi generators: {w}")
    return w


def w_table(ctx: GenusContext) -> dict[tuple[int, int], PsiPoly]:
    return {(k, j): compute_w(ctx, k, j) for k in ctx.k_range for j in ctx.z_indices}


def split_by_psi_order(w: PsiPoly) -> tuple[PsiPoly, PsiPoly]:
    """``(terms with a psi of size >= 2, everything else)``."""
    high = {k: c for k, c in w.terms.items() if any(len(i) >= 2 for i in k[0])}
    low = {k: c for k, c in w.terms.items() if k not in high}
    return PsiPoly(w.genus, high), PsiPoly(w.genus, low)


__all__ = [
    "PsiPoly",
    "DerivationOperator",
    "psi_derivative",
    "log_derivative_ratio",
    "heat_log_rhs",
    "build_script_l",
    "compute_w",
    "w_table",
    "format_fraction",
]
