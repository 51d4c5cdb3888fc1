"""Differential operators in ``z1, z3, ..., z(2g-1)`` with parameter
coefficients, vector fields in the parameters, and their combinations
``Q = L - H``.

Operators are kept normal ordered (every ``z`` left of every ``d``);
``d<a>`` is the partial derivative along ``z<a>``.  Slot ``i`` of a
monomial's exponent tuples belongs to the odd index ``2i+1``.
"""
from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from numbers import Rational
from typing import Iterable, NamedTuple

from .algebra import Exps, LambdaPoly, format_fraction, is_lambda_index, join_terms
from .errors import GenusMismatchError


def z_slot(a: int) -> int:
    return (a - 1) // 2


def odd_indices(g: int) -> list[int]:
    return [2 * i + 1 for i in range(g)]


def _power(name: str, e: int) -> str:
    return name if e == 1 else f"{name}^{e}"


class ZMonomial(NamedTuple):
    """``z^z * d^d`` in normal order."""

    z: Exps
    d: Exps

    @property
    def genus(self) -> int:
        return len(self.z)

    def weight(self) -> int:
        """wt d_b = b, wt z_a = -a."""
        return sum((2 * i + 1) * (dd - zz) for i, (zz, dd) in enumerate(zip(self.z, self.d)))

    def z_order(self) -> int:
        return sum(self.z)

    def d_order(self) -> int:
        return sum(self.d)

    def factors(self) -> list[str]:
        out = [_power(f"z{2 * i + 1}", k) for i, k in enumerate(self.z) if k]
        out += [_power(f"d{2 * i + 1}", k) for i, k in enumerate(self.d) if k]
        return out

    def sort_key(self):
        return (-self.d_order(), -self.z_order(), tuple(reversed(self.d)), tuple(reversed(self.z)))

    @classmethod
    def one(cls, g: int) -> "ZMonomial":
        return cls((0,) * g, (0,) * g)


@lru_cache(maxsize=200_000)
def _mono_product(m1: ZMonomial, m2: ZMonomial) -> tuple[tuple[ZMonomial, int], ...]:
    """Normal-ordered expansion of ``m1 * m2`` via d^b z^c = sum C(b,j)C(c,j)j! z^(c-j) d^(b-j)."""
    per_var = []
    for a1, b1, a2, b2 in zip(m1.z, m1.d, m2.z, m2.d):
        opts = []
        for j in range(min(b1, a2) + 1):
            opts.append((a1 + a2 - j, b1 + b2 - j, comb(b1, j) * comb(a2, j) * factorial(j)))
        per_var.append(opts)
    out = []
    for choice in itertools.product(*per_var):
        coef = 1
        for _, _, c in choice:
            coef *= c
        out.append((ZMonomial(tuple(c[0] for c in choice), tuple(c[1] for c in choice)), coef))
    return tuple(out)


def _add_into(out: dict, key, value: LambdaPoly) -> None:
    cur = out.get(key)
    s = value if cur is None else cur + value
    if s:
        out[key] = s
    elif cur is not None:
        del out[key]


class WeylOperator:
    """Normal-ordered operator: ``{ZMonomial: LambdaPoly}`` with no zero entries.

    ``*`` composes operators and multiplies by parameter polynomials or
    rationals (which commute with everything).
    """

    __slots__ = ("genus", "terms", "_hash")

    def __init__(self, genus: int, terms: dict[ZMonomial, LambdaPoly] | None = None):
        self.genus = genus
        self.terms: dict[ZMonomial, LambdaPoly] = terms if terms is not None else {}
        self._hash = None

    # -- constructors -------------------------------------------------
    @classmethod
    def zero(cls, g: int) -> "WeylOperator":
        return cls(g)

    @classmethod
    def scalar(cls, g: int, c) -> "WeylOperator":
        if not isinstance(c, LambdaPoly):
            c = LambdaPoly.const(g, c)
        return cls(g, {ZMonomial.one(g): c} if c else {})

    @classmethod
    def identity(cls, g: int) -> "WeylOperator":
        return cls.scalar(g, 1)

    @classmethod
    def monomial(cls, g: int, z: dict[int, int] | None = None, d: dict[int, int] | None = None, coef=1) -> "WeylOperator":
        """Build ``coef * prod z_a^k * prod d_b^k`` from ``{odd index: power}`` maps."""
        ze, de = [0] * g, [0] * g
        for a, k in (z or {}).items():
            ze[z_slot(a)] += k
        for b, k in (d or {}).items():
            de[z_slot(b)] += k
        if not isinstance(coef, LambdaPoly):
            coef = LambdaPoly.const(g, coef)
        return cls(g, {ZMonomial(tuple(ze), tuple(de)): coef} if coef else {})

    @classmethod
    def z(cls, g: int, a: int) -> "WeylOperator":
        return cls.monomial(g, z={a: 1})

    @classmethod
    def d(cls, g: int, b: int) -> "WeylOperator":
        return cls.monomial(g, d={b: 1})

    # -- queries ------------------------------------------------------
    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, z: dict[int, int] | None = None, d: dict[int, int] | None = None) -> LambdaPoly:
        key = next(iter(WeylOperator.monomial(self.genus, z, d).terms))
        return self.terms.get(key, LambdaPoly.zero(self.genus))

    def order(self) -> int:
        return max((m.d_order() for m in self.terms), default=-1)

    def is_homogeneous(self, weight: int) -> bool:
        """Every ``coef * m`` has weight ``wt(coef) + wt(m) == weight``."""
        return all(c.is_homogeneous(weight - m.weight()) for m, c in self.terms.items())

    def constant_value(self):
        return None

    # -- arithmetic ---------------------------------------------------
    def _check(self, other: "WeylOperator") -> None:
        if other.genus != self.genus:
            raise GenusMismatchError(f"genus {self.genus} and genus {other.genus} operators")

    def __add__(self, other):
        if not isinstance(other, WeylOperator):
            if isinstance(other, (int, Rational, LambdaPoly)):
                other = WeylOperator.scalar(self.genus, other)
            else:
                return NotImplemented
        self._check(other)
        if not other.terms:
            return self
        out = dict(self.terms)
        for m, c in other.terms.items():
            _add_into(out, m, c)
        return WeylOperator(self.genus, out)

    __radd__ = __add__

    def __neg__(self) -> "WeylOperator":
        return WeylOperator(self.genus, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, WeylOperator):
            if isinstance(other, (int, Rational, LambdaPoly)):
                other = WeylOperator.scalar(self.genus, other)
            else:
                return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "WeylOperator":
        """Multiply by a rational or a parameter polynomial."""
        if isinstance(c, LambdaPoly):
            if c.genus != self.genus:
                raise GenusMismatchError(f"genus {self.genus} operator times genus {c.genus} polynomial")
            out = {}
            for m, v in self.terms.items():
                p = v * c
                if p:
                    out[m] = p
            return WeylOperator(self.genus, out)
        c = Fraction(c)
        if not c:
            return WeylOperator(self.genus)
        return WeylOperator(self.genus, {m: v.scale(c) for m, v in self.terms.items()})

    def compose(self, other: "WeylOperator") -> "WeylOperator":
        self._check(other)
        out: dict[ZMonomial, LambdaPoly] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                c12 = c1 * c2
                if not c12:
                    continue
                for m, k in _mono_product(m1, m2):
                    _add_into(out, m, c12 if k == 1 else c12.scale(k))
        return WeylOperator(self.genus, out)

    def __mul__(self, other):
        if isinstance(other, WeylOperator):
            return self.compose(other)
        if isinstance(other, (int, Rational, LambdaPoly)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Rational, LambdaPoly)):
            return self.scale(other)
        return NotImplemented

    def map_coefficients(self, fn) -> "WeylOperator":
        out = {}
        for m, c in self.terms.items():
            v = fn(c)
            if v:
                out[m] = v
        return WeylOperator(self.genus, out)

    def apply(self, f: "WeylOperator") -> "WeylOperator":
        """Act on a polynomial test function ``f`` in ``z`` (an operator without ``d``).

        Computed by differentiating monomials directly, independently of
        :meth:`compose`.
        """
        self._check(f)
        if any(any(m.d) for m in f.terms):
            raise ValueError("test function must be a polynomial in z only")
        out: dict[ZMonomial, LambdaPoly] = {}
        zero_d = (0,) * self.genus
        for m, c in self.terms.items():
            for fm, fc in f.terms.items():
                k = 1
                ne = []
                for a, b, e in zip(m.z, m.d, fm.z):
                    if b > e:
                        k = 0
                        break
                    k *= factorial(e) // factorial(e - b)
                    ne.append(a + e - b)
                if k:
                    _add_into(out, ZMonomial(tuple(ne), zero_d), (c * fc).scale(k))
        return WeylOperator(self.genus, out)

    # -- shape extraction ---------------------------------------------
    def part(self, z_order: int, d_order: int) -> "WeylOperator":
        return WeylOperator(
            self.genus,
            {m: c for m, c in self.terms.items() if m.z_order() == z_order and m.d_order() == d_order},
        )

    def alpha(self, a: int, b: int) -> LambdaPoly:
        """Symmetric ``alpha_{a,b}`` with ``H = 1/2 sum alpha d_a d_b + ...``."""
        c = self.coefficient(d={a: 1, b: 1} if a != b else {a: 2})
        return c.scale(2) if a == b else c

    def beta(self, a: int, b: int) -> LambdaPoly:
        """Coefficient of ``z_a d_b``."""
        return self.coefficient(z={a: 1}, d={b: 1})

    def gamma(self, a: int, b: int) -> LambdaPoly:
        """Symmetric ``gamma_{a,b}`` with ``H = ... + 1/2 sum gamma z_a z_b``."""
        c = self.coefficient(z={a: 1, b: 1} if a != b else {a: 2})
        return c.scale(2) if a == b else c

    def delta(self) -> LambdaPoly:
        return self.terms.get(ZMonomial.one(self.genus), LambdaPoly.zero(self.genus))

    # -- comparison / rendering ---------------------------------------
    def __eq__(self, other) -> bool:
        if not isinstance(other, WeylOperator):
            return NotImplemented
        return self.genus == other.genus and self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.genus, frozenset(self.terms.items())))
        return self._hash

    def sorted_terms(self) -> list[tuple[ZMonomial, LambdaPoly]]:
        return sorted(self.terms.items(), key=lambda t: t[0].sort_key())

    def expanded_terms(self) -> list[tuple[Fraction, list[str]]]:
        out = []
        for m, c in self.sorted_terms():
            mf = m.factors()
            for e, v in c.sorted_terms():
                out.append((v, c.monomial_factors(e) + mf))
        return out

    def render(self) -> str:
        return join_terms(self.expanded_terms(), " ")

    __str__ = render

    def __repr__(self) -> str:
        return f"WeylOperator(g={self.genus}, {self.render()!r})"

    def to_json(self) -> dict:
        return {
            "genus": self.genus,
            "terms": [
                {
                    "z": {f"z{2 * i + 1}": k for i, k in enumerate(m.z) if k},
                    "d": {f"d{2 * i + 1}": k for i, k in enumerate(m.d) if k},
                    "coef": c.to_json(),
                }
                for m, c in self.sorted_terms()
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "WeylOperator":
        g = data["genus"]
        out: dict[ZMonomial, LambdaPoly] = {}
        for t in data["terms"]:
            m = next(iter(cls.monomial(
                g,
                {int(k[1:]): v for k, v in t["z"].items()},
                {int(k[1:]): v for k, v in t["d"].items()},
            ).terms))
            _add_into(out, m, LambdaPoly.from_json(g, t["coef"]))
        return cls(g, out)


def weyl_compose(a: WeylOperator, b: WeylOperator) -> WeylOperator:
    return a.compose(b)


def weyl_commutator(a: WeylOperator, b: WeylOperator) -> WeylOperator:
    return a.compose(b) - b.compose(a)


class LambdaVectorField:
    """``sum_m coeffs[m] * d/dl(2m)`` for ``m = 2 .. 2g+1``.

    ``coeffs`` is a tuple of length ``2g``; entry ``m-2`` multiplies
    ``d/dl(2m)``.
    """

    __slots__ = ("genus", "coeffs")

    def __init__(self, genus: int, coeffs: Iterable[LambdaPoly] | None = None):
        self.genus = genus
        if coeffs is None:
            coeffs = [LambdaPoly.zero(genus)] * (2 * genus)
        self.coeffs: tuple[LambdaPoly, ...] = tuple(coeffs)
        if len(self.coeffs) != 2 * genus:
            raise ValueError("a vector field needs one coefficient per parameter")

    @classmethod
    def zero(cls, g: int) -> "LambdaVectorField":
        return cls(g)

    def coefficient(self, m: int) -> LambdaPoly:
        """Coefficient of ``d/dl(2m)``."""
        return self.coeffs[m - 2]

    def __bool__(self) -> bool:
        return any(self.coeffs)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def _check(self, other) -> None:
        if other.genus != self.genus:
            raise GenusMismatchError(f"genus {self.genus} and genus {other.genus} vector fields")

    def __call__(self, p: LambdaPoly) -> LambdaPoly:
        return self.apply(p)

    def apply(self, p: LambdaPoly) -> LambdaPoly:
        out = LambdaPoly.zero(self.genus)
        for m, c in enumerate(self.coeffs, start=2):
            if c:
                dp = p.diff(2 * m)
                if dp:
                    out = out + c * dp
        return out

    def act(self, op: WeylOperator) -> WeylOperator:
        """Apply the field coefficient-wise to an operator's parameter coefficients."""
        return op.map_coefficients(self.apply)

    def __add__(self, other: "LambdaVectorField") -> "LambdaVectorField":
        self._check(other)
        return LambdaVectorField(self.genus, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other: "LambdaVectorField") -> "LambdaVectorField":
        self._check(other)
        return LambdaVectorField(self.genus, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self) -> "LambdaVectorField":
        return LambdaVectorField(self.genus, [-a for a in self.coeffs])

    def scale(self, c) -> "LambdaVectorField":
        return LambdaVectorField(self.genus, [a * c for a in self.coeffs])

    def __mul__(self, c):
        if isinstance(c, (int, Rational, LambdaPoly)):
            return self.scale(c)
        return NotImplemented

    __rmul__ = __mul__

    def is_homogeneous(self, weight: int) -> bool:
        return all(c.is_homogeneous(weight + 2 * m) for m, c in enumerate(self.coeffs, start=2))

    def __eq__(self, other) -> bool:
        if not isinstance(other, LambdaVectorField):
            return NotImplemented
        return self.genus == other.genus and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.genus, self.coeffs))

    def expanded_terms(self) -> list[tuple[Fraction, list[str]]]:
        out = []
        for m, c in enumerate(self.coeffs, start=2):
            for e, v in c.sorted_terms():
                out.append((v, c.monomial_factors(e) + [f"dl{2 * m}"]))
        return out

    def render(self) -> str:
        return join_terms(self.expanded_terms(), " ")

    __str__ = render

    def __repr__(self) -> str:
        return f"LambdaVectorField(g={self.genus}, {self.render()!r})"

    def to_json(self) -> dict:
        return {
            "genus": self.genus,
            "coeffs": {f"dl{2 * m}": c.to_json() for m, c in enumerate(self.coeffs, start=2) if c},
        }

    @classmethod
    def from_json(cls, data: dict) -> "LambdaVectorField":
        g = data["genus"]
        coeffs = [LambdaPoly.zero(g)] * (2 * g)
        for name, c in data["coeffs"].items():
            idx = int(name[2:])
            if not is_lambda_index(g, idx):
                raise GenusMismatchError(f"{name} is not a genus-{g} direction")
            coeffs[idx // 2 - 2] = LambdaPoly.from_json(g, c)
        return cls(g, coeffs)


def vf_bracket(v: LambdaVectorField, w: LambdaVectorField) -> LambdaVectorField:
    """First-order bracket: coefficients ``V(W_m) - W(V_m)``."""
    v._check(w)
    return LambdaVectorField(v.genus, [v.apply(wm) - w.apply(vm) for vm, wm in zip(v.coeffs, w.coeffs)])


class SchrodingerOperator:
    """``Q = L - H`` with ``L`` a parameter vector field and ``H`` in the Weyl algebra."""

    __slots__ = ("l_part", "h_part", "weight")

    def __init__(self, l_part: LambdaVectorField, h_part: WeylOperator, weight: int | None = None):
        if l_part.genus != h_part.genus:
            raise GenusMismatchError("vector field and Weyl part of different genus")
        self.l_part = l_part
        self.h_part = h_part
        self.weight = weight

    @property
    def genus(self) -> int:
        return self.l_part.genus

    @classmethod
    def zero(cls, g: int, weight: int | None = None) -> "SchrodingerOperator":
        return cls(LambdaVectorField.zero(g), WeylOperator.zero(g), weight)

    def __add__(self, other: "SchrodingerOperator") -> "SchrodingerOperator":
        w = self.weight if self.weight == other.weight else None
        return SchrodingerOperator(self.l_part + other.l_part, self.h_part + other.h_part, w)

    def __sub__(self, other: "SchrodingerOperator") -> "SchrodingerOperator":
        w = self.weight if self.weight == other.weight else None
        return SchrodingerOperator(self.l_part - other.l_part, self.h_part - other.h_part, w)

    def __neg__(self) -> "SchrodingerOperator":
        return SchrodingerOperator(-self.l_part, -self.h_part, self.weight)

    def scale(self, c) -> "SchrodingerOperator":
        """Left multiplication by a rational or a parameter polynomial."""
        w = self.weight
        if isinstance(c, LambdaPoly):
            cw = c.weight()
            w = None if (w is None or cw is None) else w + cw
        return SchrodingerOperator(self.l_part.scale(c), self.h_part.scale(c), w)

    def __mul__(self, c):
        if isinstance(c, (int, Rational, LambdaPoly)):
            return self.scale(c)
        return NotImplemented

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return self.l_part.is_zero() and self.h_part.is_zero()

    def __bool__(self) -> bool:
        return not self.is_zero()

    def is_homogeneous(self, weight: int | None = None) -> bool:
        w = self.weight if weight is None else weight
        return self.l_part.is_homogeneous(w) and self.h_part.is_homogeneous(w)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SchrodingerOperator):
            return NotImplemented
        return self.l_part == other.l_part and self.h_part == other.h_part

    def __hash__(self) -> int:
        return hash((self.l_part, self.h_part))

    def render(self) -> str:
        terms = self.l_part.expanded_terms() + [(-c, f) for c, f in self.h_part.expanded_terms()]
        return join_terms(terms, " ")

    __str__ = render

    def __repr__(self) -> str:
        return f"SchrodingerOperator(weight={self.weight}, {self.render()!r})"

    def to_json(self) -> dict:
        return {"weight": self.weight, "L": self.l_part.to_json(), "H": self.h_part.to_json()}

    @classmethod
    def from_json(cls, data: dict) -> "SchrodingerOperator":
        return cls(LambdaVectorField.from_json(data["L"]), WeylOperator.from_json(data["H"]), data["weight"])


def q_commutator(qi: SchrodingerOperator, qj: SchrodingerOperator) -> SchrodingerOperator:
    """``[Qi, Qj]`` returned in ``L - H`` shape.

    L part ``[Li, Lj]``; H part ``Li(Hj) - Lj(Hi) - [Hi, Hj]``.
    """
    l_part = vf_bracket(qi.l_part, qj.l_part)
    h_part = qi.l_part.act(qj.h_part) - qj.l_part.act(qi.h_part) - weyl_commutator(qi.h_part, qj.h_part)
    w = None if qi.weight is None or qj.weight is None else qi.weight + qj.weight
    return SchrodingerOperator(l_part, h_part, w)


__all__ = [
    "ZMonomial",
    "WeylOperator",
    "LambdaVectorField",
    "SchrodingerOperator",
    "weyl_compose",
    "weyl_commutator",
    "vf_bracket",
    "q_commutator",
    "odd_indices",
    "format_fraction",
]
