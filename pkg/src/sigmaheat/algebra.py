"""Exact ring layer: graded polynomials in the curve parameters and
univariate polynomials in ``x`` over them.

Coefficients are :class:`fractions.Fraction` throughout.  A genus-``g``
polynomial ring has the ``2g`` variables ``l4, l6, ..., l(4g+2)``; slot
``p`` of an exponent vector belongs to ``l(2p+4)``, whose weight is
``2p+4``.  ``l0`` is folded to ``1`` and every other index outside the
variable set (``l2`` included) to ``0``.
"""
from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Callable, Iterable, Iterator

from .errors import (
    DivisionByZeroError,
    ExactDivisionError,
    GenusMismatchError,
    InvalidGenusError,
    UnsupportedDivisorError,
)

Exps = tuple[int, ...]


def check_genus(g) -> int:
    if isinstance(g, bool) or not isinstance(g, int) or g < 1:
        raise InvalidGenusError(f"genus must be an integer >= 1, got {g!r}")
    return g


def lambda_weights(g: int) -> list[int]:
    """Weights (= indices) of the parameter variables for genus ``g``."""
    return [2 * p + 4 for p in range(2 * g)]


def is_lambda_index(g: int, index: int) -> bool:
    return index % 2 == 0 and 4 <= index <= 4 * g + 2


def format_fraction(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def join_terms(terms: Iterable[tuple[Fraction, list[str]]], sep: str) -> str:
    """Render ``[(coef, factors), ...]`` as ``a - b + c``.

    Unit coefficients are dropped in front of a non-empty factor list.
    """
    out: list[str] = []
    for coef, factors in terms:
        neg = coef < 0
        mag = -coef if neg else coef
        pieces = list(factors)
        if mag != 1 or not pieces:
            pieces.insert(0, format_fraction(mag))
        body = sep.join(pieces)
        if not out:
            out.append(("-" if neg else "") + body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out) if out else "0"


def _power(name: str, e: int) -> str:
    return name if e == 1 else f"{name}^{e}"


class LambdaPoly:
    """Sparse polynomial in ``l4 .. l(4g+2)`` with rational coefficients.

    ``terms`` maps exponent tuples to nonzero Fractions.  Instances are
    treated as immutable.
    """

    __slots__ = ("genus", "terms", "_hash")

    def __init__(self, genus: int, terms: dict[Exps, Fraction] | None = None):
        self.genus = genus
        self.terms: dict[Exps, Fraction] = terms if terms is not None else {}
        self._hash = None

    # -- constructors -------------------------------------------------
    @classmethod
    def zero(cls, g: int) -> "LambdaPoly":
        return cls(g)

    @classmethod
    def const(cls, g: int, c) -> "LambdaPoly":
        c = Fraction(c)
        if c == 0:
            return cls(g)
        return cls(g, {(0,) * (2 * g): c})

    @classmethod
    def var(cls, g: int, index: int) -> "LambdaPoly":
        """``l<index>`` under the folding convention (``l0 = 1``, junk = 0)."""
        if index == 0:
            return cls.const(g, 1)
        if not is_lambda_index(g, index):
            return cls(g)
        e = [0] * (2 * g)
        e[(index - 4) // 2] = 1
        return cls(g, {tuple(e): Fraction(1)})

    @classmethod
    def from_terms(cls, g: int, items: Iterable[tuple[Exps, object]]) -> "LambdaPoly":
        out: dict[Exps, Fraction] = {}
        for e, c in items:
            c = Fraction(c)
            if c:
                s = out.get(e, 0) + c
                if s:
                    out[e] = s
                else:
                    out.pop(e, None)
        return cls(g, out)

    # -- basic queries ------------------------------------------------
    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def constant_value(self) -> Fraction | None:
        """The value if this polynomial is a constant, else ``None``."""
        if not self.terms:
            return Fraction(0)
        if len(self.terms) == 1:
            (e, c), = self.terms.items()
            if not any(e):
                return c
        return None

    def monomial_weight(self, e: Exps) -> int:
        return sum(k * (2 * p + 4) for p, k in enumerate(e))

    def weights(self) -> set[int]:
        return {self.monomial_weight(e) for e in self.terms}

    def weight(self) -> int | None:
        """Common weight of all monomials; ``None`` for zero or mixed."""
        w = self.weights()
        return w.pop() if len(w) == 1 else None

    def is_homogeneous(self, weight: int | None = None) -> bool:
        if not self.terms:
            return True
        w = self.weights()
        return len(w) == 1 and (weight is None or weight in w)

    def degree(self) -> int:
        """Total degree in the parameters (``-1`` for zero)."""
        return max((sum(e) for e in self.terms), default=-1)

    # -- arithmetic ---------------------------------------------------
    def _coerce(self, other) -> "LambdaPoly":
        if isinstance(other, LambdaPoly):
            if other.genus != self.genus:
                raise GenusMismatchError(
                    f"genus {self.genus} and genus {other.genus} operands"
                )
            return other
        if isinstance(other, (int, Rational)):
            return LambdaPoly.const(self.genus, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not other.terms:
            return self
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            else:
                del out[e]
        return LambdaPoly(self.genus, out)

    __radd__ = __add__

    def __neg__(self) -> "LambdaPoly":
        return LambdaPoly(self.genus, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def scale(self, c) -> "LambdaPoly":
        c = Fraction(c)
        if not c:
            return LambdaPoly(self.genus)
        return LambdaPoly(self.genus, {e: v * c for e, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Rational)):
            return self.scale(other)
        if not isinstance(other, LambdaPoly):
            return NotImplemented
        other = self._coerce(other)
        out: dict[Exps, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(e, 0) + c1 * c2
                if s:
                    out[e] = s
                else:
                    out.pop(e, None)
        return LambdaPoly(self.genus, out)

    def __rmul__(self, other):
        if isinstance(other, (int, Rational)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, n: int) -> "LambdaPoly":
        out = LambdaPoly.const(self.genus, 1)
        for _ in range(n):
            out = out * self
        return out

    def __truediv__(self, other):
        if isinstance(other, (int, Rational)):
            if other == 0:
                raise DivisionByZeroError("division of a polynomial by 0")
            return self.scale(Fraction(1) / Fraction(other))
        if isinstance(other, LambdaPoly):
            return self.exact_div(other)
        return NotImplemented

    def diff(self, index: int) -> "LambdaPoly":
        """Partial derivative along ``l<index>`` (zero for folded indices)."""
        if not is_lambda_index(self.genus, index):
            return LambdaPoly(self.genus)
        p = (index - 4) // 2
        out: dict[Exps, Fraction] = {}
        for e, c in self.terms.items():
            k = e[p]
            if k:
                ne = e[:p] + (k - 1,) + e[p + 1:]
                out[ne] = out.get(ne, 0) + c * k
        return LambdaPoly(self.genus, {e: c for e, c in out.items() if c})

    def substitute(self, point: dict[int, Fraction]) -> Fraction:
        """Evaluate at ``{index: value}``; missing variables count as zero."""
        vals = [Fraction(point.get(2 * p + 4, 0)) for p in range(2 * self.genus)]
        total = Fraction(0)
        for e, c in self.terms.items():
            t = c
            for v, k in zip(vals, e):
                if k:
                    t *= v**k
            total += t
        return total

    # -- exact division -----------------------------------------------
    def _leading(self) -> tuple[Exps, Fraction]:
        e = max(self.terms, key=lambda x: (sum(x), x))
        return e, self.terms[e]

    def exact_div(self, other: "LambdaPoly") -> "LambdaPoly":
        """Quotient of an exact multivariate division; raises otherwise."""
        other = self._coerce(other)
        if not other.terms:
            raise DivisionByZeroError("division by the zero polynomial")
        c = other.constant_value()
        if c is not None:
            return self.scale(1 / c)
        le, lc = other._leading()
        rem = self
        quot: dict[Exps, Fraction] = {}
        while rem.terms:
            e, ce = rem._leading()
            shift = tuple(a - b for a, b in zip(e, le))
            if any(s < 0 for s in shift):
                raise ExactDivisionError("polynomial division leaves a remainder")
            q = ce / lc
            quot[shift] = q
            rem = rem - LambdaPoly(self.genus, {shift: q}) * other
        return LambdaPoly(self.genus, quot)

    # -- comparison / hashing -----------------------------------------
    def __eq__(self, other) -> bool:
        if isinstance(other, LambdaPoly):
            return self.genus == other.genus and self.terms == other.terms
        if isinstance(other, (int, Rational)):
            return self.constant_value() == other
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.genus, frozenset(self.terms.items())))
        return self._hash

    # -- rendering ----------------------------------------------------
    def sort_key(self, e: Exps):
        return (self.monomial_weight(e), tuple(-k for k in reversed(e)))

    def sorted_terms(self) -> list[tuple[Exps, Fraction]]:
        return sorted(self.terms.items(), key=lambda t: self.sort_key(t[0]))

    def monomial_factors(self, e: Exps) -> list[str]:
        return [_power(f"l{2 * p + 4}", k) for p, k in enumerate(e) if k]

    def render(self, sep: str = "*") -> str:
        return join_terms(((c, self.monomial_factors(e)) for e, c in self.sorted_terms()), sep)

    __str__ = render

    def __repr__(self) -> str:
        return f"LambdaPoly(g={self.genus}, {self.render()!r})"

    def to_json(self) -> dict:
        return {
            "terms": [
                {"exps": {f"l{2 * p + 4}": k for p, k in enumerate(e) if k}, "coef": format_fraction(c)}
                for e, c in self.sorted_terms()
            ]
        }

    @classmethod
    def from_json(cls, g: int, data: dict) -> "LambdaPoly":
        items = []
        for t in data["terms"]:
            e = [0] * (2 * g)
            for name, k in t["exps"].items():
                idx = int(name[1:])
                if not is_lambda_index(g, idx):
                    raise GenusMismatchError(f"{name} is not a genus-{g} variable")
                e[(idx - 4) // 2] += k
            items.append((tuple(e), Fraction(t["coef"])))
        return cls.from_terms(g, items)


def lam(g: int, index: int) -> LambdaPoly:
    """``l<index>`` with the folding convention applied."""
    return LambdaPoly.var(g, index)


def strict_lam(g: int, index: int) -> LambdaPoly:
    """Like :func:`lam` but refuses indices outside ``{0, 4, ..., 4g+2}``."""
    if index != 0 and not is_lambda_index(g, index):
        raise ValueError(f"l{index} referenced outside the genus-{g} parameter set")
    return LambdaPoly.var(g, index)


class XPoly:
    """Univariate polynomial in ``x`` over a coefficient ring.

    The ring is anything with ``+``, ``-``, ``*`` and truthiness for zero:
    :class:`LambdaPoly` or :class:`~sigmaheat.weyl.WeylOperator`.  ``zero``
    is a zero element of that ring.
    """

    __slots__ = ("coeffs", "zero")

    def __init__(self, coeffs: Iterable, zero):
        cs = list(coeffs)
        while cs and not cs[-1]:
            cs.pop()
        self.coeffs = cs
        self.zero = zero

    @classmethod
    def monomial(cls, coef, n: int, zero) -> "XPoly":
        return cls([zero] * n + [coef], zero)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def coeff(self, n: int):
        return self.coeffs[n] if 0 <= n < len(self.coeffs) else self.zero

    def lead(self):
        return self.coeffs[-1] if self.coeffs else self.zero

    def __iter__(self) -> Iterator:
        return iter(self.coeffs)

    def map(self, fn: Callable, zero=None) -> "XPoly":
        return XPoly([fn(c) for c in self.coeffs], self.zero if zero is None else zero)

    def __add__(self, other: "XPoly") -> "XPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        return XPoly([self.coeff(i) + other.coeff(i) for i in range(n)], self.zero)

    def __neg__(self) -> "XPoly":
        return XPoly([-c for c in self.coeffs], self.zero)

    def __sub__(self, other: "XPoly") -> "XPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        return XPoly([self.coeff(i) - other.coeff(i) for i in range(n)], self.zero)

    def __mul__(self, other) -> "XPoly":
        if not isinstance(other, XPoly):
            return XPoly([c * other for c in self.coeffs], self.zero * other)
        zero = self.zero * other.zero
        if not self.coeffs or not other.coeffs:
            return XPoly([], zero)
        out = [zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                if b:
                    out[i + j] = out[i + j] + a * b
        return XPoly(out, zero)

    def __rmul__(self, other) -> "XPoly":
        return XPoly([other * c for c in self.coeffs], other * self.zero)

    def shift(self, n: int) -> "XPoly":
        """Multiply by ``x**n``."""
        if not self.coeffs:
            return self
        return XPoly([self.zero] * n + self.coeffs, self.zero)

    def derivative(self) -> "XPoly":
        return XPoly([c * i for i, c in enumerate(self.coeffs)][1:], self.zero)

    def __eq__(self, other) -> bool:
        if not isinstance(other, XPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(tuple(self.coeffs))

    def render(self) -> str:
        parts = []
        for n in range(self.degree, -1, -1):
            c = self.coeffs[n]
            if c:
                xs = "" if n == 0 else ("x" if n == 1 else f"x^{n}")
                parts.append(f"({c})" + (f"*{xs}" if xs else ""))
        return " + ".join(parts) if parts else "0"

    __str__ = render

    def __repr__(self) -> str:
        return f"XPoly({self.render()!r})"


def _constant_of(c) -> Fraction | None:
    if isinstance(c, (int, Rational)):
        return Fraction(c)
    getter = getattr(c, "constant_value", None)
    return getter() if getter else None


def euclid_div(a: XPoly, b: XPoly) -> tuple[XPoly, XPoly]:
    """Euclidean division ``a = q*b + r`` with ``deg r < deg b``.

    Only divisors whose leading coefficient is a nonzero rational constant
    are supported; the coefficient ring of ``a`` may be any ring that can
    be multiplied by the coefficients of ``b``.
    """
    if b.is_zero():
        raise DivisionByZeroError("Euclidean division by the zero polynomial")
    lc = _constant_of(b.lead())
    if lc is None or lc == 0:
        raise UnsupportedDivisorError("leading coefficient of the divisor is not a constant")
    inv = Fraction(1) / lc
    db = b.degree
    zero = a.zero
    rem = list(a.coeffs)
    if len(rem) <= db:
        return XPoly([], zero), XPoly(rem, zero)
    quot = [zero] * (len(rem) - db)
    for d in range(len(rem) - db - 1, -1, -1):
        t = rem[d + db]
        if not t:
            continue
        t = t * inv
        quot[d] = t
        for i, bc in enumerate(b.coeffs):
            if bc:
                rem[d + i] = rem[d + i] - t * bc
    return XPoly(quot, zero), XPoly(rem[:db], zero)


def quo(a: XPoly, b: XPoly) -> XPoly:
    return euclid_div(a, b)[0]


def rem(a: XPoly, b: XPoly) -> XPoly:
    return euclid_div(a, b)[1]


def x_power(g: int, n: int) -> XPoly:
    return XPoly.monomial(LambdaPoly.const(g, 1), n, LambdaPoly.zero(g))


def curve_poly(g: int) -> XPoly:
    """``x^(2g+1) + sum_k l_{2(2g+1-k)} x^k`` for ``k = 0 .. 2g-1``."""
    check_genus(g)
    coeffs = [lam(g, 2 * (2 * g + 1 - k)) for k in range(2 * g)]
    coeffs += [LambdaPoly.zero(g), LambdaPoly.const(g, 1)]
    return XPoly(coeffs, LambdaPoly.zero(g))


def xpoly_is_homogeneous(p: XPoly, total: int, x_weight: int = 2) -> bool:
    """Weight-homogeneity of a parameter-coefficient x-polynomial."""
    for n, c in enumerate(p.coeffs):
        if c and not c.is_homogeneous(total - x_weight * n):
            return False
    return True
