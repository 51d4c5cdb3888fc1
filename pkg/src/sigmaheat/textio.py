"""Parser for the published-table text grammar.

Grammar (whitespace between factors means multiplication)::

    expr    := ['+'|'-'] term (('+'|'-') term)*
    term    := power (['*'] power | '/' INT)*
    power   := primary ['^' INT]
    primary := INT | ATOM | '(' expr ')'
    ATOM    := l<n> | z<n> | d<n> | dl<n> | L<n> | psi{i,j,...}

Products are read as normal-ordered symbols: a ``d<a>`` may not stand to
the left of ``z<a>`` or of any ``psi`` atom in the same product.
"""
from __future__ import annotations

import re
from fractions import Fraction

from .algebra import LambdaPoly, is_lambda_index
from .errors import ParseError
from .weyl import LambdaVectorField, WeylOperator, ZMonomial, z_slot

Monomial = tuple[tuple[str, int], ...]
Expr = dict[Monomial, Fraction]

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+)|(?P<atom>psi\{\d+(?:,\d+)*\}|dl\d+|[lzdL]\d+)|(?P<op>[-+*/^()]))"
)


def tokenize(text: str) -> list[tuple[str, str]]:
    pos = 0
    out = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected input at {pos}: {text[pos:pos + 20]!r}")
        kind = m.lastgroup
        out.append((kind, m.group(kind)))
        pos = m.end()
    return out


def _atom_kind(name: str) -> str:
    if name.startswith("psi"):
        return "psi"
    if name.startswith("dl"):
        return "dl"
    return name[0]


def _violates_order(left: Monomial, right: Monomial) -> bool:
    left_d = {name[1:] for name, _ in left if _atom_kind(name) == "d"}
    if not left_d:
        return False
    for name, _ in right:
        kind = _atom_kind(name)
        if kind == "psi" or (kind == "z" and name[1:] in left_d):
            return True
    return False


def _mul(a: Expr, b: Expr) -> Expr:
    out: Expr = {}
    for ma, ca in a.items():
        for mb, cb in b.items():
            if _violates_order(ma, mb):
                raise ParseError("product is not normal ordered (d before z or psi)")
            acc = dict(ma)
            for name, e in mb:
                acc[name] = acc.get(name, 0) + e
            key = tuple(sorted(acc.items()))
            s = out.get(key, 0) + ca * cb
            if s:
                out[key] = s
            else:
                out.pop(key, None)
    return out


def _add(a: Expr, b: Expr, sign: int = 1) -> Expr:
    out = dict(a)
    for m, c in b.items():
        s = out.get(m, 0) + sign * c
        if s:
            out[m] = s
        else:
            out.pop(m, None)
    return out


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def parse(self) -> Expr:
        e = self.expr()
        if self.i != len(self.toks):
            raise ParseError(f"trailing input near token {self.peek()[1]!r}")
        return e

    def expr(self) -> Expr:
        sign = 1
        kind, val = self.peek()
        if kind == "op" and val in "+-":
            self.take()
            sign = -1 if val == "-" else 1
        acc = _add({}, self.term(), sign)
        while True:
            kind, val = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                acc = _add(acc, self.term(), -1 if val == "-" else 1)
            else:
                return acc

    def term(self) -> Expr:
        acc = self.power()
        while True:
            kind, val = self.peek()
            if kind == "op" and val == "*":
                self.take()
                acc = _mul(acc, self.power())
            elif kind == "op" and val == "/":
                self.take()
                k2, v2 = self.take()
                if k2 != "num" or int(v2) == 0:
                    raise ParseError("division only by a nonzero integer")
                acc = {m: c / int(v2) for m, c in acc.items()}
            elif kind in ("num", "atom") or (kind == "op" and val == "("):
                acc = _mul(acc, self.power())
            else:
                return acc

    def power(self) -> Expr:
        base = self.primary()
        kind, val = self.peek()
        if kind == "op" and val == "^":
            self.take()
            k2, v2 = self.take()
            if k2 != "num":
                raise ParseError("exponent must be an integer")
            out: Expr = {(): Fraction(1)}
            for _ in range(int(v2)):
                out = _mul(out, base)
            return out
        return base

    def primary(self) -> Expr:
        kind, val = self.take()
        if kind == "num":
            return {(): Fraction(int(val))} if int(val) else {}
        if kind == "atom":
            return {((val, 1),): Fraction(1)}
        if kind == "op" and val == "(":
            e = self.expr()
            k2, v2 = self.take()
            if (k2, v2) != ("op", ")"):
                raise ParseError("missing ')'")
            return e
        raise ParseError(f"unexpected token {val!r}")


def parse_expr(text: str) -> Expr:
    return _Parser(text).parse()


# -- conversion into typed objects ------------------------------------------

def _lambda_exps(g: int, atoms: list[tuple[str, int]]) -> tuple[int, ...] | None:
    """Exponent tuple for the ``l`` atoms; ``None`` when a folded ``l2``-type atom kills it."""
    e = [0] * (2 * g)
    for name, k in atoms:
        idx = int(name[1:])
        if idx == 0:
            continue
        if not is_lambda_index(g, idx):
            if idx % 2 == 0 and idx < 4 * g + 4:
                return None
            raise ParseError(f"{name} is not a genus-{g} parameter")
        e[(idx - 4) // 2] += k
    return tuple(e)


def _split(mono: Monomial) -> dict[str, list[tuple[str, int]]]:
    out: dict[str, list[tuple[str, int]]] = {}
    for name, k in mono:
        out.setdefault(_atom_kind(name), []).append((name, k))
    return out


def _odd_exps(g: int, atoms: list[tuple[str, int]]) -> tuple[int, ...]:
    e = [0] * g
    for name, k in atoms:
        a = int(name[1:])
        if a % 2 == 0 or not 1 <= a <= 2 * g - 1:
            raise ParseError(f"{name} is not a genus-{g} coordinate")
        e[z_slot(a)] += k
    return tuple(e)


def _only(parts: dict, allowed: set[str], what: str) -> None:
    extra = set(parts) - allowed
    if extra:
        raise ParseError(f"{what} cannot contain {sorted(extra)} atoms")


def to_lambda_poly(expr: Expr, g: int) -> LambdaPoly:
    items = []
    for mono, c in expr.items():
        parts = _split(mono)
        _only(parts, {"l"}, "a parameter polynomial")
        e = _lambda_exps(g, parts.get("l", []))
        if e is not None:
            items.append((e, c))
    return LambdaPoly.from_terms(g, items)


def parse_lambda_poly(text: str, g: int) -> LambdaPoly:
    return to_lambda_poly(parse_expr(text), g)


def to_weyl(expr: Expr, g: int) -> WeylOperator:
    out = WeylOperator.zero(g)
    for mono, c in expr.items():
        parts = _split(mono)
        _only(parts, {"l", "z", "d"}, "a Weyl operator")
        e = _lambda_exps(g, parts.get("l", []))
        if e is None:
            continue
        m = ZMonomial(_odd_exps(g, parts.get("z", [])), _odd_exps(g, parts.get("d", [])))
        out = out + WeylOperator(g, {m: LambdaPoly(g, {e: c})})
    return out


def parse_weyl(text: str, g: int) -> WeylOperator:
    return to_weyl(parse_expr(text), g)


def to_vector_field(expr: Expr, g: int) -> LambdaVectorField:
    coeffs = [LambdaPoly.zero(g)] * (2 * g)
    for mono, c in expr.items():
        parts = _split(mono)
        _only(parts, {"l", "dl"}, "a parameter vector field")
        dls = parts.get("dl", [])
        if len(dls) != 1 or dls[0][1] != 1:
            raise ParseError("each vector-field term needs exactly one dl<n> factor")
        idx = int(dls[0][0][2:])
        if not is_lambda_index(g, idx):
            raise ParseError(f"{dls[0][0]} is not a genus-{g} direction")
        e = _lambda_exps(g, parts.get("l", []))
        if e is not None:
            coeffs[idx // 2 - 2] = coeffs[idx // 2 - 2] + LambdaPoly(g, {e: c})
    return LambdaVectorField(g, coeffs)


def parse_vector_field(text: str, g: int) -> LambdaVectorField:
    return to_vector_field(parse_expr(text), g)


def psi_index(name: str) -> tuple[int, ...]:
    return tuple(sorted(int(x) for x in name[4:-1].split(",")))
