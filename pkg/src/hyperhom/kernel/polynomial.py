"""Multivariate polynomials over a prime field GF(p).

A polynomial is stored as a mapping ``monomial -> coefficient`` where a
monomial is a tuple of non-negative exponents, one per ring variable, and
coefficients are integers in ``range(1, p)``.  Zero coefficients are never
stored, so the zero polynomial has an empty term mapping.

Terms are ordered by graded reverse lexicographic order with respect to the
variable list; :func:`grevlex_rank` maps a monomial to a key that sorts
ascending in *descending* term order (the leading term sorts first).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache

DEFAULT_CHARACTERISTIC = 32003


class ContextMismatch(ValueError):
    """Operands live in different polynomial rings."""


class ParseError(ValueError):
    """Malformed polynomial expression."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


@lru_cache(maxsize=None)
def grevlex_rank(mon: tuple[int, ...]) -> tuple:
    """Sort key: ascending order of keys is descending grevlex order."""
    return (-sum(mon), mon[::-1])


def mon_mul(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    return tuple([x + y for x, y in zip(a, b)])


def mon_divides(a: tuple[int, ...], b: tuple[int, ...]) -> bool:
    """True if monomial ``a`` divides ``b``."""
    for x, y in zip(a, b):
        if x > y:
            return False
    return True


def mon_div(b: tuple[int, ...], a: tuple[int, ...]) -> tuple[int, ...]:
    return tuple([y - x for x, y in zip(a, b)])


def mon_lcm(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    return tuple([x if x > y else y for x, y in zip(a, b)])


@dataclass(frozen=True)
class PolyRing:
    """The ambient polynomial ring k[x_1..x_n] with k = GF(p)."""

    variables: tuple[str, ...]
    p: int = DEFAULT_CHARACTERISTIC
    _index: dict = field(default=None, compare=False, hash=False, repr=False)

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"characteristic {self.p} is not prime")
        names = tuple(self.variables)
        if len(set(names)) != len(names):
            raise ValueError("duplicate variable names")
        for v in names:
            if not re.fullmatch(r"[A-Za-z_][A-Za-z_0-9]*", v):
                raise ValueError(f"bad variable name {v!r}")
        object.__setattr__(self, "variables", names)
        object.__setattr__(self, "_index", {v: i for i, v in enumerate(names)})

    @property
    def nvars(self) -> int:
        return len(self.variables)

    @property
    def one_mon(self) -> tuple[int, ...]:
        return (0,) * len(self.variables)

    def var_mon(self, i: int) -> tuple[int, ...]:
        e = [0] * len(self.variables)
        e[i] = 1
        return tuple(e)

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return Polynomial(self, {self.one_mon: 1})

    def constant(self, c: int) -> "Polynomial":
        c %= self.p
        return Polynomial(self, {self.one_mon: c} if c else {})

    def var(self, name: str) -> "Polynomial":
        try:
            i = self._index[name]
        except KeyError:
            raise ValueError(f"unknown variable {name!r}") from None
        return Polynomial(self, {self.var_mon(i): 1})

    def gens(self) -> list["Polynomial"]:
        return [self.var(v) for v in self.variables]

    def parse(self, text: str) -> "Polynomial":
        return parse_polynomial(text, self)


class Polynomial:
    """An immutable polynomial; see the module docstring for the encoding."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: PolyRing, terms: dict):
        self.ring = ring
        self.terms = terms

    # -- inspection -------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def sorted_terms(self) -> list[tuple[int, tuple[int, ...]]]:
        """(coefficient, monomial) pairs, strictly descending in grevlex."""
        return [(self.terms[m], m) for m in sorted(self.terms, key=grevlex_rank)]

    def leading_monomial(self):
        if not self.terms:
            return None
        return min(self.terms, key=grevlex_rank)

    def leading_coefficient(self) -> int:
        m = self.leading_monomial()
        return 0 if m is None else self.terms[m]

    def degrees(self) -> set[int]:
        return {sum(m) for m in self.terms}

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    @property
    def degree(self):
        """Homogeneous degree, or None for the zero or an inhomogeneous polynomial."""
        ds = self.degrees()
        return ds.pop() if len(ds) == 1 else None

    def is_constant(self) -> bool:
        return all(sum(m) == 0 for m in self.terms)

    # -- arithmetic -------------------------------------------------------
    def _check(self, other: "Polynomial"):
        if other.ring != self.ring:
            raise ContextMismatch("polynomials from different rings")

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        if isinstance(other, int):
            return self.ring.constant(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Polynomial(self.ring, poly_add(self.terms, other.terms, self.ring.p))

    __radd__ = __add__

    def __neg__(self):
        p = self.ring.p
        return Polynomial(self.ring, {m: p - c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Polynomial(self.ring, poly_mul(self.terms, other.terms, self.ring.p))

    __rmul__ = __mul__

    def scale(self, c: int) -> "Polynomial":
        return Polynomial(self.ring, poly_scale(self.terms, c, self.ring.p))

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative exponent")
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ring.constant(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        return hash((self.ring.variables, self.ring.p, frozenset(self.terms.items())))

    def derivative(self, i: int) -> "Polynomial":
        p = self.ring.p
        out = {}
        for m, c in self.terms.items():
            if m[i]:
                cc = c * m[i] % p
                if cc:
                    e = list(m)
                    e[i] -= 1
                    out[tuple(e)] = cc
        return Polynomial(self.ring, out)

    def __str__(self):
        return format_terms(self.terms, self.ring)

    def __repr__(self):
        return f"Polynomial({self})"


# -- dict-level helpers, shared with the module code ------------------------

def poly_add(a: dict, b: dict, p: int) -> dict:
    out = dict(a)
    for m, c in b.items():
        s = (out.get(m, 0) + c) % p
        if s:
            out[m] = s
        else:
            out.pop(m, None)
    return out


def poly_scale(a: dict, c: int, p: int) -> dict:
    c %= p
    if not c:
        return {}
    return {m: v * c % p for m, v in a.items()}


def poly_mul(a: dict, b: dict, p: int) -> dict:
    out: dict = {}
    for ma, ca in a.items():
        for mb, cb in b.items():
            m = tuple([x + y for x, y in zip(ma, mb)])
            s = (out.get(m, 0) + ca * cb) % p
            if s:
                out[m] = s
            else:
                out.pop(m, None)
    return out


def format_terms(terms: dict, ring: PolyRing) -> str:
    if not terms:
        return "0"
    p = ring.p
    pieces = []
    for m in sorted(terms, key=grevlex_rank):
        c = terms[m]
        sign = "+"
        if c > p // 2:
            sign, c = "-", p - c
        factors = []
        for v, e in zip(ring.variables, m):
            if e == 1:
                factors.append(v)
            elif e > 1:
                factors.append(f"{v}^{e}")
        body = "*".join(factors)
        if not body:
            body = str(c)
        elif c != 1:
            body = f"{c}*{body}"
        pieces.append((sign, body))
    out = ("-" if pieces[0][0] == "-" else "") + pieces[0][1]
    for sign, body in pieces[1:]:
        out += f" {sign} {body}"
    return out


# -- parser -----------------------------------------------------------------

_TOKEN = re.compile(r"(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.)")


def _tokenize(text: str):
    pos = 0
    tokens = []
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        start = pos
        if m.group(1) is not None:
            tokens.append(("int", int(m.group(1)), start))
        elif m.group(2) is not None:
            tokens.append(("name", m.group(2), start))
        else:
            ch = m.group(3)
            if ch not in "+-*^()":
                raise ParseError(f"unexpected character {ch!r}", start)
            tokens.append(("op", ch, start))
        pos = m.end()
    tokens.append(("end", None, len(text)))
    return tokens


class _Parser:
    # expr   := ['+'|'-'] term (('+'|'-') term)*
    # term   := factor ('*' factor)*
    # factor := atom ('^' int)?
    # atom   := int | name | '(' expr ')' | '-' atom
    def __init__(self, text: str, ring: PolyRing):
        self.tokens = _tokenize(text)
        self.i = 0
        self.ring = ring

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_end(self):
        kind, val, pos = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected token {val!r}", pos)

    def expr(self) -> Polynomial:
        kind, val, _ = self.peek()
        negate = False
        if kind == "op" and val in "+-":
            self.take()
            negate = val == "-"
        acc = self.term()
        if negate:
            acc = -acc
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                t = self.term()
                acc = acc + t if val == "+" else acc - t
            else:
                return acc

    def term(self) -> Polynomial:
        acc = self.factor()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val == "*":
                self.take()
                acc = acc * self.factor()
            else:
                return acc

    def factor(self) -> Polynomial:
        base = self.atom()
        kind, val, _ = self.peek()
        if kind == "op" and val == "^":
            self.take()
            kind, val, pos = self.take()
            if kind != "int":
                raise ParseError("exponent must be a non-negative integer", pos)
            base = base ** val
        return base

    def atom(self) -> Polynomial:
        kind, val, pos = self.take()
        if kind == "int":
            return self.ring.constant(val)
        if kind == "name":
            if val not in self.ring.variables:
                raise ParseError(f"unknown variable {val!r}", pos)
            return self.ring.var(val)
        if kind == "op" and val == "(":
            inner = self.expr()
            kind, val, pos = self.take()
            if not (kind == "op" and val == ")"):
                raise ParseError("expected ')'", pos)
            return inner
        if kind == "op" and val == "-":
            return -self.atom()
        if kind == "end":
            raise ParseError("unexpected end of expression", pos)
        raise ParseError(f"unexpected token {val!r}", pos)


def parse_polynomial(text: str, ring: PolyRing | None) -> Polynomial:
    """Parse ``text`` into a canonical polynomial of ``ring``.

    Grammar: integer literals, variable names, binary ``+ - * ^``, unary
    minus and parentheses.  Whitespace is ignored.  Integer literals are
    reduced modulo the characteristic.
    """
    if ring is None:
        raise ValueError("characteristic not set: no ring context given")
    parser = _Parser(text, ring)
    if parser.peek()[0] == "end":
        raise ParseError("empty expression", 0)
    out = parser.expr()
    parser.expect_end()
    return out


def polynomial_arithmetic(op: str, a: Polynomial, b) -> Polynomial:
    """add | sub | mul of two polynomials, or scale by a field element."""
    if op == "scale":
        return a.scale(int(b))
    if not isinstance(b, Polynomial) or b.ring != a.ring:
        raise ContextMismatch("operands live in different polynomial rings")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown operation {op!r}")
