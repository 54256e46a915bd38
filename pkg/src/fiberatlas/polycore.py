"""Exact arithmetic foundation.

Sparse multivariate polynomials over the rationals, polynomial matrices with
exact determinants, Sylvester resultants, and univariate real root isolation
by Descartes'-rule bisection.  No floating point anywhere: every sign
decision is made over Q.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import gcd as _igcd

Q = Fraction


class RingMismatchError(ValueError):
    pass


@dataclass(frozen=True)
class Ring:
    """Variable-count descriptor: m fiber variables X1..Xm, n parameters Y1..Yn."""

    m: int
    n: int

    @property
    def nvars(self) -> int:
        return self.m + self.n

    def var_name(self, i: int) -> str:
        if not 0 <= i < self.nvars:
            raise IndexError(f"variable index {i} out of range for {self}")
        if i < self.m:
            return f"X{i + 1}"
        return f"Y{i - self.m + 1}"

    def var_index(self, name: str) -> int:
        mo = re.fullmatch(r"([XY])(\d+)", name)
        if mo is None:
            raise ValueError(f"bad variable name {name!r}")
        k = int(mo.group(2))
        if k < 1:
            raise ValueError(f"bad variable name {name!r}")
        if mo.group(1) == "X":
            if k > self.m:
                raise ValueError(f"variable {name} not in ring with m={self.m}")
            return k - 1
        if k > self.n:
            raise ValueError(f"variable {name} not in ring with n={self.n}")
        return self.m + k - 1


class Polynomial:
    """Sparse multivariate polynomial with exact rational coefficients.

    Terms map exponent tuples (length ring.nvars) to nonzero Fractions.
    Instances are immutable; all operations return new polynomials.
    """

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: Ring, terms=None):
        object.__setattr__(self, "ring", ring)
        clean = {}
        if terms:
            for mono, c in terms.items():
                c = Q(c)
                if c != 0:
                    clean[tuple(mono)] = c
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, *a):
        raise AttributeError("Polynomial is immutable")

    # -- constructors -------------------------------------------------

    @staticmethod
    def constant(ring: Ring, c) -> "Polynomial":
        return Polynomial(ring, {(0,) * ring.nvars: Q(c)})

    @staticmethod
    def variable(ring: Ring, i: int) -> "Polynomial":
        if not 0 <= i < ring.nvars:
            raise IndexError(f"variable index {i} out of range")
        mono = [0] * ring.nvars
        mono[i] = 1
        return Polynomial(ring, {tuple(mono): Q(1)})

    # -- basic predicates ---------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(all(e == 0 for e in mono) for mono in self.terms)

    def constant_value(self) -> Q:
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return self.terms.get((0,) * self.ring.nvars, Q(0))

    def total_degree(self) -> int:
        if not self.terms:
            return 0
        return max(sum(mono) for mono in self.terms)

    def degree_in(self, var: int) -> int:
        if not self.terms:
            return 0
        return max(mono[var] for mono in self.terms)

    def variables(self):
        """Indices of variables actually occurring."""
        used = set()
        for mono in self.terms:
            for i, e in enumerate(mono):
                if e:
                    used.add(i)
        return sorted(used)

    # -- arithmetic ---------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise RingMismatchError(f"{self.ring} vs {other.ring}")
            return other
        if isinstance(other, (int, Q)):
            return Polynomial.constant(self.ring, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        terms = dict(self.terms)
        for mono, c in other.terms.items():
            terms[mono] = terms.get(mono, Q(0)) + c
        return Polynomial(self.ring, terms)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.ring, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        terms = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                mono = tuple(a + b for a, b in zip(m1, m2))
                terms[mono] = terms.get(mono, Q(0)) + c1 * c2
        return Polynomial(self.ring, terms)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = Polynomial.constant(self.ring, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- equality / hashing -------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Q)):
            other = Polynomial.constant(self.ring, other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash((self.ring, frozenset(self.terms.items())))
            object.__setattr__(self, "_hash", h)
        return h

    # -- calculus and evaluation --------------------------------------

    def derivative(self, var: int) -> "Polynomial":
        if not 0 <= var < self.ring.nvars:
            raise IndexError(f"variable index {var} out of range")
        terms = {}
        for mono, c in self.terms.items():
            e = mono[var]
            if e == 0:
                continue
            new = list(mono)
            new[var] = e - 1
            new = tuple(new)
            terms[new] = terms.get(new, Q(0)) + c * e
        return Polynomial(self.ring, terms)

    def substitute(self, assignment) -> "Polynomial":
        """Substitute rationals for a subset of the variables.

        The result lives in the same ring; assigned variables simply no
        longer occur.  A full assignment yields a constant polynomial.
        """
        for i in assignment:
            if not 0 <= i < self.ring.nvars:
                raise IndexError(f"variable index {i} out of range")
        terms = {}
        for mono, c in self.terms.items():
            coeff = c
            new = list(mono)
            for i, val in assignment.items():
                e = mono[i]
                if e:
                    coeff *= Q(val) ** e
                    new[i] = 0
            if coeff == 0:
                continue
            new = tuple(new)
            terms[new] = terms.get(new, Q(0)) + coeff
        return Polynomial(self.ring, terms)

    def substitute_poly(self, assignment) -> "Polynomial":
        """Substitute polynomials (same ring) for variables."""
        result = Polynomial(self.ring)
        for mono, c in self.terms.items():
            term = Polynomial.constant(self.ring, c)
            for i, e in enumerate(mono):
                if e == 0:
                    continue
                if i in assignment:
                    term = term * (assignment[i] ** e)
                else:
                    term = term * (Polynomial.variable(self.ring, i) ** e)
            result = result + term
        return result

    def eval_at(self, point) -> Q:
        """Exact value at a full rational assignment (sequence of length nvars)."""
        if len(point) != self.ring.nvars:
            raise ValueError("point dimension does not match ring")
        point = [Q(v) for v in point]
        total = Q(0)
        for mono, c in self.terms.items():
            v = c
            for i, e in enumerate(mono):
                if e:
                    v *= point[i] ** e
            total += v
        return total

    def coeffs_in(self, var: int):
        """Coefficients of self as a univariate polynomial in `var`,
        ascending; entries are polynomials not involving `var`."""
        d = self.degree_in(var)
        buckets = [dict() for _ in range(d + 1)]
        for mono, c in self.terms.items():
            e = mono[var]
            rest = list(mono)
            rest[var] = 0
            rest = tuple(rest)
            buckets[e][rest] = buckets[e].get(rest, Q(0)) + c
        return [Polynomial(self.ring, b) for b in buckets]

    # -- display ------------------------------------------------------

    def __repr__(self):
        return f"Polynomial({self.to_text()!r})"

    def to_text(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for mono, c in sorted(self.terms.items(), key=lambda t: (-sum(t[0]), t[0])):
            factors = []
            for i, e in enumerate(mono):
                if e == 1:
                    factors.append(self.ring.var_name(i))
                elif e > 1:
                    factors.append(f"{self.ring.var_name(i)}^{e}")
            ac = abs(c)
            if not factors:
                body = str(ac)
            elif ac == 1:
                body = "*".join(factors)
            else:
                body = "*".join([str(ac)] + factors)
            if not parts:
                parts.append(body if c > 0 else f"-{body}")
            else:
                parts.append(f"+ {body}" if c > 0 else f"- {body}")
        return " ".join(parts)


def sign_at(f: Polynomial, point) -> int:
    """Exact sign of f at a full rational assignment: -1, 0, or +1."""
    v = f.eval_at(point)
    return (v > 0) - (v < 0)


# ---------------------------------------------------------------------------
# Expression parsing (shared grammar: variables X1..Xm / Y1..Yn, rational
# literals p/q, operators + - * ^, parentheses).
# ---------------------------------------------------------------------------

class ParseError(ValueError):
    def __init__(self, message, pos):
        super().__init__(f"{message} (at position {pos})")
        self.pos = pos


_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>\d+(?:\s*/\s*\d+)?)|(?P<var>[XY]\d+)|(?P<op>[-+*^()]))"
)


def tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        mo = _TOKEN_RE.match(text, pos)
        if mo is None or mo.end() == pos:
            if text[pos:].strip() == "":
                break
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        if mo.group("num"):
            lit = mo.group("num").replace(" ", "")
            tokens.append(("num", Q(lit), mo.start()))
        elif mo.group("var"):
            tokens.append(("var", mo.group("var"), mo.start()))
        else:
            tokens.append(("op", mo.group("op"), mo.start()))
        pos = mo.end()
    tokens.append(("end", None, len(text)))
    return tokens


# AST nodes for the expression grammar, reused by the SLP parser.
@dataclass(frozen=True)
class ENum:
    value: Q


@dataclass(frozen=True)
class EVar:
    name: str


@dataclass(frozen=True)
class EAdd:
    left: object
    right: object


@dataclass(frozen=True)
class ESub:
    left: object
    right: object


@dataclass(frozen=True)
class EMul:
    left: object
    right: object


@dataclass(frozen=True)
class EPow:
    base: object
    exponent: int


@dataclass(frozen=True)
class ENeg:
    operand: object


class _ExprParser:
    def __init__(self, tokens):
        self.tokens = tokens
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def next(self):
        t = self.tokens[self.i]
        self.i += 1
        return t

    def expect_op(self, op):
        kind, val, pos = self.next()
        if kind != "op" or val != op:
            raise ParseError(f"expected {op!r}", pos)

    def parse_expr(self):
        node = self.parse_term()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.next()
                rhs = self.parse_term()
                node = EAdd(node, rhs) if val == "+" else ESub(node, rhs)
            else:
                return node

    def parse_term(self):
        node = self.parse_factor()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val == "*":
                self.next()
                node = EMul(node, self.parse_factor())
            else:
                return node

    def parse_factor(self):
        kind, val, pos = self.peek()
        if kind == "op" and val == "-":
            self.next()
            return ENeg(self.parse_factor())
        node = self.parse_atom()
        kind, val, pos = self.peek()
        if kind == "op" and val == "^":
            self.next()
            kind, exp, pos = self.next()
            if kind != "num" or exp.denominator != 1 or exp < 0:
                raise ParseError("exponent must be a non-negative integer", pos)
            return EPow(node, int(exp))
        return node

    def parse_atom(self):
        kind, val, pos = self.next()
        if kind == "num":
            return ENum(val)
        if kind == "var":
            return EVar(val)
        if kind == "op" and val == "(":
            node = self.parse_expr()
            self.expect_op(")")
            return node
        raise ParseError(f"unexpected token {val!r}", pos)


def parse_expression(text: str):
    """Parse expression text into an AST (no ring needed yet)."""
    parser = _ExprParser(tokenize(text))
    node = parser.parse_expr()
    kind, val, pos = parser.peek()
    if kind != "end":
        raise ParseError(f"trailing input {val!r}", pos)
    return node


def ast_to_polynomial(node, ring: Ring) -> Polynomial:
    if isinstance(node, ENum):
        return Polynomial.constant(ring, node.value)
    if isinstance(node, EVar):
        return Polynomial.variable(ring, ring.var_index(node.name))
    if isinstance(node, EAdd):
        return ast_to_polynomial(node.left, ring) + ast_to_polynomial(node.right, ring)
    if isinstance(node, ESub):
        return ast_to_polynomial(node.left, ring) - ast_to_polynomial(node.right, ring)
    if isinstance(node, EMul):
        return ast_to_polynomial(node.left, ring) * ast_to_polynomial(node.right, ring)
    if isinstance(node, EPow):
        return ast_to_polynomial(node.base, ring) ** node.exponent
    if isinstance(node, ENeg):
        return -ast_to_polynomial(node.operand, ring)
    raise TypeError(f"unknown AST node {node!r}")


def parse_polynomial(text: str, ring: Ring) -> Polynomial:
    return ast_to_polynomial(parse_expression(text), ring)


# ---------------------------------------------------------------------------
# Polynomial matrices, determinants, resultants.
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PolyMatrix:
    entries: tuple  # tuple of tuples of Polynomial

    def __post_init__(self):
        if not self.entries:
            raise ValueError("empty matrix")
        width = len(self.entries[0])
        ring = self.entries[0][0].ring
        for row in self.entries:
            if len(row) != width:
                raise ValueError("matrix is not rectangular")
            for e in row:
                if e.ring != ring:
                    raise RingMismatchError("matrix entries in different rings")

    @staticmethod
    def from_rows(rows) -> "PolyMatrix":
        return PolyMatrix(tuple(tuple(row) for row in rows))

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0])


def exact_div(num: Polynomial, den: Polynomial) -> Polynomial:
    """Divide num by den assuming the division is exact (used by Bareiss)."""
    if den.is_zero():
        raise ZeroDivisionError("division by zero polynomial")
    if den.is_constant():
        c = den.constant_value()
        return Polynomial(num.ring, {m: v / c for m, v in num.terms.items()})
    ring = num.ring
    lead_den = max(den.terms)  # lex-largest exponent tuple
    cd = den.terms[lead_den]
    rem = dict(num.terms)
    quo = {}
    while rem:
        lead = max(rem)
        diff = tuple(a - b for a, b in zip(lead, lead_den))
        if any(e < 0 for e in diff):
            raise ArithmeticError("inexact polynomial division")
        c = rem[lead] / cd
        quo[diff] = quo.get(diff, Q(0)) + c
        for mono, v in den.terms.items():
            m = tuple(a + b for a, b in zip(diff, mono))
            nv = rem.get(m, Q(0)) - c * v
            if nv == 0:
                rem.pop(m, None)
            else:
                rem[m] = nv
    return Polynomial(ring, quo)


def _det_cofactor(rows) -> Polynomial:
    n = len(rows)
    if n == 1:
        return rows[0][0]
    ring = rows[0][0].ring
    total = Polynomial(ring)
    for j in range(n):
        if rows[0][j].is_zero():
            continue
        minor = [[rows[i][k] for k in range(n) if k != j] for i in range(1, n)]
        cof = rows[0][j] * _det_cofactor(minor)
        total = total + cof if j % 2 == 0 else total - cof
    return total


def _det_bareiss(rows) -> Polynomial:
    n = len(rows)
    ring = rows[0][0].ring
    a = [list(r) for r in rows]
    sign = 1
    prev = Polynomial.constant(ring, 1)
    for k in range(n - 1):
        if a[k][k].is_zero():
            pivot = next((i for i in range(k + 1, n) if not a[i][k].is_zero()), None)
            if pivot is None:
                return Polynomial(ring)
            a[k], a[pivot] = a[pivot], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = a[k][k] * a[i][j] - a[i][k] * a[k][j]
                a[i][j] = exact_div(num, prev)
            a[i][k] = Polynomial(ring)
        prev = a[k][k]
    det = a[n - 1][n - 1]
    return det if sign == 1 else -det


def determinant(matrix: PolyMatrix) -> Polynomial:
    """Exact determinant; cofactor expansion up to 4x4, fraction-free
    elimination beyond that."""
    if matrix.rows != matrix.cols:
        raise ValueError("determinant of a non-square matrix")
    rows = [list(r) for r in matrix.entries]
    if matrix.rows <= 4:
        return _det_cofactor(rows)
    return _det_bareiss(rows)


def resultant(f: Polynomial, g: Polynomial, var: int) -> Polynomial:
    """Sylvester resultant of f and g with respect to `var`.

    When one argument is constant in `var`, returns that argument raised to
    the other's degree (res(f, g) = g^deg_var(f) for deg_var(g) = 0).
    """
    if f.is_zero() or g.is_zero():
        raise ValueError("resultant of the zero polynomial")
    df = f.degree_in(var)
    dg = g.degree_in(var)
    if df == 0 and dg == 0:
        raise ValueError("both arguments constant in the eliminated variable")
    if dg == 0:
        return g ** df
    if df == 0:
        return f ** dg
    fc = f.coeffs_in(var)
    gc = g.coeffs_in(var)
    ring = f.ring
    zero = Polynomial(ring)
    size = df + dg
    rows = []
    for i in range(dg):  # dg shifted copies of f
        row = [zero] * size
        for k, c in enumerate(reversed(fc)):
            row[i + k] = c
        rows.append(row)
    for i in range(df):  # df shifted copies of g
        row = [zero] * size
        for k, c in enumerate(reversed(gc)):
            row[i + k] = c
        rows.append(row)
    return determinant(PolyMatrix.from_rows(rows))


# ---------------------------------------------------------------------------
# Univariate machinery: dense integer representation, gcd, square-free part,
# root isolation.
# ---------------------------------------------------------------------------

def as_univariate(f: Polynomial):
    """Return (var, ascending Fraction coefficients) for a univariate f.

    Constants are reported as (None, [c]).  Raises if f involves more than
    one variable.
    """
    used = f.variables()
    if len(used) > 1:
        raise ValueError("polynomial is not univariate")
    if not used:
        return None, [f.constant_value() if f.terms else Q(0)]
    var = used[0]
    coeffs = [Q(0)] * (f.degree_in(var) + 1)
    for mono, c in f.terms.items():
        coeffs[mono[var]] = c
    return var, coeffs


def univariate_to_poly(ring: Ring, var: int, coeffs) -> Polynomial:
    terms = {}
    for e, c in enumerate(coeffs):
        if c == 0:
            continue
        mono = [0] * ring.nvars
        mono[var] = e
        terms[tuple(mono)] = Q(c)
    return Polynomial(ring, terms)


def _trim(p):
    while p and p[-1] == 0:
        p.pop()
    return p


def _primitive_int(coeffs):
    """Clear denominators and content; positive leading coefficient."""
    coeffs = [Q(c) for c in coeffs]
    if not _trim(list(coeffs)):
        return []
    lcm = 1
    for c in coeffs:
        lcm = lcm * c.denominator // _igcd(lcm, c.denominator)
    ints = [int(c * lcm) for c in coeffs]
    while ints and ints[-1] == 0:
        ints.pop()
    g = 0
    for c in ints:
        g = _igcd(g, abs(c))
    ints = [c // g for c in ints]
    if ints[-1] < 0:
        ints = [-c for c in ints]
    return ints


def _uderiv(p):
    return [i * c for i, c in enumerate(p)][1:]


def _ueval(p, x):
    total = Q(0) if isinstance(x, Q) else 0
    for c in reversed(p):
        total = total * x + c
    return total


def sign_int_at(p, x):
    """Sign of the integer coefficient list p at the rational x, computed
    entirely in integer arithmetic (sign of den^deg * p(x))."""
    if not p:
        return 0
    a, b = x.numerator, x.denominator
    acc = p[-1]
    pw = 1
    for c in reversed(p[:-1]):
        pw *= b
        acc = acc * a + c * pw
    return 0 if acc == 0 else (1 if acc > 0 else -1)


def _udivmod(a, b):
    """Division with remainder over Q; a, b lists of Fractions."""
    a = [Q(c) for c in a]
    b = [Q(c) for c in b]
    _trim(a)
    _trim(b)
    if not b:
        raise ZeroDivisionError
    q = [Q(0)] * max(len(a) - len(b) + 1, 0)
    while len(a) >= len(b):
        shift = len(a) - len(b)
        c = a[-1] / b[-1]
        q[shift] = c
        for i, bc in enumerate(b):
            a[shift + i] -= c * bc
        _trim(a)
    return q, a


def _primitive_of_ints(ints):
    """Content removal and sign normalization for an integer list."""
    ints = list(ints)
    while ints and ints[-1] == 0:
        ints.pop()
    if not ints:
        return []
    g = 0
    for c in ints:
        g = _igcd(g, abs(c))
    ints = [c // g for c in ints]
    if ints[-1] < 0:
        ints = [-c for c in ints]
    return ints


def _pseudo_divmod(a, b):
    """Pseudo-quotient and -remainder of integer coefficient lists:
    lc(b)^k * a = q*b + r with everything in integer arithmetic."""
    a = list(a)
    db = len(b) - 1
    lb = b[-1]
    while a and a[-1] == 0:
        a.pop()
    q = [0] * max(len(a) - db, 0)
    while len(a) - 1 >= db:
        shift = len(a) - 1 - db
        la = a[-1]
        a = [c * lb for c in a]
        q = [c * lb for c in q]
        q[shift] += la
        for i, bc in enumerate(b):
            a[shift + i] -= la * bc
        while a and a[-1] == 0:
            a.pop()
    return q, a


def _pseudo_rem(a, b):
    """Pseudo-remainder of integer coefficient lists (integer-only)."""
    a = list(a)
    db = len(b) - 1
    lb = b[-1]
    while a and a[-1] == 0:
        a.pop()
    while len(a) - 1 >= db:
        shift = len(a) - 1 - db
        la = a[-1]
        a = [c * lb for c in a]
        for i, bc in enumerate(b):
            a[shift + i] -= la * bc
        while a and a[-1] == 0:
            a.pop()
    return a


def ugcd_int(a, b):
    """Gcd of two integer coefficient lists, primitive with positive lead.
    Primitive pseudo-remainder sequence; no rational arithmetic."""
    a = _prim_any(a)
    b = _prim_any(b)
    if len(a) < len(b):
        a, b = b, a
    while b:
        r = _pseudo_rem(a, b)
        a, b = b, _primitive_of_ints(r)
    return a if a else []


def _prim_any(coeffs):
    if all(isinstance(c, int) for c in coeffs):
        return _primitive_of_ints(coeffs)
    return _primitive_int(coeffs)


def square_free_part(f: Polynomial) -> Polynomial:
    """f / gcd(f, f') for univariate f: primitive, positive leading coeff."""
    if f.is_zero():
        raise ValueError("square-free part of the zero polynomial")
    var, coeffs = as_univariate(f)
    if var is None or len(coeffs) == 1:
        return Polynomial.constant(f.ring, 1)
    p = _primitive_int(coeffs)
    g = ugcd_int(p, _uderiv(p))
    q, r = _pseudo_divmod(p, g)
    assert not r
    return univariate_to_poly(f.ring, var, _primitive_of_ints(q))


def _sign_variations(coeffs):
    v = 0
    prev = 0
    for c in coeffs:
        if c == 0:
            continue
        s = 1 if c > 0 else -1
        if prev and s != prev:
            v += 1
        prev = s
    return v


def _shift_by(p, c):
    """p(x+c) for integer c, via Horner."""
    r = []
    for a in reversed(p):
        nr = [0] * (len(r) + 1)
        for i, cc in enumerate(r):
            nr[i] += cc * c
            nr[i + 1] += cc
        nr[0] += a
        r = nr
    return _trim(r)


def _shift1(p):
    """p(x+1) for an integer coefficient list, ascending."""
    return _shift_by(p, 1)


def _mobius_count(p):
    """Descartes bound on the number of roots of p in the open (0,1)."""
    rev = list(reversed(p))
    return _sign_variations(_shift1(rev))


def _div_linear_at_one(p):
    """p / (x - 1), exact."""
    out = [0] * (len(p) - 1)
    carry = 0
    for i in range(len(p) - 1, 0, -1):
        carry = carry + p[i]
        out[i - 1] = carry
    assert p[0] + carry == 0
    return _trim(out)


def _isolate_rec(q, lo, hi, out):
    v = _mobius_count(q)
    if v == 0:
        return
    if v == 1:
        out.append((lo, hi))
        return
    mid = (lo + hi) / 2
    n = len(q) - 1
    ql = [c * (1 << (n - i)) for i, c in enumerate(q)]  # 2^n q(x/2)
    qr = _shift1(ql)
    if qr and qr[0] == 0:  # exact root at the midpoint
        out.append((mid, mid))
        ql = _div_linear_at_one(ql)
        while qr and qr[0] == 0:
            qr = qr[1:]
    _isolate_rec(ql, lo, mid, out)
    _isolate_rec(qr, mid, hi, out)


class NotSquareFreeError(ValueError):
    pass


def isolate_real_roots(f: Polynomial):
    """Isolating intervals for all real roots of a square-free univariate f.

    Returns a sorted list of (lo, hi) Fraction pairs; lo == hi marks an
    exact rational root.  Open intervals carry a sign change of f and
    contain exactly one root; all intervals are pairwise disjoint.
    """
    if f.is_zero():
        raise ValueError("cannot isolate roots of the zero polynomial")
    var, coeffs = as_univariate(f)
    if var is None or len(coeffs) == 1:
        return []
    return isolate_int_roots(_primitive_int(coeffs))


def isolate_int_roots(p):
    """Isolating intervals for a square-free primitive integer
    coefficient list; same contract as isolate_real_roots."""
    if len(p) <= 1:
        return []
    g = ugcd_int(p, _uderiv(p))
    if len(g) > 1:
        raise NotSquareFreeError("input is not square-free")
    out = []
    # strip roots at zero
    while p[0] == 0:
        p = p[1:]
        out.append((Q(0), Q(0)))
    if len(p) == 1:
        return sorted(out)
    if len(p) == 2:
        root = Q(-p[0], p[1])
        out.append((root, root))
        return sorted(out)
    # dyadic root bound
    bound = 1 + max(abs(Q(c, p[-1])) for c in p[:-1])
    b = 1
    while b < bound:
        b <<= 1
    # map (-b, b) to (0, 1): q(x) = p(-b + 2b*x) = t(2b*x) with t = p(x - b)
    t = _shift_by(p, -b)
    q = [c * (2 * b) ** i for i, c in enumerate(t)]
    _isolate_rec(q, Q(-b), Q(b), out)
    out.sort()
    # separation must bisect against a polynomial that is nonzero at the
    # exact point roots, or the shared endpoint can never move past them
    p_sep = p
    for lo, hi in out:
        if lo == hi and sign_int_at(p_sep, lo) == 0:
            p_sep = _deflate_rational(p_sep, lo)
    return _separate_intervals(p_sep, out)


def _deflate_rational(p, t):
    """Divide an integer coefficient list by (x - t) for the known
    rational root t; returns a primitive integer list."""
    t = Q(t)
    acc = Q(0)
    vals = []
    for c in reversed(p):
        acc = Q(c) + t * acc
        vals.append(acc)
    assert vals[-1] == 0, "not a root"
    return _primitive_int(list(reversed(vals[:-1])))


def refine_interval(p_int, lo, hi):
    """One bisection step keeping the sign change; collapses onto exact
    rational roots found at the midpoint."""
    if lo == hi:
        return lo, hi
    mid = (lo + hi) / 2
    fm = sign_int_at(p_int, mid)
    if fm == 0:
        return mid, mid
    fl = sign_int_at(p_int, lo)
    if fl != 0:
        return (lo, mid) if fl != fm else (mid, hi)
    # lo is an adjacent exact root; decide the half from the right end
    fh = sign_int_at(p_int, hi)
    return (mid, hi) if fm != fh else (lo, mid)


def _separate_intervals(p_int, intervals):
    """Refine until closed intervals are pairwise disjoint."""
    ivs = list(intervals)
    changed = True
    while changed:
        changed = False
        for i in range(len(ivs) - 1):
            a, b = ivs[i], ivs[i + 1]
            if a[1] >= b[0]:
                ivs[i] = refine_interval(p_int, *a)
                ivs[i + 1] = refine_interval(p_int, *b)
                changed = True
    return ivs


def int_coeffs(f: Polynomial):
    """(var, primitive integer coefficient list) of a univariate f."""
    var, coeffs = as_univariate(f)
    return var, _primitive_int(coeffs)


def primitive_signed(coeffs):
    """Primitive integer coefficients scaled by a POSITIVE rational, so
    sign evaluations agree with the input everywhere."""
    p = _primitive_int(coeffs)
    if not p:
        return p
    lead = next(c for c in reversed(list(coeffs)) if c != 0)
    if lead < 0:
        return [-c for c in p]
    return p


def usquarefree_int(coeffs):
    """Square-free part of an integer coefficient list, primitive with
    positive leading coefficient."""
    p = _primitive_int(coeffs)
    if len(p) <= 1:
        return p
    g = ugcd_int(p, _uderiv(p))
    q, r = _pseudo_divmod(p, g)
    assert not r
    return _primitive_of_ints(q)


def udiv_exact_int(a, b):
    """Exact quotient of integer coefficient lists, primitive part."""
    q, r = _pseudo_divmod(list(a), list(b))
    if r:
        raise ValueError("division is not exact")
    return _primitive_of_ints(q)


def coprime_basis(polys):
    """Pairwise-coprime square-free basis of a list of integer
    coefficient lists: same union of real roots, no shared roots between
    basis members.  Keeps every polynomial at its original small degree
    instead of forming one giant product."""
    basis = []
    queue = [usquarefree_int(p) for p in polys]
    while queue:
        f = queue.pop()
        if len(f) <= 1:
            continue
        split = False
        for i, b in enumerate(basis):
            g = ugcd_int(b, f)
            if len(g) > 1:
                b1 = udiv_exact_int(b, g)
                f1 = udiv_exact_int(f, g)
                basis[i] = g
                if len(b1) > 1:
                    basis.append(b1)
                if len(f1) > 1:
                    queue.append(f1)
                split = True
                break
        if not split:
            basis.append(f)
    return basis


def isolate_basis_roots(basis):
    """Sorted pairwise-disjoint isolating intervals for the union of the
    roots of a coprime basis: list of (lo, hi, coeffs tuple)."""
    items = []
    for p in basis:
        for lo, hi in isolate_int_roots(p):
            items.append((lo, hi, tuple(p)))
    changed = True
    while changed:
        changed = False
        items.sort(key=lambda t: (t[0], t[1]))
        for i in range(len(items) - 1):
            a, b, p = items[i]
            c, d, q = items[i + 1]
            if b >= c:
                iv1, iv2 = _separate_pair(p, (a, b), q, (c, d))
                items[i] = iv1 + (p,)
                items[i + 1] = iv2 + (q,)
                changed = True
    return items


def _bisect_cached(p, lo, hi, fl):
    """One bisection step reusing the cached sign at lo; returns the new
    interval and new lo-sign (0-length interval on an exact hit)."""
    mid = (lo + hi) / 2
    fm = sign_int_at(p, mid)
    if fm == 0:
        return mid, mid, 0
    if fm != fl:
        return lo, mid, fl
    return mid, hi, fm


def _separate_pair(p, ivp, q, ivq):
    """Refine two isolating intervals of distinct roots until their
    closures are disjoint."""
    p = list(p)
    q = list(q)
    (a, b), (c, d) = ivp, ivq
    fp = sign_int_at(p, a) if a != b else 0
    fq = sign_int_at(q, c) if c != d else 0
    while max(a, c) <= min(b, d):
        if b - a >= d - c and a != b:
            a, b, fp = _bisect_cached(p, a, b, fp)
        elif c != d:
            c, d, fq = _bisect_cached(q, c, d, fq)
        elif a != b:
            a, b, fp = _bisect_cached(p, a, b, fp)
        else:
            raise ValueError("coincident roots in a coprime basis")
    return (a, b), (c, d)


def sign_at_basis_root(b, iv, g):
    """Exact sign of the integer coefficient list g at the unique root of
    the square-free integer polynomial b inside the isolating interval
    iv."""
    g = list(g)
    while g and g[-1] == 0:
        g.pop()
    if not g:
        return 0
    if len(g) == 1:
        return 1 if g[0] > 0 else -1
    lo, hi = iv
    if lo == hi:
        return sign_int_at(g, lo)
    b = list(b)
    gs = usquarefree_int(g)
    h = ugcd_int(b, gs)
    if len(h) > 1:
        va = sign_int_at(h, lo)
        vb = sign_int_at(h, hi)
        if va != 0 and vb != 0 and va != vb:
            return 0
    # the root is not a zero of g: shrink iv away from g's roots
    g_ivs = isolate_int_roots(gs)
    while True:
        overlap = [
            j for j, (a, c) in enumerate(g_ivs) if c >= lo and a <= hi
        ]
        if not overlap:
            return sign_int_at(g, (lo + hi) / 2)
        lo, hi = refine_interval(b, lo, hi)
        if lo == hi:
            return sign_int_at(g, lo)
        for j in overlap:
            g_ivs[j] = refine_interval(gs, *g_ivs[j])
