"""Exact multivariate polynomials over the rationals on a fixed alphabet.

Every identity checked elsewhere in the package (sesquilinearity, skew
symmetry, Jacobi, the dual co-axioms, pairings) is reduced to equality of
:class:`Poly` values, so this module favours a canonical representation over
generality: a polynomial is a dict from dense exponent vectors to nonzero
:class:`fractions.Fraction` coefficients.

The alphabet is closed::

    lam mu nu   bracket parameters
    d           the derivation acting on the module
    x y z w     the derivation acting on tensor legs 1..4

Canonical text form sorts terms lexicographically (``lam`` first) in
descending order and writes e.g. ``2*lam+d`` or ``-1/2*x^2*y``.
"""
from __future__ import annotations

import re
from enum import IntEnum
from fractions import Fraction
from numbers import Number, Rational

from .errors import DslSyntaxError, NonRationalScalarError


class Var(IntEnum):
    LAM = 0
    MU = 1
    NU = 2
    D = 3
    X = 4
    Y = 5
    Z = 6
    W = 7

    @property
    def symbol(self):
        return VAR_NAMES[self]


VAR_NAMES = ("lam", "mu", "nu", "d", "x", "y", "z", "w")
VAR_BY_NAME = {name: Var(i) for i, name in enumerate(VAR_NAMES)}
NVARS = len(VAR_NAMES)
_ZERO_EXP = (0,) * NVARS

LAM, MU, NU, D, X, Y, Z, W = tuple(Var)


def rat(value) -> Fraction:
    """Coerce ``value`` to an exact rational; inexact scalars are rejected."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        return Fraction(int(value))
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except ValueError:
            raise NonRationalScalarError(f"not a rational literal: {value!r}") from None
    raise NonRationalScalarError(
        f"exact rational expected, got {type(value).__name__}: {value!r}")


# anything else falls through to the other operand (elements, tensors)
_SCALARS = (Number, str)


def _exp_add(a, b):
    return tuple(i + j for i, j in zip(a, b))


class Poly:
    """Immutable polynomial with rational coefficients.

    Build from a term map ``{exponent_tuple: coefficient}``, or with
    :meth:`const`, :meth:`var`, :meth:`parse`.  Arithmetic with ``int`` and
    ``Fraction`` operands is supported on both sides.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms=None):
        clean = {}
        if terms:
            for exp, c in terms.items():
                c = rat(c)
                if c:
                    exp = tuple(exp)
                    if len(exp) != NVARS:
                        raise ValueError(f"exponent vector must have length {NVARS}")
                    clean[exp] = clean.get(exp, 0) + c
            clean = {e: c for e, c in clean.items() if c}
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms):
        # terms already canonical (no zeros, tuple keys, Fraction values)
        p = cls.__new__(cls)
        p._terms = terms
        p._hash = None
        return p

    # -- constructors -----------------------------------------------------
    @classmethod
    def const(cls, c):
        c = rat(c)
        return cls._raw({_ZERO_EXP: c} if c else {})

    @classmethod
    def var(cls, v, power=1):
        exp = [0] * NVARS
        exp[Var(v)] = power
        return cls._raw({tuple(exp): Fraction(1)})

    @classmethod
    def monomial(cls, coeff, **powers):
        exp = [0] * NVARS
        for name, e in powers.items():
            exp[VAR_BY_NAME[name]] = e
        return cls({tuple(exp): coeff})

    @classmethod
    def coerce(cls, value):
        if isinstance(value, Poly):
            return value
        return cls.const(value)

    @classmethod
    def parse(cls, text):
        return parse_poly(text)

    # -- inspection -------------------------------------------------------
    @property
    def terms(self):
        """The term map; treat as read-only."""
        return self._terms

    def is_zero(self):
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def is_constant(self):
        return not self._terms or (len(self._terms) == 1 and _ZERO_EXP in self._terms)

    def constant_value(self):
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self._terms.get(_ZERO_EXP, Fraction(0))

    def constant_term(self):
        return self._terms.get(_ZERO_EXP, Fraction(0))

    def variables(self):
        used = set()
        for exp in self._terms:
            used.update(Var(i) for i, e in enumerate(exp) if e)
        return used

    def degree(self, v=None):
        """Degree in ``v``, or total degree; the zero polynomial has degree -1."""
        if not self._terms:
            return -1
        if v is None:
            return max(sum(e) for e in self._terms)
        return max(e[v] for e in self._terms)

    def coefficients(self, v):
        """Split as a polynomial in ``v``: ``{power: coefficient Poly}``."""
        v = Var(v)
        out = {}
        for exp, c in self._terms.items():
            k = exp[v]
            rest = exp[:v] + (0,) + exp[v + 1:]
            out.setdefault(k, {})[rest] = c
        return {k: Poly._raw(t) for k, t in out.items()}

    def leading_term(self):
        exp = max(self._terms)
        return exp, self._terms[exp]

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, Poly):
            if not isinstance(other, _SCALARS):
                return NotImplemented
            other = Poly.const(other)
        if not other._terms:
            return self
        if not self._terms:
            return other
        out = dict(self._terms)
        for e, c in other._terms.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return Poly._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw({e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        if not isinstance(other, Poly):
            other = Poly.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return Poly.const(other) - self

    def __mul__(self, other):
        if not isinstance(other, Poly):
            if not isinstance(other, _SCALARS):
                return NotImplemented
            c = rat(other)
            if not c:
                return ZERO
            return Poly._raw({e: v * c for e, v in self._terms.items()})
        if not self._terms or not other._terms:
            return ZERO
        out = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = _exp_add(e1, e2)
                out[e] = out.get(e, 0) + c1 * c2
        return Poly._raw({e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Poly):
            other = other.constant_value()
        c = rat(other)
        return self * (1 / c)

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only non-negative integer powers")
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def scale(self, c):
        return self * rat(c)

    # -- comparison -------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, Poly):
            return self._terms == other._terms
        try:
            other = Poly.const(other)
        except NonRationalScalarError:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # -- substitution -----------------------------------------------------
    def subst(self, bindings):
        """Simultaneously replace variables by polynomials (or scalars)."""
        if not bindings or not self._terms:
            return self
        idx = {}
        for v, img in bindings.items():
            idx[Var(v)] = img if isinstance(img, Poly) else Poly.const(img)
        bound = sorted(idx)
        powers = {v: [ONE] for v in bound}

        def power(v, e):
            cache = powers[v]
            while len(cache) <= e:
                cache.append(cache[-1] * idx[v])
            return cache[e]

        acc = {}
        for exp, c in self._terms.items():
            rest = list(exp)
            factor = None
            for v in bound:
                e = exp[v]
                if e:
                    rest[v] = 0
                    pv = power(v, e)
                    factor = pv if factor is None else factor * pv
            rest = tuple(rest)
            if factor is None:
                acc[rest] = acc.get(rest, 0) + c
                continue
            for fe, fc in factor._terms.items():
                e = _exp_add(rest, fe)
                acc[e] = acc.get(e, 0) + c * fc
        return Poly._raw({e: c for e, c in acc.items() if c})

    def rename(self, mapping):
        """Permute/rename variables (``{old: new}``); cheaper than :meth:`subst`."""
        perm = list(range(NVARS))
        for old, new in mapping.items():
            perm[Var(old)] = Var(new)
        out = {}
        for exp, c in self._terms.items():
            new = [0] * NVARS
            for i, e in enumerate(exp):
                if e:
                    new[perm[i]] += e
            new = tuple(new)
            out[new] = out.get(new, 0) + c
        return Poly._raw({e: c for e, c in out.items() if c})

    def eval(self, point):
        """Substitute rationals; returns a ``Fraction`` when nothing is left."""
        bindings = {}
        for v, val in point.items():
            if isinstance(val, Poly):
                raise TypeError("eval takes rational values only; use subst for polynomials")
            bindings[Var(v)] = Poly.const(val)
        out = self.subst(bindings)
        if out.is_constant():
            return out.constant_value()
        return out

    # -- text -------------------------------------------------------------
    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for exp in sorted(self._terms, reverse=True):
            c = self._terms[exp]
            mono = "*".join(
                VAR_NAMES[i] if e == 1 else f"{VAR_NAMES[i]}^{e}"
                for i, e in enumerate(exp) if e)
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if not mono:
                body = str(a)
            elif a == 1:
                body = mono
            else:
                body = f"{a}*{mono}"
            parts.append((sign, body))
        text = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            text += sign + body
        return text

    def __repr__(self):
        return f"Poly('{self}')"


ZERO = Poly._raw({})
ONE = Poly._raw({_ZERO_EXP: Fraction(1)})

# handy generators
lam, mu, nu, d, x, y, z, w = (Poly.var(v) for v in Var)


def poly_arith(op, lhs, rhs=None):
    """Functional entry point mirroring the operator overloads."""
    lhs = Poly.coerce(lhs)
    if op == "neg":
        return -lhs
    if op == "add":
        return lhs + rhs
    if op == "sub":
        return lhs - rhs
    if op == "mul":
        return lhs * rhs
    if op == "scalar_mul":
        if isinstance(rhs, Poly):
            rhs = rhs.constant_value()
        return lhs.scale(rhs)
    raise ValueError(f"unknown op {op!r}")


def poly_subst(p, bindings):
    return Poly.coerce(p).subst(bindings)


def poly_eval(p, point):
    return Poly.coerce(p).eval(point)


def divmod_univariate(p, a, v=D):
    """Divide ``p`` by ``a``, a polynomial in ``v`` alone with rational
    coefficients, treating the other variables of ``p`` as scalars.

    Returns ``(quotient, remainder)`` with ``deg_v(remainder) < deg_v(a)``.
    """
    v = Var(v)
    if a.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    if a.variables() - {v}:
        raise ValueError("divisor must involve only the division variable")
    acoef = {k: c.constant_value() for k, c in a.coefficients(v).items()}
    n = max(acoef)
    lead = acoef[n]
    q = ZERO
    r = p
    step = Poly.var(v)
    while not r.is_zero() and r.degree(v) >= n:
        rc = r.coefficients(v)
        m = max(rc)
        t = rc[m] * (step ** (m - n)) / lead
        q = q + t
        r = r - t * a
    return q, r


# -- parsing --------------------------------------------------------------

_TOKEN_RE = re.compile(r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>\#[^\n]*)
  | (?P<num>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*(?:\*+(?=[\s;,)\]]|$))?)
  | (?P<arrow>->)
  | (?P<op>[-+*/^()\[\]{};,=:])
""", re.VERBOSE)


class Token:
    __slots__ = ("kind", "text", "line", "col")

    def __init__(self, kind, text, line, col):
        self.kind = kind
        self.text = text
        self.line = line
        self.col = col

    def __repr__(self):
        return f"Token({self.kind}, {self.text!r}, {self.line}:{self.col})"


def tokenize(text):
    """Split DSL / polynomial text into tokens; the final token has kind ``eof``."""
    tokens = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise DslSyntaxError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind not in ("ws", "comment"):
            tokens.append(Token(kind, m.group(), line, m.start() - line_start + 1))
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


class TokenStream:
    def __init__(self, tokens):
        self.tokens = tokens
        self.pos = 0

    def peek(self, offset=0):
        i = min(self.pos + offset, len(self.tokens) - 1)
        return self.tokens[i]

    def next(self):
        tok = self.peek()
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def at(self, text, offset=0):
        tok = self.peek(offset)
        return tok.kind in ("op", "arrow", "ident") and tok.text == text

    def expect(self, text):
        tok = self.peek()
        if not self.at(text):
            raise DslSyntaxError(f"unexpected {tok.text or 'end of input'!r}",
                                 tok.line, tok.col, expected=(repr(text),))
        return self.next()

    def error(self, message, expected=()):
        tok = self.peek()
        raise DslSyntaxError(message, tok.line, tok.col, expected)


def _starts_factor(tok):
    return (tok.kind == "num" or (tok.kind == "op" and tok.text == "(")
            or (tok.kind == "ident" and tok.text in VAR_BY_NAME))


class PolyParser:
    """Recursive-descent parser for polynomial expressions over a token stream.

    Parsing stops at the first token that cannot continue the expression, so
    the DSL can embed coefficients like ``(2*lam + d) L``.
    """

    def __init__(self, stream):
        self.s = stream

    def expr(self):
        s = self.s
        sign = 1
        if s.at("-"):
            s.next()
            sign = -1
        elif s.at("+"):
            s.next()
        acc = self.term() * sign
        while s.at("+") or s.at("-"):
            # a '+'/'-' followed by something that is not a factor ends the expression
            if not _starts_factor(s.peek(1)):
                break
            op = s.next().text
            t = self.term()
            acc = acc + t if op == "+" else acc - t
        return acc

    def term(self):
        s = self.s
        acc = self.factor()
        while True:
            if s.at("*"):
                s.next()
                acc = acc * self.factor()
            elif s.at("/"):
                s.next()
                tok = s.peek()
                if tok.kind != "num":
                    s.error("division only by a rational literal", expected=("number",))
                s.next()
                acc = acc / Fraction(int(tok.text))
            elif _starts_factor(s.peek()):
                acc = acc * self.factor()
            else:
                return acc

    def factor(self):
        base = self.atom()
        if self.s.at("^"):
            self.s.next()
            tok = self.s.peek()
            if tok.kind != "num":
                self.s.error("exponent must be a non-negative integer", expected=("number",))
            self.s.next()
            base = base ** int(tok.text)
        return base

    def atom(self):
        s = self.s
        tok = s.peek()
        if tok.kind == "num":
            s.next()
            return Poly.const(int(tok.text))
        if tok.kind == "ident" and tok.text in VAR_BY_NAME:
            s.next()
            return Poly.var(VAR_BY_NAME[tok.text])
        if s.at("("):
            s.next()
            inner = self.expr()
            s.expect(")")
            return inner
        s.error(f"unexpected {tok.text or 'end of input'!r} in polynomial",
                expected=("number", "variable", "'('"))


def parse_poly(text):
    stream = TokenStream(tokenize(text))
    if stream.peek().kind == "eof":
        raise DslSyntaxError("empty polynomial", 1, 1)
    p = PolyParser(stream).expr()
    tok = stream.peek()
    if tok.kind != "eof":
        raise DslSyntaxError(f"trailing input {tok.text!r}", tok.line, tok.col)
    return p
