"""Exact multivariate polynomials and rational functions over Q.

Polynomials are stored sparsely as {exponent tuple: Fraction} over an ordered
variable chart.  The canonical term order is graded lexicographic (total
degree first, then exponent tuple), which fixes printing, hashing and the
normalization of rational functions.  A configurable total-degree guard makes
expression swell fail fast instead of grinding.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd as int_gcd

from ..errors import ChartMismatch, DegreeOverflow, InputError, ParseError

_DEGREE_GUARD = 64


def set_degree_guard(bound):
    """Set the global total-degree guard; returns the previous value."""
    global _DEGREE_GUARD
    old = _DEGREE_GUARD
    _DEGREE_GUARD = int(bound)
    return old


def _as_fraction(c):
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    raise InputError(f"not an exact rational coefficient: {c!r}")


def _term_key(exps):
    # graded-lex, largest first when sorted with reverse=True
    return (sum(exps), exps)


class Polynomial:
    """Immutable multivariate polynomial with Fraction coefficients."""

    __slots__ = ("vars", "terms", "_hash")

    def __init__(self, variables, terms):
        self.vars = tuple(variables)
        nv = len(self.vars)
        clean = {}
        for exps, c in terms.items():
            c = _as_fraction(c)
            if not c:
                continue
            exps = tuple(int(e) for e in exps)
            if len(exps) != nv:
                raise InputError("exponent vector length mismatch")
            if any(e < 0 for e in exps):
                raise InputError("negative exponent")
            clean[exps] = c
        self.terms = clean
        self._hash = None

    # ----- constructors -------------------------------------------------
    @classmethod
    def zero(cls, variables):
        return cls(variables, {})

    @classmethod
    def const(cls, variables, c):
        c = _as_fraction(c)
        if not c:
            return cls.zero(variables)
        return cls(variables, {(0,) * len(tuple(variables)): c})

    @classmethod
    def var(cls, variables, name):
        variables = tuple(variables)
        try:
            i = variables.index(name)
        except ValueError:
            raise InputError(f"unknown variable {name!r}") from None
        exps = [0] * len(variables)
        exps[i] = 1
        return cls(variables, {tuple(exps): Fraction(1)})

    # ----- basic queries ------------------------------------------------
    def is_zero(self):
        return not self.terms

    def is_constant(self):
        return all(sum(e) == 0 for e in self.terms)

    def constant_value(self):
        if not self.terms:
            return Fraction(0)
        if not self.is_constant():
            raise InputError("polynomial is not constant")
        return next(iter(self.terms.values()))

    def total_degree(self):
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def degree_in(self, name):
        i = self.vars.index(name)
        if not self.terms:
            return -1
        return max(e[i] for e in self.terms)

    def leading(self):
        """(exponents, coefficient) of the graded-lex leading term."""
        if not self.terms:
            raise InputError("zero polynomial has no leading term")
        exps = max(self.terms, key=_term_key)
        return exps, self.terms[exps]

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: _term_key(t[0]), reverse=True)

    # ----- arithmetic ----------------------------------------------------
    def _check(self, other):
        if self.vars != other.vars:
            raise ChartMismatch(f"charts differ: {self.vars} vs {other.vars}")

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.const(self.vars, other)
        self._check(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            s = terms.get(e, Fraction(0)) + c
            if s:
                terms[e] = s
            else:
                terms.pop(e, None)
        return Polynomial(self.vars, terms)

    def __neg__(self):
        return Polynomial(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.const(self.vars, other)
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = _as_fraction(other)
            if not c:
                return Polynomial.zero(self.vars)
            return Polynomial(self.vars, {e: cc * c for e, cc in self.terms.items()})
        self._check(other)
        if self.is_zero() or other.is_zero():
            return Polynomial.zero(self.vars)
        if self.total_degree() + other.total_degree() > _DEGREE_GUARD:
            raise DegreeOverflow(
                f"product degree {self.total_degree() + other.total_degree()} "
                f"exceeds guard {_DEGREE_GUARD}"
            )
        terms = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = terms.get(e, Fraction(0)) + c1 * c2
                if s:
                    terms[e] = s
                else:
                    del terms[e]
        return Polynomial(self.vars, terms)

    __rmul__ = __mul__
    __radd__ = __add__

    def __pow__(self, k):
        if k < 0:
            raise InputError("negative power of a polynomial")
        result = Polynomial.const(self.vars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base_needed = k > 1
            k >>= 1
            if base_needed and k:
                base = base * base
        return result

    def __eq__(self, other):
        return (
            isinstance(other, Polynomial)
            and self.vars == other.vars
            and self.terms == other.terms
        )

    def __bool__(self):
        return bool(self.terms)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.vars, frozenset(self.terms.items())))
        return self._hash

    # ----- calculus & evaluation -----------------------------------------
    def diff(self, name):
        i = self.vars.index(name)
        terms = {}
        for e, c in self.terms.items():
            if e[i] == 0:
                continue
            ne = list(e)
            ne[i] -= 1
            terms[tuple(ne)] = c * e[i]
        return Polynomial(self.vars, terms)

    def integrate(self, name):
        """Antiderivative in ``name`` with zero constant term."""
        i = self.vars.index(name)
        terms = {}
        for e, c in self.terms.items():
            ne = list(e)
            ne[i] += 1
            terms[tuple(ne)] = c / ne[i]
        return Polynomial(self.vars, terms)

    def evaluate(self, point):
        """Evaluate at {name: Fraction}; every variable must be assigned."""
        vals = [_as_fraction(point[v]) for v in self.vars]
        total = Fraction(0)
        for e, c in self.terms.items():
            m = c
            for v, k in zip(vals, e):
                if k:
                    m *= v ** k
            total += m
        return total

    def with_vars(self, variables):
        """Re-embed into a chart that contains all current variables."""
        variables = tuple(variables)
        idx = []
        for v in self.vars:
            try:
                idx.append(variables.index(v))
            except ValueError:
                raise ChartMismatch(f"target chart lacks variable {v!r}") from None
        terms = {}
        for e, c in self.terms.items():
            ne = [0] * len(variables)
            for pos, k in zip(idx, e):
                ne[pos] = k
            terms[tuple(ne)] = c
        return Polynomial(variables, terms)

    # ----- printing -------------------------------------------------------
    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for exps, c in self.sorted_terms():
            factors = []
            for v, k in zip(self.vars, exps):
                if k == 1:
                    factors.append(v)
                elif k > 1:
                    factors.append(f"{v}^{k}")
            if not factors:
                body = str(abs(c))
            elif abs(c) == 1:
                body = "*".join(factors)
            else:
                body = "*".join([str(abs(c))] + factors)
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        first_sign, first_body = parts[0]
        out = ("-" if first_sign == "-" else "") + first_body
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    __repr__ = __str__


# --------------------------------------------------------------------------
# gcd machinery (primitive PRS, recursing on the main variable)
# --------------------------------------------------------------------------

def _rational_content(p: Polynomial) -> Fraction:
    """Positive rational c with p/c integer-coefficient and primitive."""
    if p.is_zero():
        return Fraction(1)
    num = 0
    den = 1
    for c in p.terms.values():
        num = int_gcd(num, abs(c.numerator))
        den = den * c.denominator // int_gcd(den, c.denominator)
    return Fraction(num, den)


def _main_var_index(a: Polynomial, b: Polynomial):
    for i in range(len(a.vars) - 1, -1, -1):
        if any(e[i] for e in a.terms) or any(e[i] for e in b.terms):
            return i
    return None


def _univ_coeffs(p: Polynomial, i: int):
    """Coefficients of p as a univariate polynomial in vars[i].

    Returns a dict {degree: Polynomial with vars[i]-exponent zeroed}.
    """
    out = {}
    for e, c in p.terms.items():
        d = e[i]
        ne = list(e)
        ne[i] = 0
        cur = out.setdefault(d, {})
        cur[tuple(ne)] = cur.get(tuple(ne), Fraction(0)) + c
    return {d: Polynomial(p.vars, t) for d, t in out.items() if any(t.values())}


def _from_univ(coeffs, i, variables):
    terms = {}
    for d, poly in coeffs.items():
        for e, c in poly.terms.items():
            ne = list(e)
            ne[i] += d
            terms[tuple(ne)] = c
    return Polynomial(variables, terms)


def _mul_by_power(p: Polynomial, i: int, k: int):
    terms = {}
    for e, c in p.terms.items():
        ne = list(e)
        ne[i] += k
        terms[tuple(ne)] = c
    return Polynomial(p.vars, terms)


def _pseudo_rem(a: Polynomial, b: Polynomial, i: int):
    """Pseudo-remainder of a by b with respect to vars[i]."""
    da = a.degree_in(a.vars[i])
    db = b.degree_in(b.vars[i])
    if da < db:
        return a
    bc = _univ_coeffs(b, i)
    lb = bc[db]
    r = a
    dr = da
    while not r.is_zero():
        dr = r.degree_in(r.vars[i])
        if dr < db:
            break
        rc = _univ_coeffs(r, i)
        lr = rc[dr]
        r = r * lb - _mul_by_power(lr * b, i, dr - db)
    return r


def _primitive_part(p: Polynomial, i: int):
    """(content, primitive part) with respect to vars[i]; content over the rest."""
    coeffs = _univ_coeffs(p, i)
    cont = Polynomial.zero(p.vars)
    for d in sorted(coeffs):
        cont = poly_gcd(cont, coeffs[d])
        if cont.is_constant() and not cont.is_zero():
            cont = Polynomial.const(p.vars, 1)
            break
    if cont.is_zero():
        return Polynomial.const(p.vars, 1), p
    return cont, poly_divexact(p, cont)


def _normalize_sign(p: Polynomial) -> Polynomial:
    if p.is_zero():
        return p
    _, lc = p.leading()
    c = _rational_content(p)
    if lc < 0:
        c = -c
    return p * (1 / c)


def poly_gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    """gcd in Q[vars], normalized integer-primitive with positive leading
    coefficient.  Constants are units, so gcd(c, p) = 1 for c != 0."""
    if a.vars != b.vars:
        raise ChartMismatch("gcd of polynomials on different charts")
    if a.is_zero():
        return _normalize_sign(b)
    if b.is_zero():
        return _normalize_sign(a)
    if a.is_constant() or b.is_constant():
        return Polynomial.const(a.vars, 1)
    if a == b:
        return _normalize_sign(a)
    i = _main_var_index(a, b)
    if i is None:
        return Polynomial.const(a.vars, 1)
    ca, pa = _primitive_part(a, i)
    cb, pb = _primitive_part(b, i)
    cont = poly_gcd(ca, cb)
    if pa.degree_in(a.vars[i]) < pb.degree_in(a.vars[i]):
        pa, pb = pb, pa
    while True:
        if pb.is_zero():
            g = pa
            break
        if pb.degree_in(a.vars[i]) == 0:
            g = Polynomial.const(a.vars, 1)
            break
        r = _pseudo_rem(pa, pb, i)
        if r.is_zero():
            g = pb
            break
        _, r = _primitive_part(r, i)
        pa, pb = pb, r
    _, g = _primitive_part(g, i)
    return _normalize_sign(cont * g)


def poly_divexact(a: Polynomial, b: Polynomial) -> Polynomial:
    """Exact division a / b; raises if b does not divide a."""
    if b.is_zero():
        raise InputError("division by the zero polynomial")
    if b.is_constant():
        return a * (1 / b.constant_value())
    quot = Polynomial.zero(a.vars)
    rem = a
    be, bc = b.leading()
    while not rem.is_zero():
        re, rc = rem.leading()
        qe = tuple(x - y for x, y in zip(re, be))
        if any(e < 0 for e in qe):
            raise InputError("inexact polynomial division")
        t = Polynomial(a.vars, {qe: rc / bc})
        quot = quot + t
        rem = rem - t * b
    return quot


# --------------------------------------------------------------------------
# rational functions
# --------------------------------------------------------------------------

class RatFun:
    """Reduced rational function num/den; the denominator is monic in the
    graded-lex sense, so representations are unique."""

    __slots__ = ("num", "den")

    def __init__(self, num: Polynomial, den: Polynomial):
        if num.vars != den.vars:
            raise ChartMismatch("rational function chart mismatch")
        if den.is_zero():
            raise InputError("zero denominator")
        if not num.is_zero():
            g = poly_gcd(num, den)
            if not g.is_constant():
                num = poly_divexact(num, g)
                den = poly_divexact(den, g)
        else:
            den = Polynomial.const(den.vars, 1)
        _, lc = den.leading()
        if lc != 1:
            inv = 1 / lc
            num = num * inv
            den = den * inv
        self.num = num
        self.den = den

    # ----- constructors ---------------------------------------------------
    @classmethod
    def from_poly(cls, p: Polynomial):
        return cls(p, Polynomial.const(p.vars, 1))

    @classmethod
    def zero(cls, variables):
        return cls.from_poly(Polynomial.zero(variables))

    @classmethod
    def const(cls, variables, c):
        return cls.from_poly(Polynomial.const(variables, c))

    @classmethod
    def var(cls, variables, name):
        return cls.from_poly(Polynomial.var(variables, name))

    # ----- queries ----------------------------------------------------------
    @property
    def vars(self):
        return self.num.vars

    def is_zero(self):
        return self.num.is_zero()

    def is_polynomial(self):
        return self.den.is_constant()

    def as_polynomial(self):
        if not self.is_polynomial():
            raise InputError("not a polynomial")
        return self.num * (1 / self.den.constant_value())

    def __bool__(self):
        return not self.num.is_zero()

    # ----- arithmetic ---------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, RatFun):
            return other
        if isinstance(other, Polynomial):
            return RatFun.from_poly(other)
        if isinstance(other, (int, Fraction)):
            return RatFun.const(self.vars, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return RatFun(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFun(-self.num, self.den)

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
        return RatFun(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.is_zero():
            raise ZeroDivisionError("rational function division by zero")
        return RatFun(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        return other / self

    def __pow__(self, k):
        if k < 0:
            if self.is_zero():
                raise ZeroDivisionError("negative power of zero")
            return RatFun(self.den, self.num) ** (-k)
        return RatFun(self.num ** k, self.den ** k)

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    # ----- calculus & evaluation -----------------------------------------------
    def diff(self, name):
        n = self.num.diff(name) * self.den - self.num * self.den.diff(name)
        return RatFun(n, self.den * self.den)

    def evaluate(self, point):
        d = self.den.evaluate(point)
        if d == 0:
            raise ZeroDivisionError(f"pole at {point}")
        return self.num.evaluate(point) / d

    def with_vars(self, variables):
        return RatFun(self.num.with_vars(variables), self.den.with_vars(variables))

    def __str__(self):
        if self.is_polynomial():
            return str(self.as_polynomial())
        num = str(self.num)
        den = str(self.den)
        if len(self.num.terms) > 1:
            num = f"({num})"
        if len(self.den.terms) > 1:
            den = f"({den})"
        return f"{num}/{den}"

    __repr__ = __str__


# --------------------------------------------------------------------------
# expression parser
#
#   expr     := term (('+'|'-') term)*
#   term     := factor ('*' factor)*
#   factor   := base ('^' uint)?
#   base     := rational | ident | '(' expr ')'
#   rational := int ('/' uint)?
#   ident    := letter (letter|digit)*
#
# A leading unary minus on the first term is accepted as a convenience.
# --------------------------------------------------------------------------

class _Tokens:
    def __init__(self, text):
        self.text = text
        self.pos = 0

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take(self):
        ch = self.peek()
        self.pos += 1
        return ch


def _parse_uint(tk: _Tokens):
    tk.skip_ws()
    start = tk.pos
    while tk.pos < len(tk.text) and tk.text[tk.pos].isdigit():
        tk.pos += 1
    if tk.pos == start:
        raise ParseError("expected a number", start)
    return int(tk.text[start:tk.pos])


def _parse_base(tk: _Tokens, variables):
    ch = tk.peek()
    if ch == "(":
        tk.take()
        inner = _parse_expr(tk, variables)
        if tk.peek() != ")":
            raise ParseError("expected ')'", tk.pos)
        tk.take()
        return inner
    if ch.isdigit() or ch == "-":
        neg = False
        if ch == "-":
            tk.take()
            neg = True
        n = _parse_uint(tk)
        if tk.peek() == "/":
            tk.take()
            d = _parse_uint(tk)
            if d == 0:
                raise ParseError("zero denominator", tk.pos)
            val = Fraction(n, d)
        else:
            val = Fraction(n)
        return Polynomial.const(variables, -val if neg else val)
    if ch.isalpha():
        start = tk.pos
        while tk.pos < len(tk.text) and tk.text[tk.pos].isalnum():
            tk.pos += 1
        name = tk.text[start:tk.pos]
        if name not in variables:
            raise ParseError(f"unknown identifier {name!r}", start)
        return Polynomial.var(variables, name)
    raise ParseError(f"unexpected character {ch!r}" if ch else "unexpected end of input", tk.pos)


def _parse_factor(tk: _Tokens, variables):
    base = _parse_base(tk, variables)
    if tk.peek() == "^":
        tk.take()
        if tk.peek() == "-":
            raise ParseError("negative exponent", tk.pos)
        k = _parse_uint(tk)
        base = base ** k
    return base


def _parse_term(tk: _Tokens, variables):
    p = _parse_factor(tk, variables)
    while tk.peek() == "*":
        tk.take()
        p = p * _parse_factor(tk, variables)
    return p


def _parse_expr(tk: _Tokens, variables):
    negate = False
    if tk.peek() == "-":
        tk.take()
        negate = True
    p = _parse_term(tk, variables)
    if negate:
        p = -p
    while tk.peek() in ("+", "-"):
        op = tk.take()
        q = _parse_term(tk, variables)
        p = p + q if op == "+" else p - q
    return p


def parse_poly(text: str, chart) -> Polynomial:
    """Parse an expression over the given coordinate chart."""
    variables = tuple(chart)
    tk = _Tokens(text)
    p = _parse_expr(tk, variables)
    tk.skip_ws()
    if tk.pos != len(tk.text):
        raise ParseError(f"trailing input {tk.text[tk.pos:]!r}", tk.pos)
    return p


# --------------------------------------------------------------------------
# univariate real-root counting (Sturm), used for isomorphism fingerprints
# --------------------------------------------------------------------------

def _uni_trim(c):
    while c and not c[-1]:
        c.pop()
    return c


def _uni_rem(a, b):
    a = list(a)
    while len(a) >= len(b) and a:
        f = a[-1] / b[-1]
        shift = len(a) - len(b)
        for i, bc in enumerate(b):
            a[shift + i] -= f * bc
        _uni_trim(a)
    return a


def _uni_gcd(a, b):
    a, b = list(a), list(b)
    while b:
        a, b = b, _uni_rem(a, b)
    return a


def _uni_diff(a):
    return _uni_trim([a[i] * i for i in range(1, len(a))])


def _sign_changes(seq):
    signs = [s for s in seq if s]
    return sum(1 for x, y in zip(signs, signs[1:]) if (x > 0) != (y > 0))


def count_real_roots(coeffs) -> int:
    """Number of distinct real roots of a univariate polynomial given by its
    coefficient list (ascending powers, Fractions)."""
    c = _uni_trim([Fraction(x) for x in coeffs])
    if len(c) <= 1:
        return 0
    g = _uni_gcd(c, _uni_diff(c))
    if len(g) > 1:
        c = _uni_trim(_uni_divexact(c, g))
    chain = [c, _uni_diff(c)]
    while chain[-1]:
        chain.append([-x for x in _uni_rem(chain[-2], chain[-1])])
    chain.pop()
    at_minus = [p[-1] * (-1) ** (len(p) - 1) if p else Fraction(0) for p in chain]
    at_plus = [p[-1] if p else Fraction(0) for p in chain]
    return _sign_changes(at_minus) - _sign_changes(at_plus)


def _uni_divexact(a, b):
    a = list(a)
    q = [Fraction(0)] * (len(a) - len(b) + 1)
    while len(a) >= len(b) and a:
        f = a[-1] / b[-1]
        shift = len(a) - len(b)
        q[shift] = f
        for i, bc in enumerate(b):
            a[shift + i] -= f * bc
        _uni_trim(a)
    if a:
        raise InputError("inexact univariate division")
    return q
