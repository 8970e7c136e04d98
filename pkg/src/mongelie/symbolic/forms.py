"""Polynomial/rational differential forms with exterior calculus.

A degree-q form is stored as {strictly increasing index q-tuple: RatFun}.
Degree 0 is the single key ().
"""

from __future__ import annotations

from fractions import Fraction

from ..errors import ChartMismatch, InputError
from .poly import Polynomial, RatFun


def _sort_with_sign(idx):
    """Sort an index tuple, returning (sorted tuple, permutation sign).

    Repeated indices give sign 0.
    """
    idx = list(idx)
    sign = 1
    for i in range(1, len(idx)):
        j = i
        while j > 0 and idx[j - 1] > idx[j]:
            idx[j - 1], idx[j] = idx[j], idx[j - 1]
            sign = -sign
            j -= 1
    for a, b in zip(idx, idx[1:]):
        if a == b:
            return tuple(idx), 0
    return tuple(idx), sign


class DiffForm:
    __slots__ = ("chart", "degree", "terms")

    def __init__(self, chart, degree, terms):
        self.chart = tuple(chart)
        self.degree = int(degree)
        if self.degree < 0:
            raise InputError("negative form degree")
        clean = {}
        for idx, coeff in terms.items():
            if isinstance(coeff, Polynomial):
                coeff = RatFun.from_poly(coeff)
            elif isinstance(coeff, (int, Fraction)):
                coeff = RatFun.const(self.chart, coeff)
            if coeff.vars != self.chart:
                raise ChartMismatch("form coefficient chart mismatch")
            if coeff.is_zero():
                continue
            idx = tuple(int(i) for i in idx)
            if len(idx) != self.degree:
                raise InputError("index tuple length must equal the degree")
            if any(i < 0 or i >= len(self.chart) for i in idx):
                raise InputError("coordinate index out of range")
            if any(a >= b for a, b in zip(idx, idx[1:])):
                raise InputError("index tuples must be strictly increasing")
            clean[idx] = coeff
        self.terms = clean

    @classmethod
    def zero(cls, chart, degree=0):
        return cls(chart, degree, {})

    @classmethod
    def function(cls, chart, f):
        return cls(chart, 0, {(): f})

    @classmethod
    def d_coordinate(cls, chart, name):
        chart = tuple(chart)
        return cls(chart, 1, {(chart.index(name),): RatFun.const(chart, 1)})

    def is_zero(self):
        return not self.terms

    def _check(self, other):
        if not isinstance(other, DiffForm) or other.chart != self.chart:
            raise ChartMismatch("forms on different charts")

    def __add__(self, other):
        self._check(other)
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        if self.degree != other.degree:
            raise InputError("cannot add forms of different degree")
        terms = dict(self.terms)
        for idx, c in other.terms.items():
            s = terms.get(idx)
            s = c if s is None else s + c
            if s.is_zero():
                terms.pop(idx, None)
            else:
                terms[idx] = s
        return DiffForm(self.chart, self.degree, terms)

    def __neg__(self):
        return DiffForm(self.chart, self.degree, {i: -c for i, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, f):
        if isinstance(f, (int, Fraction)):
            f = RatFun.const(self.chart, f)
        return DiffForm(self.chart, self.degree, {i: f * c for i, c in self.terms.items()})

    def __eq__(self, other):
        return (
            isinstance(other, DiffForm)
            and self.chart == other.chart
            and (self.terms == other.terms if (self.terms or other.terms) else True)
        )

    def apply(self, *fields):
        """Evaluate a q-form on q vector fields, yielding a RatFun."""
        if len(fields) != self.degree:
            raise InputError("wrong number of field arguments")
        from itertools import permutations

        out = RatFun.zero(self.chart)
        for idx, coeff in self.terms.items():
            acc = RatFun.zero(self.chart)
            for perm in permutations(range(self.degree)):
                sign = _perm_sign(perm)
                prod = RatFun.const(self.chart, sign)
                for slot, which in enumerate(perm):
                    prod = prod * fields[which].components[idx[slot]]
                acc = acc + prod
            out = out + coeff * acc
        return out

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for idx in sorted(self.terms):
            coeff = self.terms[idx]
            basis = "^".join(f"d{self.chart[i]}" for i in idx) if idx else "1"
            parts.append(f"({coeff}) {basis}" if idx else f"({coeff})")
        return " + ".join(parts)

    __repr__ = __str__


def _perm_sign(perm):
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j = i
        length = 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def wedge(a: DiffForm, b: DiffForm) -> DiffForm:
    a._check(b)
    if a.is_zero() or b.is_zero():
        return DiffForm.zero(a.chart, a.degree + b.degree)
    terms = {}
    for ia, ca in a.terms.items():
        for ib, cb in b.terms.items():
            idx, sign = _sort_with_sign(ia + ib)
            if sign == 0:
                continue
            c = ca * cb
            if sign < 0:
                c = -c
            s = terms.get(idx)
            s = c if s is None else s + c
            if s.is_zero():
                terms.pop(idx, None)
            else:
                terms[idx] = s
    return DiffForm(a.chart, a.degree + b.degree, terms)


def exterior_derivative(w: DiffForm) -> DiffForm:
    """Coordinate exterior derivative d: degree q -> q+1."""
    chart = w.chart
    terms = {}
    for idx, coeff in w.terms.items():
        for j, name in enumerate(chart):
            dc = coeff.diff(name)
            if dc.is_zero():
                continue
            full, sign = _sort_with_sign((j,) + idx)
            if sign == 0:
                continue
            c = dc if sign > 0 else -dc
            s = terms.get(full)
            s = c if s is None else s + c
            if s.is_zero():
                terms.pop(full, None)
            else:
                terms[full] = s
    return DiffForm(chart, w.degree + 1, terms)
