"""Vector fields with rational-function components and their Lie calculus."""

from __future__ import annotations

from fractions import Fraction

from ..errors import ChartMismatch, InputError
from .poly import Polynomial, RatFun


class VectorField:
    """A vector field on an ordered coordinate chart."""

    __slots__ = ("chart", "components")

    def __init__(self, chart, components):
        self.chart = tuple(chart)
        comps = []
        for c in components:
            if isinstance(c, Polynomial):
                c = RatFun.from_poly(c)
            elif isinstance(c, (int, Fraction)):
                c = RatFun.const(self.chart, c)
            if c.vars != self.chart:
                raise ChartMismatch("component chart mismatch")
            comps.append(c)
        if len(comps) != len(self.chart):
            raise InputError("component count must equal chart length")
        self.components = tuple(comps)

    @classmethod
    def zero(cls, chart):
        chart = tuple(chart)
        z = RatFun.zero(chart)
        return cls(chart, [z] * len(chart))

    @classmethod
    def coordinate(cls, chart, name):
        chart = tuple(chart)
        comps = [RatFun.const(chart, 1 if v == name else 0) for v in chart]
        if name not in chart:
            raise InputError(f"unknown coordinate {name!r}")
        return cls(chart, comps)

    def component(self, name):
        return self.components[self.chart.index(name)]

    def __add__(self, other):
        self._check(other)
        return VectorField(self.chart, [a + b for a, b in zip(self.components, other.components)])

    def __sub__(self, other):
        self._check(other)
        return VectorField(self.chart, [a - b for a, b in zip(self.components, other.components)])

    def __neg__(self):
        return VectorField(self.chart, [-a for a in self.components])

    def scale(self, f):
        """Multiply by a scalar or a RatFun coefficient."""
        if isinstance(f, (int, Fraction)):
            f = RatFun.const(self.chart, f)
        return VectorField(self.chart, [f * a for a in self.components])

    def is_zero(self):
        return all(c.is_zero() for c in self.components)

    def __eq__(self, other):
        return (
            isinstance(other, VectorField)
            and self.chart == other.chart
            and self.components == other.components
        )

    def _check(self, other):
        if not isinstance(other, VectorField) or other.chart != self.chart:
            raise ChartMismatch("vector fields on different charts")

    def apply(self, f: RatFun) -> RatFun:
        """Directional derivative of a function along the field."""
        if isinstance(f, Polynomial):
            f = RatFun.from_poly(f)
        if f.vars != self.chart:
            raise ChartMismatch("function chart mismatch")
        out = RatFun.zero(self.chart)
        for name, comp in zip(self.chart, self.components):
            if not comp.is_zero():
                out = out + comp * f.diff(name)
        return out

    def evaluate(self, point):
        return tuple(c.evaluate(point) for c in self.components)

    def with_chart(self, chart):
        chart = tuple(chart)
        z = RatFun.zero(chart)
        comps = [z] * len(chart)
        for name, c in zip(self.chart, self.components):
            comps[chart.index(name)] = c.with_vars(chart)
        return VectorField(chart, comps)

    def __str__(self):
        parts = [f"({c})*d_{name}" for name, c in zip(self.chart, self.components) if not c.is_zero()]
        return " + ".join(parts) if parts else "0"

    __repr__ = __str__


def lie_bracket(x: VectorField, y: VectorField) -> VectorField:
    """[X, Y]^k = sum_j (X^j d_j Y^k - Y^j d_j X^k)."""
    x._check(y)
    chart = x.chart
    comps = []
    for k in range(len(chart)):
        acc = RatFun.zero(chart)
        yk = y.components[k]
        xk = x.components[k]
        for j, name in enumerate(chart):
            xj = x.components[j]
            yj = y.components[j]
            if not xj.is_zero():
                acc = acc + xj * yk.diff(name)
            if not yj.is_zero():
                acc = acc - yj * xk.diff(name)
        comps.append(acc)
    return VectorField(chart, comps)


def lie_derivative(x: VectorField, f) -> RatFun:
    """Derivative of the function f along x."""
    return x.apply(f)
