import logging
import re
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import sympy
from sympy import Poly, Symbol, cancel, fraction, together
from sympy.core.sympify import SympifyError
from sympy.polys.domains import QQ, QQ_I
from sympy.polys.domains.gaussiandomains import GaussianRational
from sympy.polys.polyerrors import CoercionFailed

from .exceptions import ContractViolation, DomainError, UsageError

logger = logging.getLogger(__name__)

Rational = QQ.dtype

X = Symbol("x")

IMAG_UNIT = QQ_I(0, 1)

_RATIONAL_PATTERN = re.compile(r"^-?\d+(/\d+)?$")


def rational(value) -> Rational:
    """Coerce ints, strings, sympy numbers and real Gaussian rationals into QQ."""
    if isinstance(value, str):
        return parse_rational(value)
    if isinstance(value, GaussianRational):
        if value.y != 0:
            raise DomainError(f"{format_gaussian(value)} is not a rational number")
        return value.x
    if isinstance(value, sympy.Basic):
        try:
            return QQ.from_sympy(value)
        except CoercionFailed as e:
            raise DomainError(f"{value} is not an exact rational") from e
    if isinstance(value, float):
        raise DomainError(f"floating point value {value} is not exact")
    return QQ.convert(value)


def gaussian(value) -> GaussianRational:
    """Coerce a scalar into QQ(i). QQ_I elements never compare equal to plain ints, so always go through here."""
    if isinstance(value, GaussianRational):
        return value
    if isinstance(value, sympy.Basic):
        try:
            return QQ_I.from_sympy(sympy.expand(value))
        except CoercionFailed as e:
            raise DomainError(f"{value} is not a Gaussian rational") from e
    return QQ_I(rational(value), QQ.zero)


def is_zero(value) -> bool:
    if isinstance(value, GaussianRational):
        return value.x == 0 and value.y == 0
    return value == 0


def as_integer(value) -> int:
    q = rational(value)
    if q.denominator != 1:
        raise DomainError(f"{format_rational(q)} is not an integer")
    return int(q.numerator)


def parse_rational(text: str) -> Rational:
    """Parse "p/q", "p" or "-p/q" into an exact rational."""
    stripped = text.strip()
    if not _RATIONAL_PATTERN.match(stripped):
        raise UsageError(f"malformed rational {text!r}; expected p/q or an integer")
    try:
        value = sympy.Rational(stripped)
        if not value.is_Rational:
            raise ValueError(stripped)
        return QQ.from_sympy(value)
    except (TypeError, ValueError, ZeroDivisionError, SympifyError, CoercionFailed) as e:
        raise UsageError(f"malformed rational {text!r}: {str(e)}") from e


def format_rational(value) -> str:
    q = rational(value)
    if q.denominator == 1:
        return f"{q.numerator}"
    return f"{q.numerator}/{q.denominator}"


def format_gaussian(value) -> Dict[str, str]:
    z = gaussian(value)
    return {"re": format_rational(z.x), "im": format_rational(z.y)}


def _integer_gap(a: Rational, b: Rational) -> int:
    gap = a - b
    if gap.denominator != 1:
        raise ContractViolation(
            f"series exponents {format_rational(a)} and {format_rational(b)} do not differ by an integer"
        )
    return int(gap.numerator)


@dataclass(frozen=True, eq=False)
class PuiseuxSeries:
    """x^leading_exponent * (a_0 + a_1 x + ... + a_order x^order) + O(x^(leading_exponent + order + 1))."""
    leading_exponent: Rational
    coefficients: Tuple[GaussianRational, ...]

    def __post_init__(self):
        if not self.coefficients:
            raise ContractViolation("a truncated series needs at least one coefficient")
        object.__setattr__(self, "leading_exponent", rational(self.leading_exponent))
        object.__setattr__(self, "coefficients", tuple(gaussian(a) for a in self.coefficients))

    @property
    def order(self) -> int:
        return len(self.coefficients) - 1

    @classmethod
    def from_coefficients(cls, exponent, coefficients: Iterable, order: Optional[int] = None) -> "PuiseuxSeries":
        values = [gaussian(a) for a in coefficients]
        if order is None:
            order = max(len(values) - 1, 0)
        values = values[: order + 1]
        values.extend([QQ_I.zero] * (order + 1 - len(values)))
        return cls(exponent, tuple(values))

    @classmethod
    def constant(cls, value, order: int) -> "PuiseuxSeries":
        return cls.from_coefficients(QQ.zero, [value], order)

    @classmethod
    def from_polynomial(cls, poly: Poly, order: int) -> "PuiseuxSeries":
        ascending = [QQ.from_sympy(a) for a in reversed(poly.all_coeffs())]
        return cls.from_coefficients(QQ.zero, ascending, order)

    def coefficient(self, exponent) -> GaussianRational:
        """Coefficient of x^exponent, with the exponent given absolutely."""
        n = _integer_gap(rational(exponent), self.leading_exponent)
        if n < 0:
            return QQ_I.zero
        if n > self.order:
            raise ContractViolation(f"x^{format_rational(exponent)} lies beyond the truncation order")
        return self.coefficients[n]

    def truncate(self, order: int) -> "PuiseuxSeries":
        if order > self.order:
            raise ContractViolation(f"cannot extend a series of order {self.order} to order {order}")
        return PuiseuxSeries(self.leading_exponent, self.coefficients[: order + 1])

    def shift(self, exponent) -> "PuiseuxSeries":
        """Multiply by x^exponent."""
        return PuiseuxSeries(self.leading_exponent + rational(exponent), self.coefficients)

    def scale(self, value) -> "PuiseuxSeries":
        c = gaussian(value)
        return PuiseuxSeries(self.leading_exponent, tuple(c * a for a in self.coefficients))

    def derivative(self) -> "PuiseuxSeries":
        e = self.leading_exponent
        return PuiseuxSeries(
            e - 1,
            tuple(gaussian(e + n) * a for n, a in enumerate(self.coefficients)),
        )

    def is_zero(self, through: Optional[int] = None) -> bool:
        last = self.order if through is None else min(through, self.order)
        return all(is_zero(a) for a in self.coefficients[: last + 1])

    def __add__(self, other):
        if not isinstance(other, PuiseuxSeries):
            return NotImplemented
        _integer_gap(self.leading_exponent, other.leading_exponent)
        base = min(self.leading_exponent, other.leading_exponent)
        top = min(self.leading_exponent + self.order, other.leading_exponent + other.order)
        order = _integer_gap(top, base)
        coefficients = [QQ_I.zero] * (order + 1)
        for series in (self, other):
            offset = _integer_gap(series.leading_exponent, base)
            for n, a in enumerate(series.coefficients):
                if offset + n > order:
                    break
                coefficients[offset + n] += a
        return PuiseuxSeries(base, tuple(coefficients))

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        if not isinstance(other, PuiseuxSeries):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, PuiseuxSeries):
            return series_mul(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __eq__(self, other):
        if not isinstance(other, PuiseuxSeries):
            return NotImplemented
        gap = self.leading_exponent - other.leading_exponent
        if gap.denominator != 1:
            return self.is_zero() and other.is_zero()
        return (self - other).is_zero()

    __hash__ = None

    def __repr__(self):
        terms = ", ".join(format_rational(a.x) if a.y == 0 else str(a) for a in self.coefficients)
        return f"PuiseuxSeries(x^{format_rational(self.leading_exponent)} * [{terms}] + O(x^{self.order + 1}))"


def series_mul(a: PuiseuxSeries, b: PuiseuxSeries) -> PuiseuxSeries:
    """Cauchy product, truncated to the smaller of the two valid orders."""
    order = min(a.order, b.order)
    coefficients = []
    for n in range(order + 1):
        total = QQ_I.zero
        for k in range(n + 1):
            total += a.coefficients[k] * b.coefficients[n - k]
        coefficients.append(total)
    return PuiseuxSeries(a.leading_exponent + b.leading_exponent, tuple(coefficients))


def binomial_series(alpha, order: int) -> PuiseuxSeries:
    """Expansion of (1 - x)^alpha through x^order."""
    if order < 0:
        raise DomainError(f"truncation order must be non-negative, got {order}")
    a = rational(alpha)
    coefficients = [QQ.one]
    for n in range(1, order + 1):
        coefficients.append(coefficients[-1] * (QQ(n - 1) - a) / QQ(n))
    return PuiseuxSeries.from_coefficients(QQ.zero, coefficients, order)


def _poly(expr) -> Poly:
    return Poly(expr, X, domain=QQ)


@dataclass(frozen=True)
class RationalFunction:
    """numerator / denominator in x over QQ, kept reduced with a monic denominator."""
    numerator: Poly
    denominator: Poly

    def __post_init__(self):
        if self.denominator.is_zero:
            raise DomainError("rational function with zero denominator")
        p, q = self.numerator.cancel(self.denominator, include=True)
        lc = q.LC()
        object.__setattr__(self, "numerator", _poly(p.as_expr() / lc))
        object.__setattr__(self, "denominator", _poly(q.as_expr() / lc))

    @classmethod
    def from_expr(cls, expr) -> "RationalFunction":
        num, den = fraction(cancel(together(sympy.sympify(expr))))
        return cls(_poly(num), _poly(den))

    @classmethod
    def polynomial(cls, expr) -> "RationalFunction":
        return cls(_poly(expr), _poly(1))

    def as_expr(self):
        return self.numerator.as_expr() / self.denominator.as_expr()

    @property
    def is_polynomial(self) -> bool:
        return self.denominator.degree() == 0

    def evaluate(self, point) -> Rational:
        x0 = rational(point)
        den = self.denominator.eval(QQ.to_sympy(x0))
        if den == 0:
            raise DomainError(f"rational function has a pole at x = {format_rational(x0)}")
        return rational(self.numerator.eval(QQ.to_sympy(x0)) / den)

    def derivative(self) -> "RationalFunction":
        p, q = self.numerator, self.denominator
        return RationalFunction(p.diff(X) * q - p * q.diff(X), q * q)

    def compose_reflection(self) -> "RationalFunction":
        """Substitute x -> 1 - x."""
        reflection = _poly(1 - X)
        return RationalFunction(self.numerator.compose(reflection), self.denominator.compose(reflection))

    def __add__(self, other):
        other = _as_rational_function(other)
        return RationalFunction(
            self.numerator * other.denominator + other.numerator * self.denominator,
            self.denominator * other.denominator,
        )

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.numerator, self.denominator)

    def __sub__(self, other):
        return self + (-_as_rational_function(other))

    def __mul__(self, other):
        other = _as_rational_function(other)
        return RationalFunction(self.numerator * other.numerator, self.denominator * other.denominator)

    __rmul__ = __mul__

    def __str__(self):
        return str(sympy.factor(self.as_expr()))


def _as_rational_function(value) -> RationalFunction:
    if isinstance(value, RationalFunction):
        return value
    return RationalFunction.polynomial(QQ.to_sympy(rational(value)))


def clear_denominators(functions: Sequence[RationalFunction]) -> List[Poly]:
    """Multiply a family of rational functions by the lcm of their denominators."""
    common = _poly(1)
    for f in functions:
        common = common.lcm(f.denominator)
    return [f.numerator * common.exquo(f.denominator) for f in functions]


def poly_coefficients(poly: Poly) -> List[Rational]:
    """Ascending coefficients of a polynomial in x."""
    if poly.is_zero:
        return [QQ.zero]
    return [QQ.from_sympy(a) for a in reversed(poly.all_coeffs())]
