import random

import pytest
from sympy import I, Rational as SympyRational
from sympy.polys.domains import QQ, QQ_I

from vir25.exceptions import ContractViolation, DomainError, UsageError
from vir25.scalars import (
    IMAG_UNIT,
    PuiseuxSeries,
    RationalFunction,
    X,
    binomial_series,
    clear_denominators,
    format_gaussian,
    format_rational,
    gaussian,
    parse_rational,
    rational,
    series_mul,
)


@pytest.mark.parametrize("text, expected", [
    ("3/4", QQ(3, 4)),
    ("-5/4", QQ(-5, 4)),
    ("7", QQ(7)),
    ("-0", QQ(0)),
    ("6/4", QQ(3, 2)),
])
def test_parse_rational_valid(text, expected):
    assert parse_rational(text) == expected


@pytest.mark.parametrize("text", ["1.5", "x", "1/0", "", "3/-4", "1//2"])
def test_parse_rational_malformed(text):
    with pytest.raises(UsageError):
        parse_rational(text)


def test_format_rational_forms():
    assert format_rational(QQ(-5, 4)) == "-5/4"
    assert format_rational(QQ(3)) == "3"
    assert format_rational(0) == "0"


def test_format_round_trip():
    for value in (QQ(9, 32), QQ(-55, 1764), QQ(-8), QQ(0)):
        assert parse_rational(format_rational(value)) == value


def test_format_gaussian():
    assert format_gaussian(QQ_I(QQ(1, 2), -1)) == {"re": "1/2", "im": "-1"}
    assert format_gaussian(3) == {"re": "3", "im": "0"}


def test_gaussian_coercion():
    assert gaussian(SympyRational(1, 2) + I) == QQ_I(QQ(1, 2), 1)
    assert gaussian(QQ(2, 3)) == QQ_I(QQ(2, 3), 0)
    assert IMAG_UNIT * IMAG_UNIT == gaussian(-1)


def test_rational_rejects_floats_and_complex():
    with pytest.raises(DomainError):
        rational(0.5)
    with pytest.raises(DomainError):
        rational(IMAG_UNIT)


def test_series_arithmetic():
    s = PuiseuxSeries.from_coefficients(QQ(-1, 2), [1, 2, 3], 2)
    t = PuiseuxSeries.from_coefficients(QQ(1, 2), [1, 1], 1)
    total = s + t
    assert total.leading_exponent == QQ(-1, 2)
    assert total.coefficients == (gaussian(1), gaussian(3), gaussian(4))
    assert (s - s).is_zero()
    assert s.scale(2).coefficient(QQ(3, 2)) == gaussian(6)


def test_series_coefficient_beyond_order():
    s = PuiseuxSeries.from_coefficients(0, [1, 1], 1)
    assert s.coefficient(-1) == QQ_I.zero
    with pytest.raises(ContractViolation):
        s.coefficient(2)


def test_series_non_integer_gap_is_contract_violation():
    with pytest.raises(ContractViolation):
        PuiseuxSeries.constant(1, 3) + PuiseuxSeries.constant(1, 3).shift(QQ(1, 2))


def test_series_derivative():
    s = PuiseuxSeries.from_coefficients(QQ(-1, 2), [1, 1], 1)
    d = s.derivative()
    assert d.leading_exponent == QQ(-3, 2)
    assert d.coefficients == (gaussian(QQ(-1, 2)), gaussian(QQ(1, 2)))


def test_series_product_truncates_to_smaller_order():
    s = PuiseuxSeries.from_coefficients(0, [1, 1, 1, 1], 3)
    t = PuiseuxSeries.from_coefficients(0, [1, -1], 1)
    assert (s * t).order == 1
    assert (s * t).coefficients == (gaussian(1), gaussian(0))


def test_binomial_series():
    s = binomial_series(QQ(5, 2), 3)
    assert s.coefficients == tuple(gaussian(a) for a in (1, QQ(-5, 2), QQ(15, 8), QQ(-5, 16)))
    assert binomial_series(-3, 2).coefficients == tuple(gaussian(a) for a in (1, 3, 6))


def test_rational_function_normalization():
    f = RationalFunction.from_expr((2 * X - 2) / (4 * X * (X - 1)))
    assert f.as_expr() == 1 / (2 * X)
    assert f.denominator.LC() == 1
    assert f.evaluate(QQ(1, 3)) == QQ(3, 2)
    with pytest.raises(DomainError):
        f.evaluate(0)


def test_rational_function_reflection_and_derivative():
    f = RationalFunction.from_expr(1 / X)
    assert f.compose_reflection().evaluate(QQ(1, 4)) == QQ(4, 3)
    assert f.derivative().evaluate(2) == QQ(-1, 4)


def test_clear_denominators():
    polys = clear_denominators([RationalFunction.from_expr(1 / X), RationalFunction.from_expr(1 / (1 - X))])
    assert [p.as_expr() for p in polys] == [X - 1, -X]


def _random_rational(rng):
    return QQ(rng.randint(-20, 20), rng.randint(1, 9))


def _random_gaussian(rng):
    return QQ_I(_random_rational(rng), _random_rational(rng))


def _random_series(rng, exponent, order=6):
    return PuiseuxSeries.from_coefficients(exponent, [_random_gaussian(rng) for _ in range(order + 1)], order)


def test_gaussian_field_axioms():
    rng = random.Random(25)
    for _ in range(50):
        x, y, z = (_random_gaussian(rng) for _ in range(3))
        assert (x + y) + z == x + (y + z)
        assert (x * y) * z == x * (y * z)
        assert x * (y + z) == x * y + x * z
        assert x * y == y * x
        if x != QQ_I.zero:
            assert x * (QQ_I.one / x) == QQ_I.one


def test_norm_is_real_and_non_negative():
    rng = random.Random(1)
    for _ in range(50):
        z = _random_gaussian(rng)
        norm = z * QQ_I(z.x, -z.y)
        assert norm.y == 0
        assert norm.x >= 0
        assert (norm.x == 0) == (z == QQ_I.zero)


def test_series_mul_is_commutative_and_associative():
    rng = random.Random(7)
    for _ in range(10):
        a = _random_series(rng, QQ(-1, 2))
        b = _random_series(rng, QQ(5, 2))
        c = _random_series(rng, 0)
        assert series_mul(a, b) == series_mul(b, a)
        assert series_mul(series_mul(a, b), c) == series_mul(a, series_mul(b, c))


def test_binomial_series_exponents_add():
    rng = random.Random(3)
    for _ in range(20):
        a, b = _random_rational(rng), _random_rational(rng)
        assert binomial_series(a, 8) * binomial_series(b, 8) == binomial_series(a + b, 8)
