import pytest
from sympy import cancel
from sympy.polys.domains import QQ

from vir25.bpz import (
    LinearODE,
    connection_coefficient,
    derive_bpz,
    f1,
    f2,
    frobenius_solve,
    hypergeometric_prefactor,
    hypergeometric_reduce,
    indicial_exponents,
    phi1,
    phi2,
    rigidity_ode,
    rigidity_scalar,
    verify_solution,
)
from vir25.exceptions import ContractViolation, DomainError, LogarithmicCaseError, UnsupportedParametersError
from vir25.scalars import X, PuiseuxSeries, RationalFunction, gaussian

ORDER = 20


@pytest.fixture(scope="module")
def ode():
    return rigidity_ode()


def test_derived_equation(ode):
    p2, p1, p0 = (f.as_expr() for f in ode.coefficients)
    assert cancel(p2 - X * (1 - X)) == 0
    assert cancel(p1 - (2 * X - 1)) == 0
    expected = QQ.to_sympy(QQ(-5, 2)) - QQ.to_sympy(QQ(5, 4)) * (X / (1 - X) + (1 - X) / X)
    assert cancel(p0 - expected) == 0


def test_derive_bpz_out_of_range():
    with pytest.raises(UnsupportedParametersError, match="out of implemented range"):
        derive_bpz(25, QQ(1, 3), QQ(1, 3))


def test_indicial_exponents(ode):
    assert indicial_exponents(ode, 0) == [QQ(-1, 2), QQ(5, 2)]
    assert indicial_exponents(ode, 1) == [QQ(-1, 2), QQ(5, 2)]


def test_reflection_is_symmetric(ode):
    reflected = ode.reflected()
    for a, b in zip(ode.coefficients, reflected.coefficients):
        assert cancel(a.as_expr() - b.as_expr()) == 0


def test_frobenius_matches_phi2(ode):
    assert frobenius_solve(ode, 0, QQ(5, 2), ORDER) == phi2(ORDER)


def test_frobenius_resonant_value_gives_phi1(ode):
    solution = frobenius_solve(ode, 0, QQ(-1, 2), ORDER, resonant_values={3: QQ(25, 16)})
    assert solution == phi1(ORDER)


def test_frobenius_default_resonant_value(ode):
    solution = frobenius_solve(ode, 0, QQ(-1, 2), ORDER)
    assert solution == phi1(ORDER) - phi2(ORDER).scale(QQ(25, 16))
    assert verify_solution(ode, solution).is_zero()


def test_frobenius_rejects_non_resonant_value(ode):
    with pytest.raises(ContractViolation):
        frobenius_solve(ode, 0, QQ(-1, 2), ORDER, resonant_values={2: 1})


def test_frobenius_rejects_non_exponent(ode):
    with pytest.raises(DomainError):
        frobenius_solve(ode, 0, QQ(1, 2), ORDER)


def test_logarithmic_case():
    # x φ'' + φ = 0 has exponents 0 and 1 and a logarithmic second solution
    ode = LinearODE((RationalFunction.from_expr(X), RationalFunction.polynomial(0), RationalFunction.polynomial(1)))
    assert indicial_exponents(ode, 0) == [0, 1]
    with pytest.raises(LogarithmicCaseError):
        frobenius_solve(ode, 0, 0, 5)


def test_closed_forms_solve_the_equation(ode):
    assert verify_solution(ode, phi1(ORDER)).is_zero()
    assert verify_solution(ode, phi2(ORDER)).is_zero()
    assert not verify_solution(ode, PuiseuxSeries.from_coefficients(QQ(-1, 2), [1], ORDER)).is_zero()


def test_phi1_leading_terms():
    s = phi1(3)
    assert s.leading_exponent == QQ(-1, 2)
    assert s.coefficients == tuple(gaussian(a) for a in (1, QQ(-3, 2), QQ(-5, 8), QQ(25, 16)))


def test_hypergeometric_reduction(ode):
    reduced = hypergeometric_reduce(ode, QQ(5, 2))
    p2, p1, p0 = (f.as_expr() for f in reduced.coefficients)
    assert cancel(p2 - X * (1 - X)) == 0
    assert cancel(p1 - 4 * (1 - 2 * X)) == 0
    assert cancel(p0 + 10) == 0
    assert frobenius_solve(reduced, 0, -3, ORDER) == f1(ORDER)
    assert verify_solution(reduced, f2(ORDER)).is_zero()


def test_prefactor_times_f1_is_phi1():
    assert hypergeometric_prefactor(ORDER) * f1(ORDER) == phi1(ORDER)


def test_connection_coefficient():
    assert connection_coefficient(10) == QQ(1, 2)


def test_rigidity_scalar():
    report = rigidity_scalar(10)
    assert report.c0 == QQ(1, 2)
    assert report.c3 == QQ(9, 32)
    assert report.a == QQ(1, 2)
    assert report.b == QQ(-1, 2)
    assert report.rigidity_scalar == QQ(1, 2)
    assert report.pairings == {"L-3": QQ(-11, 2), "L-1L-2": QQ(17, 4)}
    assert report.coefficients == (QQ(1, 2), QQ(-3, 4), QQ(-5, 16), QQ(9, 32))


def test_rigidity_scalar_is_normalization_independent():
    report = rigidity_scalar(10, scale=2)
    assert report.c0 == 1
    assert report.c3 == QQ(9, 16)
    assert report.rigidity_scalar == QQ(1, 2)


def test_frobenius_pair_is_independent(ode):
    first = frobenius_solve(ode, 0, QQ(-1, 2), ORDER)
    second = frobenius_solve(ode, 0, QQ(5, 2), ORDER)
    rows = [[first.coefficient(e), second.coefficient(e)] for e in (QQ(-1, 2), QQ(5, 2))]
    assert rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0] != gaussian(0)


def test_linear_combinations_solve_the_equation(ode):
    assert verify_solution(ode, phi1(ORDER) + phi2(ORDER)).is_zero()
    combination = phi1(ORDER).scale(QQ(3, 7)) - phi2(ORDER).scale(QQ(-2, 5))
    assert verify_solution(ode, combination).is_zero()


@pytest.mark.parametrize("reduced_exponent, exponent, resonant", [
    (-3, QQ(-1, 2), {3: QQ(25, 16)}),
    (0, QQ(5, 2), None),
])
def test_reduced_solution_times_prefactor(ode, reduced_exponent, exponent, resonant):
    reduced = hypergeometric_reduce(ode, QQ(5, 2))
    via_reduction = hypergeometric_prefactor(ORDER) * frobenius_solve(reduced, 0, reduced_exponent, ORDER)
    assert via_reduction == frobenius_solve(ode, 0, exponent, ORDER, resonant_values=resonant)
