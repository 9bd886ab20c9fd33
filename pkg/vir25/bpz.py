import logging
from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Tuple

from sympy import Poly, Symbol, roots
from sympy.polys.domains import QQ

from .config import default_order
from .correlator import (
    compute_c3,
    compute_pi3,
    pairing_coefficients,
    reduce_pairing,
    rigidity_contexts,
)
from .exceptions import ContractViolation, DomainError, LogarithmicCaseError, UnsupportedParametersError
from .scalars import (
    X,
    PuiseuxSeries,
    Rational,
    RationalFunction,
    binomial_series,
    clear_denominators,
    format_rational,
    poly_coefficients,
    rational,
)
from .verma import HWModuleDescriptor, PBWVector, singular_vector

logger = logging.getLogger(__name__)

_S = Symbol("s")


@dataclass(frozen=True)
class LinearODE:
    """coefficients[0] φ'' + coefficients[1] φ' + coefficients[2] φ = 0."""
    coefficients: Tuple[RationalFunction, RationalFunction, RationalFunction]

    @property
    def order(self) -> int:
        return 2

    def cleared(self) -> List[Poly]:
        return clear_denominators(self.coefficients)

    def reflected(self) -> "LinearODE":
        """The equation for g(u) = φ(1 - u)."""
        p2, p1, p0 = (f.compose_reflection() for f in self.coefficients)
        return LinearODE((p2, -p1, p0))

    def __str__(self):
        p2, p1, p0 = self.coefficients
        return f"({p2})·φ'' + ({p1})·φ' + ({p0})·φ = 0"


@dataclass(frozen=True)
class RigidityReport:
    c0: Rational
    c3: Rational
    a: Rational
    b: Rational
    rigidity_scalar: Rational
    pairings: Dict[str, Rational]
    pi3: PBWVector
    coefficients: Tuple[Rational, ...]


def derive_bpz(c, h_deg, h_other) -> LinearODE:
    """
    Second-order equation for <w', Y(w1, 1) Y(v, x) w2> when v has a level-2 singular vector.

    v has weight h_deg; w', w1 and w2 are primaries of weight h_other. With the singular vector
    (L_{-1}^2 - κ L_{-2}) v, the iterate formula for L_{-2} together with L_0 and L_{-1}
    homogeneity gives
        φ'' = κ [(x/(1-x) + (x-1)/x) φ' + (-Δ/(1-x) + h1/(1-x)^2 - Δ/x + h2/x^2) φ],
    Δ = h' - h1 - h_deg - h2, which is then multiplied through by x(1-x).
    """
    c, h_deg, h_other = rational(c), rational(h_deg), rational(h_other)
    module = HWModuleDescriptor.verma(c, h_deg)
    candidates = [w for w in singular_vector(module, 2) if w.coefficient((1, 1)) != 0]
    if not candidates:
        logger.error(f"No level-2 singular vector in {module}")
        raise UnsupportedParametersError(
            f"out of implemented range: V({format_rational(c)}, {format_rational(h_deg)}) has no level-2 singular vector"
        )
    kappa = -rational(candidates[0].coefficient((2,)))
    logger.info(f"Deriving BPZ equation with L(-1)^2 = {format_rational(kappa)}·L(-2) on the degenerate field")

    h_out = h_left = h_right = h_other
    x = X
    k = QQ.to_sympy(kappa)
    delta = QQ.to_sympy(h_out - h_left - h_deg - h_right)
    h1, h2 = QQ.to_sympy(h_left), QQ.to_sympy(h_right)
    first = x / (1 - x) + (x - 1) / x
    zeroth = -delta / (1 - x) + h1 / (1 - x) ** 2 - delta / x + h2 / x ** 2
    clearing = x * (1 - x)
    return LinearODE((
        RationalFunction.from_expr(clearing),
        RationalFunction.from_expr(-k * clearing * first),
        RationalFunction.from_expr(-k * clearing * zeroth),
    ))


def rigidity_ode() -> LinearODE:
    return derive_bpz(25, QQ(-5, 4), QQ(-5, 4))


class _EulerForm:
    """Coefficients of x^2 P φ'' + x Q φ' + R φ around x = 0, with P(0) != 0."""

    def __init__(self, ode: LinearODE):
        p2, p1, p0 = (poly_coefficients(p) for p in ode.cleared())
        valuation = next(i for i, a in enumerate(p2) if a != 0)
        shift = max(0, 2 - valuation)
        p2, p1, p0 = ([QQ.zero] * shift + p for p in (p2, p1, p0))
        valuation += shift
        self._columns = (p2, p1, p0)
        self._valuation = valuation
        for exponent_drop, coefficients in ((1, p1), (2, p0)):
            if any(a != 0 for a in coefficients[: valuation - exponent_drop]):
                raise DomainError("x = 0 is an irregular singular point")

    def _coefficient(self, column: int, index: int) -> Rational:
        values = self._columns[column]
        return values[index] if 0 <= index < len(values) else QQ.zero

    def term(self, j: int, s: Rational) -> Rational:
        k = self._valuation
        return (
            self._coefficient(0, k + j) * s * (s - 1)
            + self._coefficient(1, k - 1 + j) * s
            + self._coefficient(2, k - 2 + j)
        )

    @property
    def reach(self) -> int:
        return max(len(column) for column in self._columns)

    def indicial_polynomial(self) -> Poly:
        a, b, c = (QQ.to_sympy(self.term(0, v)) for v in (QQ(0), QQ(1), QQ(2)))
        # quadratic through F(0) = a, F(1) = b, F(2) = c
        return Poly(a + (b - a) * _S + (c - 2 * b + a) * _S * (_S - 1) / 2, _S, domain=QQ)


def _at_point(ode: LinearODE, point: int) -> LinearODE:
    if point == 0:
        return ode
    if point == 1:
        return ode.reflected()
    raise ContractViolation(f"series solutions are computed at 0 or 1, not {point}")


def indicial_exponents(ode: LinearODE, point: int = 0) -> List[Rational]:
    euler = _EulerForm(_at_point(ode, point))
    found = roots(euler.indicial_polynomial())
    exponents = []
    for root in found:
        if not root.is_Rational:
            raise DomainError(f"indicial root {root} is not rational")
        exponents.append(QQ.from_sympy(root))
    return sorted(exponents)


def frobenius_solve(
    ode: LinearODE,
    point: int,
    exponent,
    order: Optional[int] = None,
    resonant_values: Optional[Mapping[int, object]] = None,
) -> PuiseuxSeries:
    """
    Series solution u^exponent (1 + O(u)) with u = x at point 0 and u = 1 - x at point 1.

    At a resonant index, where the indicial polynomial vanishes again, the obstruction must be
    zero and the free coefficient is taken from `resonant_values` (default 0).
    """
    order = default_order(order)
    exponent = rational(exponent)
    resonant_values = dict(resonant_values or {})
    euler = _EulerForm(_at_point(ode, point))
    if euler.term(0, exponent) != 0:
        raise DomainError(f"{format_rational(exponent)} is not an indicial exponent at x = {point}")

    coefficients = [QQ.one]
    for n in range(1, order + 1):
        obstruction = QQ.zero
        for j in range(1, min(n, euler.reach) + 1):
            obstruction -= coefficients[n - j] * euler.term(j, exponent + n - j)
        leading = euler.term(0, exponent + n)
        if leading != 0:
            if n in resonant_values:
                raise ContractViolation(f"index {n} is not resonant for exponent {format_rational(exponent)}")
            coefficients.append(obstruction / leading)
        elif obstruction != 0:
            logger.error(f"Resonance at index {n} for exponent {format_rational(exponent)} is obstructed")
            raise LogarithmicCaseError(
                f"logarithmic case: exponent {format_rational(exponent)} is obstructed at index {n}"
            )
        else:
            logger.debug(f"Free coefficient at resonant index {n}")
            coefficients.append(rational(resonant_values.get(n, 0)))
    return PuiseuxSeries.from_coefficients(exponent, coefficients, order)


def verify_solution(ode: LinearODE, s: PuiseuxSeries) -> PuiseuxSeries:
    """Residual of the cleared equation evaluated on a truncated series."""
    p2, p1, p0 = ode.cleared()
    reach = max(s.order, p2.degree(), p1.degree(), p0.degree())
    first = s.derivative()
    second = first.derivative()
    return (
        PuiseuxSeries.from_polynomial(p2, reach) * second
        + PuiseuxSeries.from_polynomial(p1, reach) * first
        + PuiseuxSeries.from_polynomial(p0, reach) * s
    )


def hypergeometric_reduce(ode: LinearODE, alpha) -> LinearODE:
    """Equation for f when φ = x^alpha (1 - x)^alpha f."""
    a = QQ.to_sympy(rational(alpha))
    p2, p1, p0 = ode.coefficients
    log_derivative = RationalFunction.from_expr(a / X - a / (1 - X))
    first = p2 * log_derivative * 2 + p1
    zeroth = p2 * (log_derivative.derivative() + log_derivative * log_derivative) + p1 * log_derivative + p0
    return LinearODE((p2, first, zeroth))


def phi1(order: Optional[int] = None) -> PuiseuxSeries:
    """x^{-1/2} (1 - x)^{5/2} (1 + x)."""
    order = default_order(order)
    return (binomial_series(QQ(5, 2), order) * PuiseuxSeries.from_coefficients(0, [1, 1], order)).shift(QQ(-1, 2))


def phi2(order: Optional[int] = None) -> PuiseuxSeries:
    """x^{5/2} (1 - x)^{-1/2} (1 - x/2)."""
    order = default_order(order)
    return (binomial_series(QQ(-1, 2), order) * PuiseuxSeries.from_coefficients(0, [1, QQ(-1, 2)], order)).shift(QQ(5, 2))


def f1(order: Optional[int] = None) -> PuiseuxSeries:
    return PuiseuxSeries.from_coefficients(-3, [1, 1], default_order(order))


def f2(order: Optional[int] = None) -> PuiseuxSeries:
    order = default_order(order)
    return binomial_series(-3, order) * PuiseuxSeries.from_coefficients(0, [1, QQ(-1, 2)], order)


def hypergeometric_prefactor(order: Optional[int] = None) -> PuiseuxSeries:
    """x^{5/2} (1 - x)^{5/2}."""
    return binomial_series(QQ(5, 2), default_order(order)).shift(QQ(5, 2))


def _phi1_at_one(order: int) -> PuiseuxSeries:
    # φ1(1 - u) = u^{5/2} (1 - u)^{-1/2} (2 - u)
    return (binomial_series(QQ(-1, 2), order) * PuiseuxSeries.from_coefficients(0, [2, -1], order)).shift(QQ(5, 2))


def connection_coefficient(order: Optional[int] = None) -> Rational:
    """The scalar a with ψ = a·φ1, ψ the solution (1 - x)^{5/2}(1 + O(1 - x)) at x = 1."""
    order = default_order(order)
    psi = frobenius_solve(rigidity_ode(), 1, QQ(5, 2), order)
    expansion = _phi1_at_one(order)
    a = rational(psi.coefficients[0]) / rational(expansion.coefficients[0])
    if psi != expansion.scale(a):
        raise DomainError("the normalized solution at x = 1 is not a multiple of φ1")
    return a


def rigidity_scalar(order: Optional[int] = None, scale=1) -> RigidityReport:
    """
    Evaluation/coevaluation scalar of L(2,1), assembled from the series and the pairing side.

    `scale` rescales the evaluation normalization; c0 and c3 scale with it, b and the result do not.
    """
    order = max(default_order(order), 3)
    scale = rational(scale)
    a = connection_coefficient(order)
    psi = phi1(order).scale(a)
    lead_phi2 = rational(phi2(order).coefficient(QQ(5, 2)))
    c0 = scale * rational(psi.coefficient(QQ(-1, 2)))
    from_phi1 = rational(psi.coefficient(QQ(5, 2)))
    c3 = compute_c3(c0)
    b = (c3 / scale - from_phi1) / lead_phi2

    ctx3, _ = rigidity_contexts()
    l21, l31 = ctx3.left_module, ctx3.out_module
    v21 = PBWVector.highest_weight_vector(l21)
    pairings = {
        "L-3": rational(reduce_pairing(ctx3, PBWVector.monomial(l31, (3,)), v21, v21)),
        "L-1L-2": rational(reduce_pairing(ctx3, PBWVector.monomial(l31, (2, 1)), v21, v21)),
    }
    coefficients = tuple(pairing_coefficients(c0))
    for n, value in enumerate(coefficients[:3]):
        expected = scale * rational(psi.coefficient(QQ(2 * n - 1, 2)))
        if value != expected:
            raise DomainError(
                f"pairing coefficient c{n} = {format_rational(value)} disagrees with the series value "
                f"{format_rational(expected)}"
            )
    report = RigidityReport(c0, c3, a, b, -b, pairings, compute_pi3(), coefficients)
    logger.info(f"Rigidity scalar {format_rational(report.rigidity_scalar)} (b = {format_rational(b)})")
    return report
