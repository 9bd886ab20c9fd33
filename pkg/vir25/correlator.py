import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import List, Tuple

from sympy import binomial
from sympy.polys.domains import QQ, QQ_I
from sympy.polys.domains.gaussiandomains import GaussianRational

from .exceptions import ContractViolation, DegenerateIndexError, DomainError, UnsupportedParametersError
from .scalars import Rational, format_rational, gaussian, rational
from .verma import (
    HWModuleDescriptor,
    Partition,
    PBWVector,
    _act_monomial,
    act_mode,
    dual_basis,
    h_rs,
    simple_module,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ThreePointContext:
    """
    Pairings <u', Y(w1, 1) w2> for an intertwining operator of type (out, left right).

    `normalization` is the value on the three highest-weight vectors.
    """
    out_module: HWModuleDescriptor
    left_module: HWModuleDescriptor
    right_module: HWModuleDescriptor
    normalization: GaussianRational = field(default_factory=lambda: QQ_I.one)

    def __post_init__(self):
        object.__setattr__(self, "normalization", gaussian(self.normalization))


@dataclass(frozen=True)
class TopLevelReport:
    r: int
    candidate_weights: Tuple[Rational, Rational]
    eigenvector_coefficients: Tuple[Tuple[int, int], Tuple[int, int]]


def _binomial(n: int, k: int) -> Rational:
    return QQ(int(binomial(n, k)))


@lru_cache(maxsize=None)
def _reduce(
    out_module: HWModuleDescriptor,
    left_module: HWModuleDescriptor,
    right_module: HWModuleDescriptor,
    out: Partition,
    left: Partition,
    right: Partition,
) -> Rational:
    """<L_{-out} v', Y(L_{-left} v1, 1) L_{-right} v2> divided by the primary value."""
    if not out and not left and not right:
        return QQ.one

    def recurse(u, w, w2):
        return _reduce(out_module, left_module, right_module, u, w, w2)

    total = QQ.zero
    if out:
        # <L_{-a} u, Y(w,1) w2> = <u, Y(w,1) L_a w2> + sum_i C(a+1, i) <u, Y(L_{i-1} w, 1) w2>
        a, rest = out[-1], out[:-1]
        for q, k in _act_monomial(right_module, a, right):
            total += k * recurse(rest, left, q)
        for i in range(0, a + 2):
            if i - 1 > sum(left):
                break
            for p, k in _act_monomial(left_module, i - 1, left):
                total += _binomial(a + 1, i) * k * recurse(rest, p, right)
        return total

    if left:
        m, rest = left[-1], left[:-1]
        if m == 1:
            # L_0 conjugation: Y(L_{-1} w, 1) = [L_0, Y(w, 1)] - Y(L_0 w, 1)
            weight = (
                out_module.highest_weight
                - (left_module.highest_weight + sum(rest))
                - (right_module.highest_weight + sum(right))
            )
            return weight * recurse((), rest, right)
        # iterate formula at x = 1 with a primary out vector; the L_{m+i} terms act on v' and vanish
        sign = QQ(-1) ** m
        for i in range(0, sum(right) + 2):
            coefficient = QQ(-1) ** i * _binomial(1 - m, i) * sign
            if coefficient == 0:
                continue
            for q, k in _act_monomial(right_module, i - 1, right):
                total += coefficient * k * recurse((), rest, q)
        return total

    # <v', Y(v1,1) L_{-b} w2> = <L_b v', Y(v1,1) w2> - sum_i C(1-b, i) <v', Y(L_{i-1} v1, 1) w2>
    b, rest = right[-1], right[:-1]
    for i in range(0, 2):
        for p, k in _act_monomial(left_module, i - 1, ()):
            total -= _binomial(1 - b, i) * k * recurse((), p, rest)
    return total


def reduce_pairing(
    ctx: ThreePointContext,
    out_desc: PBWVector,
    left_desc: PBWVector,
    right_desc: PBWVector,
) -> GaussianRational:
    """Exact value of <out_desc, Y(left_desc, 1) right_desc>."""
    for name, vector, module in (
        ("out", out_desc, ctx.out_module),
        ("left", left_desc, ctx.left_module),
        ("right", right_desc, ctx.right_module),
    ):
        if vector.module != module:
            raise ContractViolation(f"{name} vector lives in {vector.module}, expected {module}")
    total = QQ_I.zero
    for u, a in out_desc.terms:
        for w, b in left_desc.terms:
            for w2, c in right_desc.terms:
                value = _reduce(ctx.out_module, ctx.left_module, ctx.right_module, u, w, w2)
                if value != 0:
                    total += a * b * c * gaussian(value)
    return ctx.normalization * total


def rigidity_contexts(c0=1) -> Tuple[ThreePointContext, ThreePointContext]:
    """<L(3,1), Y(L(2,1), 1) L(2,1)> normalized to 1 and <L(2,1), Y(L(2,1), 1) L(3,1)> normalized to c0."""
    l21 = simple_module(-1, 2, 1)
    l31 = simple_module(-1, 3, 1)
    return ThreePointContext(l31, l21, l21, 1), ThreePointContext(l21, l21, l31, c0)


def _primary(module: HWModuleDescriptor) -> PBWVector:
    return PBWVector.highest_weight_vector(module)


def dual_projection(ctx: ThreePointContext, level: int) -> PBWVector:
    """Degree-`level` component of Y(v1, 1) v2, expanded in the dual basis of the out module."""
    out = ctx.out_module
    duals = dual_basis(out, level)
    v1 = _primary(ctx.left_module)
    v2 = _primary(ctx.right_module)
    projection = PBWVector.zero(out)
    for partition, dual in zip(out.basis(level), duals):
        value = reduce_pairing(ctx, PBWVector.monomial(out, partition), v1, v2)
        projection = projection + dual.scale(value)
    logger.debug(f"Projection at level {level}: {projection}")
    return projection


def _check_pi_module(module: HWModuleDescriptor) -> None:
    if module.central_charge != 25 or module.highest_weight != -3:
        raise UnsupportedParametersError(f"the pi recursion is set up for V(25, -3) and its quotient, not {module}")


def pi_recursion(module: HWModuleDescriptor, n_max: int) -> List[PBWVector]:
    """pi_0 = v and n(n-3) pi_n = -sum_{i=1}^n L_{-i} pi_{n-i}."""
    _check_pi_module(module)
    if n_max < 0:
        raise DomainError(f"n_max must be non-negative, got {n_max}")
    if n_max >= 3:
        raise DegenerateIndexError("degenerate index: n(n−3) = 0")
    pis = [_primary(module)]
    for n in range(1, n_max + 1):
        total = PBWVector.zero(module)
        for i in range(1, n + 1):
            total = total + act_mode(-i, pis[n - i])
        pis.append(total.scale(QQ(-1, n * (n - 3))))
    return pis


def pi_constraint_check() -> PBWVector:
    """-L_{-1} pi_2 - L_{-2} pi_1 - L_{-3} pi_0 in V(25, -3)."""
    verma = HWModuleDescriptor.verma(25, -3)
    pi0, pi1, pi2 = pi_recursion(verma, 2)
    return -(act_mode(-1, pi2) + act_mode(-2, pi1) + act_mode(-3, pi0))


def project_to_quotient(v: PBWVector, quotient: HWModuleDescriptor) -> PBWVector:
    if quotient.verma_module != v.module.verma_module:
        raise ContractViolation(f"{quotient} is not a quotient of {v.module}")
    return PBWVector.from_terms(quotient, v.as_dict())


def compute_pi3(c0=1) -> PBWVector:
    ctx3, _ = rigidity_contexts(c0)
    return dual_projection(ctx3, 3)


def compute_c3(c0) -> Rational:
    """<v(2,1), Y(v(2,1), 1) pi_3> with pi_3 taken from the dual basis of L(3,1) at level 3."""
    c0 = rational(c0)
    ctx3, ctx2 = rigidity_contexts(c0)
    pi3 = dual_projection(ctx3, 3)
    v21 = _primary(ctx2.out_module)
    c3 = rational(reduce_pairing(ctx2, v21, v21, pi3))
    logger.info(f"c3 = {format_rational(c3)} for c0 = {format_rational(c0)}")
    return c3


def pairing_coefficients(c0, n_max: int = 3) -> List[Rational]:
    """c_n = <v(2,1), Y(v(2,1), 1) pi_n> for n = 0..n_max."""
    if not 0 <= n_max <= 3:
        raise DomainError(f"pairing coefficients are available for n_max in 0..3, got {n_max}")
    _, ctx2 = rigidity_contexts(c0)
    l31 = ctx2.right_module
    pis = pi_recursion(l31, min(n_max, 2))
    if n_max == 3:
        pis.append(compute_pi3())
    v21 = _primary(ctx2.out_module)
    return [rational(reduce_pairing(ctx2, v21, v21, pi)) for pi in pis]


def top_level_analysis(r: int) -> TopLevelReport:
    """
    Candidate L_0-eigenvalues on the top level of L(2,1) ⊠ L(r,1) at t = -1.

    (1 ± r + (1 ± 1)) pi_0(v ⊠ w) - 2 pi_0(L_{-1} v ⊠ w) has weight h_{r±1,1}.
    """
    if r < 1:
        raise DomainError(f"r must be positive, got {r}")
    weights = (h_rs(-1, r - 1, 1), h_rs(-1, r + 1, 1))
    coefficients = ((1 - r, -2), (1 + r + 2, -2))
    return TopLevelReport(r, weights, coefficients)
