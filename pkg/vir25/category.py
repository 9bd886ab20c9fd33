import logging
from dataclasses import dataclass
from typing import List, NamedTuple, Optional, Sequence, Tuple

import sympy
from sympy import Poly, Symbol, roots, solve, sqf_part
from sympy.polys.domains import QQ, QQ_I
from sympy.polys.domains.gaussiandomains import GaussianRational
from sympy.polys.matrices import DomainMatrix

from .exceptions import ContractViolation, DomainError, UnsupportedParametersError
from .fusion import fuse
from .scalars import IMAG_UNIT, Rational, format_rational, gaussian, is_zero, rational
from .verma import h_rs

logger = logging.getLogger(__name__)

# Tensor words are tuples of sl2 labels n (the object V(n), of dimension n + 1); () is the unit.
Word = Tuple[int, ...]

GENERATOR: Word = (1,)

CATEGORY_T = {"O25": -1, "O1": 1}
CENTRAL_CHARGE_T = {25: -1, 1: 1}


def _word_dimension(word: Sequence[int]) -> int:
    dimension = 1
    for n in word:
        dimension *= n + 1
    return dimension


class CocycleTwist:
    """The 3-cocycle (a, b, c) -> (-1)^{abc} on Z/2."""

    @staticmethod
    def sign(a: int, b: int, c: int) -> int:
        return -1 if (a % 2) and (b % 2) and (c % 2) else 1

    @classmethod
    def is_cocycle(cls) -> bool:
        for a in range(2):
            for b in range(2):
                for c in range(2):
                    for d in range(2):
                        left = cls.sign(b, c, d) * cls.sign(a, b + c, d) * cls.sign(a, b, c)
                        right = cls.sign(a + b, c, d) * cls.sign(a, b, c + d)
                        if left != right:
                            return False
        return True

    @classmethod
    def is_normalized(cls) -> bool:
        return all(
            cls.sign(*args) == 1
            for args in ((0, 1, 1), (1, 0, 1), (1, 1, 0), (0, 0, 0))
        )


@dataclass(frozen=True, eq=False)
class MatrixMap:
    """
    Morphism source -> target between tensor words, as a matrix over QQ(i).

    `*` is composition (self after other) and `@` is the tensor product.
    """
    entries: DomainMatrix
    source: Word
    target: Word

    def __post_init__(self):
        expected = (_word_dimension(self.target), _word_dimension(self.source))
        if self.entries.shape != expected:
            raise ContractViolation(f"matrix of shape {self.entries.shape} cannot map {self.source} to {self.target}")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], source: Word, target: Word) -> "MatrixMap":
        values = [[gaussian(a) for a in row] for row in rows]
        shape = (_word_dimension(target), _word_dimension(source))
        return cls(DomainMatrix(values, shape, QQ_I), tuple(source), tuple(target))

    @classmethod
    def identity(cls, word: Word) -> "MatrixMap":
        n = _word_dimension(word)
        return cls(DomainMatrix.eye(n, QQ_I), tuple(word), tuple(word))

    @classmethod
    def zero(cls, source: Word, target: Word) -> "MatrixMap":
        shape = (_word_dimension(target), _word_dimension(source))
        return cls(DomainMatrix.zeros(shape, QQ_I), tuple(source), tuple(target))

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]

    @property
    def source_parity(self) -> List[int]:
        return [n % 2 for n in self.source]

    @property
    def target_parity(self) -> List[int]:
        return [n % 2 for n in self.target]

    def to_lists(self) -> List[List[GaussianRational]]:
        return self.entries.to_list()

    def entry(self, i: int, j: int) -> GaussianRational:
        return self.to_lists()[i][j]

    def scale(self, value) -> "MatrixMap":
        c = gaussian(value)
        return MatrixMap.from_rows([[c * a for a in row] for row in self.to_lists()], self.source, self.target)

    def _check_hom(self, other: "MatrixMap") -> None:
        if (self.source, self.target) != (other.source, other.target):
            raise ContractViolation(
                f"maps {self.source} -> {self.target} and {other.source} -> {other.target} cannot be added"
            )

    def __add__(self, other):
        if not isinstance(other, MatrixMap):
            return NotImplemented
        self._check_hom(other)
        return MatrixMap(self.entries + other.entries, self.source, self.target)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        if not isinstance(other, MatrixMap):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        """Composition of morphisms."""
        if not isinstance(other, MatrixMap):
            return self.scale(other)
        if self.source != other.target:
            raise ContractViolation(f"cannot compose {self.source} -> {self.target} after {other.source} -> {other.target}")
        return MatrixMap(self.entries * other.entries, other.source, self.target)

    def __rmul__(self, value):
        return self.scale(value)

    def __matmul__(self, other):
        """Tensor product of morphisms."""
        if not isinstance(other, MatrixMap):
            return NotImplemented
        a, b = self.to_lists(), other.to_lists()
        m, n = other.rows, other.cols
        rows = [[QQ_I.zero] * (self.cols * n) for _ in range(self.rows * m)]
        for i in range(self.rows):
            for j in range(self.cols):
                if is_zero(a[i][j]):
                    continue
                for k in range(m):
                    for l in range(n):
                        rows[i * m + k][j * n + l] = a[i][j] * b[k][l]
        return MatrixMap.from_rows(rows, self.source + other.source, self.target + other.target)

    def inverse(self) -> "MatrixMap":
        if self.rows != self.cols:
            raise ContractViolation(f"a {self.rows}x{self.cols} map has no inverse")
        if self.entries.rank() != self.rows:
            raise DomainError("map is not invertible")
        return MatrixMap(self.entries.inv(), self.target, self.source)

    def rank(self) -> int:
        return self.entries.rank()

    def is_identity(self) -> bool:
        return self.source == self.target and self == MatrixMap.identity(self.source)

    def __eq__(self, other):
        if not isinstance(other, MatrixMap):
            return NotImplemented
        return (
            self.source == other.source
            and self.target == other.target
            and self.to_lists() == other.to_lists()
        )

    __hash__ = None

    def __repr__(self):
        return f"MatrixMap({self.source} -> {self.target}, {self.to_lists()})"


class DualityData(NamedTuple):
    evaluation: MatrixMap
    coevaluation: MatrixMap
    f: MatrixMap


def standard_duality_data(scale=1) -> DualityData:
    """
    e(x+ ⊗ x-) = λ, e(x- ⊗ x+) = -λ and i(1) = λ^{-1}(x+ ⊗ x- - x- ⊗ x+) on the basis (x+, x-) of X.

    f = i ∘ e does not depend on λ.
    """
    lam = gaussian(scale)
    if is_zero(lam):
        raise DomainError("duality data cannot be rescaled by 0")
    e = MatrixMap.from_rows([[0, 1, -1, 0]], GENERATOR * 2, ()).scale(lam)
    i = MatrixMap.from_rows([[0], [1], [-1], [0]], (), GENERATOR * 2).scale(QQ_I.one / lam)
    return DualityData(e, i, i * e)


def intrinsic_dimension(data: Optional[DualityData] = None) -> GaussianRational:
    e, i, _ = data or standard_duality_data()
    return (e * i).entry(0, 0)


def associator(word: Word = GENERATOR * 3, twisted: bool = True) -> MatrixMap:
    """A: X ⊗ (Y ⊗ Z) -> (X ⊗ Y) ⊗ Z, the identity times the cocycle sign when twisted."""
    if len(word) != 3:
        raise ContractViolation(f"associators act on words of length 3, not {word}")
    identity = MatrixMap.identity(word)
    if not twisted:
        return identity
    return identity.scale(CocycleTwist.sign(*word))


def rigidity_compositions(twisted: bool = True, scale=1) -> Tuple[MatrixMap, MatrixMap]:
    """(e ⊗ Id) A (Id ⊗ i) and (Id ⊗ e) A^{-1} (i ⊗ Id) on X, with strict unit isomorphisms."""
    e, i, _ = standard_duality_data(scale)
    identity = MatrixMap.identity(GENERATOR)
    a = associator(twisted=twisted)
    first = (e @ identity) * a * (identity @ i)
    second = (identity @ e) * a.inverse() * (i @ identity)
    return first, second


def _hexagon_maps(twisted: bool = True) -> Tuple[MatrixMap, MatrixMap]:
    """P = (i ⊗ Id) l^{-1} and Q = A (Id ⊗ i) r^{-1}, both X -> X ⊗ X ⊗ X."""
    _, i, _ = standard_duality_data()
    identity = MatrixMap.identity(GENERATOR)
    return i @ identity, associator(twisted=twisted) * (identity @ i)


def hexagon_sides(R: MatrixMap, twisted: bool = True) -> Tuple[MatrixMap, MatrixMap]:
    """Both sides of the unit/naturality/hexagon consequence for R on X ⊗ X."""
    if R.source != GENERATOR * 2 or R.target != GENERATOR * 2:
        raise ContractViolation(f"R must be an endomorphism of X ⊗ X, got {R.source} -> {R.target}")
    p, q = _hexagon_maps(twisted)
    identity = MatrixMap.identity(GENERATOR)
    a = associator(twisted=twisted)
    right = (R @ identity) * a * (identity @ R) * a.inverse() * p
    return q, right


def hexagon_check(R: MatrixMap, twisted: bool = True) -> bool:
    left, right = hexagon_sides(R, twisted)
    return left == right


def discriminating_composition(d=2, twisted: bool = True) -> MatrixMap:
    """d (e ⊗ Id) - (Id ⊗ e) A^{-1}: sends P to (d^2 - 1) Id and Q to 0."""
    e, _, _ = standard_duality_data()
    identity = MatrixMap.identity(GENERATOR)
    a = associator(twisted=twisted)
    return (e @ identity).scale(d) - (identity @ e) * a.inverse()


def _span_coordinates(m: MatrixMap, twisted: bool = True) -> Tuple[GaussianRational, GaussianRational]:
    """(α, β) with m = α P + β Q; raises if m leaves the span."""
    e, i, _ = standard_duality_data()
    d = (e * i).entry(0, 0)
    identity = MatrixMap.identity(GENERATOR)
    p, q = _hexagon_maps(twisted)
    alpha = (discriminating_composition(d, twisted) * m).entry(0, 0) / (d * d - QQ_I.one)
    beta = ((e @ identity) * m).entry(0, 0) - d * alpha
    if m != p.scale(alpha) + q.scale(beta):
        raise DomainError("map does not lie in the span of the two hexagon morphisms")
    return alpha, beta


@dataclass(frozen=True)
class HexagonConstraints:
    polynomials: Tuple[sympy.Expr, ...]
    solutions: Tuple[Tuple[GaussianRational, GaussianRational], ...]


def hexagon_constraints(twisted: bool = True) -> HexagonConstraints:
    """
    Constraints on (a, b) for R = a f + b Id to satisfy the hexagon consequence.

    The residual is quadratic in R; each monomial coefficient is expanded along P and Q.
    """
    _, _, f = standard_duality_data()
    identity2 = MatrixMap.identity(GENERATOR * 2)
    identity = MatrixMap.identity(GENERATOR)
    assoc = associator(twisted=twisted)
    p, q = _hexagon_maps(twisted)

    def block(x: MatrixMap, y: MatrixMap) -> Tuple[GaussianRational, GaussianRational]:
        return _span_coordinates((x @ identity) * assoc * (identity @ y) * assoc.inverse() * p, twisted)

    a, b = Symbol("a"), Symbol("b")
    monomials = (
        (a * a, [block(f, f)]),
        (a * b, [block(f, identity2), block(identity2, f)]),
        (b * b, [block(identity2, identity2)]),
    )
    q_alpha, q_beta = _span_coordinates(q, twisted)
    residual = [-QQ_I.to_sympy(q_alpha), -QQ_I.to_sympy(q_beta)]
    for monomial, blocks in monomials:
        for alpha, beta in blocks:
            residual[0] += QQ_I.to_sympy(alpha) * monomial
            residual[1] += QQ_I.to_sympy(beta) * monomial
    polynomials = tuple(
        sqf_part(Poly(sympy.expand(r), a, b)).as_expr() for r in residual if sympy.expand(r) != 0
    )
    logger.info(f"Hexagon constraints: {', '.join(str(p) for p in polynomials)}")
    found = solve(list(polynomials), [a, b], dict=True)
    solutions = sorted(
        ((gaussian(s[a]), gaussian(s[b])) for s in found),
        key=lambda pair: (pair[0].y, pair[0].x),
    )
    return HexagonConstraints(polynomials, tuple(solutions))


def braiding_from_parameters(a, b) -> MatrixMap:
    _, _, f = standard_duality_data()
    return f.scale(a) + MatrixMap.identity(GENERATOR * 2).scale(b)


def braiding_solutions(twisted: bool = True) -> List[MatrixMap]:
    """All R = a f + b Id solving the hexagon consequence: ±i(f - Id) in the twisted category."""
    return [braiding_from_parameters(a, b) for a, b in hexagon_constraints(twisted).solutions]


def _t_for_central_charge(c_label) -> Rational:
    try:
        return QQ(CENTRAL_CHARGE_T[int(c_label)])
    except (KeyError, TypeError, ValueError) as e:
        raise UnsupportedParametersError(f"central charge {c_label} is not one of 1, 25") from e


def _power_of_i(exponent) -> GaussianRational:
    n = rational(exponent)
    if n.denominator != 1:
        raise UnsupportedParametersError(f"i^{format_rational(n)} does not lie in Q(i)")
    result = QQ_I.one
    for _ in range(int(n.numerator) % 4):
        result *= IMAG_UNIT
    return result


def braiding_phase(c_label) -> GaussianRational:
    """ε with e ∘ R = ε e, read off the lowest power x^{-2h} in the evaluation: ε = i^{-4 h_{2,1}}."""
    h = h_rs(_t_for_central_charge(c_label), 2, 1)
    return _power_of_i(-4 * h)


def select_braiding(category: str) -> MatrixMap:
    if category not in CATEGORY_T:
        raise DomainError(f"unknown category {category!r}; expected O25 or O1")
    c_label = 25 if category == "O25" else 1
    phase = braiding_phase(c_label)
    e, _, _ = standard_duality_data()
    for R in braiding_solutions():
        if e * R == e.scale(phase):
            return R
    raise DomainError(f"no braiding solution has e ∘ R = {phase} e")


def q_from_dimension(d) -> List[GaussianRational]:
    """Solutions of -q - 1/q = d in Q(i)."""
    d = rational(d)
    q = Symbol("q")
    found = []
    for root in roots(Poly(q ** 2 + QQ.to_sympy(d) * q + 1, q)):
        try:
            found.append(gaussian(root))
        except DomainError:
            logger.debug(f"Root {root} is not a Gaussian rational")
    if not found:
        raise DomainError(f"-q - 1/q = {format_rational(d)} has no solution in Q(i)")
    return sorted(found, key=lambda z: (z.x, z.y))


def twist_scalar(c_label, r: int) -> GaussianRational:
    """e^{2πi h_{r,1}} = i^{4h}."""
    if r < 1:
        raise DomainError(f"r must be positive, got {r}")
    h = h_rs(_t_for_central_charge(c_label), r, 1)
    if (4 * h).denominator != 1:
        raise UnsupportedParametersError(f"4h = {format_rational(4 * h)} is not an integer")
    return _power_of_i(4 * h)


def monodromy_scalar(c_label, r: int, rp: int, k: int) -> GaussianRational:
    """θ_k / (θ_r θ_rp) on the L(k,1) summand of L(r,1) ⊠ L(rp,1)."""
    return twist_scalar(c_label, k) / (twist_scalar(c_label, r) * twist_scalar(c_label, rp))


def monodromy_parity_witness(r: int, r_range: int) -> Optional[Tuple[int, int, Rational]]:
    """First (r', k, h_r + h_r' - h_k) at c = 1 with a non-integral value, or None."""
    if r < 1 or r_range < 1:
        raise DomainError(f"r and r_range must be positive, got {r} and {r_range}")
    t = QQ(1)
    for rp in range(1, r_range + 1):
        for k in fuse(r, rp).labels():
            value = h_rs(t, r, 1) + h_rs(t, rp, 1) - h_rs(t, k, 1)
            if value.denominator != 1:
                return rp, k, value
    return None


def monodromy_parity_check(r: int, r_range: int) -> bool:
    return monodromy_parity_witness(r, r_range) is None


def centralizer_local_labels(bound: int) -> List[int]:
    """Labels r <= bound whose W_r has trivial monodromy with every M_{r',1}: the odd ones."""
    return [r for r in range(1, bound + 1) if monodromy_parity_check(r, bound)]
