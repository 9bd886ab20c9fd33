import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from sympy import npartitions
from sympy.polys.domains import QQ, QQ_I
from sympy.polys.domains.gaussiandomains import GaussianRational
from sympy.polys.matrices import DomainMatrix
from sympy.utilities.iterables import partitions

from .config import default_order
from .exceptions import ContractViolation, DegenerateFormError, DomainError
from .scalars import PuiseuxSeries, Rational, format_rational, gaussian, is_zero, rational

logger = logging.getLogger(__name__)

Partition = Tuple[int, ...]

# Internal term maps: Partition -> QQ for monomial actions, Partition -> QQ_I for vectors.
Terms = Dict[Partition, object]


def central_charge_from_t(t) -> Rational:
    t = rational(t)
    if t == 0:
        raise DomainError("t must be non-zero")
    return QQ(13) - 6 * t - 6 / t


def h_rs(t, r: int, s: int) -> Rational:
    """Lowest conformal weight (r^2 - 1)t/4 - (rs - 1)/2 + (s^2 - 1)/(4t)."""
    t = rational(t)
    if t == 0:
        raise DomainError("t must be non-zero")
    return QQ(r * r - 1, 4) * t - QQ(r * s - 1, 2) + QQ(s * s - 1, 4) / t


def partition_level(partition: Partition) -> int:
    return sum(partition)


def validate_partition(parts: Iterable[int]) -> Partition:
    partition = tuple(int(p) for p in parts)
    if any(p < 1 for p in partition):
        raise ContractViolation(f"partition {list(partition)} has non-positive parts")
    if any(a < b for a, b in zip(partition, partition[1:])):
        raise ContractViolation(f"partition {list(partition)} is not weakly decreasing")
    return partition


def partitions_of(level: int) -> List[Partition]:
    """All partitions of `level`, largest first: (3,), (2, 1), (1, 1, 1)."""
    if level < 0:
        return []
    if level == 0:
        return [()]
    found = []
    for multiplicities in partitions(level):
        parts = []
        for part, count in multiplicities.items():
            parts.extend([part] * count)
        found.append(tuple(sorted(parts, reverse=True)))
    return sorted(found, reverse=True)


def _ones(partition: Partition) -> int:
    return partition.count(1)


@dataclass(frozen=True)
class QuotientRelation:
    """Singular vector L_{-1}^level v + ... in Verma normal form, leading coefficient 1."""
    level: int
    singular_terms: Tuple[Tuple[Partition, Rational], ...]


@dataclass(frozen=True)
class HWModuleDescriptor:
    central_charge: Rational
    highest_weight: Rational
    quotient_relation: Optional[QuotientRelation] = None

    def __post_init__(self):
        object.__setattr__(self, "central_charge", rational(self.central_charge))
        object.__setattr__(self, "highest_weight", rational(self.highest_weight))

    @classmethod
    def verma(cls, c, h) -> "HWModuleDescriptor":
        return cls(c, h)

    @classmethod
    def quotient(cls, c, h, level: int) -> "HWModuleDescriptor":
        """Quotient of V(c, h) by the singular vector at `level`."""
        module = cls(c, h)
        top = (1,) * level
        candidates = [w for w in singular_vector(module, level) if not is_zero(w.coefficient(top))]
        if len(candidates) != 1:
            raise DomainError(
                f"V({format_rational(module.central_charge)}, {format_rational(module.highest_weight)}) "
                f"has no unique singular vector with leading L(-1)^{level} term"
            )
        singular = candidates[0]
        terms = tuple((p, rational(a)) for p, a in singular.terms)
        return cls(module.central_charge, module.highest_weight, QuotientRelation(level, terms))

    @property
    def is_quotient(self) -> bool:
        return self.quotient_relation is not None

    @property
    def verma_module(self) -> "HWModuleDescriptor":
        return HWModuleDescriptor(self.central_charge, self.highest_weight)

    @property
    def relation(self) -> Optional["PBWVector"]:
        """L_{-1}^level rewritten in lower monomials of the Verma module."""
        if self.quotient_relation is None:
            return None
        top = (1,) * self.quotient_relation.level
        lower = {p: gaussian(-a) for p, a in self.quotient_relation.singular_terms if p != top}
        return PBWVector.from_terms(self.verma_module, lower)

    def basis(self, level: int) -> List[Partition]:
        if self.quotient_relation is None:
            return partitions_of(level)
        bound = self.quotient_relation.level
        return [p for p in partitions_of(level) if _ones(p) < bound]

    def weight(self, level: int) -> Rational:
        return self.highest_weight + level

    def __str__(self):
        name = "L" if self.is_quotient else "V"
        return f"{name}(c={format_rational(self.central_charge)}, h={format_rational(self.highest_weight)})"


def simple_module(t, r: int, s: int) -> HWModuleDescriptor:
    """
    V(c(t), h_{r,s}(t)) modulo its lowest singular vector.

    At c = 25, c = 1 and generic t that vector generates the maximal proper submodule.
    """
    c = central_charge_from_t(t)
    h = h_rs(t, r, s)
    level = first_singular_level(HWModuleDescriptor.verma(c, h), r * s)
    if level is None:
        raise DomainError(f"no singular vector up to level {r * s} for (r, s) = ({r}, {s})")
    return HWModuleDescriptor.quotient(c, h, level)


def _add_terms(target: Terms, terms, factor=None) -> None:
    for p, a in terms:
        contribution = a if factor is None else factor * a
        current = target.get(p)
        value = contribution if current is None else current + contribution
        if is_zero(value):
            target.pop(p, None)
        else:
            target[p] = value


@lru_cache(maxsize=None)
def _verma_action(c: Rational, h: Rational, n: int, partition: Partition) -> Tuple[Tuple[Partition, Rational], ...]:
    """
    L_n applied to the monomial L_{-partition} v of V(c, h).

    The smallest part is the outermost mode; normal ordering pushes larger modes inward.
    """
    level = sum(partition)
    if n == 0:
        coefficient = h + level
        return () if coefficient == 0 else ((partition, coefficient),)
    if not partition:
        if n > 0:
            return ()
        return (((-n,), QQ.one),)
    a = partition[-1]
    rest = partition[:-1]
    result: Terms = {}
    if n < 0:
        m = -n
        if m <= a:
            return ((partition + (m,), QQ.one),)
        # L_{-m} L_{-a} X = L_{-a} L_{-m} X + (a - m) L_{-m-a} X
        for p, k in _verma_action(c, h, n, rest):
            _add_terms(result, _verma_action(c, h, -a, p), k)
        _add_terms(result, _verma_action(c, h, n - a, rest), QQ(a - m))
    else:
        # L_n L_{-a} X = L_{-a} L_n X + (n + a) L_{n-a} X + delta_{n,a} (n^3 - n)/12 c X
        for p, k in _verma_action(c, h, n, rest):
            _add_terms(result, _verma_action(c, h, -a, p), k)
        _add_terms(result, _verma_action(c, h, n - a, rest), QQ(n + a))
        if n == a:
            _add_terms(result, ((rest, QQ.one),), QQ(n ** 3 - n, 12) * c)
    return tuple(result.items())


@lru_cache(maxsize=None)
def _reduce_monomial(module: HWModuleDescriptor, partition: Partition) -> Tuple[Tuple[Partition, Rational], ...]:
    """Normal form of a Verma monomial in the quotient: fewer than `level` parts equal to 1."""
    relation = module.quotient_relation
    if relation is None or _ones(partition) < relation.level:
        return ((partition, QQ.one),)
    # partition = mu ∪ 1^level; replace it by partition - mu·s
    mu = partition[: len(partition) - relation.level]
    multiple: Terms = dict(relation.singular_terms)
    for mode in mu:
        step: Terms = {}
        for p, k in multiple.items():
            _add_terms(step, _verma_action(module.central_charge, module.highest_weight, -mode, p), k)
        multiple = step
    if multiple.get(partition) != QQ.one:
        raise ContractViolation(f"rewriting of {list(partition)} lost its leading monomial")
    result: Terms = {}
    for p, k in multiple.items():
        if p != partition:
            _add_terms(result, _reduce_monomial(module, p), -k)
    return tuple(result.items())


def _act_monomial(module: HWModuleDescriptor, n: int, partition: Partition) -> Tuple[Tuple[Partition, Rational], ...]:
    terms = _verma_action(module.central_charge, module.highest_weight, n, partition)
    if module.quotient_relation is None:
        return terms
    result: Terms = {}
    for p, k in terms:
        _add_terms(result, _reduce_monomial(module, p), k)
    return tuple(result.items())


def _normal_terms(module: HWModuleDescriptor, terms: Mapping[Partition, object]) -> Terms:
    result: Terms = {}
    for p, a in terms.items():
        coefficient = gaussian(a)
        if is_zero(coefficient):
            continue
        for q, k in _reduce_monomial(module, validate_partition(p)):
            _add_terms(result, ((q, gaussian(k)),), coefficient)
    return result


def _sort_key(partition: Partition):
    return (sum(partition), tuple(-p for p in partition))


@dataclass(frozen=True, eq=False)
class PBWVector:
    """Finite combination of monomials L_{-lambda_k}...L_{-lambda_1} v, keyed by descending partitions."""
    module: HWModuleDescriptor
    terms: Tuple[Tuple[Partition, GaussianRational], ...]

    @classmethod
    def from_terms(cls, module: HWModuleDescriptor, terms: Mapping[Partition, object]) -> "PBWVector":
        normal = _normal_terms(module, terms)
        ordered = tuple(sorted(normal.items(), key=lambda item: _sort_key(item[0])))
        return cls(module, ordered)

    @classmethod
    def highest_weight_vector(cls, module: HWModuleDescriptor) -> "PBWVector":
        return cls.from_terms(module, {(): 1})

    @classmethod
    def monomial(cls, module: HWModuleDescriptor, partition: Sequence[int], coefficient=1) -> "PBWVector":
        return cls.from_terms(module, {tuple(partition): coefficient})

    @classmethod
    def zero(cls, module: HWModuleDescriptor) -> "PBWVector":
        return cls(module, ())

    def as_dict(self) -> Dict[Partition, GaussianRational]:
        return dict(self.terms)

    def coefficient(self, partition: Sequence[int]) -> GaussianRational:
        return self.as_dict().get(tuple(partition), QQ_I.zero)

    def levels(self) -> List[int]:
        return sorted({sum(p) for p, _ in self.terms})

    @property
    def level(self) -> int:
        levels = self.levels()
        if len(levels) > 1:
            raise ContractViolation(f"vector is not homogeneous: levels {levels}")
        return levels[0] if levels else 0

    def component(self, level: int) -> "PBWVector":
        return PBWVector(self.module, tuple((p, a) for p, a in self.terms if sum(p) == level))

    def is_zero(self) -> bool:
        return not self.terms

    def _check_module(self, other: "PBWVector") -> None:
        if self.module != other.module:
            raise ContractViolation(f"vectors live in different modules: {self.module} and {other.module}")

    def __add__(self, other):
        if not isinstance(other, PBWVector):
            return NotImplemented
        self._check_module(other)
        total: Terms = dict(self.terms)
        _add_terms(total, other.terms)
        return PBWVector(self.module, tuple(sorted(total.items(), key=lambda item: _sort_key(item[0]))))

    def scale(self, value) -> "PBWVector":
        c = gaussian(value)
        if is_zero(c):
            return PBWVector.zero(self.module)
        return PBWVector(self.module, tuple((p, c * a) for p, a in self.terms))

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        if not isinstance(other, PBWVector):
            return NotImplemented
        return self + (-other)

    def __rmul__(self, value):
        return self.scale(value)

    def __eq__(self, other):
        if not isinstance(other, PBWVector):
            return NotImplemented
        return self.module == other.module and self.as_dict() == other.as_dict()

    __hash__ = None

    def __str__(self):
        if not self.terms:
            return "0"
        pieces = []
        for p, a in self.terms:
            if a.y == 0:
                coefficient = format_rational(a.x)
            else:
                coefficient = f"({format_rational(a.x)}+{format_rational(a.y)}i)"
            word = "".join(f"L(-{part})" for part in reversed(p))
            pieces.append(f"{coefficient}·{word}·v" if word else f"{coefficient}·v")
        return " + ".join(pieces)


def act_mode(n: int, v: PBWVector) -> PBWVector:
    """Apply L_n, normal ordering the result and rewriting through the quotient relation."""
    result: Terms = {}
    for p, a in v.terms:
        for q, k in _act_monomial(v.module, n, p):
            _add_terms(result, ((q, gaussian(k)),), a)
    return PBWVector(v.module, tuple(sorted(result.items(), key=lambda item: _sort_key(item[0]))))


def act_word(modes: Sequence[int], v: PBWVector) -> PBWVector:
    """Apply L_{modes[0]} ... L_{modes[-1]} as written, so the last mode acts first."""
    for n in reversed(list(modes)):
        v = act_mode(n, v)
    return v


@lru_cache(maxsize=None)
def _pair_monomials(module: HWModuleDescriptor, left: Partition, right: Partition) -> Rational:
    """<L_{-left} v, L_{-right} v> with <v, v> = 1 and L_{-n} adjoint to L_n."""
    if sum(left) != sum(right):
        return QQ.zero
    terms: Terms = {right: QQ.one}
    # Outermost mode of the left word is its smallest part, so it is moved across first.
    for mode in reversed(left):
        step: Terms = {}
        for p, k in terms.items():
            _add_terms(step, _act_monomial(module, mode, p), k)
        terms = step
    return terms.get((), QQ.zero)


def inner_product(u: PBWVector, w: PBWVector) -> GaussianRational:
    u._check_module(w)
    total = QQ_I.zero
    for p, a in u.terms:
        for q, b in w.terms:
            value = _pair_monomials(u.module, p, q)
            if value != 0:
                total += a * b * gaussian(value)
    return total


@dataclass(frozen=True)
class GramMatrix:
    level: int
    basis: Tuple[Partition, ...]
    entries: DomainMatrix

    def entry(self, left: Sequence[int], right: Sequence[int]) -> Rational:
        i = self.basis.index(tuple(left))
        j = self.basis.index(tuple(right))
        return self.entries.to_list()[i][j]

    def to_lists(self) -> List[List[Rational]]:
        return self.entries.to_list()

    def rank(self) -> int:
        return self.entries.rank() if self.basis else 0

    def determinant(self) -> Rational:
        if not self.basis:
            return QQ.one
        return self.entries.det()


def gram_matrix(m: HWModuleDescriptor, level: int) -> GramMatrix:
    if level < 0:
        raise DomainError(f"level must be non-negative, got {level}")
    basis = tuple(m.basis(level))
    logger.info(f"Computing gram matrix at level {level} for {m} on {len(basis)} monomials")
    if not basis:
        return GramMatrix(level, basis, DomainMatrix.zeros((0, 0), QQ))
    rows = [[_pair_monomials(m, p, q) for q in basis] for p in basis]
    return GramMatrix(level, basis, DomainMatrix(rows, (len(basis), len(basis)), QQ))


def gram_determinant(m: HWModuleDescriptor, level: int) -> Rational:
    return gram_matrix(m, level).determinant()


def _mode_matrix(m: HWModuleDescriptor, n: int, level: int) -> List[List[Rational]]:
    """Matrix of L_n from the level-`level` basis to the level-(level - n) basis."""
    source = m.basis(level)
    target = m.basis(level - n)
    index = {p: i for i, p in enumerate(target)}
    rows = [[QQ.zero] * len(source) for _ in target]
    for j, p in enumerate(source):
        for q, k in _act_monomial(m, n, p):
            rows[index[q]][j] += k
    return rows


def singular_vector(m: HWModuleDescriptor, level: int) -> List[PBWVector]:
    """
    Basis of the vectors at `level` killed by L_1 and L_2.

    The coefficient of L_{-1}^level is normalized to 1 when it is non-zero.
    """
    if m.is_quotient:
        raise ContractViolation(f"singular vectors are computed in Verma modules, not in {m}")
    if level < 1:
        raise DomainError(f"level must be at least 1, got {level}")
    basis = m.basis(level)
    rows = _mode_matrix(m, 1, level) + _mode_matrix(m, 2, level)
    matrix = DomainMatrix(rows, (len(rows), len(basis)), QQ)
    if matrix.rank() == len(basis):
        return []
    kernel = matrix.nullspace().to_list()
    top = basis.index((1,) * level)
    vectors = []
    for row in kernel:
        pivot = row[top] if row[top] != 0 else next(a for a in row if a != 0)
        vectors.append(PBWVector.from_terms(m, {p: a / pivot for p, a in zip(basis, row) if a != 0}))
    logger.info(f"Found {len(vectors)} singular vector(s) at level {level} in {m}")
    return vectors


def first_singular_level(m: HWModuleDescriptor, max_level: int) -> Optional[int]:
    if max_level < 1:
        raise DomainError(f"max_level must be at least 1, got {max_level}")
    for level in range(1, max_level + 1):
        if singular_vector(m, level):
            return level
    return None


def dual_basis(m: HWModuleDescriptor, level: int) -> List[PBWVector]:
    """Vectors b*_lambda with <b*_lambda, L_{-mu} v> = delta, in the order of m.basis(level)."""
    gram = gram_matrix(m, level)
    if gram.determinant() == 0:
        logger.error(f"Contravariant form of {m} is degenerate at level {level}")
        raise DegenerateFormError(f"degenerate form at level {level} of {m}")
    inverse = gram.entries.inv().to_list()
    return [
        PBWVector.from_terms(m, {q: inverse[i][j] for j, q in enumerate(gram.basis) if inverse[i][j] != 0})
        for i in range(len(gram.basis))
    ]


def quotient_character(h, level: Optional[int], order: Optional[int] = None) -> PuiseuxSeries:
    """(q^h - q^{h+level}) / prod(1 - q^n), or the Verma character when level is None."""
    order = default_order(order)
    coefficients = []
    for n in range(order + 1):
        dimension = npartitions(n)
        if level is not None and n >= level:
            dimension -= npartitions(n - level)
        coefficients.append(dimension)
    return PuiseuxSeries.from_coefficients(rational(h), coefficients, order)


def character(m: HWModuleDescriptor, order: Optional[int] = None) -> PuiseuxSeries:
    level = m.quotient_relation.level if m.quotient_relation else None
    return quotient_character(m.highest_weight, level, order)
