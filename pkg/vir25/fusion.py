import logging
from dataclasses import dataclass
from functools import lru_cache
from itertools import count, islice, product
from typing import Callable, Dict, Hashable, Iterator, List, Mapping, Optional, Tuple

from sympy.polys.domains import QQ

from .config import default_order
from .exceptions import ContractViolation, DomainError
from .scalars import PuiseuxSeries, Rational, rational
from .verma import h_rs, quotient_character

logger = logging.getLogger(__name__)

ALGEBRA_NAMES = ("W(-1)", "X", "M(-1)", "I(-1)", "I_generic")


@dataclass(frozen=True)
class MultiplicityMap:
    """Finitely supported map from simple-object labels to non-negative multiplicities."""
    entries: Tuple[Tuple[Hashable, int], ...] = ()

    @classmethod
    def from_dict(cls, multiplicities: Mapping) -> "MultiplicityMap":
        for label, n in multiplicities.items():
            if n < 0:
                raise ContractViolation(f"negative multiplicity {n} for {label}")
        return cls(tuple(sorted((label, int(n)) for label, n in multiplicities.items() if n)))

    def as_dict(self) -> Dict:
        return dict(self.entries)

    def labels(self) -> List:
        return [label for label, _ in self.entries]

    def __getitem__(self, label) -> int:
        return self.as_dict().get(label, 0)

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    def __add__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        total = self.as_dict()
        for label, n in other.entries:
            total[label] = total.get(label, 0) + n
        return type(self).from_dict(total)

    def subtract(self, other: "MultiplicityMap") -> "MultiplicityMap":
        """Krull–Schmidt cancellation; `other` must be a summand."""
        total = self.as_dict()
        for label, n in other.entries:
            total[label] = total.get(label, 0) - n
        return type(self).from_dict(total)

    def scale(self, n: int) -> "MultiplicityMap":
        return type(self).from_dict({label: n * m for label, m in self.entries})


class FusionVector(MultiplicityMap):
    """Labels r >= 1 stand for L(r,1), V(r-1), W_r, ... depending on the category."""

    def dimension(self) -> int:
        return sum(r * n for r, n in self.entries)


class BiFusionVector(MultiplicityMap):
    """Labels (r, r') stand for M_{r,r'} = L^(1)(r,1) ⊗ L^(25)(r',1)."""


def _check_labels(*labels: int) -> None:
    for label in labels:
        if label < 1:
            raise DomainError(f"fusion labels are positive integers, got {label}")


def fusion_range(r: int, rp: int) -> range:
    return range(abs(r - rp) + 1, r + rp, 2)


def fuse(r: int, rp: int) -> FusionVector:
    _check_labels(r, rp)
    return FusionVector.from_dict({k: 1 for k in fusion_range(r, rp)})


def n_symbol(r: int, rp: int, k: int) -> int:
    """How often L(k,1) appears in L(r,1) ⊠ L(rp,1)."""
    return fuse(r, rp)[k]


def fusion_product(a: FusionVector, b: FusionVector) -> FusionVector:
    total = FusionVector()
    for r, m in a:
        for rp, n in b:
            total = total + fuse(r, rp).scale(m * n)
    return total


def fusion_dimension_check(r: int, rp: int) -> bool:
    return fuse(r, rp).dimension() == r * rp


@dataclass(frozen=True)
class TensorL21Structure:
    """0 -> V(r+1,1)/J+ -> L(2,1) ⊠ L(r,1) -> V(r-1,1)/J- -> 0 and its semisimple answer."""
    r: int
    submodule_label: Optional[int]
    quotient_label: Optional[int]
    resolved: FusionVector

    def describe(self) -> str:
        if self.quotient_label is None:
            return f"L(2,1) ⊠ L({self.r},1) = L(2,1)"
        return (
            f"0 -> V({self.submodule_label},1)/J+ -> L(2,1) ⊠ L({self.r},1) -> V({self.quotient_label},1)/J- -> 0, "
            f"L(2,1) ⊠ L({self.r},1) = L({self.quotient_label},1) ⊕ L({self.submodule_label},1)"
        )


def tensor_L21_structure(r: int) -> TensorL21Structure:
    _check_labels(r)
    if r == 1:
        return TensorL21Structure(1, None, None, FusionVector.from_dict({2: 1}))
    return TensorL21Structure(r, r + 1, r - 1, FusionVector.from_dict({r - 1: 1, r + 1: 1}))


@lru_cache(maxsize=None)
def fuse_by_induction(r: int, rp: int) -> FusionVector:
    """
    L(r,1) ⊠ L(rp,1) built only from L(2,1) ⊠ - :
    L(r+1) ⊠ L(rp) = L(2) ⊠ (L(r) ⊠ L(rp)) - L(r-1) ⊠ L(rp).
    """
    _check_labels(r, rp)
    if r == 1:
        return FusionVector.from_dict({rp: 1})
    previous = fuse_by_induction(r - 1, rp)
    raised = FusionVector()
    for k, n in previous:
        raised = raised + tensor_L21_structure(k).resolved.scale(n)
    if r == 2:
        return raised
    return raised.subtract(fuse_by_induction(r - 2, rp))


@dataclass(frozen=True)
class AlgebraSummand:
    """
    One summand of an extension algebra: multiplicity space ⊗ (product of simple modules).

    `factor_levels` are the singular-vector levels of the factors, which fix their characters.
    """
    index: int
    multiplicity: int
    labels: Tuple[int, ...]
    lowest_weight: Rational
    factor_levels: Tuple[int, ...]


def _c25_weight(r: int) -> Rational:
    return h_rs(-1, r, 1)


def _c1_weight(r: int) -> Rational:
    return h_rs(1, r, 1)


def _w_summand(n: int) -> AlgebraSummand:
    r = 2 * n + 1
    return AlgebraSummand(n, r, (r,), _c25_weight(r), (r,))


def _x_summand(n: int) -> AlgebraSummand:
    r = 2 * n
    return AlgebraSummand(n, r, (r,), _c25_weight(r), (r,))


def _m_summand(n: int) -> AlgebraSummand:
    r = 2 * n + 1
    return AlgebraSummand(n, 1, (r,), _c25_weight(r), (r,))


def _centralizer_summand(r: int) -> AlgebraSummand:
    return AlgebraSummand(r, 1, (r, r), _c1_weight(r) + _c25_weight(r), (r, r))


def _generic_summand(s: int) -> AlgebraSummand:
    # h_{1,s}(t) + h_{1,s}(-t) = 1 - s for every t
    return AlgebraSummand(s, 1, (s, s), QQ(1 - s), (s, s))


_SUMMANDS: Dict[str, Tuple[Callable[[int], AlgebraSummand], int]] = {
    "W(-1)": (_w_summand, 0),
    "X": (_x_summand, 1),
    "M(-1)": (_m_summand, 0),
    "I(-1)": (_centralizer_summand, 1),
    "I_generic": (_generic_summand, 1),
}


@dataclass(frozen=True)
class AlgebraDecomposition:
    name: str

    def summands(self) -> Iterator[AlgebraSummand]:
        build, start = _SUMMANDS[self.name]
        for index in count(start):
            yield build(index)

    def take(self, bound: int) -> List[AlgebraSummand]:
        return list(islice(self.summands(), bound))


def decompose_algebra(name: str) -> AlgebraDecomposition:
    if name not in _SUMMANDS:
        raise DomainError(f"unknown algebra {name!r}; expected one of {', '.join(ALGEBRA_NAMES)}")
    return AlgebraDecomposition(name)


@dataclass(frozen=True)
class AlgebraCharacter:
    """Per-summand characters. Always a partial sum: each weight space gets infinitely many contributions."""
    name: str
    summands: Tuple[Tuple[AlgebraSummand, PuiseuxSeries], ...]
    partial: bool = True


def summand_character(summand: AlgebraSummand, order: Optional[int] = None) -> PuiseuxSeries:
    order = default_order(order)
    series = PuiseuxSeries.constant(summand.multiplicity, order)
    for level in summand.factor_levels:
        series = series * quotient_character(0, level, order)
    return series.shift(summand.lowest_weight)


def algebra_character(
    name: str,
    weight_floor=None,
    summand_bound: int = 1,
    order: Optional[int] = None,
) -> AlgebraCharacter:
    if summand_bound < 1:
        raise DomainError(f"summand_bound must be at least 1, got {summand_bound}")
    floor = None if weight_floor is None else rational(weight_floor)
    selected = []
    for summand in decompose_algebra(name).take(summand_bound):
        if floor is not None and summand.lowest_weight < floor:
            continue
        selected.append((summand, summand_character(summand, order)))
    return AlgebraCharacter(name, tuple(selected))


def induce_W(r: int) -> Tuple[str, int]:
    """W(-1) ⊠ L(r,1) is r copies of W(-1) for odd r and of X for even r."""
    _check_labels(r)
    return ("W(-1)" if r % 2 else "X", r)


def w_module_fusion(a: str, b: str) -> str:
    """Fusion of the two simple local W(-1)-modules: W(-1) is the unit and X ⊠ X = W(-1)."""
    for name in (a, b):
        if name not in ("W(-1)", "X"):
            raise DomainError(f"unknown W(-1)-module {name!r}")
    return "W(-1)" if a == b else "X"


def induce_centralizer(r: int, rp: int) -> FusionVector:
    """Induction of M_{r,rp} to the centralizer algebra, as multiplicities of W_k."""
    return fuse(r, rp)


def centralizer_fusion(r: int, rp: int) -> FusionVector:
    return fuse(r, rp)


def bi_fusion_product(a: BiFusionVector, b: BiFusionVector) -> BiFusionVector:
    total: Dict[Tuple[int, int], int] = {}
    for (r, rp), m in a:
        for (s, sp), n in b:
            for k, kp in product(fusion_range(r, s), fusion_range(rp, sp)):
                total[(k, kp)] = total.get((k, kp), 0) + m * n
    return BiFusionVector.from_dict(total)


def algebra_fusion_identity_check(r: int, rp: int, cutoff: int) -> bool:
    """
    A ⊠ M_{r,rp} = ⊕_k A ⊠ M_{k,1} in the bi-fusion ring, A = ⊕_{s <= cutoff} M_{s,s}.

    Only components with both labels <= cutoff - max(r, rp) are compared; they do not change
    when the cutoff grows.
    """
    _check_labels(r, rp)
    if cutoff < r + rp:
        raise DomainError(f"cutoff must be at least r + rp = {r + rp}, got {cutoff}")
    algebra = BiFusionVector.from_dict({(s, s): 1 for s in range(1, cutoff + 1)})
    left = bi_fusion_product(algebra, BiFusionVector.from_dict({(r, rp): 1}))
    right = BiFusionVector()
    for k, n in induce_centralizer(r, rp):
        right = right + bi_fusion_product(algebra, BiFusionVector.from_dict({(k, 1): n}))
    stable = cutoff - max(r, rp)
    for a, b in product(range(1, stable + 1), repeat=2):
        if left[(a, b)] != right[(a, b)]:
            logger.info(f"Bi-fusion identity fails at ({a}, {b}) for M({r},{rp})")
            return False
    return True


def generic_centralizer_fusion(
    first: Tuple[int, int, int],
    second: Tuple[int, int, int],
) -> MultiplicityMap:
    """W^{s1}_{r1,r1'} ⊠ W^{s2}_{r2,r2'}: sl2-type fusion in each of the three labels."""
    _check_labels(*first, *second)
    ranges = [fusion_range(a, b) for a, b in zip(first, second)]
    return MultiplicityMap.from_dict({labels: 1 for labels in product(*ranges)})


def generic_induce(left: Tuple[int, int], right: Tuple[int, int]) -> MultiplicityMap:
    """Induction of M_{(r,s),(r',s')} at generic level, as multiplicities of W^l_{r,r'} keyed (r, r', l)."""
    (r, s), (rp, sp) = left, right
    _check_labels(r, s, rp, sp)
    return MultiplicityMap.from_dict({(r, rp, ell): 1 for ell in fusion_range(s, sp)})


def generic_local_labels(bound: int) -> List[Tuple[int, int, int]]:
    """Simple local modules W^1_{r,r'} at generic level with r, r' <= bound: exactly r ≡ r' (mod 2)."""
    return [(r, rp, 1) for r, rp in product(range(1, bound + 1), repeat=2) if (r - rp) % 2 == 0]
