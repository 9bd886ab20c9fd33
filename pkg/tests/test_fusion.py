import random
from itertools import product

import pytest

from vir25.exceptions import ContractViolation, DomainError
from vir25.fusion import (
    ALGEBRA_NAMES,
    BiFusionVector,
    FusionVector,
    MultiplicityMap,
    algebra_character,
    algebra_fusion_identity_check,
    bi_fusion_product,
    centralizer_fusion,
    decompose_algebra,
    fuse,
    fuse_by_induction,
    fusion_dimension_check,
    fusion_product,
    generic_centralizer_fusion,
    generic_induce,
    generic_local_labels,
    induce_W,
    n_symbol,
    tensor_L21_structure,
    w_module_fusion,
)
from vir25.scalars import gaussian

LABELS = range(1, 13)


def _single(r):
    return FusionVector.from_dict({r: 1})


def test_fuse_examples():
    assert fuse(1, 9).as_dict() == {9: 1}
    assert fuse(2, 2).as_dict() == {1: 1, 3: 1}
    assert fuse(3, 4).as_dict() == {2: 1, 4: 1, 6: 1}
    assert n_symbol(3, 4, 4) == 1
    assert n_symbol(3, 4, 5) == 0


def test_fuse_rejects_non_positive_labels():
    with pytest.raises(DomainError):
        fuse(0, 2)


def test_unit_and_commutativity():
    for r, rp in product(LABELS, repeat=2):
        assert fuse(1, r) == _single(r)
        assert fuse(r, rp) == fuse(rp, r)


def test_associativity():
    for a, b, c in product(LABELS, repeat=3):
        left = fusion_product(fusion_product(_single(a), _single(b)), _single(c))
        right = fusion_product(_single(a), fusion_product(_single(b), _single(c)))
        assert left == right


def test_self_duality():
    for r, rp in product(LABELS, repeat=2):
        assert n_symbol(r, rp, 1) == (1 if r == rp else 0)


def test_dimension():
    for r, rp in product(range(1, 21), repeat=2):
        assert fusion_dimension_check(r, rp)


def test_parity_grading():
    for r, rp in product(LABELS, repeat=2):
        for k in fuse(r, rp).labels():
            assert (k - r - rp) % 2 == 1


def _grade(label):
    return (label - 1) % 2


def test_parity_grading_is_multiplicative():
    for a, b in product(LABELS, repeat=2):
        grades = {_grade(k) for k in fusion_product(_single(a), _single(b)).labels()}
        assert grades == {(_grade(a) + _grade(b)) % 2}
    odd = [r for r in LABELS if _grade(r) == 0]
    for a, b in product(odd, repeat=2):
        assert all(k % 2 == 1 for k in fuse(a, b).labels())


def test_multiplicities_stay_non_negative():
    with pytest.raises(ContractViolation):
        FusionVector.from_dict({1: -1})
    with pytest.raises(ContractViolation):
        fuse(2, 2).subtract(fuse(3, 3))


def test_tensor_with_L21():
    assert tensor_L21_structure(1).resolved == _single(2)
    structure = tensor_L21_structure(4)
    assert structure.resolved.as_dict() == {3: 1, 5: 1}
    assert "V(5,1)/J+" in structure.describe()


def test_fusion_by_induction_matches_closed_form():
    for r, rp in product(LABELS, repeat=2):
        assert fuse_by_induction(r, rp) == fuse(r, rp)


def test_decompositions():
    w = [(s.multiplicity, s.labels, s.lowest_weight) for s in decompose_algebra("W(-1)").take(3)]
    assert w == [(1, (1,), 0), (3, (3,), -3), (5, (5,), -8)]
    x = [(s.multiplicity, s.labels) for s in decompose_algebra("X").take(2)]
    assert x == [(2, (2,)), (4, (4,))]
    m = [(s.multiplicity, s.labels) for s in decompose_algebra("M(-1)").take(2)]
    assert m == [(1, (1,)), (1, (3,))]
    centralizer = [(s.labels, s.lowest_weight) for s in decompose_algebra("I(-1)").take(3)]
    assert centralizer == [((1, 1), 0), ((2, 2), -1), ((3, 3), -2)]
    generic = [s.lowest_weight for s in decompose_algebra("I_generic").take(3)]
    assert generic == [0, -1, -2]


def test_decompose_unknown_algebra():
    assert "W(-1)" in ALGEBRA_NAMES
    with pytest.raises(DomainError, match="unknown algebra"):
        decompose_algebra("Y")


def test_centralizer_character():
    character = algebra_character("I(-1)", summand_bound=2, order=3)
    assert character.partial
    summand, series = character.summands[1]
    assert summand.labels == (2, 2)
    # q^{-1} (1 - q^2)^2 / prod (1 - q^n)^2
    assert series.leading_exponent == -1
    assert series.coefficients == tuple(gaussian(a) for a in (1, 2, 3, 6))


def test_character_weight_floor():
    character = algebra_character("W(-1)", weight_floor=-3, summand_bound=3, order=2)
    assert [s.lowest_weight for s, _ in character.summands] == [0, -3]
    assert character.summands[1][1].coefficients[0] == gaussian(3)
    with pytest.raises(DomainError):
        algebra_character("W(-1)", summand_bound=0)


def test_induction_to_W():
    for r in range(1, 21):
        name, n = induce_W(r)
        assert n == r
        assert name == ("W(-1)" if r % 2 else "X")


def test_w_module_fusion():
    assert w_module_fusion("X", "X") == "W(-1)"
    assert w_module_fusion("W(-1)", "X") == "X"
    with pytest.raises(DomainError):
        w_module_fusion("X", "M(-1)")


def test_centralizer_fusion():
    assert centralizer_fusion(2, 2).as_dict() == {1: 1, 3: 1}
    assert centralizer_fusion(2, 3).as_dict() == {2: 1, 4: 1}


def test_bi_fusion_product():
    a = BiFusionVector.from_dict({(2, 1): 1})
    b = BiFusionVector.from_dict({(2, 3): 1})
    assert bi_fusion_product(a, b).as_dict() == {(1, 3): 1, (3, 3): 1}


def test_algebra_fusion_identity():
    for r, rp in product(range(1, 7), repeat=2):
        assert algebra_fusion_identity_check(r, rp, 14)


def test_algebra_fusion_identity_cutoff():
    with pytest.raises(DomainError):
        algebra_fusion_identity_check(4, 5, 8)


def _triple_loop(first, second):
    expected = {}
    for k1 in range(1, first[0] + second[0]):
        for k2 in range(1, first[1] + second[1]):
            for k3 in range(1, first[2] + second[2]):
                if all(
                    abs(a - b) < k <= a + b - 1 and (k - a - b) % 2 == 1
                    for a, b, k in zip(first, second, (k1, k2, k3))
                ):
                    expected[(k1, k2, k3)] = 1
    return expected


def test_generic_centralizer_fusion_against_triple_loop():
    rng = random.Random(25)
    for _ in range(20):
        first = tuple(rng.randint(1, 5) for _ in range(3))
        second = tuple(rng.randint(1, 5) for _ in range(3))
        assert generic_centralizer_fusion(first, second).as_dict() == _triple_loop(first, second)


def test_generic_induce():
    assert generic_induce((1, 2), (3, 2)).as_dict() == {(1, 3, 1): 1, (1, 3, 3): 1}


def test_generic_local_labels():
    labels = generic_local_labels(3)
    assert labels == [(1, 1, 1), (1, 3, 1), (2, 2, 1), (3, 1, 1), (3, 3, 1)]
    assert all(isinstance(label, tuple) for label in labels)


def test_multiplicity_map_algebra():
    total = MultiplicityMap.from_dict({"a": 1}) + MultiplicityMap.from_dict({"a": 2, "b": 1})
    assert total["a"] == 3
    assert total["c"] == 0
    assert len(total.scale(0)) == 0
    assert total["b"] == 1
