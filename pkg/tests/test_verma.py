import random

import pytest
from sympy.polys.domains import QQ

from vir25.exceptions import ContractViolation, DegenerateFormError, DomainError
from vir25.scalars import gaussian
from vir25.verma import (
    HWModuleDescriptor,
    PBWVector,
    act_mode,
    act_word,
    central_charge_from_t,
    character,
    dual_basis,
    first_singular_level,
    gram_determinant,
    gram_matrix,
    h_rs,
    inner_product,
    partitions_of,
    quotient_character,
    simple_module,
    singular_vector,
    validate_partition,
)


def _terms(v):
    return {p: a for p, a in v.terms}


def test_weights_at_c25():
    assert central_charge_from_t(-1) == 25
    assert central_charge_from_t(1) == 1
    assert h_rs(-1, 2, 1) == QQ(-5, 4)
    assert h_rs(-1, 3, 1) == -3
    assert h_rs(1, 2, 1) == QQ(1, 4)


def test_zero_t_is_domain_error():
    with pytest.raises(DomainError):
        h_rs(0, 1, 1)
    with pytest.raises(DomainError):
        central_charge_from_t(0)


def test_partitions_order():
    assert partitions_of(3) == [(3,), (2, 1), (1, 1, 1)]
    assert partitions_of(0) == [()]
    assert len(partitions_of(6)) == 11


def test_validate_partition_rejects_increasing():
    with pytest.raises(ContractViolation):
        validate_partition([1, 2])
    with pytest.raises(ContractViolation):
        validate_partition([2, 0])


def test_singular_vector_level_two(verma_21):
    vectors = singular_vector(verma_21, 2)
    assert len(vectors) == 1
    assert _terms(vectors[0]) == {(2,): gaussian(1), (1, 1): gaussian(1)}


def test_singular_vector_level_three(verma_31):
    vectors = singular_vector(verma_31, 3)
    assert len(vectors) == 1
    assert _terms(vectors[0]) == {(3,): gaussian(2), (2, 1): gaussian(4), (1, 1, 1): gaussian(1)}


def test_singular_vector_is_annihilated(verma_31):
    v = singular_vector(verma_31, 3)[0]
    assert act_mode(1, v).is_zero()
    assert act_mode(2, v).is_zero()


def test_no_singular_vector_at_generic_weight():
    assert singular_vector(HWModuleDescriptor.verma(25, QQ(1, 3)), 2) == []


def test_singular_vector_requires_verma(l21):
    with pytest.raises(ContractViolation):
        singular_vector(l21, 2)


def test_gram_matrix_of_l31(l31):
    gram = gram_matrix(l31, 3)
    assert gram.basis == ((3,), (2, 1))
    assert gram.to_lists() == [[32, 2], [2, -55]]
    assert gram.determinant() == -1764


def test_gram_matrix_degenerate_at_level_two(verma_21):
    gram = gram_matrix(verma_21, 2)
    assert gram.to_lists() == [[QQ(15, 2), QQ(-15, 2)], [QQ(-15, 2), QQ(15, 2)]]
    assert gram.rank() == 1
    assert gram_determinant(verma_21, 2) == 0


def test_dual_basis_of_l31(l31):
    first, second = dual_basis(l31, 3)
    assert _terms(first) == {(3,): gaussian(QQ(55, 1764)), (2, 1): gaussian(QQ(1, 882))}
    assert _terms(second) == {(3,): gaussian(QQ(1, 882)), (2, 1): gaussian(QQ(-8, 441))}
    for dual, partition in ((first, (3,)), (second, (2, 1))):
        assert inner_product(dual, PBWVector.monomial(l31, partition)) == gaussian(1)


def test_dual_basis_degenerate(verma_21):
    with pytest.raises(DegenerateFormError):
        dual_basis(verma_21, 2)


def test_quotient_rewrites_top_power(l21):
    assert PBWVector.monomial(l21, (1, 1)) == PBWVector.monomial(l21, (2,)).scale(-1)
    assert l21.basis(2) == [(2,)]
    assert l21.basis(3) == [(3,), (2, 1)]


def test_quotient_requires_leading_power():
    with pytest.raises(DomainError):
        HWModuleDescriptor.quotient(25, QQ(1, 3), 2)


def test_act_word_orders_modes(verma_31):
    v = PBWVector.highest_weight_vector(verma_31)
    assert act_word([-1, -2], v) == PBWVector.monomial(verma_31, (2, 1))
    assert str(act_word([-1, -2], v)) == "1·L(-1)L(-2)·v"


def test_commutator_action(verma_31):
    v = PBWVector.highest_weight_vector(verma_31)
    # L_1 L_{-1} v = 2h v
    assert act_word([1, -1], v) == v.scale(-6)
    # L_2 L_{-2} v = (4h + c/2) v
    assert act_word([2, -2], v) == v.scale(QQ(1, 2))


def test_inner_product_levels(verma_31):
    v = PBWVector.highest_weight_vector(verma_31)
    assert inner_product(v, v) == gaussian(1)
    assert inner_product(v, PBWVector.monomial(verma_31, (1,))) == gaussian(0)


def test_mismatched_modules(verma_21, verma_31):
    with pytest.raises(ContractViolation):
        PBWVector.highest_weight_vector(verma_21) + PBWVector.highest_weight_vector(verma_31)


KAC_LABELS = [(r, s) for r in range(1, 7) for s in range(1, 7) if r * s <= 6]


@pytest.mark.parametrize("t", [QQ(-1), QQ(1), QQ(3, 4)])
@pytest.mark.parametrize("r, s", KAC_LABELS)
def test_kac_determinant_zeros(t, r, s):
    c = central_charge_from_t(t)
    assert gram_determinant(HWModuleDescriptor.verma(c, h_rs(t, r, s)), r * s) == 0


def test_kac_labels_cover_all_products_up_to_six():
    assert len(KAC_LABELS) == 14
    assert {(1, 4), (2, 3), (3, 2), (1, 5), (5, 1), (1, 6), (6, 1)} <= set(KAC_LABELS)


@pytest.mark.parametrize("r", range(1, 9))
def test_first_singular_level_at_c25(r):
    assert first_singular_level(HWModuleDescriptor.verma(25, h_rs(-1, r, 1)), r) == r


def test_first_singular_level_absent_at_generic_weight():
    assert first_singular_level(HWModuleDescriptor.verma(25, QQ(17, 7)), 6) is None


def _random_vector(rng, module, level):
    return PBWVector.from_terms(module, {p: rng.randint(-3, 3) for p in partitions_of(level)})


def _random_module(rng):
    c = QQ(rng.randint(-30, 30), rng.randint(1, 5))
    h = QQ(rng.randint(-10, 10), rng.randint(1, 4))
    return HWModuleDescriptor.verma(c, h)


def test_contravariant_form_is_adjoint():
    rng = random.Random(17)
    for _ in range(10):
        module = _random_module(rng)
        n = rng.randint(1, 3)
        k = rng.randint(0, 2)
        u = _random_vector(rng, module, k)
        w = _random_vector(rng, module, k + n)
        assert inner_product(act_mode(-n, u), w) == inner_product(u, act_mode(n, w))


def test_gram_matrix_is_symmetric():
    rng = random.Random(5)
    for _ in range(5):
        module = _random_module(rng)
        entries = gram_matrix(module, rng.randint(2, 4)).to_lists()
        assert entries == [list(row) for row in zip(*entries)]


def test_quotient_character():
    s = quotient_character(QQ(-5, 4), 2, 5)
    assert s.leading_exponent == QQ(-5, 4)
    assert s.coefficients == tuple(gaussian(a) for a in (1, 1, 1, 2, 3, 4))


def test_vacuum_character():
    vacuum = HWModuleDescriptor.quotient(25, 0, 1)
    s = character(vacuum, 4)
    assert s.leading_exponent == 0
    assert s.coefficients == tuple(gaussian(a) for a in (1, 0, 1, 1, 2))


@pytest.mark.parametrize("r", [3, 4, 5, 6])
def test_simple_character_is_verma_difference(r):
    h = h_rs(-1, r, 1)
    assert h_rs(-1, r - 2, 1) == h + r
    difference = quotient_character(h, None, 8) - quotient_character(h + r, None, 8 - r)
    assert character(simple_module(-1, r, 1), 8) == difference


def test_character_of_simple_module_matches_basis(l31):
    s = character(l31, 6)
    for level in range(7):
        assert s.coefficients[level] == gaussian(len(l31.basis(level)))
