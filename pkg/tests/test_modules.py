import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from klrkit.cartan import CartanDatum
from klrkit.errors import ContentMismatch
from klrkit.klr import KLRContext
from klrkit.modules import (
    CyclotomicFamily, EF_and_FE, check_commuting_identity, check_sl2_identity, exactness_check, functor_E,
    functor_F, head_quotient, kgroup_commutator_check, regular_module, sl2_suite_check, suite_modules,
    trivial_module,
)

SL2 = KLRContext(CartanDatum([[2]]))
FAMILY2 = CyclotomicFamily(SL2, (2,))


def test_regular_module_satisfies_relations(a2):
    fam = CyclotomicFamily(a2, (1, 1))
    M = regular_module(fam.get((1, 1)))
    assert M.check_relations() > 0
    assert M.dim == fam.get((1, 1)).dim


def test_F_of_trivial_is_the_projective_block():
    A0 = FAMILY2.get((0,))
    F = functor_F(trivial_module(A0), 1, FAMILY2.get((1,)))
    assert F.character() == regular_module(FAMILY2.get((1,)), right_word=(1,)).character()
    F.check_relations()


def test_E_restricts_to_words_ending_in_i():
    A = FAMILY2.get((2,))
    E = functor_E(regular_module(A), 1, FAMILY2.get((1,)))
    assert E.dim == A.dim


def test_functor_rejects_wrong_target():
    A = FAMILY2.get((1,))
    with pytest.raises(ContentMismatch):
        functor_F(regular_module(A), 1, FAMILY2.get((1,)))


@pytest.mark.parametrize("lam", [1, 2, 3])
def test_sl2_identity_on_regular_modules(lam):
    fam = CyclotomicFamily(SL2, (lam,))
    for b in range(0, lam + 2):
        A = fam.get((b,))
        for M in suite_modules(A):
            assert check_sl2_identity(fam, M, 1)["passed"]


def test_negative_branch_is_exercised():
    fam = CyclotomicFamily(SL2, (1,))
    M = regular_module(fam.get((1,)))
    rep = check_sl2_identity(fam, M, 1)
    assert rep["branch"] == "negative" and rep["pairing"] == -1


def test_negative_branch_with_pairing_minus_two():
    fam = CyclotomicFamily(SL2, (2,))
    M = regular_module(fam.get((2,)))
    rep = check_sl2_identity(fam, M, 1)
    assert rep["pairing"] == -2 and rep["passed"]


def test_commuting_identity_a2(a2):
    fam = CyclotomicFamily(a2, (1, 1))
    for beta in [(0, 0), (1, 0), (0, 1), (1, 1)]:
        for M in suite_modules(fam.get(beta)):
            assert check_commuting_identity(fam, M, 1, 2)["passed"]
            assert check_commuting_identity(fam, M, 2, 1)["passed"]


def test_kgroup_commutator_a2(a2):
    fam = CyclotomicFamily(a2, (1, 0))
    mods = suite_modules(fam.get((1, 0))) + suite_modules(fam.get((1, 1)))
    assert all(r["passed"] for r in kgroup_commutator_check(fam, mods))


def test_EF_of_zero_content_is_empty():
    fam = CyclotomicFamily(SL2, (1,))
    ef, fe = EF_and_FE(fam, trivial_module(fam.get((0,))), 1)
    assert fe.is_zero()
    assert not ef.is_zero()


def test_head_quotient_is_lowest_degree():
    A = FAMILY2.get((1,))
    P = regular_module(A, right_word=(1,))
    top = head_quotient(P)
    assert top.dim == 1
    assert top.labels[0][1] == min(d for _, d in P.labels)


@given(st.integers(0, 10 ** 6))
def test_submodule_and_quotient_dimensions_add(seed):
    rng = random.Random(seed)
    A = CyclotomicFamily(SL2, (3,)).get((2,))
    M = regular_module(A)
    gens = [{rng.randrange(M.dim): Fraction(1)} for _ in range(rng.randint(0, 2))]
    S, Q = M.submodule(gens), M.quotient(gens)
    assert S.dim + Q.dim == M.dim
    assert S.character() + Q.character() == M.character()
    S.check_relations()
    Q.check_relations()


@given(st.integers(0, 10 ** 6))
def test_F_is_additive_on_short_exact_sequences(seed):
    rng = random.Random(seed)
    fam = CyclotomicFamily(SL2, (3,))
    M = regular_module(fam.get((1,)))
    gens = [{rng.randrange(M.dim): Fraction(1)}]
    assert exactness_check(fam, gens, M, 1)["passed"]


def test_sl2_suite_summary():
    rep = sl2_suite_check(SL2, (2,), max_height=2)
    assert rep["passed"] and rep["checks"]["sl2"] > 0
