import numpy as np
import pytest
from hypothesis import given, settings as hsettings, strategies as st

from nilact.algebra.abelian import ab_to_table
from nilact.algebra.actions import (
    a_commutator,
    check_gamma_functoriality,
    check_jo2,
    check_jo2_all,
    check_jo3,
    check_lema1,
    check_witt_hall,
    check_witt_hall_all,
    g_commutator,
    gamma_series,
    gamma_series_generated,
    mixed_commutator,
    nil_bound_check,
    quotient_action,
    restrict_target,
)
from nilact.algebra.grpcore import enumerate_subgroups, subgroup_closure
from nilact.cli.catalog import default_catalog
from nilact.core.errors import InvalidAction, NotApplicable
from nilact.models.abelian import AbGroup
from nilact.models.action import Action
from nilact.models.permutation import Permutation
from nilact.models.series import VerdictKind

from .conftest import perm_group


@pytest.fixture(scope="module")
def times3():
    """C2 acting on Z4 by multiplication by 3."""
    C2 = perm_group(2, "(0 1)", name="C2")
    Z4 = ab_to_table(AbGroup.cyclic(4))
    return Action.from_generator_images(C2, Z4, {1: [0, 3, 2, 1]}, "x3-Z4")


def test_commutator_conventions(times3):
    # [g,a] = (g.a^-1) a and [a,g] = a^-1 (g.a), written additively on Z4
    assert g_commutator(times3, 1, 1) == (-3 * 1 + 1) % 4
    assert a_commutator(times3, 1, 1) == (-1 + 3) % 4
    assert g_commutator(times3, 0, 3) == 0


def test_times3_series(times3):
    series = gamma_series(times3)
    assert series.verdict.kind is VerdictKind.NILPOTENT
    assert series.nil_order == 2
    assert series.orders() == [4, 2, 1]


def test_inversion_on_c3_stabilizes():
    C2 = perm_group(2, "(0 1)")
    C3 = ab_to_table(AbGroup.cyclic(3))
    action = Action.from_generator_images(C2, C3, {1: Permutation.parse(3, "(1 2)")})
    series = gamma_series(action)
    assert series.verdict.kind is VerdictKind.STABILIZED
    assert series.stabilized.order == 3


def test_conjugation_series_is_lower_central_series(Q8):
    series = gamma_series(Action.conjugation(Q8))
    assert series.nil_order == 2


def test_trivial_action(S3):
    action = Action.trivial(S3, ab_to_table(AbGroup.cyclic(4)))
    assert action.is_trivial
    assert gamma_series(action).nil_order == 1


def test_inconsistent_generator_images_are_rejected():
    C2 = perm_group(2, "(0 1)")
    Z3 = ab_to_table(AbGroup.cyclic(3))
    # doubling has order 3 on Z7, so it cannot be the image of an involution
    Z7 = ab_to_table(AbGroup.cyclic(7))
    doubling = [(2 * a) % 7 for a in range(7)]
    with pytest.raises(InvalidAction):
        Action.from_generator_images(C2, Z7, {1: doubling})
    with pytest.raises(InvalidAction):
        Action.from_generator_images(C2, Z3, {1: [0, 1, 1]})
    with pytest.raises(InvalidAction):
        Action.from_generator_images(C2, Z3, {})


def test_non_automorphism_image_is_rejected():
    C2 = perm_group(2, "(0 1)")
    Z4 = ab_to_table(AbGroup.cyclic(4))
    with pytest.raises(InvalidAction):
        Action.from_generator_images(C2, Z4, {1: [0, 2, 1, 3]})


def test_from_table_round_trip(times3):
    rebuilt = Action.from_table(times3.actor, times3.target, times3.table)
    assert np.array_equal(rebuilt.table, times3.table)
    with pytest.raises(InvalidAction):
        Action.from_table(times3.actor, times3.target, times3.table[:, ::-1])


def test_mixed_commutator_with_trivial_subgroup(times3):
    trivial = times3.actor.trivial()
    assert mixed_commutator(times3, trivial, times3.target.whole()).is_trivial


def test_quotient_action_is_trivial(times3):
    qa = quotient_action(times3)
    assert qa.trivial
    assert qa.quotient.group.order == 2
    assert check_lema1(times3)


def test_restriction_to_gamma_one(times3):
    gamma1 = gamma_series(times3).term(1)
    restricted, embedding = restrict_target(times3, gamma1)
    assert restricted.target.order == 2
    assert restricted.is_trivial
    assert sorted(embedding.tolist()) == [0, 2]


def test_witt_hall_single_triple(S3):
    action = Action.conjugation(S3)
    assert all(check_witt_hall(action, f, g, b) for f in range(6) for g in range(6) for b in range(6))


def test_jo2_on_conjugation(D4):
    action = Action.conjugation(D4)
    subgroups = enumerate_subgroups(D4)
    H, K = D4.whole(), subgroups[-2]
    assert check_jo2(action, H, K)
    assert check_jo2_all(action)


def test_series_containment_needs_nilpotent_action(S3):
    with pytest.raises(NotApplicable):
        check_jo3(Action.conjugation(S3))


def test_nil_bound(times3):
    result = nil_bound_check(times3)
    assert result
    assert result.details == {"nil_actor": 1, "nil_action": 2}


def test_nil_bound_skips_unfaithful(S3):
    with pytest.raises(NotApplicable):
        nil_bound_check(Action.trivial(S3, ab_to_table(AbGroup.cyclic(4))))


_ACTIONS = ["conj-S3", "conj-D4", "conj-Q8", "x3-Z8", "x5-Z12", "sign-S3-Z3", "d4-Z4", "ut-Z2^3", "aut-Z4xZ2", "kernel-Z8xZ2"]


@hsettings(deadline=None, max_examples=len(_ACTIONS))
@given(st.sampled_from(_ACTIONS))
def test_identities_on_catalog_actions(name):
    action = default_catalog().get(name).body.action
    assert check_witt_hall_all(action)
    assert check_gamma_functoriality(action)
    assert check_lema1(action)
    series = gamma_series(action)
    for a, b in zip(series.terms, series.terms[1:]):
        assert b.issubset(a)
    if series.is_nilpotent:
        assert check_jo3(action)


def test_gamma_one_of_times3_is_twice_z4(times3):
    term = gamma_series(times3).term(1)
    assert term.members == subgroup_closure(times3.target, [2]).members


@hsettings(deadline=None, max_examples=8)
@given(st.sampled_from(["x3-Z4", "x3-Z8", "x5-Z12", "x2-Z5", "aut-Z2^2", "aut-Z8", "aut-Z4xZ2", "kernel-Z8xZ2"]))
def test_generated_series_matches_tabulated_actor(name):
    action = default_catalog().get(name).body.action
    full = gamma_series(action)
    generated = gamma_series_generated(action.target, action.table[list(action.actor.generators)])
    assert generated.orders() == full.orders()
    assert generated.verdict.kind is full.verdict.kind
    assert [t.members for t in generated.terms] == [t.members for t in full.terms]


def test_generated_series_needs_abelian_target(S3):
    with pytest.raises(InvalidAction):
        gamma_series_generated(S3, np.arange(6)[None, :])
