import numpy as np
import pytest
from hypothesis import given, settings as hsettings, strategies as st

from nilact.algebra.grpcore import (
    center,
    check_axioms,
    close_elements,
    commutator_subgroup,
    enumerate_subgroups,
    group_from_perms,
    is_normal,
    lower_central_series,
    quotient,
    subgroup_closure,
    subgroup_table,
)
from nilact.cli.catalog import default_catalog
from nilact.core.errors import ClosureExceedsCap, InvalidPermutation, NotNormal, TooLarge
from nilact.models.group import GroupTable
from nilact.models.permutation import Permutation
from nilact.models.series import VerdictKind

from .conftest import perm_group


def test_permutation_parse_and_product():
    a = Permutation.parse(3, "(0 1)")
    b = Permutation.parse(3, "(0 1 2)")
    # b first, then a
    assert (a * b).images == (0, 2, 1)
    assert str(Permutation.parse(4, "()")) == "()"
    assert str(Permutation.parse(4, "(2 3)(0 1)")) == "(0 1)(2 3)"


@pytest.mark.parametrize("text", ["(0 1", "(0 5)", "(0 1)(1 2)", "(0 x)"])
def test_permutation_rejects_malformed_cycles(text):
    with pytest.raises(InvalidPermutation):
        Permutation.parse(3, text)


def test_closure_places_identity_first(S3):
    assert S3.order == 6
    assert S3.label(0) == "()"
    assert check_axioms(S3)


def test_closure_cap():
    with pytest.raises(ClosureExceedsCap):
        group_from_perms(5, [Permutation.parse(5, "(0 1)"), Permutation.parse(5, "(0 1 2 3 4)")], cap=50)


def test_generator_degree_must_match():
    with pytest.raises(InvalidPermutation):
        group_from_perms(4, [Permutation.parse(3, "(0 1)")])


def test_s3_series_and_center(S3):
    series = lower_central_series(S3)
    assert series.verdict.kind is VerdictKind.STABILIZED
    assert series.verdict.depth == 1
    assert series.orders() == [6, 3]
    assert center(S3).is_trivial
    assert not series.is_nilpotent


def test_q8_series_center_and_derived(Q8):
    assert Q8.order == 8
    series = lower_central_series(Q8)
    assert series.is_nilpotent
    assert series.nil_order == 2
    whole = Q8.whole()
    derived = commutator_subgroup(Q8, whole, whole)
    assert derived.order == 2
    assert center(Q8).members == derived.members


def test_depth_cap_wins_over_stabilization(S3):
    series = lower_central_series(S3, depth_cap=0)
    assert series.verdict.kind is VerdictKind.DEPTH_CAP
    assert series.verdict.depth == 0


def test_trivial_group_is_nilpotent_of_order_zero():
    trivial = GroupTable(np.zeros((1, 1)), np.zeros(1))
    series = lower_central_series(trivial)
    assert series.verdict.kind is VerdictKind.NILPOTENT
    assert series.nil_order == 0
    assert check_axioms(trivial)


def test_quotient_of_z4_by_two(Z):
    Z4 = Z(4)
    two = subgroup_closure(Z4, [2])
    assert two.order == 2
    q = quotient(Z4, two)
    assert q.group.order == 2
    assert check_axioms(q.group)
    assert q.projection[1] == q.projection[3] != q.projection[0]


def test_quotient_needs_normal_subgroup(S3):
    transposition = subgroup_closure(S3, [S3.labels.index("(0 1)")])
    assert not is_normal(S3, transposition)
    with pytest.raises(NotNormal):
        quotient(S3, transposition)


def test_subgroup_lattice_of_s3(S3):
    lattice = enumerate_subgroups(S3)
    assert [H.order for H in lattice] == [1, 2, 2, 2, 3, 6]
    assert all(H.is_closed() for H in lattice)


def test_lattice_cap(S3):
    with pytest.raises(TooLarge):
        enumerate_subgroups(S3, cap=5)


def test_lattice_is_reused_and_cap_still_applies(S3):
    first = enumerate_subgroups(S3)
    second = enumerate_subgroups(S3)
    assert all(a is b for a, b in zip(first, second))
    second.pop()
    assert len(enumerate_subgroups(S3)) == 6
    with pytest.raises(TooLarge):
        enumerate_subgroups(S3, cap=5)


def test_subgroup_table_embeds(Q8):
    Z = center(Q8)
    table, embedding = subgroup_table(Z)
    assert table.order == 2
    assert embedding[0] == Q8.identity
    assert check_axioms(table)


def test_broken_table_is_reported():
    mul = np.array([[0, 1], [1, 1]])
    result = check_axioms(GroupTable(mul, np.array([0, 1]), generators=(1,)))
    assert not result
    assert result.details["axiom"] == "inverse"


def test_close_elements_on_integers_mod_n():
    elements = close_elements([3], lambda x, g: (x + g) % 10, 0)
    assert sorted(elements) == list(range(10))
    assert elements[0] == 0


@hsettings(deadline=None, max_examples=20)
@given(st.sampled_from(["S3", "D4", "Q8", "A4", "Dic3", "C2xD4", "D5", "F20"]))
def test_catalog_groups_satisfy_axioms(name):
    G = default_catalog().get(name).body.table
    assert check_axioms(G)
    series = lower_central_series(G)
    for a, b in zip(series.terms, series.terms[1:]):
        assert b.issubset(a)
        assert is_normal(G, b)


@hsettings(deadline=None, max_examples=15)
@given(st.sampled_from([(4, "(0 1 2 3)", "(0 2)"), (4, "(0 1 2)", "(1 2 3)"), (5, "(0 1 2 3 4)", "(1 4)(2 3)")]))
def test_commutators_match_table(spec):
    degree, *cycles = spec
    G = perm_group(degree, *cycles)
    for g in range(G.order):
        for h in range(G.order):
            assert G.commutator(g, h) == G.product(G.inverse(g), G.inverse(h), g, h)


def test_pauli_group():
    G = default_catalog().get("C4oD4").body.table
    assert G.order == 16
    assert check_axioms(G)
    assert center(G).order == 4
    series = lower_central_series(G)
    assert series.orders() == [16, 2, 1]
    assert series.nil_order == 2


def test_c3_semi_d4_is_not_nilpotent():
    G = default_catalog().get("C3semiD4").body.table
    assert G.order == 24
    series = lower_central_series(G)
    assert series.verdict.kind is VerdictKind.STABILIZED
    assert series.orders() == [24, 6, 3]
