import pytest
from hypothesis import given, settings as hsettings, strategies as st
from pydantic import ValidationError

from nilact.algebra.abelian import (
    ab_to_table,
    aut_group,
    brute_force_automorphisms,
    additive_test_maps,
    check_aut_oracle,
    check_ext_naturality,
    compose,
    count_automorphisms,
    count_bijective_endomorphisms,
    elementary_automorphisms,
    enumerate_automorphisms,
    ext_presentation,
    ext_to_tensor_iso,
    ext_zp,
    induced_ext,
    hom_permutation,
    hom_zp,
    hom_zp_generators,
    induced_hom,
    induced_tensor,
    is_automorphism,
    matrix_group,
    require_automorphism,
    tensor_kernel,
    tensor_zp,
)
from nilact.algebra.grpcore import check_axioms, lower_central_series
from nilact.core.arith import det_mod_p
from nilact.core.config import settings
from nilact.core.errors import NotAutomorphism, TooLarge
from nilact.models.abelian import AbGroup, AbHom


def test_primary_form_splits_invariant_factors():
    A = AbGroup(torsion=[12])
    assert A.torsion == (4, 3)
    assert A.label == "Z4xZ3"
    assert AbGroup(torsion=(2, 4, 2)).label == "Z4xZ2^2"
    assert AbGroup(free_rank=2, torsion=(4,)).label == "Z^2xZ4"
    assert AbGroup().label == "trivial"
    assert AbGroup(torsion=[12]) == AbGroup(torsion=(4, 3))


def test_group_invariants():
    A = AbGroup.parse_factors([0, 4, 3])
    assert A.free_rank == 1
    assert A.moduli == (0, 4, 3)
    assert A.order is None
    assert A.torsion_order == 12
    assert A.primes == (2, 3)
    assert A.p_indices(2) == (1,)
    assert not A.is_p_group()
    assert AbGroup.cyclic(8).is_p_group(2)
    assert not AbGroup.cyclic(8).is_p_group(3)


@pytest.mark.parametrize("factors", [[-2], [0]])
def test_torsion_factors_must_be_positive(factors):
    with pytest.raises(ValidationError):
        AbGroup(torsion=factors)


def test_hom_entries_are_reduced():
    Z4 = AbGroup.cyclic(4)
    f = AbHom(source=Z4, target=Z4, matrix=((7,),))
    assert f.matrix == ((3,),)
    assert str(f) == "[3]"


@pytest.mark.parametrize(
    "source, target, matrix",
    [
        (AbGroup.cyclic(2), AbGroup.cyclic(4), ((1,),)),  # 4 does not divide 1*2
        (AbGroup.cyclic(2), AbGroup.cyclic(0), ((1,),)),  # torsion into Z
        (AbGroup.cyclic(4), AbGroup.cyclic(4), ((1, 0),)),
    ],
)
def test_ill_defined_homs_are_rejected(source, target, matrix):
    with pytest.raises(ValidationError):
        AbHom(source=source, target=target, matrix=matrix)


def test_well_defined_hom_between_cyclic_groups():
    f = AbHom(source=AbGroup.cyclic(2), target=AbGroup.cyclic(4), matrix=((2,),))
    assert list(hom_permutation(f)) == [0, 2]


@pytest.mark.parametrize("n, count", [(2, 1), (4, 2), (8, 4), (9, 6), (5, 4)])
def test_automorphisms_of_cyclic_groups(n, count):
    assert len(enumerate_automorphisms(AbGroup.cyclic(n))) == count


def test_aut_of_klein_group_is_s3():
    auts = aut_group(AbGroup(torsion=(2, 2)))
    assert auts.order == 6
    assert not auts.group.is_abelian
    assert check_axioms(auts.group)
    assert not lower_central_series(auts.group).is_nilpotent


def test_aut_of_mixed_p_group():
    # |Aut(Z4 + Z2)| = 8
    assert aut_group(AbGroup(torsion=(4, 2))).order == 8


def test_automorphism_test_on_free_part():
    Z2 = AbGroup(free_rank=2)
    assert is_automorphism(AbHom(source=Z2, target=Z2, matrix=((1, 2), (0, 1))))
    assert not is_automorphism(AbHom(source=Z2, target=Z2, matrix=((2, 0), (0, 1))))
    with pytest.raises(NotAutomorphism):
        require_automorphism(AbHom.scalar(AbGroup.cyclic(4), 2))


def test_compose_reads_right_to_left():
    A = AbGroup(torsion=(2, 2))
    f = AbHom(source=A, target=A, matrix=((1, 1), (0, 1)))
    g = AbHom(source=A, target=A, matrix=((0, 1), (1, 0)))
    fg = compose(f, g)
    assert list(hom_permutation(fg)) == list(hom_permutation(f)[hom_permutation(g)])


def test_matrix_group_generated_by_unitriangular():
    A = AbGroup(torsion=(3, 3))
    u = AbHom(source=A, target=A, matrix=((1, 1), (0, 1)))
    group = matrix_group(A, [u], name="U")
    assert group.order == 3
    assert group.automorphisms[0].is_identity


@pytest.mark.parametrize("label, factors, expected", [
    ("Z8", (8,), (2,)),
    ("Z9", (9,), ()),
    ("ZxZ4", (0, 4), (2, 2)),
])
def test_tensor_with_z2(label, factors, expected):
    A = AbGroup.parse_factors(list(factors))
    assert A.label == label
    assert tensor_zp(A, 2).torsion == expected


def test_tensor_kernel_of_z8():
    kernel = tensor_kernel(AbGroup.cyclic(8), 2)
    assert kernel.order == 4
    assert all(induced_tensor(f, 2).is_identity for f in kernel.automorphisms)


def test_hom_zp_basis():
    Z4 = AbGroup.cyclic(4)
    assert hom_zp(Z4, 2) == AbGroup.cyclic(2)
    assert hom_zp_generators(Z4, 2) == (2,)
    # x3 on Z4 fixes 2
    assert induced_hom(AbHom.scalar(Z4, 3), 2).is_identity


def test_enumeration_caps():
    with pytest.raises(TooLarge):
        enumerate_automorphisms(AbGroup(torsion=(2,) * 10))
    with pytest.raises(TooLarge):
        ab_to_table(AbGroup.cyclic(64), cap=32)


@hsettings(deadline=None, max_examples=25)
@given(st.sampled_from([(2,), (3,), (4,), (2, 2), (4, 2), (8,), (3, 3), (9, 3), (6,), (2, 2, 2), (4, 4), (12,)]))
def test_block_enumeration_matches_brute_force(torsion):
    A = AbGroup(torsion=torsion)
    result = check_aut_oracle(A)
    assert result, result.details
    assert result.details["enumerated"] == len(brute_force_automorphisms(A))


@hsettings(deadline=None, max_examples=15)
@given(st.sampled_from([(2, 2), (4, 2), (3, 3), (6,)]))
def test_tables_are_groups(torsion):
    A = AbGroup(torsion=torsion)
    table = ab_to_table(A)
    assert table.order == A.order
    assert table.is_abelian
    assert check_axioms(table)


@pytest.mark.parametrize("torsion, count", [
    ((2,) * 5, 9999360),
    ((2,) * 6, 20158709760),
    ((2, 2, 2), 168),
    ((3, 3), 48),
])
def test_automorphism_counts_of_elementary_groups(torsion, count):
    A = AbGroup(torsion=torsion)
    assert count_automorphisms(A) == count
    assert count_bijective_endomorphisms(A) == count


@pytest.mark.parametrize("torsion", [(2,) * 5, (4, 2, 2, 2, 2), (2,) * 6, (8, 4, 2), (16, 2, 2)])
def test_oracle_settles_every_group_up_to_64(torsion):
    A = AbGroup(torsion=torsion)
    result = check_aut_oracle(A)
    assert result, result.details
    assert result.details["enumerated"] == result.details["brute_force"]
    expected = "elements" if result.details["enumerated"] <= settings.oracle_cap else "counts"
    assert result.details["compared"] == expected


def test_filtered_enumeration_respects_the_filter():
    A = AbGroup(torsion=(4, 2))
    odd_diagonal = enumerate_automorphisms(A, entry_filter=lambda q, i, j, m: i != j or m % q == 1)
    assert len(odd_diagonal) == count_automorphisms(A, entry_filter=lambda q, i, j, m: i != j or m % q == 1)
    assert all(is_automorphism(f) for f in odd_diagonal)


@hsettings(deadline=None, max_examples=8)
@given(st.sampled_from([(4, 2), (2, 2, 2), (9, 3), (8, 2), (4, 3), (4, 4), (5, 5), (8, 4)]))
def test_elementary_automorphisms_generate_aut(torsion):
    A = AbGroup(torsion=torsion)
    generators = elementary_automorphisms(A)
    assert all(is_automorphism(f) for f in generators)
    assert matrix_group(A, generators).order == count_automorphisms(A)


def test_additive_test_maps_switch_to_a_basis():
    maps, kind = additive_test_maps(AbGroup(torsion=(4, 2)))
    assert kind == "automorphisms"
    assert len(maps) == 8
    maps, kind = additive_test_maps(AbGroup(torsion=(2,) * 5))
    assert kind == "endomorphism basis"
    assert len(maps) == 25


def test_ext_is_a_quotient_of_the_table():
    A = AbGroup(torsion=(8, 4, 3))
    ext = ext_presentation(A, 2)
    assert ext.quotient.group.order == 4
    assert len(ext.basis) == 2
    assert ext_zp(A, 2) == tensor_zp(A, 2)
    assert ext_zp(A, 3) == AbGroup.cyclic(3)
    assert ext_zp(AbGroup(free_rank=1, torsion=(4,)), 2) == AbGroup(torsion=(2, 2))


@hsettings(deadline=None, max_examples=10)
@given(st.sampled_from([((4, 2), 2), ((8, 2), 2), ((9, 3), 3), ((4, 3), 2), ((4, 3), 3), ((2, 2, 2), 2), ((8, 4, 2), 2)]))
def test_ext_to_tensor_is_natural(case):
    torsion, p = case
    A = AbGroup(torsion=torsion)
    iso = ext_to_tensor_iso(A, p)
    assert is_automorphism(iso)
    result = check_ext_naturality(A, p)
    assert result, result.details
    assert result.details["count"] > 0


def test_induced_ext_is_read_off_the_cosets():
    Z8 = AbGroup.cyclic(8)
    # x3 is the identity on Z8/2Z8, x2 kills it
    assert induced_ext(AbHom.scalar(Z8, 3), 2).is_identity
    assert induced_ext(AbHom.scalar(Z8, 2), 2).matrix == ((0,),)
    Z4xZ2 = AbGroup(torsion=(4, 2))
    swap_on_factor = AbHom(source=Z4xZ2, target=Z4xZ2, matrix=((1, 2), (1, 1)))
    iso = ext_to_tensor_iso(Z4xZ2, 2)
    assert compose(iso, induced_ext(swap_on_factor, 2)) == compose(induced_tensor(swap_on_factor, 2), iso)
    assert not induced_tensor(swap_on_factor, 2).is_identity


def test_table_cap_is_checked_on_cached_tables(monkeypatch):
    Z8 = AbGroup.cyclic(8)
    assert ab_to_table(Z8).order == 8
    with pytest.raises(TooLarge):
        ab_to_table(Z8, cap=4)
    monkeypatch.setattr(settings, "cap", 4)
    with pytest.raises(TooLarge):
        ab_to_table(Z8)


@pytest.mark.parametrize("matrix, p, det", [
    ([], 5, 1),
    ([[1, 2], [3, 4]], 5, 3),
    ([[2, 0], [0, 2]], 2, 0),
    ([[2, 1, 1], [1, 3, 2], [1, 0, 0]], 7, 6),
    ([[-1]], 3, 2),
])
def test_det_mod_p(matrix, p, det):
    assert det_mod_p(matrix, p) == det
