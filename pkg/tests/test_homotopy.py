import pytest
from hypothesis import given, settings as hsettings, strategies as st
from pydantic import ValidationError
from sympy import eye

from nilact.algebra.grpcore import lower_central_series
from nilact.algebra.homotopy import (
    check_coeficientes,
    check_cuatro,
    check_dos,
    check_eshp_sandwich,
    check_eshp_two_path,
    check_final_remark,
    check_hypothesis_necessary,
    check_importante,
    check_nuevo,
    check_tres,
    check_uno,
    coeff_homotopy,
    eshp,
    fg_mod_p_identity,
    forcing_primes,
    gl_witness,
    intersection_eshp,
    self_equivalences,
    sharp,
)
from nilact.cli.catalog import default_catalog
from nilact.core.errors import NotApplicable, NotAutomorphism
from nilact.models.abelian import AbGroup, AbHom
from nilact.models.space import EMSpace


def K(*torsion, degree=2, free_rank=0):
    return EMSpace(coeff=AbGroup(free_rank=free_rank, torsion=torsion), degree=degree)


def test_space_homotopy_is_concentrated():
    X = K(4, degree=3)
    assert X.label == "K(Z4,3)"
    assert X.homotopy(3) == AbGroup.cyclic(4)
    assert X.homotopy(2).is_trivial
    with pytest.raises(ValidationError):
        K(4, degree=1)


def test_coefficient_homotopy_of_k_z4():
    X = K(4)
    below = coeff_homotopy(X, 2, 1)
    assert below.hom_part.is_trivial
    assert below.ext_part == AbGroup.cyclic(2)
    at = coeff_homotopy(X, 2, 2)
    assert at.hom_part == AbGroup.cyclic(2)
    assert at.ext_part.is_trivial
    assert coeff_homotopy(X, 3, 2).is_trivial


def test_coefficient_homotopy_in_degree_two_with_free_part():
    # n = 2, i = 1 reads Ext(Z/p, pi_2) like every other degree
    X = K(free_rank=1, degree=2)
    assert coeff_homotopy(X, 2, 1).total == AbGroup.cyclic(2)


def test_eshp_of_k_z4():
    X = K(4)
    kernel = eshp(X, 2)
    assert kernel.order == 2
    assert AbHom.scalar(X.coeff, 3) in kernel.automorphisms
    assert sharp(X).order == 1
    assert self_equivalences(X).order == 2


def test_eshp_at_a_prime_not_dividing_the_order():
    X = K(2, 2)
    kernel = eshp(X, 3)
    assert kernel.order == 6
    assert not lower_central_series(kernel.group).is_nilpotent
    result = check_hypothesis_necessary(X, 3)
    assert result
    assert result.details["series"].startswith("StabilizedNontrivial")
    assert result.details["stabilized"] == 4
    assert sorted(result.details["stabilized_elements"]) == ["(0,0)", "(0,1)", "(1,0)", "(1,1)"]
    assert result.details["order"] == result.details["full"] == 6


def test_hypothesis_necessary_needs_coprime_prime():
    with pytest.raises(NotApplicable):
        check_hypothesis_necessary(K(4), 2)


@pytest.mark.parametrize("torsion, p, stabilized", [((3,), 2, 3), ((5,), 3, 5), ((2,) * 5, 3, 32), ((9, 3), 2, 27)])
def test_hypothesis_necessary_finds_a_stable_term(torsion, p, stabilized):
    result = check_hypothesis_necessary(K(*torsion), p)
    assert result, result.details
    assert result.details["stabilized"] == stabilized


@pytest.mark.parametrize("torsion", [(4,), (8,), (2,)])
def test_hypothesis_necessary_skips_nilpotent_actions(torsion):
    with pytest.raises(NotApplicable):
        check_hypothesis_necessary(K(*torsion), 3)


def test_eshp_table_is_reused():
    X = K(4, 2)
    assert eshp(X, 2) is eshp(X, 2)


def test_eshp_is_nilpotent_p_group():
    result = check_tres(K(8, 2), 2)
    assert result
    with pytest.raises(NotApplicable):
        check_tres(K(6), 2)


def test_rho_is_invisible_to_coefficients():
    result = check_importante(K(9))
    assert result
    assert result.details["rho"] == 4
    assert result.details["sharp"] == 1
    with pytest.raises(NotApplicable):
        check_importante(K(3))


def test_intersection_over_primes():
    X = K(4, 3)
    meet = intersection_eshp(X)
    assert meet.order == len(set(eshp(X, 2).automorphisms) & set(eshp(X, 3).automorphisms))
    assert check_eshp_sandwich(X)


def test_forcing_primes():
    Z2 = AbGroup(free_rank=2)
    M = AbHom(source=Z2, target=Z2, matrix=((1, 2), (0, 1)))
    assert forcing_primes(M) == [5]
    assert fg_mod_p_identity(M, 2)
    assert not fg_mod_p_identity(M, 3)


def test_candidates_with_free_part():
    entry = default_catalog().get("cands-ZxZ4")
    result = check_cuatro(entry.body.group, entry.body.matrices)
    assert result
    assert result.details["survivors"] == ["[1 0; 0 1]", "[1 0; 0 3]", "[1 0; 2 1]", "[1 0; 2 3]"]
    assert set(result.details["rejected"]) == {"[1 0; 1 1]", "[-1 0; 0 1]", "[-1 0; 1 3]"}


def test_candidates_with_rank_two_free_part():
    entry = default_catalog().get("cands-Z^2xZ2")
    result = check_cuatro(entry.body.group, entry.body.matrices)
    assert result
    assert result.details["survivors"] == ["[1 0 0; 0 1 0; 0 0 1]"]


def test_gl_witness_is_not_nilpotent():
    witness = gl_witness(((1, 2), (0, 1)), ((1, 0), (2, 1)), depth=8)
    assert witness.nontrivial_through == 8
    assert all(w != eye(2) for w in witness.terms)
    result = check_final_remark()
    assert result
    assert result.details["in_E#2"] and result.details["outside_E#3"]


def test_gl_witness_needs_invertible_matrices():
    with pytest.raises(NotAutomorphism):
        gl_witness(((2, 0), (0, 1)), ((1, 0), (2, 1)))


def test_reduction_theorems_on_times3():
    action = default_catalog().get("x3-Z8").body.action
    for check in (check_dos, check_uno, check_nuevo, check_coeficientes):
        result = check(action)
        assert result, (check.__name__, result.details)


def test_reduction_theorems_skip_unfaithful_actions():
    action = default_catalog().get("triv-S3-Z4").body.action
    with pytest.raises(NotApplicable):
        check_dos(action)


@hsettings(deadline=None, max_examples=20)
@given(st.sampled_from([(2,), (4,), (8,), (2, 2), (4, 2), (3,), (9,), (9, 3), (6,), (12,), (4, 3), (2, 2, 2)]))
def test_eshp_agrees_on_both_descriptions(torsion):
    X = K(*torsion)
    for p in X.coeff.primes:
        assert check_eshp_two_path(X, p)
    assert check_eshp_sandwich(X)


@hsettings(deadline=None, max_examples=8)
@given(st.sampled_from(["aut-Z4", "aut-Z8", "kernel-Z4xZ2", "kernel-Z9xZ3", "ut-Z2^2", "ut-Z3^3", "ut-Z4xZ2"]))
def test_reduction_theorems_on_p_group_actions(name):
    action = default_catalog().get(name).body.action
    for check in (check_dos, check_uno, check_nuevo, check_coeficientes):
        assert check(action)
