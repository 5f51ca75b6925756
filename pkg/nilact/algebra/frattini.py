"""Maximal subgroups, Frattini subgroups and factors, and the statements
relating nilpotency of an action to nilpotency on the Frattini factor."""
import logging
from dataclasses import dataclass
from functools import lru_cache, reduce

import numpy as np

from ..core.arith import is_p_power, prime_power, valuation
from ..core.errors import InternalInvariantViolation, NotApplicable, NotNilpotent
from ..models.abelian import AbGroup
from ..models.action import Action
from ..models.check import CheckResult
from ..models.group import GroupTable, Subgroup
from .abelian import (
    AutomorphismGroup,
    ab_to_table,
    additive_test_maps,
    coordinates,
    element_index,
    hom_permutation,
    induced_tensor,
    tensor_zp,
)
from .actions import gamma_series, induced_quotient_action, is_invariant
from .grpcore import (
    Quotient,
    enumerate_subgroups,
    intersection,
    is_nilpotent,
    is_normal,
    join,
    make_subgroup,
    power_subgroup,
    quotient,
    require_lattice,
    subgroup_closure,
)
from .localize import localize_group

logger = logging.getLogger(__name__)


def maximal_subgroups(G: GroupTable) -> list[Subgroup]:
    """
    Proper subgroups not contained in a larger proper one. Candidates are
    visited by descending order, so anything contained in a maximal
    subgroup meets it first.
    """
    require_lattice(G)
    return list(_maximal_subgroups(G))


@lru_cache(maxsize=128)
def _maximal_subgroups(G: GroupTable) -> tuple[Subgroup, ...]:
    proper = [H for H in enumerate_subgroups(G) if H.order < G.order]
    maximal: list[Subgroup] = []
    for H in sorted(proper, key=lambda H: (-H.order, H.members)):
        if not any(H.issubset(M) for M in maximal):
            maximal.append(H)
    logger.debug("%s: %d maximal subgroups", G.name or "G", len(maximal))
    return tuple(sorted(maximal, key=lambda H: (H.order, H.members)))


def frattini_subgroup(G: GroupTable) -> Subgroup:
    """Intersection of the maximal subgroups; the trivial group is its own."""
    maximal = maximal_subgroups(G)
    if not maximal:
        return G.whole()
    return reduce(intersection, maximal)


def frattini_factor(G: GroupTable) -> Quotient:
    phi = frattini_subgroup(G)
    if not is_normal(G, phi):
        raise InternalInvariantViolation(f"the Frattini subgroup of {G.name or 'G'} is not normal")
    return quotient(G, phi)


@dataclass(frozen=True, eq=False)
class AbelianFrattiniFactor:
    """A/Phi(A) for an abelian p-group, with iso[k] the image of coset k in A (x) Z/p."""

    quotient: Quotient
    tensor: GroupTable
    iso: np.ndarray
    prime: int


def abelian_frattini_factor(A: AbGroup) -> AbelianFrattiniFactor:
    """
    The Frattini factor of a finite abelian p-group together with the
    identification with A (x) Z/p, checked to be a bijective homomorphism
    commuting with both projections.
    """
    if not A.is_p_group():
        raise NotApplicable(f"{A.label} is not a finite abelian p-group")
    p = A.primes[0]
    table = ab_to_table(A)
    factor = frattini_factor(table)
    tensor = ab_to_table(tensor_zp(A, p))
    # x -> x (x) 1 reduces every coordinate mod p
    to_tensor = element_index(tensor_zp(A, p), coordinates(A) % p)
    iso = to_tensor[np.array(factor.representatives, dtype=np.int64)]
    if not np.array_equal(iso[factor.projection], to_tensor):
        raise InternalInvariantViolation(f"A (x) Z/{p} does not factor through A/Phi(A) for {A.label}")
    if np.unique(iso).size != factor.group.order or factor.group.order != tensor.order:
        raise InternalInvariantViolation(f"A/Phi(A) and A (x) Z/{p} differ in size for {A.label}")
    if not np.array_equal(iso[factor.group.mul], tensor.mul[np.ix_(iso, iso)]):
        raise InternalInvariantViolation(f"the identification A/Phi(A) = A (x) Z/{p} is not a homomorphism")
    return AbelianFrattiniFactor(factor, tensor, iso, p)


def check_frattini_naturality(A: AbGroup) -> CheckResult:
    """
    A/Phi(A) = A (x) Z/p commutes with the maps every automorphism induces
    on both sides. The square is additive in the map, so past oracle_cap
    automorphisms the basis of End(A) is checked instead.
    """
    factor = abelian_frattini_factor(A)
    q, p = factor.quotient, factor.prime
    reps = np.array(q.representatives, dtype=np.int64)
    maps, kind = additive_test_maps(A)
    for f in maps:
        on_factor = q.projection[hom_permutation(f)[reps]]
        on_tensor = hom_permutation(induced_tensor(f, p))
        if not np.array_equal(factor.iso[on_factor], on_tensor[factor.iso]):
            return CheckResult.failed(map=str(f), prime=p, maps=kind)
    return CheckResult.passed(prime=p, factor=q.group.order, maps=kind, count=len(maps))


def frattini_action(action: Action) -> tuple[Quotient, Action]:
    """The induced action on A/Phi(A), after checking Phi(A) is invariant."""
    phi = frattini_subgroup(action.target)
    if not is_invariant(action, phi):
        raise InternalInvariantViolation(f"Phi(A) is not invariant under {action.name}")
    return induced_quotient_action(action, phi)


def non_generators(G: GroupTable) -> Subgroup:
    """
    Elements x that can be dropped from every generating set: no proper
    subgroup H has <H, x> = G.
    """
    proper = [H for H in enumerate_subgroups(G) if H.order < G.order]
    members = []
    for x in range(G.order):
        cyclic = subgroup_closure(G, [x])
        if all(x in H or join(H, cyclic).order < G.order for H in proper):
            members.append(x)
    return make_subgroup(G, members)


def check_frattini_oracle(G: GroupTable) -> CheckResult:
    phi = frattini_subgroup(G)
    oracle = non_generators(G)
    details = {"frattini": phi.order, "non_generators": oracle.order}
    if phi != oracle:
        diff = sorted(phi.member_set ^ oracle.member_set)
        return CheckResult.failed(witness=G.label(diff[0]), **details)
    return CheckResult.passed(**details)


def check_frattini_characteristic(A: AbGroup) -> CheckResult:
    """
    Phi(A) is carried to itself by every automorphism of A. Maps sending
    Phi(A) into itself are closed under sums, so past oracle_cap
    automorphisms the basis of End(A) is checked instead.
    """
    phi = frattini_subgroup(ab_to_table(A))
    maps, kind = additive_test_maps(A)
    for f in maps:
        if not phi.mask[hom_permutation(f)[phi.array]].all():
            return CheckResult.failed(map=str(f), frattini=phi.order, maps=kind)
    return CheckResult.passed(frattini=phi.order, maps=kind, count=len(maps))


def _require_nilpotent_target(action: Action) -> None:
    if not is_nilpotent(action.target):
        raise NotApplicable(f"the target of {action.name} is not nilpotent")


def check_nuevolema(action: Action) -> CheckResult:
    """A finite nilpotent and G nilpotent on A/Phi(A) imply G nilpotent on A."""
    _require_nilpotent_target(action)
    _, induced = frattini_action(action)
    factor_series = gamma_series(induced)
    if not factor_series.is_nilpotent:
        raise NotApplicable(f"the Frattini-factor action is not nilpotent ({factor_series.verdict})")
    full = gamma_series(action)
    details = {"nil_factor": factor_series.nil_order, "series": str(full.verdict)}
    return CheckResult(full.is_nilpotent, details)


def _abelian_p_target(action: Action) -> tuple[int, int]:
    A = action.target
    pp = prime_power(A.order)
    if not A.is_abelian or pp is None:
        raise NotApplicable(f"the target of {action.name} is not an abelian p-group")
    p = pp[0]
    return p, valuation(int(A.element_orders.max()), p)


def check_propodos(action: Action) -> CheckResult:
    """nil_G A <= n * nil_G (A (x) Z/p) for an abelian p-group A of exponent p^n."""
    p, n = _abelian_p_target(action)
    _, induced = induced_quotient_action(action, power_subgroup(action.target, p))
    tensor_series = gamma_series(induced)
    if not tensor_series.is_nilpotent:
        raise NotApplicable(f"the action on A (x) Z/{p} is not nilpotent ({tensor_series.verdict})")
    full = gamma_series(action)
    bound = n * tensor_series.nil_order
    details = {"nil": full.nil_order, "bound": bound, "exponent": f"{p}^{n}"}
    if not full.is_nilpotent:
        return CheckResult.failed(series=str(full.verdict), **details)
    return CheckResult(full.nil_order <= bound, details)


def _tensor_trivial(auts: AutomorphismGroup, p: int) -> bool:
    A = auts.source
    to_tensor = element_index(tensor_zp(A, p), coordinates(A) % p)
    return bool((to_tensor[auts.permutations] == to_tensor[None, :]).all())


def check_propouno(auts: AutomorphismGroup) -> CheckResult:
    """A group of automorphisms of an abelian p-group that is trivial on A (x) Z/p is a p-group."""
    A = auts.source
    if not A.is_p_group():
        raise NotApplicable(f"{A.label} is not a finite abelian p-group")
    p = A.primes[0]
    if not _tensor_trivial(auts, p):
        raise NotApplicable(f"{auts.group.name or 'G'} does not act trivially on A (x) Z/{p}")
    return CheckResult(is_p_power(auts.order, p), {"order": auts.order, "prime": p})


def check_corolario(auts: AutomorphismGroup) -> CheckResult:
    """A p-group of automorphisms of an abelian p-group acts nilpotently."""
    A = auts.source
    if not A.is_p_group():
        raise NotApplicable(f"{A.label} is not a finite abelian p-group")
    p = A.primes[0]
    if not is_p_power(auts.order, p):
        raise NotApplicable(f"|G| = {auts.order} is not a power of {p}")
    series = gamma_series(auts.action())
    return CheckResult(series.is_nilpotent, {"order": auts.order, "series": str(series.verdict)})


def frattini_localization(G: GroupTable, p: int) -> CheckResult:
    """Phi(G)_(p) = Phi(G_(p)) inside G, for a finite nilpotent G."""
    try:
        loc = localize_group(G, p)
    except NotNilpotent as exc:
        raise NotApplicable(exc.detail)
    phi = frattini_subgroup(G)
    local_part = sorted(x for x in phi.members if x in loc.sylow)
    local_phi = frattini_subgroup(loc.group)
    mapped = sorted(int(loc.embedding[x]) for x in local_phi.members)
    details = {"prime": p, "local_part": len(local_part), "frattini_of_local": len(mapped)}
    return CheckResult(local_part == mapped, details)
