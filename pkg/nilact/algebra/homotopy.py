"""
Self-equivalences of Eilenberg-MacLane spaces K(A, n). E(K(A,n)) is
modelled by Aut(A); homotopy with Z/p coefficients comes from the split
sequence 0 -> Ext(Z/p, pi_(i+1)) -> pi_i(X; Z/p) -> Hom(Z/p, pi_i) -> 0,
so only degrees n-1 and n carry anything.

Subgroups of E(X) are returned as AutomorphismGroup values (closed sets of
matrices with their own table), which keeps kernels usable when Aut(A)
itself is too large to tabulate.
"""
import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np
from sympy import Matrix as SymMatrix, eye, nextprime, primefactors

from ..core.arith import is_p_power, require_prime
from ..core.config import settings
from ..core.errors import InternalInvariantViolation, NotApplicable, NotAutomorphism
from ..models.abelian import AbGroup, AbHom
from ..models.action import Action
from ..models.check import CheckResult
from ..models.space import CoeffHomotopy, EMSpace
from .abelian import (
    AutomorphismGroup,
    EntryFilter,
    ab_to_table,
    automorphism_list,
    automorphism_table,
    count_automorphisms,
    elementary_automorphisms,
    enumerate_automorphisms,
    ext_zp,
    hom_permutations,
    hom_zp,
    induced_ext,
    induced_hom,
    induced_tensor,
    matrix_group,
    require_automorphism,
    tensor_kernel_list,
)
from .actions import gamma_series, gamma_series_generated, induced_quotient_action, nil_bound_check, restrict_target
from .frattini import frattini_action
from .grpcore import lower_central_series, omega_subgroup, power_subgroup, quotient
from .localize import localize_action, require_nilpotent, target_primes

logger = logging.getLogger(__name__)


@lru_cache(maxsize=64)
def self_equivalences(X: EMSpace) -> AutomorphismGroup:
    """E(K(A,n)) = Aut(A)."""
    return automorphism_table(X.coeff, automorphism_list(X.coeff), name=f"E({X.label})")


def coeff_homotopy(X: EMSpace, p: int, i: int) -> CoeffHomotopy:
    """pi_i(X; Z/p) = Hom(Z/p, pi_i X) + Ext(Z/p, pi_(i+1) X)."""
    p = require_prime(p)
    return CoeffHomotopy(
        degree=i,
        prime=p,
        hom_part=hom_zp(X.homotopy(i), p),
        ext_part=ext_zp(X.homotopy(i + 1), p),
    )


def coeff_maps(X: EMSpace, p: int, i: int, alpha: AbHom) -> tuple[Optional[AbHom], Optional[AbHom]]:
    """The maps induced by alpha on the Hom and Ext parts of pi_i(X; Z/p); None where the part is zero."""
    hom_map = induced_hom(alpha, p) if i == X.degree else None
    ext_map = induced_ext(alpha, p) if i + 1 == X.degree else None
    return hom_map, ext_map


def _identity_in_degree(X: EMSpace, p: int, i: int, alpha: AbHom) -> bool:
    return all(f is None or f.is_identity for f in coeff_maps(X, p, i, alpha))


def coefficient_degrees(X: EMSpace) -> tuple[int, int]:
    """The only degrees where pi_i(K(A,n); Z/p) can be nonzero."""
    return X.degree - 1, X.degree


def in_eshp(X: EMSpace, p: int, alpha: AbHom) -> bool:
    return all(_identity_in_degree(X, p, i, alpha) for i in coefficient_degrees(X))


def eshp_filter(p: int):
    """
    Entry condition for being the identity on A[p] and A/pA, read off the
    induced maps: on a p-block entry (i, j) with orders d_i, d_j, the map on
    A/pA sees m mod p and the map on A[p] sees m*d_j/d_i mod p.
    """

    def keep(q: int, i: int, j: int, m: int, moduli: Sequence[int]) -> bool:
        if q != p:
            return True
        di, dj = moduli[i], moduli[j]
        target = int(i == j)
        if di == dj:
            return m % p == target
        if di > dj:
            return (m * dj // di) % p == 0
        return m % p == 0

    return keep


def _eshp_entries(A: AbGroup, primes: Sequence[int]) -> EntryFilter:
    filters = {p: eshp_filter(p) for p in primes}

    def keep(q: int, i: int, j: int, m: int) -> bool:
        return q not in filters or filters[q](q, i, j, m, A.moduli)

    return keep


@lru_cache(maxsize=128)
def eshp_automorphisms(X: EMSpace, p: int) -> tuple[AbHom, ...]:
    """
    E#p(X) = ker(E(X) -> aut pi_*(X; Z/p)) as a list, enumerated directly
    from the entry conditions so Aut(A) is never listed.
    """
    p = require_prime(p)
    homs = tuple(enumerate_automorphisms(X.coeff, _eshp_entries(X.coeff, (p,))))
    stray = next((f for f in homs if not in_eshp(X, p, f)), None)
    if stray is not None:
        raise InternalInvariantViolation(f"{stray} passed the entry conditions but moves pi_*(X; Z/{p})")
    logger.debug("%s: |E#%d| = %d", X.label, p, len(homs))
    return homs


@lru_cache(maxsize=128)
def eshp(X: EMSpace, p: int) -> AutomorphismGroup:
    """E#p(X) with its multiplication table."""
    return automorphism_table(X.coeff, eshp_automorphisms(X, p), name=f"E#{p}({X.label})")


def _search_space(A: AbGroup, p: int) -> tuple[Sequence[AbHom], str]:
    """
    Automorphisms to search for E#p: all of them while there are at most
    oracle_cap, else those trivial on A/pA, which contain E#p.
    """
    if count_automorphisms(A) <= settings.oracle_cap:
        return automorphism_list(A), "automorphisms"
    return tensor_kernel_list(A, p), "tensor kernel"


def eshp_by_coefficients(X: EMSpace, p: int) -> set[AbHom]:
    """E#p through the coefficient-homotopy maps."""
    homs, _ = _search_space(X.coeff, p)
    return {f for f in homs if in_eshp(X, p, f)}


def eshp_by_elements(X: EMSpace, p: int) -> set[AbHom]:
    """E#p as the automorphisms fixing A[p] pointwise and acting trivially on A/pA."""
    A = X.coeff
    table = ab_to_table(A)
    torsion = omega_subgroup(table, p)
    q = quotient(table, power_subgroup(table, p))
    homs, _ = _search_space(A, p)
    perms = hom_permutations(A, homs)
    fixes = (perms[:, torsion.array] == torsion.array[None, :]).all(axis=1)
    trivial = (q.projection[perms] == q.projection[None, :]).all(axis=1)
    return {f for f, keep in zip(homs, fixes & trivial) if keep}


def sharp(X: EMSpace) -> AutomorphismGroup:
    """E#(X): identity on pi_n, so only the identity of A."""
    return automorphism_table(X.coeff, [AbHom.identity(X.coeff)], name=f"E#({X.label})")


@lru_cache(maxsize=64)
def intersection_eshp_automorphisms(X: EMSpace) -> tuple[AbHom, ...]:
    """The intersection of E#p(X) over all primes; primes not dividing |A| impose nothing."""
    return tuple(enumerate_automorphisms(X.coeff, _eshp_entries(X.coeff, X.coeff.primes)))


def intersection_eshp(X: EMSpace) -> AutomorphismGroup:
    return automorphism_table(X.coeff, intersection_eshp_automorphisms(X), name=f"E#all({X.label})")


def check_eshp_two_path(X: EMSpace, p: int) -> CheckResult:
    direct = set(eshp_automorphisms(X, p))
    by_coefficients = eshp_by_coefficients(X, p)
    by_elements = eshp_by_elements(X, p)
    details = {"prime": p, "order": len(direct), "searched": _search_space(X.coeff, p)[1]}
    if direct != by_coefficients or direct != by_elements:
        odd = sorted(map(str, (direct ^ by_coefficients) | (direct ^ by_elements)))
        return CheckResult.failed(witness=odd[0], by_coefficients=len(by_coefficients), by_elements=len(by_elements), **details)
    return CheckResult.passed(**details)


def check_eshp_sandwich(X: EMSpace) -> CheckResult:
    """
    E#(X) lies in the intersection of the E#p(X), which lies in each E#p(X)
    inside E(X). Membership in E(X) is read off the permutation each map
    induces on A, so E(X) itself is only counted.
    """
    A = X.coeff
    full = count_automorphisms(A)
    meet = set(intersection_eshp_automorphisms(X))
    local = {}
    for p in A.primes:
        kernel = eshp_automorphisms(X, p)
        local[str(p)] = len(kernel)
        perms = hom_permutations(A, kernel)
        bijective = bool((np.sort(perms, axis=1) == np.arange(A.order)[None, :]).all())
        if not (meet <= set(kernel) and bijective and len(kernel) <= full):
            return CheckResult.failed(prime=p, local=len(kernel), intersection=len(meet), full=full)
    kept = set(sharp(X).automorphisms)
    details = {"sharp": len(kept), "intersection": len(meet), "local": local, "full": full}
    return CheckResult(kept <= meet, details)


def check_tres(X: EMSpace, p: int) -> CheckResult:
    """For A a p-group: E#p(X) is a nilpotent p-group and E#p/E# is a p-group."""
    A = X.coeff
    if not A.is_p_group(p):
        raise NotApplicable(f"{A.label} is not a {p}-group")
    kernel = eshp(X, p)
    series = lower_central_series(kernel.group)
    sharp_order = sharp(X).order
    details = {
        "prime": p,
        "order": kernel.order,
        "class": series.nil_order,
        "quotient": kernel.order // sharp_order,
        "specialization": "K(A,n)",
    }
    holds = is_p_power(kernel.order, p) and series.is_nilpotent and is_p_power(kernel.order // sharp_order, p)
    if not holds:
        details["series"] = str(series.verdict)
    return CheckResult(holds, details)


def check_hypothesis_necessary(X: EMSpace, p: int) -> CheckResult:
    """
    For p not dividing |A| every pi_i(X; Z/p) vanishes, so E#p(X) is all of
    E(X). The check confirms that and then shows E#p(X) acting on A with a
    nontrivial stabilized gamma series, so E#p(X) is not nilpotent and the
    p-group hypothesis cannot be dropped.

    The series is taken for the group generated by the elementary
    automorphisms: it lies in E#p(X), and a nontrivial term it cannot get
    below bounds the series of E#p(X) from below as well.
    """
    A = X.coeff
    if A.order % p == 0:
        raise NotApplicable(f"{p} divides |{A.label}|")
    pieces = [coeff_homotopy(X, p, i) for i in coefficient_degrees(X)]
    if not all(c.is_trivial for c in pieces):
        return CheckResult.failed(prime=p, coefficients=[c.total.label for c in pieces])
    full = count_automorphisms(A)
    local = count_automorphisms(A, _eshp_entries(A, (p,)))
    generators = elementary_automorphisms(A)
    outside = next((f for f in generators if not in_eshp(X, p, f)), None)
    if outside is not None:
        return CheckResult.failed(prime=p, outside=str(outside))
    series = gamma_series_generated(ab_to_table(A), hom_permutations(A, generators))
    details = {"prime": p, "order": local, "full": full, "series": str(series.verdict)}
    if local != full:
        return CheckResult.failed(**details)
    if series.is_nilpotent:
        raise NotApplicable(f"E({X.label}) acts nilpotently on {A.label} ({series.verdict})")
    stable = series.stabilized
    if stable is None:
        raise NotApplicable(f"the gamma series of E({X.label}) neither stops nor stabilizes ({series.verdict})")
    details.update(stabilized=stable.order, stabilized_elements=stable.labels())
    return CheckResult.passed(**details)


def check_importante(X: EMSpace) -> CheckResult:
    """
    For A = Z/p^r with r >= 2: rho(1) = p^(r-1) + 1 lies in every E#q(X)
    while E#(X) is trivial, so the intersection is strictly bigger.
    """
    A = X.coeff
    if len(A.torsion) != 1 or A.free_rank or not A.is_p_group() or A.torsion[0] == A.primes[0]:
        raise NotApplicable(f"{A.label} is not Z/p^r with r >= 2")
    p, d = A.primes[0], A.torsion[0]
    rho = AbHom.scalar(A, d // p + 1)
    meet = intersection_eshp(X)
    kept = sharp(X)
    pieces = [coeff_homotopy(X, p, i) for i in coefficient_degrees(X)]
    details = {
        "rho": d // p + 1,
        "intersection": meet.order,
        "sharp": kept.order,
        "coefficients": [c.total.label for c in pieces],
    }
    holds = rho in meet.automorphisms and not rho.is_identity and meet.order > kept.order
    holds = holds and all(c.total == AbGroup(torsion=(p,)) for c in pieces)
    return CheckResult(holds, details)


def fg_mod_p_identity(M: AbHom, p: int) -> bool:
    """M induces the identity on Hom(Z/p, A) and on A/pA (free block included)."""
    require_automorphism(M)
    return induced_hom(M, p).is_identity and induced_tensor(M, p).is_identity


def forcing_primes(M: AbHom) -> list[int]:
    """
    Primes whose mod-p identity tests, all passed, force the free block to
    be the identity: one prime beyond every |entry of F - I|, plus the
    primes of the torsion order.
    """
    A = M.source
    F = M.free_block
    spread = max((abs(x - int(i == j)) for i, row in enumerate(F) for j, x in enumerate(row)), default=0)
    return sorted({int(nextprime(1 + spread))} | {int(p) for p in primefactors(A.torsion_order)})


def _torsion_restriction(M: AbHom) -> AbHom:
    T = M.source.torsion_part()
    return AbHom.trusted(T, T, M.torsion_block)


def check_cuatro(A: AbGroup, candidates: Sequence[AbHom]) -> CheckResult:
    """
    Filter candidates through E#p for every forcing prime, then confirm each
    survivor has identity free block, moves free generators only by torsion,
    and that the survivors generate a group acting nilpotently.
    """
    for M in candidates:
        if M.source != A or M.target != A:
            raise NotApplicable(f"{M} is not an endomorphism of {A.label}")
        require_automorphism(M)
    survivors, rejected = [], {}
    for M in candidates:
        failing = next((p for p in forcing_primes(M) if not fg_mod_p_identity(M, p)), None)
        if failing is None:
            survivors.append(M)
        else:
            rejected[str(M)] = failing
    k = A.free_rank
    for M in survivors:
        if M.free_block != tuple(tuple(int(i == j) for j in range(k)) for i in range(k)):
            return CheckResult.failed(witness=str(M), reason="free block is not the identity")
        # (alpha - 1) z_k has no free coordinates
        if any(M.matrix[i][j] != int(i == j) for i in range(k) for j in range(A.ngens)):
            return CheckResult.failed(witness=str(M), reason="Gamma^1 leaves the torsion subgroup")
    details = {"survivors": [str(M) for M in survivors], "rejected": rejected, "specialization": "K(A,n)"}
    T = A.torsion_part()
    if T.is_trivial:
        details["nil_torsion"] = 0
        return CheckResult.passed(**details)
    group = matrix_group(T, [_torsion_restriction(M) for M in survivors], name="survivors")
    series = gamma_series(group.action())
    details.update(torsion_group=group.order, series=str(series.verdict))
    return CheckResult(series.is_nilpotent, details)


@dataclass(frozen=True)
class GlWitness:
    """w_0 = b, w_k = [a, w_(k-1)] in GL_n(Z); w_k lies in the k-th lower central term."""

    terms: tuple[SymMatrix, ...]

    @property
    def nontrivial_through(self) -> int:
        n = self.terms[0].rows
        depth = -1
        for k, w in enumerate(self.terms):
            if w == eye(n):
                break
            depth = k
        return depth


def gl_witness(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]], depth: Optional[int] = None) -> GlWitness:
    depth = settings.witness_depth if depth is None else depth
    A, w = SymMatrix(a), SymMatrix(b)
    if abs(A.det()) != 1 or abs(w.det()) != 1:
        raise NotAutomorphism("witness matrices must lie in GL_n(Z)")
    A_inv = A.inv()
    terms = [w]
    for _ in range(depth):
        w = A_inv * w.inv() * A * w
        terms.append(w)
    return GlWitness(tuple(terms))


def check_final_remark(
    a: Sequence[Sequence[int]] = ((1, 2), (0, 1)),
    b: Sequence[Sequence[int]] = ((1, 0), (2, 1)),
    depth: Optional[int] = None,
) -> CheckResult:
    """
    The two matrices lie in E#2(K(Z^2,n)) but fail at p = 3, and the group
    they generate has nontrivial lower central terms through the witness
    depth.
    """
    depth = settings.witness_depth if depth is None else depth
    A = AbGroup(free_rank=len(a))
    Ma = AbHom(source=A, target=A, matrix=tuple(map(tuple, a)))
    Mb = AbHom(source=A, target=A, matrix=tuple(map(tuple, b)))
    witness = gl_witness(a, b, depth)
    in_two = fg_mod_p_identity(Ma, 2) and fg_mod_p_identity(Mb, 2)
    out_three = not fg_mod_p_identity(Ma, 3) and not fg_mod_p_identity(Mb, 3)
    details = {
        "in_E#2": in_two,
        "outside_E#3": out_three,
        "nontrivial_through": witness.nontrivial_through,
        "depth": depth,
    }
    return CheckResult(in_two and out_three and witness.nontrivial_through == depth, details)


def _faithful(action: Action) -> None:
    if action.target.order == 1:
        raise NotApplicable("the target is trivial")
    if not action.is_faithful:
        raise NotApplicable("the actor is not a group of automorphisms of the target")


def _conclusion(action: Action, **hypothesis) -> CheckResult:
    """Shared conclusion: the action is nilpotent and so is the actor."""
    series = gamma_series(action)
    if not series.is_nilpotent:
        return CheckResult.failed(series=str(series.verdict), **hypothesis)
    bound = nil_bound_check(action)
    return CheckResult(bool(bound), {**hypothesis, **bound.details})


def check_dos(action: Action) -> CheckResult:
    """Nilpotent on every localization implies nilpotent, with a nilpotent actor."""
    _faithful(action)
    require_nilpotent(action.target)
    local = {}
    for p in target_primes(action):
        series = gamma_series(localize_action(action, p)[0])
        if not series.is_nilpotent:
            raise NotApplicable(f"the action on A_({p}) is not nilpotent")
        local[str(p)] = series.nil_order
    return _conclusion(action, local=local)


def check_uno(action: Action) -> CheckResult:
    """Nilpotent on the Frattini factor implies nilpotent, with a nilpotent actor."""
    _faithful(action)
    require_nilpotent(action.target)
    series = gamma_series(frattini_action(action)[1])
    if not series.is_nilpotent:
        raise NotApplicable("the action on A/Phi(A) is not nilpotent")
    return _conclusion(action, nil_factor=series.nil_order)


def _require_abelian(action: Action) -> None:
    if not action.target.is_abelian:
        raise NotApplicable(f"the target of {action.name} is not abelian")


def check_nuevo(action: Action) -> CheckResult:
    """Nilpotent on every A (x) Z/p implies nilpotent, with a nilpotent actor."""
    _faithful(action)
    _require_abelian(action)
    tensor = {}
    for p in target_primes(action):
        _, induced = induced_quotient_action(action, power_subgroup(action.target, p))
        series = gamma_series(induced)
        if not series.is_nilpotent:
            raise NotApplicable(f"the action on A (x) Z/{p} is not nilpotent")
        tensor[str(p)] = series.nil_order
    return _conclusion(action, tensor=tensor)


def check_coeficientes(action: Action) -> CheckResult:
    """Nilpotent on A[p] and A/pA for every p implies nilpotent, with a nilpotent actor."""
    _faithful(action)
    _require_abelian(action)
    coefficients = {}
    for p in target_primes(action):
        torsion, _ = restrict_target(action, omega_subgroup(action.target, p))
        _, cotorsion = induced_quotient_action(action, power_subgroup(action.target, p))
        hom_series, ext_series = gamma_series(torsion), gamma_series(cotorsion)
        if not (hom_series.is_nilpotent and ext_series.is_nilpotent):
            raise NotApplicable(f"the action on pi_*(-; Z/{p}) is not nilpotent")
        coefficients[str(p)] = [hom_series.nil_order, ext_series.nil_order]
    return _conclusion(action, coefficients=coefficients)
