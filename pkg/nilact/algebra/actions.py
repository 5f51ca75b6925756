"""
G-commutator calculus for a group G acting on a group A by automorphisms.

Conventions, fixed everywhere: [g,a] = (g.a^-1) a and [a,g] = a^-1 (g.a),
group commutators [x,y] = x^-1 y^-1 x y, products read left to right.
"""
import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..core.errors import InternalInvariantViolation, InvalidAction, MismatchedParents, NotApplicable, NotNormal
from ..models.action import Action
from ..models.check import CheckResult
from ..models.group import GroupTable, Subgroup
from ..models.series import SeriesReport
from .grpcore import (
    Quotient,
    commutator_subgroup,
    descending_series,
    enumerate_subgroups,
    is_normal,
    join,
    lower_central_series,
    quotient,
    subgroup_closure,
    subgroup_table,
)

logger = logging.getLogger(__name__)


def act(action: Action, g: int, a: int) -> int:
    return action.act(g, a)


def g_commutator(action: Action, g: int, a: int) -> int:
    """[g,a] = (g.a^-1) a"""
    A = action.target
    return A.multiply(action.act(g, A.inverse(a)), a)


def a_commutator(action: Action, a: int, g: int) -> int:
    """[a,g] = a^-1 (g.a)"""
    A = action.target
    return A.multiply(A.inverse(a), action.act(g, a))


def mixed_commutator(action: Action, S: Subgroup, B: Subgroup) -> Subgroup:
    """<[s,b] : s in S, b in B>, S in the actor, B in the target."""
    if S.parent is not action.actor or B.parent is not action.target:
        raise MismatchedParents("mixed commutator needs a subgroup of the actor and one of the target")
    A = action.target
    b = B.array
    moved = action.table[np.ix_(S.array, A.inv[b])]
    return subgroup_closure(A, np.unique(A.mul[moved, b[None, :]]))


def gamma_series(action: Action, depth_cap: Optional[int] = None) -> SeriesReport:
    """Gamma^0 = A, Gamma^n = [G, Gamma^(n-1)]; nil_G A is the NILPOTENT depth."""
    whole_actor = action.actor.whole()
    return descending_series(
        action.target.whole(),
        lambda B: mixed_commutator(action, whole_actor, B),
        action.target.order if depth_cap is None else depth_cap,
    )


def gamma_series_generated(target: GroupTable, generators: np.ndarray, depth_cap: Optional[int] = None) -> SeriesReport:
    """
    The gamma series of the group generated by the automorphisms whose
    element permutations are the rows of `generators`, on an abelian
    target. Every term is invariant, and for invariant B in an abelian
    target [G, B] = <[s,b] : s a generator, b in B>, so G is never tabulated.
    """
    if not target.is_abelian:
        raise InvalidAction(f"{target.name or 'the target'} is not abelian")
    gens = np.asarray(generators, dtype=np.int64).reshape(-1, target.order)
    logger.debug("gamma series of %d generators on %s", len(gens), target.name or "A")

    def step(B: Subgroup) -> Subgroup:
        b = B.array
        moved = gens[:, target.inv[b]]
        return subgroup_closure(target, np.unique(target.mul[moved, b[None, :]]))

    return descending_series(target.whole(), step, target.order if depth_cap is None else depth_cap)


def is_invariant(action: Action, B: Subgroup) -> bool:
    """g.B is contained in B for every g."""
    return bool(B.mask[action.table[:, B.array]].all())


def induced_quotient_action(action: Action, N: Subgroup) -> tuple[Quotient, Action]:
    """The action on A/N for a G-invariant normal N."""
    A = action.target
    if not is_normal(A, N):
        raise NotNormal(f"subgroup of order {N.order} is not normal in the target")
    if not is_invariant(action, N):
        raise InvalidAction(f"subgroup of order {N.order} is not invariant under the actor")
    q = quotient(A, N)
    reps = np.array(q.representatives, dtype=np.int64)
    table = q.projection[action.table[:, reps]]
    name = f"{action.name}/N" if action.name else ""
    return q, Action(action.actor, q.group, table, name)


@dataclass(frozen=True, eq=False)
class QuotientAction:
    quotient: Quotient
    action: Action
    trivial: bool


def quotient_action(action: Action) -> QuotientAction:
    """A/Gamma^1 with its induced action, which must be trivial."""
    gamma1 = mixed_commutator(action, action.actor.whole(), action.target.whole())
    if not is_normal(action.target, gamma1):
        raise InternalInvariantViolation(f"Gamma^1 of {action.name} is not normal in the target")
    q, induced = induced_quotient_action(action, gamma1)
    if not induced.is_trivial:
        raise InternalInvariantViolation(f"the action induced on A/Gamma^1 by {action.name} is not trivial")
    return QuotientAction(q, induced, True)


def restrict_target(action: Action, B: Subgroup, name: str = "") -> tuple[Action, np.ndarray]:
    """The action on a G-invariant subgroup B, with B's embedding into A."""
    if B.parent is not action.target:
        raise MismatchedParents("subgroup of a different target")
    if not is_invariant(action, B):
        raise InvalidAction(f"subgroup of order {B.order} is not invariant under the actor")
    table, embedding = subgroup_table(B)
    local = np.full(action.target.order, -1, dtype=np.int64)
    local[embedding] = np.arange(embedding.size)
    return Action(action.actor, table, local[action.table[:, embedding]], name), embedding


def restrict_actor(action: Action, S: Subgroup, name: str = "") -> tuple[Action, np.ndarray]:
    """The action of a subgroup S of the actor, with S's embedding into G."""
    if S.parent is not action.actor:
        raise MismatchedParents("subgroup of a different actor")
    table, embedding = subgroup_table(S)
    return Action(table, action.target, action.table[embedding], name), embedding


def check_witt_hall(action: Action, f: int, g: int, b: int) -> bool:
    """[[f^-1,g^-1], g.b] b^-1 [[g,b^-1], f] b [[f,b], f g f^-1] == 1"""
    G, A = action.actor, action.target
    x1 = g_commutator(action, G.commutator(G.inverse(f), G.inverse(g)), action.act(g, b))
    x2 = a_commutator(action, g_commutator(action, g, A.inverse(b)), f)
    x3 = a_commutator(action, g_commutator(action, f, b), G.conjugate(f, g))
    return A.product(x1, A.inverse(b), x2, b, x3) == A.identity


def check_witt_hall_all(action: Action) -> CheckResult:
    """The identity above for every triple, vectorized over b."""
    G, A = action.actor, action.target
    T, mul, inv = action.table, A.mul, A.inv
    b = np.arange(A.order)
    for f in range(G.order):
        for g in range(G.order):
            h1 = G.commutator(G.inverse(f), G.inverse(g))
            gb = T[g, b]
            x1 = mul[T[h1, inv[gb]], gb]
            c2 = mul[T[g, b], inv[b]]
            x2 = mul[inv[c2], T[f, c2]]
            c3 = mul[T[f, inv[b]], b]
            x3 = mul[inv[c3], T[G.conjugate(f, g), c3]]
            total = mul[mul[mul[mul[x1, inv[b]], x2], b], x3]
            bad = np.flatnonzero(total != A.identity)
            if bad.size:
                return CheckResult.failed(triple=(f, g, int(bad[0])), value=A.label(int(total[bad[0]])))
    return CheckResult.passed(triples=G.order * G.order * A.order)


def check_jo2(action: Action, H: Subgroup, K: Subgroup) -> CheckResult:
    """[[H,K],A] inside <[K,[H,A]], [H,[K,A]]> for K normal in H."""
    G, A = action.actor, action.target
    if H.parent is not G or K.parent is not G:
        raise MismatchedParents("H and K must be subgroups of the actor")
    if not K.issubset(H):
        raise NotNormal("K is not contained in H")
    conj = G.mul[G.mul[H.array[:, None], K.array[None, :]], G.inv[H.array][:, None]]
    if not K.mask[conj].all():
        raise NotNormal("K is not normal in H")
    whole = A.whole()
    left = mixed_commutator(action, commutator_subgroup(G, H, K), whole)
    right = join(
        mixed_commutator(action, K, mixed_commutator(action, H, whole)),
        mixed_commutator(action, H, mixed_commutator(action, K, whole)),
    )
    details = {"left": left.order, "right": right.order}
    if not left.issubset(right):
        outside = sorted(left.member_set - right.member_set)
        return CheckResult.failed(witness=A.label(outside[0]), **details)
    return CheckResult.passed(**details)


def check_jo2_all(action: Action) -> CheckResult:
    """check_jo2 over every pair K <= H of actor subgroups with K normal in H."""
    subgroups = enumerate_subgroups(action.actor)
    pairs = 0
    for H in subgroups:
        for K in subgroups:
            if H.order % K.order:
                continue
            try:
                result = check_jo2(action, H, K)
            except NotNormal:
                continue
            pairs += 1
            if not result:
                return CheckResult.failed(H=H.labels(), K=K.labels(), **result.details)
    return CheckResult.passed(pairs=pairs)


def check_jo3(action: Action, depth_cap: Optional[int] = None) -> CheckResult:
    """[Gamma^n(G), Gamma^m_G(A)] inside Gamma^(n+m+1)_G(A) whenever n+m+1 <= nil_G A."""
    gamma = gamma_series(action, depth_cap)
    if not gamma.is_nilpotent:
        raise NotApplicable(f"the action is not nilpotent ({gamma.verdict})")
    lcs = lower_central_series(action.actor)
    r = gamma.nil_order
    pairs = 0
    for n in range(r):
        for m in range(r - n):
            lhs = mixed_commutator(action, lcs.term(n), gamma.term(m))
            rhs = gamma.term(n + m + 1)
            pairs += 1
            if not lhs.issubset(rhs):
                return CheckResult.failed(n=n, m=m, lhs=lhs.order, rhs=rhs.order)
    return CheckResult.passed(nil=r, pairs=pairs)


def nil_bound_check(action: Action) -> CheckResult:
    """nil G <= nil_G A - 1 for G acting faithfully and nilpotently."""
    if action.target.order == 1:
        raise NotApplicable("the target is trivial")
    if not action.is_faithful:
        raise NotApplicable("the actor is not a group of automorphisms of the target")
    gamma = gamma_series(action)
    if not gamma.is_nilpotent:
        raise NotApplicable(f"the action is not nilpotent ({gamma.verdict})")
    lcs = lower_central_series(action.actor)
    if not lcs.is_nilpotent:
        return CheckResult.failed(actor_series=str(lcs.verdict), nil_action=gamma.nil_order)
    details = {"nil_actor": lcs.nil_order, "nil_action": gamma.nil_order}
    return CheckResult(lcs.nil_order <= gamma.nil_order - 1, details)


def check_lema1(action: Action) -> CheckResult:
    """
    A/Gamma^1 carries the trivial action, and Gamma^1 lies in every
    G-invariant normal N whose quotient action is trivial.
    """
    qa = quotient_action(action)
    gamma1 = qa.quotient.kernel
    A = action.target
    checked = 0
    for N in enumerate_subgroups(A):
        if not is_normal(A, N) or not is_invariant(action, N):
            continue
        _, induced = induced_quotient_action(action, N)
        if induced.is_trivial:
            checked += 1
            if not gamma1.issubset(N):
                return CheckResult.failed(kernel=N.labels(), gamma1=gamma1.order)
    return CheckResult.passed(gamma1=gamma1.order, quotient=qa.quotient.group.order, kernels=checked)


def check_gamma_functoriality(action: Action) -> CheckResult:
    """Gamma^n is G-invariant and Gamma^m(Gamma^n) = Gamma^(m+n)."""
    gamma = gamma_series(action)
    depth = gamma.nil_order if gamma.is_nilpotent else gamma.verdict.depth + 1
    pairs = 0
    for n in range(min(depth, len(gamma.terms) - 1) + 1):
        term = gamma.term(n)
        if not is_invariant(action, term):
            return CheckResult.failed(n=n, reason="term is not invariant")
        restricted, embedding = restrict_target(action, term)
        inner = gamma_series(restricted)
        for m in range(depth - n + 1):
            members = tuple(sorted(int(x) for x in embedding[list(inner.term(m).members)]))
            expected = gamma.term(m + n)
            pairs += 1
            if members != expected.members:
                return CheckResult.failed(n=n, m=m, restricted=len(members), direct=expected.order)
    return CheckResult.passed(orders=gamma.orders(), pairs=pairs)
