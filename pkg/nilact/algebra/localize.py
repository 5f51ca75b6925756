"""
p-localization of finite nilpotent groups. For such a group G_(p) is the
Sylow p-subgroup (the set of p-elements) and the localization morphism
sends g to its p-component.
"""
import logging
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from sympy import primefactors
from sympy.ntheory.modular import crt

from ..core.arith import is_p_power, require_prime, valuation
from ..core.errors import InternalInvariantViolation, InvalidAction, NotNilpotent
from ..models.action import Action
from ..models.check import CheckResult
from ..models.group import GroupTable, Subgroup
from .actions import gamma_series
from .grpcore import lower_central_series, make_subgroup, subgroup_table

logger = logging.getLogger(__name__)


@lru_cache(maxsize=512)
def _nilpotent(G: GroupTable) -> bool:
    return lower_central_series(G).is_nilpotent


def require_nilpotent(G: GroupTable) -> None:
    if not _nilpotent(G):
        raise NotNilpotent(f"{G.name or 'the group'} is not nilpotent")


def _component_exponent(n: int, p: int) -> int:
    """u with u = 1 mod p^a and u = 0 mod m, where n = p^a m and p does not divide m."""
    if p == 0:
        return 0
    pa = p ** valuation(n, p)
    m = n // pa
    if pa == 1:
        return 0
    if m == 1:
        return 1
    u, _ = crt([pa, m], [1, 0])
    return int(u)


def p_component(G: GroupTable, g: int, p: int) -> int:
    require_nilpotent(G)
    p = require_prime(p, allow_zero=True)
    return G.power(g, _component_exponent(G.element_order(g), p))


def p_components(G: GroupTable, p: int) -> np.ndarray:
    """p_component for every element at once."""
    require_nilpotent(G)
    p = require_prime(p, allow_zero=True)
    return np.array(
        [G.power(g, _component_exponent(int(n), p)) for g, n in enumerate(G.element_orders)],
        dtype=np.int64,
    )


@dataclass(frozen=True, eq=False)
class Localization:
    """
    G_(p) as a standalone table. `morphism[g]` is the local index of the
    p-component of g and `embedding[k]` the parent index of local element k.
    """

    parent: GroupTable
    prime: int
    group: GroupTable
    sylow: Subgroup
    morphism: np.ndarray
    embedding: np.ndarray


def localize_group(G: GroupTable, p: int) -> Localization:
    """The Sylow p-subgroup with the p-component morphism; p = 0 gives the trivial group."""
    components = p_components(G, p)
    if p == 0:
        sylow = G.trivial()
    else:
        sylow = make_subgroup(G, [x for x, n in enumerate(G.element_orders) if is_p_power(int(n), p)])
    name = f"{G.name}_({p})" if G.name else ""
    table, embedding = subgroup_table(sylow, name)
    local = np.full(G.order, -1, dtype=np.int64)
    local[embedding] = np.arange(embedding.size)
    morphism = local[components]
    if (morphism < 0).any():
        raise InternalInvariantViolation(f"a {p}-component of {G.name or 'G'} lies outside the Sylow subgroup")
    if not np.array_equal(morphism[G.mul], table.mul[np.ix_(morphism, morphism)]):
        raise InternalInvariantViolation(f"the {p}-localization of {G.name or 'G'} is not a homomorphism")
    logger.debug("%s localized at %d: order %d", G.name or "G", p, table.order)
    return Localization(G, p, table, sylow, morphism, embedding)


def localize_action(action: Action, p: int) -> tuple[Action, Localization]:
    """The induced action on A_(p)."""
    loc = localize_group(action.target, p)
    images = action.table[:, loc.embedding]
    if not loc.sylow.mask[images].all():
        raise InvalidAction(f"{action.name} does not preserve the {p}-part of its target")
    table = loc.morphism[images]
    name = f"{action.name}_({p})" if action.name else ""
    return Action(action.actor, loc.group, table, name), loc


def target_primes(action: Action) -> list[int]:
    return [int(p) for p in primefactors(action.target.order)]


def check_lema2(action: Action, p: int, m: int) -> CheckResult:
    """The p-part of Gamma^m_G(A) equals Gamma^m_G(A_(p))."""
    require_nilpotent(action.target)
    localized, loc = localize_action(action, p)
    term = gamma_series(action).term(m)
    direct = sorted({int(loc.morphism[x]) for x in term.members})
    local = list(gamma_series(localized).term(m).members)
    details = {"prime": p, "m": m, "localized_term": len(direct), "term_of_localized": len(local)}
    if direct != local:
        diff = sorted(set(direct) ^ set(local))
        return CheckResult.failed(witness=loc.group.label(diff[0]), **details)
    return CheckResult.passed(**details)


def check_lema2_all(action: Action) -> CheckResult:
    """check_lema2 for every prime dividing |A| and every depth up to the series length."""
    require_nilpotent(action.target)
    series = gamma_series(action)
    depth = series.verdict.depth + 1
    checked = 0
    for p in target_primes(action):
        for m in range(depth + 1):
            result = check_lema2(action, p, m)
            checked += 1
            if not result:
                return result
    return CheckResult.passed(cases=checked, primes=target_primes(action))


def check_uf(action: Action) -> CheckResult:
    """G is nilpotent on A iff it is nilpotent on every A_(p), p prime or zero."""
    require_nilpotent(action.target)
    full = gamma_series(action).is_nilpotent
    local = {p: gamma_series(localize_action(action, p)[0]).is_nilpotent for p in target_primes(action) + [0]}
    details = {"nilpotent": full, "local": {str(p): v for p, v in local.items()}}
    return CheckResult(full == all(local.values()), details)
