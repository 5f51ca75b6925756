"""Finite groups as dense multiplication tables: closures, commutators,
central series, normality and quotients."""
import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Hashable, Iterable, Optional, Sequence, TypeVar

import numpy as np

from ..core.config import settings
from ..core.errors import ClosureExceedsCap, InvalidPermutation, MismatchedParents, NotNormal, TooLarge
from ..models.check import CheckResult
from ..models.group import GroupTable, Subgroup
from ..models.permutation import Permutation
from ..models.series import SeriesReport, Verdict, VerdictKind

logger = logging.getLogger(__name__)

T = TypeVar("T", bound=Hashable)


def close_elements(
    generators: Sequence[T],
    multiply: Callable[[T, T], T],
    identity: T,
    cap: Optional[int] = None,
) -> list[T]:
    """
    Breadth-first closure of `generators` under right multiplication,
    identity first. Raises ClosureExceedsCap as soon as the element count
    passes the cap, so runaway generating sets fail fast.
    """
    cap = settings.resolve_cap(cap)
    elements = [identity]
    seen = {identity}
    frontier = [identity]
    while frontier:
        nxt = []
        for x in frontier:
            for g in generators:
                y = multiply(x, g)
                if y not in seen:
                    seen.add(y)
                    elements.append(y)
                    nxt.append(y)
                    if len(elements) > cap:
                        raise ClosureExceedsCap(f"closure exceeds the order cap {cap}")
        frontier = nxt
    return elements


def greedy_generators(mul: np.ndarray, members: Iterable[int]) -> tuple[int, ...]:
    """Pick members in index order, keeping each one not yet generated."""
    reached = np.zeros(mul.shape[0], dtype=bool)
    reached[0] = True
    gens: list[int] = []
    for m in members:
        if reached[m]:
            continue
        gens.append(int(m))
        reached = _closure_mask(mul, gens)
    return tuple(gens)


def _closure_mask(mul: np.ndarray, seed: Sequence[int], identity: int = 0) -> np.ndarray:
    mask = np.zeros(mul.shape[0], dtype=bool)
    mask[identity] = True
    seed = np.unique(np.asarray(seed, dtype=np.int64))
    if seed.size == 0:
        return mask
    frontier = np.array([identity], dtype=np.int64)
    while frontier.size:
        products = np.unique(mul[np.ix_(frontier, seed)])
        fresh = products[~mask[products]]
        mask[fresh] = True
        frontier = fresh
    return mask


def table_from_elements(
    elements: Sequence[T],
    multiply: Callable[[T, T], T],
    generators: Sequence[T] = (),
    labels: Optional[Sequence[str]] = None,
    name: str = "",
) -> GroupTable:
    """Dense table of a closed element list whose first entry is the identity."""
    index = {e: i for i, e in enumerate(elements)}
    n = len(elements)
    mul = np.empty((n, n), dtype=np.int64)
    for i, a in enumerate(elements):
        mul[i] = [index[multiply(a, b)] for b in elements]
    inv = np.argmax(mul == 0, axis=1)
    gens = tuple(dict.fromkeys(index[g] for g in generators if index[g] != 0))
    if not gens and n > 1:
        gens = greedy_generators(mul, range(n))
    return GroupTable(mul, inv, 0, gens, tuple(labels) if labels is not None else None, name)


def group_from_perms(
    degree: int,
    gens: Sequence[Permutation],
    cap: Optional[int] = None,
    name: str = "",
) -> GroupTable:
    """The permutation group generated by `gens`, identity at index 0."""
    for g in gens:
        if g.degree != degree:
            raise InvalidPermutation(f"generator {g} has degree {g.degree}, expected {degree}")
    identity = Permutation.identity(degree)
    elements = close_elements(list(gens), Permutation.__mul__, identity, cap)
    logger.debug("closure of %d generators on %d points: order %d", len(gens), degree, len(elements))
    return table_from_elements(
        elements, Permutation.__mul__, generators=gens, labels=[str(e) for e in elements], name=name
    )


def make_subgroup(G: GroupTable, members: Iterable[int]) -> Subgroup:
    """Wrap a member set already known to be closed, attaching witness generators."""
    members = sorted({int(m) for m in members})
    return Subgroup(G, members, greedy_generators(G.mul, members))


def subgroup_closure(G: GroupTable, seed: Iterable[int]) -> Subgroup:
    seed = [int(s) for s in seed if int(s) != G.identity]
    mask = _closure_mask(G.mul, seed, G.identity)
    return Subgroup(G, tuple(np.flatnonzero(mask)), tuple(dict.fromkeys(seed)))


def intersection(H: Subgroup, K: Subgroup) -> Subgroup:
    if H.parent is not K.parent:
        raise MismatchedParents("subgroups of different groups")
    return make_subgroup(H.parent, H.member_set & K.member_set)


def join(H: Subgroup, K: Subgroup) -> Subgroup:
    if H.parent is not K.parent:
        raise MismatchedParents("subgroups of different groups")

    def seed(S: Subgroup) -> tuple[int, ...]:
        return S.generators if S.generators or S.is_trivial else S.members

    return subgroup_closure(H.parent, seed(H) + seed(K))


def commutator_subgroup(G: GroupTable, H: Subgroup, K: Subgroup) -> Subgroup:
    """<h^-1 k^-1 h k : h in H, k in K>"""
    if H.parent is not G or K.parent is not G:
        raise MismatchedParents("commutator of subgroups from different groups")
    h, k = H.array, K.array
    hk = G.mul[G.inv[h][:, None], G.inv[k][None, :]]
    comms = G.mul[G.mul[hk, h[:, None]], k[None, :]]
    return subgroup_closure(G, np.unique(comms))


def require_lattice(G: GroupTable, cap: Optional[int] = None) -> None:
    cap = settings.lattice_cap if cap is None else cap
    if G.order > cap:
        raise TooLarge(f"|G| = {G.order} exceeds the lattice cap {cap}")


def enumerate_subgroups(G: GroupTable, cap: Optional[int] = None) -> list[Subgroup]:
    """
    The whole subgroup lattice, ordered by (order, members). Every subgroup
    is a join of cyclic subgroups, so joins are taken until nothing new
    appears.
    """
    require_lattice(G, cap)
    return list(_subgroup_lattice(G))


@lru_cache(maxsize=128)
def _subgroup_lattice(G: GroupTable) -> tuple[Subgroup, ...]:
    cyclic = {}
    for x in range(G.order):
        H = subgroup_closure(G, [x])
        cyclic.setdefault(H.member_set, H)
    found = dict(cyclic)
    frontier = list(cyclic.values())
    while frontier:
        fresh = []
        for H in frontier:
            for C in cyclic.values():
                if C.member_set <= H.member_set:
                    continue
                J = join(H, C)
                if J.member_set not in found:
                    found[J.member_set] = J
                    fresh.append(J)
        frontier = fresh
    logger.debug("%s: %d subgroups from %d cyclic ones", G.name or "G", len(found), len(cyclic))
    return tuple(sorted(found.values(), key=lambda H: (H.order, H.members)))


def descending_series(
    first: Subgroup,
    step: Callable[[Subgroup], Subgroup],
    depth_cap: int,
) -> SeriesReport:
    """
    Iterate `step` from `first` until the term is trivial, repeats, or the
    depth cap is hit, in that order of precedence.
    """
    terms = [first]
    while True:
        depth = len(terms) - 1
        current = terms[-1]
        if current.is_trivial:
            verdict = Verdict(VerdictKind.NILPOTENT, depth)
            break
        if depth >= depth_cap:
            logger.warning("series reached depth cap %d with a term of order %d", depth_cap, current.order)
            verdict = Verdict(VerdictKind.DEPTH_CAP, depth)
            break
        nxt = step(current)
        if nxt == current:
            verdict = Verdict(VerdictKind.STABILIZED, depth)
            break
        terms.append(nxt)
    logger.debug("series %s, orders %s", verdict, [t.order for t in terms])
    return SeriesReport(tuple(terms), verdict)


def lower_central_series(G: GroupTable, depth_cap: Optional[int] = None) -> SeriesReport:
    """Gamma^0 = G, Gamma^n = [G, Gamma^(n-1)]."""
    whole = G.whole()
    return descending_series(
        whole,
        lambda H: commutator_subgroup(G, whole, H),
        G.order if depth_cap is None else depth_cap,
    )


def powers(G: GroupTable, k: int) -> np.ndarray:
    """x -> x^k for every element."""
    idx = np.arange(G.order)
    acc = np.full(G.order, G.identity, dtype=np.int64)
    for _ in range(k):
        acc = G.mul[acc, idx]
    return acc


def power_subgroup(G: GroupTable, k: int) -> Subgroup:
    """<x^k>; pA for an abelian A written multiplicatively."""
    return subgroup_closure(G, np.unique(powers(G, k)))


def omega_subgroup(G: GroupTable, k: int) -> Subgroup:
    """<x : x^k = 1>; A[k] for an abelian A."""
    return subgroup_closure(G, np.flatnonzero(powers(G, k) == G.identity))


def is_nilpotent(G: GroupTable) -> bool:
    return lower_central_series(G).is_nilpotent


def center(G: GroupTable) -> Subgroup:
    commuting = (G.mul == G.mul.T).all(axis=1)
    return make_subgroup(G, np.flatnonzero(commuting))


def is_normal(G: GroupTable, H: Subgroup) -> bool:
    if H.parent is not G:
        raise MismatchedParents("subgroup of a different group")
    conj = G.mul[G.mul[np.arange(G.order)[:, None], H.array[None, :]], G.inv[:, None]]
    return bool(H.mask[conj].all())


@dataclass(frozen=True, eq=False)
class Quotient:
    """G/N with projection[g] = index of the coset gN in `group`."""

    group: GroupTable
    projection: np.ndarray
    kernel: Subgroup
    representatives: tuple[int, ...]


def quotient(G: GroupTable, H: Subgroup) -> Quotient:
    if not is_normal(G, H):
        raise NotNormal(f"subgroup of order {H.order} is not normal in {G.name or 'G'}")
    cosets = G.mul[:, H.array].min(axis=1)
    reps = tuple(int(r) for r in dict.fromkeys(cosets.tolist()))
    position = {r: i for i, r in enumerate(reps)}
    projection = np.array([position[int(c)] for c in cosets], dtype=np.int64)
    r = np.array(reps, dtype=np.int64)
    mul = projection[G.mul[np.ix_(r, r)]]
    inv = projection[G.inv[r]]
    gens = tuple(dict.fromkeys(int(projection[g]) for g in G.generators if projection[g] != 0))
    if not gens and len(reps) > 1:
        gens = greedy_generators(mul, range(len(reps)))
    labels = tuple(f"{G.label(x)}N" for x in reps)
    name = f"{G.name}/N" if G.name else ""
    projection.setflags(write=False)
    return Quotient(GroupTable(mul, inv, 0, gens, labels, name), projection, H, reps)


def subgroup_table(H: Subgroup, name: str = "") -> tuple[GroupTable, np.ndarray]:
    """
    H as a standalone group, identity at index 0, together with the
    embedding array local index -> parent index.
    """
    G = H.parent
    embedding = np.array([G.identity] + [m for m in H.members if m != G.identity], dtype=np.int64)
    local = np.full(G.order, -1, dtype=np.int64)
    local[embedding] = np.arange(embedding.size)
    mul = local[G.mul[np.ix_(embedding, embedding)]]
    inv = local[G.inv[embedding]]
    gens = tuple(int(local[g]) for g in H.generators if g != G.identity)
    labels = tuple(G.label(m) for m in embedding)
    table = GroupTable(mul, inv, 0, gens or greedy_generators(mul, range(1, embedding.size)), labels, name)
    embedding.setflags(write=False)
    return table, embedding


def check_axioms(G: GroupTable) -> CheckResult:
    """Exhaustive group axioms plus generation; the first violation is the witness."""
    n, mul = G.order, G.mul
    e = G.identity
    idx = np.arange(n)
    if not (np.array_equal(mul[e], idx) and np.array_equal(mul[:, e], idx)):
        bad = int(np.flatnonzero((mul[e] != idx) | (mul[:, e] != idx))[0])
        return CheckResult.failed(axiom="identity", element=bad)
    inverse_ok = (mul[idx, G.inv] == e) & (mul[G.inv, idx] == e)
    if not inverse_ok.all():
        return CheckResult.failed(axiom="inverse", element=int(np.flatnonzero(~inverse_ok)[0]))
    for a in range(n):
        # (ab)c against a(bc) for every b, c
        left = mul[mul[a]]
        right = mul[a][mul]
        if not np.array_equal(left, right):
            b, c = np.argwhere(left != right)[0]
            return CheckResult.failed(axiom="associativity", triple=(a, int(b), int(c)))
    generated = subgroup_closure(G, G.generators).order
    if generated != n:
        return CheckResult.failed(axiom="generation", generated=generated, order=n)
    return CheckResult.passed(order=n)
