import logging
from dataclasses import dataclass
from typing import Mapping, Sequence, Union

import numpy as np

from ..core.errors import InvalidAction
from .group import GroupTable
from .permutation import Permutation

logger = logging.getLogger(__name__)

Image = Union[Permutation, Sequence[int]]


def _as_images(perm: Image, degree: int) -> np.ndarray:
    images = perm.images if isinstance(perm, Permutation) else tuple(int(x) for x in perm)
    if len(images) != degree or sorted(images) != list(range(degree)):
        raise InvalidAction(f"image is not a permutation of the {degree} target elements")
    return np.array(images, dtype=np.int64)


def _is_automorphism(target: GroupTable, sigma: np.ndarray) -> bool:
    # sigma(a*b) == sigma(a)*sigma(b) for every pair
    return bool(np.array_equal(sigma[target.mul], target.mul[np.ix_(sigma, sigma)]))


@dataclass(frozen=True, eq=False)
class Action:
    """
    An action of `actor` G on `target` A by automorphisms, materialized as
    table[g, a] = g.a. The table is validated once on construction: every row
    is an automorphism of A and g -> row(g) is a homomorphism G -> Aut(A).
    """

    actor: GroupTable
    target: GroupTable
    table: np.ndarray
    name: str = ""

    def __post_init__(self):
        table = np.array(self.table, dtype=np.int64)
        table.setflags(write=False)
        object.__setattr__(self, "table", table)

    def act(self, g: int, a: int) -> int:
        return int(self.table[g, a])

    @property
    def images(self) -> dict[int, Permutation]:
        """Automorphism assigned to each generator of the actor."""
        return {g: Permutation(tuple(int(x) for x in self.table[g])) for g in self.actor.generators}

    @classmethod
    def from_generator_images(
        cls,
        actor: GroupTable,
        target: GroupTable,
        images: Mapping[int, Image],
        name: str = "",
    ) -> "Action":
        """
        Extend generator images to the whole actor by walking its Cayley graph;
        every edge re-derives an element's image, so an inconsistent relation
        is caught the first time two paths disagree.
        """
        gens = actor.generators
        missing = [g for g in gens if g not in images]
        if missing:
            raise InvalidAction(f"no image given for actor generators {missing}")
        sigma = {}
        for g in gens:
            s = _as_images(images[g], target.order)
            if not _is_automorphism(target, s):
                raise InvalidAction(f"image of generator {actor.label(g)} is not an automorphism")
            sigma[g] = s

        table = np.full((actor.order, target.order), -1, dtype=np.int64)
        table[actor.identity] = np.arange(target.order)
        frontier = [actor.identity]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = int(actor.mul[g, x])
                    candidate = sigma[g][table[x]]
                    if table[y, 0] < 0:
                        table[y] = candidate
                        nxt.append(y)
                    elif not np.array_equal(table[y], candidate):
                        raise InvalidAction(
                            f"generator images violate a relation at actor element {actor.label(y)}"
                        )
            frontier = nxt
        if (table[:, 0] < 0).any():
            raise InvalidAction("actor generators do not reach every actor element")
        logger.debug("materialized action %s: |G|=%d |A|=%d", name, actor.order, target.order)
        return cls(actor, target, table, name)

    @classmethod
    def from_table(cls, actor: GroupTable, target: GroupTable, table, name: str = "") -> "Action":
        table = np.asarray(table, dtype=np.int64)
        if table.shape != (actor.order, target.order):
            raise InvalidAction(f"table shape {table.shape} does not match |G| x |A|")
        if not np.array_equal(table[actor.identity], np.arange(target.order)):
            raise InvalidAction("the actor identity does not act trivially")
        for g in actor.generators:
            row = _as_images(table[g], target.order)
            if not _is_automorphism(target, row):
                raise InvalidAction(f"row of generator {actor.label(g)} is not an automorphism")
            # row(g*x) == row(g) o row(x) for every x
            if not np.array_equal(table[actor.mul[g]], row[table]):
                raise InvalidAction(f"rows are not multiplicative at generator {actor.label(g)}")
        return cls(actor, target, table, name)

    @classmethod
    def trivial(cls, actor: GroupTable, target: GroupTable, name: str = "") -> "Action":
        table = np.tile(np.arange(target.order), (actor.order, 1))
        return cls(actor, target, table, name)

    @classmethod
    def conjugation(cls, group: GroupTable, name: str = "") -> "Action":
        """g.a = g a g^-1"""
        table = group.mul[group.mul, group.inv[:, None]]
        return cls(group, group, table, name)

    @property
    def is_trivial(self) -> bool:
        return bool((self.table == np.arange(self.target.order)).all())

    @property
    def kernel_members(self) -> tuple[int, ...]:
        identity_row = np.arange(self.target.order)
        return tuple(int(g) for g in range(self.actor.order) if np.array_equal(self.table[g], identity_row))

    @property
    def is_faithful(self) -> bool:
        return len(self.kernel_members) == 1

    def __repr__(self) -> str:
        return f"Action({self.name or '?'}: |G|={self.actor.order} on |A|={self.target.order})"
