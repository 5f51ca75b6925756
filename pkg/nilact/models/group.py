from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional

import numpy as np


def _frozen(array) -> np.ndarray:
    out = np.array(array, dtype=np.int64)
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class GroupTable:
    """
    A finite group as an index set {0, ..., order-1} with a dense
    multiplication table. mul[a, b] is the index of a*b; identity sits at 0
    for every table the library builds.
    """

    mul: np.ndarray
    inv: np.ndarray
    identity: int = 0
    generators: tuple[int, ...] = ()
    labels: Optional[tuple[str, ...]] = None
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "mul", _frozen(self.mul))
        object.__setattr__(self, "inv", _frozen(self.inv))
        object.__setattr__(self, "generators", tuple(int(g) for g in self.generators))

    @property
    def order(self) -> int:
        return int(self.mul.shape[0])

    def __len__(self) -> int:
        return self.order

    def label(self, a: int) -> str:
        return self.labels[a] if self.labels else str(a)

    def multiply(self, a: int, b: int) -> int:
        return int(self.mul[a, b])

    def inverse(self, a: int) -> int:
        return int(self.inv[a])

    def product(self, *elements: int) -> int:
        """Left-to-right product of indices."""
        acc = self.identity
        for x in elements:
            acc = int(self.mul[acc, x])
        return acc

    def power(self, a: int, k: int) -> int:
        if k < 0:
            a, k = int(self.inv[a]), -k
        result, base = self.identity, a
        while k:
            if k & 1:
                result = int(self.mul[result, base])
            base = int(self.mul[base, base])
            k >>= 1
        return result

    def conjugate(self, g: int, a: int) -> int:
        """g a g^-1"""
        return int(self.mul[self.mul[g, a], self.inv[g]])

    def commutator(self, g: int, h: int) -> int:
        """[g,h] = g^-1 h^-1 g h"""
        return self.product(int(self.inv[g]), int(self.inv[h]), g, h)

    @cached_property
    def element_orders(self) -> np.ndarray:
        orders = np.zeros(self.order, dtype=np.int64)
        for a in range(self.order):
            x, n = a, 1
            while x != self.identity:
                x = int(self.mul[x, a])
                n += 1
            orders[a] = n
        orders.setflags(write=False)
        return orders

    def element_order(self, a: int) -> int:
        return int(self.element_orders[a])

    @cached_property
    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.mul, self.mul.T))

    def whole(self) -> "Subgroup":
        return Subgroup(self, tuple(range(self.order)), self.generators)

    def trivial(self) -> "Subgroup":
        return Subgroup(self, (self.identity,), ())

    def __repr__(self) -> str:
        return f"GroupTable({self.name or '?'}, order={self.order})"


@dataclass(frozen=True, eq=False)
class Subgroup:
    """A subset of a parent table closed under products and inverses."""

    parent: GroupTable
    members: tuple[int, ...]
    generators: tuple[int, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "members", tuple(sorted({int(m) for m in self.members})))
        object.__setattr__(self, "generators", tuple(int(g) for g in self.generators))

    @property
    def order(self) -> int:
        return len(self.members)

    @property
    def is_trivial(self) -> bool:
        return self.order == 1

    @cached_property
    def array(self) -> np.ndarray:
        out = np.array(self.members, dtype=np.int64)
        out.setflags(write=False)
        return out

    @cached_property
    def mask(self) -> np.ndarray:
        out = np.zeros(self.parent.order, dtype=bool)
        out[list(self.members)] = True
        out.setflags(write=False)
        return out

    @cached_property
    def member_set(self) -> frozenset[int]:
        return frozenset(self.members)

    def __contains__(self, a: int) -> bool:
        return bool(self.mask[a])

    def __len__(self) -> int:
        return self.order

    def __iter__(self):
        return iter(self.members)

    def issubset(self, other: "Subgroup") -> bool:
        return self.parent is other.parent and self.member_set <= other.member_set

    def __le__(self, other: "Subgroup") -> bool:
        return self.issubset(other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subgroup):
            return NotImplemented
        return self.parent is other.parent and self.members == other.members

    def __hash__(self) -> int:
        return hash((id(self.parent), self.members))

    def is_closed(self) -> bool:
        """Identity, products and inverses stay inside members."""
        arr = self.array
        if not self.mask[self.parent.identity]:
            return False
        if not self.mask[self.parent.inv[arr]].all():
            return False
        return bool(self.mask[self.parent.mul[np.ix_(arr, arr)]].all())

    def labels(self) -> list[str]:
        return [self.parent.label(m) for m in self.members]

    def __repr__(self) -> str:
        return f"Subgroup(order={self.order} of {self.parent!r})"
