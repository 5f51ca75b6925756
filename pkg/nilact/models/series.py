from dataclasses import dataclass
from enum import Enum
from typing import Optional

from .group import Subgroup


class VerdictKind(Enum):
    NILPOTENT = "NilpotentOfOrder"
    STABILIZED = "StabilizedNontrivial"
    DEPTH_CAP = "DepthCapReached"


@dataclass(frozen=True)
class Verdict:
    kind: VerdictKind
    depth: int

    def __str__(self) -> str:
        return f"{self.kind.value} {self.depth}"


@dataclass(frozen=True)
class SeriesReport:
    """
    A descending chain of subgroups, terms[0] being the whole group (or the
    whole target of an action), with the reason the chain stopped.

    NILPOTENT r:   terms[r] is trivial, terms[r-1] is not.
    STABILIZED k:  terms[k] is nontrivial and the next term equals it.
    DEPTH_CAP k:   neither happened within k steps.
    """

    terms: tuple[Subgroup, ...]
    verdict: Verdict

    @property
    def is_nilpotent(self) -> bool:
        return self.verdict.kind is VerdictKind.NILPOTENT

    @property
    def nil_order(self) -> Optional[int]:
        return self.verdict.depth if self.is_nilpotent else None

    @property
    def stabilized(self) -> Optional[Subgroup]:
        if self.verdict.kind is VerdictKind.STABILIZED:
            return self.terms[self.verdict.depth]
        return None

    def term(self, n: int) -> Subgroup:
        """The n-th term, extended past the stored ones when the chain stopped for good."""
        if n < len(self.terms):
            return self.terms[n]
        if self.verdict.kind is VerdictKind.DEPTH_CAP:
            raise IndexError(f"term {n} lies beyond the depth cap {self.verdict.depth}")
        return self.terms[-1]

    def orders(self) -> list[int]:
        return [t.order for t in self.terms]
