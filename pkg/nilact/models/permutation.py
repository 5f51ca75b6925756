import re
from dataclasses import dataclass
from typing import Iterable, Sequence

from ..core.errors import InvalidPermutation

_CYCLE = re.compile(r"\(([^()]*)\)")


@dataclass(frozen=True)
class Permutation:
    """A bijection of {0, ..., degree-1}; images[i] is the image of i."""

    images: tuple[int, ...]

    def __post_init__(self):
        images = tuple(int(x) for x in self.images)
        if sorted(images) != list(range(len(images))):
            raise InvalidPermutation(f"not a bijection on 0..{len(images) - 1}: {images}")
        object.__setattr__(self, "images", images)

    @property
    def degree(self) -> int:
        return len(self.images)

    @classmethod
    def identity(cls, degree: int) -> "Permutation":
        return cls(tuple(range(degree)))

    @classmethod
    def from_cycles(cls, degree: int, cycles: Iterable[Sequence[int]]) -> "Permutation":
        images = list(range(degree))
        seen: set[int] = set()
        for cycle in cycles:
            for i, x in enumerate(cycle):
                if not 0 <= x < degree:
                    raise InvalidPermutation(f"point {x} outside degree {degree}")
                if x in seen:
                    raise InvalidPermutation(f"point {x} repeated across cycles")
                seen.add(x)
                images[x] = cycle[(i + 1) % len(cycle)]
        return cls(tuple(images))

    @classmethod
    def parse(cls, degree: int, text: str) -> "Permutation":
        """Parse adjacent 0-based cycles such as ``(0 1 2)(3 4)``; ``()`` is the identity."""
        stripped = text.strip()
        if _CYCLE.sub("", stripped).strip():
            raise InvalidPermutation(f"malformed cycle notation: {text!r}")
        cycles = []
        for body in _CYCLE.findall(stripped):
            try:
                cycles.append([int(tok) for tok in body.replace(",", " ").split()])
            except ValueError:
                raise InvalidPermutation(f"non-integer point in {text!r}")
        return cls.from_cycles(degree, cycles)

    def __mul__(self, other: "Permutation") -> "Permutation":
        # p * q applies q first, then p
        if self.degree != other.degree:
            raise InvalidPermutation("degrees differ")
        return Permutation(tuple(self.images[i] for i in other.images))

    def inverse(self) -> "Permutation":
        inv = [0] * self.degree
        for i, v in enumerate(self.images):
            inv[v] = i
        return Permutation(tuple(inv))

    def cycles(self) -> list[tuple[int, ...]]:
        out, seen = [], set()
        for start in range(self.degree):
            if start in seen or self.images[start] == start:
                continue
            cycle, x = [], start
            while x not in seen:
                seen.add(x)
                cycle.append(x)
                x = self.images[x]
            out.append(tuple(cycle))
        return out

    def __str__(self) -> str:
        cycles = self.cycles()
        if not cycles:
            return "()"
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cycles)
