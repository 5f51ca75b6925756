from math import prod
from typing import Any, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from sympy import factorint, primefactors

Matrix = tuple[tuple[int, ...], ...]


def _prime_of(d: int) -> int:
    return int(primefactors(d)[0])


class AbGroup(BaseModel):
    """
    A finitely generated abelian group Z^free_rank + Z/d_1 + ... + Z/d_t in
    primary form: every d_i is a prime power, grouped by ascending prime and
    descending power within a prime. Invariant-factor input is split on
    ingestion, so AbGroup(torsion=[12]) is Z/4 + Z/3.
    """

    model_config = ConfigDict(frozen=True)

    free_rank: int = Field(0, ge=0)
    torsion: tuple[int, ...] = ()

    @field_validator("torsion", mode="before")
    @classmethod
    def primary_form(cls, value: Any) -> tuple[int, ...]:
        factors = []
        for d in value or ():
            d = int(d)
            if d < 1:
                raise ValueError(f"torsion factor {d} must be positive")
            factors.extend(int(p) ** int(k) for p, k in factorint(d).items())
        return tuple(sorted(factors, key=lambda q: (_prime_of(q), -q)))

    @classmethod
    def cyclic(cls, n: int) -> "AbGroup":
        return cls(torsion=(n,)) if n else cls(free_rank=1)

    @classmethod
    def parse_factors(cls, factors: list[int]) -> "AbGroup":
        """Factor list in catalog form: 0 stands for a free summand Z."""
        return cls(free_rank=sum(1 for d in factors if d == 0), torsion=tuple(d for d in factors if d))

    @property
    def moduli(self) -> tuple[int, ...]:
        """Order of each generator, free ones (0) first; matches AbHom row/column order."""
        return (0,) * self.free_rank + self.torsion

    @property
    def ngens(self) -> int:
        return self.free_rank + len(self.torsion)

    @property
    def is_finite(self) -> bool:
        return self.free_rank == 0

    @property
    def order(self) -> Optional[int]:
        return prod(self.torsion) if self.is_finite else None

    @property
    def torsion_order(self) -> int:
        return prod(self.torsion)

    @property
    def is_trivial(self) -> bool:
        return self.ngens == 0

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(sorted({_prime_of(d) for d in self.torsion}))

    @property
    def exponent(self) -> int:
        return max(self.torsion, default=1)

    def factor_prime(self, i: int) -> Optional[int]:
        """Prime of generator i (free generators have none)."""
        d = self.moduli[i]
        return _prime_of(d) if d else None

    def p_indices(self, p: int) -> tuple[int, ...]:
        """Generator indices of the p-primary torsion factors."""
        return tuple(i for i, d in enumerate(self.moduli) if d and d % p == 0)

    def is_p_group(self, p: Optional[int] = None) -> bool:
        if not self.is_finite or self.is_trivial or len(self.primes) != 1:
            return False
        return p is None or self.primes[0] == p

    def p_part(self, p: int) -> "AbGroup":
        return AbGroup(torsion=tuple(d for d in self.torsion if d % p == 0))

    def torsion_part(self) -> "AbGroup":
        return AbGroup(torsion=self.torsion)

    @property
    def label(self) -> str:
        """Canonical name such as Z^2xZ4xZ2^2; 'trivial' for the zero group."""
        parts = []
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        i = 0
        while i < len(self.torsion):
            d, j = self.torsion[i], i
            while j < len(self.torsion) and self.torsion[j] == d:
                j += 1
            parts.append(f"Z{d}" if j - i == 1 else f"Z{d}^{j - i}")
            i = j
        return "x".join(parts) or "trivial"

    def __str__(self) -> str:
        return self.label


class AbHom(BaseModel):
    """
    A homomorphism source -> target as an integer matrix: rows index target
    generators, columns source generators, free generators first. Column j
    into row i is x -> matrix[i][j] * x; entries into torsion rows are kept
    reduced mod the row's order.
    """

    model_config = ConfigDict(frozen=True)

    source: AbGroup
    target: AbGroup
    matrix: Matrix

    @model_validator(mode="before")
    @classmethod
    def reduce_entries(cls, data: Any) -> Any:
        if not isinstance(data, dict):
            return data
        target, matrix = data.get("target"), data.get("matrix")
        if isinstance(target, dict):
            target = AbGroup.model_validate(target)
        if isinstance(target, AbGroup) and matrix is not None and len(matrix) == target.ngens:
            reduced = tuple(
                tuple(int(x) % m if m else int(x) for x in row)
                for row, m in zip(matrix, target.moduli)
            )
            data = {**data, "target": target, "matrix": reduced}
        return data

    @model_validator(mode="after")
    def well_defined(self) -> "AbHom":
        rows, cols = self.target.moduli, self.source.moduli
        if len(self.matrix) != len(rows) or any(len(r) != len(cols) for r in self.matrix):
            raise ValueError(f"matrix must be {len(rows)}x{len(cols)}")
        for i, di in enumerate(rows):
            for j, dj in enumerate(cols):
                m = self.matrix[i][j]
                if dj and not di and m:
                    raise ValueError(f"entry ({i},{j}): torsion cannot map into a free summand")
                if dj and di and (m * dj) % di:
                    raise ValueError(f"entry ({i},{j}): {di} does not divide {m}*{dj}")
        return self

    @classmethod
    def trusted(cls, source: AbGroup, target: AbGroup, matrix: Matrix) -> "AbHom":
        """Skip validation for matrices produced by the library itself."""
        return cls.model_construct(source=source, target=target, matrix=matrix)

    @classmethod
    def identity(cls, group: AbGroup) -> "AbHom":
        n = group.ngens
        return cls.trusted(group, group, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @classmethod
    def scalar(cls, group: AbGroup, k: int) -> "AbHom":
        n = group.ngens
        return cls(source=group, target=group, matrix=tuple(tuple(k if i == j else 0 for j in range(n)) for i in range(n)))

    @property
    def is_endomorphism(self) -> bool:
        return self.source == self.target

    @property
    def is_identity(self) -> bool:
        return self.is_endomorphism and all(
            x == int(i == j) for i, row in enumerate(self.matrix) for j, x in enumerate(row)
        )

    @property
    def free_block(self) -> Matrix:
        k = self.target.free_rank
        return tuple(row[: self.source.free_rank] for row in self.matrix[:k])

    @property
    def torsion_block(self) -> Matrix:
        k, l = self.target.free_rank, self.source.free_rank
        return tuple(row[l:] for row in self.matrix[k:])

    def __str__(self) -> str:
        return "[" + "; ".join(" ".join(map(str, row)) for row in self.matrix) + "]"
