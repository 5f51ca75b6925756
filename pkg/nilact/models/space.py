from pydantic import BaseModel, ConfigDict, Field

from .abelian import AbGroup


class EMSpace(BaseModel):
    """
    An Eilenberg-MacLane space K(A, n), n >= 2. Its only homotopy group is
    pi_n = A, and its self-equivalences are modelled by Aut(A).
    """

    model_config = ConfigDict(frozen=True)

    coeff: AbGroup
    degree: int = Field(2, ge=2)

    def homotopy(self, i: int) -> AbGroup:
        return self.coeff if i == self.degree else AbGroup()

    @property
    def label(self) -> str:
        return f"K({self.coeff.label},{self.degree})"

    def __str__(self) -> str:
        return self.label


class CoeffHomotopy(BaseModel):
    """pi_i(X; Z/p) split as Hom(Z/p, pi_i) + Ext(Z/p, pi_{i+1})."""

    model_config = ConfigDict(frozen=True)

    degree: int
    prime: int
    hom_part: AbGroup
    ext_part: AbGroup

    @property
    def total(self) -> AbGroup:
        return AbGroup(
            free_rank=self.hom_part.free_rank + self.ext_part.free_rank,
            torsion=self.hom_part.torsion + self.ext_part.torsion,
        )

    @property
    def is_trivial(self) -> bool:
        return self.hom_part.is_trivial and self.ext_part.is_trivial
