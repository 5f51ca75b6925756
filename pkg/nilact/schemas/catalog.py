from dataclasses import dataclass
from enum import Enum
from typing import Any, Iterator, List, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..algebra.abelian import AutomorphismGroup
from ..core.errors import CatalogValidationError
from ..models.abelian import AbGroup, AbHom
from ..models.action import Action
from ..models.group import GroupTable
from ..models.permutation import Permutation


class EntryKind(str, Enum):
    PERM_GROUP = "perm-group"
    AB_GROUP = "ab-group"
    ACTION = "action"
    AUTOMORPHISMS = "automorphisms"
    FIXTURE = "fixture"


class Provenance(str, Enum):
    COMPUTED = "computed"
    PAPER_SOURCED = "paper-sourced"


@dataclass(frozen=True, eq=False)
class PermGroupBody:
    degree: int
    generators: tuple[Permutation, ...]
    table: GroupTable

    def generator_index(self, k: int) -> int:
        """Table index of the k-th listed generator."""
        return self.table.labels.index(str(self.generators[k]))


@dataclass(frozen=True, eq=False)
class ActionBody:
    action: Action
    # set for `aut` and `matrices` actors: the actor as a group of matrices
    automorphisms: Optional[AutomorphismGroup] = None


@dataclass(frozen=True, eq=False)
class CandidateBody:
    group: AbGroup
    matrices: tuple[AbHom, ...]


class CatalogEntry(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    name: str
    kind: EntryKind
    line: int = 0
    text: str = ""
    summary: str = ""
    provenance: Provenance = Provenance.COMPUTED
    citation: Optional[str] = None
    # Built object; never serialized
    body: Any = Field(default=None, exclude=True)

    @model_validator(mode="after")
    def sourced_entries_are_fixtures(self) -> "CatalogEntry":
        if self.provenance is Provenance.PAPER_SOURCED and not self.citation:
            raise ValueError("paper-sourced entries need a citation")
        if (self.kind is EntryKind.FIXTURE) != (self.provenance is Provenance.PAPER_SOURCED):
            raise ValueError("only fixtures are paper-sourced, and fixtures are never computed")
        return self

    @property
    def is_computed(self) -> bool:
        return self.provenance is Provenance.COMPUTED


class Catalog(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    entries: List[CatalogEntry] = []

    def __iter__(self) -> Iterator[CatalogEntry]:  # type: ignore[override]
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, name: str) -> bool:
        return any(e.name == name for e in self.entries)

    def get(self, name: str) -> CatalogEntry:
        for entry in self.entries:
            if entry.name == name:
                return entry
        raise CatalogValidationError(name, "no such entry")

    def of_kind(self, *kinds: EntryKind) -> list[CatalogEntry]:
        return [e for e in self.entries if e.kind in kinds]

    def computed(self) -> list[CatalogEntry]:
        return [e for e in self.entries if e.is_computed]
