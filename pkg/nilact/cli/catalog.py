"""
Line-oriented catalog format.

    # comment
    group <name> perm <degree> : <gen> <gen> ...        gens in 0-based cycle form, e.g. (0 1)(2 3)
    abgroup <name> : <d1> <d2> ...                      0 stands for a free summand Z
    abgroups up to <n>                                  every abelian group of order <= n, named canonically
    action <name> <actor> on <target> : <images>
    automorphisms <name> on <abgroup> : M1, M2, ...
    fixture <name> : <citation> : <prose>

<images> is `auto` (conjugation, or all of Aut(A) for the `aut` actor),
`trivial`, `kernel <p>` (kernel of Aut(A) -> Aut(A (x) Z/p), `aut` actor),
a list `k->(cycles)` / `k->[a b; c d]` assigning the k-th listed generator
of the actor an automorphism of the target, or for the `matrices` actor the
list of generating matrices.
"""
import itertools
import logging
import re
from functools import lru_cache
from pathlib import Path
from typing import Callable, Iterator, Optional

from pydantic import ValidationError
from sympy import factorint
from sympy.utilities.iterables import partitions

from ..algebra.abelian import ab_to_table, aut_group, hom_permutation, matrix_group, require_automorphism, tensor_kernel
from ..algebra.grpcore import group_from_perms
from ..core.arith import require_prime
from ..core.errors import CatalogValidationError, InvalidPermutation, NilactError, ParseError
from ..models.abelian import AbGroup, AbHom
from ..models.action import Action
from ..models.group import GroupTable
from ..models.permutation import Permutation
from ..schemas.catalog import (
    ActionBody,
    CandidateBody,
    Catalog,
    CatalogEntry,
    EntryKind,
    PermGroupBody,
    Provenance,
)

logger = logging.getLogger(__name__)

DEFAULT_CATALOG = Path(__file__).parent / "data" / "default.catalog"

_NAME = r"[A-Za-z0-9_^.+\-]+"
_HEADERS = {
    "group": re.compile(rf"group\s+(?P<name>{_NAME})\s+perm\s+(?P<degree>\d+)\s*:"),
    "abgroup": re.compile(rf"abgroup\s+(?P<name>{_NAME})\s*:"),
    "abgroups": re.compile(r"abgroups\s+up\s+to\s+(?P<limit>\d+)\s*$"),
    "action": re.compile(rf"action\s+(?P<name>{_NAME})\s+(?P<actor>{_NAME})\s+on\s+(?P<target>{_NAME})\s*:"),
    "automorphisms": re.compile(rf"automorphisms\s+(?P<name>{_NAME})\s+on\s+(?P<target>{_NAME})\s*:"),
    "fixture": re.compile(rf"fixture\s+(?P<name>{_NAME})\s*:(?P<citation>[^:]*):"),
}
_PERM_TOKEN = re.compile(r"(?:\([^()]*\))+")
_MATRIX = re.compile(r"\[([^\[\]]*)\]")
_IMAGE = re.compile(r"(\d+)\s*->\s*((?:\([^()]*\))+|\[[^\[\]]*\])")


def _leftover(text: str, pattern: re.Pattern, separators: str = " \t,") -> Optional[int]:
    """Offset of the first character outside every match of `pattern` and the separators."""
    pos = 0
    for m in [*pattern.finditer(text), None]:
        end = len(text) if m is None else m.start()
        gap = text[pos:end]
        if gap.strip(separators):
            return pos + len(gap) - len(gap.lstrip(separators))
        pos = end if m is None else m.end()
    return None


def _parse_matrix(body: str, line: int, column: int) -> tuple[tuple[int, ...], ...]:
    rows = []
    for row in body.split(";"):
        if not row.strip():
            continue
        try:
            rows.append(tuple(int(tok) for tok in row.split()))
        except ValueError:
            raise ParseError(f"non-integer matrix entry in [{body}]", line, column)
    return tuple(rows)


def _parse_matrices(text: str, line: int, offset: int) -> list[tuple[tuple[int, ...], ...]]:
    bad = _leftover(text, _MATRIX)
    if bad is not None:
        raise ParseError("expected a comma-separated list of [a b; c d] matrices", line, offset + bad + 1)
    return [_parse_matrix(m.group(1), line, offset + m.start() + 1) for m in _MATRIX.finditer(text)]


class _Builder:
    """Accumulates entries and resolves names against the ones already read."""

    def __init__(self):
        self.entries: list[CatalogEntry] = []
        self.names: dict[str, CatalogEntry] = {}

    def add(self, entry: CatalogEntry, replace: bool = True) -> None:
        if entry.name in self.names:
            if not replace:
                logger.debug("keeping explicit entry %s over the generated one", entry.name)
                return
            raise CatalogValidationError(entry.name, "name already defined")
        self.names[entry.name] = entry
        self.entries.append(entry)

    def lookup(self, owner: str, name: str, *kinds: EntryKind) -> CatalogEntry:
        entry = self.names.get(name)
        if entry is None:
            raise CatalogValidationError(owner, f"unknown entry {name!r}")
        if entry.kind not in kinds:
            allowed = " or ".join(k.value for k in kinds)
            raise CatalogValidationError(owner, f"{name!r} is a {entry.kind.value}, expected {allowed}")
        return entry

    def table(self, owner: str, name: str) -> GroupTable:
        entry = self.lookup(owner, name, EntryKind.PERM_GROUP, EntryKind.AB_GROUP)
        if entry.kind is EntryKind.PERM_GROUP:
            return entry.body.table
        return ab_to_table(entry.body)

    def abgroup(self, owner: str, name: str) -> AbGroup:
        return self.lookup(owner, name, EntryKind.AB_GROUP).body


def _parse_group(b: _Builder, m: re.Match, rest: str, line: int, offset: int, text: str) -> None:
    name, degree = m.group("name"), int(m.group("degree"))
    bad = _leftover(rest, _PERM_TOKEN, " \t")
    if bad is not None:
        raise ParseError("expected generators in cycle form such as (0 1 2)", line, offset + bad + 1)
    gens = []
    for tok in _PERM_TOKEN.finditer(rest):
        try:
            gens.append(Permutation.parse(degree, tok.group(0)))
        except InvalidPermutation as exc:
            raise ParseError(exc.detail, line, offset + tok.start() + 1)
    table = group_from_perms(degree, gens, name=name)
    b.add(CatalogEntry(
        name=name, kind=EntryKind.PERM_GROUP, line=line, text=text,
        summary=f"order {table.order} on {degree} points",
        body=PermGroupBody(degree, tuple(gens), table),
    ))


def _ab_entry(name: str, A: AbGroup, line: int, text: str) -> CatalogEntry:
    summary = f"order {A.order}" if A.is_finite else f"free rank {A.free_rank}, torsion {A.torsion_order}"
    return CatalogEntry(name=name, kind=EntryKind.AB_GROUP, line=line, text=text, summary=summary, body=A)


def _parse_abgroup(b: _Builder, m: re.Match, rest: str, line: int, offset: int, text: str) -> None:
    factors = []
    for tok in re.finditer(r"\S+", rest):
        try:
            d = int(tok.group(0))
        except ValueError:
            raise ParseError(f"factor {tok.group(0)!r} is not an integer", line, offset + tok.start() + 1)
        if d < 0:
            raise ParseError(f"factor {d} is negative", line, offset + tok.start() + 1)
        factors.append(d)
    b.add(_ab_entry(m.group("name"), AbGroup.parse_factors(factors), line, text))


def abelian_groups(limit: int) -> Iterator[AbGroup]:
    """Every abelian group of order <= limit, by order, then by primary factors."""
    for n in range(1, limit + 1):
        per_prime = []
        for p, k in sorted(factorint(n).items()):
            shapes = []
            for parts in partitions(k):
                shapes.append(tuple(p ** part for part, mult in sorted(parts.items(), reverse=True) for _ in range(mult)))
            per_prime.append(shapes)
        for choice in itertools.product(*per_prime):
            yield AbGroup(torsion=tuple(d for shape in choice for d in shape))


def _parse_abgroups(b: _Builder, m: re.Match, rest: str, line: int, offset: int, text: str) -> None:
    for A in abelian_groups(int(m.group("limit"))):
        b.add(_ab_entry(A.label, A, line, f"abgroup {A.label} : {' '.join(map(str, A.torsion))}"), replace=False)


def _image_array(b: _Builder, owner: str, target_name: str, target: GroupTable, image: str, line: int, column: int):
    if image.startswith("["):
        A = b.abgroup(owner, target_name)
        f = AbHom(source=A, target=A, matrix=_parse_matrix(image[1:-1], line, column))
        return hom_permutation(require_automorphism(f))
    try:
        return Permutation.parse(target.order, image)
    except InvalidPermutation as exc:
        raise ParseError(exc.detail, line, column)


def _actor_generator(b: _Builder, owner: str, actor_name: str, k: int) -> int:
    entry = b.lookup(owner, actor_name, EntryKind.PERM_GROUP, EntryKind.AB_GROUP)
    if entry.kind is EntryKind.PERM_GROUP:
        if k >= len(entry.body.generators):
            raise CatalogValidationError(owner, f"{actor_name} has no generator {k}")
        return entry.body.generator_index(k)
    gens = ab_to_table(entry.body).generators
    if k >= len(gens):
        raise CatalogValidationError(owner, f"{actor_name} has no generator {k}")
    return gens[k]


def _parse_action(b: _Builder, m: re.Match, rest: str, line: int, offset: int, text: str) -> None:
    name, actor_name, target_name = m.group("name"), m.group("actor"), m.group("target")
    spec = rest.strip()
    automorphisms = None
    if actor_name in ("aut", "matrices"):
        A = b.abgroup(name, target_name)
        if actor_name == "matrices":
            homs = [AbHom(source=A, target=A, matrix=rows) for rows in _parse_matrices(rest, line, offset)]
            automorphisms = matrix_group(A, homs, name=name)
        elif spec == "auto":
            automorphisms = aut_group(A)
        elif re.fullmatch(r"kernel\s+\d+", spec):
            automorphisms = tensor_kernel(A, require_prime(int(spec.split()[1])))
        else:
            raise ParseError("the aut actor takes `auto` or `kernel <p>`", line, offset + rest.find(spec) + 1)
        action = automorphisms.action(name)
    else:
        target = b.table(name, target_name)
        actor = b.table(name, actor_name)
        if spec == "auto":
            if actor_name != target_name:
                raise CatalogValidationError(name, "`auto` (conjugation) needs the actor to be the target")
            action = Action.conjugation(actor, name)
        elif spec == "trivial":
            action = Action.trivial(actor, target, name)
        else:
            bad = _leftover(rest, _IMAGE)
            if bad is not None or not spec:
                raise ParseError("expected `k->(cycles)` or `k->[matrix]` images", line, offset + (bad or 0) + 1)
            images = {}
            for im in _IMAGE.finditer(rest):
                g = _actor_generator(b, name, actor_name, int(im.group(1)))
                if g != actor.identity:
                    images[g] = _image_array(b, name, target_name, target, im.group(2), line, offset + im.start(2) + 1)
            action = Action.from_generator_images(actor, target, images, name)
    b.add(CatalogEntry(
        name=name, kind=EntryKind.ACTION, line=line, text=text,
        summary=f"|G|={action.actor.order} on |A|={action.target.order}",
        body=ActionBody(action, automorphisms),
    ))


def _parse_automorphisms(b: _Builder, m: re.Match, rest: str, line: int, offset: int, text: str) -> None:
    name = m.group("name")
    A = b.abgroup(name, m.group("target"))
    homs = []
    for rows in _parse_matrices(rest, line, offset):
        f = AbHom(source=A, target=A, matrix=rows)
        homs.append(require_automorphism(f))
    b.add(CatalogEntry(
        name=name, kind=EntryKind.AUTOMORPHISMS, line=line, text=text,
        summary=f"{len(homs)} automorphisms of {A.label}",
        body=CandidateBody(A, tuple(homs)),
    ))


def _parse_fixture(b: _Builder, m: re.Match, rest: str, line: int, offset: int, text: str) -> None:
    citation = m.group("citation").strip()
    if not citation:
        raise ParseError("fixtures need a citation", line, offset - (m.end() - m.start("citation")) + 1)
    b.add(CatalogEntry(
        name=m.group("name"), kind=EntryKind.FIXTURE, line=line, text=text,
        summary=citation, provenance=Provenance.PAPER_SOURCED, citation=citation, body=rest.strip(),
    ))


_PARSERS: dict[str, Callable] = {
    "group": _parse_group,
    "abgroup": _parse_abgroup,
    "abgroups": _parse_abgroups,
    "action": _parse_action,
    "automorphisms": _parse_automorphisms,
    "fixture": _parse_fixture,
}


def parse_catalog(text: str) -> Catalog:
    """
    Parse and fully build every entry. Syntax problems raise ParseError
    with the line and column; entries that parse but violate an invariant
    (unknown names, non-automorphisms, broken relations, caps) raise
    CatalogValidationError naming the entry.
    """
    b = _Builder()
    for line, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        indent = len(raw) - len(raw.lstrip())
        keyword = stripped.split()[0]
        header = _HEADERS.get(keyword)
        if header is None:
            raise ParseError(f"unknown entry kind {keyword!r}", line, indent + 1)
        m = header.match(stripped)
        if m is None:
            column = indent + len(keyword) + 2
            if keyword != "abgroups" and ":" not in stripped:
                column = len(raw) + 1
            raise ParseError(f"malformed {keyword} entry", line, column)
        rest = stripped[m.end():]
        name = m.groupdict().get("name") or keyword
        try:
            _PARSERS[keyword](b, m, rest, line, indent + m.end(), stripped)
        except ValidationError as exc:
            raise CatalogValidationError(name, exc.errors()[0]["msg"])
        except (ParseError, CatalogValidationError):
            raise
        except NilactError as exc:
            raise CatalogValidationError(name, exc.detail)
    logger.debug("catalog: %d entries", len(b.entries))
    return Catalog(entries=b.entries)


def load_catalog(path: Optional[Path] = None) -> Catalog:
    if path is None:
        return default_catalog()
    return parse_catalog(Path(path).read_text())


@lru_cache(maxsize=1)
def default_catalog() -> Catalog:
    return parse_catalog(DEFAULT_CATALOG.read_text())
