import pytest

from nilact.algebra.abelian import ab_to_table
from nilact.algebra.grpcore import group_from_perms
from nilact.cli.catalog import default_catalog, parse_catalog
from nilact.models.abelian import AbGroup
from nilact.models.permutation import Permutation


def perm_group(degree: int, *cycles: str, name: str = ""):
    return group_from_perms(degree, [Permutation.parse(degree, c) for c in cycles], name=name)


@pytest.fixture(scope="session")
def catalog():
    return default_catalog()


@pytest.fixture(scope="session")
def S3():
    return perm_group(3, "(0 1)", "(0 1 2)", name="S3")


@pytest.fixture(scope="session")
def Q8():
    return perm_group(8, "(0 1 2 3)(4 5 6 7)", "(0 4 2 6)(1 7 3 5)", name="Q8")


@pytest.fixture(scope="session")
def D4():
    return perm_group(4, "(0 1 2 3)", "(0 2)", name="D4")


@pytest.fixture
def Z():
    """Table of the finite abelian group with the given torsion factors."""
    return lambda *factors: ab_to_table(AbGroup(torsion=factors))


@pytest.fixture
def small_catalog():
    text = "\n".join([
        "group C2 perm 2 : (0 1)",
        "group S3 perm 3 : (0 1) (0 1 2)",
        "abgroup Z4 : 4",
        "abgroup ZxZ4 : 0 4",
        "action x3-Z4 C2 on Z4 : 0->[3]",
        "action conj-S3 S3 on S3 : auto",
        "automorphisms cands-ZxZ4 on ZxZ4 : [1 0; 0 1], [1 0; 1 1], [1 0; 2 1]",
        "fixture note : somewhere : a cited value",
    ])
    return parse_catalog(text)
