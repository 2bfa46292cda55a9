"""Shared corpus of small L-infinity algebras used across the test suite.

Each builder returns a fresh object so tests can mutate tables freely.
The same seven algebras ship as JSON with the command-line tool; the io
tests cross-check those files against these constructors.
"""

from fractions import Fraction

import pytest

from linfenv.algebras import DgLieAlgebra, LInfinityAlgebra

Q = Fraction


def build_abelian_odd():
    return DgLieAlgebra("abelian_odd", [("x", 1)], {})


def build_abelian_pair():
    return DgLieAlgebra("abelian_pair", [("x", 1), ("y", 2)], {})


def build_heisenberg():
    return DgLieAlgebra(
        "heisenberg",
        [("x", 1), ("y", 1), ("z", 2)],
        {2: {("x", "y"): {"z": Q(1)}}},
    )


def build_l3_example():
    return LInfinityAlgebra(
        "l3_example",
        [("x1", 1), ("x2", 1), ("x3", 1), ("w", 4)],
        {3: {("x1", "x2", "x3"): {"w": Q(1)}}},
    )


def build_free_nilpotent():
    return DgLieAlgebra(
        "free_nilpotent",
        [("x", 1), ("y", 2), ("z1", 2), ("z2", 3)],
        {2: {("x", "x"): {"z1": Q(1)}, ("x", "y"): {"z2": Q(1)}}},
    )


def build_acyclic_pair():
    return DgLieAlgebra(
        "acyclic_pair",
        [("x", 1), ("y", 1), ("z", 2), ("u", 3), ("v", 2)],
        {
            1: {("u",): {"v": Q(1)}},
            2: {("x", "y"): {"z": Q(1)}},
        },
    )


def build_cone_lie():
    return DgLieAlgebra(
        "cone_lie",
        [("x", 1), ("y", 2), ("z", 3)],
        {
            1: {("y",): {"x": Q(1)}},
            2: {("x", "y"): {"z": Q(1)}},
        },
    )


CORPUS_BUILDERS = {
    "abelian_odd": build_abelian_odd,
    "abelian_pair": build_abelian_pair,
    "heisenberg": build_heisenberg,
    "l3_example": build_l3_example,
    "free_nilpotent": build_free_nilpotent,
    "acyclic_pair": build_acyclic_pair,
    "cone_lie": build_cone_lie,
}

MINIMAL_NAMES = ["abelian_odd", "abelian_pair", "heisenberg", "l3_example",
                 "free_nilpotent"]
DG_LIE_NAMES = ["abelian_odd", "abelian_pair", "heisenberg", "free_nilpotent",
                "acyclic_pair", "cone_lie"]


def corpus():
    return {name: build() for name, build in CORPUS_BUILDERS.items()}


@pytest.fixture
def heisenberg():
    return build_heisenberg()


@pytest.fixture
def free_nilpotent():
    return build_free_nilpotent()


@pytest.fixture
def acyclic_pair():
    return build_acyclic_pair()


@pytest.fixture
def cone_lie():
    return build_cone_lie()


@pytest.fixture
def l3_example():
    return build_l3_example()
