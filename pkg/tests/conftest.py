from fractions import Fraction as F

import pytest

from amrenorm.generate import S0_WEIGHTS, s0_structure
from amrenorm.model import ISOLATED, PERFECT, BenyaminiStructure, Cell, Link
from amrenorm.renorm import RenormConstants, assign_weights, build_renorm


def isolated(cid, p):
    return Cell(cid, ISOLATED, [p])


@pytest.fixture
def s0():
    return s0_structure()


@pytest.fixture
def s0_consts():
    return RenormConstants(F(3, 2), F(11, 10))


@pytest.fixture
def s0_scheme(s0, s0_consts):
    return assign_weights(s0, s0_consts, overrides=S0_WEIGHTS)


@pytest.fixture
def s0_renorm(s0, s0_scheme, s0_consts):
    return build_renorm(s0, s0_scheme, s0_consts)


@pytest.fixture
def chain3():
    # a (level 1) -> b (level 2) -> c (level 3)
    return BenyaminiStructure(F(3, 2), [[isolated("ca", "a")], [isolated("cb", "b")],
                                        [isolated("cc", "c")]],
                              [Link(1, 2, [("a", "b")]), Link(2, 3, [("b", "c")])])


@pytest.fixture
def chain_u():
    # a (level 1) -> b (level 2), plus a free u on level 2
    return BenyaminiStructure(F(3, 2), [[isolated("ca", "a")],
                                        [isolated("cb", "b"), isolated("cu", "u")]],
                              [Link(1, 2, [("a", "b")])])


@pytest.fixture
def s1():
    return BenyaminiStructure(F(3, 2), [[Cell("k", PERFECT, ["x", "y", "z"])]], [])
