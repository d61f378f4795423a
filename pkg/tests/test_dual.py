from fractions import Fraction as F
import random

import pytest

from amrenorm.dual import (ROOT_FIRST, Functional, action, dual_norm_base, dual_norm_renorm,
                           is_positive_functional, negativity_witness, operator_norm,
                           point_mass, reduce_measure, total_variation)
from amrenorm.generate import CONSTANT_PAIRS, random_structure, random_vector
from amrenorm.model import LatticeVector
from amrenorm.renorm import RenormConstants, assign_weights, base_norm_spec, build_renorm
from amrenorm.verify import random_functional


def test_reduce_point_mass_at_copy(s0):
    red = reduce_measure(s0, point_mass("r"))
    assert dict(red) == {"p": 0, "q": F(2, 3)}
    e_q = LatticeVector({"p": 0, "q": 1})
    assert action(s0, point_mass("r"), e_q) == action(s0, red, e_q) == F(2, 3)


def test_reduce_fixed_point(s0):
    f = Functional({"p": 3, "q": F(-1, 2)})
    assert dict(reduce_measure(s0, f)) == dict(f)


def test_reduce_cancels(s0):
    f = Functional({"r": 1, "q": F(-2, 3)})
    assert all(v == 0 for v in reduce_measure(s0, f).values())


def test_dual_norm_base_examples(s0):
    assert dual_norm_base(s0, point_mass("p")) == 1
    assert dual_norm_base(s0, Functional({"p": F(1, 2), "q": F(-1, 2)})) == 1
    assert dual_norm_base(s0, Functional({})) == 0
    with pytest.raises(ValueError):
        dual_norm_base(s0, point_mass("r"))


def test_dual_norm_renorm_examples(s0_renorm):
    assert dual_norm_renorm(s0_renorm, point_mass("p", F(21, 20))) == 1
    assert dual_norm_renorm(s0_renorm, Functional({})) == 0
    assert dual_norm_renorm(s0_renorm, point_mass("p")) == F(20, 21)


def test_operator_norm_brute_force_oracle(s0_renorm):
    # sup of f over the vertices of a fine grid on the unit ball boundary
    f = Functional({"p": F(3, 4), "q": F(-1, 3)})
    val = operator_norm(s0_renorm, f)
    best = F(0)
    for i in range(-40, 41):
        for j in range(-40, 41):
            x = {"p": F(i, 40), "q": F(j, 40)}
            n = s0_renorm.norm(x)
            if n:
                best = max(best, (f["p"] * x["p"] + f["q"] * x["q"]) / n)
    assert best <= val
    assert val - best < F(1, 50)


def test_random_reductions():
    rng = random.Random(3)
    for _ in range(60):
        s = random_structure(rng)
        f = random_functional(s, rng)
        red = reduce_measure(s, f, rng=rng)
        for _ in range(20):
            x = random_vector(s, rng)
            assert action(s, f, x) == action(s, red, x)
        assert total_variation(red) <= total_variation(f)
        assert reduce_measure(s, f, order=ROOT_FIRST, check=False) == red
        assert dual_norm_base(s, red) == operator_norm(base_norm_spec(s), red)


def test_point_masses_random():
    rng = random.Random(5)
    for _ in range(20):
        C, c = rng.choice(CONSTANT_PAIRS)
        s = random_structure(rng, C=C)
        consts = RenormConstants(C, c)
        spec = build_renorm(s, assign_weights(s, consts), consts)
        for t in s.free:
            assert dual_norm_renorm(spec, point_mass(t, spec.mu[t])) == 1


def test_positivity_and_witness(s0):
    assert is_positive_functional(point_mass("p"))
    f = Functional({"p": 1, "q": -1})
    w = negativity_witness(s0, f)
    assert w is not None and w.is_positive() and action(s0, f, w) < 0
    assert negativity_witness(s0, point_mass("q")) is None


def test_unknown_points_rejected(s0, s0_renorm):
    with pytest.raises(ValueError):
        reduce_measure(s0, point_mass("zz"))
    with pytest.raises(ValueError):
        dual_norm_renorm(s0_renorm, point_mass("r"))
