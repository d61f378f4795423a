from fractions import Fraction as F
import random

import pytest

from amrenorm.extension import (DominationError, PartialFunction, bump_conclusions,
                                check_sup_bounds, extend_down, extend_range, extend_up,
                                partial_from, two_point_bump)
from amrenorm.generate import gen_structure, random_structure
from amrenorm.model import LatticeVector, check_consistent, expand
from amrenorm.verify import random_bump_config, random_partial


def test_extend_down_s0(s0):
    assert dict(extend_down(s0, partial_from(s0, {"p": 0, "q": 1}, 1, 1))) == \
        {"p": 0, "q": 1, "r": F(2, 3)}
    assert dict(extend_down(s0, partial_from(s0, {"p": 1, "q": 0}, 1, 1))) == \
        {"p": 1, "q": 0, "r": 0}


def test_extend_down_chain_u(chain_u):
    out = extend_down(chain_u, partial_from(chain_u, {"a": 1}, 1, 1))
    assert dict(out) == {"a": 1, "b": F(2, 3), "u": 0}
    assert check_sup_bounds(chain_u, partial_from(chain_u, {"a": 1}, 1, 1), out)


def test_extend_down_needs_level_one(s0):
    with pytest.raises(ValueError):
        extend_down(s0, partial_from(s0, {"r": 1}, 2, 2))


def test_extend_up_s0(s0):
    up = extend_up(s0, partial_from(s0, {"r": F(2, 3)}, 2, 2))
    assert isinstance(up, PartialFunction)
    assert (up.lo, up.hi) == (1, 2)
    assert (up["q"], up["p"]) == (1, 0)


def test_extend_up_zero_and_unlinked():
    rng = random.Random(2)
    s = random_structure(rng)
    while s.n_levels < 2:
        s = random_structure(rng)
    x = partial_from(s, {p: 0 for n in range(2, s.n_levels + 1) for p in s.level_points(n)},
                     2, s.n_levels)
    assert all(v == 0 for v in extend_up(s, x).values())


def test_extend_up_no_links():
    s = gen_structure(levels=2, cells=2, link_density=0.0, seed=4)
    up = extend_up(s, partial_from(s, {p: 5 for p in s.level_points(2)}, 2, 2))
    assert all(up[p] == 0 for p in s.level_points(1))


def test_extend_range_examples(s0):
    assert dict(extend_range(s0, partial_from(s0, {"r": F(2, 3)}, 2, 2))) == \
        {"p": 0, "q": 1, "r": F(2, 3)}
    full = expand(s0, LatticeVector({"p": 3, "q": -1}))
    assert extend_range(s0, partial_from(s0, dict(full), 1, 2)) == full
    zero = LatticeVector({"p": 0, "q": 0})
    out = extend_range(s0, partial_from(s0, {"r": 0}, 2, 2), dominator=zero)
    assert all(v == 0 for v in out.values())


def test_domination_violation_raises(s0):
    y = LatticeVector({"p": 1, "q": F(1, 2)})
    with pytest.raises(DominationError):
        extend_range(s0, partial_from(s0, {"r": F(2, 3)}, 2, 2), dominator=y)


def test_inconsistent_partial_rejected(s0):
    with pytest.raises(ValueError):
        extend_range(s0, partial_from(s0, {"p": 1, "q": 1, "r": 1}, 1, 2))


def test_partial_from_coverage(s0):
    with pytest.raises(ValueError):
        partial_from(s0, {"p": 1}, 1, 1)
    with pytest.raises(ValueError):
        partial_from(s0, {"p": 1, "q": 1}, 1, 3)


def test_random_extensions():
    rng = random.Random(11)
    for _ in range(150):
        s = random_structure(rng)
        x, _ = random_partial(s, rng)
        out = extend_range(s, x)
        assert check_consistent(s, out)
        assert all(out[p] == v for p, v in x.items())
        assert check_sup_bounds(s, x, out)
        xd, y = random_partial(s, rng, dominated=True)
        outd = extend_range(s, xd, dominator=y)
        ey = expand(s, y)
        assert all(0 <= outd[p] <= ey[p] for p in outd)


def test_two_point_bump_s0(s0):
    out = two_point_bump(s0, "p", "q", {"p"}, {"q"}, 1, 0)
    assert dict(out) == {"p": 1, "q": 0, "r": 0}
    zero = two_point_bump(s0, "p", "q", {"p"}, {"q"}, 0, 0)
    assert all(v == 0 for v in zero.values())


def test_two_point_bump_chain_u(chain_u):
    out = two_point_bump(chain_u, "a", "u", {"a"}, {"u"}, 1, 1)
    assert dict(out) == {"a": 1, "b": F(2, 3), "u": 1}
    assert bump_conclusions(chain_u, out, "a", "u", {"a"}, {"u"}, 1, 1) == []


def test_bump_conclusions_detects_violation(s0):
    bad = expand(s0, LatticeVector({"p": 1, "q": 1}))
    assert 2 in bump_conclusions(s0, bad, "p", "q", {"p"}, {"q"}, 1, 0)


def test_two_point_bump_argument_checks(s0, chain_u):
    with pytest.raises(ValueError):
        two_point_bump(s0, "p", "p", {"p"}, {"p"}, 1, 1)
    with pytest.raises(ValueError):
        two_point_bump(chain_u, "u", "a", {"u"}, {"a"}, 1, 1)
    with pytest.raises(ValueError):
        two_point_bump(s0, "p", "q", {"p"}, {"q"}, -1, 1)


def test_random_bumps():
    rng = random.Random(12)
    done = 0
    while done < 80:
        s = random_structure(rng)
        cfg = random_bump_config(s, rng)
        if cfg is None:
            continue
        out = two_point_bump(s, *cfg)
        assert bump_conclusions(s, out, *cfg) == []
        assert check_consistent(s, out)
        done += 1
