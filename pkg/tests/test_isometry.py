from fractions import Fraction as F
import math
import random

import pytest

from amrenorm.generate import CONSTANT_PAIRS, gen_structure, random_atomic_structure
from amrenorm.isometry import (IsometryCandidate, SearchBoundError, candidate,
                               enumerate_isometries, forced_weights, identity, is_group,
                               is_isometry, norms_equal, preserves_joins, pullback)
from amrenorm.model import LatticeVector
from amrenorm.renorm import (NormSpec, OctagonParams, RenormConstants, assign_weights,
                             base_norm_spec, build_renorm, weighted_sup_spec)


def octagon_spec(c, r):
    p = OctagonParams(c, r)
    return NormSpec(("x", "y"), [[1, 0], [0, 1], [p.a, p.b]])


def test_forced_weights(s0_renorm):
    w = forced_weights(s0_renorm, {"p": "p", "q": "q"})
    assert set(w.values()) == {1}
    w = forced_weights(s0_renorm, {"p": "q", "q": "p"})
    assert w["p"] == F(41, 42)


def test_forced_weights_weighted_sup(s1):
    consts = RenormConstants(F(3, 2), F(11, 10))
    scheme = assign_weights(s1, consts)
    spec = weighted_sup_spec(s1, scheme)
    sigma = {"x": "y", "y": "z", "z": "x"}
    w = forced_weights(spec, sigma)
    assert all(w[t] == scheme.mu(sigma[t]) / scheme.mu(t) for t in sigma)


def test_norms_equal(s0, s0_scheme, s0_renorm):
    assert norms_equal(s0_renorm, s0_renorm)
    ws = weighted_sup_spec(s0, s0_scheme)
    assert not norms_equal(ws, s0_renorm)
    x = {"p": F(20, 21), "q": F(40, 41)}
    assert ws.norm(x) == 1 and s0_renorm.norm(x) > 1
    assert not norms_equal(octagon_spec(F(11, 10), 1), octagon_spec(F(11, 10), 2))


def test_norms_equal_redundant_functional():
    a = NormSpec(("x", "y"), [[1, 0], [0, 1]])
    b = NormSpec(("x", "y"), [[1, 0], [0, 1], [F(1, 2), F(1, 2)]])
    assert norms_equal(a, b)


def test_s0_groups(s0, s0_scheme, s0_renorm):
    assert enumerate_isometries(s0_renorm) == [identity(("p", "q"))]
    g = enumerate_isometries(weighted_sup_spec(s0, s0_scheme))
    assert len(g) == 2
    swap = g[1]
    assert swap.sigma_map == {"p": "q", "q": "p"}
    assert swap.weight_map == {"p": F(41, 42), "q": F(42, 41)}


def test_one_point():
    s = gen_structure(levels=1, cells=1, seed=1)
    consts = RenormConstants(F(3, 2), F(11, 10))
    spec = build_renorm(s, assign_weights(s, consts), consts)
    assert enumerate_isometries(spec) == [identity(s.free)]


def test_search_bound():
    spec = NormSpec([f"t{i}" for i in range(5)], [[int(i == j) for j in range(5)] for i in range(5)])
    with pytest.raises(SearchBoundError):
        enumerate_isometries(spec, max_points=4)


def test_pruned_matches_unpruned():
    rng = random.Random(2)
    for _ in range(15):
        C, c = rng.choice(CONSTANT_PAIRS)
        s = random_atomic_structure(rng, max_free=4, C=C)
        consts = RenormConstants(C, c)
        for spec in (build_renorm(s, assign_weights(s, consts), consts), base_norm_spec(s)):
            assert enumerate_isometries(spec) == enumerate_isometries(spec, prune=False)


def test_brute_force_oracle_exhaustive(s0_renorm):
    # grid in normalized coordinates x = (alpha / mu(p), beta / mu(q)), which
    # covers the narrow cone where the octagon facet is active
    mu = s0_renorm.mu
    grid = [LatticeVector({"p": F(i, 40) / mu["p"], "q": F(j, 40) / mu["q"]})
            for i in range(-80, 81, 3) for j in range(-80, 81, 7)]
    grid += [LatticeVector({"p": 1 / mu["p"], "q": (1 + F(k, 400)) / mu["q"]}) for k in range(-20, 21)]
    for sigma in ({"p": "p", "q": "q"}, {"p": "q", "q": "p"}):
        cand = candidate(s0_renorm, sigma)
        sampled = all(s0_renorm.norm(cand.apply(x)) == s0_renorm.norm(x) for x in grid)
        assert sampled == is_isometry(s0_renorm, cand)


def test_sup_norm_group_is_symmetric():
    for n in range(1, 6):
        spec = NormSpec([f"t{i}" for i in range(n)], [[int(i == j) for j in range(n)] for i in range(n)])
        g = enumerate_isometries(spec)
        assert len(g) == math.factorial(n)
        assert is_group(g, spec.points)


def test_workers_agree():
    spec = NormSpec([f"t{i}" for i in range(4)], [[int(i == j) for j in range(4)] for i in range(4)])
    assert enumerate_isometries(spec, workers=2) == enumerate_isometries(spec)


def test_candidate_algebra():
    a = IsometryCandidate((("x", "y"), ("y", "x")), (("x", F(2)), ("y", F(1, 3))))
    x = LatticeVector({"x": 5, "y": -7})
    assert a.inverse().apply(a.apply(x)) == x
    assert a.compose(a.inverse()).is_identity()
    assert a.compose(a).apply(x) == a.apply(a.apply(x))
    with pytest.raises(ValueError):
        IsometryCandidate((("x", "x"),), (("x", F(0)),))
    assert preserves_joins(a, x, LatticeVector({"x": 1, "y": 1}))


def test_pullback_norm():
    spec = NormSpec(("x", "y"), [[1, 2], [3, 0]])
    cand = IsometryCandidate((("x", "y"), ("y", "x")), (("x", F(1)), ("y", F(1))))
    pb = pullback(spec, cand)
    x = {"x": F(1, 2), "y": 3}
    assert pb.norm(x) == spec.norm(cand.apply(LatticeVector(x)))
