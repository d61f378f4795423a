"""Exhaustive search for the lattice isometries of a polyhedral lattice norm.

On ``R^K'`` with the coordinatewise order every lattice automorphism is a
weighted permutation ``(Tx)(t) = w(t) * x(sigma(t))`` with ``w > 0``. For a
given ``sigma`` the weights are forced by the norms of coordinate vectors,
so the search runs over permutations only. Candidates are accepted or
rejected exactly, by LP dominance between the norm and its pull-back.
"""
import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .lp import UnboundedLP, maximize
from .model import LatticeVector
from .rational import Fraction
from .renorm import NormSpec


class SearchBoundError(ValueError):
    pass


@dataclass(frozen=True)
class IsometryCandidate:
    """Weighted permutation ``(Tx)(t) = weights[t] * x[sigma[t]]``."""

    sigma: tuple    # ((t, sigma(t)), ...) in point order
    weights: tuple  # ((t, w(t)), ...)

    def __post_init__(self):
        if any(w <= 0 for _, w in self.weights):
            raise ValueError("weights must be strictly positive")

    @property
    def sigma_map(self):
        return dict(self.sigma)

    @property
    def weight_map(self):
        return dict(self.weights)

    def apply(self, x):
        sig, w = self.sigma_map, self.weight_map
        return LatticeVector({t: w[t] * x[sig[t]] for t in sig})

    __call__ = apply

    def compose(self, other):
        """The map ``self o other`` (apply ``other`` first)."""
        s1, w1 = self.sigma_map, self.weight_map
        s2, w2 = other.sigma_map, other.weight_map
        pts = [t for t, _ in self.sigma]
        # (S T x)(t) = w1(t) * (T x)(s1 t) = w1(t) w2(s1 t) x(s2 s1 t)
        return IsometryCandidate(tuple((t, s2[s1[t]]) for t in pts),
                                 tuple((t, w1[t] * w2[s1[t]]) for t in pts))

    def inverse(self):
        sig, w = self.sigma_map, self.weight_map
        inv = {v: k for k, v in sig.items()}
        pts = [t for t, _ in self.sigma]
        return IsometryCandidate(tuple((u, inv[u]) for u in pts),
                                 tuple((u, 1 / w[inv[u]]) for u in pts))

    def is_identity(self):
        return all(t == s for t, s in self.sigma) and all(w == 1 for _, w in self.weights)


def identity(points):
    return IsometryCandidate(tuple((t, t) for t in points), tuple((t, Fraction(1)) for t in points))


def forced_weights(spec, sigma):
    """Weights making ``T`` preserve the norm of every coordinate vector.

    ``w(t) = |||e_sigma(t)||| / |||e_t|||``; returns None when a coordinate
    norm vanishes.
    """
    units = {p: spec.norm_of_unit(p) for p in spec.points}
    if any(v == 0 for v in units.values()):
        return None
    return {t: units[sigma[t]] / units[t] for t in spec.points}


def candidate(spec, sigma):
    w = forced_weights(spec, sigma)
    if w is None:
        return None
    return IsometryCandidate(tuple((t, sigma[t]) for t in spec.points),
                             tuple((t, w[t]) for t in spec.points))


def pullback(spec, cand):
    """The norm ``x -> spec(T x)`` as a NormSpec."""
    sig, w = cand.sigma_map, cand.weight_map
    index = {p: i for i, p in enumerate(spec.points)}
    rows = []
    for row in spec.functionals:
        new = [Fraction(0)] * len(spec.points)
        for t in spec.points:
            new[index[sig[t]]] = row[index[t]] * w[t]
        rows.append(new)
    return NormSpec(spec.points, rows, mu=spec.mu, kind=spec.kind)


def _aligned(spec, points):
    if spec.points == tuple(points):
        return spec
    if set(spec.points) != set(points):
        raise ValueError("norms live on different point sets")
    idx = [spec.points.index(p) for p in points]
    return NormSpec(points, [[row[i] for i in idx] for row in spec.functionals],
                    mu=spec.mu, kind=spec.kind)


def _covered(f, spec):
    """True iff ``f(x) <= 1`` on the unit ball of ``spec``."""
    if any(all(a <= b for a, b in zip(f, g)) for g in spec.functionals):
        return True
    try:
        value, _ = maximize(list(f), [list(g) for g in spec.functionals],
                            [Fraction(1)] * len(spec.functionals))
    except UnboundedLP:
        return False
    return value <= 1


def _probes(spec):
    units = [spec.norm_of_unit(p) for p in spec.points]
    d = len(units)
    if any(u == 0 for u in units):
        return []
    out = []
    for i, j in itertools.combinations(range(d), 2):
        v = [Fraction(0)] * d
        v[i], v[j] = 1 / units[i], 1 / units[j]
        out.append(v)
    out.append([1 / u for u in units])
    return out


def norms_equal(spec1, spec2):
    """Exact test that two absolute polyhedral norms coincide."""
    spec2 = _aligned(spec2, spec1.points)
    pts = spec1.points
    for p in pts:
        if spec1.norm_of_unit(p) != spec2.norm_of_unit(p):
            return False
    for v in _probes(spec1):
        x = dict(zip(pts, v))
        if spec1.norm(x) != spec2.norm(x):
            return False
    return (all(_covered(f, spec2) for f in spec1.functionals)
            and all(_covered(g, spec1) for g in spec2.functionals))


def is_isometry(spec, cand):
    return norms_equal(spec, pullback(spec, cand))


class _PairOracle:
    """Caches exact equality of two-dimensional sections under ``sigma``."""

    def __init__(self, spec):
        self.spec = spec
        self.units = {p: spec.norm_of_unit(p) for p in spec.points}
        self.cache = {}
        self.sections = {}

    def _section(self, a, b):
        key = (a, b)
        if key not in self.sections:
            self.sections[key] = self.spec.section((a, b))
        return self.sections[key]

    def ok(self, t1, t2, s1, s2):
        key = (t1, t2, s1, s2)
        if key not in self.cache:
            src = self._section(t1, t2)
            w1 = self.units[s1] / self.units[t1]
            w2 = self.units[s2] / self.units[t2]
            pulled = NormSpec((s1, s2), [(f1 * w1, f2 * w2) for f1, f2 in src.functionals],
                              mu={s1: 1, s2: 1})
            self.cache[key] = norms_equal(pulled, self._section(s1, s2))
        return self.cache[key]


def _search(spec, prune, first=None):
    pts = spec.points
    if any(spec.norm_of_unit(p) == 0 for p in pts):
        return []
    if not prune:
        perms = itertools.permutations(pts)
        if first is not None:
            perms = (p for p in perms if p[0] == first)
        return [dict(zip(pts, perm)) for perm in perms]
    oracle = _PairOracle(spec)
    found = []
    assign = {}
    used = set()

    def dfs(k):
        if k == len(pts):
            found.append(dict(assign))
            return
        t = pts[k]
        choices = [first] if (k == 0 and first is not None) else pts
        for s in choices:
            if s in used:
                continue
            if all(oracle.ok(pts[i], t, assign[pts[i]], s) for i in range(k)):
                assign[t] = s
                used.add(s)
                dfs(k + 1)
                used.discard(s)
                del assign[t]

    dfs(0)
    return found


def _branch(args):
    spec, prune, first = args
    survivors = _search(spec, prune, first)
    out = []
    for sigma in survivors:
        cand = candidate(spec, sigma)
        if cand is not None and is_isometry(spec, cand):
            out.append(cand)
    return out


def enumerate_isometries(spec, max_points=8, prune=True, workers=1):
    """All lattice isometries of ``(R^points, spec)``.

    ``prune`` discards partial permutations whose two-dimensional coordinate
    sections already fail to match; survivors are checked in full. The
    result is sorted by the permutation and always contains the identity;
    group closure is asserted.
    """
    pts = spec.points
    if len(pts) > max_points:
        raise SearchBoundError(f"{len(pts)} free points exceed the search bound {max_points}")
    if not pts:
        return [identity(pts)]
    if workers > 1:
        jobs = [(spec, prune, first) for first in pts]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            group = [c for batch in pool.map(_branch, jobs) for c in batch]
    else:
        group = _branch((spec, prune, None))
    index = {p: i for i, p in enumerate(pts)}
    group.sort(key=lambda c: tuple(index[s] for _, s in c.sigma))
    assert_group(group, pts)
    return group


def assert_group(group, points):
    keys = {c for c in group}
    assert identity(points) in keys, "identity missing from isometry set"
    for a in group:
        assert a.inverse() in keys, "isometry set not closed under inverses"
        for b in group:
            assert a.compose(b) in keys, "isometry set not closed under composition"


def is_group(group, points):
    try:
        assert_group(group, points)
    except AssertionError:
        return False
    return True


def preserves_joins(cand, x, y):
    return cand.apply(x.join(y)) == cand.apply(x).join(cand.apply(y))
