"""Lattice renormings with a trivial isometry group.

Three constructions, chosen by the number of atoms ``|I|``:

* no atoms: the weighted sup norm ``max_t mu(t) |x(t)|``;
* one atom ``a``: ``max(weighted sup off a, |x(a)|)``;
* two or more atoms: the weighted sup norm together with, for each atom
  pair ``i < j``, an octagon norm of ``(mu(a_i) x(a_i), mu(a_j) x(a_j))``
  whose shape depends on the rank ``pair_rank(i, j)``.

Every norm is represented by a :class:`NormSpec`, a finite list of
nonnegative functionals ``f`` with ``norm(x) = max_f sum_t f(t) |x(t)|``.
"""
import random
from dataclasses import dataclass, field

from .model import atoms as structure_atoms
from .rational import Fraction, as_rational, format_rational

WEIGHTED_SUP = "weighted_sup"
ONE_ATOM = "one_atom"
OCTAGON = "octagon"
BASE = "base"


class RenormError(ValueError):
    pass


@dataclass(frozen=True)
class RenormConstants:
    C: Fraction
    c: Fraction

    def __post_init__(self):
        C = as_rational(self.C)
        c = as_rational(self.c)
        object.__setattr__(self, "C", C)
        object.__setattr__(self, "c", c)
        if not 1 < c:
            raise RenormError(f"c must exceed 1, got {c}")
        if not c ** 3 < C:
            raise RenormError(f"need c^3 < C, got c^3 = {c ** 3}, C = {C}")
        if not C < 2:
            raise RenormError(f"need C < 2, got {C}")


@dataclass(frozen=True)
class WeightScheme:
    """Designated points per level and their weights ``lambda_in``.

    ``designated[n-1]`` lists the designated free points of level ``n`` in
    order; ``weights`` maps each designated point to its weight.
    """

    c: Fraction
    designated: tuple
    weights: dict = field(hash=False)

    def __post_init__(self):
        c = as_rational(self.c)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "designated", tuple(tuple(lv) for lv in self.designated))
        object.__setattr__(self, "weights", {p: as_rational(v) for p, v in self.weights.items()})
        listed = [p for lv in self.designated for p in lv]
        if set(listed) != set(self.weights) or len(listed) != len(set(listed)):
            raise RenormError("designated points and weights disagree")
        values = list(self.weights.values())
        if len(set(values)) != len(values):
            raise RenormError("weights must be pairwise distinct")
        for p, lam in self.weights.items():
            if not 1 < lam < c:
                raise RenormError(f"weight {lam} of {p!r} is outside (1, {c})")
        for lv in self.designated:
            ws = [self.weights[p] for p in lv]
            if any(a <= b for a, b in zip(ws, ws[1:])):
                raise RenormError("weights must strictly decrease within a level")

    def mu(self, point):
        return self.weights.get(point, Fraction(1))


def assign_weights(s, consts, seed=None, overrides=None):
    """Give every free point a distinct weight in ``(1, c)``.

    Weights are ``1 + (c - 1) * 2**-rho`` with ``rho`` an injection into the
    positive integers, increasing along each level so the weights decrease.
    ``seed=None`` numbers the free points in order; a seed draws a random
    injection instead. ``overrides`` maps points to explicit weights and
    replaces the formula entirely.
    """
    if consts.C != s.C:
        raise RenormError(f"constants use C = {consts.C}, structure has C = {s.C}")
    c = consts.c
    designated = [tuple(p for p in s.level_points(n) if p in set(s.free))
                  for n in range(1, s.n_levels + 1)]
    if overrides is not None:
        return WeightScheme(c, designated, dict(overrides))
    total = sum(len(lv) for lv in designated)
    if seed is None:
        ranks = list(range(1, total + 1))
    else:
        ranks = random.Random(seed).sample(range(1, 3 * total + 1), total)
    weights = {}
    pos = 0
    for lv in designated:
        chunk = sorted(ranks[pos:pos + len(lv)])
        pos += len(lv)
        for p, rho in zip(lv, chunk):
            weights[p] = 1 + (c - 1) / Fraction(2) ** rho
    return WeightScheme(c, designated, weights)


@dataclass(frozen=True)
class OctagonParams:
    """One octagon norm on R^2.

    The unit ball has vertices ``(+-v1, +-1)`` and ``(+-1, +-v2)``; the
    gauge is ``max(|x|, |y|, a|x| + b|y|)``.
    """

    c: Fraction
    rank: int

    def __post_init__(self):
        object.__setattr__(self, "c", as_rational(self.c))
        if self.rank < 1:
            raise RenormError("rank must be a positive integer")

    @property
    def v1(self):
        return 1 - (self.c - 1) / (self.c * (2 * self.rank + 1))

    @property
    def v2(self):
        return 1 - (self.c - 1) / (2 * self.c * self.rank)

    @property
    def a(self):
        return (1 - self.v2) / (1 - self.v1 * self.v2)

    @property
    def b(self):
        return (1 - self.v1) / (1 - self.v1 * self.v2)

    def vertices(self):
        v1, v2 = self.v1, self.v2
        one = Fraction(1)
        # counterclockwise from the first quadrant
        return [(one, v2), (v1, one), (-v1, one), (-one, v2),
                (-one, -v2), (-v1, -one), (v1, -one), (one, -v2)]


def octagon_norm(alpha, beta, params):
    x, y = abs(as_rational(alpha)), abs(as_rational(beta))
    return max(x, y, params.a * x + params.b * y)


def pair_rank(i, j):
    """Cantor pairing of an atom index pair ``i < j``."""
    if not i < j:
        raise ValueError(f"pair_rank needs i < j, got ({i}, {j})")
    return (i + j) * (i + j + 1) // 2 + j


def check_octagon_properties(c, ranks, gammas=(), n2_max=20):
    """Exact checks of the octagon family properties over ``ranks``.

    Returns a dict with one entry per property; each entry has ``ok`` and,
    where relevant, a witness.
    """
    c = as_rational(c)
    ranks = list(ranks)
    params = {r: OctagonParams(c, r) for r in ranks}
    report = {}

    n1_bad = [r for r in ranks if not (1 <= max(1, params[r].a + params[r].b) <= c)]
    report["N1"] = {"ok": not n1_bad, "failures": n1_bad}

    n2_missing = []
    n2_witness = {}
    small = [r for r in ranks if r <= n2_max]
    for i, r1 in enumerate(small):
        for r2 in small[i + 1:]:
            w = octagon_distinguishing_vertex(params[r1], params[r2])
            if w is None:
                n2_missing.append((r1, r2))
            else:
                n2_witness[(r1, r2)] = w
    report["N2"] = {"ok": not n2_missing, "failures": n2_missing, "witnesses": n2_witness}

    n34 = {}
    n34_ok = True
    for gamma in gammas:
        gamma = as_rational(gamma)
        r0 = next((r for r in ranks if max(1, params[r].a + params[r].b) <= gamma), None)
        tail_ok = r0 is not None and all(
            max(1, params[r].a + params[r].b) <= gamma for r in ranks if r >= r0)
        n34_ok &= tail_ok
        n34[gamma] = {"min_rank": r0, "tail_ok": tail_ok}
    report["N3N4"] = {"ok": n34_ok, "thresholds": n34}

    n5_bad = [r for r in ranks
              if not (params[r].a + params[r].b / c <= 1 and params[r].a / c + params[r].b <= 1)]
    report["N5"] = {"ok": not n5_bad, "failures": n5_bad}
    return report


def octagon_distinguishing_vertex(p1, p2):
    """A vertex of one octagon whose gauge under the other is not 1, or None."""
    for src, dst in ((p1, p2), (p2, p1)):
        for vx, vy in src.vertices():
            if octagon_norm(vx, vy, dst) != 1:
                return {"vertex_of": src.rank, "vertex": (vx, vy),
                        "gauge_under": dst.rank, "gauge": octagon_norm(vx, vy, dst)}
    return None


def rank_threshold(c, gamma, max_rank=10 ** 6):
    """Smallest rank whose octagon norm is at most ``gamma`` times the sup norm."""
    gamma = as_rational(gamma)
    if gamma <= 1:
        raise ValueError("gamma must exceed 1")
    lo, hi = 1, 1
    while max(1, OctagonParams(c, hi).a + OctagonParams(c, hi).b) > gamma:
        hi *= 2
        if hi > max_rank:
            raise ValueError("threshold exceeds max_rank")
    # a + b is decreasing in the rank
    while lo < hi:
        mid = (lo + hi) // 2
        p = OctagonParams(c, mid)
        if max(1, p.a + p.b) <= gamma:
            hi = mid
        else:
            lo = mid + 1
    return lo


def row_threshold(k, r0, rank=pair_rank, horizon=10 ** 4):
    """Smallest ``L >= k`` with ``rank(k, j) >= r0`` for every ``j > L``.

    For Cantor pairing ``rank(k, j)`` increases in ``j``.
    """
    L = k
    while rank(k, L + 1) < r0:
        L += 1
        if L > horizon:
            raise ValueError("row threshold beyond horizon")
    return L


def diagonal_threshold(r0, rank=pair_rank, horizon=10 ** 4):
    """Smallest ``M`` with ``rank(i, j) >= r0`` whenever ``j > i > M``."""
    M = 0
    while rank(M + 1, M + 2) < r0:
        M += 1
        if M > horizon:
            raise ValueError("diagonal threshold beyond horizon")
    return M


class NormSpec:
    """Absolute polyhedral norm given by nonnegative functionals.

    Parameters
    ----------
    points : sequence of str
        Coordinates (the free points).
    functionals : iterable of sequences or dicts
        Each is a nonnegative coefficient vector aligned with ``points`` (or
        a sparse dict point -> coefficient).
    mu : dict, optional
        Weight attached to each point; defaults to the coordinate norms.
    kind : str
        Label of the construction that produced the spec.
    """

    def __init__(self, points, functionals, mu=None, kind=BASE):
        self.points = tuple(points)
        index = {p: i for i, p in enumerate(self.points)}
        rows = []
        seen = set()
        for f in functionals:
            if isinstance(f, dict):
                row = [Fraction(0)] * len(self.points)
                for p, v in f.items():
                    row[index[p]] = as_rational(v)
            else:
                row = [as_rational(v) for v in f]
            row = tuple(row)
            if len(row) != len(self.points):
                raise ValueError("functional length does not match points")
            if any(v < 0 for v in row):
                raise ValueError("functionals must be nonnegative")
            if not any(row) or row in seen:
                continue
            seen.add(row)
            rows.append(row)
        self.functionals = tuple(rows)
        self.kind = kind
        if mu is None:
            mu = {p: self.norm_of_unit(p) for p in self.points}
        self.mu = {p: as_rational(v) for p, v in mu.items()}

    def __call__(self, x):
        return self.norm(x)

    def norm(self, x):
        vals = [abs(as_rational(x[p])) for p in self.points]
        return max((sum((f * v for f, v in zip(row, vals) if f), Fraction(0))
                    for row in self.functionals), default=Fraction(0))

    def norm_of_unit(self, point):
        i = self.points.index(point)
        return max((row[i] for row in self.functionals), default=Fraction(0))

    def dim(self):
        return len(self.points)

    def section(self, coords):
        """Restriction to vectors supported on ``coords`` (a sub-normspec)."""
        idx = [self.points.index(p) for p in coords]
        rows = [tuple(row[i] for i in idx) for row in self.functionals]
        return NormSpec(coords, rows, mu={p: self.mu[p] for p in coords}, kind=self.kind)

    def as_dicts(self):
        return [{p: v for p, v in zip(self.points, row) if v} for row in self.functionals]

    def __eq__(self, other):
        if not isinstance(other, NormSpec):
            return NotImplemented
        return (self.points == other.points
                and set(self.functionals) == set(other.functionals)
                and self.mu == other.mu and self.kind == other.kind)

    def __hash__(self):
        return hash((self.points, frozenset(self.functionals)))

    def __repr__(self):
        return f"NormSpec(kind={self.kind!r}, dim={self.dim()}, functionals={len(self.functionals)})"

    def describe(self):
        return "; ".join(
            "+".join(f"{format_rational(v)}|{p}|" for p, v in f.items())
            for f in self.as_dicts())


def base_norm_spec(s):
    """The sup norm over free points as a NormSpec."""
    pts = s.free
    rows = [[int(p == q) for q in pts] for p in pts]
    return NormSpec(pts, rows, mu={p: 1 for p in pts}, kind=BASE)


def weighted_sup_spec(s, scheme):
    pts = s.free
    rows = [{p: scheme.mu(p)} for p in pts]
    return NormSpec(pts, rows, mu={p: scheme.mu(p) for p in pts}, kind=WEIGHTED_SUP)


def build_renorm(s, scheme, consts, rank=pair_rank):
    """Build the renorm of ``s`` for the given weight scheme.

    ``rank`` maps an atom index pair ``(i, j)`` (1-based, ``i < j``) to the
    octagon rank; it must be injective on the pairs that occur.
    """
    if scheme.c != consts.c:
        raise RenormError("weight scheme and constants use different c")
    if consts.C != s.C:
        raise RenormError("constants and structure use different C")
    free = set(s.free)
    if not set(scheme.weights) <= free:
        raise RenormError("weight scheme mentions points that are not free")
    pts = s.free
    atom_pts = [a for a, _ in structure_atoms(s)]

    if not atom_pts:
        return weighted_sup_spec(s, scheme)

    if len(atom_pts) == 1:
        a1 = atom_pts[0]
        rows = [{p: scheme.mu(p)} for p in pts if p != a1]
        rows.append({a1: 1})
        mu = {p: (Fraction(1) if p == a1 else scheme.mu(p)) for p in pts}
        return NormSpec(pts, rows, mu=mu, kind=ONE_ATOM)

    rows = [{p: scheme.mu(p)} for p in pts]
    used = {}
    for i in range(1, len(atom_pts) + 1):
        for j in range(i + 1, len(atom_pts) + 1):
            r = rank(i, j)
            if r in used:
                raise RenormError(f"rank function collides on {used[r]} and {(i, j)}")
            used[r] = (i, j)
            oc = OctagonParams(consts.c, r)
            ai, aj = atom_pts[i - 1], atom_pts[j - 1]
            mi, mj = scheme.mu(ai), scheme.mu(aj)
            rows.append({ai: mi, aj: 0})
            rows.append({aj: mj})
            rows.append({ai: oc.a * mi, aj: oc.b * mj})
    mu = {p: scheme.mu(p) for p in pts}
    return NormSpec(pts, rows, mu=mu, kind=OCTAGON)


def recover_base_weight(alpha, C):
    """Largest ``C**k * alpha`` (``k >= 0``) not exceeding 1."""
    alpha = as_rational(alpha)
    C = as_rational(C)
    if not 0 < alpha <= 1:
        raise ValueError(f"alpha must lie in (0, 1], got {alpha}")
    value = alpha
    while value * C <= 1:
        value *= C
    return value
