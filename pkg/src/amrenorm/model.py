"""Finite Benyamini structures.

A structure is a finite family of levels ``K_1, ..., K_L``; each level is a
sequence of cells, and each cell is either a single isolated point or a
handful of sample points standing in for a perfect compact set. Links
identify points across levels: a level-``m`` point ``t`` linked to a
level-``n`` point ``s`` (``m < n``) forces ``x(t) = C**(n - m) * x(s)`` for
every ``x`` in the space.

The coordinates of the space are the free points (the lowest point of every
linked chain, plus every unlinked point); a vector is a rational map on the
free points and its values elsewhere are obtained with :func:`expand`.
"""
from collections.abc import Mapping
from dataclasses import dataclass

from .rational import Fraction, as_rational, power_exponent

ISOLATED = "isolated"
PERFECT = "perfect"
CELL_KINDS = (ISOLATED, PERFECT)


class StructureError(ValueError):
    """Raised when a structure violates one of its invariants."""


class LinkingError(ValueError):
    """Raised when proportionality relations cannot come from a Benyamini space."""


class ConsistencyError(ValueError):
    """Raised when a function violates the linking relations."""


class PointFunction(Mapping):
    """Immutable map from point identifiers to Fractions."""

    __slots__ = ("_values", "_hash")

    def __init__(self, values=()):
        self._values = {str(k): as_rational(v) for k, v in dict(values).items()}
        self._hash = None

    def __getitem__(self, key):
        return self._values[key]

    def __iter__(self):
        return iter(self._values)

    def __len__(self):
        return len(self._values)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._values.items()))
        return self._hash

    def __repr__(self):
        body = ", ".join(f"{k}: {v}" for k, v in self._values.items())
        return f"{type(self).__name__}({{{body}}})"


class LatticeVector(PointFunction):
    """A vector of the space, stored by its coordinates on the free points."""

    __slots__ = ()

    def _check_domain(self, other):
        if set(self) != set(other):
            raise ValueError("vectors live on different point sets")

    def join(self, other):
        self._check_domain(other)
        return LatticeVector({k: max(v, other[k]) for k, v in self.items()})

    def meet(self, other):
        self._check_domain(other)
        return LatticeVector({k: min(v, other[k]) for k, v in self.items()})

    def abs(self):
        return LatticeVector({k: abs(v) for k, v in self.items()})

    __or__ = join
    __and__ = meet
    __abs__ = abs

    def __add__(self, other):
        self._check_domain(other)
        return LatticeVector({k: v + other[k] for k, v in self.items()})

    def __sub__(self, other):
        self._check_domain(other)
        return LatticeVector({k: v - other[k] for k, v in self.items()})

    def __neg__(self):
        return LatticeVector({k: -v for k, v in self.items()})

    def __mul__(self, scalar):
        scalar = as_rational(scalar)
        return LatticeVector({k: scalar * v for k, v in self.items()})

    __rmul__ = __mul__

    def is_positive(self):
        return all(v >= 0 for v in self.values())

    def dominated_by(self, other):
        """Coordinatewise ``self <= other``."""
        self._check_domain(other)
        return all(v <= other[k] for k, v in self.items())


class FullFunction(PointFunction):
    """Values on every point of a structure (free or linked)."""

    __slots__ = ()


@dataclass(frozen=True)
class Cell:
    id: str
    kind: str
    points: tuple

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(str(p) for p in self.points))
        if self.kind not in CELL_KINDS:
            raise StructureError(f"cell {self.id}: unknown kind {self.kind!r}")
        if self.kind == ISOLATED and len(self.points) != 1:
            raise StructureError(f"isolated cell {self.id} must hold exactly one point")
        if self.kind == PERFECT and len(self.points) < 2:
            raise StructureError(f"perfect cell {self.id} needs at least two sample points")


@dataclass(frozen=True)
class Link:
    """Bijection between ``D(lower, upper)`` and ``D(upper, lower)``.

    ``pairs`` holds ``(lower_point, upper_point)`` tuples.
    """

    lower: int
    upper: int
    pairs: tuple

    def __post_init__(self):
        pairs = tuple(sorted((str(a), str(b)) for a, b in self.pairs))
        object.__setattr__(self, "pairs", pairs)
        if not self.lower < self.upper:
            raise StructureError(f"link levels must satisfy lower < upper, got {self.lower}, {self.upper}")
        lows = [a for a, _ in pairs]
        highs = [b for _, b in pairs]
        if len(set(lows)) != len(lows) or len(set(highs)) != len(highs):
            raise StructureError(f"link {self.lower}->{self.upper} is not a bijection")

    def phi(self):
        """The map from the lower-level side to the upper-level side."""
        return dict(self.pairs)

    def phi_inverse(self):
        return {b: a for a, b in self.pairs}


class BenyaminiStructure:
    """A finite leveled point set with linking maps and constant ``C``.

    Parameters
    ----------
    C : rational
        Linking constant, ``1 < C < 2``.
    levels : sequence of sequences of Cell
        ``levels[n - 1]`` holds the cells of level ``n``.
    links : iterable of Link
        May be partial; the transitive closure is computed on construction.
    """

    def __init__(self, C, levels, links=()):
        self.C = as_rational(C)
        if not 1 < self.C < 2:
            raise StructureError(f"C must satisfy 1 < C < 2, got {self.C}")
        self.levels = tuple(tuple(level) for level in levels)
        self._level_of = {}
        self._cell_of = {}
        points = []
        cell_ids = set()
        for n, level in enumerate(self.levels, start=1):
            for cell in level:
                if cell.id in cell_ids:
                    raise StructureError(f"duplicate cell id {cell.id!r}")
                cell_ids.add(cell.id)
                for p in cell.points:
                    if p in self._level_of:
                        raise StructureError(f"point {p!r} appears twice")
                    self._level_of[p] = n
                    self._cell_of[p] = cell
                    points.append(p)
        self.points = tuple(points)
        self._index = {p: i for i, p in enumerate(points)}
        self._build_components(tuple(links))

    def _build_components(self, links):
        parent = {p: p for p in self.points}

        def find(p):
            while parent[p] != p:
                parent[p] = parent[parent[p]]
                p = parent[p]
            return p

        for link in links:
            if not 1 <= link.lower < link.upper <= len(self.levels):
                raise StructureError(f"link levels {link.lower}->{link.upper} out of range")
            for a, b in link.pairs:
                for p, n in ((a, link.lower), (b, link.upper)):
                    if p not in self._level_of:
                        raise StructureError(f"link mentions unknown point {p!r}")
                    if self._level_of[p] != n:
                        raise StructureError(f"point {p!r} is not on level {n}")
                ra, rb = find(a), find(b)
                if ra != rb:
                    parent[rb] = ra

        groups = {}
        for p in self.points:
            groups.setdefault(find(p), []).append(p)
        self._root_of = {}
        self._chain = {}
        for members in groups.values():
            members.sort(key=lambda p: (self._level_of[p], self._index[p]))
            levels = [self._level_of[p] for p in members]
            if len(set(levels)) != len(levels):
                raise StructureError(
                    "chain compatibility violated: linked chain "
                    f"{members} has two points on one level"
                )
            root = members[0]
            self._chain[root] = tuple(members)
            for p in members:
                self._root_of[p] = root

        closed = {}
        for members in self._chain.values():
            for i, a in enumerate(members):
                for b in members[i + 1:]:
                    key = (self._level_of[a], self._level_of[b])
                    closed.setdefault(key, []).append((a, b))
        self.links = tuple(Link(m, n, pairs) for (m, n), pairs in sorted(closed.items()))
        self._free = tuple(p for p in self.points if self._root_of[p] == p)

    # -- accessors -------------------------------------------------------
    @property
    def n_levels(self):
        return len(self.levels)

    def level_of(self, point):
        return self._level_of[point]

    def cell_of(self, point):
        return self._cell_of[point]

    def root_of(self, point):
        return self._root_of[point]

    def chain(self, root):
        """All points linked to ``root`` (root first, by increasing level)."""
        return self._chain[root]

    def level_points(self, n):
        return tuple(p for cell in self.levels[n - 1] for p in cell.points)

    @property
    def free(self):
        return self._free

    def phi(self, m, n):
        """The linking map from ``D(m, n)`` to ``D(n, m)`` as a dict."""
        if m == n:
            raise ValueError("phi needs distinct levels")
        lo, hi = min(m, n), max(m, n)
        for link in self.links:
            if (link.lower, link.upper) == (lo, hi):
                return link.phi() if m < n else link.phi_inverse()
        return {}

    def zero(self):
        return LatticeVector({p: 0 for p in self._free})

    def unit(self, point):
        """Coordinate vector of a free point."""
        if point not in self._free:
            raise ValueError(f"{point!r} is not a free point")
        return LatticeVector({p: int(p == point) for p in self._free})

    def __eq__(self, other):
        if not isinstance(other, BenyaminiStructure):
            return NotImplemented
        return (self.C, self.levels, self.links) == (other.C, other.levels, other.links)

    def __hash__(self):
        return hash((self.C, self.levels, self.links))

    def __repr__(self):
        return (
            f"BenyaminiStructure(C={self.C}, levels={self.n_levels}, "
            f"points={len(self.points)}, free={len(self._free)})"
        )


def free_points(s):
    """Free points with their levels, in (level, cell, point) order."""
    return [(p, s.level_of(p)) for p in s.free]


def _check_vector(s, x):
    if set(x) != set(s.free):
        raise ValueError("vector must be defined exactly on the free points")


def expand(s, x):
    """Evaluate a vector at every point of the structure."""
    _check_vector(s, x)
    values = {}
    for p in s.points:
        root = s.root_of(p)
        values[p] = s.C ** (s.level_of(root) - s.level_of(p)) * x[root]
    return FullFunction(values)


def restrict(s, f):
    """Coordinates of a full function on the free points."""
    return LatticeVector({p: f[p] for p in s.free})


def check_consistent(s, f):
    """True iff ``f`` satisfies every linking relation of ``s`` exactly."""
    for link in s.links:
        factor = s.C ** (link.upper - link.lower)
        for a, b in link.pairs:
            if a in f and b in f and f[a] != factor * f[b]:
                return False
    return True


def base_norm(s, x):
    """Sup norm over all points; cross-checked against the sup over free points."""
    _check_vector(s, x)
    over_free = max((abs(v) for v in x.values()), default=Fraction(0))
    over_all = max((abs(v) for v in expand(s, x).values()), default=Fraction(0))
    assert over_free == over_all, "sup over K differs from sup over free points"
    return over_free


def detect_linking(levels, C, relations):
    """Compute the link set forced by a family of proportionality relations.

    Parameters
    ----------
    levels : mapping point -> level
    C : rational
    relations : iterable of ``(t, s, lam)`` meaning ``x(t) = lam * x(s)``

    Every pair of points connected through the relations must sit on
    different levels with ratio exactly ``C**(n - m)``, otherwise
    :class:`LinkingError` is raised.
    """
    C = as_rational(C)
    parent = {p: p for p in levels}
    # scale[p]: x(p) = scale[p] * x(parent[p])
    scale = {p: Fraction(1) for p in levels}

    def find(p):
        path = []
        while parent[p] != p:
            path.append(p)
            p = parent[p]
        root = p
        # compress, accumulating factors
        for q in reversed(path):
            if parent[q] != root:
                scale[q] *= scale[parent[q]]
                parent[q] = root
        return root

    for t, s, lam in relations:
        lam = as_rational(lam)
        if t not in levels or s not in levels:
            raise LinkingError(f"relation mentions unknown point ({t!r}, {s!r})")
        if lam <= 0:
            raise LinkingError(f"relation {t!r} = {lam} * {s!r} forces a zero point")
        rt, rs = find(t), find(s)
        # x(t) = scale[t] x(rt), x(s) = scale[s] x(rs)
        if rt == rs:
            if scale[t] != lam * scale[s]:
                raise LinkingError(f"inconsistent relations around {t!r} and {s!r}")
            continue
        # x(rt) = lam * scale[s] / scale[t] * x(rs)
        parent[rt] = rs
        scale[rt] = lam * scale[s] / scale[t]

    groups = {}
    for p in levels:
        groups.setdefault(find(p), []).append(p)

    pairs = {}
    for members in groups.values():
        if len(members) < 2:
            continue
        members.sort(key=lambda p: (levels[p], str(p)))
        seen = {}
        for p in members:
            if levels[p] in seen:
                raise LinkingError(
                    f"points {seen[levels[p]]!r} and {p!r} on level {levels[p]} are proportional"
                )
            seen[levels[p]] = p
        for i, a in enumerate(members):
            for b in members[i + 1:]:
                m, n = levels[a], levels[b]
                ratio = scale[a] / scale[b]
                if power_exponent(ratio, C) != n - m:
                    raise LinkingError(
                        f"ratio x({a})/x({b}) = {ratio} is not C^{n - m} with C = {C}"
                    )
                pairs.setdefault((m, n), []).append((a, b))
    return tuple(Link(m, n, ps) for (m, n), ps in sorted(pairs.items()))


def tautological_relations(s):
    """The relations ``x(t) = C**(n-m) x(u)`` of every closed link pair."""
    rels = []
    for link in s.links:
        factor = s.C ** (link.upper - link.lower)
        rels.extend((a, b, factor) for a, b in link.pairs)
    return rels


def is_hereditarily_isolated(s, point):
    if point not in s.free:
        return False
    return all(s.cell_of(q).kind == ISOLATED for q in s.chain(point))


def atoms(s):
    """Atoms ``(a_i, theta_i)`` in deterministic order; ``theta_i`` is ``e_{a_i}``."""
    return [(p, s.unit(p)) for p in s.free if is_hereditarily_isolated(s, p)]


def lattice_join(x, y):
    return x.join(y)


def lattice_meet(x, y):
    return x.meet(y)


def lattice_abs(x):
    return x.abs()
