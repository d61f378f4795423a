"""Consistent extension of functions given on a range of levels.

Unforced free points receive the value 0, the smallest-norm choice; with a
dominator the value is clamped into the allowed interval instead.
"""
from .model import (ConsistencyError, FullFunction, LatticeVector, PointFunction,
                    check_consistent, expand)
from .rational import Fraction, as_rational


class DominationError(ValueError):
    pass


class PartialFunction(PointFunction):
    """Values on every point of the levels ``lo..hi``."""

    __slots__ = ("lo", "hi")

    def __init__(self, values, lo, hi):
        super().__init__(values)
        self.lo = lo
        self.hi = hi

    def __eq__(self, other):
        if isinstance(other, PartialFunction):
            return (self.lo, self.hi) == (other.lo, other.hi) and dict(self) == dict(other)
        return super().__eq__(other)

    __hash__ = PointFunction.__hash__


def partial_from(s, values, lo, hi):
    """Build a PartialFunction, checking it covers exactly levels ``lo..hi``."""
    if not 1 <= lo <= hi <= s.n_levels:
        raise ValueError(f"level range {lo}..{hi} outside 1..{s.n_levels}")
    expected = {p for n in range(lo, hi + 1) for p in s.level_points(n)}
    if set(values) != expected:
        raise ValueError(f"partial function must cover exactly the points of levels {lo}..{hi}")
    return PartialFunction(values, lo, hi)


def restrict_levels(s, f, lo, hi):
    return partial_from(s, {p: f[p] for n in range(lo, hi + 1) for p in s.level_points(n)}, lo, hi)


def level_sup(s, f, n):
    return max((abs(f[p]) for p in s.level_points(n) if p in f), default=Fraction(0))


def _touching(s, root, lo, hi):
    """Points of ``root``'s chain lying on levels ``lo..hi``."""
    return [q for q in s.chain(root) if lo <= s.level_of(q) <= hi]


def _root_values(s, x, lo, hi):
    """Root values forced by ``x`` on levels ``lo..hi``; None where unforced."""
    C = s.C
    forced = {}
    for root in s.free:
        hits = _touching(s, root, lo, hi)
        if not hits:
            forced[root] = None
            continue
        r_level = s.level_of(root)
        vals = {C ** (s.level_of(q) - r_level) * x[q] for q in hits}
        assert len(vals) == 1, f"conflicting forced values at {root!r}"
        forced[root] = vals.pop()
    return forced


def _require_consistent(s, x):
    if not check_consistent(s, x):
        raise ConsistencyError("input function violates the linking relations")


def extend_down(s, x, dominator=None):
    """Extend a consistent function on levels ``1..N`` to all levels.

    For every level ``j > N``::

        sup_{K_j} |result| <= max_{i <= N} C**(i - j) sup_{K_i} |x|

    With a positive ``dominator`` y satisfying ``0 <= x <= y`` on ``1..N``,
    the result also satisfies ``0 <= result <= y`` everywhere.
    """
    if x.lo != 1:
        raise ValueError("extend_down needs a function starting at level 1")
    return extend_range(s, x, dominator=dominator)


def extend_up(s, x):
    """Extend a consistent function on levels ``L..N`` down to levels ``1..N``.

    Values on levels below ``L`` are forced through links into ``L..N``
    and zero elsewhere, so for ``j < L``::

        sup_{K_j} |result| <= max_{L <= i <= N} C**(i - j) sup_{K_i} |x|
    """
    _require_consistent(s, x)
    forced = _root_values(s, x, x.lo, x.hi)
    values = dict(x)
    for n in range(1, x.lo):
        for p in s.level_points(n):
            root = s.root_of(p)
            v = forced[root]
            values[p] = Fraction(0) if v is None else s.C ** (s.level_of(root) - n) * v
    return PartialFunction(values, 1, x.hi)


def extend_range(s, x, dominator=None, lower=None):
    """Extend a consistent function on levels ``L..N`` to the whole structure.

    Optional ``dominator`` (y) and ``lower`` (z) bound the result:
    ``z <= result <= y``. Without ``lower`` the bound is ``0 <= result``
    whenever a dominator is given. Unforced free points are clamped into
    ``[z, y]``; forced values that fall outside raise DominationError.
    """
    _require_consistent(s, x)
    forced = _root_values(s, x, x.lo, x.hi)

    if dominator is None and lower is None:
        coords = {r: (Fraction(0) if v is None else v) for r, v in forced.items()}
        return expand(s, LatticeVector(coords))

    zero = s.zero()
    y = dominator
    if y is not None and not y.is_positive():
        raise DominationError("dominator must be positive")
    z = lower if lower is not None else (zero if dominator is not None else None)
    if y is not None and z is not None and not z.dominated_by(y):
        raise DominationError("lower bound exceeds dominator")
    coords = {}
    for r, v in forced.items():
        if v is None:
            v = Fraction(0)
            if z is not None:
                v = max(v, z[r])
            if y is not None:
                v = min(v, y[r])
        coords[r] = v
    result = expand(s, LatticeVector(coords))
    ey = expand(s, y) if y is not None else None
    ez = expand(s, z) if z is not None else None
    for p, v in result.items():
        if ey is not None and v > ey[p]:
            raise DominationError(f"forced value {v} at {p!r} exceeds the dominator {ey[p]}")
        if ez is not None and v < ez[p]:
            raise DominationError(f"forced value {v} at {p!r} is below the lower bound {ez[p]}")
    return result


def sup_bound(s, x, j):
    """``max_{lo <= i <= hi} C**(i - j) sup_{K_i} |x|`` for a partial function."""
    return max(s.C ** (i - j) * level_sup(s, x, i) for i in range(x.lo, x.hi + 1))


def check_sup_bounds(s, x, result):
    """True iff the extension ``result`` of ``x`` meets the sup bound off ``lo..hi``."""
    for j in range(1, s.n_levels + 1):
        if x.lo <= j <= x.hi:
            continue
        if level_sup(s, result, j) > sup_bound(s, x, j):
            return False
    return True


def two_point_bump(s, t, s2, U, V, alpha, beta):
    """Positive consistent function with prescribed values at two free points.

    ``t`` lies on level m, ``s2`` on level n >= m; ``U`` and ``V`` are
    disjoint sets of free points of those levels containing ``t`` and
    ``s2``. The result equals ``alpha`` at ``t``, ``beta`` at ``s2``, is 0
    below level m, and obeys the level-wise bounds checked by
    :func:`bump_conclusions`.
    """
    alpha, beta = as_rational(alpha), as_rational(beta)
    if alpha < 0 or beta < 0:
        raise ValueError("alpha and beta must be nonnegative")
    free = set(s.free)
    if t not in free or s2 not in free:
        raise ValueError("t and s2 must be free points")
    if t == s2:
        raise ValueError("t and s2 must differ")
    m, n = s.level_of(t), s.level_of(s2)
    if m > n:
        raise ValueError(f"need level(t) <= level(s2), got {m} > {n}")
    U, V = set(U), set(V)
    if U & V:
        raise ValueError("U and V must be disjoint")
    if t not in U or s2 not in V:
        raise ValueError("need t in U and s2 in V")
    if any(p not in free or s.level_of(p) != m for p in U):
        raise ValueError("U must consist of free points of level(t)")
    if any(p not in free or s.level_of(p) != n for p in V):
        raise ValueError("V must consist of free points of level(s2)")

    values = {}
    for k in range(1, n + 1):
        for p in s.level_points(k):
            root = s.root_of(p)
            base = alpha if root == t else beta if root == s2 else Fraction(0)
            values[p] = s.C ** (s.level_of(root) - k) * base
    x = extend_down(s, PartialFunction(values, 1, n))
    failed = bump_conclusions(s, x, t, s2, U, V, alpha, beta)
    assert not failed, f"bump violates conclusions {failed}"
    return x


def bump_conclusions(s, x, t, s2, U, V, alpha, beta):
    """Numbers of the six bump conclusions that ``x`` fails (empty when all hold)."""
    C = s.C
    m, n = s.level_of(t), s.level_of(s2)
    failed = []
    if any(x[p] < 0 for p in x):
        failed.append(0)
    if any(x[p] != 0 for k in range(1, m) for p in s.level_points(k)):
        failed.append(1)
    if x[t] != alpha or x[s2] != beta or any(x[p] > alpha for p in U) \
            or any(x[p] > beta for p in V):
        failed.append(2)
    if m < n and any(x[p] != 0 for p in s.level_points(m) if p not in U):
        failed.append(3)
    if m < n and any(x[p] > C ** (m - j) * alpha
                     for j in range(m + 1, n) for p in s.level_points(j)):
        failed.append(4)
    if any(x[p] > max(C ** (m - n) * alpha, beta) for p in s.level_points(n)):
        failed.append(5)
    if any(x[p] > max(C ** (m - j) * alpha, C ** (n - j) * beta)
           for j in range(n + 1, s.n_levels + 1) for p in s.level_points(j)):
        failed.append(6)
    return failed


__all__ = [
    "DominationError", "FullFunction", "PartialFunction", "partial_from", "restrict_levels",
    "extend_down", "extend_up", "extend_range", "two_point_bump", "bump_conclusions",
    "check_sup_bounds", "sup_bound", "level_sup",
]
