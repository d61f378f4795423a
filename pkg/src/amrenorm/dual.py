"""Functionals on a finite Benyamini space and their norms.

A functional is a finitely supported signed measure on the points; it acts
on a vector through the vector's full expansion. Mass sitting on a linked
copy can be pushed down to the chain root without changing the action,
which identifies the dual with l1 over the free points.
"""
import random

from .extension import two_point_bump
from .lp import maximize
from .generate import random_vector
from .model import LatticeVector, PointFunction, expand
from .rational import Fraction, as_rational
from .renorm import base_norm_spec

ROOT_FIRST = "root"
CHAIN = "chain"


class Functional(PointFunction):
    __slots__ = ()


def action(s, f, x):
    """Value of the functional ``f`` at the vector ``x``."""
    full = expand(s, x)
    return sum((v * full[p] for p, v in f.items()), Fraction(0))


def total_variation(f):
    return sum((abs(v) for v in f.values()), Fraction(0))


def _moves(s, f, order):
    """Reduction as a list of ``(source, target, factor)`` steps applied in order."""
    coeffs = {p: as_rational(v) for p, v in f.items()}
    steps = []
    if order == ROOT_FIRST:
        # smallest level first, mass goes straight to the lowest partner
        for p in sorted(coeffs, key=lambda q: (s.level_of(q), s.points.index(q))):
            root = s.root_of(p)
            if root != p:
                steps.append((p, root, s.C ** (s.level_of(root) - s.level_of(p))))
    elif order == CHAIN:
        # top level down, each step to the nearest lower partner
        for n in range(s.n_levels, 0, -1):
            for p in s.level_points(n):
                root = s.root_of(p)
                if root == p:
                    continue
                chain = s.chain(root)
                below = [q for q in chain if s.level_of(q) < n]
                target = below[-1]
                steps.append((p, target, s.C ** (s.level_of(target) - n)))
    else:
        raise ValueError(f"unknown reduction order {order!r}")
    return coeffs, steps


def reduce_measure(s, f, order=CHAIN, check=True, rng=None):
    """Push all mass of ``f`` onto the free points.

    The returned functional has the same action on every vector; its total
    variation is no larger, and strictly smaller whenever nonzero mass was
    moved. With ``check`` both facts are asserted, the first on 20 random
    vectors.
    """
    unknown = set(f) - set(s.points)
    if unknown:
        raise ValueError(f"functional mentions unknown points {sorted(unknown)}")
    coeffs, steps = _moves(s, f, order)
    moved = False
    for src, dst, factor in steps:
        mass = coeffs.get(src, Fraction(0))
        if not mass:
            continue
        moved = True
        coeffs[src] = Fraction(0)
        coeffs[dst] = coeffs.get(dst, Fraction(0)) + factor * mass
    out = Functional({p: coeffs.get(p, Fraction(0)) for p in s.free})
    if check:
        rng = rng or random.Random(0)
        for _ in range(20):
            x = random_vector(s, rng)
            assert action(s, f, x) == action(s, out, x), "reduction changed the action"
        tv_in, tv_out = total_variation(f), total_variation(out)
        assert tv_out <= tv_in, "reduction increased total variation"
        if moved:
            assert tv_out < tv_in, "moving mass did not decrease total variation"
    return out


def _require_reduced(s, f):
    extra = [p for p, v in f.items() if v and p not in set(s.free)]
    if extra:
        raise ValueError(f"functional is not reduced; mass on linked points {extra}")


def operator_norm(spec, f):
    """Exact ``max f(x)`` over the unit ball of ``spec``.

    The norm is absolute, so the maximum is attained with signs matching
    ``f``; the LP runs over the positive orthant against ``|f|``.
    """
    g = [abs(as_rational(f.get(p, 0))) for p in spec.points]
    if not any(g):
        return Fraction(0)
    A = [list(row) for row in spec.functionals]
    value, _ = maximize(g, A, [Fraction(1)] * len(A))
    return value


def dual_norm_base(s, f, check=True):
    """l1 norm of a reduced functional, optionally cross-checked by LP."""
    _require_reduced(s, f)
    l1 = sum((abs(f.get(p, Fraction(0))) for p in s.free), Fraction(0))
    if check:
        assert operator_norm(base_norm_spec(s), f) == l1, "l1 norm disagrees with LP"
    return l1


def dual_norm_renorm(spec, f):
    """Dual norm of a functional on the free points under ``spec``."""
    unknown = set(p for p, v in f.items() if v) - set(spec.points)
    if unknown:
        raise ValueError(f"functional mentions points outside the norm's domain: {sorted(unknown)}")
    return operator_norm(spec, f)


def point_mass(point, scale=1):
    return Functional({point: as_rational(scale)})


def is_positive_functional(f):
    return all(v >= 0 for v in f.values())


def negativity_witness(s, f):
    """A positive vector on which a reduced functional is negative, or None.

    The vector is a bump at a free point carrying negative mass.
    """
    _require_reduced(s, f)
    for t in s.free:
        if f.get(t, 0) < 0:
            m = s.level_of(t)
            partner = next((q for q in s.free if q != t and s.level_of(q) >= m), None)
            if partner is None:
                x = s.unit(t)
            else:
                full = two_point_bump(s, t, partner, {t}, {partner}, 1, 0)
                x = LatticeVector({p: full[p] for p in s.free})
            if action(s, f, x) < 0:
                return x
    return None
