"""Approximation of a finite sublattice of C(H) by a Benyamini structure.

Pipeline::

    psi    = (C - 1) * sum_n C**-n * x_n
    H_n    = {t : C**-n <= psi(t) <= C**(1-n)}      (boundary points copied)
    [Ux]   = C**(1-n) * x(t) / psi(t)               on the level-n copy of t
    quotient: merge same-level copies with equal images, link the rest

The resulting lattice isomorphism moves sup norms by a factor in ``[1, C]``.
"""
from dataclasses import dataclass, field

from .model import (ISOLATED, BenyaminiStructure, Cell, FullFunction, LatticeVector,
                    base_norm, check_consistent, detect_linking, expand, restrict)
from .rational import Fraction, as_rational
from .renorm import WEIGHTED_SUP, NormSpec


class TransformError(ValueError):
    pass


@dataclass(frozen=True)
class SublatticeModel:
    """Finite point set ``H`` with a generating family of the sublattice.

    ``generators`` are nonnegative maps ``H -> [0, 1]``; ``relations`` are
    ``(t, s, lam)`` records asserting ``x(t) = lam * x(s)`` on the sublattice.
    """

    H: tuple
    generators: tuple
    relations: tuple = ()

    def __post_init__(self):
        H = tuple(str(t) for t in self.H)
        if len(set(H)) != len(H):
            raise TransformError("duplicate points in H")
        gens = tuple({t: as_rational(g.get(t, 0)) for t in H} for g in self.generators)
        for g, raw in zip(gens, self.generators):
            if set(raw) - set(H):
                raise TransformError(f"generator mentions points outside H: {sorted(set(raw) - set(H))}")
            if any(not 0 <= v <= 1 for v in g.values()):
                raise TransformError("generators must take values in [0, 1]")
        rels = tuple((str(t), str(s), as_rational(lam)) for t, s, lam in self.relations)
        for t, s, lam in rels:
            if t not in H or s not in H:
                raise TransformError(f"relation mentions unknown points ({t!r}, {s!r})")
            if lam < 0:
                raise TransformError("relation factors must be nonnegative")
            for g in gens:
                if g[t] != lam * g[s]:
                    raise TransformError(f"generator violates relation {t} = {lam} * {s}")
        object.__setattr__(self, "H", H)
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "relations", rels)

    def zero_set(self):
        return tuple(t for t in self.H if all(g[t] == 0 for g in self.generators))


@dataclass(frozen=True)
class Slicing:
    """Level copies: each entry is ``(copy_id, source_point, level)``."""

    copies: tuple

    def level(self, copy_id):
        return self._lookup()[copy_id][1]

    def source(self, copy_id):
        return self._lookup()[copy_id][0]

    def _lookup(self):
        return {c: (t, n) for c, t, n in self.copies}


@dataclass(frozen=True)
class RescaledImages:
    C: Fraction
    slicing: Slicing
    psi: dict = field(hash=False)
    images: dict = field(hash=False)  # copy_id -> tuple, one entry per generator


@dataclass
class TransformReport:
    structure: BenyaminiStructure
    point_map: dict          # H point -> tuple of output points (empty on F)
    representatives: dict    # output point -> (H point, level)
    psi: dict
    images: list             # per generator: FullFunction on output points
    ratios: list             # per generator: base norm ratio, None for zero generators

    def phi_full(self, x):
        """Image of an arbitrary function on H at every output point."""
        s = self.structure
        C = s.C
        values = {}
        for p, (t, n) in self.representatives.items():
            values[p] = C ** (1 - n) * as_rational(x[t]) / self.psi[t]
        return FullFunction(values)

    def phi(self, x):
        return restrict(self.structure, self.phi_full(x))


def build_psi(m, C):
    C = as_rational(C)
    if not m.generators:
        raise TransformError("need at least one generator")
    psi = {t: Fraction(0) for t in m.H}
    weight = Fraction(1)
    for g in m.generators:
        weight /= C
        for t in m.H:
            psi[t] += weight * g[t]
    return {t: (C - 1) * v for t, v in psi.items()}


def _levels_of(value, C):
    n = 1
    low = 1 / C
    while low > value:
        n += 1
        low /= C
    return (n, n + 1) if low == value else (n,)


def slice_levels(H, psi, C):
    """Assign each point with ``psi > 0`` to every level whose band contains it."""
    C = as_rational(C)
    copies = []
    for t in H:
        if psi[t] <= 0:
            continue
        for n in _levels_of(psi[t], C):
            copies.append((f"{t}@{n}", t, n))
    copies.sort(key=lambda c: (c[2], H.index(c[1])))
    return Slicing(tuple(copies))


def rescale_embed(m, psi, slicing, C):
    C = as_rational(C)
    images = {}
    for cid, t, n in slicing.copies:
        assert psi[t] > 0, "division by psi at a point of the zero set"
        factor = C ** (1 - n) / psi[t]
        assert 1 <= factor <= C, f"rescaling factor {factor} outside [1, C]"
        images[cid] = tuple(factor * g[t] for g in m.generators)
    return RescaledImages(C, slicing, dict(psi), images)


def _direction(vec):
    lead = next((v for v in vec if v), None)
    if lead is None:
        return None, None
    return tuple(v / lead for v in vec), lead


def quotient_to_benyamini(images, C=None, H=None):
    """Merge same-level duplicates and link proportional points across levels."""
    C = images.C if C is None else as_rational(C)
    sl = images.slicing
    if not sl.copies:
        raise TransformError("degenerate: X = {0}")
    order = H if H is not None else []
    max_level = max(n for _, _, n in sl.copies)

    # merge per level by identical image vectors
    classes = {}
    for cid, t, n in sl.copies:
        classes.setdefault((n, images.images[cid]), []).append((cid, t))
    points = {}
    for (n, vec), members in classes.items():
        srcs = [t for _, t in members]
        if order:
            srcs.sort(key=order.index)
        name = "+".join(srcs) + f"@{n}"
        points[name] = (n, vec, srcs)

    level_cells = [[] for _ in range(max_level)]
    for name in sorted(points, key=lambda p: (points[p][0], _src_rank(points[p][2], order), p)):
        n = points[name][0]
        level_cells[n - 1].append(Cell(f"c:{name}", ISOLATED, [name]))

    by_dir = {}
    for name, (n, vec, _) in points.items():
        d, lead = _direction(vec)
        if d is not None:
            by_dir.setdefault(d, []).append((name, lead))
    relations = []
    for group in by_dir.values():
        group.sort()
        base, base_lead = group[0]
        for name, lead in group[1:]:
            relations.append((name, base, lead / base_lead))
    levels = {name: n for name, (n, _, _) in points.items()}
    try:
        links = detect_linking(levels, C, relations)
    except ValueError as exc:
        raise TransformError(f"input inconsistency: {exc}") from exc
    s = BenyaminiStructure(C, level_cells, links)

    point_map = {}
    for name, (n, _, srcs) in points.items():
        for t in srcs:
            point_map.setdefault(t, []).append(name)
    representatives = {name: (srcs[0], n) for name, (n, _, srcs) in points.items()}
    k = len(next(iter(images.images.values())))
    full_images = [FullFunction({name: vec[i] for name, (_, vec, _) in points.items()})
                   for i in range(k)]
    report = TransformReport(
        structure=s,
        point_map={t: tuple(sorted(v, key=lambda p: levels[p])) for t, v in point_map.items()},
        representatives=representatives,
        psi=dict(images.psi),
        images=full_images,
        ratios=[],
    )
    return s, report


def _src_rank(srcs, order):
    return min(order.index(t) for t in srcs) if order else 0


def separates_levels(s, images):
    """True iff the images take distinct value tuples at distinct points of each level."""
    for n in range(1, s.n_levels + 1):
        seen = set()
        for p in s.level_points(n):
            vec = tuple(img[p] for img in images)
            if vec in seen:
                return False
            seen.add(vec)
    return True


def benyamini_transform(m, C):
    """Run the full pipeline.

    Returns ``(structure, report)``; ``report.ratios[i]`` is the exact ratio
    of the base norm of the i-th generator's image to its sup norm.
    """
    C = as_rational(C)
    if not 1 < C:
        raise TransformError("C must exceed 1")
    psi = build_psi(m, C)
    sl = slice_levels(m.H, psi, C)
    imgs = rescale_embed(m, psi, sl, C)
    s, report = quotient_to_benyamini(imgs, C, H=list(m.H))
    for t in m.H:
        report.point_map.setdefault(t, ())
    ratios = []
    for g, img in zip(m.generators, report.images):
        assert check_consistent(s, img), "generator image is not consistent"
        vec = restrict(s, img)
        assert expand(s, vec) == img
        top = max(g.values())
        if top == 0:
            ratios.append(None)
            continue
        r = base_norm(s, vec) / top
        assert 1 <= r <= C, f"distortion {r} outside [1, {C}]"
        ratios.append(r)
    report.ratios = ratios
    assert separates_levels(s, report.images), "images fail to separate a level"
    return s, report


def image_vectors(report):
    return [restrict(report.structure, img) for img in report.images]


__all__ = [
    "SublatticeModel", "Slicing", "RescaledImages", "TransformReport", "TransformError",
    "build_psi", "slice_levels", "rescale_embed", "quotient_to_benyamini",
    "benyamini_transform", "separates_levels", "image_vectors", "sublattice_norm_spec",
]


def sublattice_norm_spec(m):
    """Sup norm of the sublattice spanned by the generators, in class coordinates.

    Points whose generator columns are proportional form one class; a
    function in the sublattice is fixed by its value at the class
    representative, and its sup over the class is that value times the
    largest proportionality factor.
    """
    reps = {}
    for t in m.H:
        d, lead = _direction(tuple(g[t] for g in m.generators))
        if d is None:
            continue
        if d not in reps:
            reps[d] = (t, lead, lead)
        else:
            r, base, top = reps[d]
            reps[d] = (r, base, max(top, lead))
    pts = [r for r, _, _ in reps.values()]
    rows = [{r: top / base} for r, base, top in reps.values()]
    return NormSpec(pts, rows, kind=WEIGHTED_SUP)
