"""Seeded random instances: structures, vectors, sublattice models."""
import random

from .model import ISOLATED, PERFECT, BenyaminiStructure, Cell, LatticeVector, Link
from .rational import Fraction, as_rational
from .transform import SublatticeModel

# (C, c) pairs with c**3 < C < 2
CONSTANT_PAIRS = (
    (Fraction(3, 2), Fraction(11, 10)),
    (Fraction(3, 2), Fraction(21, 20)),
    (Fraction(7, 4), Fraction(11, 10)),
    (Fraction(7, 4), Fraction(6, 5)),
    (Fraction(5, 4), Fraction(21, 20)),
    (Fraction(19, 10), Fraction(101, 100)),
)

_SMALL = (Fraction(1), Fraction(1, 2), Fraction(1, 3), Fraction(2, 3), Fraction(3, 4),
          Fraction(1, 4), Fraction(3, 5), Fraction(5, 7))


class GenerationError(ValueError):
    pass


def gen_structure(levels=2, cells=2, link_density=0.5, perfect_fraction=0.0, seed=0,
                  C=Fraction(3, 2)):
    """Random valid structure, deterministic in ``seed``.

    Each level gets ``cells`` cells; a cell is perfect with probability
    ``perfect_fraction`` (two or three sample points) and isolated
    otherwise. Each point above level 1 joins an existing chain with
    probability ``link_density``.
    """
    if levels < 1 or cells < 1:
        raise GenerationError("need at least one level and one cell per level")
    if not 0 <= link_density <= 1 or not 0 <= perfect_fraction <= 1:
        raise GenerationError("densities must lie in [0, 1]")
    rng = random.Random(seed)
    level_cells = []
    chains = []
    for n in range(1, levels + 1):
        row = []
        for k in range(cells):
            cid = f"c{n}_{k}"
            if rng.random() < perfect_fraction:
                size = rng.choice((2, 3))
                row.append(Cell(cid, PERFECT, [f"p{n}_{k}_{i}" for i in range(size)]))
            else:
                row.append(Cell(cid, ISOLATED, [f"p{n}_{k}"]))
        level_cells.append(row)
        for cell in row:
            for p in cell.points:
                open_chains = [ch for ch in chains if n not in ch]
                if n > 1 and open_chains and rng.random() < link_density:
                    rng.choice(open_chains)[n] = p
                else:
                    chains.append({n: p})
    pairs = {}
    for ch in chains:
        lv = sorted(ch)
        for m, n in zip(lv, lv[1:]):
            pairs.setdefault((m, n), []).append((ch[m], ch[n]))
    links = [Link(m, n, ps) for (m, n), ps in sorted(pairs.items())]
    return BenyaminiStructure(as_rational(C), level_cells, links)


def random_atomic_structure(rng, min_free=2, max_free=6, max_levels=3, C=Fraction(3, 2)):
    """All-isolated structure with ``min_free <= |K'| <= max_free``."""
    while True:
        s = gen_structure(levels=rng.randint(1, max_levels), cells=rng.randint(1, 4),
                          link_density=rng.choice((0.0, 0.3, 0.6, 0.9)),
                          perfect_fraction=0.0, seed=rng.getrandbits(32), C=C)
        if min_free <= len(s.free) <= max_free:
            return s


def random_structure(rng, max_free=7, max_levels=3, perfect_fraction=None, C=Fraction(3, 2)):
    """Structure that may contain perfect cells."""
    while True:
        pf = rng.choice((0.0, 0.3, 0.6, 1.0)) if perfect_fraction is None else perfect_fraction
        s = gen_structure(levels=rng.randint(1, max_levels), cells=rng.randint(1, 3),
                          link_density=rng.choice((0.0, 0.4, 0.8)), perfect_fraction=pf,
                          seed=rng.getrandbits(32), C=C)
        if 1 <= len(s.free) <= max_free:
            return s


def random_constants(rng):
    return rng.choice(CONSTANT_PAIRS)


def random_vector(s, rng, bound=5, denominators=(1, 2, 3, 4, 7), positive=False):
    lo = 0 if positive else -bound * 4
    return LatticeVector({p: Fraction(rng.randint(lo, bound * 4), rng.choice(denominators))
                          for p in s.free})


def random_sublattice_model(rng, max_points=7, max_generators=4):
    """Random finite sublattice of C(H) with its generators and relations.

    Points of H are split into a zero set F and proportionality classes;
    generators are nonnegative combinations of the class atoms, scaled into
    the unit ball.
    """
    n = rng.randint(2, max_points)
    H = [f"h{i}" for i in range(n)]
    n_zero = rng.choice((0, 0, 1))
    live = H[n_zero:]
    rng.shuffle(live)
    classes = []
    i = 0
    while i < len(live):
        size = rng.choice((1, 1, 2, 3))
        classes.append(live[i:i + size])
        i += size
    ratios = {}
    relations = []
    for cls in classes:
        for t in cls:
            ratios[t] = rng.choice(_SMALL)
        ratios[cls[0]] = Fraction(1)
        for t in cls[1:]:
            relations.append((t, cls[0], ratios[t]))
    generators = []
    k = rng.randint(1, max_generators)
    for g_idx in range(k):
        coeffs = [rng.choice((0, 0) + _SMALL) for _ in classes]
        if g_idx == k - 1:
            coeffs = [c or Fraction(1, 5) for c in coeffs]
        g = {t: Fraction(0) for t in H}
        for cls, cf in zip(classes, coeffs):
            for t in cls:
                g[t] = cf * ratios[t]
        top = max(g.values())
        if top > 1:
            g = {t: v / top for t, v in g.items()}
        generators.append(g)
    return SublatticeModel(H, generators, relations)


def s0_structure(C=Fraction(3, 2)):
    """Two levels: ``p, q`` on level 1 and ``r`` on level 2, with ``q`` linked to ``r``."""
    return BenyaminiStructure(as_rational(C),
                              [[Cell("cp", ISOLATED, ["p"]), Cell("cq", ISOLATED, ["q"])],
                               [Cell("cr", ISOLATED, ["r"])]],
                              [Link(1, 2, [("q", "r")])])


S0_WEIGHTS = {"p": Fraction(21, 20), "q": Fraction(41, 40)}
