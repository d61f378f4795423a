"""Executable invariant suites backing the ``verify`` command."""
import math
import random
from dataclasses import dataclass, field

from . import dual, extension, isometry, model, renorm, transform
from .generate import random_sublattice_model, random_vector
from .rational import Fraction, format_rational

SUITES = ("model", "extension", "transform", "renorm", "dual", "isometry")


class DegenerateInput(ValueError):
    pass


def _fmt(v):
    if isinstance(v, Fraction):
        return format_rational(v)
    if isinstance(v, dict):
        return {str(k): _fmt(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_fmt(x) for x in v]
    return v


@dataclass
class CheckRecord:
    id: str
    anchor: str
    passed: bool
    witness: dict = field(default_factory=dict)

    def to_json(self):
        return {"id": self.id, "anchor": self.anchor,
                "status": "pass" if self.passed else "fail", "witness": _fmt(self.witness)}


@dataclass
class VerificationReport:
    suite: str
    checks: list = field(default_factory=list)

    def add(self, id, anchor, passed, **witness):
        self.checks.append(CheckRecord(id, anchor, bool(passed), witness))

    def extend(self, other):
        self.checks.extend(other.checks)

    @property
    def ok(self):
        return all(c.passed for c in self.checks)

    def totals(self):
        passed = sum(c.passed for c in self.checks)
        return {"passed": passed, "failed": len(self.checks) - passed}

    def to_json(self):
        return {"suite": self.suite, "checks": [c.to_json() for c in self.checks],
                "totals": self.totals()}


def _require_points(s):
    if not s.points:
        raise DegenerateInput("degenerate: structure has no points")


def _first_failure(items, predicate):
    for item in items:
        if not predicate(item):
            return item
    return None


def verify_model(s, seed=0, n_vectors=200):
    _require_points(s)
    rng = random.Random(seed)
    rep = VerificationReport("model")
    vecs = [random_vector(s, rng) for _ in range(n_vectors)]
    bad = _first_failure(vecs, lambda x: model.restrict(s, model.expand(s, x)) == x)
    rep.add("expand-restrict", "expansion is a section of restriction", bad is None, vector=bad)
    bad = _first_failure(vecs, lambda x: model.check_consistent(s, model.expand(s, x)))
    rep.add("expand-consistent", "expanded vectors are consistent", bad is None, vector=bad)
    bad = _first_failure(vecs, lambda x: model.base_norm(s, x.abs()) == model.base_norm(s, x))
    rep.add("base-absolute", "base norm is absolute", bad is None, vector=bad)
    pairs = list(zip(vecs[::2], vecs[1::2]))
    bad = _first_failure(
        pairs, lambda p: not p[0].abs().dominated_by(p[1].abs())
        or model.base_norm(s, p[0]) <= model.base_norm(s, p[1]))
    rep.add("base-monotone", "base norm is monotone", bad is None, pair=bad)
    pos = [(x.abs(), y.abs()) for x, y in pairs]
    bad = _first_failure(
        pos, lambda p: model.base_norm(s, p[0].join(p[1]))
        == max(model.base_norm(s, p[0]), model.base_norm(s, p[1])))
    rep.add("base-am", "sup norm is an AM-norm", bad is None, pair=bad)
    levels = {p: s.level_of(p) for p in s.points}
    links = model.detect_linking(levels, s.C, model.tautological_relations(s))
    rep.add("detect-linking", "linking recovered from the relation family",
            tuple(links) == tuple(s.links))
    inv_ok = all(
        all(s.phi(ln.upper, ln.lower)[s.phi(ln.lower, ln.upper)[a]] == a for a, _ in ln.pairs)
        for ln in s.links)
    rep.add("phi-inverse", "linking maps are mutually inverse", inv_ok)
    return rep


def random_partial(s, rng, dominated=False):
    """Random consistent partial function on a random level range."""
    lo = rng.randint(1, s.n_levels)
    hi = rng.randint(lo, s.n_levels)
    y = random_vector(s, rng, positive=True) if dominated else None
    if dominated:
        base = model.LatticeVector({p: y[p] * Fraction(rng.randint(0, 4), 4) for p in s.free})
    else:
        base = random_vector(s, rng)
    x = extension.restrict_levels(s, model.expand(s, base), lo, hi)
    return x, y


def verify_extension(s, seed=0, n_problems=100, n_bumps=50):
    _require_points(s)
    rng = random.Random(seed)
    rep = VerificationReport("extension")
    bound_fail = consist_fail = agree_fail = dom_fail = None
    for _ in range(n_problems):
        x, _ = random_partial(s, rng)
        out = extension.extend_range(s, x)
        if not model.check_consistent(s, out):
            consist_fail = consist_fail or dict(x)
        if any(out[p] != v for p, v in x.items()):
            agree_fail = agree_fail or dict(x)
        if not extension.check_sup_bounds(s, x, out):
            bound_fail = bound_fail or dict(x)
        xd, y = random_partial(s, rng, dominated=True)
        outd = extension.extend_range(s, xd, dominator=y)
        ey = model.expand(s, y)
        if not (model.check_consistent(s, outd) and all(0 <= outd[p] <= ey[p] for p in outd)):
            dom_fail = dom_fail or dict(xd)
    rep.add("ext-consistent", "extensions are consistent", consist_fail is None, input=consist_fail)
    rep.add("ext-agree", "extensions agree on the given levels", agree_fail is None, input=agree_fail)
    rep.add("ext-sup-bound", "level-wise sup bound off the given range",
            bound_fail is None, input=bound_fail)
    rep.add("ext-dominated", "dominated extension stays in [0, y]", dom_fail is None, input=dom_fail)
    full = model.expand(s, random_vector(s, rng))
    whole = extension.partial_from(s, dict(full), 1, s.n_levels)
    rep.add("ext-projection", "extending a full function returns it",
            extension.extend_range(s, whole) == full)
    bump_fail = None
    tried = 0
    for _ in range(n_bumps):
        cfg = random_bump_config(s, rng)
        if cfg is None:
            break
        tried += 1
        out = extension.two_point_bump(s, *cfg)
        failed = extension.bump_conclusions(s, out, *cfg)
        if failed and bump_fail is None:
            bump_fail = {"config": [cfg[0], cfg[1]], "failed": failed}
    rep.add("bump", "two-point bump conclusions (1)-(6)", bump_fail is None,
            configurations=tried, failure=bump_fail)
    return rep


def random_bump_config(s, rng):
    free = list(s.free)
    if len(free) < 2:
        return None
    t, s2 = rng.sample(free, 2)
    if s.level_of(t) > s.level_of(s2):
        t, s2 = s2, t
    m, n = s.level_of(t), s.level_of(s2)
    rest_m = [p for p in free if s.level_of(p) == m and p not in (t, s2)]
    rest_n = [p for p in free if s.level_of(p) == n and p not in (t, s2)]
    U = {t} | {p for p in rest_m if rng.random() < 0.5}
    V = {s2} | {p for p in rest_n if p not in U and rng.random() < 0.5}
    alpha = Fraction(rng.randint(0, 8), rng.choice((1, 2, 3)))
    beta = Fraction(rng.randint(0, 8), rng.choice((1, 2, 3)))
    return t, s2, U, V, alpha, beta


def verify_transform(models=None, C=Fraction(3, 2), seed=0, n_models=20):
    rng = random.Random(seed)
    rep = VerificationReport("transform")
    if models is None:
        models = [random_sublattice_model(rng) for _ in range(n_models)]
    dist_fail = valid_fail = det_fail = join_fail = None
    for m in models:
        try:
            s, report = transform.benyamini_transform(m, C)
        except (ValueError, AssertionError) as exc:
            valid_fail = valid_fail or str(exc)
            continue
        for g, r in zip(m.generators, report.ratios):
            if r is not None and not 1 <= r <= C:
                dist_fail = dist_fail or {"ratio": r}
        if not transform.separates_levels(s, report.images):
            valid_fail = valid_fail or "separation"
        s2, report2 = transform.benyamini_transform(m, C)
        if s2 != s or report2.ratios != report.ratios:
            det_fail = det_fail or "rerun differs"
        gens = m.generators
        for g1 in gens:
            for g2 in gens:
                j = {t: max(g1[t], g2[t]) for t in m.H}
                if report.phi_full(j) != _join_full(report.phi_full(g1), report.phi_full(g2)):
                    join_fail = join_fail or "join"
    rep.add("distortion", "distortion ratio in [1, C]", dist_fail is None, failure=dist_fail)
    rep.add("valid-output", "output is a separated, power-of-C linked structure",
            valid_fail is None, failure=valid_fail)
    rep.add("deterministic", "pipeline is deterministic", det_fail is None)
    rep.add("join-compatible", "point map is a lattice homomorphism", join_fail is None)
    return rep


def _join_full(f, g):
    return model.FullFunction({p: max(v, g[p]) for p, v in f.items()})


def verify_renorm(s, consts, seed=0, n_vectors=1000, scheme=None, rank=renorm.pair_rank):
    _require_points(s)
    rng = random.Random(seed)
    rep = VerificationReport("renorm")
    scheme = scheme or renorm.assign_weights(s, consts)
    spec = renorm.build_renorm(s, scheme, consts, rank=rank)
    n_atoms = len(model.atoms(s))
    c = consts.c
    upper = c if n_atoms <= 1 else c * c
    bad = None
    for _ in range(n_vectors):
        x = random_vector(s, rng)
        b, r = model.base_norm(s, x), spec.norm(x)
        if not b <= r <= upper * b:
            bad = {"vector": dict(x), "base": b, "renorm": r}
            break
    rep.add("sandwich", "base <= renorm <= c^2 base (c when at most one atom)",
            bad is None, bound=upper, failure=bad)
    if n_atoms <= 1:
        bad = None
        for _ in range(n_vectors):
            x, y = random_vector(s, rng, positive=True), random_vector(s, rng, positive=True)
            if spec.norm(x.join(y)) != max(spec.norm(x), spec.norm(y)):
                bad = {"x": dict(x), "y": dict(y)}
                break
        rep.add("am-norm", "renorm is an AM-norm when at most one atom", bad is None, failure=bad)
    else:
        w = am_counterexample(s, spec)
        rep.add("not-am", "renorm with two or more atoms is not an AM-norm", w is not None,
                witness=w)
    ranks = range(1, 51)
    props = renorm.check_octagon_properties(c, ranks, gammas=(Fraction(101, 100), Fraction(11, 10)))
    for key in ("N1", "N2", "N3N4", "N5"):
        rep.add(f"octagon-{key}", f"octagon property {key}", props[key]["ok"])
    rep.add("octagon-vertices", "gauge equals 1 exactly on the polygon boundary",
            octagon_gauge_matches_polygon(c, range(1, 21)))
    atoms_ = [a for a, _ in model.atoms(s)]
    if n_atoms >= 2 and spec.kind == renorm.OCTAGON:
        ok = True
        for i in range(1, n_atoms + 1):
            for j in range(i + 1, n_atoms + 1):
                ai, aj = atoms_[i - 1], atoms_[j - 1]
                oc = renorm.OctagonParams(c, rank(i, j))
                for al, be in ((1, 1), (1, -2), (Fraction(1, 3), 1), (2, Fraction(3, 7))):
                    x = {p: Fraction(0) for p in s.free}
                    x[ai] = al / scheme.mu(ai)
                    x[aj] = be / scheme.mu(aj)
                    ok &= spec.norm(x) == renorm.octagon_norm(al, be, oc)
        rep.add("two-atom-section", "renorm on an atom pair span is the octagon norm", ok)
    return rep


def am_counterexample(s, spec):
    """Positive x, y with norm(x v y) > max(norm x, norm y), or None."""
    atoms_ = [a for a, _ in model.atoms(s)]
    if len(atoms_) < 2:
        return None
    a, b = atoms_[0], atoms_[1]
    x = {p: Fraction(0) for p in s.free}
    y = dict(x)
    x[a] = 1 / spec.mu[a]
    y[b] = 1 / spec.mu[b]
    j = {p: max(x[p], y[p]) for p in x}
    if spec.norm(j) > max(spec.norm(x), spec.norm(y)):
        return {"x": x, "y": y, "join_norm": spec.norm(j),
                "max_norm": max(spec.norm(x), spec.norm(y))}
    return None


def ray_boundary_scale(vertices, d):
    """The scale at which the ray ``s * d`` meets the polygon boundary.

    Intersects the ray with every edge of the convex polygon given by its
    vertices in cyclic order; independent of the gauge formula.
    """
    dx, dy = d
    best = None
    k = len(vertices)
    for i in range(k):
        (x1, y1), (x2, y2) = vertices[i], vertices[(i + 1) % k]
        ex, ey = x2 - x1, y2 - y1
        det = dx * (-ey) - dy * (-ex)
        if det == 0:
            continue
        # s*d = p1 + u*e
        sc = (x1 * (-ey) - y1 * (-ex)) / det
        u = (dx * y1 - dy * x1) / det
        if sc > 0 and 0 <= u <= 1:
            best = sc if best is None else min(best, sc)
    return best


def octagon_gauge_matches_polygon(c, ranks, n_rays=24):
    for r in ranks:
        p = renorm.OctagonParams(c, r)
        verts = p.vertices()
        if any(renorm.octagon_norm(x, y, p) != 1 for x, y in verts):
            return False
        for k in range(n_rays):
            # rational directions spread around the circle
            ang = 2 * math.pi * (k + Fraction(1, 3)) / n_rays
            d = (Fraction(math.cos(ang)).limit_denominator(97), Fraction(math.sin(ang)).limit_denominator(97))
            sc = ray_boundary_scale(verts, d)
            if sc is None or renorm.octagon_norm(d[0] * sc, d[1] * sc, p) != 1:
                return False
            inner = renorm.octagon_norm(d[0] * sc * Fraction(99, 100), d[1] * sc * Fraction(99, 100), p)
            if inner == 1:
                return False
    return True


def verify_dual(s, consts, seed=0, n_functionals=30):
    _require_points(s)
    rng = random.Random(seed)
    rep = VerificationReport("dual")
    scheme = renorm.assign_weights(s, consts)
    spec = renorm.build_renorm(s, scheme, consts)
    bad = [t for t in s.free
           if dual.dual_norm_renorm(spec, dual.point_mass(t, spec.mu[t])) != 1]
    rep.add("point-mass", "normalized point masses have dual norm 1", not bad, failures=bad)
    act_fail = tv_fail = lp_fail = order_fail = pos_fail = None
    for _ in range(n_functionals):
        f = random_functional(s, rng)
        try:
            red = dual.reduce_measure(s, f, rng=rng)
        except AssertionError as exc:
            act_fail = act_fail or str(exc)
            continue
        if dual.total_variation(red) > dual.total_variation(f):
            tv_fail = tv_fail or dict(f)
        if dual.reduce_measure(s, f, order=dual.ROOT_FIRST, check=False) != red:
            order_fail = order_fail or dict(f)
        l1 = dual.dual_norm_base(s, red, check=False)
        if l1 != dual.operator_norm(renorm.base_norm_spec(s), red):
            lp_fail = lp_fail or dict(f)
        if dual.is_positive_functional(red):
            if any(dual.action(s, red, random_vector(s, rng, positive=True)) < 0 for _ in range(5)):
                pos_fail = pos_fail or dict(f)
        elif dual.negativity_witness(s, red) is None:
            pos_fail = pos_fail or dict(f)
    rep.add("reduce-action", "reduction preserves the action", act_fail is None, failure=act_fail)
    rep.add("reduce-tv", "reduction does not increase total variation", tv_fail is None)
    rep.add("reduce-order", "reduction is order independent", order_fail is None)
    rep.add("l1-lp", "l1 norm equals the LP operator norm", lp_fail is None)
    rep.add("positivity", "positive measures are exactly the positive functionals", pos_fail is None)
    return rep


def random_functional(s, rng, density=0.6):
    vals = {}
    for p in s.points:
        if rng.random() < density:
            vals[p] = Fraction(rng.randint(-6, 6), rng.choice((1, 2, 3, 5)))
    return dual.Functional(vals)


def verify_isometry(spec, s=None, seed=0, expect=None, max_points=8, workers=1):
    """Enumerate the isometry group of ``spec`` and check its structure.

    ``expect`` is "trivial", "nontrivial" or None; the report records the
    group size and whether it matches the expectation.
    """
    rng = random.Random(seed)
    rep = VerificationReport("isometry")
    group = isometry.enumerate_isometries(spec, max_points=max_points, workers=workers)
    size = len(group)
    rep.add("group", "isometry set is a group", isometry.is_group(group, spec.points),
            size=size)
    join_ok = True
    for cand in group:
        for _ in range(20):
            x = model.LatticeVector({p: Fraction(rng.randint(-9, 9), rng.choice((1, 2, 3)))
                                     for p in spec.points})
            y = model.LatticeVector({p: Fraction(rng.randint(-9, 9), rng.choice((1, 2, 3)))
                                     for p in spec.points})
            join_ok &= isometry.preserves_joins(cand, x, y)
    rep.add("preserves-joins", "isometries preserve joins", join_ok)
    if expect is not None:
        trivial = size == 1
        matches = trivial if expect == "trivial" else not trivial
        rep.add("expected-" + expect, f"group expected {expect}", matches, size=size)
    if spec.kind == renorm.WEIGHTED_SUP and s is not None \
            and all(s.cell_of(p).kind == model.ISOLATED for p in s.points):
        rep.add("full-symmetric", "weighted sup group has |K'|! elements",
                size == math.factorial(len(spec.points)), size=size)
    return rep, group


def verify_all(s, consts, seed=0, models=None):
    rep = VerificationReport("all")
    rep.extend(verify_model(s, seed))
    rep.extend(verify_extension(s, seed))
    rep.extend(verify_transform(models, C=s.C, seed=seed))
    rep.extend(verify_renorm(s, consts, seed))
    rep.extend(verify_dual(s, consts, seed))
    if len(s.free) <= 8:
        spec = renorm.build_renorm(s, renorm.assign_weights(s, consts), consts)
        expect = "trivial" if len(model.atoms(s)) >= 2 and len(model.atoms(s)) == len(s.free) else None
        sub, _ = verify_isometry(spec, s, seed, expect=expect)
        rep.extend(sub)
    return rep
