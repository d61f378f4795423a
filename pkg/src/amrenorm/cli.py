"""Command-line interface. All input and output is JSON with rationals as strings."""
import argparse
import sys

from . import io, model, renorm, verify
from .dual import (dual_norm_base, dual_norm_renorm, negativity_witness, reduce_measure,
                   total_variation)
from .generate import S0_WEIGHTS, GenerationError, gen_structure, s0_structure
from .isometry import SearchBoundError, enumerate_isometries
from .rational import as_rational, format_rational
from .transform import TransformError, benyamini_transform, sublattice_norm_spec

EXIT_OK = 0
EXIT_NONTRIVIAL = 2
EXIT_INVARIANT = 3
EXIT_INPUT = 4

NORM_CHOICES = ("renorm", "weighted-sup", "base")


class InputError(ValueError):
    pass


def _rational(text):
    try:
        return as_rational(text)
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}") from exc


def _emit(obj, path):
    text = io.dumps(obj)
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _load_structure(args):
    if getattr(args, "fixture", None) == "s0":
        return s0_structure(args.C if args.C is not None else as_rational("3/2"))
    path = getattr(args, "input", None) or getattr(args, "structure", None)
    if path is None:
        raise InputError("a structure file (or --fixture) is required")
    return io.structure_from_json(io.load(path))


def _weights(args, s):
    if getattr(args, "weights", None):
        return {k: as_rational(v) for k, v in io.load(args.weights).items()}
    if getattr(args, "fixture", None) == "s0":
        return dict(S0_WEIGHTS)
    return None


def _norm_for(s, args):
    consts = renorm.RenormConstants(s.C, args.c)
    if args.norm == "base":
        return renorm.base_norm_spec(s), consts
    scheme = renorm.assign_weights(s, consts, seed=args.weight_seed, overrides=_weights(args, s))
    if args.norm == "weighted-sup":
        return renorm.weighted_sup_spec(s, scheme), consts
    return renorm.build_renorm(s, scheme, consts), consts


def cmd_gen(args):
    if args.fixture == "s0":
        s = s0_structure(args.C or as_rational("3/2"))
    else:
        s = gen_structure(levels=args.levels, cells=args.cells, link_density=args.link_density,
                          perfect_fraction=args.perfect_fraction, seed=args.seed,
                          C=args.C or as_rational("3/2"))
    _emit(io.structure_to_json(s), args.output)
    return EXIT_OK


def cmd_transform(args):
    m = io.model_from_json(io.load(args.model))
    C = args.C or as_rational("3/2")
    s, report = benyamini_transform(m, C)
    _emit(io.structure_to_json(s), args.output)
    if args.report:
        _emit(io.report_to_json(report), args.report)
    return EXIT_OK


def cmd_renorm(args):
    s = _load_structure(args)
    spec, _ = _norm_for(s, args)
    _emit(io.normspec_to_json(spec), args.output)
    return EXIT_OK


def _group_exit(group):
    return EXIT_OK if len(group) == 1 else EXIT_NONTRIVIAL


def cmd_isometries(args):
    if args.norm_file:
        spec = io.normspec_from_json(io.load(args.norm_file))
    else:
        s = _load_structure(args)
        spec, _ = _norm_for(s, args)
    group = enumerate_isometries(spec, max_points=args.max_points, workers=args.workers)
    _emit(io.isometries_to_json(group), args.output)
    return _group_exit(group)


def cmd_dual(args):
    s = _load_structure(args)
    f = io.functional_from_json(io.load(args.functional))
    red = reduce_measure(s, f)
    out = {
        "reduced": io.functional_to_json(red),
        "total_variation": format_rational(total_variation(f)),
        "base_dual_norm": format_rational(dual_norm_base(s, red)),
        "positive": all(v >= 0 for v in red.values()),
    }
    if not out["positive"]:
        w = negativity_witness(s, red)
        out["negativity_witness"] = None if w is None else io.vector_to_json(w)
    if args.c is not None:
        spec, _ = _norm_for(s, args)
        out["renorm_dual_norm"] = format_rational(dual_norm_renorm(spec, red))
    _emit(out, args.output)
    return EXIT_OK


def cmd_verify(args):
    s = _load_structure(args) if (args.input or args.fixture) else None
    models = [io.model_from_json(io.load(args.model))] if args.model else None
    suite = args.suite
    if s is None and suite != "transform":
        s = gen_structure(levels=2, cells=2, seed=args.seed, C=args.C or as_rational("3/2"))
    if s is not None and not s.points:
        raise verify.DegenerateInput("degenerate: structure has no points")
    C = s.C if s is not None else (args.C or as_rational("3/2"))
    consts = renorm.RenormConstants(C, args.c) if s is not None else None
    scheme = None
    if s is not None:
        scheme = renorm.assign_weights(s, consts, seed=args.weight_seed, overrides=_weights(args, s))
    if suite == "model":
        rep = verify.verify_model(s, args.seed)
    elif suite == "extension":
        rep = verify.verify_extension(s, args.seed)
    elif suite == "transform":
        rep = verify.verify_transform(models, C=C, seed=args.seed)
    elif suite == "renorm":
        rep = verify.verify_renorm(s, consts, args.seed, scheme=scheme)
    elif suite == "dual":
        rep = verify.verify_dual(s, consts, args.seed)
    elif suite == "isometry":
        spec, _ = _norm_for(s, args)
        rep, _ = verify.verify_isometry(spec, s, args.seed, expect=_expectation(s, args.norm),
                                        max_points=args.max_points, workers=args.workers)
    else:
        rep = verify.verify_all(s, consts, args.seed, models=models)
    _emit(rep.to_json(), args.output)
    return EXIT_OK if rep.ok else EXIT_INVARIANT


def _expectation(s, norm):
    isolated = all(s.cell_of(p).kind == model.ISOLATED for p in s.points)
    if norm == "renorm" and isolated and len(s.free) >= 2:
        return "trivial"
    if norm in ("weighted-sup", "base") and isolated and len(s.free) >= 2:
        return "nontrivial"
    return None


def cmd_report(args):
    """Isometry groups of a sublattice before and after the transform."""
    m = io.model_from_json(io.load(args.model))
    C = args.C or as_rational("3/2")
    s, report = benyamini_transform(m, C)
    before = sublattice_norm_spec(m)
    after = renorm.base_norm_spec(s)
    g_before = enumerate_isometries(before, max_points=args.max_points, workers=args.workers)
    g_after = enumerate_isometries(after, max_points=args.max_points, workers=args.workers)
    out = {
        "before": {"dim": len(before.points), "group_size": len(g_before)},
        "after": {"dim": len(after.points), "group_size": len(g_after)},
        "same_size": len(g_before) == len(g_after),
        "ratios": [None if r is None else format_rational(r) for r in report.ratios],
    }
    _emit(out, args.output)
    return EXIT_OK


def build_parser():
    ap = argparse.ArgumentParser(prog="amrenorm", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, c=False, search=False):
        p.add_argument("--C", type=_rational, default=None, help="level constant, 1 < C < 2")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("-o", "--output", default=None, help="output file (default stdout)")
        if c:
            p.add_argument("--c", type=_rational, default=as_rational("11/10"),
                           help="renorming constant, c**3 < C")
            p.add_argument("--norm", choices=NORM_CHOICES, default="renorm")
            p.add_argument("--weights", default=None, help="JSON map free point -> weight")
            p.add_argument("--weight-seed", type=int, default=None,
                           help="randomize the weight order (default canonical)")
            p.add_argument("--fixture", choices=("s0",), default=None)
        if search:
            p.add_argument("--max-points", type=int, default=8)
            p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("gen", help="generate a random structure")
    common(p)
    p.add_argument("--levels", type=int, default=2)
    p.add_argument("--cells", type=int, default=2)
    p.add_argument("--link-density", type=float, default=0.5)
    p.add_argument("--perfect-fraction", type=float, default=0.0)
    p.add_argument("--fixture", choices=("s0",), default=None)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("transform", help="approximate a sublattice by a structure")
    common(p)
    p.add_argument("model")
    p.add_argument("--report", default=None, help="write the transform report here")
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("renorm", help="build a norm spec for a structure")
    common(p, c=True)
    p.add_argument("structure", nargs="?")
    p.set_defaults(func=cmd_renorm)

    p = sub.add_parser("isometries", help="enumerate lattice isometries")
    common(p, c=True, search=True)
    p.add_argument("structure", nargs="?")
    p.add_argument("--norm-file", default=None, help="norm spec JSON instead of a structure")
    p.set_defaults(func=cmd_isometries)

    p = sub.add_parser("dual", help="reduce a functional and compute dual norms")
    common(p, c=True)
    p.set_defaults(c=None)
    p.add_argument("structure", nargs="?")
    p.add_argument("functional")
    p.set_defaults(func=cmd_dual)

    p = sub.add_parser("verify", help="run an invariant suite")
    common(p, c=True, search=True)
    p.add_argument("--suite", choices=verify.SUITES + ("all",), default="all")
    p.add_argument("--input", default=None, help="structure JSON")
    p.add_argument("--model", default=None, help="sublattice model JSON for the transform suite")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("report", help="compare isometry groups before and after the transform")
    common(p, search=True)
    p.add_argument("model")
    p.set_defaults(func=cmd_report)
    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except AssertionError as exc:
        print(f"invariant failure: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except (io.FormatError, InputError, model.StructureError, model.LinkingError,
            renorm.RenormError, TransformError, GenerationError, SearchBoundError,
            verify.DegenerateInput, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
