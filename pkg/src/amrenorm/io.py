"""JSON wire formats. Rationals are always strings ``"num/den"``."""
import json

from .dual import Functional
from .extension import PartialFunction
from .isometry import IsometryCandidate
from .model import BenyaminiStructure, Cell, LatticeVector, Link
from .rational import as_rational, format_rational
from .renorm import NormSpec
from .transform import SublatticeModel


class FormatError(ValueError):
    pass


def _r(v):
    return format_rational(v)


def _coords(mapping):
    return {k: _r(v) for k, v in mapping.items()}


def structure_to_json(s):
    return {
        "C": _r(s.C),
        "levels": [
            {"index": n, "cells": [{"id": c.id, "kind": c.kind, "points": list(c.points)}
                                   for c in level]}
            for n, level in enumerate(s.levels, start=1)
        ],
        "links": [
            {"lower_level": ln.lower, "upper_level": ln.upper,
             "pairs": [list(p) for p in ln.pairs]}
            for ln in s.links
        ],
    }


def structure_from_json(obj):
    try:
        levels = sorted(obj["levels"], key=lambda lv: lv["index"])
        if [lv["index"] for lv in levels] != list(range(1, len(levels) + 1)):
            raise FormatError("level indices must be 1..L")
        cells = [[Cell(c["id"], c["kind"], c["points"]) for c in lv["cells"]] for lv in levels]
        links = [Link(ln["lower_level"], ln["upper_level"], [tuple(p) for p in ln["pairs"]])
                 for ln in obj.get("links", [])]
        return BenyaminiStructure(as_rational(obj["C"]), cells, links)
    except (KeyError, TypeError) as exc:
        raise FormatError(f"malformed structure: {exc}") from exc


def vector_to_json(x):
    return {"coords": _coords(x)}


def vector_from_json(obj):
    try:
        return LatticeVector({k: as_rational(v) for k, v in obj["coords"].items()})
    except (KeyError, TypeError, AttributeError) as exc:
        raise FormatError(f"malformed vector: {exc}") from exc


def functional_to_json(f):
    return {"coords": _coords(f)}


def functional_from_json(obj):
    try:
        return Functional({k: as_rational(v) for k, v in obj["coords"].items()})
    except (KeyError, TypeError, AttributeError) as exc:
        raise FormatError(f"malformed functional: {exc}") from exc


def partial_to_json(x):
    return {"levels": [x.lo, x.hi], "coords": _coords(x)}


def partial_from_json(obj):
    try:
        lo, hi = obj["levels"]
        return PartialFunction({k: as_rational(v) for k, v in obj["coords"].items()}, lo, hi)
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"malformed partial function: {exc}") from exc


def normspec_to_json(spec):
    return {
        "kind": spec.kind,
        "points": list(spec.points),
        "mu": _coords(spec.mu),
        "functionals": [_coords(f) for f in spec.as_dicts()],
    }


def normspec_from_json(obj):
    try:
        if isinstance(obj, list):
            pts = []
            for f in obj:
                pts.extend(p for p in f if p not in pts)
            return NormSpec(pts, [{k: as_rational(v) for k, v in f.items()} for f in obj])
        mu = {k: as_rational(v) for k, v in obj["mu"].items()} if "mu" in obj else None
        return NormSpec(obj["points"],
                        [{k: as_rational(v) for k, v in f.items()} for f in obj["functionals"]],
                        mu=mu, kind=obj.get("kind", "base"))
    except (KeyError, TypeError, AttributeError) as exc:
        raise FormatError(f"malformed norm spec: {exc}") from exc


def model_to_json(m):
    return {
        "H": list(m.H),
        "generators": [_coords(g) for g in m.generators],
        "relations": [[t, s, _r(lam)] for t, s, lam in m.relations],
    }


def model_from_json(obj):
    try:
        return SublatticeModel(obj["H"],
                               [{k: as_rational(v) for k, v in g.items()} for g in obj["generators"]],
                               [(t, s, as_rational(lam)) for t, s, lam in obj.get("relations", [])])
    except (KeyError, TypeError) as exc:
        raise FormatError(f"malformed sublattice model: {exc}") from exc


def report_to_json(report):
    return {
        "point_map": {t: list(v) for t, v in report.point_map.items()},
        "psi": _coords(report.psi),
        "ratios": [None if r is None else _r(r) for r in report.ratios],
        "images": [_coords(img) for img in report.images],
    }


def isometries_to_json(group):
    return [{"sigma": dict(c.sigma), "weights": _coords(dict(c.weights))} for c in group]


def isometries_from_json(obj):
    return [IsometryCandidate(tuple(c["sigma"].items()),
                              tuple((k, as_rational(v)) for k, v in c["weights"].items()))
            for c in obj]


def dumps(obj):
    return json.dumps(obj, indent=2) + "\n"


def load(path):
    with open(path) as fh:
        try:
            return json.load(fh)
        except json.JSONDecodeError as exc:
            raise FormatError(f"{path}: invalid JSON ({exc})") from exc
