"""Exact renormings of finite AM-space models with trivial lattice-isometry groups."""
from .dual import (Functional, action, dual_norm_base, dual_norm_renorm, operator_norm,
                   reduce_measure)
from .extension import PartialFunction, extend_down, extend_range, extend_up, two_point_bump
from .isometry import IsometryCandidate, enumerate_isometries, forced_weights, norms_equal
from .model import (BenyaminiStructure, Cell, FullFunction, LatticeVector, Link, atoms,
                    base_norm, check_consistent, detect_linking, expand, free_points)
from .rational import Fraction, as_rational
from .renorm import (NormSpec, OctagonParams, RenormConstants, WeightScheme, assign_weights,
                     build_renorm, octagon_norm, pair_rank, recover_base_weight)
from .transform import SublatticeModel, benyamini_transform

__version__ = "0.1.0"
