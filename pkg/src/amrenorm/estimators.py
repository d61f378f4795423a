"""scikit-learn style wrappers.

Arrays are numpy object arrays of Fractions so that nothing is rounded.
"""
import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .isometry import enumerate_isometries
from .model import BenyaminiStructure, atoms
from .rational import as_rational
from .renorm import RenormConstants, assign_weights, build_renorm
from .transform import SublatticeModel, benyamini_transform


def check_exact_array(X, n_features=None, nonnegative=False):
    """Validate a 2-D array-like of exact scalars; return an object ndarray of Fractions."""
    arr = np.asarray(X, dtype=object)
    if arr.ndim == 1:
        arr = arr.reshape(1, -1)
    if arr.ndim != 2:
        raise ValueError(f"expected a 2-D array, got {arr.ndim} dimensions")
    if n_features is not None and arr.shape[1] != n_features:
        raise ValueError(f"expected {n_features} features, got {arr.shape[1]}")
    out = np.empty(arr.shape, dtype=object)
    for idx, v in np.ndenumerate(arr):
        if isinstance(v, np.integer):
            v = int(v)
        out[idx] = as_rational(v)
        if nonnegative and out[idx] < 0:
            raise ValueError("negative entry in an array that must be nonnegative")
    return out


class BenyaminiApproximation(TransformerMixin, BaseEstimator):
    """Map a finite sublattice of C(H) onto a Benyamini structure.

    ``fit`` takes the generators as rows (columns are the points of H);
    ``transform`` sends functions on H to their coordinates on the free
    points of the fitted structure.

    Parameters
    ----------
    C : rational or str, default "3/2"
    points : sequence of str, optional
        Names of the columns; defaults to ``h0, h1, ...``.
    """

    def __init__(self, C="3/2", points=None):
        self.C = C
        self.points = points

    def fit(self, X, y=None, relations=()):
        X = check_exact_array(X, nonnegative=True)
        pts = list(self.points) if self.points is not None else [f"h{i}" for i in range(X.shape[1])]
        if len(pts) != X.shape[1]:
            raise ValueError("points must name every column")
        model = SublatticeModel(pts, [dict(zip(pts, row)) for row in X], relations)
        self.model_ = model
        self.structure_, self.report_ = benyamini_transform(model, as_rational(self.C))
        self.free_points_ = self.structure_.free
        self.distortion_ = list(self.report_.ratios)
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X):
        check_is_fitted(self, "report_")
        X = check_exact_array(X, n_features=self.n_features_in_)
        pts = self.model_.H
        rows = []
        for row in X:
            img = self.report_.phi(dict(zip(pts, row)))
            rows.append([img[p] for p in self.free_points_])
        return np.array(rows, dtype=object).reshape(len(rows), len(self.free_points_))


class LatticeRenormer(BaseEstimator):
    """Equivalent lattice norm with no nontrivial lattice isometries.

    ``fit`` takes a :class:`BenyaminiStructure`; ``transform`` returns the
    new norm of each row (rows are coordinates on the free points).

    Parameters
    ----------
    c : rational or str, default "11/10"
        Must satisfy ``1 < c``, ``c**3 < C``.
    seed : int, optional
        Seed for the weight assignment; None gives the canonical one.
    weights : dict, optional
        Explicit weights per free point.
    """

    def __init__(self, c="11/10", seed=None, weights=None):
        self.c = c
        self.seed = seed
        self.weights = weights

    def fit(self, structure, y=None):
        if not isinstance(structure, BenyaminiStructure):
            raise TypeError("fit expects a BenyaminiStructure")
        self.constants_ = RenormConstants(structure.C, as_rational(self.c))
        self.scheme_ = assign_weights(structure, self.constants_, seed=self.seed,
                                      overrides=self.weights)
        self.norm_ = build_renorm(structure, self.scheme_, self.constants_)
        self.atoms_ = [a for a, _ in atoms(structure)]
        self.structure_ = structure
        self.n_features_in_ = len(structure.free)
        return self

    def transform(self, X):
        check_is_fitted(self, "norm_")
        X = check_exact_array(X, n_features=self.n_features_in_)
        pts = self.structure_.free
        return np.array([[self.norm_.norm(dict(zip(pts, row)))] for row in X], dtype=object)

    def isometries(self, max_points=8):
        check_is_fitted(self, "norm_")
        return enumerate_isometries(self.norm_, max_points=max_points)
