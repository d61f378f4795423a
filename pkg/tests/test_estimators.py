from fractions import Fraction as F

import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from amrenorm.estimators import BenyaminiApproximation, LatticeRenormer, check_exact_array


def test_check_exact_array():
    arr = check_exact_array([[1, "1/2"], [np.int64(3), F(2, 3)]])
    assert arr.dtype == object and arr[0, 1] == F(1, 2) and arr[1, 0] == 3
    with pytest.raises(TypeError):
        check_exact_array([[0.5]])
    with pytest.raises(ValueError):
        check_exact_array([[-1]], nonnegative=True)
    with pytest.raises(ValueError):
        check_exact_array([[1, 2]], n_features=3)


def test_benyamini_approximation():
    X = [[1, "1/2", 0], ["1/3", "1/6", 1]]
    est = BenyaminiApproximation(C="3/2", points=["a", "b", "c"]).fit(X)
    assert all(1 <= r <= F(3, 2) for r in est.distortion_)
    Z = est.transform(X)
    assert Z.shape == (2, len(est.free_points_))
    assert clone(est).get_params() == est.get_params()


def test_not_fitted():
    with pytest.raises(NotFittedError):
        BenyaminiApproximation().transform([[1]])


def test_lattice_renormer(s0):
    est = LatticeRenormer(c="11/10").fit(s0)
    out = est.transform([[F(20, 21), F(40, 41)], [1, 0]])
    assert out.shape == (2, 1)
    assert out[1, 0] == F(21, 20)
    assert len(est.isometries()) == 1
    assert est.atoms_ == ["p", "q"]
    with pytest.raises(TypeError):
        LatticeRenormer().fit([[1]])
